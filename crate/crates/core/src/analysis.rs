//! Error metrics against known marginals, the interpolation error bound and
//! convergence studies over schedules of point sets.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::distributions::ProductDistribution;
use crate::error::{Error, Result};
use crate::evaluation::evaluate;
use crate::format::g17;
use crate::korobov::{self, korobov_search};
use crate::marginal::{approximate, equidistant, Algorithm, MarginalPoly, PartitionSmoother};
use crate::pointset::{
    grid_points, korobov_lattice, maximal_rank_lattice, projection_profile, random_points, rank1_lattice, PointSet,
    PointSetKind,
};

/// Default number of equidistant evaluation points on `[0, 1]`.
pub const DEFAULT_EVAL_GRID: usize = 1001;

/// Slack allowed when checking that errors do not grow along a schedule.
pub const TREND_SLACK: f64 = 0.10;

/// Errors below this are treated as exact when checking trends.
const TREND_FLOOR: f64 = 1e-12;

/// Error of one fitted marginal, measured on an equidistant grid.
///
/// The grid maximum is a lower bound on the true supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// Zero-based; written one-based.
    #[serde(with = "one_based")]
    pub axis: usize,
    pub sup_error: f64,
    pub l2_error: f64,
    pub grid_size: usize,
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(axis: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*axis as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = usize::deserialize(d)?;
        v.checked_sub(1)
            .ok_or_else(|| serde::de::Error::custom("axis is one-based"))
    }
}

/// Max and RMS of `|poly - truth|` over `grid_size` equidistant points
/// including both endpoints.
pub fn sup_error(poly: &MarginalPoly, truth: &dyn Fn(f64) -> f64, grid_size: usize) -> Result<ErrorReport> {
    if grid_size < 2 {
        return Err(Error::Argument(format!("evaluation grid needs >= 2 points, got {grid_size}")));
    }
    let (mut sup, mut sq) = (0.0f64, 0.0f64);
    for x in equidistant(grid_size) {
        let d = (poly.eval(x) - truth(x)).abs();
        sup = sup.max(d);
        sq += d * d;
    }
    Ok(ErrorReport {
        axis: poly.axis(),
        sup_error: sup,
        l2_error: (sq / grid_size as f64).sqrt(),
        grid_size,
    })
}

/// `C / (4 n (n-1)^n)`: the bound on equidistant interpolation error with
/// `n` nodes when `|f^(n)| <= C`.
pub fn theorem_bound(c: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Argument(format!("bound needs n >= 2 nodes, got {n}")));
    }
    if !(c >= 0.0) {
        return Err(Error::Argument(format!("derivative bound {c} must be non-negative")));
    }
    let nf = n as f64;
    Ok(c / (4.0 * nf * (nf - 1.0).powi(n as i32)))
}

/// A point-set family member, built on demand for a given dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSetSpec {
    Grid {
        n: usize,
    },
    Rank1 {
        n_points: u64,
        z: Vec<u64>,
    },
    /// `alpha` of `None` runs the multiplier search.
    Korobov {
        n_points: u64,
        alpha: Option<u64>,
    },
    /// `z` of `None` uses a searched Korobov generator for `l` (all ones when
    /// `l < 4`).
    MaximalRank {
        l: u64,
        r: u64,
        z: Option<Vec<u64>>,
    },
    Random {
        n_points: usize,
        seed: u64,
    },
}

impl PointSetSpec {
    pub fn build(&self, s: usize) -> Result<PointSet> {
        match self {
            PointSetSpec::Grid { n } => grid_points(*n, s),
            PointSetSpec::Rank1 { n_points, z } => {
                if z.len() != s {
                    return Err(Error::Argument(format!("generator has {} components, need {s}", z.len())));
                }
                rank1_lattice(*n_points, z)
            }
            PointSetSpec::Korobov { n_points, alpha } => {
                let alpha = match alpha {
                    Some(a) => *a,
                    None => korobov_search(*n_points, s)?,
                };
                korobov_lattice(*n_points, alpha, s)
            }
            PointSetSpec::MaximalRank { l, r, z } => {
                let z = match z {
                    Some(z) if z.len() != s => {
                        return Err(Error::Argument(format!("generator has {} components, need {s}", z.len())))
                    }
                    Some(z) => z.clone(),
                    None if *l >= 4 => korobov::generator(*l, korobov_search(*l, s)?, s),
                    None => vec![1; s],
                };
                maximal_rank_lattice(*l, *r, &z)
            }
            PointSetSpec::Random { n_points, seed } => random_points(*n_points, s, *seed),
        }
    }

    /// Same family with a different seed; deterministic families are
    /// returned unchanged.
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            PointSetSpec::Random { n_points, .. } => PointSetSpec::Random {
                n_points: *n_points,
                seed,
            },
            other => other.clone(),
        }
    }

    /// This description with any searched parameters filled in from the built set.
    pub fn resolved(&self, ps: &PointSet) -> Self {
        match (self, ps.kind()) {
            (PointSetSpec::Korobov { n_points, .. }, PointSetKind::Korobov { alpha, .. }) => PointSetSpec::Korobov {
                n_points: *n_points,
                alpha: Some(*alpha),
            },
            (PointSetSpec::MaximalRank { l, r, .. }, PointSetKind::MaximalRank { z, .. }) => PointSetSpec::MaximalRank {
                l: *l,
                r: *r,
                z: Some(z.clone()),
            },
            (other, _) => other.clone(),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, PointSetSpec::Random { .. })
    }
}

/// One schedule entry: a point set and the algorithm run on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub points: PointSetSpec,
    pub algorithm: Algorithm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyOptions {
    pub eval_grid: usize,
    /// Seeds averaged over for random point sets. Empty means the seed
    /// stored in each entry.
    pub seeds: Vec<u64>,
    pub threads: Option<usize>,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            eval_grid: DEFAULT_EVAL_GRID,
            seeds: Vec::new(),
            threads: None,
        }
    }
}

/// Per-axis error of one schedule row. For random point sets the errors are
/// means over seeds and `*_sd` holds the sample standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisError {
    #[serde(flatten)]
    pub report: ErrorReport,
    pub sup_error_sd: Option<f64>,
    pub l2_error_sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub points: PointSetSpec,
    pub kind: String,
    /// Number of points `N`.
    pub n_points: usize,
    /// Polynomial nodes per axis: distinct abscissae for Algorithm I,
    /// partitions for Algorithm II.
    pub n: usize,
    /// Points per node: the common multiplicity for Algorithm I, `N / n`
    /// rounded down for Algorithm II.
    pub m: usize,
    pub algorithm: String,
    pub seeds: usize,
    pub axes: Vec<AxisError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Sorted by `n_points`; ties keep schedule order.
    pub rows: Vec<ReportRow>,
    /// Per axis: whether `err[i+1] <= (1 + TREND_SLACK) err[i]` holds for
    /// every consecutive pair of rows.
    pub trend_ok: Vec<bool>,
}

impl ConvergenceReport {
    fn from_rows(mut rows: Vec<ReportRow>) -> Self {
        rows.sort_by_key(|r| r.n_points);
        let s = rows.first().map_or(0, |r| r.axes.len());
        let trend_ok = (0..s)
            .map(|j| {
                rows.windows(2).all(|w| {
                    let (a, b) = (w[0].axes[j].report.sup_error, w[1].axes[j].report.sup_error);
                    b <= (1.0 + TREND_SLACK) * a || b <= TREND_FLOOR
                })
            })
            .collect();
        Self { rows, trend_ok }
    }

    pub fn trend_holds(&self) -> bool {
        self.trend_ok.iter().all(|&t| t)
    }

    /// `sup_error` of every row for one axis, in row order.
    pub fn sup_errors(&self, axis: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.axes[axis].report.sup_error).collect()
    }

    /// `sup_error` of every axis, one vector per row.
    pub fn sup_errors_all(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.axes.iter().map(|a| a.report.sup_error).collect()).collect()
    }

    /// One line per (row, axis). Axes are one-based; standard deviations are
    /// empty for deterministic rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "kind,N,n,m,axis,sup_error,l2_error,sup_error_sd,l2_error_sd")?;
        let opt = |v: Option<f64>| v.map(g17).unwrap_or_default();
        for row in &self.rows {
            for a in &row.axes {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{}",
                    row.kind,
                    row.n_points,
                    row.n,
                    row.m,
                    a.report.axis + 1,
                    g17(a.report.sup_error),
                    g17(a.report.l2_error),
                    opt(a.sup_error_sd),
                    opt(a.l2_error_sd),
                )?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

struct Run {
    spec: PointSetSpec,
    n_points: usize,
    n: usize,
    m: usize,
    used_alg_i: bool,
    errors: Vec<ErrorReport>,
}

fn run_once(dist: &ProductDistribution, spec: &PointSetSpec, algorithm: Algorithm, opts: &StudyOptions) -> Result<Run> {
    let ps = &spec.build(dist.dim())?;
    let es = evaluate(dist.joint_density(), ps, opts.threads)?;
    let (polys, used_alg_i) = approximate(&es, algorithm)?;
    let errors = polys
        .iter()
        .enumerate()
        .map(|(j, p)| sup_error(p, &dist.true_marginal(j), opts.eval_grid))
        .collect::<Result<Vec<_>>>()?;
    let (n, m) = if used_alg_i {
        let profile = projection_profile(ps, 0)?;
        let n = profile.node_count();
        (n, profile.uniform_multiplicity().unwrap_or(ps.len() / n))
    } else {
        let n = polys[0].nodes().len();
        (n, ps.len() / n)
    };
    Ok(Run {
        spec: spec.resolved(ps),
        n_points: ps.len(),
        n,
        m,
        used_alg_i,
        errors,
    })
}

fn study_row(dist: &ProductDistribution, entry: &ScheduleEntry, opts: &StudyOptions) -> Result<ReportRow> {
    let s = dist.dim();
    let seeds: Vec<Option<u64>> = if entry.points.is_random() && !opts.seeds.is_empty() {
        opts.seeds.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let mut runs = Vec::with_capacity(seeds.len());
    for seed in &seeds {
        let spec = seed.map_or_else(|| entry.points.clone(), |k| entry.points.with_seed(k));
        runs.push(run_once(dist, &spec, entry.algorithm, opts)?);
    }
    let first = &runs[0];
    let axes = (0..s)
        .map(|j| {
            if runs.len() == 1 {
                return AxisError {
                    report: first.errors[j],
                    sup_error_sd: None,
                    l2_error_sd: None,
                };
            }
            let sups: Vec<f64> = runs.iter().map(|r| r.errors[j].sup_error).collect();
            let l2s: Vec<f64> = runs.iter().map(|r| r.errors[j].l2_error).collect();
            let (sup, sup_sd) = mean_sd(&sups);
            let (l2, l2_sd) = mean_sd(&l2s);
            AxisError {
                report: ErrorReport {
                    axis: j,
                    sup_error: sup,
                    l2_error: l2,
                    grid_size: opts.eval_grid,
                },
                sup_error_sd: Some(sup_sd),
                l2_error_sd: Some(l2_sd),
            }
        })
        .collect();
    Ok(ReportRow {
        kind: entry.points.kind_name().to_string(),
        points: if runs.len() == 1 { first.spec.clone() } else { entry.points.clone() },
        n_points: first.n_points,
        n: first.n,
        m: first.m,
        algorithm: if first.used_alg_i { "I" } else { "II" }.to_string(),
        seeds: runs.len(),
        axes,
    })
}

impl PointSetSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            PointSetSpec::Grid { .. } => "grid",
            PointSetSpec::Rank1 { .. } => "rank1",
            PointSetSpec::Korobov { .. } => "korobov",
            PointSetSpec::MaximalRank { .. } => "maximal",
            PointSetSpec::Random { .. } => "random",
        }
    }
}

/// Runs every schedule entry against the distribution's exact marginals.
///
/// Rows run one after another; each row parallelises internally, so the
/// report does not depend on the thread count.
pub fn convergence_study(
    dist: &ProductDistribution,
    schedule: &[ScheduleEntry],
    opts: &StudyOptions,
) -> Result<ConvergenceReport> {
    if schedule.is_empty() {
        return Err(Error::Argument("schedule is empty".into()));
    }
    let rows = schedule
        .iter()
        .map(|e| study_row(dist, e, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_rows(rows))
}

/// Grid rows (Algorithm I) paired with lattice rows (Algorithm II).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedReport {
    pub grid: ConvergenceReport,
    pub lattice: ConvergenceReport,
}

impl PairedReport {
    /// True when, for every pair and axis, the lattice error is strictly
    /// below the grid error.
    pub fn lattice_wins(&self) -> bool {
        self.grid.rows.iter().zip(&self.lattice.rows).all(|(g, l)| {
            g.axes
                .iter()
                .zip(&l.axes)
                .all(|(g, l)| l.report.sup_error < g.report.sup_error)
        })
    }

    /// Both reports in one table with a leading `method` column.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = Vec::new();
        writeln!(w, "method,kind,N,n,m,axis,sup_error,l2_error,sup_error_sd,l2_error_sd")?;
        for (label, rep) in [("grid", &self.grid), ("lattice", &self.lattice)] {
            buf.clear();
            rep.write_csv(&mut buf)?;
            let text = String::from_utf8(buf.clone()).expect("ascii csv");
            for line in text.lines().skip(1) {
                writeln!(w, "{label},{line}")?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Approximates the same distribution with a grid of `n^s` points under
/// Algorithm I and with each paired lattice under Algorithm II.
pub fn compare_grid_vs_lattice(
    dist: &ProductDistribution,
    pairs: &[(usize, PointSetSpec)],
    partitions: usize,
    smoother: PartitionSmoother,
    opts: &StudyOptions,
) -> Result<PairedReport> {
    if pairs.is_empty() {
        return Err(Error::Argument("no grid/lattice pairs to compare".into()));
    }
    let (grid, lattice): (Vec<_>, Vec<_>) = pairs
        .iter()
        .map(|(n, spec)| {
            (
                ScheduleEntry {
                    points: PointSetSpec::Grid { n: *n },
                    algorithm: Algorithm::One,
                },
                ScheduleEntry {
                    points: spec.clone(),
                    algorithm: Algorithm::Two {
                        partitions,
                        smoother,
                    },
                },
            )
        })
        .unzip();
    Ok(PairedReport {
        grid: convergence_study(dist, &grid, opts)?,
        lattice: convergence_study(dist, &lattice, opts)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{presets, Factor};
    use crate::marginal::FitMode;

    fn interpolant(f: impl Fn(f64) -> f64, nodes: Vec<f64>) -> MarginalPoly {
        let vals = nodes.iter().map(|&x| f(x)).collect();
        MarginalPoly::from_nodes(0, nodes, vals, FitMode::PointwiseMean).unwrap()
    }

    #[test]
    fn exact_and_zero_polynomials() {
        let p = interpolant(|_| 0.7, vec![0.0, 0.5, 1.0]);
        let r = sup_error(&p, &|_| 0.7, 1001).unwrap();
        assert_eq!(r.sup_error, 0.0);
        assert_eq!(r.l2_error, 0.0);
        assert_eq!(r.grid_size, 1001);
        let z = interpolant(|_| 0.0, vec![0.0, 1.0]);
        let r = sup_error(&z, &|_| 1.0, 11).unwrap();
        assert_eq!((r.sup_error, r.l2_error), (1.0, 1.0));
        assert!(sup_error(&z, &|_| 1.0, 1).is_err());
    }

    #[test]
    fn bound_values() {
        assert_eq!(theorem_bound(1.0, 2).unwrap(), 0.125);
        assert_eq!(theorem_bound(1.0, 5).unwrap(), 1.0 / 20480.0);
        assert!(theorem_bound(1.0, 1).is_err());
        assert!(theorem_bound(-1.0, 3).is_err());
        for n in 2..30 {
            assert!(theorem_bound(1.0, n + 1).unwrap() < theorem_bound(1.0, n).unwrap());
        }
    }

    #[test]
    fn exponential_interpolation_within_bound() {
        for n in 3..=10 {
            let nodes: Vec<f64> = equidistant(n).collect();
            let p = interpolant(|x| (-x).exp(), nodes);
            let r = sup_error(&p, &|x| (-x).exp(), DEFAULT_EVAL_GRID).unwrap();
            assert!(r.sup_error <= theorem_bound(1.0, n).unwrap(), "n={n}: {}", r.sup_error);
        }
    }

    #[test]
    fn linear_marginal_on_small_grid() {
        // f = (1 + x)(1 + y) / (9/4) has marginals (1 + x) / 1.5.
        let f = Factor::Beta { alpha: 1.0, beta: 1.0 };
        let dist = ProductDistribution::new(vec![f.clone(), f]).unwrap();
        let ps = grid_points(3, 2).unwrap();
        let es = evaluate(|x: &[f64]| (1.0 + x[0]) * (1.0 + x[1]) / 2.25, &ps, None).unwrap();
        let (polys, alg_i) = approximate(
            &es,
            Algorithm::Auto {
                partitions: 3,
                smoother: PartitionSmoother::default(),
            },
        )
        .unwrap();
        assert!(alg_i);
        for p in &polys {
            let r = sup_error(p, &|x| (1.0 + x) / 1.5, 1001).unwrap();
            assert!(r.sup_error <= 1e-10);
        }
        drop(dist);
    }

    #[test]
    fn constant_density_study_is_exact() {
        let dist = ProductDistribution::iid(Factor::Beta { alpha: 1.0, beta: 1.0 }, 3).unwrap();
        let schedule: Vec<ScheduleEntry> = [64u64, 256, 128]
            .iter()
            .map(|&n| ScheduleEntry {
                points: PointSetSpec::Korobov {
                    n_points: n,
                    alpha: None,
                },
                algorithm: Algorithm::Two {
                    partitions: 4,
                    smoother: PartitionSmoother::default(),
                },
            })
            .collect();
        let rep = convergence_study(&dist, &schedule, &StudyOptions::default()).unwrap();
        assert_eq!(rep.rows.iter().map(|r| r.n_points).collect::<Vec<_>>(), [64, 128, 256]);
        assert!(rep.trend_holds());
        for row in &rep.rows {
            assert_eq!((row.n, row.algorithm.as_str()), (4, "II"));
            for a in &row.axes {
                assert!(a.report.sup_error <= 1e-10);
            }
        }
        assert!(convergence_study(&dist, &[], &StudyOptions::default()).is_err());
    }

    #[test]
    fn random_rows_average_over_seeds() {
        let dist = presets::bivariate_exponential();
        let entry = ScheduleEntry {
            points: PointSetSpec::Random {
                n_points: 500,
                seed: 0,
            },
            algorithm: Algorithm::Two {
                partitions: 4,
                smoother: PartitionSmoother::default(),
            },
        };
        let opts = StudyOptions {
            seeds: vec![1, 2, 3],
            ..StudyOptions::default()
        };
        let rep = convergence_study(&dist, std::slice::from_ref(&entry), &opts).unwrap();
        let row = &rep.rows[0];
        assert_eq!(row.seeds, 3);
        let manual: Vec<f64> = [1, 2, 3]
            .iter()
            .map(|&k| {
                let e = ScheduleEntry {
                    points: entry.points.with_seed(k),
                    ..entry.clone()
                };
                convergence_study(&dist, &[e], &StudyOptions::default()).unwrap().rows[0].axes[0]
                    .report
                    .sup_error
            })
            .collect();
        let (mean, sd) = mean_sd(&manual);
        assert!((row.axes[0].report.sup_error - mean).abs() < 1e-15);
        assert!((row.axes[0].sup_error_sd.unwrap() - sd).abs() < 1e-15);
    }

    #[test]
    fn trend_flags() {
        let row = |n: usize, e: f64| ReportRow {
            points: PointSetSpec::Grid { n: 2 },
            kind: "grid".into(),
            n_points: n,
            n: 2,
            m: 1,
            algorithm: "I".into(),
            seeds: 1,
            axes: vec![AxisError {
                report: ErrorReport {
                    axis: 0,
                    sup_error: e,
                    l2_error: e,
                    grid_size: 2,
                },
                sup_error_sd: None,
                l2_error_sd: None,
            }],
        };
        assert!(ConvergenceReport::from_rows(vec![row(1, 1.0), row(2, 1.09), row(3, 0.5)]).trend_holds());
        assert!(!ConvergenceReport::from_rows(vec![row(1, 1.0), row(2, 1.2)]).trend_holds());
        // sorted by N before flags are computed
        assert!(ConvergenceReport::from_rows(vec![row(4, 0.1), row(1, 1.0)]).trend_holds());
    }

    #[test]
    fn one_dimensional_grid_and_lattice_agree() {
        // 8 grid nodes against 64 lattice points in 8 partitions. With only 8
        // lattice points the fit extrapolates over [7/8, 1] and loses by 5-40x.
        let factors = [
            Factor::gamma(3.0, 2.0),
            Factor::Exponential { rate: 1.0, upper: 8.0 },
            presets::bimodal_mixture(),
            Factor::Beta { alpha: 2.0, beta: 5.5 },
        ];
        for f in factors {
            let dist = ProductDistribution::new(vec![f]).unwrap();
            let rep = compare_grid_vs_lattice(
                &dist,
                &[(8, PointSetSpec::Korobov {
                    n_points: 64,
                    alpha: Some(1),
                })],
                8,
                PartitionSmoother::default(),
                &StudyOptions::default(),
            )
            .unwrap();
            let g = rep.grid.rows[0].axes[0].report.sup_error;
            let l = rep.lattice.rows[0].axes[0].report.sup_error;
            assert!(l <= 2.0 * g && g <= 2.0 * l, "{dist:?}: grid {g} lattice {l}");
        }
    }

    #[test]
    fn csv_columns() {
        let dist = presets::bivariate_exponential();
        let rep = convergence_study(
            &dist,
            &[ScheduleEntry {
                points: PointSetSpec::Grid { n: 4 },
                algorithm: Algorithm::One,
            }],
            &StudyOptions::default(),
        )
        .unwrap();
        let mut out = Vec::new();
        rep.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind,N,n,m,axis,sup_error,l2_error,sup_error_sd,l2_error_sd");
        assert!(lines[1].starts_with("grid,16,4,4,1,"));
        assert!(lines[2].starts_with("grid,16,4,4,2,"));
        assert!(lines[1].ends_with(",,"));
    }
}
