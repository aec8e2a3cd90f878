//! Point-wise and partition means, degree-`(n-1)` polynomial fits, and the
//! two marginal approximation algorithms.
//!
//! Algorithm I suits point sets whose projections repeat (`m > 1`, e.g.
//! grids): on every axis the least-squares polynomial of degree `n - 1`
//! through the `N` projected pairs coincides with the interpolant through
//! the `n` point-wise means, which is how it is computed here.
//!
//! Algorithm II suits fully projection regular sets (`m = 1`: rank-1
//! lattices, random points): `[0,1]` is split into `n` bins and a polynomial
//! of degree `n - 1` is fitted on each axis. See [`PartitionSmoother`].

mod lsq;
mod poly;

pub use lsq::{weighted_polyfit, LegendreSeries};
pub use poly::{chebyshev_lobatto, equidistant, FitMode, MarginalPoly, NodeRule, PolyRecord, PolyValue, MAX_MONOMIAL_NODES};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{project, EvaluatedSet, Projection};

/// Compensated (Neumaier) summation.
pub(crate) fn stable_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeanMode {
    PointwiseMean,
    PartitionMean { breakpoints: Vec<f64> },
}

/// Nodes paired with the mean function value of their member points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanProfile {
    pub axis: usize,
    /// Distinct abscissae, or left breakpoints for partition means.
    pub nodes: Vec<f64>,
    pub means: Vec<f64>,
    pub counts: Vec<usize>,
    pub mode: MeanMode,
}

impl MeanProfile {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn group_means(groups: usize, member: &[usize], values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); groups];
    for (&g, &v) in member.iter().zip(values) {
        buckets[g].push(v);
    }
    let counts = buckets.iter().map(Vec::len).collect();
    let means = buckets
        .into_iter()
        .map(|b| {
            let n = b.len() as f64;
            stable_sum(b) / n
        })
        .collect();
    (means, counts)
}

/// Mean of `f` over the points sharing each distinct abscissa.
pub fn pointwise_means(p: &Projection) -> MeanProfile {
    let profile = p.profile();
    let (means, counts) = group_means(profile.node_count(), p.node_of(), p.values());
    MeanProfile {
        axis: p.axis(),
        nodes: profile.nodes.clone(),
        means,
        counts,
        mode: MeanMode::PointwiseMean,
    }
}

/// `0, 1/n, ..., 1`.
pub fn equal_breakpoints(n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

fn validate_breakpoints(b: &[f64]) -> Result<()> {
    if b.len() < 2 || b[0] != 0.0 || *b.last().unwrap() != 1.0 {
        return Err(Error::Argument("breakpoints must run from 0 to 1 with at least one bin".into()));
    }
    if b.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Argument("breakpoints must be strictly increasing".into()));
    }
    Ok(())
}

/// Bin index of every abscissa: bin `k` is `[b_k, b_{k+1})`, the last bin
/// also holds `1.0`.
fn assign_bins(p: &Projection, breakpoints: &[f64]) -> Result<Vec<usize>> {
    let bins = breakpoints.len() - 1;
    p.abscissae()
        .iter()
        .map(|&x| {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Argument(format!("abscissa {x} outside [0, 1]")));
            }
            Ok((breakpoints.partition_point(|&b| b <= x) - 1).min(bins - 1))
        })
        .collect()
}

/// Mean of `f` over the points whose abscissa falls in each bin. Counts are
/// the actual occupancies; an empty bin is an error.
pub fn partition_means(p: &Projection, breakpoints: &[f64]) -> Result<MeanProfile> {
    validate_breakpoints(breakpoints)?;
    let bins = breakpoints.len() - 1;
    let member = assign_bins(p, breakpoints)?;
    let (means, counts) = group_means(bins, &member, p.values());
    if let Some(bin) = counts.iter().position(|&c| c == 0) {
        return Err(Error::EmptyPartition {
            axis: p.axis(),
            bin,
            lower: breakpoints[bin],
            upper: breakpoints[bin + 1],
        });
    }
    Ok(MeanProfile {
        axis: p.axis(),
        nodes: breakpoints[..bins].to_vec(),
        means,
        counts,
        mode: MeanMode::PartitionMean {
            breakpoints: breakpoints.to_vec(),
        },
    })
}

/// Ordinary least-squares polynomial of degree `n - 1`, computed as the
/// interpolant through the `n` point-wise means.
pub fn fit_ls_poly(p: &Projection) -> Result<MarginalPoly> {
    let means = pointwise_means(p);
    MarginalPoly::from_nodes(p.axis(), means.nodes, means.means, FitMode::PointwiseMean)
}

/// Positive per-node weights for [`fit_wls_poly`].
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Argument(format!("weight {bad} is not finite and positive")));
        }
        Ok(Self(w))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Weighted least-squares polynomial of degree `n - 1` over all `N`
/// projected pairs, every pair at node `z_k` carrying weight `w_k`.
///
/// Solved from the full weighted normal equations, independently of the
/// point-wise means, so comparing it with [`fit_ls_poly`] is a genuine check.
pub fn fit_wls_poly(p: &Projection, w: &Weights) -> Result<MarginalPoly> {
    let nodes = &p.profile().nodes;
    if w.0.len() != nodes.len() {
        return Err(Error::Argument(format!(
            "{} weights for {} nodes",
            w.0.len(),
            nodes.len()
        )));
    }
    let per_point: Vec<f64> = p.node_of().iter().map(|&k| w.0[k]).collect();
    let series = weighted_polyfit(p.abscissae(), p.values(), Some(&per_point), nodes.len() - 1)?;
    let values = nodes.iter().map(|&z| series.eval(z)).collect();
    MarginalPoly::from_nodes(p.axis(), nodes.clone(), values, FitMode::WeightedLeastSquares)
}

/// Interpolant through the partition means, placed at each bin's left
/// breakpoint or midpoint.
pub fn fit_partition_poly(p: &Projection, breakpoints: &[f64], node_rule: NodeRule) -> Result<MarginalPoly> {
    let means = partition_means(p, breakpoints)?;
    let nodes = match node_rule {
        NodeRule::LeftBreakpoint => means.nodes,
        NodeRule::Midpoint => breakpoints.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
    };
    MarginalPoly::from_nodes(
        p.axis(),
        nodes,
        means.means,
        FitMode::PartitionMean {
            breakpoints: breakpoints.to_vec(),
            node_rule,
        },
    )
}

/// Least-squares polynomial of degree `degree` over the raw projected pairs,
/// stored by its values at Chebyshev–Lobatto nodes.
pub fn fit_projection_ls(p: &Projection, degree: usize) -> Result<MarginalPoly> {
    let distinct = p.profile().node_count();
    if distinct <= degree {
        return Err(Error::Singular(format!(
            "axis {} has {distinct} distinct abscissae, too few for degree {degree}",
            p.axis()
        )));
    }
    let series = weighted_polyfit(p.abscissae(), p.values(), None, degree)?;
    let nodes = chebyshev_lobatto(degree + 1);
    let values = nodes.iter().map(|&z| series.eval(z)).collect();
    MarginalPoly::from_nodes(
        p.axis(),
        nodes,
        values,
        FitMode::ProjectionLeastSquares {
            partitions: degree + 1,
        },
    )
}

/// Polynomial fitted on each axis by Algorithm II.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionSmoother {
    /// Ordinary least squares of degree `n - 1` over every projected pair.
    #[default]
    ProjectionLeastSquares,
    /// Interpolant through the `n` partition means.
    BinMeans(NodeRule),
}

/// Algorithm I: project and fit the point-wise-mean polynomial on every axis.
///
/// Fails on any axis with `m = 1` (every abscissa distinct) unless `s = 1`,
/// where the projection is the function itself.
pub fn algorithm_i(es: &EvaluatedSet) -> Result<Vec<MarginalPoly>> {
    let s = es.dim();
    (0..s)
        .into_par_iter()
        .map(|j| {
            let p = project(es, j)?;
            if s > 1 && p.profile().fully_projection_regular {
                return Err(Error::FullyProjectionRegular { axis: j });
            }
            fit_ls_poly(&p)
        })
        .collect()
}

/// Algorithm II with `n` equal-width partitions on every axis.
///
/// Every bin must be non-empty on every axis, whichever smoother is used.
pub fn algorithm_ii(es: &EvaluatedSet, partitions: usize, smoother: PartitionSmoother) -> Result<Vec<MarginalPoly>> {
    if partitions == 0 {
        return Err(Error::Argument("need at least one partition".into()));
    }
    let breakpoints = equal_breakpoints(partitions);
    (0..es.dim())
        .into_par_iter()
        .map(|j| {
            let p = project(es, j)?;
            match smoother {
                PartitionSmoother::BinMeans(rule) => fit_partition_poly(&p, &breakpoints, rule),
                PartitionSmoother::ProjectionLeastSquares => {
                    partition_means(&p, &breakpoints)?;
                    fit_projection_ls(&p, partitions - 1)
                }
            }
        })
        .collect()
}

/// Which algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Algorithm I when every axis repeats (`m > 1`), else Algorithm II.
    Auto {
        partitions: usize,
        smoother: PartitionSmoother,
    },
    One,
    Two {
        partitions: usize,
        smoother: PartitionSmoother,
    },
}

/// Runs the selected algorithm. Returns the polynomials and whether
/// Algorithm I was used.
pub fn approximate(es: &EvaluatedSet, algorithm: Algorithm) -> Result<(Vec<MarginalPoly>, bool)> {
    match algorithm {
        Algorithm::One => Ok((algorithm_i(es)?, true)),
        Algorithm::Two {
            partitions,
            smoother,
        } => Ok((algorithm_ii(es, partitions, smoother)?, false)),
        Algorithm::Auto {
            partitions,
            smoother,
        } => match algorithm_i(es) {
            Err(Error::FullyProjectionRegular { .. }) => Ok((algorithm_ii(es, partitions, smoother)?, false)),
            other => other.map(|p| (p, true)),
        },
    }
}
