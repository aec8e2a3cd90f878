//! Structured point sets in the unit cube: regular grids, rank-1 lattices
//! (including Korobov and maximal-rank constructions) and seeded
//! pseudo-random points.
//!
//! Axis indices in this API are zero-based. Grids and lattices carry exact
//! rational coordinates over a common denominator; their per-axis distinct
//! values are grouped by integer numerator, never by float comparison.

use std::fmt;
use std::io::{BufRead, Write};

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::g17;
use crate::korobov;

/// Upper bound on `N * s` coordinates a single point set may hold.
pub const MAX_COORDS: usize = 1 << 26;

/// Absolute tolerance used to group float abscissae that carry no exact
/// rational representation.
pub const GROUPING_TOLERANCE: f64 = 1e-12;

/// Identity of the pseudo-random generator behind [`random_points`]. Part of
/// the file-format contract: point files record it in their header.
pub const RANDOM_GENERATOR: &str = "chacha20-seed_from_u64-u53";

/// How a point set was constructed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSetKind {
    Grid { n: usize },
    Rank1Lattice { z: Vec<u64> },
    Korobov { alpha: u64, z: Vec<u64> },
    MaximalRank { l: u64, r: u64, z: Vec<u64> },
    Random { seed: u64 },
    /// Points read from a file without construction metadata.
    Imported,
}

impl PointSetKind {
    /// Short family name used in file headers and reports.
    pub fn name(&self) -> &'static str {
        match self {
            PointSetKind::Grid { .. } => "grid",
            PointSetKind::Rank1Lattice { .. } => "rank1",
            PointSetKind::Korobov { .. } => "korobov",
            PointSetKind::MaximalRank { .. } => "maximal",
            PointSetKind::Random { .. } => "random",
            PointSetKind::Imported => "imported",
        }
    }
}

/// Exact coordinates `numerators[i * s + j] / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCoords {
    denominator: u64,
    numerators: Vec<u64>,
}

impl RationalCoords {
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }
}

/// `N` points in `[0,1)^s` (grids also reach `1.0`), stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    rational: Option<RationalCoords>,
    kind: PointSetKind,
}

impl PointSet {
    /// Wraps float coordinates that have no exact representation.
    pub fn from_coords(dim: usize, coords: Vec<f64>, kind: PointSetKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Argument("dimension must be positive".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::Argument(format!(
                "{} coordinates do not form rows of length {dim}",
                coords.len()
            )));
        }
        if let Some(x) = coords.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::Argument(format!("coordinate {x} outside [0,1]")));
        }
        Ok(Self {
            dim,
            coords,
            rational: None,
            kind,
        })
    }

    fn from_rational(dim: usize, denominator: u64, numerators: Vec<u64>, kind: PointSetKind) -> Self {
        let d = denominator as f64;
        // u64 -> f64 is exact below 2^53 and the quotient is correctly rounded.
        let coords = numerators.iter().map(|&p| p as f64 / d).collect();
        Self {
            dim,
            coords,
            rational: Some(RationalCoords {
                denominator,
                numerators,
            }),
            kind,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points `N`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn kind(&self) -> &PointSetKind {
        &self.kind
    }

    pub fn rational(&self) -> Option<&RationalCoords> {
        self.rational.as_ref()
    }

    /// Row-major coordinate buffer of length `N * s`.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// The `j`-th coordinate of every point, in row order.
    pub fn axis(&self, j: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.coords.iter().skip(j).step_by(self.dim).copied()
    }

    /// Header line (without the leading `# `) describing the construction.
    pub fn header(&self) -> String {
        let mut h = format!("kind={},N={},s={}", self.kind.name(), self.len(), self.dim);
        match &self.kind {
            PointSetKind::Grid { n } => h.push_str(&format!(",n={n}")),
            PointSetKind::Rank1Lattice { z } => h.push_str(&format!(",z={}", join(z))),
            PointSetKind::Korobov { alpha, z } => {
                h.push_str(&format!(",alpha={alpha},z={}", join(z)))
            }
            PointSetKind::MaximalRank { l, r, z } => {
                h.push_str(&format!(",l={l},r={r},z={}", join(z)))
            }
            PointSetKind::Random { seed } => {
                h.push_str(&format!(",seed={seed},generator={RANDOM_GENERATOR}"))
            }
            PointSetKind::Imported => {}
        }
        h
    }

    /// Writes the point CSV: one `# kind=...` header line, then one row of
    /// `%.17g` coordinates per point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# {}", self.header())?;
        for p in self.points() {
            write_row(&mut w, p.iter().copied())?;
        }
        Ok(())
    }

    /// Writes the exact coordinates as `p/q` strings. No-op (returns `false`)
    /// for point sets without rational metadata.
    pub fn write_rational_csv<W: Write>(&self, mut w: W) -> Result<bool> {
        let Some(r) = &self.rational else {
            return Ok(false);
        };
        writeln!(w, "# {}", self.header())?;
        for row in r.numerators.chunks_exact(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|p| format!("{p}/{}", r.denominator))
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(true)
    }

    /// Reads a point CSV. Comment lines are skipped; the result is tagged
    /// [`PointSetKind::Imported`] and grouped by tolerance.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut dim = 0;
        let mut coords = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = parse_row(line, lineno)?;
            if dim == 0 {
                dim = row.len();
            } else if row.len() != dim {
                return Err(Error::Parse(format!(
                    "line {}: expected {dim} columns, found {}",
                    lineno + 1,
                    row.len()
                )));
            }
            coords.extend(row);
        }
        Self::from_coords(dim.max(1), coords, PointSetKind::Imported)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.header())
    }
}

pub(crate) fn write_row<W: Write>(w: &mut W, cells: impl Iterator<Item = f64>) -> std::io::Result<()> {
    let mut first = true;
    for c in cells {
        if !first {
            w.write_all(b",")?;
        }
        first = false;
        w.write_all(g17(c).as_bytes())?;
    }
    w.write_all(b"\n")
}

pub(crate) fn parse_row(line: &str, lineno: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}: {c:?}", lineno + 1)))
        })
        .collect()
}

fn join(z: &[u64]) -> String {
    z.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

fn check_capacity(points: u128, dim: usize) -> Result<usize> {
    let coords = points.checked_mul(dim as u128);
    match coords {
        Some(c) if c <= MAX_COORDS as u128 => Ok(points as usize),
        _ => Err(Error::Capacity(format!(
            "{points} points in {dim} dimensions exceeds the {MAX_COORDS}-coordinate budget"
        ))),
    }
}

/// Number of points in an `n`-point grid in `s` dimensions, `n^s`.
pub fn grid_len(n: usize, s: usize) -> Result<u128> {
    u32::try_from(s)
        .ok()
        .and_then(|s| (n as u128).checked_pow(s))
        .ok_or_else(|| Error::Capacity(format!("{n}^{s} overflows")))
}

/// The regular grid `((i_1-1)/(n-1), ..., (i_s-1)/(n-1))`, first axis slowest.
pub fn grid_points(n: usize, s: usize) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::Argument(format!("grid needs n >= 2, got {n}")));
    }
    if s == 0 {
        return Err(Error::Argument("dimension must be positive".into()));
    }
    let len = check_capacity(grid_len(n, s)?, s)?;
    let mut numerators = Vec::with_capacity(len * s);
    let mut idx = vec![0u64; s];
    for _ in 0..len {
        numerators.extend_from_slice(&idx);
        for digit in idx.iter_mut().rev() {
            *digit += 1;
            if *digit < n as u64 {
                break;
            }
            *digit = 0;
        }
    }
    Ok(PointSet::from_rational(
        s,
        (n - 1) as u64,
        numerators,
        PointSetKind::Grid { n },
    ))
}

fn rank1_numerators(n_points: u64, z: &[u64]) -> Vec<u64> {
    let n = n_points as u128;
    let mut out = Vec::with_capacity(n_points as usize * z.len());
    for i in 1..=n {
        out.extend(z.iter().map(|&zj| ((i * zj as u128) % n) as u64));
    }
    out
}

fn validate_generator(n_points: u64, z: &[u64]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::Argument("generating vector is empty".into()));
    }
    if n_points < 2 {
        return Err(Error::Argument(format!("lattice needs N >= 2, got {n_points}")));
    }
    if let Some(bad) = z.iter().find(|&&zj| zj == 0 || zj >= n_points) {
        return Err(Error::Argument(format!(
            "generator component {bad} outside 1..={}",
            n_points - 1
        )));
    }
    Ok(())
}

/// Rank-1 lattice `x_i = {i z / N}`, `i = 1..N`, computed as `(i z_j mod N) / N`.
pub fn rank1_lattice(n_points: u64, z: &[u64]) -> Result<PointSet> {
    validate_generator(n_points, z)?;
    check_capacity(n_points as u128, z.len())?;
    Ok(PointSet::from_rational(
        z.len(),
        n_points,
        rank1_numerators(n_points, z),
        PointSetKind::Rank1Lattice { z: z.to_vec() },
    ))
}

/// Korobov lattice with `z = (1, alpha, alpha^2, ...) mod N`.
pub fn korobov_lattice(n_points: u64, alpha: u64, s: usize) -> Result<PointSet> {
    if alpha == 0 || alpha >= n_points {
        return Err(Error::Argument(format!(
            "alpha {alpha} outside 1..={}",
            n_points.saturating_sub(1)
        )));
    }
    if s == 0 {
        return Err(Error::Argument("dimension must be positive".into()));
    }
    let z = korobov::generator(n_points, alpha, s);
    let mut ps = rank1_lattice(n_points, &z)?;
    ps.kind = PointSetKind::Korobov { alpha, z };
    Ok(ps)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Maximal-rank lattice `{i z / l + (k_1, ..., k_s) / r}` with `N = l r^s`.
///
/// Rows are ordered by `i` first, then by the multi-index `k` with `k_1`
/// slowest. Exact coordinates share the denominator `l r`.
pub fn maximal_rank_lattice(l: u64, r: u64, z: &[u64]) -> Result<PointSet> {
    if r == 0 {
        return Err(Error::Argument("refinement r must be positive".into()));
    }
    validate_generator(l, z)?;
    if gcd(r, l) != 1 {
        return Err(Error::Argument(format!("gcd(r={r}, l={l}) != 1")));
    }
    if let Some(bad) = z.iter().find(|&&zj| gcd(zj, l) != 1) {
        return Err(Error::Argument(format!("generator component {bad} not coprime with l={l}")));
    }
    let s = z.len();
    let shifts = u32::try_from(s)
        .ok()
        .and_then(|e| (r as u128).checked_pow(e))
        .ok_or_else(|| Error::Capacity(format!("{r}^{s} overflows")))?;
    let total = (l as u128)
        .checked_mul(shifts)
        .ok_or_else(|| Error::Capacity("l r^s overflows".into()))?;
    let len = check_capacity(total, s)?;
    let den = l * r;
    let mut numerators = Vec::with_capacity(len * s);
    let mut k = vec![0u64; s];
    for i in 1..=l {
        k.iter_mut().for_each(|d| *d = 0);
        for _ in 0..shifts {
            numerators.extend(z.iter().zip(&k).map(|(&zj, &kj)| {
                ((i as u128 * zj as u128 * r as u128 + kj as u128 * l as u128) % den as u128) as u64
            }));
            for digit in k.iter_mut().rev() {
                *digit += 1;
                if *digit < r {
                    break;
                }
                *digit = 0;
            }
        }
    }
    Ok(PointSet::from_rational(
        s,
        den,
        numerators,
        PointSetKind::MaximalRank {
            l,
            r,
            z: z.to_vec(),
        },
    ))
}

/// `N` i.i.d. uniform points from ChaCha20 seeded with `seed_from_u64(seed)`.
///
/// Each coordinate takes the top 53 bits of one `next_u64` draw, filled row
/// by row. The stream is fixed by [`RANDOM_GENERATOR`].
pub fn random_points(n_points: usize, s: usize, seed: u64) -> Result<PointSet> {
    if n_points == 0 || s == 0 {
        return Err(Error::Argument("random point set needs N >= 1 and s >= 1".into()));
    }
    let len = check_capacity(n_points as u128, s)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let coords = (0..len * s)
        .map(|_| (rng.next_u64() >> 11) as f64 * SCALE)
        .collect();
    PointSet::from_coords(s, coords, PointSetKind::Random { seed })
}

/// Distinct abscissae of one axis and how many points share each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionProfile {
    /// Zero-based axis index.
    pub axis: usize,
    /// Strictly increasing distinct values `z_1 < ... < z_n`.
    pub nodes: Vec<f64>,
    /// `m_k`, the number of points whose coordinate equals `z_k`.
    pub multiplicities: Vec<usize>,
    /// True iff every multiplicity is one.
    pub fully_projection_regular: bool,
}

impl ProjectionProfile {
    /// Number of distinct abscissae `n`.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// The common multiplicity `m`, if every node has the same count.
    pub fn uniform_multiplicity(&self) -> Option<usize> {
        let first = *self.multiplicities.first()?;
        self.multiplicities
            .iter()
            .all(|&m| m == first)
            .then_some(first)
    }
}

/// Per-axis profile plus the node index of every point.
pub(crate) fn group_axis(ps: &PointSet, axis: usize) -> Result<(ProjectionProfile, Vec<usize>)> {
    if axis >= ps.dim {
        return Err(Error::Argument(format!(
            "axis {axis} out of range for dimension {}",
            ps.dim
        )));
    }
    let n = ps.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut nodes = Vec::new();
    let mut multiplicities = Vec::new();
    let mut assignment = vec![0usize; n];
    match &ps.rational {
        Some(rat) => {
            let key = |i: usize| rat.numerators[i * ps.dim + axis];
            order.sort_unstable_by_key(|&i| (key(i), i));
            let mut current = None;
            for &i in &order {
                let k = key(i);
                if current != Some(k) {
                    current = Some(k);
                    nodes.push(ps.coords[i * ps.dim + axis]);
                    multiplicities.push(0);
                }
                *multiplicities.last_mut().unwrap() += 1;
                assignment[i] = nodes.len() - 1;
            }
        }
        None => {
            let val = |i: usize| ps.coords[i * ps.dim + axis];
            order.sort_unstable_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
            let mut anchor = f64::NEG_INFINITY;
            for &i in &order {
                let x = val(i);
                if nodes.is_empty() || x - anchor > GROUPING_TOLERANCE {
                    anchor = x;
                    nodes.push(x);
                    multiplicities.push(0);
                }
                *multiplicities.last_mut().unwrap() += 1;
                assignment[i] = nodes.len() - 1;
            }
        }
    }
    let fully_projection_regular = nodes.len() == n;
    Ok((
        ProjectionProfile {
            axis,
            nodes,
            multiplicities,
            fully_projection_regular,
        },
        assignment,
    ))
}

/// Distinct values of axis `axis` with their multiplicities.
pub fn projection_profile(ps: &PointSet, axis: usize) -> Result<ProjectionProfile> {
    group_axis(ps, axis).map(|(profile, _)| profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(ps: &PointSet) -> Vec<Vec<f64>> {
        ps.points().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn grid_corners() {
        let g = grid_points(2, 2).unwrap();
        assert_eq!(
            rows(&g),
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
    }

    #[test]
    fn five_point_grid_profile() {
        let g = grid_points(5, 2).unwrap();
        assert_eq!(g.len(), 25);
        for j in 0..2 {
            let p = projection_profile(&g, j).unwrap();
            assert_eq!(p.nodes, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
            assert_eq!(p.multiplicities, vec![5; 5]);
            assert!(!p.fully_projection_regular);
        }
    }

    #[test]
    fn ten_dim_grid_is_over_budget() {
        assert_eq!(grid_len(5, 10).unwrap(), 9_765_625);
        assert!(matches!(grid_points(5, 10), Err(Error::Capacity(_))));
        assert!(matches!(grid_points(1000, 40), Err(Error::Capacity(_))));
        assert!(matches!(grid_points(1, 3), Err(Error::Argument(_))));
    }

    #[test]
    fn diagonal_lattice() {
        let l = rank1_lattice(4, &[1, 1]).unwrap();
        assert_eq!(
            rows(&l),
            vec![
                vec![0.25, 0.25],
                vec![0.5, 0.5],
                vec![0.75, 0.75],
                vec![0.0, 0.0]
            ]
        );
    }

    #[test]
    fn rank1_rejects_out_of_range_generator() {
        assert!(rank1_lattice(8, &[0, 1]).is_err());
        assert!(rank1_lattice(8, &[1, 8]).is_err());
        assert!(rank1_lattice(8, &[]).is_err());
    }

    #[test]
    fn non_coprime_component_repeats() {
        // i * 2 mod 8 for i = 1..8 visits {2,4,6,0} twice each.
        let l = rank1_lattice(8, &[1, 2]).unwrap();
        let p = projection_profile(&l, 1).unwrap();
        assert_eq!(p.nodes, vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(p.multiplicities, vec![2; 4]);
        let p0 = projection_profile(&l, 0).unwrap();
        assert!(p0.fully_projection_regular);
    }

    #[test]
    fn coprime_lattice_is_fully_projection_regular() {
        let l = rank1_lattice(32, &[1, 7]).unwrap();
        for j in 0..2 {
            let p = projection_profile(&l, j).unwrap();
            assert_eq!(p.node_count(), 32);
            assert!(p.fully_projection_regular);
            let expected: Vec<f64> = (0..32).map(|k| k as f64 / 32.0).collect();
            assert_eq!(p.nodes, expected);
        }
    }

    #[test]
    fn korobov_alpha_one_is_diagonal() {
        let k = korobov_lattice(5, 1, 3).unwrap();
        for (i, p) in k.points().enumerate() {
            let x = ((i + 1) % 5) as f64 / 5.0;
            assert_eq!(p, &[x, x, x]);
        }
        assert_eq!(
            k.kind(),
            &PointSetKind::Korobov {
                alpha: 1,
                z: vec![1, 1, 1]
            }
        );
        assert!(korobov_lattice(5, 5, 2).is_err());
        assert!(korobov_lattice(5, 0, 2).is_err());
    }

    #[test]
    fn korobov_generator_powers() {
        let k = korobov_lattice(101, 12, 4).unwrap();
        let PointSetKind::Korobov { z, .. } = k.kind() else {
            panic!()
        };
        assert_eq!(z, &vec![1, 12, 144 % 101, 1728 % 101]);
    }

    #[test]
    fn maximal_rank_reduces_to_rank1() {
        let m = maximal_rank_lattice(5, 1, &[1, 2]).unwrap();
        let r = rank1_lattice(5, &[1, 2]).unwrap();
        assert_eq!(m.coords(), r.coords());
        assert_eq!(projection_profile(&m, 1).unwrap().multiplicities, vec![1; 5]);
    }

    #[test]
    fn maximal_rank_small_case_matches_enumeration() {
        let m = maximal_rank_lattice(3, 2, &[1, 1]).unwrap();
        assert_eq!(m.len(), 12);
        // Brute force: {i/3 + k/2} for i = 1..3, k in {0,1}^2, grouped by hand.
        let mut brute: Vec<Vec<f64>> = Vec::new();
        for i in 1..=3 {
            for k1 in 0..2 {
                for k2 in 0..2 {
                    let x = |k: i32| ((i as f64 / 3.0 + k as f64 / 2.0) * 6.0).round() as i64 % 6;
                    brute.push(vec![x(k1) as f64 / 6.0, x(k2) as f64 / 6.0]);
                }
            }
        }
        assert_eq!(rows(&m), brute);
        for j in 0..2 {
            let p = projection_profile(&m, j).unwrap();
            assert_eq!(p.node_count(), 6);
            assert_eq!(p.multiplicities, vec![2; 6]);
        }
    }

    #[test]
    fn maximal_rank_three_dims() {
        let m = maximal_rank_lattice(5, 2, &[1, 2, 3]).unwrap();
        assert_eq!(m.len(), 40);
        for j in 0..3 {
            let p = projection_profile(&m, j).unwrap();
            assert_eq!(p.node_count(), 10);
            assert_eq!(p.uniform_multiplicity(), Some(4));
        }
    }

    #[test]
    fn maximal_rank_gcd_violations() {
        assert!(maximal_rank_lattice(4, 2, &[1, 1]).is_err());
        assert!(maximal_rank_lattice(6, 5, &[1, 2]).is_err());
    }

    #[test]
    fn random_points_are_reproducible() {
        let a = random_points(100, 3, 1).unwrap();
        let b = random_points(100, 3, 1).unwrap();
        assert_eq!(a.coords(), b.coords());
        let c = random_points(100, 3, 2).unwrap();
        assert_ne!(a.coords(), c.coords());
        let one = random_points(1, 1, 42).unwrap();
        assert!((0.0..1.0).contains(&one.coords()[0]));
        assert_eq!(one.coords(), random_points(1, 1, 42).unwrap().coords());
    }

    #[test]
    fn random_sample_means_near_half() {
        let ps = random_points(10_000, 2, 7).unwrap();
        for j in 0..2 {
            let mean = ps.axis(j).sum::<f64>() / 10_000.0;
            // 3 sigma = 3 * sqrt(1/12) / 100 ~= 0.0087
            assert!((mean - 0.5).abs() < 0.01, "axis {j} mean {mean}");
        }
    }

    #[test]
    fn float_grouping_uses_tolerance() {
        let ps = PointSet::from_coords(
            1,
            vec![0.5, 0.5 + 5e-13, 0.25, 0.75, 0.25 + 2e-12],
            PointSetKind::Imported,
        )
        .unwrap();
        let p = projection_profile(&ps, 0).unwrap();
        assert_eq!(p.node_count(), 4);
        assert_eq!(p.multiplicities, vec![1, 1, 2, 1]);
        assert_eq!(p.total(), 5);
    }

    #[test]
    fn csv_header_and_rows() {
        let k = korobov_lattice(4, 3, 2).unwrap();
        let mut buf = Vec::new();
        k.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# kind=korobov,N=4,s=2,alpha=3,z=1;3\n0.25,0.75\n0.5,0.5\n0.75,0.25\n0,0\n"
        );
        let back = PointSet::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.coords(), k.coords());
        assert_eq!(back.kind(), &PointSetKind::Imported);

        let mut side = Vec::new();
        assert!(k.write_rational_csv(&mut side).unwrap());
        let side = String::from_utf8(side).unwrap();
        assert!(side.ends_with("1/4,3/4\n2/4,2/4\n3/4,1/4\n0/4,0/4\n"));
    }

    #[test]
    fn profile_axis_out_of_range() {
        let g = grid_points(3, 2).unwrap();
        assert!(projection_profile(&g, 2).is_err());
    }
}
