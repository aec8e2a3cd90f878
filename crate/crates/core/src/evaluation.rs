//! Function evaluation on a point set and per-axis projections.

use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointset::{self, group_axis, PointSet, PointSetKind, ProjectionProfile};

/// A point set together with `f(x_i)` for every point: the `N x (s+1)`
/// matrix whose last column holds the function values.
#[derive(Debug, Clone)]
pub struct EvaluatedSet {
    points: PointSet,
    values: Vec<f64>,
}

impl EvaluatedSet {
    /// Pairs precomputed values with their points.
    pub fn new(points: PointSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != points.len() {
            return Err(Error::Argument(format!(
                "{} values for {} points",
                values.len(),
                points.len()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { points, values })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Writes the evaluation matrix as CSV: `s` coordinate columns, then the
    /// value column, after a `# kind=...` header line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# {}", self.points.header())?;
        for (p, v) in self.points.points().zip(&self.values) {
            pointset::write_row(&mut w, p.iter().copied().chain(std::iter::once(*v)))?;
        }
        Ok(())
    }

    /// Reads an evaluation matrix written by [`EvaluatedSet::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut width = 0;
        let mut coords = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = pointset::parse_row(line, lineno)?;
            if width == 0 {
                if row.len() < 2 {
                    return Err(Error::Parse("need at least one coordinate and a value".into()));
                }
                width = row.len();
            } else if row.len() != width {
                return Err(Error::Parse(format!("line {}: ragged row", lineno + 1)));
            }
            values.push(row.pop().unwrap());
            coords.extend(row);
        }
        let points = PointSet::from_coords(width.max(2) - 1, coords, PointSetKind::Imported)?;
        Self::new(points, values)
    }
}

/// Evaluates `f` at every point. `threads` caps the worker count; the result
/// is identical for every thread count.
///
/// A non-finite value is an error naming the lowest offending point index.
pub fn evaluate<F>(f: F, ps: &PointSet, threads: Option<usize>) -> Result<EvaluatedSet>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let run = || -> Vec<f64> {
        ps.coords()
            .par_chunks_exact(ps.dim())
            .with_min_len(1024)
            .map(&f)
            .collect()
    };
    let values = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::Argument(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    EvaluatedSet::new(ps.clone(), values)
}

/// The pairs `(x_{i,j}, f(x_i))` for one axis, in point order.
#[derive(Debug, Clone)]
pub struct Projection {
    axis: usize,
    abscissae: Vec<f64>,
    values: Vec<f64>,
    profile: ProjectionProfile,
    node_of: Vec<usize>,
}

impl Projection {
    /// Builds a projection from raw pairs, grouping abscissae by tolerance.
    pub fn from_pairs(axis: usize, abscissae: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let ps = PointSet::from_coords(1, abscissae, PointSetKind::Imported)?;
        let es = EvaluatedSet::new(ps, values)?;
        let mut p = project(&es, 0)?;
        p.axis = axis;
        p.profile.axis = axis;
        Ok(p)
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn profile(&self) -> &ProjectionProfile {
        &self.profile
    }

    /// Index into `profile().nodes` of every pair.
    pub fn node_of(&self) -> &[usize] {
        &self.node_of
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.abscissae.iter().copied().zip(self.values.iter().copied())
    }
}

/// Projects the evaluations onto axis `axis` (zero-based).
pub fn project(es: &EvaluatedSet, axis: usize) -> Result<Projection> {
    let (profile, node_of) = group_axis(es.points(), axis)?;
    Ok(Projection {
        axis,
        abscissae: es.points().axis(axis).collect(),
        values: es.values().to_vec(),
        profile,
        node_of,
    })
}

/// Affine map from `[0,1]^s` onto the box `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainTransform {
    lower: Vec<f64>,
    width: Vec<f64>,
}

impl DomainTransform {
    pub fn new(a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::Argument("box bounds must be non-empty and equally long".into()));
        }
        if let Some(j) = (0..a.len()).find(|&j| !(a[j] < b[j]) || !a[j].is_finite() || !b[j].is_finite()) {
            return Err(Error::Argument(format!(
                "box bound a[{j}] = {} must be finite and below b[{j}] = {}",
                a[j], b[j]
            )));
        }
        Ok(Self {
            lower: a.to_vec(),
            width: a.iter().zip(b).map(|(a, b)| b - a).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// `a + u * (b - a)` component-wise, written into `out`.
    pub fn map_into(&self, u: &[f64], out: &mut [f64]) {
        for (((o, &u), &a), &w) in out.iter_mut().zip(u).zip(&self.lower).zip(&self.width) {
            *o = a + u * w;
        }
    }

    pub fn map(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.map_into(u, &mut out);
        out
    }

    /// Volume of the box, `prod (b_j - a_j)`.
    pub fn volume(&self) -> f64 {
        self.width.iter().product()
    }
}

/// Pulls `f` on `[a,b]^s` back to `g(u) = f(a + u (b - a))` on the unit cube.
///
/// No Jacobian factor is applied: the shape of each marginal is preserved
/// and only its scale changes.
pub fn transform_domain<F>(f: F, a: &[f64], b: &[f64]) -> Result<impl Fn(&[f64]) -> f64 + Sync>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let t = DomainTransform::new(a, b)?;
    Ok(move |u: &[f64]| f(&t.map(u)))
}
