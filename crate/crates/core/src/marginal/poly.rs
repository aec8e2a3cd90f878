use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::g17;

/// Where the interpolation node of a partition bin sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeRule {
    /// The bin's left breakpoint `z_k`.
    #[default]
    LeftBreakpoint,
    /// The bin's midpoint `(z_k + z_{k+1}) / 2`.
    Midpoint,
}

/// How a [`MarginalPoly`] was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitMode {
    /// Interpolant through the point-wise means (ordinary least squares).
    PointwiseMean,
    /// Weighted least squares with one weight per distinct abscissa.
    WeightedLeastSquares,
    /// Interpolant through the partition means.
    PartitionMean {
        breakpoints: Vec<f64>,
        node_rule: NodeRule,
    },
    /// Least-squares polynomial of degree `partitions - 1` over every
    /// projected pair.
    ProjectionLeastSquares { partitions: usize },
}

/// Monomial coefficients are only offered up to this node count; beyond it
/// the Vandermonde conversion loses all accuracy.
pub const MAX_MONOMIAL_NODES: usize = 20;

/// A polynomial of degree `n - 1` held as its values at `n` distinct nodes and
/// evaluated with the second (true) barycentric formula.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalPoly {
    axis: usize,
    nodes: Vec<f64>,
    node_values: Vec<f64>,
    bary: Vec<f64>,
    mode: FitMode,
}

/// Value returned by [`MarginalPoly::eval_checked`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyValue {
    pub value: f64,
    /// `x` lies outside `[0, 1]`.
    pub extrapolated: bool,
}

impl MarginalPoly {
    /// Builds the interpolant through `(nodes, node_values)`. Nodes must be
    /// finite and strictly increasing.
    pub fn from_nodes(axis: usize, nodes: Vec<f64>, node_values: Vec<f64>, mode: FitMode) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != node_values.len() {
            return Err(Error::Argument(format!(
                "need matching non-empty nodes and values, got {} and {}",
                nodes.len(),
                node_values.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::Argument("nodes must be finite and strictly increasing".into()));
        }
        let bary = barycentric_weights(&nodes);
        Ok(Self {
            axis,
            nodes,
            node_values,
            bary,
            mode,
        })
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node_values(&self) -> &[f64] {
        &self.node_values
    }

    pub fn mode(&self) -> &FitMode {
        &self.mode
    }

    pub fn eval(&self, x: f64) -> f64 {
        if let Ok(k) = self.nodes.binary_search_by(|z| z.total_cmp(&x)) {
            return self.node_values[k];
        }
        let y0 = self.node_values[0];
        if self.node_values.iter().all(|&y| y == y0) {
            return y0;
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&z, &y), &w) in self.nodes.iter().zip(&self.node_values).zip(&self.bary) {
            let c = w / (x - z);
            num += c * y;
            den += c;
        }
        num / den
    }

    /// Evaluates and flags extrapolation outside the unit interval.
    pub fn eval_checked(&self, x: f64) -> PolyValue {
        PolyValue {
            value: self.eval(x),
            extrapolated: !(0.0..=1.0).contains(&x),
        }
    }

    /// Coefficients `c_0, ..., c_{n-1}` of `sum c_p x^p`, via Newton divided
    /// differences. `None` above [`MAX_MONOMIAL_NODES`] nodes.
    pub fn monomial_coeffs(&self) -> Option<Vec<f64>> {
        let n = self.nodes.len();
        if n > MAX_MONOMIAL_NODES {
            return None;
        }
        let z = &self.nodes;
        let mut dd = self.node_values.clone();
        for level in 1..n {
            for k in (level..n).rev() {
                dd[k] = (dd[k] - dd[k - 1]) / (z[k] - z[k - level]);
            }
        }
        let mut coeffs = vec![dd[n - 1]];
        for k in (0..n - 1).rev() {
            // coeffs <- coeffs * (x - z_k) + dd_k
            let mut next = vec![0.0; coeffs.len() + 1];
            for (p, &c) in coeffs.iter().enumerate() {
                next[p + 1] += c;
                next[p] -= c * z[k];
            }
            next[0] += dd[k];
            coeffs = next;
        }
        Some(coeffs)
    }

    /// JSON record `{axis, degree, nodes, node_values, mode, breakpoints?}`;
    /// `axis` is one-based in files.
    pub fn to_record(&self) -> PolyRecord {
        let (mode, breakpoints, node_rule, partitions) = match &self.mode {
            FitMode::PointwiseMean => ("pointwise_mean", None, None, None),
            FitMode::WeightedLeastSquares => ("weighted_least_squares", None, None, None),
            FitMode::PartitionMean {
                breakpoints,
                node_rule,
            } => ("partition_mean", Some(breakpoints.clone()), Some(*node_rule), None),
            FitMode::ProjectionLeastSquares { partitions } => {
                ("projection_least_squares", None, None, Some(*partitions))
            }
        };
        PolyRecord {
            axis: self.axis + 1,
            degree: self.degree(),
            nodes: self.nodes.clone(),
            node_values: self.node_values.clone(),
            mode: mode.to_string(),
            breakpoints,
            node_rule,
            partitions,
        }
    }

    pub fn from_record(rec: &PolyRecord) -> Result<Self> {
        let mode = match rec.mode.as_str() {
            "pointwise_mean" => FitMode::PointwiseMean,
            "weighted_least_squares" => FitMode::WeightedLeastSquares,
            "partition_mean" => FitMode::PartitionMean {
                breakpoints: rec.breakpoints.clone().unwrap_or_default(),
                node_rule: rec.node_rule.unwrap_or_default(),
            },
            "projection_least_squares" => FitMode::ProjectionLeastSquares {
                partitions: rec.partitions.unwrap_or(rec.nodes.len()),
            },
            other => return Err(Error::Parse(format!("unknown fit mode {other:?}"))),
        };
        if rec.axis == 0 {
            return Err(Error::Parse("axis is one-based".into()));
        }
        Self::from_nodes(rec.axis - 1, rec.nodes.clone(), rec.node_values.clone(), mode)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("record serializes")
    }

    /// CSV of `x,poly(x)` on an equidistant grid of `grid_size` points, or
    /// `x,poly(x),truth(x)` when a reference is supplied.
    pub fn to_csv(&self, grid_size: usize, truth: Option<&dyn Fn(f64) -> f64>) -> String {
        let mut out = String::from(if truth.is_some() { "x,approx,truth\n" } else { "x,approx\n" });
        for x in equidistant(grid_size) {
            out.push_str(&g17(x));
            out.push(',');
            out.push_str(&g17(self.eval(x)));
            if let Some(t) = truth {
                out.push(',');
                out.push_str(&g17(t(x)));
            }
            out.push('\n');
        }
        out
    }
}

/// Serialized form of a [`MarginalPoly`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub axis: usize,
    pub degree: usize,
    pub nodes: Vec<f64>,
    pub node_values: Vec<f64>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_rule: Option<NodeRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<usize>,
}

/// `grid_size` equidistant points on `[0, 1]` including both endpoints.
pub fn equidistant(grid_size: usize) -> impl Iterator<Item = f64> {
    let last = grid_size.saturating_sub(1).max(1) as f64;
    (0..grid_size).map(move |i| i as f64 / last)
}

/// Barycentric weights `1 / prod_{i != k} (z_k - z_i)`, rescaled so the
/// largest magnitude is one. Computed in log space so large node counts
/// neither overflow nor underflow.
fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let logs: Vec<f64> = (0..n)
        .map(|k| {
            -(0..n)
                .filter(|&i| i != k)
                .map(|i| (nodes[k] - nodes[i]).abs().ln())
                .sum::<f64>()
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    logs.iter()
        .enumerate()
        .map(|(k, l)| {
            // Nodes are sorted, so n-1-k factors are negative.
            let sign = if (n - 1 - k) % 2 == 0 { 1.0 } else { -1.0 };
            sign * (l - top).exp()
        })
        .collect()
}

/// Chebyshev points of the second kind mapped to `[0, 1]`, ascending.
pub fn chebyshev_lobatto(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5];
    }
    let mut nodes: Vec<f64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / (n - 1) as f64;
            0.5 * (1.0 - theta.cos())
        })
        .collect();
    nodes[0] = 0.0;
    nodes[n - 1] = 1.0;
    if n % 2 == 1 {
        nodes[n / 2] = 0.5;
    }
    nodes
}
