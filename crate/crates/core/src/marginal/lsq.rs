//! Weighted polynomial least squares through the normal equations.
//!
//! The design matrix uses Legendre polynomials in `t = 2x - 1` rather than
//! raw monomials: the fitted polynomial is the same, but the Gram matrix
//! stays well conditioned for the degrees used here.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `P_0(t), ..., P_degree(t)` written into `out`.
fn legendre_row(t: f64, out: &mut [f64]) {
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = t;
    }
    for k in 2..out.len() {
        let kf = k as f64;
        out[k] = ((2.0 * kf - 1.0) * t * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
    }
}

/// Coefficients of a Legendre series on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    coeffs: Vec<f64>,
}

impl LegendreSeries {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Clenshaw evaluation at `x` in `[0, 1]` coordinates.
    pub fn eval(&self, x: f64) -> f64 {
        let t = 2.0 * x - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for k in (1..self.coeffs.len()).rev() {
            let kf = k as f64;
            let alpha = (2.0 * kf + 1.0) / (kf + 1.0) * t;
            let beta = -(kf + 1.0) / (kf + 2.0);
            let b0 = self.coeffs[k] + alpha * b1 + beta * b2;
            b2 = b1;
            b1 = b0;
        }
        // P_1 = t, and the beta for k = 0 is -1/2.
        self.coeffs[0] + t * b1 - 0.5 * b2
    }
}

/// Minimises `sum_i w_i (y_i - p(x_i))^2` over polynomials of degree
/// `degree`. `weights` of `None` means all ones.
///
/// Solves the normal equations by Cholesky with one step of iterative
/// refinement on the normal-equation residual.
pub fn weighted_polyfit(x: &[f64], y: &[f64], weights: Option<&[f64]>, degree: usize) -> Result<LegendreSeries> {
    if x.len() != y.len() || weights.is_some_and(|w| w.len() != x.len()) {
        return Err(Error::Argument("abscissae, values and weights differ in length".into()));
    }
    let p = degree + 1;
    if x.len() < p {
        return Err(Error::Singular(format!(
            "{} samples cannot determine a degree-{degree} polynomial",
            x.len()
        )));
    }
    let mut gram = DMatrix::<f64>::zeros(p, p);
    let mut rhs = DVector::<f64>::zeros(p);
    let mut row = vec![0.0; p];
    for i in 0..x.len() {
        let w = weights.map_or(1.0, |w| w[i]);
        legendre_row(2.0 * x[i] - 1.0, &mut row);
        for a in 0..p {
            let wa = w * row[a];
            rhs[a] += wa * y[i];
            for b in 0..=a {
                gram[(a, b)] += wa * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            gram[(b, a)] = gram[(a, b)];
        }
    }
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("normal equations are not positive definite".into()))?;
    let mut c = chol.solve(&rhs);
    let residual = &rhs - &gram * &c;
    c += chol.solve(&residual);
    Ok(LegendreSeries {
        coeffs: c.iter().copied().collect(),
    })
}
