//! Product densities with closed-form marginals, used as test integrands.
//!
//! Every factor lives on a box `[a, b]` and is pulled back to `[0, 1]` by
//! `u -> a + u (b - a)` without a Jacobian. On the unit cube the marginal of
//! axis `j` is therefore
//!
//! ```text
//! f_j(u) = g_j(a_j + u (b_j - a_j)) * prod_{i != j} unit_mass_i,
//! unit_mass_i = (integral of g_i over [a_i, b_i]) / (b_i - a_i).
//! ```
//!
//! Truncated mass is not renormalised away.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;
use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::{Error, Result};
use crate::evaluation::{transform_domain, DomainTransform};

/// One Gaussian component `(weight, mean, standard deviation)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// A univariate density on a finite box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    /// `rate * exp(-rate x)` on `[0, upper]`.
    Exponential { rate: f64, upper: f64 },
    /// Beta density on `[0, 1]`.
    Beta { alpha: f64, beta: f64 },
    /// Gamma density with the given shape and rate on `[0, upper]`.
    Gamma { shape: f64, rate: f64, upper: f64 },
    /// Finite Gaussian mixture on `[lower, upper]`.
    GaussianMixture {
        components: Vec<Component>,
        lower: f64,
        upper: f64,
    },
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

impl Factor {
    /// Exponential truncated at `14 / rate` (lost mass `e^-14 < 1e-6`).
    pub fn exponential(rate: f64) -> Self {
        Factor::Exponential {
            rate,
            upper: 14.0 / rate,
        }
    }

    /// Gamma truncated at `shape/rate + 10 sqrt(shape)/rate`.
    pub fn gamma(shape: f64, rate: f64) -> Self {
        Factor::Gamma {
            shape,
            rate,
            upper: (shape + 10.0 * shape.sqrt()) / rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        match self {
            Factor::Exponential { rate, upper } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return bad(format!("exponential rate {rate} must be positive"));
                }
                if !(*upper > 0.0 && upper.is_finite()) {
                    return bad(format!("exponential truncation {upper} must be positive"));
                }
            }
            Factor::Beta { alpha, beta } => {
                if !(*alpha > 0.0 && *beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
                    return bad(format!("beta parameters ({alpha}, {beta}) must be positive"));
                }
            }
            Factor::Gamma { shape, rate, upper } => {
                if !(*shape > 0.0 && *rate > 0.0 && shape.is_finite() && rate.is_finite()) {
                    return bad(format!("gamma parameters ({shape}, {rate}) must be positive"));
                }
                if !(*upper > 0.0 && upper.is_finite()) {
                    return bad(format!("gamma truncation {upper} must be positive"));
                }
            }
            Factor::GaussianMixture {
                components,
                lower,
                upper,
            } => {
                if components.is_empty() {
                    return bad("mixture has no components".into());
                }
                if !(lower < upper && lower.is_finite() && upper.is_finite()) {
                    return bad(format!("mixture box [{lower}, {upper}] is empty"));
                }
                if components.iter().any(|c| !(c.weight > 0.0 && c.sd > 0.0 && c.mean.is_finite())) {
                    return bad("mixture weights and standard deviations must be positive".into());
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return bad(format!("mixture weights sum to {total}, not 1"));
                }
            }
        }
        Ok(())
    }

    /// The box `[a, b]` the factor is restricted to.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Factor::Exponential { upper, .. } | Factor::Gamma { upper, .. } => (0.0, *upper),
            Factor::Beta { .. } => (0.0, 1.0),
            Factor::GaussianMixture { lower, upper, .. } => (*lower, *upper),
        }
    }

    /// Density at `x` in the factor's own coordinates.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            Factor::Exponential { rate, .. } => rate * (-rate * x).exp(),
            Factor::Beta { alpha, beta } => {
                let ln_b = ln_gamma(*alpha) + ln_gamma(*beta) - ln_gamma(alpha + beta);
                x.powf(alpha - 1.0) * (1.0 - x).powf(beta - 1.0) * (-ln_b).exp()
            }
            Factor::Gamma { shape, rate, .. } => {
                if x == 0.0 {
                    return match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Greater) => 0.0,
                        Some(std::cmp::Ordering::Equal) => *rate,
                        _ => f64::INFINITY,
                    };
                }
                (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(*shape)).exp()
            }
            Factor::GaussianMixture { components, .. } => components
                .iter()
                .map(|c| {
                    let z = (x - c.mean) / c.sd;
                    c.weight * (-0.5 * z * z).exp() / (c.sd * (2.0 * std::f64::consts::PI).sqrt())
                })
                .sum(),
        }
    }

    /// Density pulled back to `[0, 1]`.
    pub fn density_unit(&self, u: f64) -> f64 {
        let (a, b) = self.bounds();
        self.density(a + u * (b - a))
    }

    /// Integral of the density over its box.
    pub fn truncated_mass(&self) -> f64 {
        match self {
            Factor::Exponential { rate, upper } => -(-rate * upper).exp_m1(),
            Factor::Beta { .. } => 1.0,
            Factor::Gamma { shape, rate, upper } => gamma_lr(*shape, rate * upper),
            Factor::GaussianMixture {
                components,
                lower,
                upper,
            } => components
                .iter()
                .map(|c| c.weight * (normal_cdf((upper - c.mean) / c.sd) - normal_cdf((lower - c.mean) / c.sd)))
                .sum(),
        }
    }

    /// Integral of [`Factor::density_unit`] over `[0, 1]`.
    pub fn unit_mass(&self) -> f64 {
        let (a, b) = self.bounds();
        self.truncated_mass() / (b - a)
    }

    /// `sup |g^(n)|` on `[0, inf)` when known in closed form: `rate^(n+1)`
    /// for the exponential.
    pub fn derivative_bound(&self, n: u32) -> Option<f64> {
        match self {
            Factor::Exponential { rate, .. } => Some(derivative_bound(*rate, n)),
            _ => None,
        }
    }
}

/// `sup_x |d^n/dx^n (rate e^{-rate x})| = rate^(n+1)`, attained as `x -> 0+`.
pub fn derivative_bound(rate: f64, n: u32) -> f64 {
    rate.powi(n as i32 + 1)
}

/// Independent product of univariate factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductDistribution {
    factors: Vec<Factor>,
}

impl ProductDistribution {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Argument("distribution needs at least one factor".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(Self { factors })
    }

    /// `s` copies of the same factor.
    pub fn iid(factor: Factor, s: usize) -> Result<Self> {
        Self::new(vec![factor; s])
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Joint density on `[0,1]^s`: the product of factor densities composed
    /// with the affine map onto the factors' boxes.
    pub fn joint_density(&self) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
        let (a, b): (Vec<f64>, Vec<f64>) = self.factors.iter().map(Factor::bounds).unzip();
        let factors = &self.factors;
        transform_domain(
            move |x: &[f64]| factors.iter().zip(x).map(|(f, &x)| f.density(x)).product(),
            &a,
            &b,
        )
        .expect("factor boxes are validated")
    }

    /// Affine map from the unit cube onto the product box.
    pub fn domain(&self) -> DomainTransform {
        let (a, b): (Vec<f64>, Vec<f64>) = self.factors.iter().map(Factor::bounds).unzip();
        DomainTransform::new(&a, &b).expect("factor boxes are validated")
    }

    /// Constant multiplying factor `j`'s density in the marginal of axis `j`.
    pub fn marginal_scale(&self, j: usize) -> f64 {
        self.factors
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, f)| f.unit_mass())
            .product()
    }

    /// Exact marginal of axis `j` (zero-based) on `[0, 1]`.
    pub fn true_marginal(&self, j: usize) -> impl Fn(f64) -> f64 + Sync + '_ {
        let scale = self.marginal_scale(j);
        let factor = &self.factors[j];
        move |u| scale * factor.density_unit(u)
    }

    /// Integral of the joint density over the unit cube.
    pub fn unit_mass(&self) -> f64 {
        self.factors.iter().map(Factor::unit_mass).product()
    }

    /// Parses the TOML distribution file format:
    ///
    /// ```toml
    /// [[factor]]
    /// kind = "exponential"   # rate; upper (default 14/rate)
    /// rate = 1.0
    /// upper = 8.0
    /// repeat = 2             # optional, default 1
    ///
    /// [[factor]]
    /// kind = "beta"          # alpha, beta
    /// alpha = 2.0
    /// beta = 5.0
    ///
    /// [[factor]]
    /// kind = "gamma"         # shape, rate; upper (default (shape + 10 sqrt(shape)) / rate)
    /// shape = 3.0
    /// rate = 1.0
    ///
    /// [[factor]]
    /// kind = "gaussian_mixture"
    /// lower = -4.0
    /// upper = 4.0
    /// components = [[0.4, -1.5, 0.6], [0.6, 1.5, 0.8]]   # [weight, mean, sd]
    /// ```
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: DistributionFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut factors = Vec::new();
        for entry in file.factor {
            let f = entry.spec.into_factor();
            factors.extend(std::iter::repeat_n(f, entry.repeat));
        }
        Self::new(factors)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionFile {
    factor: Vec<FactorEntry>,
}

#[derive(Debug, Deserialize)]
struct FactorEntry {
    #[serde(flatten)]
    spec: FactorSpec,
    #[serde(default = "one")]
    repeat: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum FactorSpec {
    Exponential {
        rate: f64,
        upper: Option<f64>,
    },
    Beta {
        alpha: f64,
        beta: f64,
    },
    Gamma {
        shape: f64,
        rate: f64,
        upper: Option<f64>,
    },
    GaussianMixture {
        components: Vec<[f64; 3]>,
        lower: f64,
        upper: f64,
    },
}

impl FactorSpec {
    fn into_factor(self) -> Factor {
        match self {
            FactorSpec::Exponential { rate, upper } => match upper {
                Some(upper) => Factor::Exponential { rate, upper },
                None => Factor::exponential(rate),
            },
            FactorSpec::Beta { alpha, beta } => Factor::Beta { alpha, beta },
            FactorSpec::Gamma { shape, rate, upper } => match upper {
                Some(upper) => Factor::Gamma { shape, rate, upper },
                None => Factor::gamma(shape, rate),
            },
            FactorSpec::GaussianMixture {
                components,
                lower,
                upper,
            } => Factor::GaussianMixture {
                components: components
                    .into_iter()
                    .map(|[weight, mean, sd]| Component { weight, mean, sd })
                    .collect(),
                lower,
                upper,
            },
        }
    }
}

/// Parameter sets used by the experiment suite and the bundled configs.
pub mod presets {
    use super::*;

    /// Two independent `Exp(1)` factors truncated to `[0, 8]`.
    pub fn bivariate_exponential() -> ProductDistribution {
        ProductDistribution::iid(Factor::Exponential { rate: 1.0, upper: 8.0 }, 2).unwrap()
    }

    /// `s` independent `Beta(2, 5)` factors.
    pub fn beta_product(s: usize) -> ProductDistribution {
        ProductDistribution::iid(Factor::Beta { alpha: 2.0, beta: 5.0 }, s).unwrap()
    }

    /// Bimodal stand-in: `0.4 N(-1.5, 0.6^2) + 0.6 N(1.5, 0.8^2)` on `[-4, 4]`.
    pub fn bimodal_mixture() -> Factor {
        Factor::GaussianMixture {
            components: vec![
                Component {
                    weight: 0.4,
                    mean: -1.5,
                    sd: 0.6,
                },
                Component {
                    weight: 0.6,
                    mean: 1.5,
                    sd: 0.8,
                },
            ],
            lower: -4.0,
            upper: 4.0,
        }
    }

    pub fn multimodal_product(s: usize) -> ProductDistribution {
        ProductDistribution::iid(bimodal_mixture(), s).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, intervals: usize) -> f64 {
        let h = 1.0 / intervals as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..intervals {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn exponential_corner_density() {
        let d = presets::bivariate_exponential();
        let f = d.joint_density();
        assert_eq!(f(&[0.0, 0.0]), 1.0);
        assert!((f(&[0.5, 0.25]) - (-4.0f64).exp() * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn beta_vanishes_at_origin() {
        let d = presets::beta_product(2);
        assert_eq!(d.joint_density()(&[0.0, 0.0]), 0.0);
        // Beta(2,5) = 30 x (1-x)^4
        let b = Factor::Beta { alpha: 2.0, beta: 5.0 };
        for x in [0.1, 0.3, 0.8] {
            assert!((b.density(x) - 30.0 * x * (1.0 - x).powi(4)).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_product_matches_factorwise_evaluation() {
        let factors: Vec<Factor> = (0..10).map(|k| Factor::gamma(2.0 + k as f64 * 0.5, 1.0 + 0.1 * k as f64)).collect();
        let d = ProductDistribution::new(factors.clone()).unwrap();
        let u: Vec<f64> = (0..10).map(|k| ((k as f64 + 1.0) * 0.618_033_988_7).fract()).collect();
        let mut want = 1.0;
        for (f, &u) in factors.iter().zip(&u) {
            let Factor::Gamma { shape, rate, upper } = *f else { unreachable!() };
            let x = u * upper;
            // Independent formula: r^k x^(k-1) e^(-r x) / Gamma(k)
            want *= rate.powf(shape) * x.powf(shape - 1.0) * (-rate * x).exp() / statrs::function::gamma::gamma(shape);
        }
        let got = d.joint_density()(&u);
        assert!((got - want).abs() <= 1e-12 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn exponential_masses() {
        let f = Factor::Exponential { rate: 1.0, upper: 8.0 };
        assert!((f.truncated_mass() - (1.0 - (-8.0f64).exp())).abs() < 1e-15);
        assert!((f.unit_mass() - (1.0 - (-8.0f64).exp()) / 8.0).abs() < 1e-15);
        let d = presets::bivariate_exponential();
        assert!((d.marginal_scale(0) - f.unit_mass()).abs() < 1e-15);
    }

    #[test]
    fn untruncated_beta_marginal_is_the_factor() {
        let d = presets::beta_product(3);
        let m = d.true_marginal(1);
        let b = Factor::Beta { alpha: 2.0, beta: 5.0 };
        for u in [0.0, 0.2, 0.5, 0.99] {
            assert!((m(u) - b.density(u)).abs() < 1e-12);
        }
    }

    #[test]
    fn one_dimensional_marginal_is_joint() {
        let d = ProductDistribution::new(vec![Factor::gamma(3.0, 2.0)]).unwrap();
        let joint = d.joint_density();
        let m = d.true_marginal(0);
        for u in [0.01, 0.3, 0.7] {
            assert_eq!(m(u), joint(&[u]));
        }
    }

    #[test]
    fn marginals_integrate_to_total_mass() {
        let dists = [
            presets::bivariate_exponential(),
            presets::beta_product(4),
            presets::multimodal_product(3),
            ProductDistribution::new(vec![Factor::gamma(2.0, 1.0), Factor::gamma(5.0, 2.0), Factor::exponential(3.0)]).unwrap(),
        ];
        for d in &dists {
            for j in 0..d.dim() {
                let integral = simpson(d.true_marginal(j), 20_000);
                assert!((integral - d.unit_mass()).abs() < 1e-8, "{d:?} axis {j}: {integral} vs {}", d.unit_mass());
            }
        }
    }

    #[test]
    fn symmetric_single_component_mixture() {
        let f = Factor::GaussianMixture {
            components: vec![Component {
                weight: 1.0,
                mean: 0.0,
                sd: 1.3,
            }],
            lower: -3.0,
            upper: 3.0,
        };
        let d = ProductDistribution::new(vec![f.clone(), f]).unwrap();
        let m = d.true_marginal(0);
        for delta in [0.05, 0.2, 0.37, 0.5] {
            assert!((m(0.5 - delta) - m(0.5 + delta)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_bounds() {
        assert_eq!(derivative_bound(1.0, 7), 1.0);
        assert_eq!(derivative_bound(2.0, 3), 16.0);
        assert_eq!(Factor::exponential(2.0).derivative_bound(3), Some(16.0));
        assert_eq!(Factor::Beta { alpha: 2.0, beta: 2.0 }.derivative_bound(3), None);
    }

    #[test]
    fn truncation_defaults_lose_little_mass() {
        for f in [Factor::exponential(0.5), Factor::exponential(4.0)] {
            assert!(1.0 - f.truncated_mass() < 1e-6);
        }
        for (k, r) in [(3.0, 1.0), (5.0, 2.0), (9.0, 0.5)] {
            assert!(1.0 - Factor::gamma(k, r).truncated_mass() < 1e-6, "shape {k}");
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ProductDistribution::new(vec![]).is_err());
        assert!(ProductDistribution::new(vec![Factor::exponential(-1.0)]).is_err());
        assert!(ProductDistribution::new(vec![Factor::Beta { alpha: 0.0, beta: 1.0 }]).is_err());
        assert!(ProductDistribution::new(vec![Factor::gamma(2.0, 0.0)]).is_err());
        let bad_mix = Factor::GaussianMixture {
            components: vec![Component {
                weight: 0.5,
                mean: 0.0,
                sd: 1.0,
            }],
            lower: -1.0,
            upper: 1.0,
        };
        assert!(ProductDistribution::new(vec![bad_mix]).is_err());
    }

    #[test]
    fn parses_toml() {
        let text = r#"
            [[factor]]
            kind = "exponential"
            rate = 1.0
            upper = 8.0
            repeat = 2

            [[factor]]
            kind = "beta"
            alpha = 2.0
            beta = 5.0

            [[factor]]
            kind = "gamma"
            shape = 4.0
            rate = 2.0

            [[factor]]
            kind = "gaussian_mixture"
            lower = -4.0
            upper = 4.0
            components = [[0.4, -1.5, 0.6], [0.6, 1.5, 0.8]]
        "#;
        let d = ProductDistribution::from_toml(text).unwrap();
        assert_eq!(d.dim(), 5);
        assert_eq!(d.factors()[1], Factor::Exponential { rate: 1.0, upper: 8.0 });
        assert_eq!(d.factors()[3], Factor::gamma(4.0, 2.0));
        assert_eq!(d.factors()[4], presets::bimodal_mixture());
        assert!(ProductDistribution::from_toml("[[factor]]\nkind = \"beta\"\nalpha = 1.0\n").is_err());
        assert!(ProductDistribution::from_toml("[[factor]]\nkind = \"beta\"\nalpha = -1.0\nbeta = 2.0\n").is_err());
    }
}
