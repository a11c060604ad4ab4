//! Fisher information on the one-parameter manifold `theta -> (p_w, p_w_perp)`,
//! its metric normalization, and the length/divergence functionals.

use std::fmt;
use std::str::FromStr;

use crate::error::{require, Error, Result};
use crate::profile::ProfileKind;
use crate::quadrature::simpson;
use crate::scenarios::{ProbabilityPath, Scenario};

/// Probability floor below which the finite-difference Fisher estimate is
/// considered degenerate.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// How the Fisher information is turned into a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `g = F`.
    RawFisher,
    /// `g = F / 4`, the pure-state metric with vanishing phase variance.
    #[default]
    FubiniStudy,
}

impl Normalization {
    pub fn factor(self) -> f64 {
        match self {
            Normalization::RawFisher => 1.0,
            Normalization::FubiniStudy => 0.25,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normalization::RawFisher => "raw",
            Normalization::FubiniStudy => "fs",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fs" | "fubini-study" | "fubinistudy" => Ok(Normalization::FubiniStudy),
            "raw" | "fisher" => Ok(Normalization::RawFisher),
            other => Err(format!("unknown normalization `{other}` (expected fs or raw)")),
        }
    }
}

/// Closed-form Fisher information of the scenario's probability path.
pub fn fisher_closed_form(scenario: &Scenario, theta: f64) -> Result<f64> {
    require(theta.is_finite() && theta >= 0.0, "theta", theta, "must be finite and non-negative")?;
    Ok(fisher_unchecked(scenario, theta))
}

pub(crate) fn fisher_unchecked(scenario: &Scenario, theta: f64) -> f64 {
    let rate = scenario.rabi_rate();
    let f0 = 4.0 * rate * rate;
    let l = scenario.lambda();
    match scenario.kind() {
        ProfileKind::Constant => f0,
        ProfileKind::Oscillatory => {
            let c = (l * theta).cos();
            f0 * c * c
        }
        ProfileKind::PowerLaw => f0 / (1.0 + l * theta).powi(4),
        ProfileKind::Exponential => f0 * (-2.0 * l * theta).exp(),
    }
}

/// A scenario's Fisher information together with the metric normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherFunction {
    scenario: Scenario,
    normalization: Normalization,
}

impl FisherFunction {
    pub fn new(scenario: Scenario, normalization: Normalization) -> Self {
        Self {
            scenario,
            normalization,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn fisher(&self, theta: f64) -> Result<f64> {
        fisher_closed_form(&self.scenario, theta)
    }

    pub fn metric(&self, theta: f64) -> Result<f64> {
        metric_value(self, theta)
    }
}

pub fn metric_value(fisher: &FisherFunction, theta: f64) -> Result<f64> {
    Ok(fisher.normalization.factor() * fisher.fisher(theta)?)
}

/// Finite-difference Fisher estimate, flagged when the analytic fallback was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherEstimate {
    pub value: f64,
    pub fallback: bool,
}

/// Default central-difference step `1e-5 max(1, |theta|)`.
pub fn default_fisher_step(theta: f64) -> f64 {
    1e-5 * theta.abs().max(1.0)
}

/// `sum_k (dp_k/dtheta)^2 / p_k` with central differences of step `h_step`.
///
/// Near `p_w in {0, 1}` the quotient is singular; with `allow_fallback`
/// the regular identity `4 omega_H^2 / hbar^2` is returned instead.
pub fn fisher_numeric(
    path: &ProbabilityPath,
    theta: f64,
    h_step: f64,
    allow_fallback: bool,
) -> Result<FisherEstimate> {
    require(h_step.is_finite() && h_step > 0.0, "h_step", h_step, "must be positive")?;
    require(theta.is_finite() && theta > h_step, "theta", theta, "must exceed the difference step")?;

    let centre = path.at(theta)?;
    let lo = path.at(theta - h_step)?;
    let hi = path.at(theta + h_step)?;
    let smallest = [centre, lo, hi]
        .iter()
        .flat_map(|p| [p.success, p.failure])
        .fold(f64::INFINITY, f64::min);
    if smallest < PROBABILITY_FLOOR {
        if !allow_fallback {
            return Err(Error::NearDegenerate {
                theta,
                p_w: centre.success,
            });
        }
        let scenario = path.scenario();
        let w = scenario.omega_h(theta)? / scenario.hbar();
        return Ok(FisherEstimate {
            value: 4.0 * w * w,
            fallback: true,
        });
    }
    let inv = 0.5 / h_step;
    let d_success = (hi.success - lo.success) * inv;
    let d_failure = (hi.failure - lo.failure) * inv;
    Ok(FisherEstimate {
        value: d_success * d_success / centre.success + d_failure * d_failure / centre.failure,
        fallback: false,
    })
}

/// Uniformly sampled parametrized path `xi -> theta(xi)` with its velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    xi0: f64,
    step: f64,
    theta: Vec<f64>,
    theta_dot: Vec<f64>,
}

impl SampledPath {
    /// Samples must be strictly increasing in `xi` and uniformly spaced.
    pub fn from_samples(xi: &[f64], theta: Vec<f64>, theta_dot: Vec<f64>) -> Result<Self> {
        if xi.len() < 2 {
            return Err(Error::TooFewSamples {
                required: 2,
                got: xi.len(),
            });
        }
        if theta.len() != xi.len() || theta_dot.len() != xi.len() {
            return Err(Error::InvalidParameter {
                name: "samples",
                value: theta.len() as f64,
                reason: "xi, theta and theta_dot lengths differ",
            });
        }
        let span = xi[xi.len() - 1] - xi[0];
        let step = span / (xi.len() - 1) as f64;
        if step.is_nan() || step <= 0.0 {
            return Err(Error::NonUniformSpacing);
        }
        for (i, w) in xi.windows(2).enumerate() {
            let d = w[1] - w[0];
            let expected = xi[0] + (i + 1) as f64 * step;
            if d.is_nan() || d <= 0.0 || (w[1] - expected).abs() > 1e-9 * span.max(1.0) {
                return Err(Error::NonUniformSpacing);
            }
        }
        Ok(Self {
            xi0: xi[0],
            step,
            theta,
            theta_dot,
        })
    }

    /// Samples `f(xi) = (theta, theta_dot)` at `n` uniform points of `[start, end]`.
    pub fn from_fn<F>(start: f64, end: f64, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<(f64, f64)>,
    {
        if n < 2 {
            return Err(Error::TooFewSamples { required: 2, got: n });
        }
        require(end > start, "end", end, "must exceed start")?;
        let step = (end - start) / (n - 1) as f64;
        let mut theta = Vec::with_capacity(n);
        let mut theta_dot = Vec::with_capacity(n);
        for i in 0..n {
            let xi = if i == n - 1 { end } else { start + i as f64 * step };
            let (t, d) = f(xi)?;
            theta.push(t);
            theta_dot.push(d);
        }
        Ok(Self {
            xi0: start,
            step,
            theta,
            theta_dot,
        })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn start(&self) -> f64 {
        self.xi0
    }

    pub fn end(&self) -> f64 {
        self.xi0 + self.step * (self.len() - 1) as f64
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_dot(&self) -> &[f64] {
        &self.theta_dot
    }

    /// `theta_dot^2 g(theta)` at every sample.
    fn squared_speed(&self, fisher: &FisherFunction) -> Result<Vec<f64>> {
        self.theta
            .iter()
            .zip(&self.theta_dot)
            .map(|(&t, &d)| Ok(d * fisher.metric(t)? * d))
            .collect()
    }
}

/// Length and divergence of one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathFunctional {
    pub length: f64,
    pub divergence: f64,
    pub step: f64,
}

impl PathFunctional {
    /// `I - L^2`, non-negative up to quadrature error times the path duration.
    pub fn gap(&self, duration: f64) -> f64 {
        duration * self.divergence - self.length * self.length
    }
}

/// `int sqrt(theta_dot g theta_dot) dxi`.
pub fn entropic_length(fisher: &FisherFunction, path: &SampledPath) -> Result<f64> {
    let integrand: Vec<f64> = path.squared_speed(fisher)?.into_iter().map(f64::sqrt).collect();
    Ok(simpson(&integrand, path.step))
}

/// `int theta_dot g theta_dot dxi`.
pub fn entropic_divergence(fisher: &FisherFunction, path: &SampledPath) -> Result<f64> {
    Ok(simpson(&path.squared_speed(fisher)?, path.step))
}

pub fn path_functional(fisher: &FisherFunction, path: &SampledPath) -> Result<PathFunctional> {
    let sq = path.squared_speed(fisher)?;
    let root: Vec<f64> = sq.iter().map(|v| v.sqrt()).collect();
    Ok(PathFunctional {
        length: simpson(&root, path.step),
        divergence: simpson(&sq, path.step),
        step: path.step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn scenario(kind: ProfileKind, rate: f64, lambda: f64) -> Scenario {
        Scenario::dimensionless(kind, rate, lambda).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let c = scenario(ProfileKind::Constant, 1.0, 0.0);
        for t in [0.0, 0.5, 9.0] {
            assert_eq!(fisher_closed_form(&c, t).unwrap(), 4.0);
        }
        let p = scenario(ProfileKind::PowerLaw, 0.6, 3.0);
        assert!((fisher_closed_form(&p, 0.0).unwrap() - 4.0 * 0.36).abs() < 1e-15);
        let o = scenario(ProfileKind::Oscillatory, 0.5, 1.0 / PI);
        let got = fisher_closed_form(&o, 1.0).unwrap();
        assert!((got - (1.0 / PI).cos().powi(2)).abs() < 1e-15);
        assert!((got - 0.9021).abs() < 1e-4);
        assert!(fisher_closed_form(&o, -1.0).is_err());
    }

    #[test]
    fn metric_normalization() {
        let c = scenario(ProfileKind::Constant, 1.0, 0.0);
        let fs = FisherFunction::new(c, Normalization::FubiniStudy);
        let raw = FisherFunction::new(c, Normalization::RawFisher);
        assert_eq!(metric_value(&fs, 1.0).unwrap(), 1.0);
        assert_eq!(metric_value(&raw, 1.0).unwrap(), 4.0);
        let e = scenario(ProfileKind::Exponential, 1.0, 1.0);
        for n in [Normalization::FubiniStudy, Normalization::RawFisher] {
            assert!(FisherFunction::new(e, n).metric(400.0).unwrap() < 1e-300);
        }
        assert_eq!(Normalization::default(), Normalization::FubiniStudy);
        assert_eq!("raw".parse::<Normalization>().unwrap(), Normalization::RawFisher);
    }

    #[test]
    fn numeric_examples() {
        let c = scenario(ProfileKind::Constant, 1.0, 0.0);
        let est = fisher_numeric(&c.path(), 0.3, 1e-5, false).unwrap();
        assert!(!est.fallback);
        assert!((est.value - 4.0).abs() < 1e-6);

        let e = scenario(ProfileKind::Exponential, FRAC_PI_2, 1.0);
        let est = fisher_numeric(&e.path(), 1.0, 1e-5, false).unwrap();
        let oracle = 4.0 * FRAC_PI_2 * FRAC_PI_2 * (-2.0f64).exp();
        assert!((est.value - oracle).abs() < 1e-5);
    }

    #[test]
    fn numeric_at_unit_peak_is_degenerate() {
        let c = scenario(ProfileKind::Constant, 1.0, 0.0);
        let peak = FRAC_PI_2;
        assert!(matches!(
            fisher_numeric(&c.path(), peak, 1e-9, false),
            Err(Error::NearDegenerate { .. })
        ));
        let est = fisher_numeric(&c.path(), peak, 1e-9, true).unwrap();
        assert!(est.fallback);
        assert_eq!(est.value, 4.0);
        assert!(fisher_numeric(&c.path(), 1e-6, 1e-5, true).is_err());
    }

    #[test]
    fn constant_path_length_and_divergence() {
        let c = scenario(ProfileKind::Constant, 1.0, 0.0);
        let fs = FisherFunction::new(c, Normalization::FubiniStudy);
        let line = SampledPath::from_fn(0.0, 1.0, 1001, |xi| Ok((xi, 1.0))).unwrap();
        assert!((entropic_length(&fs, &line).unwrap() - 1.0).abs() < 1e-14);
        assert!((entropic_divergence(&fs, &line).unwrap() - 1.0).abs() < 1e-14);

        let still = SampledPath::from_fn(0.0, 1.0, 101, |_| Ok((0.7, 0.0))).unwrap();
        assert_eq!(entropic_length(&fs, &still).unwrap(), 0.0);
        assert_eq!(entropic_divergence(&fs, &still).unwrap(), 0.0);

        let square = SampledPath::from_fn(0.0, 1.0, 1001, |xi| Ok((xi * xi, 2.0 * xi))).unwrap();
        let f = path_functional(&fs, &square).unwrap();
        // L = 1, I = 4/3 for theta = xi^2 on the flat metric
        assert!((f.length - 1.0).abs() < 1e-9);
        assert!((f.divergence - 4.0 / 3.0).abs() < 1e-9);
        assert!(f.gap(1.0) > 0.3);
    }

    #[test]
    fn rejects_irregular_samples() {
        let xi = [0.0, 0.1, 0.3, 0.4];
        let v = vec![0.0; 4];
        assert_eq!(
            SampledPath::from_samples(&xi, v.clone(), v.clone()),
            Err(Error::NonUniformSpacing)
        );
        let backwards = [0.3, 0.2, 0.1, 0.0];
        assert_eq!(
            SampledPath::from_samples(&backwards, v.clone(), v.clone()),
            Err(Error::NonUniformSpacing)
        );
        assert!(SampledPath::from_samples(&[0.0, 0.1, 0.2, 0.3], v.clone(), v).is_ok());
    }
}
