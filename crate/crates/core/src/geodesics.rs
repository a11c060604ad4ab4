//! Geodesics of the one-dimensional Fisher manifold and the entropic
//! quantities measured along them.
//!
//! In one dimension the geodesic equation is
//! `theta'' = -(1/2F) (dF/dtheta) theta'^2`, so every scenario reduces to
//! `theta'' = c(theta) theta'^2` for a scenario-specific coefficient `c`.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::step_count;
use crate::error::{require, Error, Result};
use crate::info_geometry::{FisherFunction, Normalization, SampledPath};
use crate::profile::ProfileKind;
use crate::scenarios::Scenario;
use crate::units::PhysicalConstants;

/// Upper bound on `|c(theta)| theta' dxi` per step before the numeric
/// solver declares the path to be running into a singular boundary.
pub const BLOWUP_INDICATOR: f64 = 0.02;

/// Rates within this distance of an integer are snapped before the ceiling.
pub const CEILING_SNAP: f64 = 1e-12;

/// `c(theta)` in `theta'' = c(theta) theta'^2`.
fn connection(scenario: &Scenario, theta: f64) -> Result<f64> {
    let l = scenario.lambda();
    match scenario.kind() {
        ProfileKind::Constant => Ok(0.0),
        ProfileKind::Oscillatory => {
            let (s, c) = (l * theta).sin_cos();
            if c.abs() < 1e-12 {
                return Err(Error::Singular { theta });
            }
            Ok(l * s / c)
        }
        ProfileKind::PowerLaw => {
            let d = 1.0 + l * theta;
            if d <= 0.0 {
                return Err(Error::Singular { theta });
            }
            Ok(2.0 * l / d)
        }
        ProfileKind::Exponential => Ok(l),
    }
}

/// Geodesic acceleration `theta''` at `(theta, theta')`.
pub fn geodesic_rhs(scenario: &Scenario, theta: f64, theta_dot: f64) -> Result<f64> {
    Ok(connection(scenario, theta)? * theta_dot * theta_dot)
}

/// Which closed form to use for the oscillatory scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeodesicForm {
    /// `theta0 + sqrt(1 - lambda^2 xi0^2)/lambda * theta0' [asin(lambda xi) - asin(lambda xi0)]`.
    PaperForm,
    /// `(1/lambda) asin[sin(lambda theta0) + lambda theta0' cos(lambda theta0)(xi - xi0)]`.
    #[default]
    ExactForm,
}

impl FromStr for GeodesicForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(GeodesicForm::ExactForm),
            "paper" | "published" => Ok(GeodesicForm::PaperForm),
            other => Err(format!("unknown geodesic form `{other}` (expected exact or paper)")),
        }
    }
}

/// Open interval `(start, end)` of affine parameters; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub start: f64,
    pub end: f64,
}

impl Domain {
    pub fn unbounded() -> Self {
        Self {
            start: f64::NEG_INFINITY,
            end: f64::INFINITY,
        }
    }

    pub fn contains(&self, xi: f64) -> bool {
        xi > self.start && xi < self.end
    }

    pub fn is_bounded_above(&self) -> bool {
        self.end.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Line,
    /// `a = 1 + lambda theta0`, `b = lambda theta0'`.
    Hyperbolic { a: f64, b: f64 },
    Logarithmic { b: f64 },
    /// `lambda theta0 = branch pi + delta`.
    Arcsine { branch: f64, sin_d: f64, slope: f64 },
    PaperArcsine { scale: f64, offset: f64 },
}

/// Closed-form optimum path through `(xi0, theta0)` with velocity `theta0'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSolution {
    scenario: Scenario,
    theta0: f64,
    theta_dot0: f64,
    xi0: f64,
    form: GeodesicForm,
    domain: Domain,
    shape: Shape,
}

pub fn geodesic_closed_form(
    scenario: &Scenario,
    theta0: f64,
    theta_dot0: f64,
    xi0: f64,
    form: GeodesicForm,
) -> Result<GeodesicSolution> {
    check_initial(theta0, theta_dot0)?;
    require(xi0.is_finite(), "xi0", xi0, "must be finite")?;
    let l = scenario.lambda();
    let (shape, domain) = match scenario.kind() {
        ProfileKind::Constant => (Shape::Line, Domain::unbounded()),
        ProfileKind::PowerLaw => {
            let a = 1.0 + l * theta0;
            let b = l * theta_dot0;
            let domain = Domain {
                start: f64::NEG_INFINITY,
                end: xi0 + a / b,
            };
            (Shape::Hyperbolic { a, b }, domain)
        }
        ProfileKind::Exponential => {
            let b = l * theta_dot0;
            let domain = Domain {
                start: f64::NEG_INFINITY,
                end: xi0 + 1.0 / b,
            };
            (Shape::Logarithmic { b }, domain)
        }
        ProfileKind::Oscillatory => {
            if (l * theta0).cos().abs() < 1e-12 {
                return Err(Error::Singular { theta: theta0 });
            }
            match form {
                GeodesicForm::ExactForm => {
                    let branch = (l * theta0 / PI).round();
                    let delta = l * theta0 - branch * PI;
                    let (sin_d, cos_d) = delta.sin_cos();
                    let slope = l * theta_dot0 * cos_d;
                    let domain = Domain {
                        start: xi0 + (-1.0 - sin_d) / slope,
                        end: xi0 + (1.0 - sin_d) / slope,
                    };
                    (Shape::Arcsine { branch, sin_d, slope }, domain)
                }
                GeodesicForm::PaperForm => {
                    require((l * xi0).abs() < 1.0, "xi0", xi0, "paper form needs |lambda xi0| < 1")?;
                    let scale = (1.0 - l * l * xi0 * xi0).sqrt() / l * theta_dot0;
                    let domain = Domain {
                        start: -1.0 / l,
                        end: 1.0 / l,
                    };
                    let offset = (l * xi0).asin();
                    (Shape::PaperArcsine { scale, offset }, domain)
                }
            }
        }
    };
    Ok(GeodesicSolution {
        scenario: *scenario,
        theta0,
        theta_dot0,
        xi0,
        form,
        domain,
        shape,
    })
}

impl GeodesicSolution {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn form(&self) -> GeodesicForm {
        self.form
    }

    pub fn initial(&self) -> (f64, f64, f64) {
        (self.theta0, self.theta_dot0, self.xi0)
    }

    fn check(&self, xi: f64) -> Result<()> {
        if self.domain.contains(xi) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                xi,
                start: self.domain.start,
                end: self.domain.end,
            })
        }
    }

    /// `(theta, theta', theta'')` at `xi`.
    pub fn jet(&self, xi: f64) -> Result<(f64, f64, f64)> {
        self.check(xi)?;
        let s = xi - self.xi0;
        let l = self.scenario.lambda();
        let v0 = self.theta_dot0;
        Ok(match self.shape {
            Shape::Line => (self.theta0 + v0 * s, v0, 0.0),
            Shape::Hyperbolic { a, b } => {
                let d = a - b * s;
                let theta = (a * a - a + b * s) / (l * d);
                let dot = a * a * b / (l * d * d);
                let ddot = 2.0 * a * a * b * b / (l * d * d * d);
                (theta, dot, ddot)
            }
            Shape::Logarithmic { b } => {
                let d = 1.0 - b * s;
                let theta = self.theta0 - (-b * s).ln_1p() / l;
                (theta, v0 / d, l * v0 * v0 / (d * d))
            }
            Shape::Arcsine { branch, sin_d, slope } => {
                let arg = sin_d + slope * s;
                let root = (1.0 - arg * arg).sqrt();
                let theta = (branch * PI + arg.asin()) / l;
                let dot = slope / (l * root);
                let ddot = slope * slope * arg / (l * root * root * root);
                (theta, dot, ddot)
            }
            Shape::PaperArcsine { scale, offset } => {
                let u = l * xi;
                let root = (1.0 - u * u).sqrt();
                let theta = self.theta0 + scale * (u.asin() - offset);
                let dot = scale * l / root;
                let ddot = scale * l * l * u / (root * root * root);
                (theta, dot, ddot)
            }
        })
    }

    pub fn theta(&self, xi: f64) -> Result<f64> {
        Ok(self.jet(xi)?.0)
    }

    pub fn theta_dot(&self, xi: f64) -> Result<f64> {
        Ok(self.jet(xi)?.1)
    }

    /// `theta'' - c(theta) theta'^2`, zero for an exact geodesic.
    pub fn residual(&self, xi: f64) -> Result<f64> {
        let (theta, dot, ddot) = self.jet(xi)?;
        Ok(ddot - geodesic_rhs(&self.scenario, theta, dot)?)
    }

    /// Uniform samples of the path on `[start, end]` for the functionals.
    pub fn sample(&self, start: f64, end: f64, n: usize) -> Result<SampledPath> {
        SampledPath::from_fn(start, end, n, |xi| {
            let (t, d, _) = self.jet(xi)?;
            Ok((t, d))
        })
    }
}

fn check_initial(theta0: f64, theta_dot0: f64) -> Result<()> {
    require(theta0.is_finite() && theta0 >= 0.0, "theta0", theta0, "must be non-negative")?;
    require(theta_dot0.is_finite() && theta_dot0 > 0.0, "theta_dot0", theta_dot0, "must be positive")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSample {
    pub xi: f64,
    pub theta: f64,
    pub theta_dot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    /// Integration stopped ahead of a singular boundary near this `xi`.
    DomainExit { xi: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericGeodesic {
    pub samples: Vec<GeodesicSample>,
    pub termination: Termination,
    pub step: f64,
}

impl NumericGeodesic {
    pub fn last(&self) -> &GeodesicSample {
        self.samples.last().expect("at least the initial sample")
    }

    pub fn to_sampled_path(&self) -> Result<SampledPath> {
        let xi: Vec<f64> = self.samples.iter().map(|s| s.xi).collect();
        SampledPath::from_samples(
            &xi,
            self.samples.iter().map(|s| s.theta).collect(),
            self.samples.iter().map(|s| s.theta_dot).collect(),
        )
    }
}

/// Fixed-step RK4 integration of the geodesic equation from `xi0` to `xi_max`.
pub fn solve_geodesic_numeric(
    scenario: &Scenario,
    theta0: f64,
    theta_dot0: f64,
    xi0: f64,
    xi_max: f64,
    dxi: f64,
) -> Result<NumericGeodesic> {
    check_initial(theta0, theta_dot0)?;
    require(xi_max.is_finite() && xi_max > xi0, "xi_max", xi_max, "must exceed xi0")?;
    require(dxi.is_finite() && dxi > 0.0, "dxi", dxi, "must be positive")?;
    let steps = step_count(xi_max - xi0, dxi);
    let h = (xi_max - xi0) / steps as f64;

    let indicator = |theta: f64, v: f64| -> Result<f64> { Ok((connection(scenario, theta)? * v * h).abs()) };
    if indicator(theta0, theta_dot0)? > BLOWUP_INDICATOR {
        return Err(Error::StepTooLarge { step: h, xi: xi0 });
    }

    let f = |theta: f64, v: f64| -> Result<(f64, f64)> { Ok((v, geodesic_rhs(scenario, theta, v)?)) };
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(GeodesicSample {
        xi: xi0,
        theta: theta0,
        theta_dot: theta_dot0,
    });
    let (mut theta, mut v) = (theta0, theta_dot0);
    for n in 0..steps {
        let xi = xi0 + n as f64 * h;
        let stage = || -> Result<(f64, f64)> {
            let (k1t, k1v) = f(theta, v)?;
            let (k2t, k2v) = f(theta + 0.5 * h * k1t, v + 0.5 * h * k1v)?;
            let (k3t, k3v) = f(theta + 0.5 * h * k2t, v + 0.5 * h * k2v)?;
            let (k4t, k4v) = f(theta + h * k3t, v + h * k3v)?;
            Ok((
                theta + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t),
                v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
            ))
        };
        let next = stage();
        let blown = match next {
            Ok((t, w)) => !t.is_finite() || !w.is_finite() || indicator(t, w).map_or(true, |i| i > BLOWUP_INDICATOR),
            Err(_) => true,
        };
        if blown {
            return Ok(NumericGeodesic {
                samples,
                termination: Termination::DomainExit { xi },
                step: h,
            });
        }
        let (t, w) = next?;
        theta = t;
        v = w;
        let xi_next = if n + 1 == steps { xi_max } else { xi0 + (n + 1) as f64 * h };
        samples.push(GeodesicSample {
            xi: xi_next,
            theta,
            theta_dot: v,
        });
    }
    Ok(NumericGeodesic {
        samples,
        termination: Termination::Completed,
        step: h,
    })
}

/// `sqrt(g(theta)) theta'` for an arbitrary metric normalization.
pub fn speed_with(fisher: &FisherFunction, theta: f64, theta_dot: f64) -> Result<f64> {
    Ok(fisher.metric(theta)?.sqrt() * theta_dot)
}

/// Entropic speed `v_E = sqrt(F(theta0)/4) theta0'`.
pub fn entropic_speed(scenario: &Scenario, theta0: f64, theta_dot0: f64) -> Result<f64> {
    check_initial(theta0, theta_dot0)?;
    speed_with(&FisherFunction::new(*scenario, Normalization::FubiniStudy), theta0, theta_dot0)
}

/// `r_E = v_E^2`.
pub fn entropy_production_rate(scenario: &Scenario, theta0: f64, theta_dot0: f64) -> Result<f64> {
    let v = entropic_speed(scenario, theta0, theta_dot0)?;
    Ok(v * v)
}

/// `r = max_i ceil(r_i)`, with near-integer rates snapped first.
pub fn efficiency_normalizer(rates: &[f64]) -> Result<u64> {
    if rates.is_empty() {
        return Err(Error::EmptyRates);
    }
    let mut r = 1u64;
    for &rate in rates {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::NonPositiveRate(rate));
        }
        let nearest = rate.round();
        let ceiling = if (rate - nearest).abs() <= CEILING_SNAP && nearest >= 1.0 {
            nearest
        } else {
            rate.ceil()
        };
        r = r.max(ceiling as u64);
    }
    Ok(r)
}

/// `eta_E = 1 - r_E[index] / r`.
pub fn entropic_efficiency(rates: &[f64], index: usize) -> Result<f64> {
    let r = efficiency_normalizer(rates)?;
    let rate = rates.get(index).ok_or(Error::IndexOutOfRange {
        index,
        len: rates.len(),
    })?;
    Ok(1.0 - rate / r as f64)
}

/// Entropic bundle for one scenario; `normalizer` is shared by the set of
/// scenarios being compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropicSummary {
    pub kind: ProfileKind,
    pub speed: f64,
    pub rate: f64,
    pub efficiency: f64,
    pub normalizer: u64,
    pub length: Option<f64>,
    pub divergence: Option<f64>,
}

/// Speeds, rates and efficiencies of competing scenarios sharing initial data.
pub fn summarize(
    scenarios: &[Scenario],
    theta0: f64,
    theta_dot0: f64,
    normalization: Normalization,
) -> Result<Vec<EntropicSummary>> {
    check_initial(theta0, theta_dot0)?;
    let speeds = scenarios
        .iter()
        .map(|s| speed_with(&FisherFunction::new(*s, normalization), theta0, theta_dot0))
        .collect::<Result<Vec<_>>>()?;
    let rates: Vec<f64> = speeds.iter().map(|v| v * v).collect();
    let r = efficiency_normalizer(&rates)?;
    Ok(scenarios
        .iter()
        .zip(speeds.iter().zip(&rates))
        .map(|(s, (&speed, &rate))| EntropicSummary {
            kind: s.kind(),
            speed,
            rate,
            efficiency: 1.0 - rate / r as f64,
            normalizer: r,
            length: None,
            divergence: None,
        })
        .collect())
}

/// `lambda(Gamma) = 4 Gamma / h`.
pub fn lambda_of_gamma(gamma: f64, constants: &PhysicalConstants) -> Result<f64> {
    require(gamma.is_finite() && gamma > 0.0, "gamma", gamma, "must be positive")?;
    Ok(4.0 * gamma / constants.h)
}

/// `f_P = exp(lambda theta0) / (1 + lambda theta0)^2`, the power-law to
/// exponential entropic speed ratio at equal `Gamma` and `theta0'`.
pub fn speed_ratio(lambda: f64, theta0: f64) -> f64 {
    let z = lambda * theta0;
    z.exp() / ((1.0 + z) * (1.0 + z))
}

/// Positive root `z*` of `exp(z) = (1 + z)^2`, by bisection on `[2, 3]`.
pub fn region_boundary_root() -> f64 {
    let f = |z: f64| z.exp() - (1.0 + z) * (1.0 + z);
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Where the exponential drive moves faster than the power-law drive.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub lambdas: Vec<f64>,
    pub theta0s: Vec<f64>,
    /// Row-major in `lambda`, then `theta0`.
    pub ratio: Vec<f64>,
    pub mask: Vec<bool>,
    pub boundary_root: f64,
}

impl RegionGrid {
    pub fn index(&self, i_lambda: usize, j_theta: usize) -> usize {
        i_lambda * self.theta0s.len() + j_theta
    }

    pub fn in_region(&self, i_lambda: usize, j_theta: usize) -> bool {
        self.mask[self.index(i_lambda, j_theta)]
    }
}

pub fn region_mask(lambdas: &[f64], theta0s: &[f64]) -> Result<RegionGrid> {
    check_axis("lambda grid", lambdas)?;
    check_axis("theta0 grid", theta0s)?;
    let ratio: Vec<f64> = lambdas
        .par_iter()
        .flat_map_iter(|&l| theta0s.iter().map(move |&t| speed_ratio(l, t)))
        .collect();
    let mask = ratio.iter().map(|&f| f < 1.0).collect();
    Ok(RegionGrid {
        lambdas: lambdas.to_vec(),
        theta0s: theta0s.to_vec(),
        ratio,
        mask,
        boundary_root: region_boundary_root(),
    })
}

fn check_axis(name: &'static str, axis: &[f64]) -> Result<()> {
    require(!axis.is_empty(), name, 0.0, "must not be empty")?;
    for w in axis.windows(2) {
        require(w[1] > w[0], name, w[1], "must be strictly ascending")?;
    }
    require(axis[0] > 0.0 && axis[0].is_finite(), name, axis[0], "must be strictly positive")
}

/// `n` log-spaced rates on `[lo, hi]`.
pub fn log_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `n` points `hi * (j + 1) / n`, covering `(0, hi]`.
pub fn open_linear_axis(hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|j| hi * j as f64 / n as f64).collect()
}
