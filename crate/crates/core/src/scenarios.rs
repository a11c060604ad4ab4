//! The four driving scenarios and their success/failure probability paths.
//!
//! On resonance the transition probability from `|w_perp>` to `|w>` depends
//! only on the accumulated phase `g(theta) = int_0^theta omega_H(t)/hbar dt`,
//! with `p_w = sin^2 g` and `p_w_perp = cos^2 g`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{require, Error, Result};
use crate::profile::{FieldProfile, ProfileKind};
use crate::units::PhysicalConstants;

/// Tolerance on `kappa = pi/2` when deciding that a decaying profile reaches
/// unit success probability only asymptotically.
pub const UNIT_PEAK_TOLERANCE: f64 = 1e-15;

/// A driving profile paired with the value of `hbar` it is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    profile: FieldProfile,
    hbar: f64,
}

impl Scenario {
    pub fn new(profile: FieldProfile, constants: &PhysicalConstants) -> Self {
        Self {
            profile,
            hbar: constants.hbar,
        }
    }

    /// Dimensionless scenario (`hbar = 1`) with the amplitude given as `Gamma / hbar`.
    pub fn dimensionless(kind: ProfileKind, gamma_over_hbar: f64, lambda: f64) -> Result<Self> {
        let profile = FieldProfile::new(kind, gamma_over_hbar, lambda)?;
        Ok(Self::new(profile, &PhysicalConstants::dimensionless()))
    }

    /// Amplitude fixed by `Gamma = (h/4) lambda`, so that `kappa = pi/2`.
    pub fn unit_peak(kind: ProfileKind, lambda: f64, constants: &PhysicalConstants) -> Result<Self> {
        let profile = FieldProfile::new(kind, constants.h / 4.0 * lambda, lambda)?;
        Ok(Self::new(profile, constants))
    }

    pub fn profile(&self) -> &FieldProfile {
        &self.profile
    }

    pub fn kind(&self) -> ProfileKind {
        self.profile.kind()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn lambda(&self) -> f64 {
        self.profile.lambda()
    }

    /// `Gamma / hbar`, the Rabi angular frequency of the constant drive.
    pub fn rabi_rate(&self) -> f64 {
        self.profile.gamma() / self.hbar
    }

    /// `kappa = Gamma / (hbar lambda)`; undefined for the constant drive.
    pub fn kappa(&self) -> Option<f64> {
        match self.kind() {
            ProfileKind::Constant => None,
            _ => Some(self.rabi_rate() / self.lambda()),
        }
    }

    pub fn omega_h(&self, t: f64) -> Result<f64> {
        check_theta(t)?;
        Ok(self.profile.intensity(t))
    }

    /// Closed-form `g(theta) = int_0^theta omega_H(t) / hbar dt`.
    pub fn accumulated_phase(&self, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        Ok(self.phase_unchecked(theta))
    }

    pub(crate) fn phase_unchecked(&self, theta: f64) -> f64 {
        let rate = self.rabi_rate();
        let l = self.lambda();
        match self.kind() {
            ProfileKind::Constant => rate * theta,
            ProfileKind::Oscillatory => rate / l * (l * theta).sin(),
            ProfileKind::PowerLaw => rate * theta / (1.0 + l * theta),
            ProfileKind::Exponential => -rate / l * (-l * theta).exp_m1(),
        }
    }

    pub fn success_probability(&self, theta: f64) -> Result<Probabilities> {
        check_theta(theta)?;
        Ok(Probabilities::from_phase(self.phase_unchecked(theta)))
    }

    /// Smallest `theta > 0` at which `p_w(theta) = 1`.
    pub fn peak_theta(&self) -> Result<Peak> {
        let rate = self.rabi_rate();
        let l = self.lambda();
        let kind = self.kind();
        if kind == ProfileKind::Constant {
            return Ok(Peak::At(FRAC_PI_2 / rate));
        }
        let kappa = rate / l;
        let gap = kappa - FRAC_PI_2;
        let at_threshold = gap.abs() <= UNIT_PEAK_TOLERANCE * FRAC_PI_2;
        if gap < 0.0 && !at_threshold {
            return Err(Error::NoUnitPeak { supremum: kappa });
        }
        // fraction of the phase supremum that must be accumulated
        let need = (FRAC_PI_2 / kappa).min(1.0);
        match kind {
            ProfileKind::Oscillatory => Ok(Peak::At(need.asin() / l)),
            _ if at_threshold => Ok(Peak::Asymptotic),
            ProfileKind::PowerLaw => Ok(Peak::At(need / (1.0 - need) / l)),
            ProfileKind::Exponential => Ok(Peak::At(-(-need).ln_1p() / l)),
            ProfileKind::Constant => unreachable!(),
        }
    }

    pub fn path(&self) -> ProbabilityPath {
        ProbabilityPath { scenario: *self }
    }
}

/// Location of the first unit peak of the success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Peak {
    At(f64),
    /// Supremum one approached as `theta -> infinity`, never attained.
    Asymptotic,
}

/// Success and failure probabilities; they sum to one exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probabilities {
    pub success: f64,
    pub failure: f64,
}

impl Probabilities {
    /// The smaller of `sin^2 g`, `cos^2 g` is evaluated directly and the
    /// other as its complement; `a + fl(1 - a) == 1` holds in binary64.
    pub fn from_phase(g: f64) -> Self {
        let s = g.sin();
        let c = g.cos();
        let (s2, c2) = (s * s, c * c);
        if s2 <= c2 {
            Self {
                success: s2,
                failure: 1.0 - s2,
            }
        } else {
            Self {
                success: 1.0 - c2,
                failure: c2,
            }
        }
    }
}

/// The map `theta -> (p_w, p_w_perp)` of one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityPath {
    scenario: Scenario,
}

impl ProbabilityPath {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn at(&self, theta: f64) -> Result<Probabilities> {
        self.scenario.success_probability(theta)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    require(theta.is_finite() && theta >= 0.0, "theta", theta, "must be finite and non-negative")
}
