//! Transverse driving intensities `omega_H(t)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProfileKind {
    Constant,
    Oscillatory,
    PowerLaw,
    Exponential,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 4] = [
        ProfileKind::Constant,
        ProfileKind::Oscillatory,
        ProfileKind::PowerLaw,
        ProfileKind::Exponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProfileKind::Constant => "constant",
            ProfileKind::Oscillatory => "oscillatory",
            ProfileKind::PowerLaw => "power-law",
            ProfileKind::Exponential => "exponential",
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "constant" => Ok(ProfileKind::Constant),
            "oscillatory" => Ok(ProfileKind::Oscillatory),
            "power-law" | "powerlaw" | "power_law" => Ok(ProfileKind::PowerLaw),
            "exponential" => Ok(ProfileKind::Exponential),
            other => Err(format!("unknown scenario `{other}`")),
        }
    }
}

/// Magnitude `omega_H(t)` of the transverse field, amplitude `gamma` in
/// energy units and modulation rate `lambda` (ignored for `Constant`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldProfile {
    kind: ProfileKind,
    gamma: f64,
    lambda: f64,
}

impl FieldProfile {
    pub fn new(kind: ProfileKind, gamma: f64, lambda: f64) -> Result<Self> {
        require(gamma.is_finite() && gamma > 0.0, "gamma", gamma, "must be positive")?;
        if kind != ProfileKind::Constant {
            require(lambda.is_finite() && lambda > 0.0, "lambda", lambda, "must be positive")?;
        }
        Ok(Self { kind, gamma, lambda })
    }

    pub fn constant(gamma: f64) -> Result<Self> {
        Self::new(ProfileKind::Constant, gamma, 0.0)
    }

    pub fn oscillatory(gamma: f64, lambda: f64) -> Result<Self> {
        Self::new(ProfileKind::Oscillatory, gamma, lambda)
    }

    pub fn power_law(gamma: f64, lambda: f64) -> Result<Self> {
        Self::new(ProfileKind::PowerLaw, gamma, lambda)
    }

    pub fn exponential(gamma: f64, lambda: f64) -> Result<Self> {
        Self::new(ProfileKind::Exponential, gamma, lambda)
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `omega_H(t)`. Callers validate `t >= 0`; the power-law form is only
    /// meaningful while `1 + lambda t > 0`.
    pub fn intensity(&self, t: f64) -> f64 {
        let (g, l) = (self.gamma, self.lambda);
        match self.kind {
            ProfileKind::Constant => g,
            ProfileKind::Oscillatory => g * (l * t).cos(),
            ProfileKind::PowerLaw => {
                let d = 1.0 + l * t;
                g / (d * d)
            }
            ProfileKind::Exponential => g * (-l * t).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(FieldProfile::constant(0.0).is_err());
        assert!(FieldProfile::exponential(1.0, 0.0).is_err());
        assert!(FieldProfile::oscillatory(1.0, -1.0).is_err());
        assert!(FieldProfile::power_law(f64::NAN, 1.0).is_err());
        assert!(FieldProfile::new(ProfileKind::Constant, 1.0, -3.0).is_ok());
    }

    #[test]
    fn kind_parses_round_trip() {
        for kind in ProfileKind::ALL {
            assert_eq!(kind.name().parse::<ProfileKind>().unwrap(), kind);
        }
        assert!("linear".parse::<ProfileKind>().is_err());
    }
}
