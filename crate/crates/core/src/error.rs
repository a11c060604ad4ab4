use thiserror::Error;

/// Failures raised by the dynamics, geometry and geodesic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unitarity drift {drift:e} at t = {t} exceeds {limit:e}; reduce the step")]
    UnitarityDrift { drift: f64, t: f64, limit: f64 },

    #[error("driving configuration is off resonance and off-resonance integration was not allowed")]
    OffResonance,

    #[error("quantum overlap {0} outside [0, 1]")]
    InvalidOverlap(f64),

    #[error("transverse field magnitude must be positive")]
    ZeroTransverseField,

    #[error("success probability never reaches one (phase supremum {supremum} < pi/2)")]
    NoUnitPeak { supremum: f64 },

    #[error("probabilities degenerate at theta = {theta} (p_w = {p_w})")]
    NearDegenerate { theta: f64, p_w: f64 },

    #[error("metric vanishes at theta = {theta}; geodesic equation is singular there")]
    Singular { theta: f64 },

    #[error("step {step} too large to resolve the geodesic at xi = {xi}")]
    StepTooLarge { step: f64, xi: f64 },

    #[error("xi = {xi} outside validity domain ({start}, {end})")]
    OutsideDomain { xi: f64, start: f64, end: f64 },

    #[error("path samples must be strictly increasing and uniformly spaced")]
    NonUniformSpacing,

    #[error("path needs at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("rate list is empty")]
    EmptyRates,

    #[error("entropy production rate must be positive and finite, got {0}")]
    NonPositiveRate(f64),

    #[error("index {index} out of range for {len} rates")]
    IndexOutOfRange { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
