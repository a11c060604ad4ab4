//! Exact su(2) evolution of a driven two-level system.
//!
//! The Hamiltonian is `H = [[Omega, omega], [omega*, -Omega]]` in the basis
//! `{|w>, |w_perp>}`, with complex transverse field
//! `omega(t) = omega_H(t) exp(i phi(t))`. The propagator is parametrized as
//! `U = [[alpha, beta], [-beta*, alpha*]]`.

use num_complex::Complex64;

use crate::error::{require, Error, Result};
use crate::profile::{FieldProfile, ProfileKind};
use crate::units::PhysicalConstants;

/// Largest admissible `| |alpha|^2 + |beta|^2 - 1 |` over an integration run.
pub const UNITARITY_LIMIT: f64 = 1e-6;

/// Default integrator step in dimensionless time.
pub const DEFAULT_DT: f64 = 1e-4;

const RESONANCE_RTOL: f64 = 1e-12;

/// Longitudinal field and phase rate of the transverse drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivingConfig {
    omega0: f64,
    phase_rate: f64,
    longitudinal: f64,
}

impl DrivingConfig {
    /// `phi(t) = omega0 t` and `Omega = -(hbar/2) omega0` with `omega0 < 0`.
    pub fn on_resonance(omega0: f64, constants: &PhysicalConstants) -> Result<Self> {
        require(omega0.is_finite() && omega0 < 0.0, "omega0", omega0, "must be negative")?;
        Ok(Self {
            omega0,
            phase_rate: omega0,
            longitudinal: -0.5 * constants.hbar * omega0,
        })
    }

    /// Arbitrary `(phi_dot, Omega)` pair, possibly violating the resonance condition.
    pub fn with_override(phase_rate: f64, longitudinal: f64) -> Self {
        Self {
            omega0: phase_rate,
            phase_rate,
            longitudinal,
        }
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn phase_rate(&self) -> f64 {
        self.phase_rate
    }

    /// `Omega(t)` in energy units (time independent here).
    pub fn longitudinal(&self) -> f64 {
        self.longitudinal
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.phase_rate * t
    }
}

/// True iff `phi_dot + (2/hbar) Omega = 0`.
pub fn resonance_check(config: &DrivingConfig, constants: &PhysicalConstants) -> bool {
    let phase_term = config.phase_rate;
    let field_term = 2.0 / constants.hbar * config.longitudinal;
    let scale = phase_term.abs().max(field_term.abs());
    (phase_term + field_term).abs() <= RESONANCE_RTOL * scale
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticField {
    pub bx: f64,
    pub by: f64,
    pub bz: f64,
    pub b_perp: f64,
    pub b_par: f64,
}

pub fn field_components(
    profile: &FieldProfile,
    config: &DrivingConfig,
    constants: &PhysicalConstants,
    t: f64,
) -> Result<MagneticField> {
    require(t.is_finite() && t >= 0.0, "t", t, "must be finite and non-negative")?;
    if profile.kind() == ProfileKind::PowerLaw {
        let d = 1.0 + profile.lambda() * t;
        require(d > 0.0, "t", t, "power-law denominator 1 + lambda t must be positive")?;
    }
    let k = constants.field_per_intensity();
    let b_perp = k * profile.intensity(t);
    let phi = config.phase(t);
    Ok(MagneticField {
        bx: b_perp * phi.cos(),
        by: -b_perp * phi.sin(),
        bz: k * config.longitudinal,
        b_perp,
        b_par: k * config.longitudinal.abs(),
    })
}

/// `H' = sigma_z_coeff * sigma_z + sigma_x_coeff * sigma_x` in the frame
/// co-rotating with the transverse field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingFrameHamiltonian {
    pub sigma_z: f64,
    pub sigma_x: f64,
}

impl RotatingFrameHamiltonian {
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let z = Complex64::new(self.sigma_z, 0.0);
        let x = Complex64::new(self.sigma_x, 0.0);
        [[z, x], [x, -z]]
    }
}

pub fn rotating_frame_hamiltonian(
    profile: &FieldProfile,
    config: &DrivingConfig,
    constants: &PhysicalConstants,
    t: f64,
) -> Result<RotatingFrameHamiltonian> {
    require(t.is_finite() && t >= 0.0, "t", t, "must be finite and non-negative")?;
    let detuning = config.longitudinal + 0.5 * constants.hbar * config.phase_rate;
    let sigma_z = if resonance_check(config, constants) {
        0.0
    } else {
        detuning
    };
    Ok(RotatingFrameHamiltonian {
        sigma_z,
        sigma_x: profile.intensity(t),
    })
}

/// Amplitudes of the propagator at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorState {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub t: f64,
}

impl PropagatorState {
    pub fn identity() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
            t: 0.0,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// `|<w|U|w_perp>|^2 = |beta|^2`.
    pub fn flip_probability(&self) -> f64 {
        self.beta.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub dt: f64,
    /// Keep every n-th step (the final step is always kept).
    pub record_every: usize,
    pub allow_off_resonance: bool,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            record_every: 1,
            allow_off_resonance: false,
        }
    }
}

impl IntegrationOptions {
    pub fn with_dt(dt: f64) -> Self {
        Self {
            dt,
            ..Self::default()
        }
    }
}

/// Fixed-step classical RK4 on `i hbar alpha' = Omega alpha - omega beta*`,
/// `i hbar beta' = omega alpha* + Omega beta` from `U(0) = I`.
///
/// The step is shrunk so that an integer number of steps lands on `t_max`.
/// No renormalization is applied.
pub fn integrate_propagator(
    profile: &FieldProfile,
    config: &DrivingConfig,
    constants: &PhysicalConstants,
    t_max: f64,
    options: &IntegrationOptions,
) -> Result<Vec<PropagatorState>> {
    require(t_max.is_finite() && t_max > 0.0, "t_max", t_max, "must be positive")?;
    let dt = options.dt;
    require(dt.is_finite() && dt > 0.0 && dt <= t_max, "dt", dt, "must lie in (0, t_max]")?;
    require(options.record_every > 0, "record_every", 0.0, "must be at least one")?;
    if !options.allow_off_resonance && !resonance_check(config, constants) {
        return Err(Error::OffResonance);
    }

    let steps = step_count(t_max, dt);
    let h = t_max / steps as f64;
    let inv_hbar = 1.0 / constants.hbar;
    let omega_l = config.longitudinal;
    let minus_i = Complex64::new(0.0, -1.0);

    let rhs = |t: f64, a: Complex64, b: Complex64| -> (Complex64, Complex64) {
        let w = Complex64::from_polar(profile.intensity(t), config.phase(t));
        let da = minus_i * inv_hbar * (omega_l * a - w * b.conj());
        let db = minus_i * inv_hbar * (w * a.conj() + omega_l * b);
        (da, db)
    };

    let mut out = Vec::with_capacity(steps / options.record_every + 2);
    let mut state = PropagatorState::identity();
    out.push(state);
    let mut max_drift = 0.0f64;
    let mut drift_at = 0.0;
    for n in 0..steps {
        let t = n as f64 * h;
        let (a, b) = (state.alpha, state.beta);
        let (k1a, k1b) = rhs(t, a, b);
        let (k2a, k2b) = rhs(t + 0.5 * h, a + 0.5 * h * k1a, b + 0.5 * h * k1b);
        let (k3a, k3b) = rhs(t + 0.5 * h, a + 0.5 * h * k2a, b + 0.5 * h * k2b);
        let (k4a, k4b) = rhs(t + h, a + h * k3a, b + h * k3b);
        state = PropagatorState {
            alpha: a + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
            beta: b + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
            t: (n + 1) as f64 * h,
        };
        let drift = (state.norm_sqr() - 1.0).abs();
        if drift > max_drift {
            max_drift = drift;
            drift_at = state.t;
        }
        if (n + 1) % options.record_every == 0 || n + 1 == steps {
            out.push(state);
        }
    }
    if max_drift > UNITARITY_LIMIT {
        return Err(Error::UnitarityDrift {
            drift: max_drift,
            t: drift_at,
            limit: UNITARITY_LIMIT,
        });
    }
    Ok(out)
}

/// Number of fixed steps of size at most `dt` covering `[0, t_max]`.
pub fn step_count(t_max: f64, dt: f64) -> usize {
    let ratio = t_max / dt;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
        rounded.max(1.0) as usize
    } else {
        ratio.ceil() as usize
    }
}

/// `|<w|U|s>|^2` for a source `|s> = x|w> + sqrt(1 - x^2)|w_perp>`.
pub fn transition_probability(state: &PropagatorState, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidOverlap(x));
    }
    let (a, b) = (state.alpha, state.beta);
    let y = (1.0 - x * x).sqrt();
    let cross = (a * b.conj() + a.conj() * b).re;
    let p = a.norm_sqr() * x * x + b.norm_sqr() * y * y + cross * x * y;
    Ok(p.clamp(0.0, 1.0))
}

/// `x = r / sqrt(1 + r^2)` with `r = B_par / B_perp`.
pub fn quantum_overlap(b_perp: f64, b_par: f64) -> Result<f64> {
    if b_perp.is_nan() || b_perp <= 0.0 {
        return Err(Error::ZeroTransverseField);
    }
    require(b_par >= 0.0, "b_par", b_par, "must be non-negative")?;
    let r = b_par / b_perp;
    if r.is_infinite() {
        return Ok(1.0);
    }
    Ok(r / (1.0 + r * r).sqrt())
}

/// Quantum Fisher information `(4/hbar^2) <Delta H'^2>` on `|w_perp>` for the
/// on-resonance rotating-frame Hamiltonian `H' = omega_H(theta) sigma_x`.
pub fn qfi_rotating_frame(profile: &FieldProfile, constants: &PhysicalConstants, theta: f64) -> Result<f64> {
    require(theta.is_finite() && theta >= 0.0, "theta", theta, "must be finite and non-negative")?;
    let h = RotatingFrameHamiltonian {
        sigma_z: 0.0,
        sigma_x: profile.intensity(theta),
    }
    .matrix();
    // |w_perp> = (0, 1)
    let psi = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let apply = |v: &[Complex64; 2]| -> [Complex64; 2] {
        [h[0][0] * v[0] + h[0][1] * v[1], h[1][0] * v[0] + h[1][1] * v[1]]
    };
    let h_psi = apply(&psi);
    let mean: f64 = (psi[0].conj() * h_psi[0] + psi[1].conj() * h_psi[1]).re;
    let second: f64 = h_psi[0].norm_sqr() + h_psi[1].norm_sqr();
    let variance = second - mean * mean;
    Ok(4.0 * variance / (constants.hbar * constants.hbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn consts() -> PhysicalConstants {
        PhysicalConstants::dimensionless()
    }

    #[test]
    fn resonance_examples() {
        let c = consts();
        let on = DrivingConfig::on_resonance(-1.3, &c).unwrap();
        assert!(resonance_check(&on, &c));
        assert!(resonance_check(&DrivingConfig::on_resonance(-15.0 * PI, &c).unwrap(), &c));
        assert!(!resonance_check(&DrivingConfig::with_override(-1.3, 0.0), &c));
        assert!(DrivingConfig::on_resonance(0.5, &c).is_err());
        assert!(DrivingConfig::on_resonance(0.0, &c).is_err());
    }

    #[test]
    fn field_examples() {
        let c = consts();
        let cfg = DrivingConfig::on_resonance(-15.0 * PI, &c).unwrap();
        let exp = FieldProfile::exponential(1.0, 1.0).unwrap();
        let b0 = field_components(&exp, &cfg, &c, 0.0).unwrap();
        assert_eq!((b0.bx, b0.by), (1.0, 0.0));
        for i in 0..=300 {
            let t = i as f64 * 0.01;
            let b = field_components(&exp, &cfg, &c, t).unwrap();
            assert!((b.b_perp - (-t).exp()).abs() < 1e-15);
            assert!((b.bx.hypot(b.by) - b.b_perp).abs() < 1e-15);
            assert!((b.b_par - 7.5 * PI).abs() < 1e-12);
        }
        let flat = FieldProfile::constant(1.0).unwrap();
        for t in [0.0, 0.37, 2.0, 11.0] {
            let b = field_components(&flat, &cfg, &c, t).unwrap();
            assert_eq!(b.b_perp, 1.0);
        }
        assert!(field_components(&flat, &cfg, &c, -0.1).is_err());
    }

    #[test]
    fn rotating_frame_examples() {
        let c = consts();
        let on = DrivingConfig::on_resonance(-2.0, &c).unwrap();
        let flat = FieldProfile::constant(0.8).unwrap();
        let h0 = rotating_frame_hamiltonian(&flat, &on, &c, 0.0).unwrap();
        let h1 = rotating_frame_hamiltonian(&flat, &on, &c, 5.0).unwrap();
        assert_eq!(h0, h1);
        assert_eq!(h0, RotatingFrameHamiltonian { sigma_z: 0.0, sigma_x: 0.8 });

        let exp = FieldProfile::exponential(1.2, 0.5).unwrap();
        let h = rotating_frame_hamiltonian(&exp, &on, &c, 2.0).unwrap();
        assert_eq!(h.sigma_z, 0.0);
        assert!((h.sigma_x - 1.2 * (-1.0f64).exp()).abs() < 1e-15);

        let off = DrivingConfig::with_override(-2.0, 0.0);
        let h = rotating_frame_hamiltonian(&flat, &off, &c, 1.0).unwrap();
        assert_eq!(h.sigma_z, -1.0);
    }

    #[test]
    fn propagator_starts_at_identity() {
        let c = consts();
        let cfg = DrivingConfig::on_resonance(-1.0, &c).unwrap();
        let p = FieldProfile::oscillatory(1.0, 0.5).unwrap();
        let run = integrate_propagator(&p, &cfg, &c, 0.1, &IntegrationOptions::default()).unwrap();
        assert_eq!(run[0], PropagatorState::identity());
        assert!((run.last().unwrap().t - 0.1).abs() < 1e-15);
    }

    #[test]
    fn constant_drive_reaches_half_at_quarter_period() {
        let c = consts();
        let cfg = DrivingConfig::on_resonance(-1.0, &c).unwrap();
        let p = FieldProfile::constant(1.0).unwrap();
        let run = integrate_propagator(&p, &cfg, &c, FRAC_PI_4, &IntegrationOptions::default()).unwrap();
        let last = run.last().unwrap();
        assert!((transition_probability(last, 0.0).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn exponential_drive_matches_closed_form() {
        let c = consts();
        let cfg = DrivingConfig::on_resonance(-3.0, &c).unwrap();
        let p = FieldProfile::exponential(FRAC_PI_2, 1.0).unwrap();
        let run = integrate_propagator(&p, &cfg, &c, 1.0, &IntegrationOptions::default()).unwrap();
        let got = run.last().unwrap().flip_probability();
        let oracle = (FRAC_PI_2 * (1.0 - (-1.0f64).exp())).sin().powi(2);
        assert!((got - oracle).abs() < 1e-10);
        assert!((got - 0.7017).abs() < 1e-4);
    }

    #[test]
    fn off_resonance_requires_flag() {
        let c = consts();
        let off = DrivingConfig::with_override(-1.0, 0.0);
        let p = FieldProfile::constant(1.0).unwrap();
        let err = integrate_propagator(&p, &off, &c, 1.0, &IntegrationOptions::default());
        assert_eq!(err, Err(Error::OffResonance));
        let opts = IntegrationOptions {
            allow_off_resonance: true,
            ..IntegrationOptions::default()
        };
        assert!(integrate_propagator(&p, &off, &c, 1.0, &opts).is_ok());
    }

    #[test]
    fn coarse_step_reports_drift() {
        let c = consts();
        let cfg = DrivingConfig::on_resonance(-40.0, &c).unwrap();
        let p = FieldProfile::constant(5.0).unwrap();
        let err = integrate_propagator(&p, &cfg, &c, 10.0, &IntegrationOptions::with_dt(0.05));
        assert!(matches!(err, Err(Error::UnitarityDrift { .. })), "{err:?}");
    }

    #[test]
    fn unitarity_is_preserved_at_default_step() {
        let c = consts();
        let cfg = DrivingConfig::on_resonance(-1.0, &c).unwrap();
        for kind in ProfileKind::ALL {
            let p = FieldProfile::new(kind, 1.0, 2.0 / PI).unwrap();
            let run = integrate_propagator(&p, &cfg, &c, 5.0, &IntegrationOptions::default()).unwrap();
            let worst = run.iter().map(|s| (s.norm_sqr() - 1.0).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-8, "{kind}: {worst:e}");
        }
    }

    #[test]
    fn transition_probability_examples() {
        let s = PropagatorState {
            alpha: Complex64::new(FRAC_1_SQRT_2, 0.0),
            beta: Complex64::new(FRAC_1_SQRT_2, 0.0),
            t: 0.0,
        };
        assert!((transition_probability(&s, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(transition_probability(&s, 1.5).is_err());
        assert!(transition_probability(&s, -0.1).is_err());
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(quantum_overlap(1.0, 0.0).unwrap(), 0.0);
        assert!((quantum_overlap(2.0, 2.0).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(quantum_overlap(0.0, 1.0).is_err());
        let mut last = 0.0;
        for k in 0..60 {
            let x = quantum_overlap(1.0, 10f64.powf(k as f64 / 5.0 - 4.0)).unwrap();
            assert!(x > last && x < 1.0 || x == 1.0);
            last = x;
        }
        assert!(last > 0.999_999);
    }

    #[test]
    fn qfi_examples() {
        let c = consts();
        let flat = FieldProfile::constant(1.0).unwrap();
        assert_eq!(qfi_rotating_frame(&flat, &c, 3.0).unwrap(), 4.0);
        let exp = FieldProfile::exponential(0.7, 2.0).unwrap();
        assert!((qfi_rotating_frame(&exp, &c, 0.0).unwrap() - 4.0 * 0.49).abs() < 1e-15);
        let osc = FieldProfile::oscillatory(0.5, 1.0 / PI).unwrap();
        let oracle = 4.0 * 0.25 * (1.0 / PI).cos().powi(2);
        let got = qfi_rotating_frame(&osc, &c, 1.0).unwrap();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 0.9021).abs() < 1e-4);
    }
}
