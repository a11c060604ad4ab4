//! Physical constants and the dimensionless convention.

use std::f64::consts::PI;

/// Constants used to move between field intensities (energy units) and
/// magnetic field components.
///
/// In dimensionless mode `hbar = 1` and the electron constants are chosen
/// so that the Bohr magneton equals one, i.e. fields come out in units of
/// `Gamma / mu_Bohr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub h: f64,
    pub electron_mass: f64,
    pub elementary_charge: f64,
    pub light_speed: f64,
    pub bohr_magneton: f64,
    pub dimensionless: bool,
}

impl PhysicalConstants {
    pub fn dimensionless() -> Self {
        Self::from_parts(1.0, 0.5, 1.0, 1.0, true)
    }

    /// CODATA 2018 values. The magneton keeps the `e hbar / (2 m c)` form,
    /// evaluated with these numbers.
    pub fn mksa() -> Self {
        Self::from_parts(
            1.054_571_817e-34,
            9.109_383_701_5e-31,
            1.602_176_634e-19,
            299_792_458.0,
            false,
        )
    }

    fn from_parts(hbar: f64, mass: f64, charge: f64, c: f64, dimensionless: bool) -> Self {
        Self {
            hbar,
            h: 2.0 * PI * hbar,
            electron_mass: mass,
            elementary_charge: charge,
            light_speed: c,
            bohr_magneton: charge * hbar / (2.0 * mass * c),
            dimensionless,
        }
    }

    /// Factor `2 m c / (|e| hbar)` converting an intensity into a field magnitude.
    pub fn field_per_intensity(&self) -> f64 {
        2.0 * self.electron_mass * self.light_speed / (self.elementary_charge.abs() * self.hbar)
    }

    /// Intensity `|e| hbar B / (2 m c)` of a transverse field of magnitude `b`.
    pub fn intensity_of_field(&self, b: f64) -> f64 {
        b / self.field_per_intensity()
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::dimensionless()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planck_relation_holds() {
        for c in [PhysicalConstants::dimensionless(), PhysicalConstants::mksa()] {
            assert_eq!(c.h, 2.0 * PI * c.hbar);
            let mu = c.elementary_charge * c.hbar / (2.0 * c.electron_mass * c.light_speed);
            assert_eq!(c.bohr_magneton, mu);
        }
    }

    #[test]
    fn dimensionless_magneton_is_one() {
        let c = PhysicalConstants::dimensionless();
        assert_eq!(c.bohr_magneton, 1.0);
        assert_eq!(c.field_per_intensity(), 1.0);
    }
}
