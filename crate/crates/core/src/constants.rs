//! Physical constants and unit conversions.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// μ₀/4π in T m A⁻¹.
pub const MU0_OVER_4PI: f64 = 1e-7;

/// Solar mass in kg.
pub const SOLAR_MASS: f64 = 1.989e30;

/// One parsec in m.
pub const PARSEC: f64 = 3.0857e16;

/// One kiloparsec in m.
pub const KILOPARSEC: f64 = 1e3 * PARSEC;

/// Arcseconds per radian.
pub const ARCSEC_PER_RAD: f64 = 206_264.806;

pub fn rad_to_arcsec(angle: f64) -> f64 {
    angle * ARCSEC_PER_RAD
}

/// Constants entering the vacuum index and the deflection laws.
///
/// `a_par` and `a_perp` are the quadratic vacuum couplings for light polarized
/// parallel and perpendicular to the field, `b_crit` the field above which the
/// quadratic law stops being reliable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConstants {
    pub g: f64,
    pub c: f64,
    pub a_par: f64,
    pub a_perp: f64,
    pub b_crit: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            g: 6.674_30e-11,
            c: 299_792_458.0,
            a_par: 9e-24,
            a_perp: 5e-24,
            b_crit: 4.4e9,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(invalid("G", "must be positive and finite"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(invalid("c", "must be positive and finite"));
        }
        if !(self.a_perp > 0.0) {
            return Err(invalid("a_perp", "must be positive"));
        }
        if !(self.a_par > self.a_perp) {
            return Err(invalid("a_par", "must exceed a_perp"));
        }
        if !(self.b_crit > 0.0) {
            return Err(invalid("B_crit", "must be positive"));
        }
        Ok(())
    }

    /// Mean of the two couplings, used for unpolarized light.
    pub fn a_mean(&self) -> f64 {
        0.5 * (self.a_par + self.a_perp)
    }

    /// 4GM/c², i.e. twice the Schwarzschild radius.
    pub fn four_gm_over_c2(&self, mass: f64) -> f64 {
        4.0 * self.g * mass / (self.c * self.c)
    }
}
