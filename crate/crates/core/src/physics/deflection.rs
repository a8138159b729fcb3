//! Closed-form deflection laws: θ = 4GM/ρc² + 5πaB₀²ρ₀⁶/ρ⁶.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::NeutronStar;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Gravitational light bending 4GM/(ρc²).
pub fn grav_deflection(mass: f64, rho: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!(
            "impact parameter must be positive, got {rho}"
        )));
    }
    Ok(constants.four_gm_over_c2(mass) / rho)
}

/// Magnetic-vacuum bending 5π a B₀² ρ₀⁶ / ρ⁶ for a dipole along the line of sight.
pub fn magnetic_deflection_paper(a: f64, b0: f64, rho0: f64, rho: f64) -> Result<f64> {
    if !(rho0 > 0.0) {
        return Err(Error::Domain(format!(
            "star radius must be positive, got {rho0}"
        )));
    }
    if !(rho >= rho0) {
        return Err(Error::Domain(format!(
            "impact parameter {rho} m lies inside the star (radius {rho0} m)"
        )));
    }
    let ratio = rho0 / rho;
    Ok(5.0 * PI * a * b0 * b0 * ratio.powi(6))
}

pub fn total_deflection_paper(
    star: &NeutronStar,
    a: f64,
    rho: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let mag = magnetic_deflection_paper(a, star.surface_field, star.radius, rho)?;
    Ok(grav_deflection(star.mass, rho, constants)? + mag)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Ok,
    /// B_max ≥ B_crit: the quadratic index law is no longer reliable.
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub b_max: f64,
    pub b_crit: f64,
    pub validity: Validity,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.validity == Validity::Ok
    }
}

pub fn check_subcritical(b_max: f64, constants: &PhysicalConstants) -> ValidityReport {
    let validity = if b_max < constants.b_crit {
        Validity::Ok
    } else {
        Validity::Supercritical
    };
    ValidityReport {
        b_max,
        b_crit: constants.b_crit,
        validity,
    }
}
