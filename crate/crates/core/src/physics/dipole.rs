use serde::{Deserialize, Serialize};

use super::{unit, Mat3, Vec3};
use crate::constants::MU0_OVER_4PI;
use crate::error::{invalid, Error, Result};

/// How a surface field B₀ is turned into a dipole moment.
///
/// `PaperEq2` feeds B₀ verbatim into the analytic deflection law; when a dipole
/// is needed (ray tracing) it normalizes like `Equatorial`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldConvention {
    Equatorial,
    Polar,
    #[default]
    PaperEq2,
}

/// Point magnetic dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticDipole {
    moment: f64,
    axis: Vec3,
    center: Vec3,
}

impl MagneticDipole {
    pub fn new(moment: f64, axis: Vec3, center: Vec3) -> Result<Self> {
        if !(moment >= 0.0 && moment.is_finite()) {
            return Err(invalid(
                "moment_magnitude",
                "must be finite and non-negative",
            ));
        }
        Ok(Self {
            moment,
            axis: unit(axis, "dipole axis")?,
            center,
        })
    }

    pub fn moment_magnitude(&self) -> f64 {
        self.moment
    }

    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    fn offset(&self, point: &Vec3) -> Result<(Vec3, f64)> {
        let r = point - self.center;
        let d = r.norm();
        if d == 0.0 {
            return Err(Error::Domain("field evaluated at the dipole center".into()));
        }
        Ok((r, d))
    }

    /// B(r) = (μ₀/4π)[3(m·r̂)r̂ − m]/r³.
    pub fn field(&self, point: &Vec3) -> Result<Vec3> {
        let (r, d) = self.offset(point)?;
        let m = self.axis * self.moment;
        let d2 = d * d;
        let d5 = d2 * d2 * d;
        Ok((r * (3.0 * m.dot(&r)) - m * d2) * (MU0_OVER_4PI / d5))
    }

    /// Field together with its Jacobian `J[i][j] = ∂B_i/∂r_j` (symmetric and traceless).
    pub fn field_and_jacobian(&self, point: &Vec3) -> Result<(Vec3, Mat3)> {
        let (r, d) = self.offset(point)?;
        let m = self.axis * self.moment;
        let d2 = d * d;
        let inv5 = MU0_OVER_4PI / (d2 * d2 * d);
        let mr = m.dot(&r);
        let field = (r * (3.0 * mr) - m * d2) * inv5;
        let jac = (r * m.transpose() + m * r.transpose() + Mat3::identity() * mr) * (3.0 * inv5)
            - r * r.transpose() * (15.0 * mr * inv5 / d2);
        Ok((field, jac))
    }
}

pub fn dipole_field(dipole: &MagneticDipole, point: &Vec3) -> Result<Vec3> {
    dipole.field(point)
}

/// Dipole moment (A m²) whose surface field at radius `rho0` is `b0`.
///
/// Equatorial: |B| = (μ₀/4π) m/ρ₀³ on the magnetic equator. Polar: twice that
/// on the pole. `PaperEq2` uses the equatorial normalization.
pub fn moment_from_surface_field(b0: f64, rho0: f64, convention: FieldConvention) -> Result<f64> {
    if !(b0 >= 0.0 && b0.is_finite()) {
        return Err(invalid("B0", "must be finite and non-negative"));
    }
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(invalid("rho0", "must be positive"));
    }
    let equatorial = b0 * rho0.powi(3) / MU0_OVER_4PI;
    Ok(match convention {
        FieldConvention::Equatorial | FieldConvention::PaperEq2 => equatorial,
        FieldConvention::Polar => 0.5 * equatorial,
    })
}
