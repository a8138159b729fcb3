//! Field, index and analytic deflection models.

mod deflection;
mod dipole;
mod index;
mod star;

pub use deflection::{
    check_subcritical, grav_deflection, magnetic_deflection_paper, total_deflection_paper,
    Validity, ValidityReport,
};
pub use dipole::{dipole_field, moment_from_surface_field, FieldConvention, MagneticDipole};
pub(crate) use index::excess_and_gradient;
pub use index::{index_and_gradient, vacuum_index, FieldProjection, IndexModel, Polarization};
pub use star::NeutronStar;

use crate::error::{invalid, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;

/// Normalizes `v`, rejecting zero or non-finite input.
pub fn unit(v: Vec3, name: &'static str) -> Result<Vec3> {
    let norm = v.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(invalid(name, "must be a non-zero finite vector"));
    }
    Ok(v / norm)
}

/// Rotates `v` by `angle` about the unit vector `axis` (right-handed).
pub fn rotate_about(v: &Vec3, axis: &Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c))
}
