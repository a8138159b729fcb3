use serde::{Deserialize, Serialize};

use super::{MagneticDipole, Vec3};
use crate::constants::PhysicalConstants;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    Parallel,
    #[default]
    Perpendicular,
    UnpolarizedAverage,
}

/// Which part of the field enters n = 1 + a B².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldProjection {
    TotalBSquared,
    /// |B − (B·k̂)k̂|², the component transverse to propagation.
    #[default]
    TransverseBSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexModel {
    pub polarization: Polarization,
    pub projection: FieldProjection,
}

impl IndexModel {
    pub fn new(polarization: Polarization, projection: FieldProjection) -> Self {
        Self {
            polarization,
            projection,
        }
    }

    pub fn coupling(&self, constants: &PhysicalConstants) -> f64 {
        match self.polarization {
            Polarization::Parallel => constants.a_par,
            Polarization::Perpendicular => constants.a_perp,
            Polarization::UnpolarizedAverage => constants.a_mean(),
        }
    }

    pub fn projected_field_squared(&self, b: &Vec3, k_hat: &Vec3) -> f64 {
        match self.projection {
            FieldProjection::TotalBSquared => b.norm_squared(),
            FieldProjection::TransverseBSquared => (b - k_hat * b.dot(k_hat)).norm_squared(),
        }
    }
}

/// n = 1 + a·P with P the projected field squared.
pub fn vacuum_index(
    b: &Vec3,
    k_hat: &Vec3,
    model: &IndexModel,
    constants: &PhysicalConstants,
) -> f64 {
    1.0 + model.coupling(constants) * model.projected_field_squared(b, k_hat)
}

/// Index and its spatial gradient at `point` for fixed propagation direction `k_hat`.
///
/// Returns `(n − 1, ∇n)`; the excess is returned instead of n so that callers
/// working with 1e-20-level indices keep full precision.
pub fn index_and_gradient(
    dipole: &MagneticDipole,
    point: &Vec3,
    k_hat: &Vec3,
    model: &IndexModel,
    constants: &PhysicalConstants,
) -> Result<(f64, Vec3)> {
    excess_and_gradient(
        dipole,
        point,
        k_hat,
        model.projection,
        model.coupling(constants),
    )
}

pub(crate) fn excess_and_gradient(
    dipole: &MagneticDipole,
    point: &Vec3,
    k_hat: &Vec3,
    projection: FieldProjection,
    coupling: f64,
) -> Result<(f64, Vec3)> {
    let (b, jac) = dipole.field_and_jacobian(point)?;
    let jt = jac.transpose();
    let (p, grad_p) = match projection {
        FieldProjection::TotalBSquared => (b.norm_squared(), jt * b * 2.0),
        FieldProjection::TransverseBSquared => {
            let bk = b.dot(k_hat);
            let bt = b - k_hat * bk;
            (bt.norm_squared(), (jt * b - jt * k_hat * bk) * 2.0)
        }
    };
    Ok((coupling * p, grad_p * coupling))
}
