//! Straight-path (Born) deflection: the transverse index gradient integrated
//! along the undeflected line.

use std::sync::OnceLock;

use crate::constants::{PhysicalConstants, MU0_OVER_4PI};
use crate::error::{Error, Result};
use crate::physics::{
    excess_and_gradient, FieldProjection, IndexModel, MagneticDipole, Mat3, NeutronStar, Vec3,
};
use crate::quadrature::integrate;

/// Panel boundaries along z in units of ρ.
const BREAKS: [f64; 15] = [
    -200.0, -50.0, -20.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 20.0, 50.0, 200.0,
];

fn born_integral(
    dipole: &MagneticDipole,
    projection: FieldProjection,
    coupling: f64,
    rho: f64,
) -> Result<Vec3> {
    let k = Vec3::z();
    let breaks: Vec<f64> = BREAKS.iter().map(|b| b * rho).collect();
    let mut failure = None;
    let q = integrate(
        |z| {
            let point = Vec3::new(rho, 0.0, z);
            match excess_and_gradient(dipole, &point, &k, projection, coupling) {
                Ok((_, g)) => [g.x, g.y],
                Err(e) => {
                    failure.get_or_insert(e);
                    [0.0, 0.0]
                }
            }
        },
        &breaks,
        1e-11,
        0.0,
        20_000,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Vec3::new(q.value[0], q.value[1], 0.0))
}

/// Born deflection vector (transverse to +z) for the reference ray at impact ρ.
pub fn straight_path_deflection_vector(
    star: &NeutronStar,
    phase: f64,
    model: &IndexModel,
    constants: &PhysicalConstants,
    rho: f64,
) -> Result<Vec3> {
    if !(rho > star.radius) {
        return Err(Error::Domain(format!(
            "impact parameter {rho} m must exceed the star radius {} m",
            star.radius
        )));
    }
    born_integral(
        &star.dipole_at(phase),
        model.projection,
        model.coupling(constants),
        rho,
    )
}

/// Magnitude of [`straight_path_deflection_vector`].
pub fn straight_path_deflection_oracle(
    star: &NeutronStar,
    phase: f64,
    model: &IndexModel,
    constants: &PhysicalConstants,
    rho: f64,
) -> Result<f64> {
    Ok(straight_path_deflection_vector(star, phase, model, constants, rho)?.norm())
}

/// Quadratic-form representation of the Born deflection.
///
/// For a dipole of unit axis d (in the ray frame: x toward the closest-approach
/// point, z along propagation) the deflection vector is
/// `a (μ₀m/4π)² / ρ⁶ · (dᵀ Mx d, dᵀ My d)`. The matrices are scale-free, so a
/// single pair per field projection covers every star and impact parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornKernel {
    pub mx: Mat3,
    pub my: Mat3,
}

impl BornKernel {
    fn compute(projection: FieldProjection) -> Self {
        // μ₀m/4π = 1 at ρ = 1 with unit coupling.
        let eval = |axis: Vec3| {
            let dipole =
                MagneticDipole::new(1.0 / MU0_OVER_4PI, axis, Vec3::zeros()).expect("unit dipole");
            born_integral(&dipole, projection, 1.0, 1.0).expect("exterior path")
        };
        let basis = [Vec3::x(), Vec3::y(), Vec3::z()];
        let mut mx = Mat3::zeros();
        let mut my = Mat3::zeros();
        for i in 0..3 {
            let v = eval(basis[i]);
            mx[(i, i)] = v.x;
            my[(i, i)] = v.y;
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                // MagneticDipole normalizes the axis, so this is (e_i + e_j)/√2.
                let v = eval(basis[i] + basis[j]);
                let ox = v.x - 0.5 * (mx[(i, i)] + mx[(j, j)]);
                let oy = v.y - 0.5 * (my[(i, i)] + my[(j, j)]);
                mx[(i, j)] = ox;
                mx[(j, i)] = ox;
                my[(i, j)] = oy;
                my[(j, i)] = oy;
            }
        }
        Self { mx, my }
    }

    pub fn for_projection(projection: FieldProjection) -> &'static BornKernel {
        static TOTAL: OnceLock<BornKernel> = OnceLock::new();
        static TRANSVERSE: OnceLock<BornKernel> = OnceLock::new();
        match projection {
            FieldProjection::TotalBSquared => TOTAL.get_or_init(|| Self::compute(projection)),
            FieldProjection::TransverseBSquared => {
                TRANSVERSE.get_or_init(|| Self::compute(projection))
            }
        }
    }

    /// Dimensionless deflection vector for a unit dipole axis given in the ray frame.
    pub fn deflection(&self, axis: &Vec3) -> (f64, f64) {
        (axis.dot(&(self.mx * axis)), axis.dot(&(self.my * axis)))
    }

    pub fn strength(&self, axis: &Vec3) -> f64 {
        let (x, y) = self.deflection(axis);
        x.hypot(y)
    }

    /// Strength for a dipole along the propagation direction.
    pub fn aligned_strength(&self) -> f64 {
        self.strength(&Vec3::z())
    }
}
