use std::f64::consts::TAU;

use super::{moment_from_surface_field, rotate_about, unit, FieldConvention, MagneticDipole, Vec3};
use crate::constants::SOLAR_MASS;
use crate::error::{invalid, Result};

/// A magnetized, spinning neutron star centred at the origin of its working frame.
///
/// `dipole_axis` is the magnetic axis at rotational phase zero; the dipole at
/// phase φ is obtained by rotating it by φ about `spin_axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutronStar {
    pub mass: f64,
    pub radius: f64,
    pub surface_field: f64,
    pub field_convention: FieldConvention,
    dipole_axis: Vec3,
    spin_axis: Vec3,
    pub spin_period: f64,
    pub spin_phase0: f64,
}

impl NeutronStar {
    /// Star with dipole along +z, spin axis along +y and a 1 s spin period.
    pub fn new(mass: f64, radius: f64, surface_field: f64) -> Result<Self> {
        let star = Self {
            mass,
            radius,
            surface_field,
            field_convention: FieldConvention::default(),
            dipole_axis: Vec3::z(),
            spin_axis: Vec3::y(),
            spin_period: 1.0,
            spin_phase0: 0.0,
        };
        star.validate()?;
        Ok(star)
    }

    /// 1 M☉, 10 km, B₀ = 1e9 T.
    pub fn typical() -> Self {
        Self::new(SOLAR_MASS, 1e4, 1e9).expect("typical star is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(invalid("radius", "must be positive"));
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(invalid("mass", "must be finite and non-negative"));
        }
        if !(self.surface_field >= 0.0 && self.surface_field.is_finite()) {
            return Err(invalid("surface_field", "must be finite and non-negative"));
        }
        if !(self.spin_period > 0.0 && self.spin_period.is_finite()) {
            return Err(invalid("spin_period", "must be positive"));
        }
        if !self.spin_phase0.is_finite() {
            return Err(invalid("spin_phase0", "must be finite"));
        }
        Ok(())
    }

    pub fn with_field_convention(mut self, convention: FieldConvention) -> Self {
        self.field_convention = convention;
        self
    }

    pub fn with_dipole_axis(mut self, axis: Vec3) -> Result<Self> {
        self.dipole_axis = unit(axis, "dipole_axis")?;
        Ok(self)
    }

    pub fn with_spin(mut self, axis: Vec3, period: f64, phase0: f64) -> Result<Self> {
        self.spin_axis = unit(axis, "spin_axis")?;
        self.spin_period = period;
        self.spin_phase0 = phase0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_surface_field(mut self, b0: f64) -> Result<Self> {
        self.surface_field = b0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        self.mass = mass;
        self.validate()?;
        Ok(self)
    }

    pub fn dipole_axis(&self) -> Vec3 {
        self.dipole_axis
    }

    pub fn spin_axis(&self) -> Vec3 {
        self.spin_axis
    }

    /// Magnetic axis after rotating the star by `phase` about its spin axis.
    pub fn dipole_axis_at(&self, phase: f64) -> Vec3 {
        rotate_about(&self.dipole_axis, &self.spin_axis, phase)
    }

    /// Rotational phase at time `t`, in [0, 2π).
    pub fn spin_phase(&self, t: f64) -> f64 {
        (self.spin_phase0 + TAU * t / self.spin_period).rem_euclid(TAU)
    }

    pub fn moment(&self) -> f64 {
        moment_from_surface_field(self.surface_field, self.radius, self.field_convention)
            .expect("validated star")
    }

    pub fn dipole_at(&self, phase: f64) -> MagneticDipole {
        MagneticDipole::new(self.moment(), self.dipole_axis_at(phase), Vec3::zeros())
            .expect("validated star")
    }
}
