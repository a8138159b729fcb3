//! Ray tracing through the magnetized-vacuum index field.
//!
//! Rays obey d/ds(n dr/ds) = ∇n. The star sits at the origin; the reference
//! geometry is a ray travelling along +z with closest approach ρ on the +x axis.
//! Only the magnetic index is traced; gravity is added analytically.

mod born;
mod sweep;
mod trace;

use serde::{Deserialize, Serialize};

pub use born::{straight_path_deflection_oracle, straight_path_deflection_vector, BornKernel};
pub use sweep::{
    deflection_sweep, max_modulation_depth_over_tilt, modulation_contrast, modulation_depth,
    modulation_sweep, orientation_from_propagation, DepthSearch,
};
pub use trace::{deflection_from_trajectory, index_gradient, index_gradient_fd, trace_ray, Tracer};

use crate::error::{invalid, Result};
use crate::physics::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    pub position: Vec3,
    pub direction: Vec3,
    pub path_length: f64,
}

impl RayState {
    /// Ray entering the domain at z = −kρ, travelling along +z with impact ρ on +x.
    pub fn incoming(rho: f64, halfspan_factor: f64) -> Self {
        Self {
            position: Vec3::new(rho, 0.0, -halfspan_factor * rho),
            direction: Vec3::z(),
            path_length: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4Fixed,
    #[default]
    Rk45Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for RK4, initial step for RK45 (m).
    pub step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Integration runs over |(r − c)·k̂₀| ≤ kρ.
    pub domain_halfspan_factor: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk45Adaptive,
            step: 100.0,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_steps: 1_000_000,
            domain_halfspan_factor: 200.0,
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(step: f64) -> Self {
        Self {
            method: Method::Rk4Fixed,
            step,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(invalid("step", "must be positive"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(invalid("rel_tol", "must be positive"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(invalid("abs_tol", "must be positive"));
        }
        if self.max_steps == 0 {
            return Err(invalid("max_steps", "must be positive"));
        }
        if !(self.domain_halfspan_factor >= 50.0) {
            return Err(invalid("domain_halfspan_factor", "must be at least 50"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<RayState>,
    pub initial_direction: Vec3,
    pub final_direction: Vec3,
    pub absorbed: bool,
}

impl Trajectory {
    /// Component of the final direction transverse to the initial one.
    pub fn deflection_vector(&self) -> Vec3 {
        let d0 = self.initial_direction;
        self.final_direction - d0 * self.final_direction.dot(&d0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeflectionRecord {
    pub rho: f64,
    pub theta_mag: f64,
    pub theta_grav: f64,
    pub theta_total: f64,
    pub spin_phase: f64,
}
