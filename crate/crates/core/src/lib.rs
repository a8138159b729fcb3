//! Deflection of light by the magnetized quantum vacuum around neutron stars.
//!
//! The crate combines four pieces:
//!
//! * [`physics`]: dipole fields, the vacuum index n = 1 + aB² and the closed-form
//!   deflection law θ = 4GM/ρc² + 5πaB₀²ρ₀⁶/ρ⁶;
//! * [`ray_tracer`]: numerical integration of the ray equation through the
//!   index field, with a straight-path quadrature oracle;
//! * [`lensing`]: thin-lens image solving and magnification with the magnetic
//!   term added to the bending angle;
//! * [`binary`]: a double-pulsar scenario producing relative flux curves.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod binary;
pub mod constants;
pub mod error;
pub mod integrator;
pub mod lensing;
pub mod physics;
pub mod quadrature;
pub mod ray_tracer;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use physics::{
    FieldConvention, FieldProjection, IndexModel, MagneticDipole, NeutronStar, Polarization, Vec3,
};
pub use ray_tracer::{DeflectionRecord, IntegratorConfig, Method, RayState, Tracer, Trajectory};
