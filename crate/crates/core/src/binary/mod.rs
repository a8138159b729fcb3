//! Double-pulsar scenario: orbit, line-of-sight offsets and lensed flux series.

mod flux;
mod orbit;

pub use flux::{
    default_inclinations, eclipse_windows, time_grid, BeamProfile, BinaryScenario, FluxSample,
    Lensed,
};
pub use orbit::{eccentric_anomaly, orbital_state, OrbitalElements};

use crate::error::Result;
use crate::physics::NeutronStar;

/// Transverse distance between the lensing pulsar and the source line of sight.
pub fn los_offset(scenario: &BinaryScenario, t: f64) -> Result<f64> {
    let r = scenario.lens_offset(t)?;
    Ok(r.x.hypot(r.y))
}

/// Rotational phase of `star` at time `t`.
pub fn spin_phase(star: &NeutronStar, t: f64) -> f64 {
    star.spin_phase(t)
}
