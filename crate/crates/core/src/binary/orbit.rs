use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::physics::Vec3;

const KEPLER_TOL: f64 = 1e-12;
const KEPLER_MAX_ITER: usize = 50;

/// Keplerian elements of the relative orbit.
///
/// Positions are expressed in the sky frame: Z points toward the observer and the
/// line of nodes lies along X. `epoch_phase` is the mean anomaly at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitalElements {
    pub period: f64,
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub inclination: f64,
    pub argument_of_periastron: f64,
    pub epoch_phase: f64,
}

impl Default for OrbitalElements {
    /// Circular 2 h 45 min orbit, a = 9e8 m, i = 90° − 0.63°, conjunction at t = 0.
    fn default() -> Self {
        Self {
            period: 9900.0,
            semi_major_axis: 9e8,
            eccentricity: 0.0,
            inclination: (90.0_f64 - 0.63).to_radians(),
            argument_of_periastron: 0.0,
            epoch_phase: FRAC_PI_2,
        }
    }
}

impl OrbitalElements {
    pub fn validate(&self) -> Result<()> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(invalid("period", "must be positive"));
        }
        if !(self.semi_major_axis > 0.0 && self.semi_major_axis.is_finite()) {
            return Err(invalid("semi_major_axis", "must be positive"));
        }
        if !(0.0..1.0).contains(&self.eccentricity) {
            return Err(invalid("eccentricity", "must lie in [0, 1)"));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.inclination) {
            return Err(invalid("inclination", "must lie in [0, π]"));
        }
        if !(self.argument_of_periastron.is_finite() && self.epoch_phase.is_finite()) {
            return Err(invalid("argument_of_periastron", "angles must be finite"));
        }
        Ok(())
    }

    pub fn mean_anomaly(&self, t: f64) -> f64 {
        (self.epoch_phase + TAU * t / self.period).rem_euclid(TAU)
    }

    /// First time t ≥ 0 at which the argument of latitude ν + ω equals `u`.
    pub fn time_of_latitude(&self, u: f64) -> f64 {
        let nu = u - self.argument_of_periastron;
        let e = self.eccentricity;
        let ea =
            2.0 * ((1.0 - e).sqrt() * (0.5 * nu).sin()).atan2((1.0 + e).sqrt() * (0.5 * nu).cos());
        let m = ea - e * ea.sin();
        let dm = (m - self.epoch_phase).rem_euclid(TAU);
        let dm = if TAU - dm < 1e-12 { 0.0 } else { dm };
        dm / TAU * self.period
    }
}

/// Solves E − e sin E = M by Newton iteration.
pub fn eccentric_anomaly(mean_anomaly: f64, e: f64) -> Result<f64> {
    if e == 0.0 {
        return Ok(mean_anomaly);
    }
    let mut ea = if e > 0.8 {
        std::f64::consts::PI
    } else {
        mean_anomaly
    };
    for _ in 0..KEPLER_MAX_ITER {
        let f = ea - e * ea.sin() - mean_anomaly;
        let step = f / (1.0 - e * ea.cos());
        ea -= step;
        if step.abs() < KEPLER_TOL {
            return Ok(ea);
        }
    }
    Err(Error::KeplerNonConvergence {
        iterations: KEPLER_MAX_ITER,
        mean_anomaly,
        eccentricity: e,
    })
}

/// Position of B relative to A at time `t` (m, sky frame).
pub fn orbital_state(orbit: &OrbitalElements, t: f64) -> Result<Vec3> {
    orbit.validate()?;
    let e = orbit.eccentricity;
    let ea = eccentric_anomaly(orbit.mean_anomaly(t), e)?;
    let r = orbit.semi_major_axis * (1.0 - e * ea.cos());
    let nu = 2.0 * ((1.0 + e).sqrt() * (0.5 * ea).sin()).atan2((1.0 - e).sqrt() * (0.5 * ea).cos());
    let (s, c) = (nu + orbit.argument_of_periastron).sin_cos();
    let (si, ci) = orbit.inclination.sin_cos();
    Ok(Vec3::new(r * c, r * s * ci, r * s * si))
}
