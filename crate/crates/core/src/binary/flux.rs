use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orbit::{orbital_state, OrbitalElements};
use crate::constants::{PhysicalConstants, SOLAR_MASS};
use crate::error::{invalid, Result};
use crate::lensing::LensMapping;
use crate::physics::{IndexModel, NeutronStar, Vec3};

/// Which pulsar's beam is lensed by its companion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lensed {
    /// Source A, lens B.
    #[default]
    AByB,
    /// Source B, lens A.
    BByA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamProfile {
    #[default]
    Tophat,
    Gaussian,
}

impl BeamProfile {
    pub fn factor(self, shift: f64, half_width: f64) -> f64 {
        match self {
            BeamProfile::Tophat => {
                if shift.abs() <= half_width {
                    1.0
                } else {
                    0.0
                }
            }
            BeamProfile::Gaussian => (-0.5 * (shift / half_width).powi(2)).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryScenario {
    pub pulsar_a: NeutronStar,
    pub pulsar_b: NeutronStar,
    pub orbit: OrbitalElements,
    pub lensed: Lensed,
    pub beam_half_width: f64,
    pub beam_profile: BeamProfile,
    pub index_model: IndexModel,
    pub a_coupling: f64,
    pub constants: PhysicalConstants,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxSample {
    pub t: f64,
    pub relative_flux: f64,
    pub eclipse: bool,
    /// Transverse lens offset from the source line of sight (m).
    pub rho_t: f64,
    pub spin_phase_lens: f64,
    /// 1 − A_total/A_gravity, kept separately so that tiny effects survive rounding.
    pub flux_deficit: f64,
    /// Magnetic bending of the brightest image (rad).
    pub beam_shift: f64,
}

/// Inclinations used for the figure-class runs: 87°, 90° − 0.63°, 90°.
pub fn default_inclinations() -> [f64; 3] {
    [
        87.0_f64.to_radians(),
        (90.0_f64 - 0.63).to_radians(),
        90.0_f64.to_radians(),
    ]
}

impl BinaryScenario {
    /// Double-pulsar–like system: 1.4 M☉ each, B₀ = 1e8 T, spin periods 23 ms (A) and 2.77 s (B).
    pub fn double_pulsar(inclination: f64, lensed: Lensed) -> Result<Self> {
        let constants = PhysicalConstants::default();
        let pulsar_a =
            NeutronStar::new(1.4 * SOLAR_MASS, 1e4, 1e8)?.with_spin(Vec3::y(), 0.023, 0.0)?;
        let pulsar_b =
            NeutronStar::new(1.4 * SOLAR_MASS, 1e4, 1e8)?.with_spin(Vec3::y(), 2.77, 0.0)?;
        let scenario = Self {
            pulsar_a,
            pulsar_b,
            orbit: OrbitalElements {
                inclination,
                ..OrbitalElements::default()
            },
            lensed,
            beam_half_width: 5e-4,
            beam_profile: BeamProfile::default(),
            index_model: IndexModel::default(),
            a_coupling: constants.a_perp,
            constants,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        self.pulsar_a.validate()?;
        self.pulsar_b.validate()?;
        self.orbit.validate()?;
        self.constants.validate()?;
        if self.pulsar_a == self.pulsar_b {
            return Err(invalid("pulsar_b", "must differ from pulsar_a"));
        }
        if !(self.beam_half_width > 0.0 && self.beam_half_width.is_finite()) {
            return Err(invalid("beam_half_width", "must be positive"));
        }
        if !(self.a_coupling >= 0.0 && self.a_coupling.is_finite()) {
            return Err(invalid("a_coupling", "must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn lens(&self) -> &NeutronStar {
        match self.lensed {
            Lensed::AByB => &self.pulsar_b,
            Lensed::BByA => &self.pulsar_a,
        }
    }

    /// Lens position relative to the source (m, sky frame).
    pub fn lens_offset(&self, t: f64) -> Result<Vec3> {
        let r = orbital_state(&self.orbit, t)?;
        Ok(match self.lensed {
            Lensed::AByB => r,
            Lensed::BByA => -r,
        })
    }

    /// First time t ≥ 0 at which the lens passes in front of the source.
    pub fn conjunction_time(&self) -> f64 {
        let u = match self.lensed {
            Lensed::AByB => std::f64::consts::FRAC_PI_2,
            Lensed::BByA => 1.5 * std::f64::consts::PI,
        };
        self.orbit.time_of_latitude(u)
    }

    pub fn flux_at(&self, t: f64) -> Result<FluxSample> {
        let lens = self.lens();
        let offset = self.lens_offset(t)?;
        let rho_t = offset.x.hypot(offset.y);
        let phase = lens.spin_phase(t);
        let unlensed = FluxSample {
            t,
            relative_flux: 1.0,
            eclipse: false,
            rho_t,
            spin_phase_lens: phase,
            flux_deficit: 0.0,
            beam_shift: 0.0,
        };
        let d_eff = offset.z;
        if d_eff <= 0.0 {
            return Ok(unlensed);
        }

        let k = Vec3::z();
        let e = if rho_t > 0.0 {
            Vec3::new(-offset.x / rho_t, -offset.y / rho_t, 0.0)
        } else {
            Vec3::x()
        };
        let map = LensMapping::for_geometry(
            lens,
            phase,
            self.a_coupling,
            self.index_model.projection,
            &self.constants,
            d_eff,
            &e,
            &k,
        );
        let ratio = map.flux_ratio(rho_t);
        let shift = ratio
            .primary_impact
            .map_or(0.0, |r| map.magnetic_angle(r).abs());
        let beam = self.beam_profile.factor(shift, self.beam_half_width);
        if ratio.absorbed || beam == 0.0 {
            return Ok(FluxSample {
                relative_flux: 0.0,
                eclipse: true,
                flux_deficit: 1.0,
                beam_shift: shift,
                ..unlensed
            });
        }
        let ln_flux = ratio.ln_ratio + beam.ln();
        Ok(FluxSample {
            relative_flux: ln_flux.exp(),
            flux_deficit: -ln_flux.exp_m1(),
            beam_shift: shift,
            ..unlensed
        })
    }

    /// Samples at the given times, evaluated in parallel and returned in input order.
    pub fn flux_at_times(&self, times: &[f64]) -> Result<Vec<FluxSample>> {
        self.validate()?;
        times.par_iter().map(|&t| self.flux_at(t)).collect()
    }

    /// Samples t₀, t₀ + dt, … strictly below t₁.
    pub fn flux_series(&self, t0: f64, t1: f64, dt: f64) -> Result<Vec<FluxSample>> {
        self.flux_at_times(&time_grid(t0, t1, dt)?)
    }
}

/// t₀ + k·dt for all k with t₀ + k·dt < t₁.
pub fn time_grid(t0: f64, t1: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
        return Err(invalid("t0", "must be finite and less than t1"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt", "must be positive"));
    }
    let n = ((t1 - t0) / dt).ceil() as usize;
    Ok((0..n)
        .map(|k| t0 + k as f64 * dt)
        .filter(|&t| t < t1)
        .collect())
}

/// Maximal runs of consecutive eclipsed samples as (first, last) sample times.
pub fn eclipse_windows(samples: &[FluxSample]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut last = 0.0;
    for s in samples {
        match (s.eclipse, start) {
            (true, None) => start = Some(s.t),
            (false, Some(t0)) => {
                out.push((t0, last));
                start = None;
            }
            _ => {}
        }
        last = s.t;
    }
    if let Some(t0) = start {
        out.push((t0, last));
    }
    out
}
