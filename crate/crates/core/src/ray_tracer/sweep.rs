use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};

use super::{DeflectionRecord, Tracer};
use crate::error::{invalid, Result};
use crate::physics::{grav_deflection, rotate_about, NeutronStar, Vec3};

/// Dipole axis at `angle` from the propagation axis (+z), tilted toward +x.
pub fn orientation_from_propagation(angle: f64) -> Vec3 {
    Vec3::new(angle.sin(), 0.0, angle.cos())
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Ray-traced magnetic deflection plus analytic gravity on a log-spaced ρ grid.
pub fn deflection_sweep(
    tracer: &Tracer,
    star: &NeutronStar,
    rho_min: f64,
    rho_max: f64,
    n_samples: usize,
    spin_phase: f64,
) -> Result<Vec<DeflectionRecord>> {
    if !(rho_min >= star.radius) {
        return Err(invalid("rho_min", "must be at least the star radius"));
    }
    if !(rho_max > rho_min) {
        return Err(invalid("rho_max", "must exceed rho_min"));
    }
    if n_samples < 2 {
        return Err(invalid("samples", "need at least two samples"));
    }
    log_grid(rho_min, rho_max, n_samples)
        .into_par_iter()
        .map(|rho| {
            let theta_mag = tracer.magnetic_deflection(star, spin_phase, rho)?;
            let theta_grav = grav_deflection(star.mass, rho, &tracer.constants)?;
            Ok(DeflectionRecord {
                rho,
                theta_mag,
                theta_grav,
                theta_total: theta_mag + theta_grav,
                spin_phase,
            })
        })
        .collect()
}

/// Magnetic deflection over one rotation, phases k·2π/n for k = 0..n.
pub fn modulation_sweep(
    tracer: &Tracer,
    star: &NeutronStar,
    rho: f64,
    n_phases: usize,
) -> Result<Vec<(f64, f64)>> {
    if n_phases < 8 {
        return Err(invalid("n_phases", "need at least eight phases"));
    }
    (0..n_phases)
        .into_par_iter()
        .map(|k| {
            let phase = TAU * k as f64 / n_phases as f64;
            Ok((phase, tracer.magnetic_deflection(star, phase, rho)?))
        })
        .collect()
}

fn extremes(thetas: &[f64]) -> (f64, f64) {
    thetas
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            (lo.min(t), hi.max(t))
        })
}

/// (θ_max − θ_min)/θ_max.
pub fn modulation_depth(thetas: &[f64]) -> f64 {
    let (lo, hi) = extremes(thetas);
    if hi > 0.0 {
        (hi - lo) / hi
    } else {
        0.0
    }
}

/// (θ_max − θ_min)/(θ_max + θ_min).
pub fn modulation_contrast(thetas: &[f64]) -> f64 {
    let (lo, hi) = extremes(thetas);
    if hi + lo > 0.0 {
        (hi - lo) / (hi + lo)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthSearch {
    /// Dipole tilt from the spin axis (rad).
    pub tilt: f64,
    pub depth: f64,
    pub contrast: f64,
}

/// Scans the dipole tilt from the spin axis over [0, π/2] and returns the tilt
/// with the largest modulation depth.
pub fn max_modulation_depth_over_tilt(
    tracer: &Tracer,
    star: &NeutronStar,
    rho: f64,
    n_tilts: usize,
    n_phases: usize,
) -> Result<DepthSearch> {
    if n_tilts < 2 {
        return Err(invalid("n_tilts", "need at least two tilts"));
    }
    let spin = star.spin_axis();
    let helper = if spin.cross(&Vec3::z()).norm() > 1e-6 {
        Vec3::z()
    } else {
        Vec3::x()
    };
    let tilt_axis = spin.cross(&helper).normalize();
    let mut best: Option<DepthSearch> = None;
    for i in 0..n_tilts {
        let tilt = FRAC_PI_2 * i as f64 / (n_tilts - 1) as f64;
        let tilted = star.with_dipole_axis(rotate_about(&spin, &tilt_axis, tilt))?;
        let thetas: Vec<f64> = modulation_sweep(tracer, &tilted, rho, n_phases)?
            .into_iter()
            .map(|(_, t)| t)
            .collect();
        let cand = DepthSearch {
            tilt,
            depth: modulation_depth(&thetas),
            contrast: modulation_contrast(&thetas),
        };
        if best.is_none_or(|b| cand.depth > b.depth) {
            best = Some(cand);
        }
    }
    Ok(best.expect("n_tilts ≥ 2"))
}
