use qvlens_core::analysis::loglog_slope;
use qvlens_core::binary::Lensed;
use qvlens_core::constants::rad_to_arcsec;
use qvlens_core::lensing::{
    field_threshold_for_effect, point_lens_magnification, solve_images, total_magnification,
    LensConfiguration, SourceOffset,
};
use qvlens_core::ray_tracer::{deflection_sweep, modulation_sweep};

use crate::config::{AngleUnit, RunConfig, StarId};
use crate::error::CliError;
use crate::output::{Cell, Table};

fn angle_header(stem: &str, unit: AngleUnit) -> String {
    match unit {
        AngleUnit::Rad => format!("{stem}_rad"),
        AngleUnit::Arcsec => format!("{stem}_arcsec"),
    }
}

fn angle(x: f64, unit: AngleUnit) -> Cell {
    Cell::Float(match unit {
        AngleUnit::Rad => x,
        AngleUnit::Arcsec => rad_to_arcsec(x),
    })
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub struct DeflectArgs {
    pub star: StarId,
    pub rho_min: Option<f64>,
    pub rho_max: Option<f64>,
    pub samples: usize,
    pub phase: f64,
}

pub fn deflect(cfg: &RunConfig, args: &DeflectArgs, unit: AngleUnit) -> Result<Table, CliError> {
    let star = cfg.star_by_id(args.star)?;
    let rho_min = args.rho_min.unwrap_or(2.0 * star.radius);
    let rho_max = args.rho_max.unwrap_or(50.0 * star.radius);
    let records = deflection_sweep(
        &cfg.tracer(),
        &star,
        rho_min,
        rho_max,
        args.samples,
        args.phase,
    )?;
    let mut t = Table::new([
        "rho_m".to_string(),
        angle_header("theta_grav", unit),
        angle_header("theta_mag", unit),
        angle_header("theta_total", unit),
    ]);
    for r in records {
        t.push(vec![
            Cell::Float(r.rho),
            angle(r.theta_grav, unit),
            angle(r.theta_mag, unit),
            angle(r.theta_total, unit),
        ]);
    }
    Ok(t)
}

/// Slope of log θ_mag against log ρ for a deflect table.
pub fn magnetic_slope(table: &Table) -> f64 {
    let col = |j: usize| -> Vec<f64> {
        table
            .rows
            .iter()
            .map(|r| match r[j] {
                Cell::Float(x) => x,
                Cell::Int(i) => i as f64,
            })
            .collect()
    };
    loglog_slope(&col(0), &col(2))
}

pub struct ModulationArgs {
    pub star: StarId,
    pub rho: Option<f64>,
    pub n_phases: usize,
}

pub fn modulation(
    cfg: &RunConfig,
    args: &ModulationArgs,
    unit: AngleUnit,
) -> Result<Table, CliError> {
    let star = cfg.star_by_id(args.star)?;
    let rho = args.rho.unwrap_or(3.0 * star.radius);
    let rows = modulation_sweep(&cfg.tracer(), &star, rho, args.n_phases)?;
    let mut t = Table::new(["phase_rad".to_string(), angle_header("theta_mag", unit)]);
    for (phase, theta) in rows {
        t.push(vec![Cell::Float(phase), angle(theta, unit)]);
    }
    Ok(t)
}

pub fn lens(cfg: &RunConfig, u_list: &[f64]) -> Result<Table, CliError> {
    let lc: LensConfiguration = cfg.lens_configuration()?;
    let re = lc.einstein_radius();
    let mut t = Table::new(["u", "A_closed_form", "A_images", "n_images"]);
    for &u in u_list {
        if !(u > 0.0 && u.is_finite()) {
            return Err(bad(format!("u values must be positive (got {u})")));
        }
        let images = solve_images(&lc, &SourceOffset::from_u(u, re), 0.0)?;
        t.push(vec![
            Cell::Float(u),
            Cell::Float(point_lens_magnification(u)?),
            Cell::Float(total_magnification(&images)),
            Cell::Int(images.len() as i64),
        ]);
    }
    Ok(t)
}

pub struct BinaryArgs {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub lensed: Option<Lensed>,
    pub inclination_deg: Option<f64>,
    pub relative_to_conjunction: bool,
    pub with_deficit: bool,
}

pub fn binary_flux(cfg: &RunConfig, args: &BinaryArgs) -> Result<Table, CliError> {
    let mut scenario = cfg.scenario()?;
    if let Some(l) = args.lensed {
        scenario.lensed = l;
    }
    if let Some(i) = args.inclination_deg {
        scenario.orbit.inclination = i.to_radians();
    }
    scenario.validate()?;
    let offset = if args.relative_to_conjunction {
        scenario.conjunction_time()
    } else {
        0.0
    };
    let samples = scenario.flux_series(args.t0 + offset, args.t1 + offset, args.dt)?;
    let mut headers = vec!["t_s", "relative_flux", "eclipse", "rho_m", "spin_phase_rad"];
    if args.with_deficit {
        headers.push("flux_deficit");
    }
    let mut t = Table::new(headers);
    for s in samples {
        let mut row = vec![
            Cell::Float(s.t),
            Cell::Float(s.relative_flux),
            Cell::Int(s.eclipse as i64),
            Cell::Float(s.rho_t),
            Cell::Float(s.spin_phase_lens),
        ];
        if args.with_deficit {
            row.push(Cell::Float(s.flux_deficit));
        }
        t.push(row);
    }
    Ok(t)
}

pub fn threshold(cfg: &RunConfig, target: f64, d_eff: Option<f64>) -> Result<Table, CliError> {
    let mut lc = cfg.lens_configuration()?;
    if let Some(d) = d_eff {
        lc = LensConfiguration {
            d_s: lc.d_l * lc.d_l / (lc.d_l - d),
            ..lc
        };
        lc.validate()
            .map_err(|e| bad(format!("--d-eff must lie in (0, D_L): {e}")))?;
    }
    let b = field_threshold_for_effect(&lc, target)?;
    let mut t = Table::new([
        "target_fraction",
        "d_eff_m",
        "einstein_radius_m",
        "b0_threshold_t",
    ]);
    t.push(vec![
        Cell::Float(target),
        Cell::Float(lc.effective_distance()),
        Cell::Float(lc.einstein_radius()),
        Cell::Float(b),
    ]);
    Ok(t)
}
