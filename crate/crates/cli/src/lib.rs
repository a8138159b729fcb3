//! Command-line front end: deflection sweeps, modulation curves, lensing
//! tables, binary flux series and field thresholds.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qvlens_core::binary::Lensed;

use crate::commands::{BinaryArgs, DeflectArgs, ModulationArgs};
use crate::config::{AngleUnit, Format, RunConfig, StarId};
pub use crate::error::CliError;
use crate::output::Metadata;

#[derive(Debug, Parser)]
#[command(
    name = "qvlens",
    version,
    about = "Magnetized-vacuum lensing by neutron stars"
)]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Unit for deflection-angle columns.
    #[arg(long, global = true, value_enum)]
    pub angles: Option<AngleUnit>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LensedArg {
    AByB,
    BByA,
}

impl From<LensedArg> for Lensed {
    fn from(l: LensedArg) -> Self {
        match l {
            LensedArg::AByB => Lensed::AByB,
            LensedArg::BByA => Lensed::BByA,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Deflection angle against impact parameter.
    Deflect {
        #[arg(long, value_enum, ignore_case = true, default_value = "A")]
        star: StarId,
        /// Smallest impact parameter (m); defaults to 2 stellar radii.
        #[arg(long)]
        rho_min: Option<f64>,
        /// Largest impact parameter (m); defaults to 50 stellar radii.
        #[arg(long)]
        rho_max: Option<f64>,
        #[arg(long, default_value_t = 40)]
        samples: usize,
        /// Rotational phase of the star (rad).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phase: f64,
    },
    /// Magnetic deflection over one rotation.
    Modulation {
        #[arg(long, value_enum, ignore_case = true, default_value = "A")]
        star: StarId,
        /// Impact parameter (m); defaults to 3 stellar radii.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 64)]
        n_phases: usize,
    },
    /// Point-lens magnification: closed form against the image solver.
    Lens {
        /// Comma-separated source offsets in Einstein radii.
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,10")]
        u: Vec<f64>,
    },
    /// Relative flux of the lensed pulsar against time.
    BinaryFlux {
        #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, value_enum)]
        lensed: Option<LensedArg>,
        #[arg(long)]
        inclination_deg: Option<f64>,
        /// Interpret t0 and t1 relative to the first conjunction.
        #[arg(long)]
        relative_to_conjunction: bool,
        /// Append a flux_deficit column (1 − relative flux, unrounded).
        #[arg(long)]
        with_deficit: bool,
    },
    /// Surface field at which magnetic bending reaches a fraction of gravity at R_E.
    Threshold {
        #[arg(long, default_value_t = 0.05)]
        target: f64,
        /// Effective lens distance override (m).
        #[arg(long)]
        d_eff: Option<f64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Deflect { .. } => "deflect",
            Command::Modulation { .. } => "modulation",
            Command::Lens { .. } => "lens",
            Command::BinaryFlux { .. } => "binary-flux",
            Command::Threshold { .. } => "threshold",
        }
    }
}

/// Rendered output plus its destination.
pub struct Rendered {
    pub text: String,
    pub path: Option<PathBuf>,
}

pub fn render(cli: &Cli) -> Result<Rendered, CliError> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let unit = cli.angles.unwrap_or(cfg.output.angles);
    let format = cli.format.unwrap_or(cfg.output.format);
    let table = match &cli.command {
        Command::Deflect {
            star,
            rho_min,
            rho_max,
            samples,
            phase,
        } => commands::deflect(
            &cfg,
            &DeflectArgs {
                star: *star,
                rho_min: *rho_min,
                rho_max: *rho_max,
                samples: *samples,
                phase: *phase,
            },
            unit,
        )?,
        Command::Modulation {
            star,
            rho,
            n_phases,
        } => commands::modulation(
            &cfg,
            &ModulationArgs {
                star: *star,
                rho: *rho,
                n_phases: *n_phases,
            },
            unit,
        )?,
        Command::Lens { u } => commands::lens(&cfg, u)?,
        Command::BinaryFlux {
            t0,
            t1,
            dt,
            lensed,
            inclination_deg,
            relative_to_conjunction,
            with_deficit,
        } => commands::binary_flux(
            &cfg,
            &BinaryArgs {
                t0: *t0,
                t1: *t1,
                dt: *dt,
                lensed: lensed.map(Into::into),
                inclination_deg: *inclination_deg,
                relative_to_conjunction: *relative_to_conjunction,
                with_deficit: *with_deficit,
            },
        )?,
        Command::Threshold { target, d_eff } => commands::threshold(&cfg, *target, *d_eff)?,
    };
    let meta = Metadata {
        command: cli.command.name().to_string(),
        config_sha256: cfg.hash(),
        angle_unit: match unit {
            AngleUnit::Rad => "rad".into(),
            AngleUnit::Arcsec => "arcsec".into(),
        },
    };
    Ok(Rendered {
        text: table.render(format, &meta),
        path: cli
            .out
            .clone()
            .or_else(|| cfg.output.path.as_ref().map(PathBuf::from)),
    })
}

/// Runs the command and writes its output; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = render(cli).and_then(|r| match r.path {
        Some(p) => std::fs::write(&p, r.text).map_err(CliError::from),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(r.text.as_bytes())
                .map_err(CliError::from)
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qvlens: {e}");
            e.exit_code()
        }
    }
}
