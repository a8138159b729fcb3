//! TOML run configuration.
//!
//! Every section is optional; missing keys take the double-pulsar defaults and
//! unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qvlens_core::binary::{BeamProfile, BinaryScenario, Lensed, OrbitalElements};
use qvlens_core::constants::{KILOPARSEC, SOLAR_MASS};
use qvlens_core::lensing::LensConfiguration;
use qvlens_core::{
    FieldConvention, IndexModel, IntegratorConfig, NeutronStar, PhysicalConstants, Tracer, Vec3,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    #[default]
    Rad,
    Arcsec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
pub enum StarId {
    #[default]
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StarConfig {
    /// kg
    pub mass: f64,
    /// m
    pub radius: f64,
    /// T
    pub surface_field: f64,
    pub field_convention: FieldConvention,
    /// Magnetic axis at rotational phase zero.
    pub dipole_axis: [f64; 3],
    pub spin_axis: [f64; 3],
    /// s; defaults to 23 ms for A and 2.77 s for B.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_period: Option<f64>,
    /// rad
    pub spin_phase0: f64,
}

impl Default for StarConfig {
    fn default() -> Self {
        Self {
            mass: 1.4 * SOLAR_MASS,
            radius: 1e4,
            surface_field: 1e8,
            field_convention: FieldConvention::default(),
            dipole_axis: [0.0, 0.0, 1.0],
            spin_axis: [0.0, 1.0, 0.0],
            spin_period: None,
            spin_phase0: 0.0,
        }
    }
}

impl StarConfig {
    fn build(&self, default_period: f64) -> qvlens_core::Result<NeutronStar> {
        let [dx, dy, dz] = self.dipole_axis;
        let [sx, sy, sz] = self.spin_axis;
        NeutronStar::new(self.mass, self.radius, self.surface_field)?
            .with_field_convention(self.field_convention)
            .with_dipole_axis(Vec3::new(dx, dy, dz))?
            .with_spin(
                Vec3::new(sx, sy, sz),
                self.spin_period.unwrap_or(default_period),
                self.spin_phase0,
            )
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Stars {
    #[serde(rename = "A")]
    pub a: StarConfig,
    #[serde(rename = "B")]
    pub b: StarConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LensSection {
    /// Which star acts as the lens.
    pub star: StarId,
    /// Observer–lens distance (m).
    pub d_l: f64,
    /// Observer–source distance (m).
    pub d_s: f64,
}

impl Default for LensSection {
    /// D_L = 2 kpc, D_S = 4 kpc, so D_eff = 1 kpc.
    fn default() -> Self {
        Self {
            star: StarId::A,
            d_l: 2.0 * KILOPARSEC,
            d_s: 4.0 * KILOPARSEC,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub lensed: Lensed,
    /// rad
    pub beam_half_width: f64,
    pub beam_profile: BeamProfile,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        Self {
            lensed: Lensed::AByB,
            beam_half_width: 5e-4,
            beam_profile: BeamProfile::Tophat,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub angles: AngleUnit,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub index: IndexModel,
    pub star: Stars,
    pub orbit: OrbitalElements,
    pub integrator: IntegratorConfig,
    pub lens: LensSection,
    pub scenario: ScenarioSection,
    pub output: OutputSection,
}

fn config_error(e: qvlens_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.constants.validate().map_err(config_error)?;
        self.integrator.validate().map_err(config_error)?;
        self.star_a()?;
        self.star_b()?;
        self.lens_configuration()?;
        self.scenario()?;
        Ok(())
    }

    pub fn star_a(&self) -> Result<NeutronStar, CliError> {
        self.star
            .a
            .build(0.023)
            .map_err(|e| CliError::Config(format!("star.A: {e}")))
    }

    pub fn star_b(&self) -> Result<NeutronStar, CliError> {
        self.star
            .b
            .build(2.77)
            .map_err(|e| CliError::Config(format!("star.B: {e}")))
    }

    pub fn star_by_id(&self, id: StarId) -> Result<NeutronStar, CliError> {
        match id {
            StarId::A => self.star_a(),
            StarId::B => self.star_b(),
        }
    }

    pub fn tracer(&self) -> Tracer {
        Tracer::new(self.constants, self.index, self.integrator)
    }

    pub fn coupling(&self) -> f64 {
        self.index.coupling(&self.constants)
    }

    pub fn lens_configuration(&self) -> Result<LensConfiguration, CliError> {
        let mut cfg = LensConfiguration::new(
            self.star_by_id(self.lens.star)?,
            self.lens.d_l,
            self.lens.d_s,
            self.coupling(),
        )
        .map_err(|e| CliError::Config(format!("lens: {e}")))?;
        cfg.constants = self.constants;
        cfg.projection = self.index.projection;
        Ok(cfg)
    }

    pub fn scenario(&self) -> Result<BinaryScenario, CliError> {
        let s = BinaryScenario {
            pulsar_a: self.star_a()?,
            pulsar_b: self.star_b()?,
            orbit: self.orbit,
            lensed: self.scenario.lensed,
            beam_half_width: self.scenario.beam_half_width,
            beam_profile: self.scenario.beam_profile,
            index_model: self.index,
            a_coupling: self.coupling(),
            constants: self.constants,
        };
        s.validate()
            .map_err(|e| CliError::Config(format!("scenario: {e}")))?;
        Ok(s)
    }
}
