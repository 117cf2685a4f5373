//! Experiment configuration: one JSON document per experiment, with scalar
//! fields overridable from the command line.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use arched_array::geometry::{ArchedUlaGeometry, ArchedUraGeometry, ArrayGeometry};
use arched_array::OracleSettings;

use crate::CliError;

/// Speed of light in vacuum, m/s; used to convert `frequency_hz` into a
/// wavelength.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrayType {
    Ula,
    Ura,
}

/// Bend angle: a single value or a sweep list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BendAngle {
    Single(f64),
    Sweep(Vec<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    pub order: usize,
    pub tolerance: f64,
    pub max_doublings: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        let s = OracleSettings::<f64>::default();
        Self { order: s.order, tolerance: s.tolerance, max_doublings: s.max_doublings }
    }
}

impl OracleConfig {
    pub fn settings(&self) -> OracleSettings<f64> {
        OracleSettings {
            order: self.order,
            tolerance: self.tolerance,
            max_doublings: self.max_doublings,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub array_type: ArrayType,
    /// ULA element count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_elements: Option<usize>,
    /// URA row count (along X).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    /// URA elements per arc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_arc: Option<usize>,
    pub arc_length_m: f64,
    pub bend_angle_rad: BendAngle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_hz: Option<f64>,
    /// URA row spacing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_spacing_m: Option<f64>,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default = "default_dof_thresholds")]
    pub dof_thresholds: Vec<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// `validate` exits 0 iff the max closed-vs-oracle real error stays
    /// below this bound.
    #[serde(default = "default_validation_bound")]
    pub validation_bound: f64,
    /// Pairs sampled by `validate` on arrays too large for exhaustion.
    #[serde(default = "default_validation_pairs")]
    pub validation_pairs: usize,
}

fn default_dof_thresholds() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_validation_bound() -> f64 {
    1e-8
}

fn default_validation_pairs() -> usize {
    10
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))?;
        cfg.validate_fields()?;
        Ok(cfg)
    }

    fn validate_fields(&self) -> Result<(), CliError> {
        match (self.wavelength_m, self.frequency_hz) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "exactly one of wavelength_m / frequency_hz must be set, got both".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "exactly one of wavelength_m / frequency_hz must be set, got neither".into(),
                ))
            }
            _ => {}
        }
        if self.betas().is_empty() {
            return Err(CliError::Config("bend_angle_rad sweep list must be non-empty".into()));
        }
        match self.array_type {
            ArrayType::Ula => {
                if self.n_elements.is_none() {
                    return Err(CliError::Config("ULA config requires n_elements".into()));
                }
            }
            ArrayType::Ura => {
                if self.rows.is_none() || self.per_arc.is_none() {
                    return Err(CliError::Config("URA config requires rows and per_arc".into()));
                }
                if self.row_spacing_m.is_none() {
                    return Err(CliError::Config("URA config requires row_spacing_m".into()));
                }
            }
        }
        for &tau in &self.dof_thresholds {
            if !(tau > 0.0 && tau < 1.0) {
                return Err(CliError::Config(format!(
                    "dof_thresholds entries must lie in (0, 1), got {tau}"
                )));
            }
        }
        Ok(())
    }

    /// Carrier wavelength in metres.
    pub fn wavelength(&self) -> f64 {
        match (self.wavelength_m, self.frequency_hz) {
            (Some(l), None) => l,
            (None, Some(f)) => SPEED_OF_LIGHT / f,
            _ => unreachable!("validated at load"),
        }
    }

    /// All configured bend angles.
    pub fn betas(&self) -> Vec<f64> {
        match &self.bend_angle_rad {
            BendAngle::Single(b) => vec![*b],
            BendAngle::Sweep(list) => list.clone(),
        }
    }

    /// Bend angle used by the non-sweep commands: the single configured
    /// value, or the first entry of a sweep list.
    pub fn primary_beta(&self) -> f64 {
        self.betas()[0]
    }

    /// Builds the array geometry at the given bend angle.
    pub fn geometry(&self, beta: f64) -> Result<ArrayGeometry<f64>, CliError> {
        let lambda = self.wavelength();
        match self.array_type {
            ArrayType::Ula => {
                let n = self.n_elements.expect("validated at load");
                ArchedUlaGeometry::new(n, self.arc_length_m, beta, lambda)
                    .map(ArrayGeometry::Ula)
                    .map_err(|e| CliError::Config(e.to_string()))
            }
            ArrayType::Ura => {
                let rows = self.rows.expect("validated at load");
                let per_arc = self.per_arc.expect("validated at load");
                let dx = self.row_spacing_m.expect("validated at load");
                ArchedUraGeometry::new(rows, per_arc, dx, self.arc_length_m, beta, lambda)
                    .map(ArrayGeometry::Ura)
                    .map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }
}

/// Scalar overrides collected from the command line; flag names mirror the
/// config keys.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    #[arg(long = "n_elements", help = "Override n_elements")]
    pub n_elements: Option<usize>,
    #[arg(long = "rows", help = "Override rows")]
    pub rows: Option<usize>,
    #[arg(long = "per_arc", help = "Override per_arc")]
    pub per_arc: Option<usize>,
    #[arg(long = "arc_length_m", help = "Override arc_length_m")]
    pub arc_length_m: Option<f64>,
    #[arg(long = "bend_angle_rad", help = "Override bend_angle_rad with a single value")]
    pub bend_angle_rad: Option<f64>,
    #[arg(long = "wavelength_m", help = "Override wavelength_m (clears frequency_hz)")]
    pub wavelength_m: Option<f64>,
    #[arg(long = "frequency_hz", help = "Override frequency_hz (clears wavelength_m)")]
    pub frequency_hz: Option<f64>,
    #[arg(long = "row_spacing_m", help = "Override row_spacing_m")]
    pub row_spacing_m: Option<f64>,
    #[arg(long = "seed", help = "Override seed")]
    pub seed: Option<u64>,
    #[arg(long = "validation_bound", help = "Override validation_bound")]
    pub validation_bound: Option<f64>,
    #[arg(long = "validation_pairs", help = "Override validation_pairs")]
    pub validation_pairs: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) -> Result<(), CliError> {
        if let Some(v) = self.n_elements {
            cfg.n_elements = Some(v);
        }
        if let Some(v) = self.rows {
            cfg.rows = Some(v);
        }
        if let Some(v) = self.per_arc {
            cfg.per_arc = Some(v);
        }
        if let Some(v) = self.arc_length_m {
            cfg.arc_length_m = v;
        }
        if let Some(v) = self.bend_angle_rad {
            cfg.bend_angle_rad = BendAngle::Single(v);
        }
        if let Some(v) = self.wavelength_m {
            cfg.wavelength_m = Some(v);
            cfg.frequency_hz = None;
        }
        if let Some(v) = self.frequency_hz {
            cfg.frequency_hz = Some(v);
            cfg.wavelength_m = None;
        }
        if let Some(v) = self.row_spacing_m {
            cfg.row_spacing_m = Some(v);
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.validation_bound {
            cfg.validation_bound = v;
        }
        if let Some(v) = self.validation_pairs {
            cfg.validation_pairs = v;
        }
        cfg.validate_fields()
    }
}
