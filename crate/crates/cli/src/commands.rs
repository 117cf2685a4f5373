//! The four experiment commands and their file outputs.
//!
//! Every command writes its result artifacts plus a `manifest.json` echoing
//! the configuration and listing the produced files. Result artifacts are
//! deterministic for a fixed config and seed; the manifest carries wall-clock
//! timestamps and is the one file excluded from that guarantee. All files are
//! written atomically (temp file + rename).

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use arched_array::correlation::{corr_ula_matrix, corr_ura_matrix, CorrelationMatrix};
use arched_array::geometry::ArrayGeometry;
use arched_array::oracle::{oracle_matrix, validate, ValidationReport};
use arched_array::spectrum::{
    asymptotic_dof_ula, asymptotic_dof_ura, dof_report, eigen_spectrum, eigen_spectrum_hermitian,
    threshold_key, DofReport, EigenSpectrum,
};
use arched_array::Error as CoreError;

use crate::config::{ArrayType, ExperimentConfig};
use crate::CliError;

fn map_core(err: CoreError) -> CliError {
    match err {
        CoreError::Domain(_) | CoreError::Resource(_) => CliError::Config(err.to_string()),
        other => CliError::Numeric(other.to_string()),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
    }

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    started_utc: String,
    finished_utc: String,
    config: &'a ExperimentConfig,
    artifacts: Vec<String>,
}

/// Writes `manifest.json` after all artifacts exist.
fn write_manifest(
    out_dir: &Path,
    command: &str,
    cfg: &ExperimentConfig,
    started_utc: String,
    artifacts: &[PathBuf],
) -> Result<PathBuf, CliError> {
    let manifest = RunManifest {
        tool: "arched-array",
        version: env!("CARGO_PKG_VERSION"),
        command,
        started_utc,
        finished_utc: chrono::Utc::now().to_rfc3339(),
        config: cfg,
        artifacts: artifacts
            .iter()
            .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
            .collect(),
    };
    let path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Io(format!("serializing manifest: {e}")))?;
    write_atomic(&path, json.as_bytes())?;
    Ok(path)
}

fn now_utc() -> String {
    chrono::Utc::now().to_rfc3339()
}

fn closed_matrix(geom: &ArrayGeometry<f64>) -> Result<CorrelationMatrix<f64>, CliError> {
    match geom {
        ArrayGeometry::Ula(g) => Ok(corr_ula_matrix(g)),
        ArrayGeometry::Ura(g) => corr_ura_matrix(g).map_err(map_core),
    }
}

fn asymptote(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    let lambda = cfg.wavelength();
    match cfg.array_type {
        ArrayType::Ula => asymptotic_dof_ula(cfg.arc_length_m, lambda).map_err(map_core),
        ArrayType::Ura => asymptotic_dof_ura(cfg.arc_length_m, lambda).map_err(map_core),
    }
}

/// `corr`: closed-form correlation matrix at the primary bend angle.
pub fn cmd_corr(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let started = now_utc();
    let geom = cfg.geometry(cfg.primary_beta())?;
    let matrix = closed_matrix(&geom)?;
    let mut buf = Vec::new();
    matrix
        .write_csv(&mut buf)
        .map_err(|e| CliError::Io(format!("formatting corr.csv: {e}")))?;
    let path = out_dir.join("corr.csv");
    write_atomic(&path, &buf)?;
    let manifest = write_manifest(out_dir, "corr", cfg, started, std::slice::from_ref(&path))?;
    Ok(vec![path, manifest])
}

fn spectrum_for(
    cfg: &ExperimentConfig,
    beta: f64,
    use_oracle: bool,
) -> Result<EigenSpectrum<f64>, CliError> {
    let geom = cfg.geometry(beta)?;
    if use_oracle {
        let hermitian = oracle_matrix(&geom, &cfg.oracle.settings()).map_err(map_core)?;
        eigen_spectrum_hermitian(&hermitian).map_err(map_core)
    } else {
        eigen_spectrum(&closed_matrix(&geom)?).map_err(map_core)
    }
}

fn report_for(
    cfg: &ExperimentConfig,
    beta: f64,
    spectrum: &EigenSpectrum<f64>,
) -> Result<DofReport, CliError> {
    dof_report(spectrum, &cfg.dof_thresholds, asymptote(cfg)?, beta).map_err(map_core)
}

/// `spectrum`: eigenvalues and DoF report at the primary bend angle.
pub fn cmd_spectrum(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    use_oracle: bool,
) -> Result<Vec<PathBuf>, CliError> {
    let started = now_utc();
    let beta = cfg.primary_beta();
    let spectrum = spectrum_for(cfg, beta, use_oracle)?;
    let report = report_for(cfg, beta, &spectrum)?;

    let mut buf = Vec::new();
    spectrum
        .write_csv(&mut buf)
        .map_err(|e| CliError::Io(format!("formatting spectrum.csv: {e}")))?;
    let spectrum_path = out_dir.join("spectrum.csv");
    write_atomic(&spectrum_path, &buf)?;

    let dof_path = out_dir.join("dof.json");
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Io(format!("serializing dof.json: {e}")))?;
    write_atomic(&dof_path, json.as_bytes())?;

    let manifest = write_manifest(
        out_dir,
        "spectrum",
        cfg,
        started,
        &[spectrum_path.clone(), dof_path.clone()],
    )?;
    Ok(vec![spectrum_path, dof_path, manifest])
}

/// `sweep`: DoF metrics for every configured bend angle.
pub fn cmd_sweep(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let started = now_utc();
    let betas = cfg.betas();
    let reports: Vec<DofReport> = betas
        .par_iter()
        .map(|&beta| {
            let spectrum = spectrum_for(cfg, beta, false)?;
            report_for(cfg, beta, &spectrum)
        })
        .collect::<Result<_, CliError>>()?;

    let mut csv = String::from("beta");
    for tau in &cfg.dof_thresholds {
        csv.push_str(&format!(",dof_tau_{}", threshold_key(*tau)));
    }
    csv.push_str(",effective_rank,asymptote\n");
    for report in &reports {
        csv.push_str(&format!("{}", report.beta));
        for tau in &cfg.dof_thresholds {
            csv.push_str(&format!(",{}", report.threshold_counts[&threshold_key(*tau)]));
        }
        csv.push_str(&format!(",{},{}\n", report.effective_rank, report.asymptote));
    }
    let path = out_dir.join("sweep.csv");
    write_atomic(&path, csv.as_bytes())?;
    let manifest = write_manifest(out_dir, "sweep", cfg, started, std::slice::from_ref(&path))?;
    Ok(vec![path, manifest])
}

/// `validate`: closed form vs oracle; returns the report so the caller can
/// decide the exit code against the configured bound.
pub fn cmd_validate(
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> Result<(Vec<PathBuf>, ValidationReport), CliError> {
    let started = now_utc();
    let geom = cfg.geometry(cfg.primary_beta())?;
    let report = validate(&geom, cfg.validation_pairs, cfg.seed, &cfg.oracle.settings())
        .map_err(map_core)?;
    let path = out_dir.join("validation.json");
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Io(format!("serializing validation.json: {e}")))?;
    write_atomic(&path, json.as_bytes())?;
    let manifest = write_manifest(out_dir, "validate", cfg, started, std::slice::from_ref(&path))?;
    Ok((vec![path, manifest], report))
}
