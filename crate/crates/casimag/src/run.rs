//! Command execution and output rendering.
//!
//! Outputs are bit-for-bit reproducible: headers carry the tool version
//! and the configuration digest, never timestamps, and all floats render
//! through one fixed format. Sweeps run their points in parallel but
//! collect in input order.

use crate::anisotropy::{
    amplitude_vs_distance, proximity_force, scan_inplane, torque_profile, AngularClass,
    AngularScan, AnisotropyError, TorqueProfile,
};
use crate::casimir::{
    casimir_energy_decomposed, casimir_energy_general, casimir_force, casimir_force_decomposed,
    CasimirError,
};
use crate::config::{
    config_digest, validate_config, ConfigError, Diagnostic, OutputFormat, RunConfig, Severity,
};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Energy(#[from] CasimirError),
    #[error(transparent)]
    Anisotropy(#[from] AnisotropyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Energy,
    Decompose,
    ScanAngle,
    ScanDistance,
    Validate,
}

/// Command-line overrides applied on top of the configuration file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub format: Option<OutputFormat>,
    pub out_path: Option<PathBuf>,
    pub rel_tol: Option<f64>,
}

#[derive(Debug)]
pub struct RunOutcome {
    /// Rendered output, ready for stdout or the output file.
    pub text: String,
    /// Human-readable reports for points that failed numerically while
    /// the rest of the sweep continued.
    pub failures: Vec<String>,
    /// True when validation found at least one error.
    pub has_errors: bool,
}

/// Install the global thread pool size. Call before the first parallel
/// work; later calls are ignored (the pool is process-global).
pub fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn tool_id() -> String {
    format!("casimag v{}", env!("CARGO_PKG_VERSION"))
}

fn fmt_f(x: f64) -> String {
    format!("{x:.12e}")
}

fn class_str(c: AngularClass) -> &'static str {
    match c {
        AngularClass::Sin2 => "sin2",
        AngularClass::Cos2 => "cos2",
        AngularClass::Mixed => "mixed",
    }
}

fn csv_header(out: &mut String, digest: &str) {
    let _ = writeln!(out, "# tool: {}", tool_id());
    let _ = writeln!(out, "# config_digest: {digest}");
}

#[derive(Debug, Serialize)]
struct EnergyRow {
    distance_nm: f64,
    energy_j_m2: f64,
    energy_err_j_m2: f64,
    pressure_n_m2: f64,
    pressure_err_n_m2: f64,
    evaluations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    disk_force_n: Option<f64>,
}

#[derive(Debug, Serialize)]
struct DecomposeRow {
    distance_nm: f64,
    e0_j_m2: f64,
    e_perp_j_m2: f64,
    e_par1_j_m2: f64,
    e_par2_j_m2: f64,
    f0_n_m2: f64,
    f_perp_n_m2: f64,
    f_par1_n_m2: f64,
    f_par2_n_m2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    disk_force_delta_n: Option<f64>,
}

#[derive(Debug, Serialize)]
struct JsonDocument<T: Serialize> {
    tool: String,
    config_digest: String,
    #[serde(flatten)]
    body: T,
}

fn to_json<T: Serialize>(digest: &str, body: T) -> String {
    let doc = JsonDocument {
        tool: tool_id(),
        config_digest: digest.to_string(),
        body,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("output serializes");
    text.push('\n');
    text
}

pub fn execute(task: Task, config: &RunConfig, opts: &RunOptions) -> Result<RunOutcome, RunError> {
    let digest = config_digest(config);
    let format = opts
        .format
        .or(config.output.format)
        .unwrap_or(OutputFormat::Csv);
    match task {
        Task::Validate => Ok(run_validate(config, &digest, format)),
        Task::Energy => run_energy(config, opts, &digest, format),
        Task::Decompose => run_decompose(config, opts, &digest, format),
        Task::ScanAngle => run_scan_angle(config, opts, &digest, format),
        Task::ScanDistance => run_scan_distance(config, opts, &digest, format),
    }
}

/// Resolve the output destination: command line wins over the config.
pub fn output_path(config: &RunConfig, opts: &RunOptions) -> Option<PathBuf> {
    opts.out_path
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from))
}

fn effective_quadrature(config: &RunConfig, opts: &RunOptions) -> crate::quad::QuadratureConfig {
    let mut q = config.effective_quadrature();
    if let Some(r) = opts.rel_tol {
        q.rel_tol = r;
    }
    q
}

fn run_validate(config: &RunConfig, digest: &str, format: OutputFormat) -> RunOutcome {
    let diags = validate_config(config);
    let has_errors = diags.iter().any(|d| d.severity == Severity::Error);
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                ok: bool,
                diagnostics: Vec<Diagnostic>,
            }
            to_json(
                digest,
                Body {
                    ok: !has_errors,
                    diagnostics: diags,
                },
            )
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            csv_header(&mut out, digest);
            for d in &diags {
                let _ = writeln!(out, "{}: {}", d.severity, d.message);
            }
            if !has_errors {
                let _ = writeln!(out, "configuration ok");
            }
            out
        }
    };
    RunOutcome {
        text,
        failures: Vec::new(),
        has_errors,
    }
}

fn run_energy(
    config: &RunConfig,
    opts: &RunOptions,
    digest: &str,
    format: OutputFormat,
) -> Result<RunOutcome, RunError> {
    let (a, b) = config.build_mirrors()?;
    let q = effective_quadrature(config, opts);
    let distances = config.distance_list()?;
    let disk = config.estimators.disk_radius_um;
    let computed: Vec<(f64, Result<EnergyRow, CasimirError>)> = distances
        .par_iter()
        .map(|&d| {
            let row = casimir_energy_general(&a, &b, d, &q).and_then(|e| {
                let f = casimir_force(&a, &b, d, &q)?;
                Ok(EnergyRow {
                    distance_nm: d,
                    energy_j_m2: e.value,
                    energy_err_j_m2: e.est_error,
                    pressure_n_m2: f.value,
                    pressure_err_n_m2: f.est_error,
                    evaluations: e.evaluations + f.evaluations,
                    disk_force_n: disk.map(|r| crate::anisotropy::disk_force(f.value, r)),
                })
            });
            (d, row)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (d, r) in computed {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(format!("distance {d} nm: {e}")),
        }
    }
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                rows: Vec<EnergyRow>,
            }
            to_json(digest, Body { rows })
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            csv_header(&mut out, digest);
            let mut cols =
                "distance_nm,energy_j_m2,energy_err_j_m2,pressure_n_m2,pressure_err_n_m2,evaluations"
                    .to_string();
            if disk.is_some() {
                cols.push_str(",disk_force_n");
            }
            let _ = writeln!(out, "{cols}");
            for r in &rows {
                let mut line = format!(
                    "{},{},{},{},{},{}",
                    fmt_f(r.distance_nm),
                    fmt_f(r.energy_j_m2),
                    fmt_f(r.energy_err_j_m2),
                    fmt_f(r.pressure_n_m2),
                    fmt_f(r.pressure_err_n_m2),
                    r.evaluations
                );
                if let Some(df) = r.disk_force_n {
                    line.push(',');
                    line.push_str(&fmt_f(df));
                }
                let _ = writeln!(out, "{line}");
            }
            out
        }
    };
    Ok(RunOutcome {
        text,
        failures,
        has_errors: false,
    })
}

fn run_decompose(
    config: &RunConfig,
    opts: &RunOptions,
    digest: &str,
    format: OutputFormat,
) -> Result<RunOutcome, RunError> {
    let (a, b) = config.build_mirrors()?;
    let q = effective_quadrature(config, opts);
    let distances = config.distance_list()?;
    let disk = config.estimators.disk_radius_um;
    let computed: Vec<(f64, Result<DecomposeRow, CasimirError>)> = distances
        .par_iter()
        .map(|&d| {
            let row = casimir_energy_decomposed(&a, &b, d, &q).and_then(|e| {
                let f = casimir_force_decomposed(&a, &b, d, &q)?;
                Ok(DecomposeRow {
                    distance_nm: d,
                    e0_j_m2: e.e0,
                    e_perp_j_m2: e.e_perp,
                    e_par1_j_m2: e.e_par1,
                    e_par2_j_m2: e.e_par2,
                    f0_n_m2: f.f0,
                    f_perp_n_m2: f.f_perp,
                    f_par1_n_m2: f.f_par1,
                    f_par2_n_m2: f.f_par2,
                    disk_force_delta_n: disk
                        .map(|r| crate::anisotropy::disk_force(f.anisotropy_coefficient(), r)),
                })
            });
            (d, row)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (d, r) in computed {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(format!("distance {d} nm: {e}")),
        }
    }
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                rows: Vec<DecomposeRow>,
            }
            to_json(digest, Body { rows })
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            csv_header(&mut out, digest);
            let mut cols = "distance_nm,e0_j_m2,e_perp_j_m2,e_par1_j_m2,e_par2_j_m2,\
                 f0_n_m2,f_perp_n_m2,f_par1_n_m2,f_par2_n_m2"
                .to_string();
            if disk.is_some() {
                cols.push_str(",disk_force_delta_n");
            }
            let _ = writeln!(out, "{cols}");
            for r in &rows {
                let mut line = format!(
                    "{},{},{},{},{},{},{},{},{}",
                    fmt_f(r.distance_nm),
                    fmt_f(r.e0_j_m2),
                    fmt_f(r.e_perp_j_m2),
                    fmt_f(r.e_par1_j_m2),
                    fmt_f(r.e_par2_j_m2),
                    fmt_f(r.f0_n_m2),
                    fmt_f(r.f_perp_n_m2),
                    fmt_f(r.f_par1_n_m2),
                    fmt_f(r.f_par2_n_m2)
                );
                if let Some(df) = r.disk_force_delta_n {
                    line.push(',');
                    line.push_str(&fmt_f(df));
                }
                let _ = writeln!(out, "{line}");
            }
            out
        }
    };
    Ok(RunOutcome {
        text,
        failures,
        has_errors: false,
    })
}

#[derive(Serialize)]
struct ScanEstimators {
    #[serde(skip_serializing_if = "Option::is_none")]
    proximity_force_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    torque_max_n_m: Option<f64>,
}

fn run_scan_angle(
    config: &RunConfig,
    opts: &RunOptions,
    digest: &str,
    format: OutputFormat,
) -> Result<RunOutcome, RunError> {
    let (a, b) = config.build_mirrors()?;
    let q = effective_quadrature(config, opts);
    let d = config.single_distance()?;
    let scan = scan_inplane(&a, &b, d, config.angles.count, &q)?;
    let torque: Option<TorqueProfile> = config
        .estimators
        .plate_radius_um
        .map(|r| torque_profile(&scan, r));
    let estimators = ScanEstimators {
        proximity_force_n: config
            .estimators
            .curvature_radius_um
            .map(|r| proximity_force(scan.fit_amplitude.abs(), r)),
        torque_max_n_m: torque.as_ref().map(|t| t.max_abs),
    };
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                scan: AngularScan,
                estimators: ScanEstimators,
                #[serde(skip_serializing_if = "Option::is_none")]
                torque: Option<TorqueProfile>,
            }
            to_json(
                digest,
                Body {
                    scan,
                    estimators,
                    torque,
                },
            )
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            csv_header(&mut out, digest);
            let _ = writeln!(out, "# distance_nm: {}", fmt_f(scan.distance_nm));
            let _ = writeln!(out, "# fit_class: {}", class_str(scan.class));
            let _ = writeln!(out, "# fit_amplitude_j_m2: {}", fmt_f(scan.fit_amplitude));
            let _ = writeln!(out, "# fit_offset_j_m2: {}", fmt_f(scan.fit_offset));
            let _ = writeln!(out, "# fit_residual_rel: {}", fmt_f(scan.fit_residual));
            if let Some(p) = estimators.proximity_force_n {
                let _ = writeln!(out, "# proximity_force_n: {}", fmt_f(p));
            }
            if let Some(t) = estimators.torque_max_n_m {
                let _ = writeln!(out, "# torque_max_n_m: {}", fmt_f(t));
            }
            let has_torque = torque.is_some();
            let _ = writeln!(
                out,
                "angle_rad,delta_e_j_m2{}",
                if has_torque { ",torque_n_m" } else { "" }
            );
            for (i, (&ang, &de)) in scan.angles.iter().zip(&scan.delta_e).enumerate() {
                let mut line = format!("{},{}", fmt_f(ang), fmt_f(de));
                if let Some(t) = &torque {
                    line.push(',');
                    line.push_str(&fmt_f(t.torque[i]));
                }
                let _ = writeln!(out, "{line}");
            }
            out
        }
    };
    Ok(RunOutcome {
        text,
        failures: Vec::new(),
        has_errors: false,
    })
}

fn run_scan_distance(
    config: &RunConfig,
    opts: &RunOptions,
    digest: &str,
    format: OutputFormat,
) -> Result<RunOutcome, RunError> {
    let (a, b) = config.build_mirrors()?;
    let q = effective_quadrature(config, opts);
    let distances = config.distance_list()?;
    let curve = amplitude_vs_distance(&a, &b, &distances, config.angles.count, &q)?;
    let curvature = config.estimators.curvature_radius_um;
    let plate = config.estimators.plate_radius_um;
    let text = match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Body {
                curve: crate::anisotropy::AmplitudeCurve,
                #[serde(skip_serializing_if = "Option::is_none")]
                proximity_force_n: Option<Vec<f64>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                torque_max_n_m: Option<Vec<f64>>,
            }
            let proximity_force_n = curvature.map(|r| {
                curve
                    .amplitude
                    .iter()
                    .map(|a| proximity_force(a.abs(), r))
                    .collect()
            });
            let torque_max_n_m = plate.map(|r| {
                let area = std::f64::consts::PI * (r * 1e-6) * (r * 1e-6);
                curve.amplitude.iter().map(|a| a.abs() * area).collect()
            });
            to_json(
                digest,
                Body {
                    curve,
                    proximity_force_n,
                    torque_max_n_m,
                },
            )
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            csv_header(&mut out, digest);
            for &(lo, hi) in &curve.kinks {
                let _ = writeln!(out, "# kink: {} .. {} nm", fmt_f(lo), fmt_f(hi));
            }
            let mut cols = "distance_nm,amplitude_j_m2,class,residual_rel".to_string();
            if curvature.is_some() {
                cols.push_str(",proximity_force_n");
            }
            if plate.is_some() {
                cols.push_str(",torque_max_n_m");
            }
            let _ = writeln!(out, "{cols}");
            for i in 0..curve.distances_nm.len() {
                let mut line = format!(
                    "{},{},{},{}",
                    fmt_f(curve.distances_nm[i]),
                    fmt_f(curve.amplitude[i]),
                    class_str(curve.classes[i]),
                    fmt_f(curve.residuals[i])
                );
                if let Some(r) = curvature {
                    line.push(',');
                    line.push_str(&fmt_f(proximity_force(curve.amplitude[i].abs(), r)));
                }
                if let Some(r) = plate {
                    let area = std::f64::consts::PI * (r * 1e-6) * (r * 1e-6);
                    line.push(',');
                    line.push_str(&fmt_f(curve.amplitude[i].abs() * area));
                }
                let _ = writeln!(out, "{line}");
            }
            out
        }
    };
    Ok(RunOutcome {
        text,
        failures: Vec::new(),
        has_errors: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::MirrorConfig;

    fn ideal_config() -> RunConfig {
        RunConfig {
            mirror_a: MirrorConfig::preset("ideal"),
            mirror_b: MirrorConfig::preset("ideal"),
            distance_nm: Some(100.0),
            distances: None,
            angles: Default::default(),
            quadrature: Default::default(),
            estimators: Default::default(),
            output: Default::default(),
        }
    }

    #[test]
    fn energy_output_is_deterministic_and_tagged() {
        let c = ideal_config();
        let opts = RunOptions {
            rel_tol: Some(1e-5),
            ..Default::default()
        };
        let one = execute(Task::Energy, &c, &opts).unwrap();
        let two = execute(Task::Energy, &c, &opts).unwrap();
        assert_eq!(one.text, two.text);
        assert!(one.text.starts_with("# tool: casimag v"));
        assert!(one.text.contains("# config_digest: "));
        assert!(one.text.contains("distance_nm,energy_j_m2"));
        assert!(one.failures.is_empty());
    }

    #[test]
    fn validate_reports_ok_for_clean_config() {
        let c = ideal_config();
        let out = execute(Task::Validate, &c, &RunOptions::default()).unwrap();
        assert!(!out.has_errors);
        assert!(out.text.contains("configuration ok"));
    }

    #[test]
    fn json_format_carries_digest() {
        let c = ideal_config();
        let opts = RunOptions {
            format: Some(OutputFormat::Json),
            rel_tol: Some(1e-4),
            ..Default::default()
        };
        let out = execute(Task::Energy, &c, &opts).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["config_digest"], config_digest(&c));
        assert!(v["rows"].as_array().unwrap().len() == 1);
    }
}
