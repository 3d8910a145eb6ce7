//! The bundled configurations and the command line binary, end to end:
//! every shipped config parses and validates, outputs are byte-identical
//! across runs, and failure paths exit with the documented codes.

use casimag::config::{validate_config, RunConfig, Severity};
use casimag::dielectric::{OpticalDataTable, TableKind};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn bundled_configs_parse_validate_and_build() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        seen += 1;
        let config = RunConfig::from_path(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let errors: Vec<_> = validate_config(&config)
            .into_iter()
            .filter(|d| d.severity == Severity::Error)
            .collect();
        assert!(errors.is_empty(), "{}: {errors:?}", path.display());
        config
            .build_mirrors()
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
    assert_eq!(seen, 8, "expected the eight bundled configs");
}

#[test]
fn cli_energy_output_is_deterministic() {
    let config = configs_dir().join("ideal_energy.json");
    let config = config.to_str().unwrap();
    let one = run_cli(&["energy", "--config", config]);
    let two = run_cli(&["energy", "--config", config]);
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, two.stdout, "reruns must be byte-identical");

    let text = stdout_str(&one);
    let mut lines = text.lines();
    let tool = lines.next().unwrap();
    assert!(
        tool.starts_with("# tool: casimag v"),
        "unexpected first line {tool:?}"
    );
    let digest = lines.next().unwrap();
    let hex = digest.strip_prefix("# config_digest: ").expect("digest line");
    assert_eq!(hex.len(), 64);
    assert!(hex.chars().all(|c| c.is_ascii_hexdigit()));
    assert!(lines.next().unwrap().starts_with("distance_nm,energy_j_m2"));
    // Two data rows for the two grid distances, scientific notation.
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("1.000000000000e2,-4.33375"));
}

#[test]
fn cli_decompose_reports_disk_force() {
    let config = configs_dir().join("fe_au_disk_force.json");
    let out = run_cli(&["decompose", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    let header = text
        .lines()
        .find(|l| l.starts_with("distance_nm"))
        .expect("column header");
    let last = header.split(',').count() - 1;
    assert_eq!(header.split(',').last().unwrap(), "disk_force_delta_n");
    let row = text.lines().last().unwrap();
    let disk: f64 = row.split(',').nth(last).unwrap().parse().unwrap();
    // 10 um disk over gold at 100 nm: about -1.98 fN.
    assert!(disk < 0.0, "anisotropy pulls toward in-plane here");
    assert!(
        (1.8e-15..2.2e-15).contains(&disk.abs()),
        "disk force {disk:e}"
    );
}

#[test]
fn cli_scan_angle_fits_quartz_law() {
    let config = configs_dir().join("quartz_scan_10nm.json");
    let config = config.to_str().unwrap();
    let out = run_cli(&["scan-angle", "--config", config, "--rel-tol", "1e-6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    assert!(text.contains("# fit_class: sin2"), "missing class comment");
    let amp_line = text
        .lines()
        .find(|l| l.starts_with("# fit_amplitude_j_m2: "))
        .expect("amplitude comment");
    let amp: f64 = amp_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(
        (amp / 2.8356977187e-15 - 1.0).abs() < 5e-3,
        "quartz amplitude {amp:e}"
    );

    // Same scan as JSON, exercising the format override.
    let out = run_cli(&[
        "scan-angle", "--config", config, "--rel-tol", "1e-6", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["scan"]["class"], "sin2");
    assert_eq!(v["scan"]["angles"].as_array().unwrap().len(), 16);
}

#[test]
fn cli_exit_codes_flag_config_problems() {
    let dir = std::env::temp_dir();

    // Unknown fields are rejected at parse time.
    let bad = dir.join("casimag_bad_field.json");
    std::fs::write(
        &bad,
        r#"{ "mirror_a": {"kind": "ideal"}, "mirror_b": {"kind": "ideal"},
             "distance_nm": 100.0, "surprise": 1 }"#,
    )
    .unwrap();
    let out = run_cli(&["energy", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    // Validation failures exit 1 and name the problem.
    let invalid = dir.join("casimag_bad_angles.json");
    std::fs::write(
        &invalid,
        r#"{ "mirror_a": {"kind": "uniaxial", "preset": "quartz"},
             "mirror_b": {"kind": "ferromagnet", "preset": "fe"},
             "distance_nm": 10.0, "angles": {"count": 4} }"#,
    )
    .unwrap();
    let out = run_cli(&["validate", "--config", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_str(&out).contains("error: angles.count"));

    // Missing subcommand is a usage error, also exit 1.
    let out = run_cli(&[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unsorted_table_diagnostic_names_the_line() {
    let text = "energy_ev,eps_real,eps_imag\n\
                1.0,0.0,0.5\n\
                2.0,0.0,0.7\n\
                1.5,0.0,0.6\n";
    let err = OpticalDataTable::parse_csv(text, TableKind::Diagonal).unwrap_err();
    let message = err.to_string();
    assert!(
        message.contains("line 4"),
        "diagnostic should point at line 4: {message}"
    );
}
