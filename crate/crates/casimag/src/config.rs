//! JSON run configuration: mirror assembly, distance grids, tolerances
//! and output routing, plus a validation pass that reports everything it
//! finds instead of stopping at the first problem.

use crate::anisotropy::log_grid;
use crate::dielectric::{
    composite_metal_model, DielectricError, DielectricModel, OpticalDataTable, TableKind,
};
use crate::materials::{preset_mirror, MaterialError};
use crate::quad::QuadratureConfig;
use crate::reflection::{MagnetizationOrientation, MirrorSpec, UniaxialGeometry};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("mirror {which}: {message}")]
    Mirror { which: &'static str, message: String },
    #[error(transparent)]
    Dielectric(#[from] DielectricError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MirrorKind {
    Ideal,
    Metal,
    Ferromagnet,
    Uniaxial,
}

impl MirrorKind {
    fn matches(self, spec: &MirrorSpec) -> bool {
        matches!(
            (self, spec),
            (MirrorKind::Ideal, MirrorSpec::Ideal)
                | (MirrorKind::Metal, MirrorSpec::IsotropicMetal { .. })
                | (MirrorKind::Ferromagnet, MirrorSpec::Ferromagnet { .. })
                | (MirrorKind::Uniaxial, MirrorSpec::UniaxialPlate { .. })
        )
    }
}

/// One mirror described either by a preset name or by explicit parts.
///
/// Explicit metals take `drude`, a diagonal loss table (`xx_table`), or
/// both at once, which splices the table with the Drude tail below its
/// first energy. Ferromagnets additionally need a gyrotropic table
/// (`xy_table`); `xy_scale` multiplies its loss, which is handy for
/// linearity studies. Uniaxial mirrors take the two-oscillator fits of
/// both principal axes and the in-plane axis angle `axis_zeta`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorConfig {
    pub kind: MirrorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drude: Option<crate::dielectric::DrudeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_oscillator_ordinary: Option<crate::dielectric::TwoOscillatorParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_oscillator_extraordinary: Option<crate::dielectric::TwoOscillatorParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xx_table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xy_table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<MagnetizationOrientation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_zeta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xy_scale: Option<f64>,
}

impl MirrorConfig {
    pub fn preset(name: &str) -> Self {
        let kind = match preset_mirror(name).map(|s| s.kind_name()) {
            Ok("isotropic metal") => MirrorKind::Metal,
            Ok("ferromagnet") => MirrorKind::Ferromagnet,
            Ok("uniaxial plate") => MirrorKind::Uniaxial,
            _ => MirrorKind::Ideal,
        };
        Self {
            kind,
            preset: Some(name.into()),
            drude: None,
            two_oscillator_ordinary: None,
            two_oscillator_extraordinary: None,
            xx_table: None,
            xy_table: None,
            orientation: None,
            axis_zeta: None,
            xy_scale: None,
        }
    }

    fn load_table(path: &str, kind: TableKind) -> Result<OpticalDataTable, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.into(),
            source,
        })?;
        OpticalDataTable::parse_csv(&text, kind).map_err(|e| {
            ConfigError::Invalid(format!("table {path}: {e}"))
        })
    }

    fn diagonal_model(&self, which: &'static str) -> Result<DielectricModel, ConfigError> {
        match (&self.drude, &self.xx_table) {
            (Some(d), None) => Ok(DielectricModel::drude(*d)?),
            (None, Some(path)) => Ok(DielectricModel::table(Self::load_table(
                path,
                TableKind::Diagonal,
            )?)),
            (Some(d), Some(path)) => Ok(composite_metal_model(
                Self::load_table(path, TableKind::Diagonal)?,
                *d,
            )?),
            (None, None) => Err(ConfigError::Mirror {
                which,
                message: "needs `drude`, `xx_table`, or a preset".into(),
            }),
        }
    }

    pub fn build(&self, which: &'static str) -> Result<MirrorSpec, ConfigError> {
        let base = if let Some(name) = &self.preset {
            let spec = preset_mirror(name)?;
            if !self.kind.matches(&spec) {
                return Err(ConfigError::Mirror {
                    which,
                    message: format!(
                        "preset `{name}` is a {}, but kind says {:?}",
                        spec.kind_name(),
                        self.kind
                    ),
                });
            }
            spec
        } else {
            match self.kind {
                MirrorKind::Ideal => MirrorSpec::Ideal,
                MirrorKind::Metal => MirrorSpec::IsotropicMetal {
                    xx: self.diagonal_model(which)?,
                },
                MirrorKind::Ferromagnet => {
                    let xx = self.diagonal_model(which)?;
                    let path = self.xy_table.as_ref().ok_or(ConfigError::Mirror {
                        which,
                        message: "ferromagnet needs `xy_table` or a preset".into(),
                    })?;
                    let xy = DielectricModel::table(Self::load_table(
                        path,
                        TableKind::OffDiagonal,
                    )?);
                    MirrorSpec::Ferromagnet {
                        xx,
                        xy,
                        orientation: MagnetizationOrientation::default(),
                    }
                }
                MirrorKind::Uniaxial => {
                    let o = self.two_oscillator_ordinary.ok_or(ConfigError::Mirror {
                        which,
                        message: "uniaxial mirror needs `two_oscillator_ordinary`".into(),
                    })?;
                    let e = self
                        .two_oscillator_extraordinary
                        .ok_or(ConfigError::Mirror {
                            which,
                            message: "uniaxial mirror needs `two_oscillator_extraordinary`"
                                .into(),
                        })?;
                    MirrorSpec::UniaxialPlate {
                        ordinary: DielectricModel::two_oscillator(o)?,
                        extraordinary: DielectricModel::two_oscillator(e)?,
                        geometry: UniaxialGeometry::default(),
                    }
                }
            }
        };
        self.apply_overrides(base, which)
    }

    fn apply_overrides(
        &self,
        spec: MirrorSpec,
        which: &'static str,
    ) -> Result<MirrorSpec, ConfigError> {
        let mut spec = spec;
        if let Some(o) = self.orientation {
            if !spec.is_magnetic() {
                return Err(ConfigError::Mirror {
                    which,
                    message: "orientation only applies to ferromagnets".into(),
                });
            }
            spec = spec.with_orientation(o);
        }
        if let Some(zeta) = self.axis_zeta {
            match &mut spec {
                MirrorSpec::UniaxialPlate { geometry, .. } => geometry.zeta = zeta,
                _ => {
                    return Err(ConfigError::Mirror {
                        which,
                        message: "axis_zeta only applies to uniaxial mirrors".into(),
                    })
                }
            }
        }
        if let Some(scale) = self.xy_scale {
            match &mut spec {
                MirrorSpec::Ferromagnet { xy, .. } => match xy {
                    DielectricModel::Table(t) => {
                        let scaled = t.table().scaled(scale)?;
                        *xy = DielectricModel::table(scaled);
                    }
                    _ => {
                        return Err(ConfigError::Mirror {
                            which,
                            message: "xy_scale needs a tabulated gyrotropic model".into(),
                        })
                    }
                },
                _ => {
                    return Err(ConfigError::Mirror {
                        which,
                        message: "xy_scale only applies to ferromagnets".into(),
                    })
                }
            }
        }
        Ok(spec)
    }
}

/// Distance grid: explicit values, or a geometric span.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_nm: Option<f64>,
    #[serde(default = "default_ppd")]
    pub points_per_decade: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values_nm: Option<Vec<f64>>,
}

fn default_ppd() -> usize {
    12
}

impl GridConfig {
    pub fn to_grid(&self) -> Result<Vec<f64>, ConfigError> {
        if let Some(values) = &self.values_nm {
            if values.is_empty() {
                return Err(ConfigError::Invalid("values_nm is empty".into()));
            }
            if values[0] <= 0.0 || values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ConfigError::Invalid(
                    "values_nm must be positive and strictly increasing".into(),
                ));
            }
            return Ok(values.clone());
        }
        match (self.start_nm, self.stop_nm) {
            (Some(a), Some(b)) => log_grid(a, b, self.points_per_decade)
                .map_err(|e| ConfigError::Invalid(e.to_string())),
            _ => Err(ConfigError::Invalid(
                "distance grid needs values_nm or start_nm and stop_nm".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglesConfig {
    #[serde(default = "default_angle_count")]
    pub count: usize,
}

fn default_angle_count() -> usize {
    16
}

impl Default for AnglesConfig {
    fn default() -> Self {
        Self {
            count: default_angle_count(),
        }
    }
}

/// Partial overrides of [`QuadratureConfig`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_samples: Option<usize>,
}

/// Geometry of the experimental estimators, all radii in micrometers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk_radius_um: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature_radius_um: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plate_radius_um: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// Top-level run description shared by every command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mirror_a: MirrorConfig,
    pub mirror_b: MirrorConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<GridConfig>,
    #[serde(default)]
    pub angles: AnglesConfig,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
    #[serde(default)]
    pub estimators: EstimatorConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build_mirrors(&self) -> Result<(MirrorSpec, MirrorSpec), ConfigError> {
        Ok((
            self.mirror_a.build("mirror_a")?,
            self.mirror_b.build("mirror_b")?,
        ))
    }

    pub fn effective_quadrature(&self) -> QuadratureConfig {
        let mut q = QuadratureConfig::default();
        if let Some(v) = self.quadrature.rel_tol {
            q.rel_tol = v;
        }
        if let Some(v) = self.quadrature.abs_tol {
            q.abs_tol = v;
        }
        if let Some(v) = self.quadrature.max_subdivisions {
            q.max_subdivisions = v;
        }
        if let Some(v) = self.quadrature.phi_samples {
            q.phi_samples = v;
        }
        q
    }

    /// Distance list for sweep commands: the grid if given, otherwise the
    /// single distance.
    pub fn distance_list(&self) -> Result<Vec<f64>, ConfigError> {
        if let Some(grid) = &self.distances {
            return grid.to_grid();
        }
        match self.distance_nm {
            Some(d) if d > 0.0 && d.is_finite() => Ok(vec![d]),
            Some(d) => Err(ConfigError::Invalid(format!(
                "distance_nm must be positive, got {d}"
            ))),
            None => Err(ConfigError::Invalid(
                "config needs distance_nm or a distances grid".into(),
            )),
        }
    }

    /// The single distance required by angular scans.
    pub fn single_distance(&self) -> Result<f64, ConfigError> {
        match self.distance_nm {
            Some(d) if d > 0.0 && d.is_finite() => Ok(d),
            Some(d) => Err(ConfigError::Invalid(format!(
                "distance_nm must be positive, got {d}"
            ))),
            None => Err(ConfigError::Invalid(
                "this command needs a single distance_nm".into(),
            )),
        }
    }
}

/// Stable identifier of a run configuration: SHA-256 over its canonical
/// JSON serialization. Written into every output header so results can be
/// traced back to the exact configuration.
pub fn config_digest(config: &RunConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: String) -> Self {
        Self {
            severity: Severity::Error,
            message,
        }
    }

    fn warning(message: String) -> Self {
        Self {
            severity: Severity::Warning,
            message,
        }
    }
}

fn check_diagonal_model(label: String, model: &DielectricModel, out: &mut Vec<Diagnostic>) {
    // Passive diagonal response on the imaginary axis is >= 1 and
    // monotonically decreasing; anything else means broken input data.
    let mut prev = f64::INFINITY;
    for i in 0..100 {
        let w = 1e-4 * 10f64.powf(8.0 * i as f64 / 99.0);
        let e = model.eps_i(w);
        if e < 1.0 - 1e-9 {
            out.push(Diagnostic::error(format!(
                "{label}: eps(i {w:.3e} eV) = {e:.6e} < 1"
            )));
            return;
        }
        if e > prev * (1.0 + 1e-9) {
            out.push(Diagnostic::error(format!(
                "{label}: eps(iw) increases at w = {w:.3e} eV"
            )));
            return;
        }
        prev = e;
    }
    if let DielectricModel::Composite(c) = model {
        let mismatch = c.splice_mismatch();
        if mismatch > 0.5 {
            out.push(Diagnostic::warning(format!(
                "{label}: tabulated loss at the first energy differs from the Drude loss by a factor {:.2}; the splice may double-count or miss conduction weight",
                1.0 + mismatch
            )));
        }
    }
}

fn check_mirror(which: &'static str, cfg: &MirrorConfig, out: &mut Vec<Diagnostic>) {
    let spec = match cfg.build(which) {
        Ok(spec) => spec,
        Err(e) => {
            out.push(Diagnostic::error(e.to_string()));
            return;
        }
    };
    match &spec {
        MirrorSpec::Ideal => {}
        MirrorSpec::IsotropicMetal { xx } => {
            check_diagonal_model(format!("{which} (xx)"), xx, out)
        }
        MirrorSpec::Ferromagnet { xx, xy, .. } => {
            check_diagonal_model(format!("{which} (xx)"), xx, out);
            if xy.is_diagonal() {
                out.push(Diagnostic::warning(format!(
                    "{which}: gyrotropic entry uses a diagonal-type model"
                )));
            }
        }
        MirrorSpec::UniaxialPlate {
            ordinary,
            extraordinary,
            ..
        } => {
            check_diagonal_model(format!("{which} (ordinary)"), ordinary, out);
            check_diagonal_model(format!("{which} (extraordinary)"), extraordinary, out);
        }
    }
}

/// Validate a configuration without running anything. Errors mean a
/// command would refuse to run or produce unphysical output; warnings are
/// advisory.
pub fn validate_config(config: &RunConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_mirror("mirror_a", &config.mirror_a, &mut out);
    check_mirror("mirror_b", &config.mirror_b, &mut out);

    match config.distance_list() {
        Ok(ds) => {
            if ds.iter().any(|&d| d < 0.1) {
                out.push(Diagnostic::warning(
                    "distances below 0.1 nm: continuum mirror description is questionable there"
                        .into(),
                ));
            }
        }
        Err(e) => out.push(Diagnostic::error(e.to_string())),
    }

    if let Err(e) = config.effective_quadrature().validate() {
        out.push(Diagnostic::error(e.to_string()));
    }
    if config.angles.count < 8 {
        out.push(Diagnostic::error(format!(
            "angles.count = {} but angular scans need at least 8",
            config.angles.count
        )));
    }
    for (name, r) in [
        ("disk_radius_um", config.estimators.disk_radius_um),
        ("curvature_radius_um", config.estimators.curvature_radius_um),
        ("plate_radius_um", config.estimators.plate_radius_um),
    ] {
        if let Some(v) = r {
            if !(v > 0.0 && v.is_finite()) {
                out.push(Diagnostic::error(format!("{name} must be positive, got {v}")));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> RunConfig {
        RunConfig {
            mirror_a: MirrorConfig::preset("au-drude"),
            mirror_b: MirrorConfig::preset("fe-drude"),
            distance_nm: Some(100.0),
            distances: None,
            angles: AnglesConfig::default(),
            quadrature: QuadratureOverrides::default(),
            estimators: EstimatorConfig::default(),
            output: OutputConfig::default(),
        }
    }

    #[test]
    fn roundtrip_and_digest_are_stable() {
        let c = minimal();
        let json = serde_json::to_string_pretty(&c).unwrap();
        let back = RunConfig::from_json(&json).unwrap();
        assert_eq!(config_digest(&c), config_digest(&back));
        assert_eq!(config_digest(&c).len(), 64);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{
            "mirror_a": {"kind": "ideal"},
            "mirror_b": {"kind": "ideal"},
            "distance_nm": 10.0,
            "frobnicate": 1
        }"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn presets_build_and_validate_clean() {
        let mut c = minimal();
        c.mirror_b = MirrorConfig::preset("fe");
        let (a, b) = c.build_mirrors().unwrap();
        assert_eq!(a.kind_name(), "isotropic metal");
        assert!(b.is_magnetic());
        let diags = validate_config(&c);
        assert!(
            diags.iter().all(|d| d.severity != Severity::Error),
            "{diags:?}"
        );
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let mut c = minimal();
        c.mirror_a.kind = MirrorKind::Ferromagnet;
        assert!(matches!(
            c.build_mirrors(),
            Err(ConfigError::Mirror { which: "mirror_a", .. })
        ));
    }

    #[test]
    fn grid_and_distance_handling() {
        let mut c = minimal();
        assert_eq!(c.distance_list().unwrap(), vec![100.0]);
        c.distances = Some(GridConfig {
            start_nm: Some(1.0),
            stop_nm: Some(10.0),
            points_per_decade: 12,
            values_nm: None,
        });
        assert_eq!(c.distance_list().unwrap().len(), 13);
        c.distance_nm = None;
        assert!(c.single_distance().is_err());
    }

    #[test]
    fn overrides_apply() {
        let mut c = minimal();
        c.quadrature.rel_tol = Some(1e-5);
        c.quadrature.phi_samples = Some(16);
        let q = c.effective_quadrature();
        assert_eq!(q.rel_tol, 1e-5);
        assert_eq!(q.phi_samples, 16);
        c.mirror_b.xy_scale = Some(0.5);
        let (_, b) = c.build_mirrors().unwrap();
        assert!(b.is_magnetic());
    }

    #[test]
    fn validation_flags_problems() {
        let mut c = minimal();
        c.angles.count = 4;
        c.distance_nm = Some(0.01);
        c.estimators.disk_radius_um = Some(-2.0);
        let diags = validate_config(&c);
        assert!(diags.iter().any(|d| d.severity == Severity::Error));
        assert!(diags.iter().any(|d| d.severity == Severity::Warning));
    }
}
