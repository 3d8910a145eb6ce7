//! Dielectric response on the imaginary frequency axis.
//!
//! Everything downstream consumes `eps(i w)` with `w` in eV. Four model
//! families cover the mirrors handled here:
//!
//! * [`DrudeParams`]: `eps(iw) = 1 + wp^2 / (w (w + gamma))`, the causal
//!   transform of the Drude loss.
//! * [`TwoOscillatorParams`]: `1 + C_ir/(1+(w/w_ir)^2) + C_uv/(1+(w/w_uv)^2)`,
//!   the usual infrared + ultraviolet fit for transparent crystals.
//! * [`OpticalDataTable`]: tabulated loss spectra turned into `eps(iw)` by
//!   the Kramers-Kronig transform, integrated exactly on each linear
//!   segment of the table.
//! * composite metal: tabulated loss spliced with an analytic Drude
//!   continuation below the first tabulated energy, so the missing
//!   far-infrared weight of measured metal data is not silently dropped.
//!
//! The transform uses only the loss column. The stored real parts are kept
//! for provenance and inspection; causality fixes the imaginary-axis values
//! from the loss alone.
//!
//! Off-diagonal (gyrotropic) entries use the same kernel without the +1:
//! `eps_xy(iw) = (2/pi) \int x eps_xy''(x) / (x^2 + w^2) dx`. Their loss may
//! change sign, which is why the tabulated kind matters to validation.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_2_PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DielectricError {
    #[error("invalid model parameter: {0}")]
    BadParameter(&'static str),
    #[error("frequency must be positive and finite, got {0:e}")]
    BadFrequency(f64),
    #[error("optical table line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("optical table: {0}")]
    TableShape(&'static str),
    #[error("expected a {expected:?} table, got {found:?}")]
    WrongTableKind { expected: TableKind, found: TableKind },
}

/// Drude model parameters, both in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    pub plasma_frequency: f64,
    pub relaxation_rate: f64,
}

impl DrudeParams {
    pub fn validate(&self) -> Result<(), DielectricError> {
        if !(self.plasma_frequency > 0.0 && self.plasma_frequency.is_finite()) {
            return Err(DielectricError::BadParameter("plasma_frequency must be > 0"));
        }
        if !(self.relaxation_rate > 0.0 && self.relaxation_rate.is_finite()) {
            return Err(DielectricError::BadParameter("relaxation_rate must be > 0"));
        }
        Ok(())
    }

    #[inline]
    fn eps_i_raw(&self, w: f64) -> f64 {
        1.0 + self.plasma_frequency * self.plasma_frequency / (w * (w + self.relaxation_rate))
    }
}

/// Two-oscillator fit: IR and UV Lorentz poles evaluated on the imaginary
/// axis. Strengths are dimensionless, resonances in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoOscillatorParams {
    pub c_ir: f64,
    pub c_uv: f64,
    pub w_ir: f64,
    pub w_uv: f64,
}

impl TwoOscillatorParams {
    pub fn validate(&self) -> Result<(), DielectricError> {
        for (v, name) in [
            (self.c_ir, "c_ir must be > 0"),
            (self.c_uv, "c_uv must be > 0"),
            (self.w_ir, "w_ir must be > 0"),
            (self.w_uv, "w_uv must be > 0"),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DielectricError::BadParameter(name));
            }
        }
        if self.w_ir >= self.w_uv {
            return Err(DielectricError::BadParameter("w_ir must be below w_uv"));
        }
        Ok(())
    }

    #[inline]
    fn eps_i_raw(&self, w: f64) -> f64 {
        let rir = w / self.w_ir;
        let ruv = w / self.w_uv;
        1.0 + self.c_ir / (1.0 + rir * rir) + self.c_uv / (1.0 + ruv * ruv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    /// Diagonal permittivity: loss must be non-negative.
    Diagonal,
    /// Gyrotropic off-diagonal entry: loss may change sign, no +1 offset.
    OffDiagonal,
}

/// One row of a tabulated optical spectrum, energies in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub energy_ev: f64,
    pub eps_real: f64,
    pub eps_imag: f64,
}

/// A loss spectrum sampled at strictly increasing energies, interpreted as
/// piecewise linear between samples and zero outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    pub kind: TableKind,
    rows: Vec<TableRow>,
}

const TABLE_HEADER: &str = "energy_ev,eps_real,eps_imag";

impl OpticalDataTable {
    pub fn new(kind: TableKind, rows: Vec<TableRow>) -> Result<Self, DielectricError> {
        if rows.len() < 2 {
            return Err(DielectricError::TableShape("need at least two rows"));
        }
        for (i, r) in rows.iter().enumerate() {
            if !(r.energy_ev.is_finite() && r.eps_real.is_finite() && r.eps_imag.is_finite()) {
                return Err(DielectricError::Table {
                    line: i + 1,
                    message: "non-finite entry".into(),
                });
            }
            if r.energy_ev <= 0.0 {
                return Err(DielectricError::Table {
                    line: i + 1,
                    message: format!("energy must be positive, got {:e}", r.energy_ev),
                });
            }
            if i > 0 && r.energy_ev <= rows[i - 1].energy_ev {
                return Err(DielectricError::Table {
                    line: i + 1,
                    message: format!(
                        "energies must be strictly increasing ({:e} after {:e})",
                        r.energy_ev,
                        rows[i - 1].energy_ev
                    ),
                });
            }
            if kind == TableKind::Diagonal && r.eps_imag < 0.0 {
                return Err(DielectricError::Table {
                    line: i + 1,
                    message: format!("diagonal loss must be non-negative, got {:e}", r.eps_imag),
                });
            }
        }
        Ok(Self { kind, rows })
    }

    /// Parse the `energy_ev,eps_real,eps_imag` CSV dialect. `#` lines and
    /// blank lines are comments; the header row is mandatory. Reported line
    /// numbers refer to the input text, 1-based.
    pub fn parse_csv(text: &str, kind: TableKind) -> Result<Self, DielectricError> {
        let mut rows = Vec::new();
        let mut saw_header = false;
        let mut row_lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !saw_header {
                if line != TABLE_HEADER {
                    return Err(DielectricError::Table {
                        line: idx + 1,
                        message: format!("expected header `{TABLE_HEADER}`, got `{line}`"),
                    });
                }
                saw_header = true;
                continue;
            }
            let mut fields = line.split(',');
            let mut next = |name: &str| -> Result<f64, DielectricError> {
                fields
                    .next()
                    .ok_or_else(|| DielectricError::Table {
                        line: idx + 1,
                        message: format!("missing {name} column"),
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| DielectricError::Table {
                        line: idx + 1,
                        message: format!("bad {name}: {e}"),
                    })
            };
            let energy_ev = next("energy_ev")?;
            let eps_real = next("eps_real")?;
            let eps_imag = next("eps_imag")?;
            if fields.next().is_some() {
                return Err(DielectricError::Table {
                    line: idx + 1,
                    message: "trailing fields after eps_imag".into(),
                });
            }
            rows.push(TableRow {
                energy_ev,
                eps_real,
                eps_imag,
            });
            row_lines.push(idx + 1);
        }
        if !saw_header {
            return Err(DielectricError::TableShape("missing header row"));
        }
        // Re-run structural validation but translate row indices back to
        // source line numbers for usable diagnostics.
        Self::new(kind, rows).map_err(|e| match e {
            DielectricError::Table { line, message } => DielectricError::Table {
                line: row_lines.get(line - 1).copied().unwrap_or(line),
                message,
            },
            other => other,
        })
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn min_energy(&self) -> f64 {
        self.rows[0].energy_ev
    }

    pub fn max_energy(&self) -> f64 {
        self.rows[self.rows.len() - 1].energy_ev
    }

    /// Same spectrum with the loss column multiplied by `scale`. Used to
    /// probe linearity of observables in the gyrotropic response.
    pub fn scaled(&self, scale: f64) -> Result<Self, DielectricError> {
        if !scale.is_finite() {
            return Err(DielectricError::BadParameter("scale must be finite"));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| TableRow {
                eps_imag: r.eps_imag * scale,
                ..*r
            })
            .collect();
        Self::new(self.kind, rows)
    }

    /// `(2/pi) \int x eps''(x) / (x^2 + w^2) dx` over the tabulated range,
    /// each linear segment integrated in closed form:
    /// `\int x (a + b x)/(x^2+w^2) dx = (a/2) ln(x^2+w^2) + b (x - w atan(x/w))`.
    fn kk_raw(&self, w: f64) -> f64 {
        let w2 = w * w;
        let mut acc = 0.0;
        for pair in self.rows.windows(2) {
            let (x1, y1) = (pair[0].energy_ev, pair[0].eps_imag);
            let (x2, y2) = (pair[1].energy_ev, pair[1].eps_imag);
            let b = (y2 - y1) / (x2 - x1);
            let a = y1 - b * x1;
            acc += 0.5 * a * ((x2 * x2 + w2) / (x1 * x1 + w2)).ln()
                + b * ((x2 - x1) - w * ((x2 / w).atan() - (x1 / w).atan()));
        }
        FRAC_2_PI * acc
    }
}

fn check_frequency(w: f64) -> Result<(), DielectricError> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(DielectricError::BadFrequency(w))
    }
}

/// Drude permittivity on the imaginary axis.
pub fn drude_epsilon(params: &DrudeParams, w: f64) -> Result<f64, DielectricError> {
    params.validate()?;
    check_frequency(w)?;
    Ok(params.eps_i_raw(w))
}

/// Two-oscillator permittivity on the imaginary axis.
pub fn two_oscillator_epsilon(params: &TwoOscillatorParams, w: f64) -> Result<f64, DielectricError> {
    params.validate()?;
    check_frequency(w)?;
    Ok(params.eps_i_raw(w))
}

/// Kramers-Kronig reconstruction of a diagonal permittivity from its
/// tabulated loss: `1 + (2/pi) \int x eps''/(x^2+w^2) dx`. Loss outside the
/// tabulated range is taken as zero; see the composite metal model for the
/// spliced alternative.
pub fn kk_diagonal(table: &OpticalDataTable, w: f64) -> Result<f64, DielectricError> {
    if table.kind != TableKind::Diagonal {
        return Err(DielectricError::WrongTableKind {
            expected: TableKind::Diagonal,
            found: table.kind,
        });
    }
    check_frequency(w)?;
    Ok(1.0 + table.kk_raw(w))
}

/// Same kernel for the gyrotropic off-diagonal entry; no +1 offset and the
/// result may take either sign.
pub fn kk_offdiagonal(table: &OpticalDataTable, w: f64) -> Result<f64, DielectricError> {
    if table.kind != TableKind::OffDiagonal {
        return Err(DielectricError::WrongTableKind {
            expected: TableKind::OffDiagonal,
            found: table.kind,
        });
    }
    check_frequency(w)?;
    Ok(table.kk_raw(w))
}

// Cache grid for tabulated models: 48 points per decade over
// [1e-8, 1e8] eV. The spectral integrals sample eps(iw) millions of times,
// so the exact per-segment transform runs once per grid node and a
// monotone cubic does the rest.
const CACHE_PER_DECADE: usize = 48;
const CACHE_LOG_MIN: f64 = -8.0;
const CACHE_LOG_MAX: f64 = 8.0;
const CACHE_LEN: usize = 16 * CACHE_PER_DECADE + 1;

/// Monotone (Fritsch-Carlson) cubic through cached transform values,
/// abscissa ln w. Diagonal tables interpolate ln(eps-1), which is strictly
/// decreasing and positive; off-diagonal tables interpolate raw values.
#[derive(Debug, Clone, PartialEq)]
struct Pchip {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    fn build(x0: f64, dx: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        debug_assert!(n >= 3);
        let mut delta = vec![0.0; n - 1];
        for k in 0..n - 1 {
            delta[k] = (y[k + 1] - y[k]) / dx;
        }
        let mut d = vec![0.0; n];
        for k in 1..n - 1 {
            if delta[k - 1] * delta[k] > 0.0 {
                // Uniform spacing: the Fritsch-Carlson weights reduce to the
                // plain harmonic mean of the adjacent secants.
                d[k] = 2.0 * delta[k - 1] * delta[k] / (delta[k - 1] + delta[k]);
            }
        }
        d[0] = edge_slope(delta[0], delta[1]);
        d[n - 1] = edge_slope(delta[n - 2], delta[n - 3]);
        Self { x0, dx, y, d }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let pos = (x - self.x0) / self.dx;
        let k = (pos.floor() as isize).clamp(0, n as isize - 2) as usize;
        let t = pos - k as f64;
        debug_assert!((-1e-9..=1.0 + 1e-9).contains(&t));
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (d0, d1) = (self.d[k] * self.dx, self.d[k + 1] * self.dx);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + d0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + d1 * (t3 - t2)
    }
}

// One-sided three-point endpoint slope with the usual shape-preserving
// clamps (uniform spacing).
fn edge_slope(d_near: f64, d_far: f64) -> f64 {
    let s = 1.5 * d_near - 0.5 * d_far;
    if s * d_near <= 0.0 {
        0.0
    } else if d_near * d_far < 0.0 && s.abs() > 3.0 * d_near.abs() {
        3.0 * d_near
    } else {
        s
    }
}

/// A tabulated spectrum with its transform precomputed on a wide log grid.
/// Construction pays the exact per-segment cost once; evaluation is a
/// table lookup plus a cubic.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedModel {
    table: OpticalDataTable,
    /// None when the table loss is identically zero.
    interp: Option<Pchip>,
    /// Raw transform at the grid edges, for clamped extrapolation.
    first_raw: f64,
    last_raw: f64,
    w_last: f64,
}

impl TabulatedModel {
    pub fn new(table: OpticalDataTable) -> Self {
        let ln10 = std::f64::consts::LN_10;
        let dx = ln10 / CACHE_PER_DECADE as f64;
        let x0 = CACHE_LOG_MIN * ln10;
        let raw: Vec<f64> = (0..CACHE_LEN)
            .map(|i| table.kk_raw((x0 + i as f64 * dx).exp()))
            .collect();
        let first_raw = raw[0];
        let last_raw = raw[CACHE_LEN - 1];
        let w_last = (CACHE_LOG_MAX * ln10).exp();
        let all_zero = raw.iter().all(|&v| v == 0.0);
        let interp = if all_zero {
            None
        } else {
            let y = match table.kind {
                // Strictly positive for any non-zero non-negative loss.
                TableKind::Diagonal => raw.iter().map(|&v| v.ln()).collect(),
                TableKind::OffDiagonal => raw,
            };
            Some(Pchip::build(x0, dx, y))
        };
        Self {
            table,
            interp,
            first_raw,
            last_raw,
            w_last,
        }
    }

    pub fn table(&self) -> &OpticalDataTable {
        &self.table
    }

    pub fn kind(&self) -> TableKind {
        self.table.kind
    }

    /// Cached transform without the diagonal's +1 offset.
    #[inline]
    pub(crate) fn raw(&self, w: f64) -> f64 {
        let Some(interp) = &self.interp else {
            return 0.0;
        };
        if w <= interp.x0.exp() {
            // Static limit: the transform flattens once w is far below
            // every tabulated energy.
            return self.first_raw;
        }
        if w >= self.w_last {
            // All loss weight sits far below w: 1/w^2 tail.
            let r = self.w_last / w;
            return self.last_raw * r * r;
        }
        let v = interp.eval(w.ln());
        match self.table.kind {
            TableKind::Diagonal => v.exp(),
            TableKind::OffDiagonal => v,
        }
    }
}

/// Tabulated metal loss extended by a Drude tail below the first tabulated
/// energy, so the static limit carries the full conduction weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeModel {
    tabulated: TabulatedModel,
    drude: DrudeParams,
    x_min: f64,
}

impl CompositeModel {
    /// Transform of the Drude loss restricted to [0, x_min]:
    /// `(2/pi) wp^2 g \int_0^a dx / ((x^2+g^2)(x^2+w^2))` in closed form.
    #[inline]
    fn below_table(&self, w: f64) -> f64 {
        let a = self.x_min;
        let g = self.drude.relaxation_rate;
        let wp2 = self.drude.plasma_frequency * self.drude.plasma_frequency;
        let diff = w * w - g * g;
        // The two branches cross over smoothly; the explicit limit avoids
        // catastrophic cancellation near w = g.
        if diff.abs() > 1e-6 * g * g {
            FRAC_2_PI * wp2 * g * ((a / g).atan() / g - (a / w).atan() / w) / diff
        } else {
            FRAC_2_PI * wp2 * (a / (2.0 * g * (a * a + g * g)) + (a / g).atan() / (2.0 * g * g))
        }
    }

    /// Relative mismatch between the tabulated loss at its first energy and
    /// the Drude loss there. A large value means the splice is inconsistent
    /// (the table's own low-energy loss is not Drude-like).
    pub fn splice_mismatch(&self) -> f64 {
        let first = self.tabulated.table.rows()[0];
        let x = first.energy_ev;
        let g = self.drude.relaxation_rate;
        let wp2 = self.drude.plasma_frequency * self.drude.plasma_frequency;
        let drude_loss = wp2 * g / (x * (x * x + g * g));
        (first.eps_imag - drude_loss).abs() / drude_loss.abs().max(f64::MIN_POSITIVE)
    }

    pub fn drude(&self) -> &DrudeParams {
        &self.drude
    }

    pub fn tabulated(&self) -> &TabulatedModel {
        &self.tabulated
    }
}

/// Build the spliced metal model. The table must be diagonal; the Drude
/// parameters describe the conduction response the table is assumed to
/// contain above its first energy.
pub fn composite_metal_model(
    table: OpticalDataTable,
    drude: DrudeParams,
) -> Result<DielectricModel, DielectricError> {
    if table.kind != TableKind::Diagonal {
        return Err(DielectricError::WrongTableKind {
            expected: TableKind::Diagonal,
            found: table.kind,
        });
    }
    drude.validate()?;
    let x_min = table.min_energy();
    Ok(DielectricModel::Composite(CompositeModel {
        tabulated: TabulatedModel::new(table),
        drude,
        x_min,
    }))
}

/// Any supported permittivity model, evaluated on the imaginary axis.
#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    Drude(DrudeParams),
    TwoOscillator(TwoOscillatorParams),
    Table(TabulatedModel),
    Composite(CompositeModel),
}

impl DielectricModel {
    pub fn drude(params: DrudeParams) -> Result<Self, DielectricError> {
        params.validate()?;
        Ok(Self::Drude(params))
    }

    pub fn two_oscillator(params: TwoOscillatorParams) -> Result<Self, DielectricError> {
        params.validate()?;
        Ok(Self::TwoOscillator(params))
    }

    pub fn table(table: OpticalDataTable) -> Self {
        Self::Table(TabulatedModel::new(table))
    }

    /// True when `eps_i` returns a diagonal permittivity (offset by +1)
    /// rather than a signed off-diagonal entry.
    pub fn is_diagonal(&self) -> bool {
        match self {
            Self::Table(t) => t.kind() == TableKind::Diagonal,
            _ => true,
        }
    }

    /// Hot-path evaluation at imaginary frequency `i w`, `w` in eV.
    /// Callers guarantee `w > 0`.
    #[inline]
    pub fn eps_i(&self, w: f64) -> f64 {
        debug_assert!(w > 0.0 && w.is_finite());
        match self {
            Self::Drude(p) => p.eps_i_raw(w),
            Self::TwoOscillator(p) => p.eps_i_raw(w),
            Self::Table(t) => match t.kind() {
                TableKind::Diagonal => 1.0 + t.raw(w),
                TableKind::OffDiagonal => t.raw(w),
            },
            Self::Composite(c) => 1.0 + c.below_table(w) + c.tabulated.raw(w),
        }
    }
}
