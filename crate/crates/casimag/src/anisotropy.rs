//! Magnetic anisotropy observables built on top of the energy functional:
//! angular scans, their sin^2/cos^2 classification, amplitude-versus-
//! distance curves with crossover (kink) detection, scaling exponents and
//! simple experimental estimators.

use crate::casimir::{
    casimir_energy_decomposed, magnetic_energy_shift, CasimirError,
};
use crate::quad::QuadratureConfig;
use crate::reflection::{MagnetizationOrientation, MirrorSpec};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnisotropyError {
    #[error(transparent)]
    Energy(#[from] CasimirError),
    #[error("invalid input: {0}")]
    BadInput(&'static str),
    #[error("scaling window {lo}..{hi} nm holds {found} usable points, need at least {need}")]
    WindowTooSmall {
        lo: f64,
        hi: f64,
        found: usize,
        need: usize,
    },
    #[error("values change sign inside the scaling window; no single power law")]
    MixedSignWindow,
}

/// Shape of an angular energy profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularClass {
    /// Energy grows like sin^2 of the scan angle (minimum at zero).
    Sin2,
    /// Energy grows like cos^2 of the scan angle (minimum at pi/2).
    Cos2,
    /// Residual above 5%: neither harmonic describes the profile.
    Mixed,
}

/// One angular scan at fixed distance with its harmonic fit.
///
/// `delta_e` holds the magnetization-dependent energy relative to the
/// angular minimum (non-negative up to quadrature noise). `fit_amplitude`
/// is the signed coefficient `c1` of `c0 + c1 sin^2(angle)`: positive for
/// a sin^2 profile, negative for cos^2.
#[derive(Debug, Clone, Serialize)]
pub struct AngularScan {
    pub distance_nm: f64,
    pub angles: Vec<f64>,
    pub delta_e: Vec<f64>,
    pub fit_offset: f64,
    pub fit_amplitude: f64,
    /// RMS of the fit residual divided by |fit_amplitude|.
    pub fit_residual: f64,
    pub class: AngularClass,
}

fn classify(c1: f64, rel_res: f64) -> AngularClass {
    if c1 == 0.0 || !rel_res.is_finite() || rel_res > 0.05 {
        AngularClass::Mixed
    } else if c1 > 0.0 {
        AngularClass::Sin2
    } else {
        AngularClass::Cos2
    }
}

// Least squares of y against {1, sin^2(angle)}; returns (c0, c1, rel_rms).
fn harmonic_fit(angles: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = angles.len() as f64;
    let s: Vec<f64> = angles.iter().map(|a| a.sin().powi(2)).collect();
    let sum_s: f64 = s.iter().sum();
    let sum_ss: f64 = s.iter().map(|v| v * v).sum();
    let sum_y: f64 = y.iter().sum();
    let sum_sy: f64 = s.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sum_ss - sum_s * sum_s;
    debug_assert!(det > 0.0, "angle grid must not be degenerate");
    let c1 = (n * sum_sy - sum_s * sum_y) / det;
    let c0 = (sum_y - c1 * sum_s) / n;
    let rms = (s
        .iter()
        .zip(y)
        .map(|(si, yi)| (yi - c0 - c1 * si).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let rel = if c1 == 0.0 && rms == 0.0 {
        0.0
    } else {
        rms / c1.abs()
    };
    (c0, c1, rel)
}

fn scan_from_values(distance_nm: f64, angles: Vec<f64>, raw: Vec<f64>) -> AngularScan {
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let delta_e: Vec<f64> = raw.iter().map(|v| v - min).collect();
    let (c0, c1, rel) = harmonic_fit(&angles, &delta_e);
    AngularScan {
        distance_nm,
        angles,
        delta_e,
        fit_offset: c0,
        fit_amplitude: c1,
        fit_residual: rel,
        class: classify(c1, rel),
    }
}

fn check_scan_args(n_angles: usize, q: &QuadratureConfig) -> Result<(), AnisotropyError> {
    if n_angles < 8 {
        return Err(AnisotropyError::BadInput("need at least 8 scan angles"));
    }
    q.validate()
        .map_err(|e| AnisotropyError::Energy(CasimirError::Config(e)))?;
    Ok(())
}

/// Rotate the in-plane magnetization of `fm` (polar angle forced to pi/2)
/// through `n_angles` directions spanning [0, pi) relative to the plate's
/// optic axis, and fit the energy shift. For plates without an optic axis
/// the profile is flat by symmetry.
pub fn scan_inplane(
    plate: &MirrorSpec,
    fm: &MirrorSpec,
    distance_nm: f64,
    n_angles: usize,
    q: &QuadratureConfig,
) -> Result<AngularScan, AnisotropyError> {
    check_scan_args(n_angles, q)?;
    if !fm.is_magnetic() {
        return Err(AnisotropyError::Energy(CasimirError::NotFerromagnet(
            fm.kind_name(),
        )));
    }
    let zeta = match plate {
        MirrorSpec::UniaxialPlate { geometry, .. } => geometry.zeta,
        _ => 0.0,
    };
    let angles: Vec<f64> = (0..n_angles).map(|j| j as f64 * PI / n_angles as f64).collect();
    let raw = angles
        .par_iter()
        .map(|&dphi| {
            let oriented = fm.with_orientation(MagnetizationOrientation {
                theta: PI / 2.0,
                phi: zeta + dphi,
            });
            magnetic_energy_shift(plate, &oriented, distance_nm, q).map(|r| r.value)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(scan_from_values(distance_nm, angles, raw))
}

/// Tilt the magnetization from the surface normal (angle 0) into the
/// plane (pi/2) against an isotropic or ideal mirror. Computed from the
/// energy decomposition, so the profile is exactly harmonic and the scan
/// mainly reports its sign and size.
pub fn scan_outofplane(
    metal: &MirrorSpec,
    fm: &MirrorSpec,
    distance_nm: f64,
    n_angles: usize,
    q: &QuadratureConfig,
) -> Result<AngularScan, AnisotropyError> {
    check_scan_args(n_angles, q)?;
    let dec = casimir_energy_decomposed(metal, fm, distance_nm, q)?;
    let angles: Vec<f64> = (0..n_angles).map(|j| j as f64 * PI / n_angles as f64).collect();
    let raw: Vec<f64> = angles.iter().map(|&t| dec.magnetic(t)).collect();
    Ok(scan_from_values(distance_nm, angles, raw))
}

/// In-plane anisotropy amplitude as a function of distance, with sign
/// crossovers located.
#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeCurve {
    pub distances_nm: Vec<f64>,
    /// Signed harmonic amplitude at each distance (positive: sin^2).
    pub amplitude: Vec<f64>,
    pub classes: Vec<AngularClass>,
    pub residuals: Vec<f64>,
    /// Bracketing intervals (nm) where the amplitude changes sign, each
    /// tightened by one bisection step.
    pub kinks: Vec<(f64, f64)>,
}

/// Run [`scan_inplane`] over a distance grid and locate amplitude sign
/// changes. Crossovers are only counted between scans whose amplitude
/// stands at least three residual RMS above the fit noise, so quadrature
/// jitter near a zero cannot fake extra kinks.
pub fn amplitude_vs_distance(
    plate: &MirrorSpec,
    fm: &MirrorSpec,
    distances_nm: &[f64],
    n_angles: usize,
    q: &QuadratureConfig,
) -> Result<AmplitudeCurve, AnisotropyError> {
    if distances_nm.is_empty() {
        return Err(AnisotropyError::BadInput("empty distance grid"));
    }
    if distances_nm.windows(2).any(|w| w[1] <= w[0]) || distances_nm[0] <= 0.0 {
        return Err(AnisotropyError::BadInput(
            "distances must be positive and strictly increasing",
        ));
    }
    let scans = distances_nm
        .par_iter()
        .map(|&d| scan_inplane(plate, fm, d, n_angles, q))
        .collect::<Result<Vec<_>, _>>()?;
    let amplitude: Vec<f64> = scans.iter().map(|s| s.fit_amplitude).collect();
    let classes: Vec<AngularClass> = scans.iter().map(|s| s.class).collect();
    let residuals: Vec<f64> = scans.iter().map(|s| s.fit_residual).collect();

    // |amplitude| >= 3 * absolute rms  <=>  relative residual <= 1/3.
    let definite: Vec<usize> = (0..scans.len())
        .filter(|&i| amplitude[i] != 0.0 && residuals[i] <= 1.0 / 3.0)
        .collect();
    let mut kinks = Vec::new();
    for pair in definite.windows(2) {
        let (i, j) = (pair[0], pair[1]);
        if amplitude[i] * amplitude[j] < 0.0 {
            let (mut lo, mut hi) = (distances_nm[i], distances_nm[j]);
            let mid = (lo * hi).sqrt();
            let probe = scan_inplane(plate, fm, mid, n_angles, q)?;
            if probe.fit_amplitude * amplitude[i] > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            kinks.push((lo, hi));
        }
    }
    Ok(AmplitudeCurve {
        distances_nm: distances_nm.to_vec(),
        amplitude,
        classes,
        residuals,
        kinks,
    })
}

/// Log-log slope of |values| against distance over `window` (nm,
/// inclusive). Requires at least five in-window points of one sign.
pub fn scaling_exponent(
    distances_nm: &[f64],
    values: &[f64],
    window: (f64, f64),
) -> Result<f64, AnisotropyError> {
    if distances_nm.len() != values.len() {
        return Err(AnisotropyError::BadInput(
            "distances and values differ in length",
        ));
    }
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(AnisotropyError::BadInput("window must satisfy 0 < lo < hi"));
    }
    let pts: Vec<(f64, f64)> = distances_nm
        .iter()
        .zip(values)
        .filter(|(&d, _)| d >= lo && d <= hi)
        .map(|(&d, &v)| (d, v))
        .collect();
    const NEED: usize = 5;
    if pts.len() < NEED {
        return Err(AnisotropyError::WindowTooSmall {
            lo,
            hi,
            found: pts.len(),
            need: NEED,
        });
    }
    let first_sign = pts[0].1.signum();
    if pts.iter().any(|&(_, v)| v == 0.0 || v.signum() != first_sign) {
        return Err(AnisotropyError::MixedSignWindow);
    }
    let xs: Vec<f64> = pts.iter().map(|&(d, _)| d.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|&(_, v)| v.abs().ln()).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    Ok(sxy / sxx)
}

/// Geometric distance grid from `start` to `stop` nm (both included) with
/// about `points_per_decade` samples per decade.
pub fn log_grid(start: f64, stop: f64, points_per_decade: usize) -> Result<Vec<f64>, AnisotropyError> {
    if !(start > 0.0 && stop > start) {
        return Err(AnisotropyError::BadInput("need 0 < start < stop"));
    }
    if points_per_decade == 0 {
        return Err(AnisotropyError::BadInput("points_per_decade must be >= 1"));
    }
    let decades = (stop / start).log10();
    let steps = (decades * points_per_decade as f64).ceil().max(1.0) as usize;
    let ratio = stop / start;
    let mut grid: Vec<f64> = (0..=steps)
        .map(|i| start * ratio.powf(i as f64 / steps as f64))
        .collect();
    grid[0] = start;
    grid[steps] = stop;
    Ok(grid)
}

/// Net force on a disk of radius `radius_um` from a uniform pressure,
/// in newtons.
pub fn disk_force(pressure_n_m2: f64, radius_um: f64) -> f64 {
    let r = radius_um * 1e-6;
    pressure_n_m2 * PI * r * r
}

/// Proximity-force estimate for a sphere of radius `radius_um` above a
/// plane: `F = 2 pi R E(D)` with the plane-plane energy per area, in
/// newtons.
pub fn proximity_force(energy_j_m2: f64, radius_um: f64) -> f64 {
    2.0 * PI * (radius_um * 1e-6) * energy_j_m2
}

/// Magnetic torque on a plate of radius `radius_um` as the magnetization
/// rotates through an angular scan, newton meters.
#[derive(Debug, Clone, Serialize)]
pub struct TorqueProfile {
    pub radius_um: f64,
    pub angles: Vec<f64>,
    pub torque: Vec<f64>,
    pub max_abs: f64,
}

/// Torque `-dE/dangle * area` along a scan. Clean harmonic fits use the
/// analytic derivative of the fitted profile; mixed profiles fall back to
/// periodic central differences of the scanned values.
pub fn torque_profile(scan: &AngularScan, radius_um: f64) -> TorqueProfile {
    let area = PI * (radius_um * 1e-6).powi(2);
    let torque: Vec<f64> = match scan.class {
        AngularClass::Sin2 | AngularClass::Cos2 => scan
            .angles
            .iter()
            .map(|&a| -scan.fit_amplitude * (2.0 * a).sin() * area)
            .collect(),
        AngularClass::Mixed => {
            let n = scan.angles.len();
            let step = PI / n as f64;
            (0..n)
                .map(|j| {
                    let up = scan.delta_e[(j + 1) % n];
                    let dn = scan.delta_e[(j + n - 1) % n];
                    -(up - dn) / (2.0 * step) * area
                })
                .collect()
        }
    };
    let max_abs = torque.iter().fold(0.0f64, |m, &t| m.max(t.abs()));
    TorqueProfile {
        radius_um,
        angles: scan.angles.clone(),
        torque,
        max_abs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::preset_mirror;

    #[test]
    fn harmonic_fit_recovers_coefficients() {
        let angles: Vec<f64> = (0..16).map(|j| j as f64 * PI / 16.0).collect();
        let y: Vec<f64> = angles.iter().map(|a| 3.0 + 2.0 * a.sin().powi(2)).collect();
        let (c0, c1, rel) = harmonic_fit(&angles, &y);
        assert!((c0 - 3.0).abs() < 1e-12);
        assert!((c1 - 2.0).abs() < 1e-12);
        assert!(rel < 1e-12);
        assert_eq!(classify(c1, rel), AngularClass::Sin2);
        assert_eq!(classify(-c1, rel), AngularClass::Cos2);
        assert_eq!(classify(c1, 0.2), AngularClass::Mixed);
    }

    #[test]
    fn log_grid_hits_both_ends() {
        let g = log_grid(1.0, 1000.0, 12).unwrap();
        assert_eq!(g.len(), 37);
        assert_eq!(g[0], 1.0);
        assert_eq!(*g.last().unwrap(), 1000.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn scaling_exponent_on_power_law() {
        let d = log_grid(1.0, 100.0, 10).unwrap();
        let v: Vec<f64> = d.iter().map(|x| -5.0 * x.powf(-2.5)).collect();
        let s = scaling_exponent(&d, &v, (1.0, 100.0)).unwrap();
        assert!((s + 2.5).abs() < 1e-12);
        assert!(matches!(
            scaling_exponent(&d, &v, (200.0, 300.0)),
            Err(AnisotropyError::WindowTooSmall { .. })
        ));
        let mixed: Vec<f64> = d.iter().map(|x| x - 10.0).collect();
        assert!(matches!(
            scaling_exponent(&d, &mixed, (1.0, 100.0)),
            Err(AnisotropyError::MixedSignWindow)
        ));
    }

    #[test]
    fn estimators_scale_with_geometry() {
        assert!((disk_force(2.0, 1e6 / PI.sqrt()) - 2.0).abs() < 1e-12);
        let f = proximity_force(1e-9, 100.0);
        assert!((f - 2.0 * PI * 1e-4 * 1e-9).abs() < 1e-20);
    }

    #[test]
    fn torque_of_synthetic_harmonic_scan() {
        let angles: Vec<f64> = (0..16).map(|j| j as f64 * PI / 16.0).collect();
        let raw: Vec<f64> = angles.iter().map(|a| 4e-15 * a.sin().powi(2)).collect();
        let scan = scan_from_values(10.0, angles, raw);
        assert_eq!(scan.class, AngularClass::Sin2);
        let tq = torque_profile(&scan, 100.0);
        let area = PI * 1e-8;
        assert!((tq.max_abs - 4e-15 * area).abs() / (4e-15 * area) < 0.02);
    }

    #[test]
    fn outofplane_scan_is_exactly_harmonic() {
        let q = QuadratureConfig {
            rel_tol: 1e-6,
            ..Default::default()
        };
        let metal = preset_mirror("au-drude").unwrap();
        let fm = preset_mirror("fe-drude").unwrap();
        let scan = scan_outofplane(&metal, &fm, 100.0, 8, &q).unwrap();
        assert!(scan.fit_residual < 1e-10);
        assert_ne!(scan.class, AngularClass::Mixed);
    }
}
