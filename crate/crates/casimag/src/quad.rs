//! Adaptive Gauss-Kronrod quadrature and the periodic trapezoid rule.
//!
//! The energy integrands are smooth but carry boundary layers whose
//! position moves with distance and material, so fixed grids are not safe
//! across the full sweep range; worst-interval refinement with the 21-point
//! Kronrod rule handles all of them. Both rule endpoints are never
//! evaluated, which lets integrands be singular (or merely undefined) at
//! interval edges such as t = 0.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Tolerances and discretization choices for the spectral integrals.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Relative tolerance on each 1-D integral (the inner integral is run
    /// one order tighter).
    pub rel_tol: f64,
    /// Absolute floor below which refinement stops regardless of `rel_tol`,
    /// in the integrand's own units.
    pub abs_tol: f64,
    /// Subdivision budget per 1-D integral.
    pub max_subdivisions: usize,
    /// Sample count of the periodic trapezoid rule over the incidence
    /// azimuth; must be even and at least 8.
    pub phi_samples: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-7,
            abs_tol: 0.0,
            max_subdivisions: 400,
            phi_samples: 32,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(QuadError::BadConfig("rel_tol must be positive"));
        }
        if self.abs_tol < 0.0 || !self.abs_tol.is_finite() {
            return Err(QuadError::BadConfig("abs_tol must be non-negative"));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadError::BadConfig("max_subdivisions must be positive"));
        }
        if self.phi_samples < 8 || self.phi_samples % 2 != 0 {
            return Err(QuadError::BadConfig("phi_samples must be even and >= 8"));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("invalid quadrature configuration: {0}")]
    BadConfig(&'static str),
    /// The subdivision budget ran out before the tolerance was met. The
    /// best available estimate and its error bound are carried along.
    #[error("quadrature did not converge: estimate {estimate:e}, error {est_error:e}")]
    NonConvergence { estimate: f64, est_error: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
}

// 21-point Kronrod extension of 10-point Gauss-Legendre (QUADPACK values).
// Non-negative abscissae; odd indices are the embedded Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// One Gauss-Kronrod pass over [a, b]: (Kronrod estimate, error estimate).
fn gk21(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);

    let fc = f(mid);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = half * XGK[i];
        let fsum = f(mid - dx) + f(mid + dx);
        kronrod += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug)]
struct Segment {
    err: f64,
    a: f64,
    b: f64,
    val: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integration over the union of `panels`, refined globally until
/// the summed error estimate meets `max(rel_tol·|I|, abs_tol)`.
///
/// Seeding with several panels lets callers mark known scale changes (the
/// u-integrals decay exponentially after a power-law rise) without giving
/// up on global refinement order.
pub fn integrate_panels(
    mut f: impl FnMut(f64) -> f64,
    panels: &[(f64, f64)],
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadResult, QuadError> {
    assert!(!panels.is_empty());
    let mut heap = BinaryHeap::with_capacity(2 * max_subdivisions);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for &(a, b) in panels {
        debug_assert!(b > a);
        let (val, err) = gk21(&mut f, a, b);
        total += val;
        total_err += err;
        heap.push(Segment { err, a, b, val });
    }

    for _ in 0..max_subdivisions {
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(QuadResult {
                value: total,
                est_error: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; keep its estimate and
            // stop counting its error against the budget.
            total_err -= worst.err;
            continue;
        }
        let (lv, le) = gk21(&mut f, worst.a, mid);
        let (rv, re) = gk21(&mut f, mid, worst.b);
        total += lv + rv - worst.val;
        total_err += le + re - worst.err;
        heap.push(Segment {
            err: le,
            a: worst.a,
            b: mid,
            val: lv,
        });
        heap.push(Segment {
            err: re,
            a: mid,
            b: worst.b,
            val: rv,
        });
    }

    if total_err <= abs_tol.max(rel_tol * total.abs()) {
        Ok(QuadResult {
            value: total,
            est_error: total_err,
        })
    } else {
        Err(QuadError::NonConvergence {
            estimate: total,
            est_error: total_err,
        })
    }
}

pub fn integrate(
    f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadResult, QuadError> {
    integrate_panels(f, &[(a, b)], rel_tol, abs_tol, max_subdivisions)
}

/// Mean of `f` over one period [0, 2π) by the n-point trapezoid rule,
/// which is spectrally accurate for smooth periodic integrands.
pub fn phi_average(mut f: impl FnMut(f64) -> f64, n: usize) -> f64 {
    debug_assert!(n >= 2);
    let step = std::f64::consts::TAU / n as f64;
    (0..n).map(|j| f(j as f64 * step)).sum::<f64>() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        // GK21 integrates degree <= 31 exactly; x^7 over [0,2] = 32.
        let r = integrate(|x| x.powi(7), 0.0, 2.0, 1e-12, 0.0, 10).unwrap();
        assert!((r.value - 32.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_decay_over_panels() {
        let r = integrate_panels(
            |x| (-x).exp(),
            &[(0.0, 1.0), (1.0, 60.0)],
            1e-12,
            0.0,
            200,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn needs_refinement_near_peak() {
        // Narrow Lorentzian; integral over the real line is pi.
        let g = 1e-3;
        let r = integrate(|x| g / (x * x + g * g), -1.0, 1.0, 1e-10, 0.0, 400).unwrap();
        let exact = 2.0 * (1.0 / g).atan();
        assert!((r.value - exact).abs() / exact < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let g = 1e-9;
        let err = integrate(|x| g / (x * x + g * g), -1.0, 1.0, 1e-14, 0.0, 2);
        match err {
            Err(QuadError::NonConvergence { estimate, .. }) => assert!(estimate.is_finite()),
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn trapezoid_handles_low_harmonics_exactly() {
        let avg = phi_average(|p| 1.5 + p.sin().powi(2) + 0.25 * (2.0 * p).cos(), 8);
        assert!((avg - 2.0).abs() < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = QuadratureConfig {
            phi_samples: 7,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
