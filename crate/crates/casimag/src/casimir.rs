//! The Casimir energy functional and its magneto-optical decomposition.
//!
//! Everything here evaluates the zero-temperature matrix-log functional
//! over the evanescent spectral domain, written in scaled variables
//! `u = 2 k_perp D` and `t = w / (hbar c k_perp)`:
//!
//! ```text
//! E(D) = hbar c / (32 pi^2 D^3) \int_0^60 u^2 du \int_0^1 dt
//!        < Re ln det[ I - R_A R_B e^{-u} ] >_phi
//! ```
//!
//! with the azimuthal average `<.>_phi` over the incidence direction. The
//! pressure follows from the distance derivative taken at fixed physical
//! wavevector, which only touches the explicit exponential:
//!
//! ```text
//! F(D) = hbar c / (32 pi^2 D^4) \int u^3 du \int dt
//!        < Re[ tr M / det M - 2 ] >_phi ,  M = I - R_A R_B e^{-u}.
//! ```
//!
//! Positive `F` means attraction. The `u` cutoff at 60 is harmless: the
//! integrands decay like `e^{-u}` and the truncated weight is below 1e-24
//! of the total.
//!
//! For a ferromagnet facing a non-magnetic mirror the energy splits into
//! a magnetization-independent part and three quadratic Kerr terms,
//!
//! `E(theta) = E_0 + E_perp cos^2 theta + (E_par1 + E_par2) sin^2 theta`,
//!
//! computed by [`casimir_energy_decomposed`] from closed-form integrands
//! (the azimuthal average is already folded into their prefactors).
//!
//! Kerr contributions sit as much as twenty orders of magnitude below the
//! base energy at micrometer distances, far beyond what subtracting two
//! full energies can resolve in double precision. [`magnetic_energy_shift`]
//! therefore never forms the two energies: writing the full round-trip
//! matrix as `M0 + dM` with real `M0`, the determinant shift
//!
//! `det(M0 + dM) - det M0 = m11 e22 + m22 e11 - m12 e21 - m21 e12 + det dM`
//!
//! is exact for 2x2 matrices, and `ln|det| - ln|det0|` reduces to one
//! `ln_1p` of a small ratio. The same adjugate identity powers the force
//! shift. This keeps full relative precision on shifts of order 1e-20 of
//! the base energy.

use crate::quad::{self, QuadError, QuadResult, QuadratureConfig};
use crate::reflection::{MirrorAt, MirrorSpec};
use crate::units::{EV_NM2_TO_J_M2, EV_NM3_TO_N_M2, HBAR_C};
use num_complex::Complex64;
use std::cell::{Cell, RefCell};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CasimirError {
    #[error("distance must be positive and finite, got {0} nm")]
    BadDistance(f64),
    #[error("quadrature failed while computing {context}")]
    Quadrature {
        context: &'static str,
        #[source]
        source: QuadError,
    },
    #[error("invalid quadrature configuration")]
    Config(#[source] QuadError),
    #[error("the mirror facing the ferromagnet must be non-magnetic, got {0}")]
    UnexpectedMagneticMirror(&'static str),
    #[error("expected a ferromagnetic mirror, got {0}")]
    NotFerromagnet(&'static str),
    #[error("decomposition needs an ideal or isotropic-metal mirror, got {0}")]
    NotDiagonalMirror(&'static str),
}

/// A single integrated observable in SI units.
#[derive(Debug, Clone, Copy)]
pub struct EnergyResult {
    pub value: f64,
    /// Error estimate of the outer quadrature, same units as `value`.
    pub est_error: f64,
    /// Number of innermost integrand evaluations (spectral point times
    /// azimuth sample).
    pub evaluations: u64,
}

/// Orientation-resolved energy split, J/m^2.
#[derive(Debug, Clone, Copy)]
pub struct EnergyDecomposition {
    pub distance_nm: f64,
    /// Magnetization-independent part (negative, binding).
    pub e0: f64,
    /// Coefficient of cos^2(theta): polar Kerr contribution.
    pub e_perp: f64,
    /// Coefficient of sin^2(theta) from the longitudinal Kerr entries.
    pub e_par1: f64,
    /// Coefficient of sin^2(theta) from the transverse Kerr entry.
    pub e_par2: f64,
}

impl EnergyDecomposition {
    /// Magnetization-dependent part at polar angle `theta`.
    pub fn magnetic(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.e_perp * c * c + (self.e_par1 + self.e_par2) * s * s
    }

    pub fn total(&self, theta: f64) -> f64 {
        self.e0 + self.magnetic(theta)
    }

    /// Coefficient of cos^2(theta) in the anisotropy energy; its sign picks
    /// the easy direction (positive: in-plane).
    pub fn anisotropy_coefficient(&self) -> f64 {
        self.e_perp - self.e_par1 - self.e_par2
    }
}

/// Orientation-resolved pressure split, N/m^2 (positive attracts).
#[derive(Debug, Clone, Copy)]
pub struct ForceDecomposition {
    pub distance_nm: f64,
    pub f0: f64,
    pub f_perp: f64,
    pub f_par1: f64,
    pub f_par2: f64,
}

impl ForceDecomposition {
    pub fn magnetic(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.f_perp * c * c + (self.f_par1 + self.f_par2) * s * s
    }

    pub fn total(&self, theta: f64) -> f64 {
        self.f0 + self.magnetic(theta)
    }

    pub fn anisotropy_coefficient(&self) -> f64 {
        self.f_perp - self.f_par1 - self.f_par2
    }
}

// Outer panels for the u integral: power-law rise, knee, exponential tail.
const U_PANELS: [(f64, f64); 5] = [
    (0.0, 0.5),
    (0.5, 2.0),
    (2.0, 6.0),
    (6.0, 15.0),
    (15.0, 60.0),
];

fn check_distance(d: f64) -> Result<(), CasimirError> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(CasimirError::BadDistance(d))
    }
}

/// Nested adaptive integral `\int u^p du \int_0^1 dt term(u, t)` over the
/// standard panels. The inner tolerance runs one order tighter than the
/// outer one, plus an absolute floor tied to the largest inner value seen
/// so far: nodes deep in the exponential tail contribute nothing to the
/// outer result, and a purely relative target is unreachable there (the
/// error estimate bottoms out at evaluation noise). The panels are seeded
/// in ascending u, so the peak panels set the scale before the tail runs.
/// Inner non-convergence is tolerated per-node (the partial estimate is
/// used) but reported after the outer integral finishes.
fn nested(
    q: &QuadratureConfig,
    u_power: i32,
    mut term: impl FnMut(f64, f64) -> f64,
) -> Result<QuadResult, QuadError> {
    let inner_rel = (q.rel_tol * 0.1).max(1e-14);
    let failure: RefCell<Option<QuadError>> = RefCell::new(None);
    let scale = std::cell::Cell::new(0.0f64);
    let outer = quad::integrate_panels(
        |u| {
            let inner = quad::integrate(
                |t| term(u, t),
                0.0,
                1.0,
                inner_rel,
                scale.get() * q.rel_tol * 1e-4,
                q.max_subdivisions,
            );
            if let Ok(r) = &inner {
                scale.set(scale.get().max(r.value.abs()));
            }
            let value = match inner {
                Ok(r) => r.value,
                Err(QuadError::NonConvergence {
                    estimate,
                    est_error,
                }) => {
                    failure
                        .borrow_mut()
                        .get_or_insert(QuadError::NonConvergence {
                            estimate,
                            est_error,
                        });
                    estimate
                }
                Err(other) => {
                    failure.borrow_mut().get_or_insert(other);
                    0.0
                }
            };
            u.powi(u_power) * value
        },
        &U_PANELS,
        q.rel_tol,
        q.abs_tol,
        q.max_subdivisions,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}

#[inline]
fn full_entry(base: f64, delta: Option<Complex64>) -> Complex64 {
    match delta {
        Some(d) => Complex64::new(base, 0.0) + d,
        None => Complex64::new(base, 0.0),
    }
}

// Round-trip matrix M = I - x A B at one azimuth, fully complex.
#[inline]
fn round_trip(a: &MirrorAt, b: &MirrorAt, azimuth: f64, x: f64) -> [Complex64; 4] {
    let ab = a.base(azimuth);
    let bb = b.base(azimuth);
    let ad = a.kerr_delta(azimuth);
    let bd = b.kerr_delta(azimuth);
    let (a_ss, a_pp) = (
        Complex64::new(ab.ss, 0.0),
        full_entry(ab.pp, ad.map(|d| d.pp)),
    );
    let a_sp = full_entry(ab.sp, ad.map(|d| d.sp));
    let a_ps = full_entry(ab.ps, ad.map(|d| d.ps));
    let (b_ss, b_pp) = (
        Complex64::new(bb.ss, 0.0),
        full_entry(bb.pp, bd.map(|d| d.pp)),
    );
    let b_sp = full_entry(bb.sp, bd.map(|d| d.sp));
    let b_ps = full_entry(bb.ps, bd.map(|d| d.ps));
    let p11 = a_ss * b_ss + a_sp * b_ps;
    let p12 = a_ss * b_sp + a_sp * b_pp;
    let p21 = a_ps * b_ss + a_pp * b_ps;
    let p22 = a_ps * b_sp + a_pp * b_pp;
    [
        Complex64::new(1.0, 0.0) - x * p11,
        -x * p12,
        -x * p21,
        Complex64::new(1.0, 0.0) - x * p22,
    ]
}

fn needs_azimuth(m: &MirrorSpec) -> bool {
    matches!(
        m,
        MirrorSpec::Ferromagnet { .. } | MirrorSpec::UniaxialPlate { .. }
    )
}

/// Casimir energy per unit area for an arbitrary mirror pair, J/m^2.
/// Negative values bind the mirrors.
pub fn casimir_energy_general(
    mirror_a: &MirrorSpec,
    mirror_b: &MirrorSpec,
    distance_nm: f64,
    q: &QuadratureConfig,
) -> Result<EnergyResult, CasimirError> {
    check_distance(distance_nm)?;
    q.validate().map_err(CasimirError::Config)?;
    let scale = HBAR_C / (2.0 * distance_nm);
    let evals = Cell::new(0u64);
    let diagonal = !needs_azimuth(mirror_a) && !needs_azimuth(mirror_b);
    let term = |u: f64, t: f64| {
        let k = u * scale;
        let w = t * k;
        let x = (-u).exp();
        let ma = MirrorAt::eval(mirror_a, w, k);
        let mb = MirrorAt::eval(mirror_b, w, k);
        if diagonal {
            evals.set(evals.get() + 1);
            let a = ma.base(0.0);
            let b = mb.base(0.0);
            (-a.ss * b.ss * x).ln_1p() + (-a.pp * b.pp * x).ln_1p()
        } else {
            quad::phi_average(
                |az| {
                    evals.set(evals.get() + 1);
                    let m = round_trip(&ma, &mb, az, x);
                    let det = m[0] * m[3] - m[1] * m[2];
                    0.5 * det.norm_sqr().ln()
                },
                q.phi_samples,
            )
        }
    };
    let r = nested(q, 2, term).map_err(|source| CasimirError::Quadrature {
        context: "Casimir energy",
        source,
    })?;
    let pref = HBAR_C / (32.0 * PI * PI * distance_nm.powi(3)) * EV_NM2_TO_J_M2;
    Ok(EnergyResult {
        value: pref * r.value,
        est_error: pref * r.est_error,
        evaluations: evals.get(),
    })
}

/// Casimir pressure for an arbitrary mirror pair, N/m^2, positive when
/// the mirrors attract.
pub fn casimir_force(
    mirror_a: &MirrorSpec,
    mirror_b: &MirrorSpec,
    distance_nm: f64,
    q: &QuadratureConfig,
) -> Result<EnergyResult, CasimirError> {
    check_distance(distance_nm)?;
    q.validate().map_err(CasimirError::Config)?;
    let scale = HBAR_C / (2.0 * distance_nm);
    let evals = Cell::new(0u64);
    let diagonal = !needs_azimuth(mirror_a) && !needs_azimuth(mirror_b);
    let term = |u: f64, t: f64| {
        let k = u * scale;
        let w = t * k;
        let x = (-u).exp();
        let ma = MirrorAt::eval(mirror_a, w, k);
        let mb = MirrorAt::eval(mirror_b, w, k);
        if diagonal {
            evals.set(evals.get() + 1);
            let a = ma.base(0.0);
            let b = mb.base(0.0);
            let (rs, rp) = (a.ss * b.ss * x, a.pp * b.pp * x);
            rs / (1.0 - rs) + rp / (1.0 - rp)
        } else {
            quad::phi_average(
                |az| {
                    evals.set(evals.get() + 1);
                    let m = round_trip(&ma, &mb, az, x);
                    let det = m[0] * m[3] - m[1] * m[2];
                    ((m[0] + m[3]) / det).re - 2.0
                },
                q.phi_samples,
            )
        }
    };
    let r = nested(q, 3, term).map_err(|source| CasimirError::Quadrature {
        context: "Casimir pressure",
        source,
    })?;
    let pref = HBAR_C / (32.0 * PI * PI * distance_nm.powi(4)) * EV_NM3_TO_N_M2;
    Ok(EnergyResult {
        value: pref * r.value,
        est_error: pref * r.est_error,
        evaluations: evals.get(),
    })
}

// Kerr factors of the ferromagnet plus diagonal amplitudes of both
// mirrors at one spectral point.
struct PairAt {
    a_s: f64,
    a_p: f64,
    b_s: f64,
    b_p: f64,
    pol: f64,
    lon: f64,
    tra: f64,
}

fn pair_at(metal: &MirrorSpec, fm: &MirrorSpec, w: f64, k: f64) -> PairAt {
    let (a_s, a_p) = match MirrorAt::eval(metal, w, k) {
        MirrorAt::Diagonal { rs, rp } => (rs, rp),
        _ => unreachable!("validated as diagonal"),
    };
    match MirrorAt::eval(fm, w, k) {
        MirrorAt::Kerr {
            rs,
            rp,
            polar,
            longitudinal,
            transverse,
            ..
        } => PairAt {
            a_s,
            a_p,
            b_s: rs,
            b_p: rp,
            pol: polar,
            lon: longitudinal,
            tra: transverse,
        },
        _ => unreachable!("validated as ferromagnet"),
    }
}

fn check_decomposition_pair(
    metal: &MirrorSpec,
    fm: &MirrorSpec,
) -> Result<(), CasimirError> {
    match metal {
        MirrorSpec::Ideal | MirrorSpec::IsotropicMetal { .. } => {}
        other => return Err(CasimirError::NotDiagonalMirror(other.kind_name())),
    }
    match fm {
        MirrorSpec::Ferromagnet { .. } => Ok(()),
        other => Err(CasimirError::NotFerromagnet(other.kind_name())),
    }
}

/// Split of the energy into the magnetization-independent part and the
/// three quadratic Kerr coefficients. The ferromagnet's stored orientation
/// is irrelevant here; the split itself resolves the angle dependence.
pub fn casimir_energy_decomposed(
    metal: &MirrorSpec,
    fm: &MirrorSpec,
    distance_nm: f64,
    q: &QuadratureConfig,
) -> Result<EnergyDecomposition, CasimirError> {
    check_distance(distance_nm)?;
    q.validate().map_err(CasimirError::Config)?;
    check_decomposition_pair(metal, fm)?;
    let scale = HBAR_C / (2.0 * distance_nm);
    let pref = HBAR_C / (32.0 * PI * PI * distance_nm.powi(3)) * EV_NM2_TO_J_M2;

    let component = |f: &dyn Fn(&PairAt, f64) -> f64,
                         context: &'static str|
     -> Result<f64, CasimirError> {
        let r = nested(q, 2, |u, t| {
            let k = u * scale;
            let p = pair_at(metal, fm, t * k, k);
            f(&p, (-u).exp())
        })
        .map_err(|source| CasimirError::Quadrature { context, source })?;
        Ok(pref * r.value)
    };

    // Azimuthal averages of sin^2/cos^2 and the second-order expansion of
    // the transverse entry are folded into the 1/2 and 1/4 prefactors.
    let e0 = component(
        &|p, x| (-p.a_s * p.b_s * x).ln_1p() + (-p.a_p * p.b_p * x).ln_1p(),
        "base energy",
    )?;
    let e_perp = component(
        &|p, x| {
            let (ds, dp) = (1.0 - p.a_s * p.b_s * x, 1.0 - p.a_p * p.b_p * x);
            -p.a_s * p.a_p * p.pol * p.pol * x * x / (ds * dp)
        },
        "polar energy coefficient",
    )?;
    let e_par1 = component(
        &|p, x| {
            let (ds, dp) = (1.0 - p.a_s * p.b_s * x, 1.0 - p.a_p * p.b_p * x);
            -0.5 * p.a_s * p.a_p * p.lon * p.lon * x * x / (ds * dp)
        },
        "longitudinal energy coefficient",
    )?;
    let e_par2 = component(
        &|p, x| {
            let dp = 1.0 - p.a_p * p.b_p * x;
            0.25 * p.a_p * p.a_p * p.tra * p.tra * x * x / (dp * dp)
        },
        "transverse energy coefficient",
    )?;
    Ok(EnergyDecomposition {
        distance_nm,
        e0,
        e_perp,
        e_par1,
        e_par2,
    })
}

/// Pressure analogue of [`casimir_energy_decomposed`], N/m^2.
pub fn casimir_force_decomposed(
    metal: &MirrorSpec,
    fm: &MirrorSpec,
    distance_nm: f64,
    q: &QuadratureConfig,
) -> Result<ForceDecomposition, CasimirError> {
    check_distance(distance_nm)?;
    q.validate().map_err(CasimirError::Config)?;
    check_decomposition_pair(metal, fm)?;
    let scale = HBAR_C / (2.0 * distance_nm);
    let pref = HBAR_C / (32.0 * PI * PI * distance_nm.powi(4)) * EV_NM3_TO_N_M2;

    let component = |f: &dyn Fn(&PairAt, f64) -> f64,
                         context: &'static str|
     -> Result<f64, CasimirError> {
        let r = nested(q, 3, |u, t| {
            let k = u * scale;
            let p = pair_at(metal, fm, t * k, k);
            f(&p, (-u).exp())
        })
        .map_err(|source| CasimirError::Quadrature { context, source })?;
        Ok(pref * r.value)
    };

    let f0 = component(
        &|p, x| {
            let (rs, rp) = (p.a_s * p.b_s * x, p.a_p * p.b_p * x);
            rs / (1.0 - rs) + rp / (1.0 - rp)
        },
        "base pressure",
    )?;
    // d/dD of x^2/(ds dp) at fixed wavevector, transformed to u variables.
    let bracket = |p: &PairAt, x: f64| {
        let (rs, rp) = (p.a_s * p.b_s, p.a_p * p.b_p);
        let (ds, dp) = (1.0 - rs * x, 1.0 - rp * x);
        2.0 / (ds * dp) + rs * x / (ds * ds * dp) + rp * x / (ds * dp * dp)
    };
    let f_perp = component(
        &|p, x| p.a_s * p.a_p * p.pol * p.pol * x * x * bracket(p, x),
        "polar pressure coefficient",
    )?;
    let f_par1 = component(
        &|p, x| 0.5 * p.a_s * p.a_p * p.lon * p.lon * x * x * bracket(p, x),
        "longitudinal pressure coefficient",
    )?;
    let f_par2 = component(
        &|p, x| {
            let rp = p.a_p * p.b_p;
            let dp = 1.0 - rp * x;
            -0.5 * p.a_p * p.a_p * p.tra * p.tra * x * x
                * (1.0 / (dp * dp) + rp * x / (dp * dp * dp))
        },
        "transverse pressure coefficient",
    )?;
    Ok(ForceDecomposition {
        distance_nm,
        f0,
        f_perp,
        f_par1,
        f_par2,
    })
}

struct ShiftParts {
    det0: f64,
    dd: Complex64,
    tr0: f64,
    tr_delta: Complex64,
}

// Adjugate-difference pieces of M = M0 + dM at one azimuth. `a` is the
// non-magnetic mirror, (bs, bp) the diagonal part of the ferromagnet and
// `delta` its gyrotropic correction.
#[inline]
fn shift_parts(a: &MirrorAt, b: &MirrorAt, azimuth: f64, x: f64, bs: f64, bp: f64) -> ShiftParts {
    let ab = a.base(azimuth);
    let delta = b.kerr_delta(azimuth).expect("ferromagnet has a Kerr delta");
    let m11 = 1.0 - x * ab.ss * bs;
    let m12 = -x * ab.sp * bp;
    let m21 = -x * ab.ps * bs;
    let m22 = 1.0 - x * ab.pp * bp;
    let det0 = m11 * m22 - m12 * m21;
    // d = A * dB with dB_ss = 0.
    let d11 = ab.sp * delta.ps;
    let d12 = ab.ss * delta.sp + ab.sp * delta.pp;
    let d21 = ab.pp * delta.ps;
    let d22 = ab.ps * delta.sp + ab.pp * delta.pp;
    let dd = x * x * (d11 * d22 - d12 * d21)
        - x * (m22 * d11 - m21 * d12 - m12 * d21 + m11 * d22);
    ShiftParts {
        det0,
        dd,
        tr0: m11 + m22,
        tr_delta: -x * (d11 + d22),
    }
}

fn check_shift_pair(plate: &MirrorSpec, fm: &MirrorSpec) -> Result<(), CasimirError> {
    if plate.is_magnetic() {
        return Err(CasimirError::UnexpectedMagneticMirror(plate.kind_name()));
    }
    match fm {
        MirrorSpec::Ferromagnet { .. } => Ok(()),
        other => Err(CasimirError::NotFerromagnet(other.kind_name())),
    }
}

/// Magnetization-dependent part of the energy, `E(orientation) - E_0`,
/// J/m^2, at the orientation stored in the ferromagnet. Evaluated through
/// the determinant-shift identity, so it stays accurate when the shift is
/// twenty orders of magnitude below the base energy.
pub fn magnetic_energy_shift(
    plate: &MirrorSpec,
    fm: &MirrorSpec,
    distance_nm: f64,
    q: &QuadratureConfig,
) -> Result<EnergyResult, CasimirError> {
    check_distance(distance_nm)?;
    q.validate().map_err(CasimirError::Config)?;
    check_shift_pair(plate, fm)?;
    let scale = HBAR_C / (2.0 * distance_nm);
    let evals = Cell::new(0u64);
    let term = |u: f64, t: f64| {
        let k = u * scale;
        let w = t * k;
        let x = (-u).exp();
        let ma = MirrorAt::eval(plate, w, k);
        let mb = MirrorAt::eval(fm, w, k);
        let (bs, bp) = match mb {
            MirrorAt::Kerr { rs, rp, .. } => (rs, rp),
            _ => unreachable!("validated as ferromagnet"),
        };
        quad::phi_average(
            |az| {
                evals.set(evals.get() + 1);
                let s = shift_parts(&ma, &mb, az, x, bs, bp);
                let ratio =
                    (2.0 * s.det0 * s.dd.re + s.dd.norm_sqr()) / (s.det0 * s.det0);
                0.5 * ratio.ln_1p()
            },
            q.phi_samples,
        )
    };
    let r = nested(q, 2, term).map_err(|source| CasimirError::Quadrature {
        context: "magnetic energy shift",
        source,
    })?;
    let pref = HBAR_C / (32.0 * PI * PI * distance_nm.powi(3)) * EV_NM2_TO_J_M2;
    Ok(EnergyResult {
        value: pref * r.value,
        est_error: pref * r.est_error,
        evaluations: evals.get(),
    })
}

/// Magnetization-dependent part of the pressure, N/m^2, via the same
/// determinant-shift identity.
pub fn magnetic_force_shift(
    plate: &MirrorSpec,
    fm: &MirrorSpec,
    distance_nm: f64,
    q: &QuadratureConfig,
) -> Result<EnergyResult, CasimirError> {
    check_distance(distance_nm)?;
    q.validate().map_err(CasimirError::Config)?;
    check_shift_pair(plate, fm)?;
    let scale = HBAR_C / (2.0 * distance_nm);
    let evals = Cell::new(0u64);
    let term = |u: f64, t: f64| {
        let k = u * scale;
        let w = t * k;
        let x = (-u).exp();
        let ma = MirrorAt::eval(plate, w, k);
        let mb = MirrorAt::eval(fm, w, k);
        let (bs, bp) = match mb {
            MirrorAt::Kerr { rs, rp, .. } => (rs, rp),
            _ => unreachable!("validated as ferromagnet"),
        };
        quad::phi_average(
            |az| {
                evals.set(evals.get() + 1);
                let s = shift_parts(&ma, &mb, az, x, bs, bp);
                // tr/det - tr0/det0 over a common denominator.
                let detf = s.det0 + s.dd;
                let num = s.tr_delta * s.det0 - s.tr0 * s.dd;
                (num / (s.det0 * detf)).re
            },
            q.phi_samples,
        )
    };
    let r = nested(q, 3, term).map_err(|source| CasimirError::Quadrature {
        context: "magnetic pressure shift",
        source,
    })?;
    let pref = HBAR_C / (32.0 * PI * PI * distance_nm.powi(4)) * EV_NM3_TO_N_M2;
    Ok(EnergyResult {
        value: pref * r.value,
        est_error: pref * r.est_error,
        evaluations: evals.get(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::preset_mirror;
    use crate::reflection::MagnetizationOrientation;

    fn quick() -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: 1e-6,
            ..Default::default()
        }
    }

    #[test]
    fn ideal_energy_and_pressure_match_closed_forms() {
        let q = QuadratureConfig::default();
        let d = 100.0;
        let e = casimir_energy_general(&MirrorSpec::Ideal, &MirrorSpec::Ideal, d, &q).unwrap();
        let want_e = -PI * PI * HBAR_C / (720.0 * d.powi(3)) * EV_NM2_TO_J_M2;
        assert!(
            ((e.value - want_e) / want_e).abs() < 1e-6,
            "E = {:e}, want {:e}",
            e.value,
            want_e
        );
        let f = casimir_force(&MirrorSpec::Ideal, &MirrorSpec::Ideal, d, &q).unwrap();
        let want_f = PI * PI * HBAR_C / (240.0 * d.powi(4)) * EV_NM3_TO_N_M2;
        assert!(
            ((f.value - want_f) / want_f).abs() < 1e-6,
            "F = {:e}, want {:e}",
            f.value,
            want_f
        );
        assert!(e.evaluations > 0 && f.evaluations > 0);
    }

    #[test]
    fn general_energy_agrees_with_base_component() {
        let q = quick();
        let metal = preset_mirror("au-drude").unwrap();
        let fm = preset_mirror("fe-drude").unwrap();
        let dec = casimir_energy_decomposed(&metal, &fm, 25.0, &q).unwrap();
        // Stripping the gyrotropy turns the ferromagnet into a plain metal
        // whose full energy is exactly the base component.
        let MirrorSpec::Ferromagnet { xx, .. } = &fm else {
            unreachable!()
        };
        let plain = MirrorSpec::IsotropicMetal { xx: xx.clone() };
        let e = casimir_energy_general(&metal, &plain, 25.0, &q).unwrap();
        assert!(((e.value - dec.e0) / dec.e0).abs() < 1e-5);
    }

    #[test]
    fn shift_matches_decomposition_at_both_poles() {
        let q = quick();
        let metal = preset_mirror("au-drude").unwrap();
        let fm = preset_mirror("fe-drude").unwrap();
        let d = 10.0;
        let dec = casimir_energy_decomposed(&metal, &fm, d, &q).unwrap();
        assert!(dec.e0 < 0.0);
        assert!(dec.e_perp > 0.0 && dec.e_par1 > 0.0 && dec.e_par2 > 0.0);
        for theta in [0.0, std::f64::consts::FRAC_PI_2] {
            let oriented = fm.with_orientation(MagnetizationOrientation { theta, phi: 0.3 });
            let shift = magnetic_energy_shift(&metal, &oriented, d, &q).unwrap();
            let want = dec.magnetic(theta);
            assert!(
                ((shift.value - want) / want).abs() < 1e-4,
                "theta={theta}: shift {:e} vs decomposition {want:e}",
                shift.value
            );
        }
    }

    #[test]
    fn force_shift_matches_force_decomposition() {
        let q = quick();
        let metal = preset_mirror("au-drude").unwrap();
        let fm = preset_mirror("fe-drude").unwrap();
        let d = 10.0;
        let dec = casimir_force_decomposed(&metal, &fm, d, &q).unwrap();
        assert!(dec.f0 > 0.0, "base pressure attracts");
        assert!(dec.f_perp < 0.0 && dec.f_par1 < 0.0 && dec.f_par2 < 0.0);
        let oriented = fm.with_orientation(MagnetizationOrientation {
            theta: 0.0,
            phi: 0.0,
        });
        let shift = magnetic_force_shift(&metal, &oriented, d, &q).unwrap();
        let want = dec.magnetic(0.0);
        assert!(
            ((shift.value - want) / want).abs() < 1e-4,
            "shift {:e} vs decomposition {want:e}",
            shift.value
        );
    }

    #[test]
    fn kind_validation() {
        let q = quick();
        let fm = preset_mirror("fe-drude").unwrap();
        let plate = preset_mirror("quartz").unwrap();
        assert!(matches!(
            casimir_energy_decomposed(&plate, &fm, 10.0, &q),
            Err(CasimirError::NotDiagonalMirror(_))
        ));
        assert!(matches!(
            magnetic_energy_shift(&fm, &fm, 10.0, &q),
            Err(CasimirError::UnexpectedMagneticMirror(_))
        ));
        assert!(matches!(
            magnetic_energy_shift(&plate, &plate, 10.0, &q),
            Err(CasimirError::NotFerromagnet(_))
        ));
        assert!(matches!(
            casimir_energy_general(&MirrorSpec::Ideal, &MirrorSpec::Ideal, -1.0, &q),
            Err(CasimirError::BadDistance(_))
        ));
    }
}
