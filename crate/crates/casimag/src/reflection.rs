//! Reflection matrices on the imaginary frequency axis.
//!
//! All formulas are written in the rotated wave frame: `K` is the photon
//! energy equivalent of the perpendicular wavevector (`hbar c k_perp`) and
//! `w` the imaginary-axis frequency, both in eV, with `0 < w < K` inside
//! the evanescent integration domain used by the energy functional. In
//! this frame every diagonal Fresnel amplitude and the uniaxial matrix are
//! real; dissipation never enters explicitly because causality already
//! shaped `eps(iw)`.
//!
//! Gyrotropy is different. The magneto-optical entries of the reflection
//! matrix pick up a factor `i` on the imaginary axis for the longitudinal
//! and transverse magnetization components. [`KerrCoefficients`] therefore
//! stores the *real factors* `(P, h, g)`; the physical entries are
//! `cos(theta) P` (polar, real), `i sin(phi') sin(theta) h` and
//! `i cos(phi') sin(theta) g`. Assembly of the complex matrix happens in
//! [`magnetic_reflection_matrix`] and in the crate-internal fast path, so
//! the `i` lives in exactly one place.

use crate::dielectric::DielectricModel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReflectionError {
    #[error("spectral point needs 0 < w < kperp_c, got w={w:e}, kperp_c={kperp_c:e}")]
    BadSpectralPoint { w: f64, kperp_c: f64 },
    #[error("permittivity must be positive and finite, got {0:e}")]
    BadPermittivity(f64),
    #[error("uniaxial reflection denominator vanished")]
    DegenerateDenominator,
}

/// A point of the evanescent spectral domain: imaginary frequency `w` and
/// transverse wavevector energy `kperp_c`, both in eV, with `w < kperp_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    w: f64,
    kperp_c: f64,
}

impl SpectralPoint {
    pub fn new(w: f64, kperp_c: f64) -> Result<Self, ReflectionError> {
        if w > 0.0 && w < kperp_c && kperp_c.is_finite() {
            Ok(Self { w, kperp_c })
        } else {
            Err(ReflectionError::BadSpectralPoint { w, kperp_c })
        }
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn kperp_c(&self) -> f64 {
        self.kperp_c
    }
}

/// Magnetization direction: `theta` is the polar angle from the surface
/// normal, `phi` the in-plane angle from the laboratory x axis (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MagnetizationOrientation {
    pub theta: f64,
    pub phi: f64,
}

/// In-plane direction of a uniaxial crystal's optic axis, radians from the
/// laboratory x axis. The axis is taken to lie in the surface plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UniaxialGeometry {
    pub zeta: f64,
}

/// Real magneto-optical factors at one spectral point; see the module
/// docs for where the factor `i` enters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrCoefficients {
    pub polar: f64,
    pub longitudinal: f64,
    pub transverse: f64,
}

/// 2x2 reflection matrix in the (s, p) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionMatrix {
    pub r_ss: Complex64,
    pub r_sp: Complex64,
    pub r_ps: Complex64,
    pub r_pp: Complex64,
}

impl ReflectionMatrix {
    pub fn det(&self) -> Complex64 {
        self.r_ss * self.r_pp - self.r_sp * self.r_ps
    }
}

/// One mirror of the cavity.
#[derive(Debug, Clone)]
pub enum MirrorSpec {
    /// Perfect conductor: `r_ss = -1`, `r_pp = +1` at every point.
    Ideal,
    IsotropicMetal {
        xx: DielectricModel,
    },
    Ferromagnet {
        xx: DielectricModel,
        xy: DielectricModel,
        orientation: MagnetizationOrientation,
    },
    UniaxialPlate {
        ordinary: DielectricModel,
        extraordinary: DielectricModel,
        geometry: UniaxialGeometry,
    },
}

impl MirrorSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Ideal => "ideal",
            Self::IsotropicMetal { .. } => "isotropic metal",
            Self::Ferromagnet { .. } => "ferromagnet",
            Self::UniaxialPlate { .. } => "uniaxial plate",
        }
    }

    pub fn is_magnetic(&self) -> bool {
        matches!(self, Self::Ferromagnet { .. })
    }

    /// Same mirror with a replaced magnetization direction; errors are not
    /// possible, non-magnetic mirrors are returned unchanged.
    pub fn with_orientation(&self, orientation: MagnetizationOrientation) -> Self {
        match self {
            Self::Ferromagnet { xx, xy, .. } => Self::Ferromagnet {
                xx: xx.clone(),
                xy: xy.clone(),
                orientation,
            },
            other => other.clone(),
        }
    }
}

fn check_eps(eps: f64) -> Result<(), ReflectionError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(ReflectionError::BadPermittivity(eps))
    }
}

// Medium wavevector: xi^2 = w^2 (eps - 1) + K^2. Positive for eps > 0
// because w < K.
#[inline]
fn xi_raw(eps: f64, w2: f64, k2: f64) -> f64 {
    (w2 * (eps - 1.0) + k2).sqrt()
}

#[inline]
fn rss_raw(k: f64, xi: f64) -> f64 {
    (k - xi) / (k + xi)
}

#[inline]
fn rpp_raw(eps: f64, k: f64, xi: f64) -> f64 {
    (eps * k - xi) / (eps * k + xi)
}

// Real Kerr factors (P, h, g); see module docs for the sign and i
// conventions. kt = sqrt(K^2 - w^2).
#[inline]
fn kerr_raw(eps: f64, exy: f64, k: f64, w: f64, xi: f64, kt: f64) -> (f64, f64, f64) {
    let ds = k + xi;
    let dp = eps * k + xi;
    let polar = -k * w * exy / (ds * dp);
    let longitudinal = -k * kt * w * exy / (ds * dp * xi);
    let transverse = 2.0 * kt * exy * k / (dp * dp);
    (polar, longitudinal, transverse)
}

/// Wavevector component inside a medium of permittivity `eps`.
pub fn xi(eps: f64, point: SpectralPoint) -> Result<f64, ReflectionError> {
    check_eps(eps)?;
    Ok(xi_raw(eps, point.w * point.w, point.kperp_c * point.kperp_c))
}

/// s-polarized Fresnel amplitude, in (-1, 0] for eps >= 1.
pub fn fresnel_ss(eps: f64, point: SpectralPoint) -> Result<f64, ReflectionError> {
    let xi = xi(eps, point)?;
    Ok(rss_raw(point.kperp_c, xi))
}

/// p-polarized Fresnel amplitude, in [0, 1) for eps >= 1.
pub fn fresnel_pp(eps: f64, point: SpectralPoint) -> Result<f64, ReflectionError> {
    let xi = xi(eps, point)?;
    Ok(rpp_raw(eps, point.kperp_c, xi))
}

/// Real magneto-optical factors for a gyrotropic mirror, first order in
/// `eps_xy`.
pub fn kerr_coefficients(
    eps_xx: f64,
    eps_xy: f64,
    point: SpectralPoint,
) -> Result<KerrCoefficients, ReflectionError> {
    check_eps(eps_xx)?;
    if !eps_xy.is_finite() {
        return Err(ReflectionError::BadPermittivity(eps_xy));
    }
    let (w, k) = (point.w, point.kperp_c);
    let xi = xi_raw(eps_xx, w * w, k * k);
    let kt = (k * k - w * w).sqrt();
    let (polar, longitudinal, transverse) = kerr_raw(eps_xx, eps_xy, k, w, xi, kt);
    Ok(KerrCoefficients {
        polar,
        longitudinal,
        transverse,
    })
}

/// Full reflection matrix of a magnetized mirror. `azimuth` is the
/// in-plane direction of the transverse wavevector; only the difference
/// `orientation.phi - azimuth` enters.
pub fn magnetic_reflection_matrix(
    eps_xx: f64,
    eps_xy: f64,
    orientation: MagnetizationOrientation,
    point: SpectralPoint,
    azimuth: f64,
) -> Result<ReflectionMatrix, ReflectionError> {
    let kc = kerr_coefficients(eps_xx, eps_xy, point)?;
    let xi = xi_raw(eps_xx, point.w * point.w, point.kperp_c * point.kperp_c);
    let rs = rss_raw(point.kperp_c, xi);
    let rp = rpp_raw(eps_xx, point.kperp_c, xi);
    let (st, ct) = orientation.theta.sin_cos();
    let (spm, cpm) = (orientation.phi - azimuth).sin_cos();
    let pol = ct * kc.polar;
    let lon = spm * st * kc.longitudinal;
    let tra = cpm * st * kc.transverse;
    Ok(ReflectionMatrix {
        r_ss: Complex64::new(rs, 0.0),
        r_sp: Complex64::new(pol, lon),
        r_ps: Complex64::new(pol, -lon),
        r_pp: Complex64::new(rp, tra),
    })
}

// Uniaxial matrix entries; alpha and beta are sin/-cos of the angle
// between the optic axis and the incidence plane.
#[inline]
#[allow(clippy::too_many_arguments)]
fn uniaxial_raw(
    eps_o: f64,
    eps_e: f64,
    w: f64,
    k: f64,
    xi_o: f64,
    alpha: f64,
    beta: f64,
) -> (f64, f64, f64) {
    let w2 = w * w;
    let k2 = k * k;
    let xi_a2 = (eps_o - alpha * alpha) * w2 + alpha * alpha * k2;
    let xi_e2 = xi_o * xi_o + (eps_e - eps_o) / eps_o * xi_a2;
    // Real for passive media; the extraordinary wave stays evanescent.
    debug_assert!(xi_e2 >= 0.0, "xi_e^2 = {xi_e2}");
    let xi_e = xi_e2.max(0.0).sqrt();
    let de = xi_e - xi_o;
    let wb_ak = w2 * beta * beta - alpha * alpha * k2;
    let denom = (k + xi_o) * (xi_o / (eps_o * k) + 1.0) * xi_a2
        + de * (xi_a2 + xi_o / k * (w2 * beta * beta + alpha * alpha * k2));
    debug_assert!(denom != 0.0);
    let rss = ((k - xi_o) * (xi_o / (eps_o * k) + 1.0) * xi_a2
        - de * (xi_a2 + xi_o / k * wb_ak))
        / denom;
    let rpp = (-(k + xi_o) * (xi_o / (eps_o * k) - 1.0) * xi_a2
        + de * (xi_a2 - xi_o / k * wb_ak))
        / denom;
    let rsp = 2.0 * alpha * beta * xi_o * (xi_o - xi_e) * w / denom;
    (rss, rsp, rpp)
}

/// Reflection matrix of a uniaxial plate with in-plane optic axis. The
/// matrix is real on the imaginary axis and `r_ps = -r_sp`.
pub fn uniaxial_reflection_matrix(
    eps_o: f64,
    eps_e: f64,
    geometry: UniaxialGeometry,
    point: SpectralPoint,
    azimuth: f64,
) -> Result<ReflectionMatrix, ReflectionError> {
    check_eps(eps_o)?;
    check_eps(eps_e)?;
    let (w, k) = (point.w, point.kperp_c);
    let xi_o = xi_raw(eps_o, w * w, k * k);
    let rel = geometry.zeta - azimuth;
    let (alpha, beta) = (rel.sin(), -rel.cos());
    let (rss, rsp, rpp) = uniaxial_raw(eps_o, eps_e, w, k, xi_o, alpha, beta);
    if !(rss.is_finite() && rsp.is_finite() && rpp.is_finite()) {
        return Err(ReflectionError::DegenerateDenominator);
    }
    Ok(ReflectionMatrix {
        r_ss: Complex64::new(rss, 0.0),
        r_sp: Complex64::new(rsp, 0.0),
        r_ps: Complex64::new(-rsp, 0.0),
        r_pp: Complex64::new(rpp, 0.0),
    })
}

/// Reflection matrix of any mirror at one spectral point and incidence
/// azimuth. Dispatches on the mirror kind and evaluates its permittivity
/// models at `point.w()`.
pub fn reflection_matrix(
    mirror: &MirrorSpec,
    point: SpectralPoint,
    azimuth: f64,
) -> Result<ReflectionMatrix, ReflectionError> {
    match mirror {
        MirrorSpec::Ideal => Ok(ReflectionMatrix {
            r_ss: Complex64::new(-1.0, 0.0),
            r_sp: Complex64::new(0.0, 0.0),
            r_ps: Complex64::new(0.0, 0.0),
            r_pp: Complex64::new(1.0, 0.0),
        }),
        MirrorSpec::IsotropicMetal { xx } => {
            let eps = xx.eps_i(point.w);
            let xi = xi(eps, point)?;
            Ok(ReflectionMatrix {
                r_ss: Complex64::new(rss_raw(point.kperp_c, xi), 0.0),
                r_sp: Complex64::new(0.0, 0.0),
                r_ps: Complex64::new(0.0, 0.0),
                r_pp: Complex64::new(rpp_raw(eps, point.kperp_c, xi), 0.0),
            })
        }
        MirrorSpec::Ferromagnet {
            xx,
            xy,
            orientation,
        } => magnetic_reflection_matrix(
            xx.eps_i(point.w),
            xy.eps_i(point.w),
            *orientation,
            point,
            azimuth,
        ),
        MirrorSpec::UniaxialPlate {
            ordinary,
            extraordinary,
            geometry,
        } => uniaxial_reflection_matrix(
            ordinary.eps_i(point.w),
            extraordinary.eps_i(point.w),
            *geometry,
            point,
            azimuth,
        ),
    }
}

// Fast path used by the energy integrals: everything that does not depend
// on the incidence azimuth is evaluated once per spectral point.

#[derive(Debug, Clone, Copy)]
pub(crate) struct BaseMatrix {
    pub ss: f64,
    pub sp: f64,
    pub ps: f64,
    pub pp: f64,
}

impl BaseMatrix {
    pub(crate) fn diagonal(ss: f64, pp: f64) -> Self {
        Self {
            ss,
            sp: 0.0,
            ps: 0.0,
            pp,
        }
    }
}

/// Gyrotropic additions to a diagonal base matrix (the ss entry never
/// shifts at first order).
#[derive(Debug, Clone, Copy)]
pub(crate) struct KerrDelta {
    pub sp: Complex64,
    pub ps: Complex64,
    pub pp: Complex64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum MirrorAt {
    Diagonal {
        rs: f64,
        rp: f64,
    },
    Kerr {
        rs: f64,
        rp: f64,
        polar: f64,
        longitudinal: f64,
        transverse: f64,
        sin_theta: f64,
        cos_theta: f64,
        phi_m: f64,
    },
    Uniaxial {
        eps_o: f64,
        eps_e: f64,
        xi_o: f64,
        w: f64,
        k: f64,
        zeta: f64,
    },
}

impl MirrorAt {
    /// Azimuth-independent part of the reflection response at (w, K).
    pub(crate) fn eval(mirror: &MirrorSpec, w: f64, k: f64) -> Self {
        debug_assert!(w > 0.0 && w < k);
        match mirror {
            MirrorSpec::Ideal => Self::Diagonal { rs: -1.0, rp: 1.0 },
            MirrorSpec::IsotropicMetal { xx } => {
                let eps = xx.eps_i(w);
                let xi = xi_raw(eps, w * w, k * k);
                Self::Diagonal {
                    rs: rss_raw(k, xi),
                    rp: rpp_raw(eps, k, xi),
                }
            }
            MirrorSpec::Ferromagnet {
                xx,
                xy,
                orientation,
            } => {
                let eps = xx.eps_i(w);
                let exy = xy.eps_i(w);
                let xi = xi_raw(eps, w * w, k * k);
                let kt = (k * k - w * w).sqrt();
                let (polar, longitudinal, transverse) = kerr_raw(eps, exy, k, w, xi, kt);
                let (sin_theta, cos_theta) = orientation.theta.sin_cos();
                Self::Kerr {
                    rs: rss_raw(k, xi),
                    rp: rpp_raw(eps, k, xi),
                    polar,
                    longitudinal,
                    transverse,
                    sin_theta,
                    cos_theta,
                    phi_m: orientation.phi,
                }
            }
            MirrorSpec::UniaxialPlate {
                ordinary,
                extraordinary,
                geometry,
            } => {
                let eps_o = ordinary.eps_i(w);
                let eps_e = extraordinary.eps_i(w);
                Self::Uniaxial {
                    eps_o,
                    eps_e,
                    xi_o: xi_raw(eps_o, w * w, k * k),
                    w,
                    k,
                    zeta: geometry.zeta,
                }
            }
        }
    }

    /// Real base matrix at the given incidence azimuth.
    pub(crate) fn base(&self, azimuth: f64) -> BaseMatrix {
        match *self {
            Self::Diagonal { rs, rp } | Self::Kerr { rs, rp, .. } => BaseMatrix::diagonal(rs, rp),
            Self::Uniaxial {
                eps_o,
                eps_e,
                xi_o,
                w,
                k,
                zeta,
            } => {
                let rel = zeta - azimuth;
                let (alpha, beta) = (rel.sin(), -rel.cos());
                let (rss, rsp, rpp) = uniaxial_raw(eps_o, eps_e, w, k, xi_o, alpha, beta);
                BaseMatrix {
                    ss: rss,
                    sp: rsp,
                    ps: -rsp,
                    pp: rpp,
                }
            }
        }
    }

    /// Gyrotropic correction at the given incidence azimuth, if any.
    pub(crate) fn kerr_delta(&self, azimuth: f64) -> Option<KerrDelta> {
        match *self {
            Self::Kerr {
                polar,
                longitudinal,
                transverse,
                sin_theta,
                cos_theta,
                phi_m,
                ..
            } => {
                let (spm, cpm) = (phi_m - azimuth).sin_cos();
                let pol = cos_theta * polar;
                let lon = spm * sin_theta * longitudinal;
                let tra = cpm * sin_theta * transverse;
                Some(KerrDelta {
                    sp: Complex64::new(pol, lon),
                    ps: Complex64::new(pol, -lon),
                    pp: Complex64::new(0.0, tra),
                })
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(w: f64, k: f64) -> SpectralPoint {
        SpectralPoint::new(w, k).unwrap()
    }

    #[test]
    fn spectral_point_domain() {
        assert!(SpectralPoint::new(1.0, 2.0).is_ok());
        assert!(SpectralPoint::new(2.0, 1.0).is_err());
        assert!(SpectralPoint::new(0.0, 1.0).is_err());
        assert!(SpectralPoint::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn fresnel_bounds_and_signs() {
        let p = pt(0.3, 1.1);
        for eps in [1.0 + 1e-9, 2.0, 15.0, 1e4] {
            let rs = fresnel_ss(eps, p).unwrap();
            let rp = fresnel_pp(eps, p).unwrap();
            assert!((-1.0..=0.0).contains(&rs), "rs={rs} at eps={eps}");
            assert!((0.0..1.0).contains(&rp), "rp={rp} at eps={eps}");
        }
    }

    #[test]
    fn uniaxial_reduces_to_isotropic() {
        let p = pt(0.4, 0.9);
        let geo = UniaxialGeometry { zeta: 0.73 };
        for eps in [1.5, 4.0, 80.0] {
            let m = uniaxial_reflection_matrix(eps, eps, geo, p, 0.21).unwrap();
            let rs = fresnel_ss(eps, p).unwrap();
            let rp = fresnel_pp(eps, p).unwrap();
            assert!((m.r_ss.re - rs).abs() < 1e-14);
            assert!((m.r_pp.re - rp).abs() < 1e-14);
            assert!(m.r_sp.norm() < 1e-15);
        }
    }

    #[test]
    fn uniaxial_axis_is_pi_periodic_and_antisymmetric() {
        let p = pt(0.2, 0.5);
        let at = |zeta: f64, az: f64| {
            uniaxial_reflection_matrix(2.0, 3.0, UniaxialGeometry { zeta }, p, az).unwrap()
        };
        let a = at(0.3, 0.0);
        let b = at(0.3 + std::f64::consts::PI, 0.0);
        assert!((a.r_ss - b.r_ss).norm() < 1e-14);
        assert!((a.r_sp - b.r_sp).norm() < 1e-14);
        assert!((a.r_pp - b.r_pp).norm() < 1e-14);
        // Only zeta - azimuth matters.
        let c = at(0.3 + 0.11, 0.11);
        assert!((a.r_sp - c.r_sp).norm() < 1e-14);
        assert!((a.r_ps + a.r_sp).norm() < 1e-16);
    }

    #[test]
    fn kerr_entries_assemble_with_correct_symmetry() {
        let p = pt(0.25, 0.8);
        let o = MagnetizationOrientation {
            theta: 1.0,
            phi: 0.6,
        };
        let m = magnetic_reflection_matrix(12.0, 0.4, o, p, 0.1).unwrap();
        // R_sp + R_ps = 2 cos(theta) P regardless of phi.
        let kc = kerr_coefficients(12.0, 0.4, p).unwrap();
        let sum = m.r_sp + m.r_ps;
        assert!((sum.im).abs() < 1e-16);
        assert!((sum.re - 2.0 * o.theta.cos() * kc.polar).abs() < 1e-15);
        // Longitudinal part flips under phi' -> -phi'.
        let m2 = magnetic_reflection_matrix(12.0, 0.4, o, p, 2.0 * o.phi - 0.1).unwrap();
        assert!((m.r_sp.im + m2.r_sp.im).abs() < 1e-15);
        // Diagonal entries carry no polar contribution.
        assert!((m.r_ss.im).abs() < 1e-16);
    }

    #[test]
    fn kerr_vanishes_with_gyrotropy() {
        let p = pt(0.25, 0.8);
        let kc = kerr_coefficients(12.0, 0.0, p).unwrap();
        assert_eq!(kc.polar, 0.0);
        assert_eq!(kc.longitudinal, 0.0);
        assert_eq!(kc.transverse, 0.0);
    }

    #[test]
    fn fast_path_matches_public_matrix() {
        let xx = DielectricModel::Drude(crate::materials::FE_DRUDE);
        let xy = crate::materials::preset_model("fe-xy").unwrap();
        let mirror = MirrorSpec::Ferromagnet {
            xx,
            xy,
            orientation: MagnetizationOrientation {
                theta: 0.9,
                phi: 1.3,
            },
        };
        let p = pt(0.31, 0.95);
        let az = 0.47;
        let slow = reflection_matrix(&mirror, p, az).unwrap();
        let at = MirrorAt::eval(&mirror, p.w(), p.kperp_c());
        let base = at.base(az);
        let delta = at.kerr_delta(az).unwrap();
        assert!((slow.r_ss.re - base.ss).abs() < 1e-15);
        assert!((slow.r_pp - (Complex64::new(base.pp, 0.0) + delta.pp)).norm() < 1e-15);
        assert!((slow.r_sp - delta.sp).norm() < 1e-15);
        assert!((slow.r_ps - delta.ps).norm() < 1e-15);
    }

    #[test]
    fn ideal_mirror_matrix() {
        let m = reflection_matrix(&MirrorSpec::Ideal, pt(0.1, 1.0), 0.0).unwrap();
        assert_eq!(m.r_ss.re, -1.0);
        assert_eq!(m.r_pp.re, 1.0);
        assert_eq!(m.det().re, -1.0);
    }
}
