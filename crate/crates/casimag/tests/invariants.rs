//! Property tests for the closed-form layers: reflection coefficients,
//! permittivity models and the spectral domain. Everything here is cheap
//! enough to run under a few hundred generated cases.

use casimag::materials::{AU_DRUDE, FE_DRUDE, QUARTZ_ORDINARY};
use casimag::reflection::{
    fresnel_pp, fresnel_ss, kerr_coefficients, magnetic_reflection_matrix,
    uniaxial_reflection_matrix,
};
use casimag::{
    casimir_energy_general, drude_epsilon, two_oscillator_epsilon, MagnetizationOrientation,
    MirrorSpec, QuadratureConfig, SpectralPoint, UniaxialGeometry,
};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Spectral points drawn across nine decades of transverse wavevector,
/// with the frequency strictly inside the evanescent sector.
fn spectral_point() -> impl Strategy<Value = SpectralPoint> {
    (-4.0..5.0f64, 1e-6..0.999999f64)
        .prop_map(|(log_k, t)| SpectralPoint::new(t * 10f64.powf(log_k), 10f64.powf(log_k)).unwrap())
}

fn permittivity() -> impl Strategy<Value = f64> {
    (-3.0..7.0f64).prop_map(|e| 1.0 + 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fresnel_coefficients_stay_bounded(point in spectral_point(), eps in permittivity()) {
        let rs = fresnel_ss(eps, point).unwrap();
        let rp = fresnel_pp(eps, point).unwrap();
        prop_assert!((-1.0..=0.0).contains(&rs), "r_ss = {rs}");
        prop_assert!((0.0..1.0).contains(&rp), "r_pp = {rp}");
    }

    #[test]
    fn degenerate_uniaxial_is_isotropic(
        point in spectral_point(),
        eps in permittivity(),
        zeta in 0.0..(2.0 * PI),
        azimuth in 0.0..(2.0 * PI),
    ) {
        let m = uniaxial_reflection_matrix(eps, eps, UniaxialGeometry { zeta }, point, azimuth)
            .unwrap();
        let rs = fresnel_ss(eps, point).unwrap();
        let rp = fresnel_pp(eps, point).unwrap();
        prop_assert!((m.r_ss.re - rs).abs() <= 1e-12 * rs.abs().max(1e-12));
        prop_assert!((m.r_pp.re - rp).abs() <= 1e-12 * rp.abs().max(1e-12));
        prop_assert!(m.r_sp.norm() <= 1e-12);
        prop_assert!(m.r_ps.norm() <= 1e-12);
    }

    #[test]
    fn kerr_coefficients_linear_in_coupling(
        point in spectral_point(),
        eps in permittivity(),
        exy in -3.0..3.0f64,
        scale in 0.01..10.0f64,
    ) {
        let a = kerr_coefficients(eps, exy, point).unwrap();
        let b = kerr_coefficients(eps, scale * exy, point).unwrap();
        for (x, y) in [
            (a.polar, b.polar),
            (a.longitudinal, b.longitudinal),
            (a.transverse, b.transverse),
        ] {
            prop_assert!((scale * x - y).abs() <= 1e-10 * (scale * x).abs().max(1e-300));
        }
    }

    #[test]
    fn only_relative_angles_matter(
        point in spectral_point(),
        eps in permittivity(),
        exy in -2.0..2.0f64,
        theta in 0.0..PI,
        phi in 0.0..(2.0 * PI),
        zeta in 0.0..(2.0 * PI),
        delta in 0.0..(2.0 * PI),
    ) {
        // Rotating magnetization and incidence plane together is a no-op.
        let m1 = magnetic_reflection_matrix(
            eps, exy, MagnetizationOrientation { theta, phi }, point, 0.7,
        ).unwrap();
        let m2 = magnetic_reflection_matrix(
            eps, exy, MagnetizationOrientation { theta, phi: phi + delta }, point, 0.7 + delta,
        ).unwrap();
        prop_assert!((m1.r_sp - m2.r_sp).norm() <= 1e-12);
        prop_assert!((m1.r_ps - m2.r_ps).norm() <= 1e-12);
        prop_assert!((m1.r_pp - m2.r_pp).norm() <= 1e-12);

        // Same for the optic axis of a birefringent plate.
        let g1 = uniaxial_reflection_matrix(
            eps, eps + 0.5, UniaxialGeometry { zeta }, point, 0.2,
        ).unwrap();
        let g2 = uniaxial_reflection_matrix(
            eps, eps + 0.5, UniaxialGeometry { zeta: zeta + delta }, point, 0.2 + delta,
        ).unwrap();
        prop_assert!((g1.r_sp - g2.r_sp).norm() <= 1e-12);
        prop_assert!((g1.r_ss - g2.r_ss).norm() <= 1e-12);
    }

    #[test]
    fn uniaxial_mixing_is_antisymmetric(
        point in spectral_point(),
        eps_o in permittivity(),
        eps_e in permittivity(),
        zeta in 0.0..(2.0 * PI),
    ) {
        // zeta -> -zeta mirrors the axis across the incidence plane:
        // diagonal entries hold, the mixing entry flips sign, and the
        // matrix stays reciprocal (r_ps = -r_sp).
        let m = uniaxial_reflection_matrix(eps_o, eps_e, UniaxialGeometry { zeta }, point, 0.0)
            .unwrap();
        let r = uniaxial_reflection_matrix(eps_o, eps_e, UniaxialGeometry { zeta: -zeta }, point, 0.0)
            .unwrap();
        prop_assert_eq!(m.r_ps, -m.r_sp);
        let scale = m.r_sp.norm().max(1e-12);
        prop_assert!((m.r_sp + r.r_sp).norm() <= 1e-12 * scale);
        prop_assert!((m.r_ss - r.r_ss).norm() <= 1e-12);
        prop_assert!((m.r_pp - r.r_pp).norm() <= 1e-12);

        // And the axis is a director.
        let p = uniaxial_reflection_matrix(
            eps_o, eps_e, UniaxialGeometry { zeta: zeta + PI }, point, 0.0,
        ).unwrap();
        prop_assert!((m.r_sp - p.r_sp).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn spectral_domain_is_enforced(w in -1.0..10.0f64, k in -1.0..10.0f64) {
        let valid = w > 0.0 && w < k;
        prop_assert_eq!(SpectralPoint::new(w, k).is_ok(), valid);
    }

    #[test]
    fn analytic_models_decrease_monotonically(w in -4.0..4.0f64, step in 0.01..2.0f64) {
        let w0 = 10f64.powf(w);
        let w1 = w0 * (1.0 + step);
        let evals: [fn(f64) -> f64; 3] = [
            |x| drude_epsilon(&AU_DRUDE, x).unwrap(),
            |x| drude_epsilon(&FE_DRUDE, x).unwrap(),
            |x| two_oscillator_epsilon(&QUARTZ_ORDINARY, x).unwrap(),
        ];
        for eval in evals {
            let (a, b) = (eval(w0), eval(w1));
            prop_assert!(a >= b && b >= 1.0, "eps({w0}) = {a}, eps({w1}) = {b}");
        }
    }
}

proptest! {
    // Energy evaluations are adaptive integrals; a handful of cases is
    // plenty and keeps the suite quick.
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ideal_energy_deepens_as_mirrors_approach(d in 10.0..1000.0f64, factor in 1.2..4.0f64) {
        let q = QuadratureConfig { rel_tol: 1e-6, ..Default::default() };
        let near = casimir_energy_general(&MirrorSpec::Ideal, &MirrorSpec::Ideal, d, &q)
            .unwrap()
            .value;
        let far = casimir_energy_general(&MirrorSpec::Ideal, &MirrorSpec::Ideal, d * factor, &q)
            .unwrap()
            .value;
        prop_assert!(near < far && far < 0.0, "E({d}) = {near}, E({}) = {far}", d * factor);
    }
}
