//! Reflection coefficients at a single spectral point: Fresnel entries of
//! an isotropic metal, the three magneto-optical coupling strengths of a
//! magnetized mirror, and the polarization mixing of a uniaxial plate as
//! its optic axis turns.
//!
//! Run with: cargo run --release --example reflection_matrix

use casimag::materials::preset_model;
use casimag::{
    MagnetizationOrientation, MirrorSpec, SpectralPoint, UniaxialGeometry,
};
use casimag::reflection::{
    fresnel_pp, fresnel_ss, kerr_coefficients, magnetic_reflection_matrix,
    uniaxial_reflection_matrix,
};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn main() {
    // w < k c puts the point in the evanescent sector that dominates the
    // near-field interaction.
    let point = SpectralPoint::new(1.0, 3.0).unwrap();

    let fe = preset_model("fe").unwrap();
    let fe_xy = preset_model("fe-xy").unwrap();
    let (eps_xx, eps_xy) = (fe.eps_i(point.w()), fe_xy.eps_i(point.w()));
    println!("iron at w = {} eV: eps_xx = {eps_xx:.4}, eps_xy = {eps_xy:.5}", point.w());
    println!("  r_ss = {:+.6}", fresnel_ss(eps_xx, point).unwrap());
    println!("  r_pp = {:+.6}", fresnel_pp(eps_xx, point).unwrap());
    let kc = kerr_coefficients(eps_xx, eps_xy, point).unwrap();
    println!("  polar        = {:+.3e}", kc.polar);
    println!("  longitudinal = {:+.3e}", kc.longitudinal);
    println!("  transverse   = {:+.3e}", kc.transverse);

    let m = magnetic_reflection_matrix(
        eps_xx,
        eps_xy,
        MagnetizationOrientation { theta: FRAC_PI_2, phi: FRAC_PI_4 },
        point,
        0.0,
    )
    .unwrap();
    println!("  in-plane magnetization at 45 deg:");
    println!("    r_sp = {:+.3e} {:+.3e}i", m.r_sp.re, m.r_sp.im);
    println!("    r_ps = {:+.3e} {:+.3e}i", m.r_ps.re, m.r_ps.im);

    println!();
    println!("quartz plate, optic axis angle sweep:");
    let o = preset_model("quartz-o").unwrap();
    let e = preset_model("quartz-e").unwrap();
    println!("{:>10}  {:>12}  {:>12}  {:>12}", "zeta", "r_ss", "r_sp", "r_pp");
    for i in 0..=4 {
        let zeta = FRAC_PI_2 * i as f64 / 4.0;
        let m = uniaxial_reflection_matrix(
            o.eps_i(point.w()),
            e.eps_i(point.w()),
            UniaxialGeometry { zeta },
            point,
            0.0,
        )
        .unwrap();
        println!(
            "{zeta:>10.4}  {:>12.6}  {:>12.3e}  {:>12.6}",
            m.r_ss.re, m.r_sp.re, m.r_pp.re
        );
    }

    // An ideal mirror reflects everything regardless of the point.
    let ideal = casimag::reflection::reflection_matrix(&MirrorSpec::Ideal, point, 0.0).unwrap();
    println!();
    println!("ideal mirror: r_ss = {}, r_pp = {}", ideal.r_ss.re, ideal.r_pp.re);
}
