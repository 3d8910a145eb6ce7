//! Decompose the metal/ferromagnet interaction into its magnetization
//! channels at two separations and show how their hierarchy inverts.
//!
//! Run with: cargo run --release --example energy_decomposition

use casimag::{
    casimir_energy_decomposed, casimir_force_decomposed, QuadratureConfig,
};
use casimag::materials::preset_mirror;

fn main() {
    let metal = preset_mirror("au-drude").unwrap();
    let fm = preset_mirror("fe-drude").unwrap();
    let quad = QuadratureConfig::default();

    for &d in &[2.0_f64, 100.0] {
        let e = casimir_energy_decomposed(&metal, &fm, d, &quad).unwrap();
        let f = casimir_force_decomposed(&metal, &fm, d, &quad).unwrap();
        println!("D = {d} nm");
        println!("  E0      = {:+.6e} J/m^2", e.e0);
        println!("  E_perp  = {:+.6e} J/m^2 (polar channel)", e.e_perp);
        println!("  E_par1  = {:+.6e} J/m^2 (longitudinal channel)", e.e_par1);
        println!("  E_par2  = {:+.6e} J/m^2 (transverse channel)", e.e_par2);
        println!("  F0      = {:+.6e} N/m^2", f.f0);
        println!("  F_perp  = {:+.6e} N/m^2", f.f_perp);
        println!("  F_par1  = {:+.6e} N/m^2", f.f_par1);
        println!("  F_par2  = {:+.6e} N/m^2", f.f_par2);
        let (lead, ratio) = if e.e_par2 > e.e_perp {
            ("transverse/polar", e.e_par2 / e.e_perp)
        } else {
            ("polar/transverse", e.e_perp / e.e_par2)
        };
        println!("  dominant channel ratio {lead} = {ratio:.1}");
        println!(
            "  anisotropy energy E(0) - E(pi/2) = {:+.6e} J/m^2",
            e.magnetic(0.0) - e.magnetic(std::f64::consts::FRAC_PI_2)
        );
        println!();
    }
}
