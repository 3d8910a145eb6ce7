//! Two perfect mirrors against the textbook closed forms,
//! E = -pi^2 hbar c / (720 D^3) and P = pi^2 hbar c / (240 D^4).
//!
//! Run with: cargo run --release --example ideal_mirrors

use casimag::materials::preset_mirror;
use casimag::units::{EV_NM2_TO_J_M2, EV_NM3_TO_N_M2, HBAR_C};
use casimag::{casimir_energy_general, casimir_force, QuadratureConfig};
use std::f64::consts::PI;

fn main() {
    let ideal = preset_mirror("ideal").unwrap();
    let quad = QuadratureConfig::default();

    println!(
        "{:>10}  {:>15}  {:>15}  {:>9}  {:>15}  {:>9}",
        "D (nm)", "E (J/m^2)", "closed form", "rel dev", "P (N/m^2)", "rel dev"
    );
    for &d in &[10.0_f64, 100.0, 1000.0, 10000.0] {
        let e = casimir_energy_general(&ideal, &ideal, d, &quad).unwrap();
        let f = casimir_force(&ideal, &ideal, d, &quad).unwrap();
        let e_exact = -PI * PI * HBAR_C / (720.0 * d.powi(3)) * EV_NM2_TO_J_M2;
        let p_exact = PI * PI * HBAR_C / (240.0 * d.powi(4)) * EV_NM3_TO_N_M2;
        println!(
            "{d:>10.0}  {:>15.6e}  {e_exact:>15.6e}  {:>9.1e}  {:>15.6e}  {:>9.1e}",
            e.value,
            (e.value / e_exact - 1.0).abs(),
            f.value,
            (f.value / p_exact - 1.0).abs()
        );
    }

    // Real metals fall short of the ideal result, increasingly so at
    // short range where the plasma wavelength matters.
    let au = preset_mirror("au").unwrap();
    println!();
    println!("gold vs ideal ratio:");
    for &d in &[10.0_f64, 100.0, 1000.0] {
        let e_au = casimir_energy_general(&au, &au, d, &quad).unwrap();
        let e_id = casimir_energy_general(&ideal, &ideal, d, &quad).unwrap();
        println!("  D = {d:>6.0} nm: {:.3}", e_au.value / e_id.value);
    }
}
