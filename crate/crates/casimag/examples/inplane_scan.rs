//! Rotate an in-plane magnetization against the optic axis of a quartz
//! plate and fit the angular law of the interaction energy.
//!
//! The same pairing switches its easy axis between short and long
//! separations: sin^2 at 10 nm, cos^2 at 5 um.
//!
//! Run with: cargo run --release --example inplane_scan

use casimag::anisotropy::scan_inplane;
use casimag::materials::preset_mirror;
use casimag::QuadratureConfig;

fn main() {
    let plate = preset_mirror("quartz").unwrap();
    let fm = preset_mirror("fe").unwrap();
    let quad = QuadratureConfig::default();

    for &d in &[10.0_f64, 5000.0] {
        let scan = scan_inplane(&plate, &fm, d, 16, &quad).unwrap();
        println!("D = {d} nm");
        println!("  angle (rad)   delta E (J/m^2)");
        for (a, de) in scan.angles.iter().zip(&scan.delta_e) {
            println!("  {a:>11.6}   {de:+.6e}");
        }
        println!(
            "  fit: {:?}, amplitude = {:+.6e} J/m^2, residual = {:.2e}",
            scan.class, scan.fit_amplitude, scan.fit_residual
        );
        println!();
    }
}
