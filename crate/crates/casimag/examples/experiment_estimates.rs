//! Order-of-magnitude signals for three measurement geometries: the
//! anisotropy force on a suspended disk, the proximity-approximated force
//! on a curved lens, and the torque on a rotatable plate.
//!
//! Run with: cargo run --release --example experiment_estimates

use casimag::anisotropy::{disk_force, proximity_force, scan_inplane, torque_profile};
use casimag::materials::preset_mirror;
use casimag::{casimir_force_decomposed, QuadratureConfig};

fn main() {
    let quad = QuadratureConfig::default();

    // A 10 um iron disk over gold at 100 nm: the pressure difference
    // between polar and in-plane magnetization, times the disk area.
    let au = preset_mirror("au-drude").unwrap();
    let fe = preset_mirror("fe-drude").unwrap();
    let f = casimir_force_decomposed(&au, &fe, 100.0, &quad).unwrap();
    let disk = disk_force(f.anisotropy_coefficient(), 10.0);
    println!("disk geometry (R = 10 um, D = 100 nm over gold):");
    println!("  pressure difference = {:+.3e} N/m^2", f.anisotropy_coefficient());
    println!("  anisotropy force    = {:.2} fN", disk.abs() * 1e15);

    // A barium titanate plate against iron at 10 nm sets the scale for
    // the other two geometries through its angular-scan amplitude.
    let batio3 = preset_mirror("batio3").unwrap();
    let fe_full = preset_mirror("fe").unwrap();
    let scan = scan_inplane(&batio3, &fe_full, 10.0, 16, &quad).unwrap();
    println!();
    println!("barium titanate vs iron at 10 nm:");
    println!("  scan amplitude = {:+.3e} J/m^2 ({:?})", scan.fit_amplitude, scan.class);

    let prox = proximity_force(scan.fit_amplitude.abs(), 100.0);
    println!("  lens force (R = 100 um, proximity approx) = {:.1} aN", prox * 1e18);

    let torque = torque_profile(&scan, 100.0);
    println!("  plate torque (R = 100 um), peak = {:.2e} N m", torque.max_abs);
}
