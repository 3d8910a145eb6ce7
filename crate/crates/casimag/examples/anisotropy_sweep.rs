//! Track the in-plane anisotropy amplitude of quartz against iron across
//! separations and find where the easy axis flips. Takes about a minute:
//! every distance is a full angular scan.
//!
//! Run with: cargo run --release --example anisotropy_sweep

use casimag::anisotropy::{amplitude_vs_distance, log_grid, AngularClass};
use casimag::materials::preset_mirror;
use casimag::QuadratureConfig;

fn main() {
    let plate = preset_mirror("quartz").unwrap();
    let fm = preset_mirror("fe").unwrap();
    let quad = QuadratureConfig::default();

    let grid = log_grid(1.0, 5000.0, 6).unwrap();
    let curve = amplitude_vs_distance(&plate, &fm, &grid, 8, &quad).unwrap();

    println!("{:>12}  {:>15}  {:>6}", "D (nm)", "amplitude (J/m^2)", "law");
    for i in 0..curve.distances_nm.len() {
        let law = match curve.classes[i] {
            AngularClass::Sin2 => "sin^2",
            AngularClass::Cos2 => "cos^2",
            AngularClass::Mixed => "mixed",
        };
        println!(
            "{:>12.2}  {:>+15.6e}  {:>6}",
            curve.distances_nm[i], curve.amplitude[i], law
        );
    }
    println!();
    if curve.kinks.is_empty() {
        println!("no angular-law crossover in this range");
    }
    for (lo, hi) in &curve.kinks {
        println!("angular law flips between {lo:.0} and {hi:.0} nm");
    }
}
