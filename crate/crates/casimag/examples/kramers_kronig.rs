//! Build a permittivity model from a loss spectrum and check the
//! Kramers-Kronig transform against the closed form of a single Lorentz
//! oscillator, eps(i w) = 1 + f / (x0^2 + g w + w^2).
//!
//! Run with: cargo run --release --example kramers_kronig

use casimag::{kk_diagonal, OpticalDataTable, TableKind};
use casimag::dielectric::TableRow;

const F: f64 = 25.0;
const X0: f64 = 5.0;
const GAMMA: f64 = 0.5;

fn lorentz_loss(x: f64) -> f64 {
    // Im eps on the real axis for the oscillator above.
    F * GAMMA * x / ((X0 * X0 - x * x).powi(2) + GAMMA * GAMMA * x * x)
}

fn lorentz_eps_i(w: f64) -> f64 {
    1.0 + F / (X0 * X0 + GAMMA * w + w * w)
}

fn main() {
    // Sample the loss densely around the resonance and far past it; the
    // transform integrates whatever the table holds, so coverage decides
    // the accuracy.
    let rows: Vec<TableRow> = (1..=12000)
        .map(|i| {
            let x = 0.01 * i as f64;
            TableRow {
                energy_ev: x,
                eps_real: 0.0,
                eps_imag: lorentz_loss(x),
            }
        })
        .collect();
    let table = OpticalDataTable::new(TableKind::Diagonal, rows).unwrap();

    println!("{:>8}  {:>14}  {:>14}  {:>10}", "w (eV)", "transform", "closed form", "rel err");
    let mut worst: f64 = 0.0;
    for &w in &[0.05, 0.2, 1.0, 3.0, 5.0, 10.0, 30.0] {
        let got = kk_diagonal(&table, w).unwrap();
        let want = lorentz_eps_i(w);
        let rel = (got - want).abs() / (want - 1.0);
        worst = worst.max(rel);
        println!("{w:>8.2}  {got:>14.8}  {want:>14.8}  {rel:>10.2e}");
    }
    println!("worst relative error: {worst:.2e}");
    assert!(worst < 5e-3, "transform drifted from the closed form");
}
