//! Evaluate the bundled permittivity models along the imaginary frequency
//! axis, where every causal response function is real and monotonically
//! decreasing.
//!
//! Run with: cargo run --release --example drude_model

use casimag::materials::{preset_model, AU_DRUDE, FE_DRUDE};
use casimag::{drude_epsilon, two_oscillator_epsilon};
use casimag::materials::QUARTZ_ORDINARY;

fn main() {
    let freqs = [0.01_f64, 0.1, 1.0, 10.0, 100.0];

    println!("eps(i w) for the analytic models");
    println!("{:>10}  {:>14}  {:>14}  {:>14}", "w (eV)", "Au Drude", "Fe Drude", "quartz (o)");
    for &w in &freqs {
        println!(
            "{:>10.3}  {:>14.4}  {:>14.4}  {:>14.6}",
            w,
            drude_epsilon(&AU_DRUDE, w).unwrap(),
            drude_epsilon(&FE_DRUDE, w).unwrap(),
            two_oscillator_epsilon(&QUARTZ_ORDINARY, w).unwrap(),
        );
    }

    // The full metal presets splice measured absorption onto the Drude
    // tail; compare them with the bare Drude response.
    let au_full = preset_model("au").unwrap();
    let fe_full = preset_model("fe").unwrap();
    println!();
    println!("full tabulated presets vs bare Drude");
    println!("{:>10}  {:>14}  {:>14}", "w (eV)", "Au full", "Fe full");
    for &w in &freqs {
        println!("{:>10.3}  {:>14.4}  {:>14.4}", w, au_full.eps_i(w), fe_full.eps_i(w));
    }
}
