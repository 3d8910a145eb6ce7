//! Unit system: eV for energies and frequencies, nm for lengths.
//!
//! Working in (eV, nm) keeps every spectral quantity of order unity across
//! the whole integration domain; ħ and c never appear inside integrands,
//! only in the prefactors below and in the SI conversions at the API
//! boundary.

/// ħc in eV·nm (CODATA).
pub const HBAR_C: f64 = 197.326_980_4;

/// Elementary charge in C; equivalently J per eV (exact, SI 2019).
pub const EV_TO_J: f64 = 1.602_176_634e-19;

/// 1 eV/nm² expressed in J/m².
pub const EV_NM2_TO_J_M2: f64 = 0.160_217_663_4;

/// 1 eV/nm³ expressed in N/m².
pub const EV_NM3_TO_N_M2: f64 = 1.602_176_634e8;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_are_consistent() {
        // 1 eV/nm^2 = EV_TO_J / (1e-9 m)^2, and 1 eV/nm^3 likewise.
        assert!((EV_NM2_TO_J_M2 / (EV_TO_J / 1e-18) - 1.0).abs() < 1e-12);
        assert!((EV_NM3_TO_N_M2 / (EV_TO_J / 1e-27) - 1.0).abs() < 1e-12);
    }
}
