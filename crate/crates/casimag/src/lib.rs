//! Casimir interaction of a ferromagnetic mirror with a non-magnetic one.
//!
//! The crate evaluates the zero-temperature Casimir energy per unit area
//! between two plane mirrors, one of which may be ferromagnetic, from the
//! matrix-log functional over imaginary frequencies and transverse wave
//! vectors. The magneto-optical (Kerr) part of the reflection matrix makes
//! the energy depend on the magnetization direction; the crate extracts that
//! dependence as closed-form perturbative components, as angular scans
//! against a uniaxially birefringent plate, and as the derived observables:
//! anisotropy amplitudes, crossover distances, scaling exponents, forces on
//! finite disks, proximity-theorem forces, and torques.
//!
//! Everything internal is kept in eV (energies, frequencies, `ħω` and
//! `ħck⊥` alike) and nm; public results are converted to SI (J/m², N/m²,
//! N, N·m) at the boundary. See [`units`] for the constants.

pub mod anisotropy;
pub mod casimir;
pub mod config;
pub mod dielectric;
pub mod materials;
pub mod quad;
pub mod reflection;
pub mod run;
pub mod units;

pub use casimir::{
    casimir_energy_decomposed, casimir_energy_general, casimir_force, casimir_force_decomposed,
    magnetic_energy_shift, magnetic_force_shift, CasimirError, EnergyDecomposition, EnergyResult,
    ForceDecomposition,
};
pub use dielectric::{
    composite_metal_model, drude_epsilon, kk_diagonal, kk_offdiagonal, two_oscillator_epsilon,
    DielectricError, DielectricModel, DrudeParams, OpticalDataTable, TableKind,
    TwoOscillatorParams,
};
pub use quad::QuadratureConfig;
pub use reflection::{
    MagnetizationOrientation, MirrorSpec, ReflectionMatrix, SpectralPoint, UniaxialGeometry,
};
