//! Degeneracy-amplifying transformations for Ising models, with exact
//! brute-force oracles and spectral verification of the resulting
//! transverse-field annealing spectra.
//!
//! The crate is organized as a pipeline:
//!
//! - [`model`] — exact-rational Ising models (multiset terms, ±1 spins);
//! - [`brute`] — exhaustive ground-state / local-minima enumeration;
//! - [`gadget`] — the compiler passes that amplify ground-state degeneracy
//!   (unitization, ferro-pair preprocessing, extra-qubit gadgets in 3-local
//!   or 2-local form) with full provenance reporting;
//! - [`hamiltonian`] — `H(lambda) = H_P + lambda * H_B` as an implicit sparse
//!   symmetric operator;
//! - [`solver`] — dense and Lanczos eigensolvers for the k lowest pairs;
//! - [`spectrum`] — lambda sweeps, branch tracking, anticrossing detection,
//!   and the minimum-gap record;
//! - [`perturb`] — first- and second-order perturbation quantities tied back
//!   to the numerics.

pub mod brute;
pub mod error;
pub mod exact;
pub mod gadget;
pub mod hamiltonian;
pub mod model;
pub mod perturb;
pub mod solver;
pub mod spectrum;

pub use brute::{brute_force, BruteForceOptions, BruteForceSummary};
pub use error::{CoreError, Result};
pub use exact::{format_rat, parse_rat, rat, Rat};
pub use gadget::{
    apply_construction, ferro_pair_preprocess, transform, two_local_gadget, unitize, GadgetParams,
    Locality, TransformOptions, TransformReport,
};
pub use hamiltonian::SparseHamiltonian;
pub use model::{IsingModel, SpinConfiguration, Term};
pub use perturb::{
    convergence_radius_diagnostic, profile, second_order_bound, slope_divergence_check,
    PerturbationProfile, SecondOrderBound,
};
pub use solver::{lowest_eigenpairs, EigenPair, SolverOptions};
pub use spectrum::{sweep, MinGap, Spacing, SpectrumSweep, SweepSchedule};
