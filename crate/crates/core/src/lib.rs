//! Average subsystem entropies of Haar-random pure states.
//!
//! - [`exactmath`]: exact and high-precision harmonic numbers and their bounds.
//! - [`partition`]: multi-partite factorizations and subsystem selectors.
//! - [`analytic`]: closed-form averages (Page-Sen entropy, purity, tangle,
//!   mutual information) and thermodynamic limits.
//! - [`quantum`]: reduced density matrices, spectra and per-state measures.
//! - [`sampler`]: Haar sampling and reproducible parallel Monte Carlo.
//! - [`verify`]: theorem sweeps and Monte Carlo cross-checks.
//! - [`archive`]: append-only run records and the claims ledger.
//! - [`cli`]: the command-line front end.

pub mod analytic;
pub mod archive;
pub mod cli;
pub mod exactmath;
pub mod partition;
pub mod quantum;
pub mod sampler;
pub mod verify;
