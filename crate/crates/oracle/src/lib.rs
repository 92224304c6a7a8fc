//! Brute-force residue oracles for testing the exact engine.
//!
//! Nothing here shares code with the residue engine beyond the input types.
//! [`separable_residue`] reads a single coefficient of a truncated power
//! series; [`perturbation_residue`] perturbs a plane germ to one with simple
//! zeros and sums the non-degenerate residues numerically.

mod perturb;
mod series;

pub use perturb::{perturbation_residue, Inconclusive, PerturbationEstimate, PerturbationOptions};
pub use series::{separable_residue, separable_residue_with_order, SeriesTruncation};
