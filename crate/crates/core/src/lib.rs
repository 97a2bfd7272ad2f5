//! Discrepancy of permutation set systems.
//!
//! The crate builds the Newman–Nikolov family `([r]^d, A_P)` and generic
//! k-permutation families, evaluates colorings on them, and certifies
//! lower bounds on concrete colorings:
//!
//! * [`digits`]: digit strings, permutations of `[r]`, and the coloring tree
//!   of induced prefix sums.
//! * [`setsystem`]: finite set systems with multiplicity, chain families,
//!   incidence matrices and the text file format.
//! * [`nn`]: the sets `E_{σ,a}`, materialization and streaming edge sums.
//! * [`game`]: the `r × r` game matrix, the permutation seminorm and its
//!   Frobenius and moment bounds.
//! * [`adversary`]: the minimizer/maximizer game and lower-bound witnesses.
//! * [`rms`]: exact root-mean-squared discrepancy over `A_P` and the
//!   per-coloring cancellation/martingale chain.
//! * [`spectral`]: `kgl`, `detlb`, `detlb₂` and the Weyl union check.
//! * [`oracle`]: exhaustive `disc` / `disc₂` for tiny systems.
//! * [`cli`]: the command-line front end and the seeded experiment runner.

pub mod adversary;
pub mod cli;
pub mod digits;
mod error;
pub mod game;
pub mod nn;
pub mod oracle;
pub mod rms;
pub mod seed;
pub mod setsystem;
pub mod spectral;

pub use error::{Error, Result};

pub use adversary::{CyclicWitness, GameTranscript, Maximizer, Minimizer, Witness};
pub use digits::{ColoringTree, DigitString, Permutation};
pub use game::GameMatrix;
pub use nn::PermSet;
pub use setsystem::SetSystem;
pub use spectral::SpectralReport;
