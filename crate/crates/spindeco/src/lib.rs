//! Exact large-environment dynamics of a single quantum spin.
//!
//! A spin `j` is coupled to an `N`-state environment through a Gaussian
//! random Hamiltonian whose distribution is invariant under SU(2) rotations
//! of the spin and U(N) rotations of the environment. In the limit of a
//! large environment every `(l, m)` harmonic of the spin density matrix
//! evolves independently, multiplied by a universal decoherence kernel.
//! This crate computes those kernels and everything built on top of them:
//! per-channel couplings and timescales, phase-space (Wigner/Husimi) fields
//! and their time evolution, the diffusion regime, environments with their
//! own spectral density, and a finite-size Monte Carlo cross-check of the
//! analytic results.
//!
//! Start with the `examples/` directory: each example exercises one major
//! capability end to end. The `spindeco` binary exposes the same
//! computations as subcommands that write CSV/JSON data files.

pub mod cli;
pub mod coupling;
pub mod error;
pub mod evolution;
pub mod external;
pub mod halfint;
pub mod kernel;
pub mod matrix;
pub mod montecarlo;
pub mod numeric;
pub mod output;
pub mod sphere;
pub mod states;
pub mod wigner;
pub mod su2;

pub use error::{Error, Result};
pub use halfint::HalfInt;
