//! Phase-reference-free encodings of continuous-variable optical states.
//!
//! A coherent state (or one half of a two-mode squeezed vacuum) is mixed with
//! an ancilla coherent state of the same frequency and the total photon number
//! of the pair is measured non-destructively. The post-measurement state lives
//! in the two-mode logical basis `|n_M> = |n>|M-n>`, which carries no
//! reference-phase dependence. This crate builds those states in closed form,
//! computes the measurement statistics, and quantifies how much of the
//! two-mode squeezed entanglement survives on average.
//!
//! Module map:
//!
//! - [`numerics`]: log-factorials, Poisson weights, log-sum-exp, entropy.
//! - [`states`]: truncated Fock-space coherent and two-mode squeezed states.
//! - [`encoding`]: the projected (encoded) states, their large-amplitude
//!   approximants, and the outcome distributions.
//! - [`entanglement`]: exact, per-outcome and averaged entanglement.
//! - [`oracle`]: dense tensor-product brute force used for cross-checks.
//! - [`cli`]: sweep/point drivers, CSV and SVG rendering.

pub mod cli;
pub mod encoding;
pub mod entanglement;
mod error;
pub mod numerics;
pub mod oracle;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
