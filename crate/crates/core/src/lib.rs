//! Gridless estimation of sparse mmWave MIMO-OFDM channels from 1-bit
//! quantized measurements.
//!
//! The channel is a sparse sum of angle-delay atoms; only the signs of the
//! real and imaginary parts of the received pilots are observed. Four convex
//! estimators recover the (unit-norm) channel direction from those signs:
//!
//! * `BiANM` — binary atomic norm minimization over the vectorized channel,
//!   solved through an SDP with a two-level Toeplitz block of side `MN + 1`;
//! * `ReBiANM` — iteratively reweighted BiANM that sharpens sparsity;
//! * `DeBiANM` — decoupled angle-delay variant whose PSD block has side
//!   `M + N`, much cheaper for large arrays;
//! * `ReDeBiANM` — reweighted decoupled variant.
//!
//! The structured SDPs are solved by a consensus ADMM ([`solver`]) built on
//! three projections: onto the (block-)Toeplitz lag subspace, onto the PSD
//! cone, and onto the probability simplex that encodes sign consistency plus
//! l1 normalization. [`harness`] provides a seeded Monte-Carlo runner and a
//! runtime benchmark behind the `sweep`/`bench` CLI subcommands.
//!
//! Trials are data-parallel: with the default `parallel` feature they run on
//! a rayon pool, without it on a sequential fallback with identical results.

pub mod channel;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod parallel;
pub mod solver;
pub mod toeplitz;

pub use num_complex::Complex64;
