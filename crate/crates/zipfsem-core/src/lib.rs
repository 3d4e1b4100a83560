//! Zipf's law as a property of semantic coverings.
//!
//! The crate is `no_std` (with `alloc`) and contains every numerical
//! procedure of the toolkit:
//!
//! * [`special`] – Riemann/Hurwitz zeta, its s-derivative, and the
//!   exponent constraint `ζ(B, 1+k0) = 1`.
//! * [`powerlaw`] – rank-frequency tables, exponent fits, frequency
//!   spectra, harmonic-sum bounds.
//! * [`covering`] – coverings of the unit interval, gap/overlap sweeps,
//!   (ρ,k)-layers and the hierarchical covering.
//! * [`evolution`] – the generalization and specialization simulators.
//! * [`mandelbrot`] – cost/entropy functionals, Zipf–Mandelbrot pmf and the
//!   local cost-ratio dynamics.
//! * [`baselines`] – random typing, Simon's process and stream measurements.
//! * [`lexsem`] – hyponym-sum checks and PCA classification.
//!
//! File formats, fixtures and the command line live in the `zipfsem` crate.
#![no_std]

extern crate alloc;

pub mod baselines;
pub mod covering;
mod error;
pub mod evolution;
pub mod lexsem;
pub mod mandelbrot;
mod math;
pub mod powerlaw;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
