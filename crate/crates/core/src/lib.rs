//! Simulator for an atom-cavity quantum cloning machine.
//!
//! `N` V-system atoms (optionally with a fourth, metastable level driven by a
//! classical cycling field) interact resonantly with two quantized cavity
//! modes. An input photonic qubit sits in the clone mode `b₁`; stimulated
//! emission copies it while spontaneous emission into the orthogonal mode
//! `b₂` degrades the copies. The crate evolves the joint state, reads out the
//! photon-number statistics and computes the cloning fidelity.
//!
//! Two engines are provided and cross-check each other:
//!
//! * [`analytic`]: closed-form single-atom amplitudes and fidelities.
//! * [`dynamics`]: a spectral propagator (Jacobi eigendecomposition) and an
//!   adaptive Dormand–Prince integrator.
//!
//! Units: `ħ = g = 1`; every time argument is the dimensionless `τ = g·t`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod cloner;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod hilbert;
pub mod model;
pub mod observables;

pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;
