//! Exact spectral tools for Haldane–Shastry type spin chains.

pub mod chain_builder;
pub mod cli;
pub mod combinatorics;
pub mod dynamical_spectrum;
pub mod error;
pub mod linalg;
pub mod nn_chain;
pub mod partition_functions;
pub mod qseries;
pub mod scalar;
pub mod site_solver;
pub mod special;
pub mod spectral_stats;
pub mod spectrum;
pub mod spin_algebra;

pub use error::{Error, Result};
pub use qseries::{QExponent, QPoly, QRat};
pub use scalar::{Coeff, Real};
pub use spectrum::{NumericTable, SymbolicTable};
pub use spin_algebra::{Generator, Sign, SpinConfig, SpinSpace, SpinVector};

/// Spin vectors with exact rational coefficients.
pub type ExactSpinVector = SpinVector<num_rational::BigRational>;
/// Spin vectors with double precision coefficients.
pub type RealSpinVector = SpinVector<f64>;
