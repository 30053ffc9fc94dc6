//! Generalized Sierpiński carpets: axiom checks, cell graphs, discrete
//! harmonic functions and walk-dimension estimates.

pub mod census;
pub mod cli;
pub mod counterexample;
pub mod dirichlet;
pub mod error;
pub mod graph;
pub mod output;
pub mod scaling;
pub mod spec;
pub mod symmetry;
pub mod validate;
pub mod word;

pub use error::{Error, Result};
pub use spec::CarpetSpec;
