pub mod error;
pub mod symcore;

pub use error::{Error, Result};
pub mod operators;
pub mod inequalities;
pub mod polyalgebra;
pub mod rng;
pub mod counterexamples;
pub mod cli;
