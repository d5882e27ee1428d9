//! Exact computations with Saito-Kurokawa lifts and genus-2 Siegel modular forms.

pub mod arith;
pub mod characters;
pub mod coeffring;
pub mod error;
pub mod jacobi;
pub mod lfun;
pub mod linalg;
pub mod qseries;
pub mod records;
pub mod siegel;
pub mod siegel2;
pub mod sklift;

pub use coeffring::{ord, rational_reconstruct, split_prime, PrimeIdeal, QuadElement, Valuation};
pub use error::{Error, Result};
pub use rug::{Float, Integer, Rational};
