//! Exact arithmetic in the free graded algebra over Z[mu, mu^-1].

mod coeff;
mod dga;
mod element;
mod fp;
mod generator;
mod laurent;

pub use coeff::Coeff;
pub use dga::{make_generator, Dga, Sign, Variant};
pub use element::{ElemDegree, Element, Word};
pub use fp::Fp;
pub use generator::{Gen, Kind, Label, Ns};
pub use laurent::LaurentInt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("{0} is not a unit of Z[mu, mu^-1]")]
    NotAUnit(String),
    #[error("{kind} takes {expected} indices, got {got}")]
    Arity { kind: &'static str, expected: usize, got: usize },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("a11(s{0},s{0}) is the scalar 1+mu, not a generator")]
    DiagonalA11(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
}

/// Algebra over the integer Laurent ring.
pub type ZDga = Dga<LaurentInt>;
/// Elements over the integer Laurent ring.
pub type ZElement = Element<LaurentInt>;
