//! Differential graded algebras of surface-knot diagrams.

pub mod dga_core;
pub mod diagram;
pub mod differential;
pub mod moves;
pub mod invariants;
pub mod cli;
