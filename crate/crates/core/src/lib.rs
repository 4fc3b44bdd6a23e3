//! Semantics and proof theory for discussive logics.
//!
//! - [`formula`]: syntax, parser and printer for the supported languages.
//! - [`matrix`]: finite many-valued matrices and enumeration-based consequence.
//! - [`kripke`]: discussive Kripke models and Routley star models.
//! - [`hilbert`]: axiom systems, derivation checking and the deduction theorem.
//! - [`harness`]: seeded formula generation and semantic cross-checks.

pub mod formula;
pub mod harness;
pub mod hilbert;
pub mod kripke;
pub mod matrix;

pub use formula::{parse, parse_schema, Connective, Formula, Language, ParseError};
pub use matrix::{
    entails_matrix, eval, lookup_matrix, tautology, Matrix, MatrixId, MatrixVerdict, TruthValue, Valuation,
};
