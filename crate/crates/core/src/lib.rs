//! Agent-knowledge logic: a two-dimensional hybrid modal logic over agents
//! and epistemic states.
//!
//! The crate provides a parser and printer for formulas, a model checker,
//! a terminating tableau prover with countermodel extraction, the embedding
//! of multi-agent epistemic logic, and a brute-force bounded model search
//! used to cross-check the prover.

pub mod embedding;
pub mod extraction;
pub mod gen;
pub mod oracle;
pub mod relation;
pub mod semantics;
pub mod syntax;
pub mod tableau;

pub use syntax::{parse, Atom, Formula, ParseError, Sort};
