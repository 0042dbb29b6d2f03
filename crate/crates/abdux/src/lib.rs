//! Abductive logic programming over stratified normal programs with
//! integrity constraints, a degree-of-arbitrariness measure on
//! explanations, constrained-explanation checking and search, and
//! SAT/QBF reduction generators used as executable correctness oracles.
//!
//! The main entry points:
//!
//! - [`parser`] reads theory, observation and explanation files plus
//!   DIMACS/QDIMACS inputs.
//! - [`semantics`] grounds programs, classifies them and computes
//!   stable models.
//! - [`abduction`] checks the four agreement notions and whether a
//!   pair (E, F) explains an observation.
//! - [`arbitrariness`] computes degrees of arbitrariness and decides
//!   constrainedness.
//! - [`search`] enumerates explanations, finds constrained ones, and
//!   applies the minimality filters and arbitrariness ranking.
//! - [`reductions`] turns CNF/QBF instances into abduction problems
//!   with known contracts, plus brute-force SAT/QBF oracles.

pub mod abduction;
pub mod arbitrariness;
pub mod cnf;
pub mod core;
pub mod parser;
pub mod reductions;
pub mod search;
pub mod semantics;

pub use crate::abduction::{AgreementOptions, AgreementType};
pub use crate::core::{
    AbductiveTheory, Atom, Constant, Explanation, GroundAtom, IntegrityConstraint, Observation,
    Occurrence, Predicate, Rule, Term, Variable,
};
pub use crate::semantics::HerbrandModel;
