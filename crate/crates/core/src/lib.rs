//! A lazy DPLL(T) solver for quantifier-free integer difference logic.
//!
//! Scripts in the QF_IDL subset of SMT-LIB v2 are parsed, normalized into
//! difference atoms `x - y <= c`, Tseitin-encoded, and solved by a CDCL SAT
//! core coupled to a theory that keeps all-pairs shortest paths of the
//! constraint graph up to date incrementally.

pub mod cli;
pub mod engine;
pub mod lit;
pub mod normalize;
pub mod sat;
pub mod smtlib;
pub mod testkit;
pub mod theory;

/// Path sums of up to 2^62-bounded constants over any realistic number of
/// vertices fit in 128 bits, so the solver runs the theory at `i128`.
pub type IdlWeight = i128;
pub type IdlTheory = theory::DiffTheory<IdlWeight>;
pub type IdlMatrix = theory::ApspMatrix<IdlWeight>;
pub type IdlModel = theory::IdlModel<IdlWeight>;
