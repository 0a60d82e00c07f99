//! The calculus of return-set expressions: exponential-sum terms,
//! arithmetic progressions, windows, closure operations, classification,
//! and the two-exponential solution-set solver.

mod expr;
mod parse;
mod pset;
mod twoexp;

pub use expr::{
    compare_windows, ATerm, BTerm, DiffReport, Domain, SetClass, SetExpr, Term,
};
pub use parse::parse_set_expr;
pub use pset::{PSetTerm, SetError, Verdict};

/// Whether `q` is a positive power `p^e`, `e ≥ 1`.
pub fn is_prime_power_of(q: &num_bigint::BigUint, p: u64) -> bool {
    pset::is_power_of(q, p)
}
pub use twoexp::{
    two_exponential_decompose, TwoExpComponent, TwoExpDecomposition, TwoExpError, TwoExpProblem,
};
