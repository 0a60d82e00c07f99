//! Exact computation of return sets `{n : n·g ∈ V(K)}` for translations on
//! products of algebraic tori and supersingular elliptic curves over
//! function fields of characteristic `p`.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`] — prime fields `F_p`, extension fields `F_{p^k}` with
//!   deterministic moduli, square roots, subfield embeddings.
//! - [`poly`] — sparse polynomials in `t` with arbitrary-precision
//!   exponents over `F_{p^k}`.
//! - [`ratfunc`] — rational functions without normalization; equality by
//!   cross-multiplication with a Monte Carlo fallback.
//! - [`specialize`] — the evaluation homomorphisms `t ↦ θ` into finite
//!   fields, used for probabilistic identity testing.
//! - [`tower`] — multi-quadratic extensions of `F_{p^k}(t)` for curve
//!   ordinates `√(x³+Ax+B)`.
//! - [`curve`] — constant elliptic curves over `F_p`, the chord–tangent
//!   law, Frobenius, scalar multiplication routed through `F² = [−p]` on
//!   supersingular curves, division polynomials, torsion counts.
//! - [`ambient`] — products of tori and curves, and the orbit map `n·g`.
//! - [`variety`] — polynomial equation systems (including Segre
//!   coordinates on products of curves), membership verdicts, and sum-set
//!   witness checking.
//! - [`setalg`] — the calculus of exponential-sum sets `S_{q,d,r}`,
//!   arithmetic progressions, windows, classification, and the
//!   two-exponential solution-set solver.
//! - [`cosets`] — good subgroups of `ℤ^d` cut out by the four requirement
//!   types, canonical generator form, and coset intersection.
//! - [`fset`] — finitely generated abelian groups with a Frobenius
//!   endomorphism: linear-recurrence coordinates, index-set
//!   decompositions, closed forms and coefficient fitting.
//! - [`scan`] — orbit scans over configured ambient groups and the named
//!   verification routines.
//! - [`io`] — the group/point and variety text formats, CSV and JSON
//!   reports.
//! - [`cli`] — argument parsing and dispatch for the `retset` binary.
//!
//! Most capabilities have a runnable demonstration under `examples/`.

#[cfg(test)]
pub(crate) fn testrng(seed: u64) -> rand::rngs::StdRng {
    use rand::SeedableRng;
    rand::rngs::StdRng::seed_from_u64(seed)
}

pub mod ambient;
pub mod cli;
pub mod cosets;
pub mod curve;
pub mod field;
pub mod fset;
pub mod io;
pub mod poly;
pub mod ratfunc;
pub mod scan;
pub mod setalg;
pub mod specialize;
pub mod textexpr;
pub mod tower;
pub mod variety;
