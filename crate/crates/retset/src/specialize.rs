//! Specialization homomorphisms `t ↦ θ` from the function field into a
//! finite field `F_{p^k}`.
//!
//! These power the Monte Carlo identity tests: a rational-function
//! identity that is false fails at a random θ with probability at least
//! `1 − D/q` where `D` bounds the degrees involved and `q = p^k`.
//! Coefficients living in a subfield are carried along by a
//! deterministic embedding.

use crate::field::{Embedding, Fq, FqElem};
use crate::poly::SparsePoly;
use crate::ratfunc::RatFunc;
use num_bigint::BigUint;
use num_traits::One;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    /// A denominator (or other required nonzero quantity) vanished at θ.
    BadSpecialization,
    /// Coefficients do not embed into the target field.
    NoEmbedding,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::BadSpecialization => write!(f, "denominator vanishes at this specialization"),
            SpecError::NoEmbedding => write!(f, "coefficient field does not embed into the target"),
        }
    }
}

impl std::error::Error for SpecError {}

/// A point `θ ∈ F_{p^k}` together with the embedding of the coefficient
/// field into the target.
#[derive(Clone)]
pub struct Specialization {
    target: Fq,
    coeff: Fq,
    theta: FqElem,
    embedding: Embedding,
}

impl Specialization {
    pub fn new(target: &Fq, coeff: &Fq, theta: FqElem) -> Result<Self, SpecError> {
        let embedding = target.embedding(coeff).map_err(|_| SpecError::NoEmbedding)?;
        assert!(*theta.field() == *target);
        Ok(Specialization { target: target.clone(), coeff: coeff.clone(), theta, embedding })
    }

    /// A uniformly random θ. Panics only if the coefficient field does not
    /// embed; callers pick compatible degrees.
    pub fn random<R: rand::Rng + ?Sized>(target: &Fq, coeff: &Fq, rng: &mut R) -> Self {
        let theta = target.random(rng);
        Specialization::new(target, coeff, theta).expect("incompatible coefficient field")
    }

    pub fn theta(&self) -> &FqElem {
        &self.theta
    }

    pub fn target(&self) -> &Fq {
        &self.target
    }

    pub fn embed(&self, c: &FqElem) -> FqElem {
        self.embedding.apply(&self.target, c)
    }

    /// Evaluate a polynomial at θ, embedding its coefficients.
    pub fn eval_poly(&self, f: &SparsePoly) -> FqElem {
        assert!(*f.field() == self.coeff, "polynomial over unexpected coefficient field");
        if self.theta.is_zero() {
            return self.embed(&f.constant_term());
        }
        let qm1 = self.target.order() - BigUint::one();
        let mut acc = self.target.zero();
        for (e, c) in f.terms() {
            let power = self.theta.pow_big(&(e % &qm1));
            acc = acc.add(&self.embed(c).mul(&power));
        }
        acc
    }

    /// Evaluate a rational function at θ; errors when the denominator
    /// vanishes there (callers retry with a fresh θ).
    pub fn eval_ratfunc(&self, f: &RatFunc) -> Result<FqElem, SpecError> {
        let d = self.eval_poly(f.den());
        if d.is_zero() {
            return Err(SpecError::BadSpecialization);
        }
        Ok(self.eval_poly(f.num()).mul(&d.inv().unwrap()))
    }
}

impl fmt::Debug for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t ↦ {} in {:?}", self.theta, self.target)
    }
}
