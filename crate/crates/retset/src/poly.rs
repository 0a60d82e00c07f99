//! Sparse polynomials in `t` over `F_{p^k}` with arbitrary-precision
//! exponents.
//!
//! Exponents are `BigUint` because the orbit computations routinely meet
//! terms like `t^{p^{4n}}`. The representation is always sparse: a map
//! from exponent to nonzero coefficient. Dense materialization is never
//! performed, and any operation whose result would exceed
//! [`MAX_TERMS`] panics with a [`ResourceLimit`] payload that the CLI
//! layer converts into a resource-exhaustion exit code.

use crate::field::{Fq, FqElem};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Hard cap on stored terms per polynomial.
pub const MAX_TERMS: usize = 1_000_000;

/// Panic payload for arithmetic that would blow past [`MAX_TERMS`].
#[derive(Debug, Clone)]
pub struct ResourceLimit(pub String);

pub(crate) fn resource_guard(estimated: usize, what: &str) {
    if estimated > MAX_TERMS {
        std::panic::panic_any(ResourceLimit(format!(
            "{}: estimated {} terms exceeds cap {}",
            what, estimated, MAX_TERMS
        )));
    }
}

/// Run a closure, converting a [`ResourceLimit`] panic into an error.
pub fn catch_resource_limit<T>(
    f: impl FnOnce() -> T + std::panic::UnwindSafe,
) -> Result<T, String> {
    match std::panic::catch_unwind(f) {
        Ok(v) => Ok(v),
        Err(payload) => match payload.downcast::<ResourceLimit>() {
            Ok(r) => Err(r.0),
            Err(other) => std::panic::resume_unwind(other),
        },
    }
}

/// A sparse polynomial in one variable over `F_{p^k}`.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: Fq,
    terms: BTreeMap<BigUint, FqElem>,
}

impl SparsePoly {
    pub fn zero(field: &Fq) -> Self {
        SparsePoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: FqElem) -> Self {
        let field = c.field().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(BigUint::zero(), c);
        }
        SparsePoly { field, terms }
    }

    pub fn one(field: &Fq) -> Self {
        SparsePoly::constant(field.one())
    }

    /// The variable `t`.
    pub fn var(field: &Fq) -> Self {
        SparsePoly::monomial(field.one(), BigUint::one())
    }

    pub fn monomial(c: FqElem, e: BigUint) -> Self {
        let field = c.field().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        SparsePoly { field, terms }
    }

    pub fn from_terms(field: &Fq, list: impl IntoIterator<Item = (BigUint, FqElem)>) -> Self {
        let mut out = SparsePoly::zero(field);
        for (e, c) in list {
            out.add_term(&e, &c);
        }
        out
    }

    /// Convenience: dense little-endian integer coefficients.
    pub fn from_int_coeffs(field: &Fq, coeffs: &[i64]) -> Self {
        SparsePoly::from_terms(
            field,
            coeffs.iter().enumerate().map(|(i, &c)| (BigUint::from(i), field.from_i64(c))),
        )
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &FqElem)> {
        self.terms.iter()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.keys().next_back()
    }

    pub fn coeff(&self, e: &BigUint) -> FqElem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_coeff(&self) -> Option<&FqElem> {
        self.terms.values().next_back()
    }

    pub fn constant_term(&self) -> FqElem {
        self.coeff(&BigUint::zero())
    }

    fn add_term(&mut self, e: &BigUint, c: &FqElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(e) {
            Some(cur) => {
                let s = cur.add(c);
                if s.is_zero() {
                    self.terms.remove(e);
                } else {
                    *cur = s;
                }
            }
            None => {
                resource_guard(self.terms.len() + 1, "sparse polynomial");
                self.terms.insert(e.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        assert!(self.field == other.field, "mixed coefficient fields");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &FqElem) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(&self.field);
        }
        SparsePoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter_map(|(e, v)| {
                    let w = v.mul(c);
                    if w.is_zero() {
                        None
                    } else {
                        Some((e.clone(), w))
                    }
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        assert!(self.field == other.field, "mixed coefficient fields");
        resource_guard(
            self.terms.len().saturating_mul(other.terms.len()),
            "sparse polynomial product",
        );
        let mut out = SparsePoly::zero(&self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let c = c1.mul(c2);
                if !c.is_zero() {
                    out.add_term(&(e1 + e2), &c);
                }
            }
        }
        out
    }

    /// Shift all exponents up by `e` (multiplication by `t^e`).
    pub fn shift(&self, e: &BigUint) -> SparsePoly {
        SparsePoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// `f^{p^e}`: each term `c·t^m` maps to `c^{p^e}·t^{m·p^e}`. Over the
    /// prime field the coefficients are fixed; over `F_{p^k}` they pick up
    /// the field Frobenius.
    pub fn frob_pow(&self, e: u64) -> SparsePoly {
        if e == 0 {
            return self.clone();
        }
        let pe = BigUint::from(self.field.p()).pow(u32::try_from(e).expect("Frobenius exponent too large"));
        SparsePoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, c)| (k * &pe, c.frobenius(e))).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> SparsePoly {
        self.pow_big(&BigUint::from(e))
    }

    /// `f^n` by base-`p` digits of `n`:
    /// `f^n = ∏_i (f^{p^i})^{d_i}`, each factor a termwise Frobenius power.
    /// In characteristic `p` this keeps intermediate results as sparse as
    /// the final answer.
    pub fn pow_big(&self, n: &BigUint) -> SparsePoly {
        if n.is_zero() {
            return SparsePoly::one(&self.field);
        }
        if self.is_zero() {
            return SparsePoly::zero(&self.field);
        }
        let p = BigUint::from(self.field.p());
        let mut digits = Vec::new();
        let mut rest = n.clone();
        while !rest.is_zero() {
            digits.push((&rest % &p).to_u64().unwrap());
            rest /= &p;
        }
        let mut acc = SparsePoly::one(&self.field);
        for (i, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let base = self.frob_pow(i as u64);
            let mut power = base.clone();
            for _ in 1..d {
                power = power.mul(&base);
            }
            acc = acc.mul(&power);
        }
        acc
    }

    /// Evaluate at an element of the coefficient field. Exponents reduce
    /// modulo `q − 1` on units; zero evaluates to the constant term.
    pub fn eval(&self, x: &FqElem) -> FqElem {
        assert!(*x.field() == self.field);
        if x.is_zero() {
            return self.constant_term();
        }
        let qm1 = self.field.order() - BigUint::one();
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            acc = acc.add(&c.mul(&x.pow_big(&(e % &qm1))));
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor, for polynomials with
    /// machine-size degrees (the rational-function reducer and the
    /// division-polynomial ladder). `None` when degrees are out of range.
    pub fn div_rem(&self, divisor: &SparsePoly) -> Option<(SparsePoly, SparsePoly)> {
        assert!(self.field == divisor.field);
        let ddeg = divisor.degree()?.to_u64()?;
        if let Some(sdeg) = self.degree() {
            if sdeg.to_u64()? > 1 << 24 {
                return None;
            }
        }
        let lcinv = divisor.leading_coeff().unwrap().inv().ok()?;
        let mut rem = self.clone();
        let mut quo = SparsePoly::zero(&self.field);
        while let Some(rdeg) = rem.degree().cloned() {
            let rdeg_u = rdeg.to_u64()?;
            if rdeg_u < ddeg {
                break;
            }
            let shift = &rdeg - BigUint::from(ddeg);
            let coef = rem.leading_coeff().unwrap().mul(&lcinv);
            let mono = SparsePoly::monomial(coef, shift);
            quo = quo.add(&mono);
            rem = rem.sub(&mono.mul(divisor));
        }
        Some((quo, rem))
    }

    /// Monic gcd by Euclid; `None` when degrees are out of machine range.
    pub fn gcd(&self, other: &SparsePoly) -> Option<SparsePoly> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        if let Some(lc) = a.leading_coeff().cloned() {
            a = a.scale(&lc.inv().ok()?);
        }
        Some(a)
    }

    /// Map coefficients into another field through the given function.
    pub fn map_coeffs(&self, target: &Fq, f: impl Fn(&FqElem) -> FqElem) -> SparsePoly {
        SparsePoly::from_terms(target, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

impl fmt::Display for SparsePoly {
    /// `3*t^15625 + 2` (descending exponents); extension-field
    /// coefficients render as `[a0,...,ak-1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", exp_str(e))?;
            } else {
                write!(f, "{}*{}", c, exp_str(e))?;
            }
        }
        Ok(())
    }
}

fn exp_str(e: &BigUint) -> String {
    if e.is_one() {
        "t".to_string()
    } else {
        format!("t^{}", e)
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
