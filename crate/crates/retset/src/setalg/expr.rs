//! Finite unions of arithmetic progressions and exponential-sum terms,
//! with finite exception sets and an ℕ/ℤ domain tag.
//!
//! The ℕ domain is intersection semantics: membership additionally
//! requires `n ≥ 0`. "Equal up to a finite set" is realized by the
//! explicit `add{…}`/`del{…}` exception sets.

use super::pset::{PSetTerm, SetError, Verdict};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Int,
    Nat,
}

/// `{q1·q^{n1} + q2·q^{n2}}` with `q` a positive power of `p₀ = p²` and
/// `q1, q2` nonnegative powers of `p₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ATerm {
    pub p0: BigUint,
    pub q: BigUint,
    pub q1: BigUint,
    pub q2: BigUint,
}

/// `{c0 + c1·q^n}` with `q` a positive power of `p₀`, `c0 ∈ ℕ`, `c1 ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTerm {
    pub p0: BigUint,
    pub q: BigUint,
    pub c0: BigUint,
    pub c1: BigUint,
}

fn is_power_of_big(v: &BigUint, base: &BigUint, allow_one: bool) -> bool {
    if v.is_one() {
        return allow_one;
    }
    let mut x = v.clone();
    while x > BigUint::one() {
        if (&x % base) != BigUint::zero() {
            return false;
        }
        x /= base;
    }
    true
}

impl ATerm {
    pub fn new(p: u64, q: BigUint, q1: BigUint, q2: BigUint) -> Result<ATerm, SetError> {
        let p0 = BigUint::from(p) * BigUint::from(p);
        if !is_power_of_big(&q, &p0, false) {
            return Err(SetError::InvalidTerm(format!("q = {} is not a positive power of {}", q, p0)));
        }
        for v in [&q1, &q2] {
            if !is_power_of_big(v, &p0, true) {
                return Err(SetError::InvalidTerm(format!(
                    "coefficient {} is not a power of {}",
                    v, p0
                )));
            }
        }
        Ok(ATerm { p0, q, q1, q2 })
    }

    pub fn to_pset(&self, p: u64) -> PSetTerm {
        PSetTerm::new(
            p,
            self.q.clone(),
            BigRational::zero(),
            vec![
                vec![BigRational::from_integer(self.q1.clone().into())],
                vec![BigRational::from_integer(self.q2.clone().into())],
            ],
        )
        .expect("A-terms are valid exponential-sum terms")
    }
}

impl BTerm {
    pub fn new(p: u64, q: BigUint, c0: BigUint, c1: BigUint) -> Result<BTerm, SetError> {
        let p0 = BigUint::from(p) * BigUint::from(p);
        if !is_power_of_big(&q, &p0, false) {
            return Err(SetError::InvalidTerm(format!("q = {} is not a positive power of {}", q, p0)));
        }
        if c1.is_zero() {
            return Err(SetError::InvalidTerm("c1 must be positive".into()));
        }
        Ok(BTerm { p0, q, c0, c1 })
    }

    pub fn to_pset(&self, p: u64) -> PSetTerm {
        PSetTerm::new(
            p,
            self.q.clone(),
            BigRational::from_integer(self.c0.clone().into()),
            vec![vec![BigRational::from_integer(self.c1.clone().into())]],
        )
        .expect("B-terms are valid exponential-sum terms")
    }
}

/// One union member.
#[derive(Clone, Debug)]
pub enum Term {
    /// `{start + step·k : k ∈ ℤ}`; `step = 0` is the singleton `{start}`.
    Ap { start: BigInt, step: BigUint },
    PSet(PSetTerm),
    A(ATerm),
    B(BTerm),
}

impl Term {
    fn member(&self, p: u64, n: &BigInt, bound: u64) -> Verdict {
        match self {
            Term::Ap { start, step } => {
                let hit = if step.is_zero() {
                    n == start
                } else {
                    (n - start).mod_floor(&BigInt::from(step.clone())).is_zero()
                };
                if hit {
                    Verdict::Yes(Vec::new())
                } else {
                    Verdict::NoCertified
                }
            }
            Term::PSet(t) => t.member(n, bound),
            Term::A(t) => t.to_pset(p).member(n, bound),
            Term::B(t) => t.to_pset(p).member(n, bound),
        }
    }

    fn window(&self, p: u64, n_max: &BigInt) -> Result<Vec<BigInt>, SetError> {
        match self {
            Term::Ap { start, step } => {
                if n_max.is_negative() {
                    return Ok(Vec::new());
                }
                if step.is_zero() {
                    return Ok(if !start.is_negative() && start <= n_max {
                        vec![start.clone()]
                    } else {
                        Vec::new()
                    });
                }
                let stepi = BigInt::from(step.clone());
                let first = start.mod_floor(&stepi);
                let mut out = Vec::new();
                let mut v = first;
                while &v <= n_max {
                    out.push(v.clone());
                    v += &stepi;
                }
                Ok(out)
            }
            Term::PSet(t) => t.window(n_max),
            Term::A(t) => t.to_pset(p).window(n_max),
            Term::B(t) => t.to_pset(p).window(n_max),
        }
    }

    fn affine(&self, p: u64, a: &BigInt, b: &BigInt) -> Result<Term, SetError> {
        Ok(match self {
            Term::Ap { start, step } => Term::Ap {
                start: a * start + b,
                step: (a.magnitude() * step).clone(),
            },
            Term::PSet(t) => Term::PSet(t.affine(a, b)),
            Term::A(t) => Term::PSet(t.to_pset(p).affine(a, b)),
            Term::B(t) => Term::PSet(t.to_pset(p).affine(a, b)),
        })
    }

    fn is_normal_form(&self, p: u64) -> bool {
        match self {
            Term::Ap { .. } => true,
            Term::PSet(t) => t.is_normal_form(),
            Term::A(t) => t.to_pset(p).is_normal_form(),
            Term::B(t) => t.to_pset(p).is_normal_form(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Ap { start, step } => write!(f, "AP({},{})", start, step),
            Term::PSet(t) => write!(f, "{}", t),
            Term::A(t) => write!(f, "A({};{},{})", t.q, t.q1, t.q2),
            Term::B(t) => write!(f, "B({};{},{})", t.q, t.c0, t.c1),
        }
    }
}

/// Classification of a set expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetClass {
    /// Every term has depth 0 with divisibility-constrained coefficients.
    PNormal,
    /// Valid, but some term genuinely needs doubled exponents.
    WidelyPNormalOnly,
}

impl fmt::Display for SetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetClass::PNormal => write!(f, "p-normal"),
            SetClass::WidelyPNormalOnly => write!(f, "widely-p-normal-only"),
        }
    }
}

/// A finite union of terms, with exceptions, over ℤ or ℕ.
#[derive(Clone, Debug)]
pub struct SetExpr {
    p: u64,
    domain: Domain,
    terms: Vec<Term>,
    added: BTreeSet<BigInt>,
    removed: BTreeSet<BigInt>,
}

impl SetExpr {
    pub fn new(p: u64, domain: Domain, terms: Vec<Term>) -> SetExpr {
        SetExpr { p, domain, terms, added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn with_exceptions(
        mut self,
        added: BTreeSet<BigInt>,
        removed: BTreeSet<BigInt>,
    ) -> Result<SetExpr, SetError> {
        if added.intersection(&removed).next().is_some() {
            return Err(SetError::InvalidTerm("add/del exception sets must be disjoint".into()));
        }
        self.added = added;
        self.removed = removed;
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Union: concatenation of term lists; exceptions merge with removals
    /// cancelling against the other side's members only through windows,
    /// so they are kept verbatim (removals survive only where both agree).
    pub fn union(&self, other: &SetExpr) -> Result<SetExpr, SetError> {
        if self.p != other.p {
            return Err(SetError::InvalidTerm("mixed session primes".into()));
        }
        if self.domain != other.domain {
            return Err(SetError::DomainViolation("union of ℤ- and ℕ-tagged expressions".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let added: BTreeSet<BigInt> = self.added.union(&other.added).cloned().collect();
        // a removal survives the union only if removed on both sides and
        // not explicitly added on either
        let removed: BTreeSet<BigInt> = self
            .removed
            .intersection(&other.removed)
            .filter(|n| !added.contains(*n))
            .cloned()
            .collect();
        SetExpr::new(self.p, self.domain, terms).with_exceptions(added, removed)
    }

    /// `a·S + b` by term-level rewriting. On ℕ-tagged expressions the
    /// scalars must be nonnegative.
    pub fn affine(&self, a: &BigInt, b: &BigInt) -> Result<SetExpr, SetError> {
        if self.domain == Domain::Nat && (a.is_negative() || b.is_negative()) {
            return Err(SetError::DomainViolation(
                "affine scalars must be nonnegative on an ℕ-tagged expression".into(),
            ));
        }
        if a.is_zero() {
            // degenerate: the whole set collapses to {b}
            return Ok(SetExpr::new(
                self.p,
                self.domain,
                vec![Term::Ap { start: b.clone(), step: BigUint::zero() }],
            ));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| t.affine(self.p, a, b))
            .collect::<Result<Vec<_>, _>>()?;
        let added = self.added.iter().map(|n| a * n + b).collect();
        let removed = self.removed.iter().map(|n| a * n + b).collect();
        SetExpr::new(self.p, self.domain, terms).with_exceptions(added, removed)
    }

    /// Tag with the ℕ domain: membership additionally requires `n ≥ 0`.
    pub fn intersect_nat(&self) -> SetExpr {
        let mut out = self.clone();
        out.domain = Domain::Nat;
        out
    }

    pub fn member(&self, n: &BigInt, bound: u64) -> Verdict {
        if self.domain == Domain::Nat && n.is_negative() {
            return Verdict::NoCertified;
        }
        if self.removed.contains(n) {
            return Verdict::NoCertified;
        }
        if self.added.contains(n) {
            return Verdict::Yes(Vec::new());
        }
        let mut unknown = None;
        for t in &self.terms {
            match t.member(self.p, n, bound) {
                Verdict::Yes(w) => return Verdict::Yes(w),
                Verdict::NoCertified => {}
                Verdict::Unknown { searched } => unknown = Some(searched),
            }
        }
        match unknown {
            Some(searched) => Verdict::Unknown { searched },
            None => Verdict::NoCertified,
        }
    }

    /// Exactly the elements in `[0, N]`; fails loudly when a term lacks a
    /// completeness certificate — by probing every candidate when the
    /// window is small (naming the first undecided element), and with a
    /// certificate error otherwise.
    pub fn window(&self, n_max: &BigInt) -> Result<Vec<BigInt>, SetError> {
        let mut out = BTreeSet::new();
        for t in &self.terms {
            match t.window(self.p, n_max) {
                Ok(w) => out.extend(w),
                Err(SetError::WindowUncertified) if *n_max <= BigInt::from(4096) => {
                    // probe elementwise; any unknown is reported by value
                    let mut n = BigInt::zero();
                    while &n <= n_max {
                        match t.member(self.p, &n, 24) {
                            Verdict::Yes(_) => {
                                out.insert(n.clone());
                            }
                            Verdict::NoCertified => {}
                            Verdict::Unknown { .. } => {
                                return Err(SetError::Undecided(n));
                            }
                        }
                        n += 1;
                    }
                }
                Err(e) => return Err(e),
            }
        }
        for n in &self.added {
            if !n.is_negative() && n <= n_max {
                out.insert(n.clone());
            }
        }
        for n in &self.removed {
            out.remove(n);
        }
        Ok(out.into_iter().collect())
    }

    /// p-normal iff every exponential term has depth 0 and satisfies the
    /// divisibility constraint; arithmetic progressions always qualify.
    pub fn classify(&self) -> SetClass {
        if self.terms.iter().all(|t| t.is_normal_form(self.p)) {
            SetClass::PNormal
        } else {
            SetClass::WidelyPNormalOnly
        }
    }
}

/// The symmetric-difference report of [`compare_windows`].
#[derive(Clone, Debug)]
pub struct DiffReport {
    /// Elements in exactly one of the two sets, within `[w0, w1]`.
    pub differences: Vec<BigInt>,
    /// All differences lie strictly below the caller's threshold.
    pub consistent_up_to_finite: bool,
}

/// List the symmetric difference of two expressions on `[w0, w1]` and
/// judge "equal up to a finite set" against a threshold. Never a proof:
/// the verdict is only about the inspected window.
pub fn compare_windows(
    e1: &SetExpr,
    e2: &SetExpr,
    w0: &BigInt,
    w1: &BigInt,
    threshold: &BigInt,
) -> Result<DiffReport, SetError> {
    assert!(w0 < w1);
    let a: BTreeSet<BigInt> = e1.window(w1)?.into_iter().filter(|n| n >= w0).collect();
    let b: BTreeSet<BigInt> = e2.window(w1)?.into_iter().filter(|n| n >= w0).collect();
    let differences: Vec<BigInt> = a.symmetric_difference(&b).cloned().collect();
    let consistent_up_to_finite = differences.iter().all(|n| n < threshold);
    Ok(DiffReport { differences, consistent_up_to_finite })
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "{{}}")?;
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t)?;
        }
        if !self.added.is_empty() {
            let items: Vec<String> = self.added.iter().map(|n| n.to_string()).collect();
            write!(f, " add{{{}}}", items.join(","))?;
        }
        if !self.removed.is_empty() {
            let items: Vec<String> = self.removed.iter().map(|n| n.to_string()).collect();
            write!(f, " del{{{}}}", items.join(","))?;
        }
        if self.domain == Domain::Nat {
            write!(f, " in N")?;
        }
        Ok(())
    }
}
