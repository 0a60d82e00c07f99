//! Solution sets of `c₁·q^{n₁} + c₂·q^{n₂} = e₀ + Σ e_i·q^{m_i}`
//! (existential over the `m_i`), decomposed into the five tail shapes:
//! a point, a row tail, a column tail, a diagonal tail, or a full
//! quadrant.
//!
//! The inner existential is decided exactly by base-`q` digit peeling
//! with memoization. The decomposition itself is fitted on the window
//! `[0, N]²` and then re-checked on `[0, 2N]²`; the output is always
//! flagged window-certified, never proved.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoExpError {
    BadInput(String),
    /// The window solution set is not a union of the five shapes that
    /// stays consistent on the doubled window.
    NoConsistentFit { window: u64 },
}

impl fmt::Display for TwoExpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoExpError::BadInput(s) => write!(f, "bad input: {}", s),
            TwoExpError::NoConsistentFit { window } => {
                write!(f, "no consistent decomposition on window [0,{}]²", window)
            }
        }
    }
}

impl std::error::Error for TwoExpError {}

/// One of the five solution-set shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoExpComponent {
    /// `{(n1, n2)}`
    Singleton { n1: u64, n2: u64 },
    /// `{(n1 + n, n2) : n ∈ ℕ}`
    RowTail { n1: u64, n2: u64 },
    /// `{(n1, n2 + n) : n ∈ ℕ}`
    ColTail { n1: u64, n2: u64 },
    /// `{(n1 + n, n2 + n) : n ∈ ℕ}`
    DiagTail { n1: u64, n2: u64 },
    /// `{(n1 + a, n2 + b) : a, b ∈ ℕ}`
    Quadrant { n1: u64, n2: u64 },
}

impl TwoExpComponent {
    pub fn member(&self, x: u64, y: u64) -> bool {
        match *self {
            TwoExpComponent::Singleton { n1, n2 } => x == n1 && y == n2,
            TwoExpComponent::RowTail { n1, n2 } => x >= n1 && y == n2,
            TwoExpComponent::ColTail { n1, n2 } => x == n1 && y >= n2,
            TwoExpComponent::DiagTail { n1, n2 } => {
                x >= n1 && y >= n2 && x - n1 == y - n2
            }
            TwoExpComponent::Quadrant { n1, n2 } => x >= n1 && y >= n2,
        }
    }
}

impl fmt::Display for TwoExpComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TwoExpComponent::Singleton { n1, n2 } => write!(f, "point ({},{})", n1, n2),
            TwoExpComponent::RowTail { n1, n2 } => write!(f, "row ({}+n,{})", n1, n2),
            TwoExpComponent::ColTail { n1, n2 } => write!(f, "col ({},{}+n)", n1, n2),
            TwoExpComponent::DiagTail { n1, n2 } => write!(f, "diag ({}+n,{}+n)", n1, n2),
            TwoExpComponent::Quadrant { n1, n2 } => write!(f, "quadrant ({}+a,{}+b)", n1, n2),
        }
    }
}

/// The equation data.
#[derive(Clone, Debug)]
pub struct TwoExpProblem {
    pub c1: BigRational,
    pub c2: BigRational,
    pub e0: BigRational,
    pub e: Vec<BigRational>,
    pub q: BigUint,
}

/// A window-certified decomposition.
#[derive(Clone, Debug)]
pub struct TwoExpDecomposition {
    pub components: Vec<TwoExpComponent>,
    pub fitted_window: u64,
    pub certified_window: u64,
}

impl TwoExpDecomposition {
    pub fn member(&self, x: u64, y: u64) -> bool {
        self.components.iter().any(|c| c.member(x, y))
    }
}

impl fmt::Display for TwoExpDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            write!(f, "empty")?;
        } else {
            for (i, c) in self.components.iter().enumerate() {
                if i > 0 {
                    write!(f, " ∪ ")?;
                }
                write!(f, "{}", c)?;
            }
        }
        write!(f, "  [window-certified on [0,{}]²]", self.certified_window)
    }
}

/// Decide `Σ items_i·q^{m_i} = t` with `m_i ∈ ℕ` by peeling base-`q`
/// digits: some subset of the items sits at exponent 0, the rest are a
/// multiple of `q`. Memoized on (target, remaining-item mask); a revisit
/// during exploration means an unproductive cycle.
fn exists_rep(target: &BigInt, items: &[BigInt], q: &BigInt) -> bool {
    fn rec(
        t: &BigInt,
        mask: u32,
        items: &[BigInt],
        q: &BigInt,
        memo: &mut HashMap<(BigInt, u32), Option<bool>>,
    ) -> bool {
        if mask == 0 {
            return t.is_zero();
        }
        match memo.get(&(t.clone(), mask)) {
            Some(Some(v)) => return *v,
            Some(None) => return false, // in progress: a cycle cannot help
            None => {}
        }
        memo.insert((t.clone(), mask), None);
        let mut result = false;
        // nonempty subsets at exponent zero
        let mut s = mask;
        while s != 0 {
            let mut t2 = t.clone();
            for (i, item) in items.iter().enumerate() {
                if s & (1 << i) != 0 {
                    t2 -= item;
                }
            }
            if s == mask {
                if t2.is_zero() {
                    result = true;
                }
            } else if (&t2 % q).is_zero() && rec(&(t2 / q), mask & !s, items, q, memo) {
                result = true;
            }
            if result {
                break;
            }
            s = (s - 1) & mask;
        }
        // empty subset: every remaining exponent is ≥ 1
        if !result && (t % q).is_zero() && rec(&(t / q), mask, items, q, memo) {
            result = true;
        }
        memo.insert((t.clone(), mask), Some(result));
        result
    }

    assert!(items.len() <= 16, "too many exponential terms");
    let mask = (1u32 << items.len()) - 1;
    let mut memo = HashMap::new();
    rec(target, if items.is_empty() { 0 } else { mask }, items, q, &mut memo)
}

/// The exact solution set on `[0, w]²`.
fn solution_window(prob: &TwoExpProblem, w: u64) -> Result<BTreeSet<(u64, u64)>, TwoExpError> {
    if prob.q <= BigUint::one() {
        return Err(TwoExpError::BadInput("q must exceed 1".into()));
    }
    // clear denominators
    let mut den = prob.c1.denom().clone();
    den = den.lcm(prob.c2.denom());
    den = den.lcm(prob.e0.denom());
    for e in &prob.e {
        den = den.lcm(e.denom());
    }
    let scale = BigRational::from_integer(den);
    let c1 = (&prob.c1 * &scale).to_integer();
    let c2 = (&prob.c2 * &scale).to_integer();
    let e0 = (&prob.e0 * &scale).to_integer();
    let items: Vec<BigInt> = prob
        .e
        .iter()
        .map(|e| (e * &scale).to_integer())
        .filter(|v| !v.is_zero())
        .collect();
    let q = BigInt::from(prob.q.clone());
    // q-powers table
    let mut qpow = Vec::with_capacity(w as usize + 1);
    qpow.push(BigInt::one());
    for i in 1..=w as usize {
        let next = &qpow[i - 1] * &q;
        qpow.push(next);
    }
    let mut sol = BTreeSet::new();
    for n1 in 0..=w {
        for n2 in 0..=w {
            let target = &c1 * &qpow[n1 as usize] + &c2 * &qpow[n2 as usize] - &e0;
            if exists_rep(&target, &items, &q) {
                sol.insert((n1, n2));
            }
        }
    }
    Ok(sol)
}

/// Fit the window set to the five shapes; `None` when the greedy cover
/// disagrees with the set on its own window.
fn fit(sol: &BTreeSet<(u64, u64)>, w: u64) -> Option<Vec<TwoExpComponent>> {
    let mut comps: Vec<TwoExpComponent> = Vec::new();
    let covered = |comps: &[TwoExpComponent], x: u64, y: u64| comps.iter().any(|c| c.member(x, y));
    // quadrants first (minimal corners in lexicographic order)
    for &(a, b) in sol.iter() {
        if covered(&comps, a, b) {
            continue;
        }
        let full = (a..=w).all(|x| (b..=w).all(|y| sol.contains(&(x, y))));
        if full && (w > a) && (w > b) {
            comps.push(TwoExpComponent::Quadrant { n1: a, n2: b });
        }
    }
    // diagonal tails: runs reaching the window boundary
    for &(a, b) in sol.iter() {
        if covered(&comps, a, b) {
            continue;
        }
        let is_start = a == 0 || b == 0 || !sol.contains(&(a - 1, b - 1));
        if !is_start {
            continue;
        }
        let mut k = 0;
        while a + k <= w && b + k <= w && sol.contains(&(a + k, b + k)) {
            k += 1;
        }
        let reaches = a + k > w || b + k > w;
        if reaches && k >= 2 {
            comps.push(TwoExpComponent::DiagTail { n1: a, n2: b });
        }
    }
    // row tails: a full suffix of a row
    for b in 0..=w {
        let mut a = w + 1;
        while a > 0 && sol.contains(&(a - 1, b)) {
            a -= 1;
        }
        if a <= w && w - a >= 1 && (a..=w).any(|x| !covered(&comps, x, b)) {
            comps.push(TwoExpComponent::RowTail { n1: a, n2: b });
        }
    }
    // column tails
    for a in 0..=w {
        let mut b = w + 1;
        while b > 0 && sol.contains(&(a, b - 1)) {
            b -= 1;
        }
        if b <= w && w - b >= 1 && (b..=w).any(|y| !covered(&comps, a, y)) {
            comps.push(TwoExpComponent::ColTail { n1: a, n2: b });
        }
    }
    // leftovers become points
    for &(a, b) in sol.iter() {
        if !covered(&comps, a, b) {
            comps.push(TwoExpComponent::Singleton { n1: a, n2: b });
        }
    }
    // sanity: the fit must reproduce the window set exactly
    for x in 0..=w {
        for y in 0..=w {
            if covered(&comps, x, y) != sol.contains(&(x, y)) {
                return None;
            }
        }
    }
    Some(comps)
}

/// Fit on `[0, N]²`, re-check on `[0, 2N]²`, report failures rather than
/// guessing.
pub fn two_exponential_decompose(
    prob: &TwoExpProblem,
    window: u64,
) -> Result<TwoExpDecomposition, TwoExpError> {
    if window < 2 {
        return Err(TwoExpError::BadInput("window must be at least 2".into()));
    }
    let sol = solution_window(prob, window)?;
    let comps = fit(&sol, window).ok_or(TwoExpError::NoConsistentFit { window })?;
    // certify on the doubled window
    let big = solution_window(prob, 2 * window)?;
    for x in 0..=2 * window {
        for y in 0..=2 * window {
            let fitted = comps.iter().any(|c| c.member(x, y));
            if fitted != big.contains(&(x, y)) {
                return Err(TwoExpError::NoConsistentFit { window });
            }
        }
    }
    Ok(TwoExpDecomposition {
        components: comps,
        fitted_window: window,
        certified_window: 2 * window,
    })
}
