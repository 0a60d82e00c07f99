//! The exponential-sum terms `S_{q,d,r}(c₀; c_{ij})`:
//! `{c₀ + Σ_{i=1..d} Σ_{j=0..r} c_{ij}·q^{2^j·n_i} | n_i ∈ ℕ}`.
//!
//! Membership is three-valued. A *certified* "no" is only claimed when a
//! sound growth bound proves every witness would lie inside the searched
//! region: available whenever each coordinate's largest-growth
//! coefficient is positive, and additionally for `d = 1` with a dominant
//! coefficient of either sign (absolute-value dominance). Everything
//! else is an honest `Unknown` carrying the searched bound.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetError {
    /// Term invariants failed (q not a power of p, denominator bound,
    /// non-integral values).
    InvalidTerm(String),
    /// A window element could not be decided; the offending value is listed.
    Undecided(BigInt),
    /// The window enumeration has no completeness certificate for this term.
    WindowUncertified,
    /// Domain violation (e.g. affine with negative data on an ℕ-tagged set).
    DomainViolation(String),
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::InvalidTerm(s) => write!(f, "invalid term: {}", s),
            SetError::Undecided(n) => write!(f, "undecided element {}", n),
            SetError::WindowUncertified => {
                write!(f, "window enumeration has no completeness certificate for this term")
            }
            SetError::DomainViolation(s) => write!(f, "domain violation: {}", s),
        }
    }
}

impl std::error::Error for SetError {}

/// Three-valued membership verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Witness tuple `(n_1, …, n_d)`.
    Yes(Vec<u64>),
    /// No witness exists anywhere (growth-certified).
    NoCertified,
    /// Nothing found up to the searched per-coordinate bound.
    Unknown { searched: u64 },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::NoCertified)
    }
}

/// `S_{q,d,r}(c₀; c_{ij})` for the session prime `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct PSetTerm {
    p: u64,
    q: BigUint,
    d: usize,
    r: usize,
    c0: BigRational,
    /// `c[i][j]`, `d` rows and `r+1` columns.
    c: Vec<Vec<BigRational>>,
}

impl PSetTerm {
    /// Validates: `q = p^e` with `e ≥ 1`; the denominator bound
    /// `(q^{2^j}−1)·∏_{s≠j}(q^{2^j}−q^{2^s})·c_{ij} ∈ ℤ`; and integrality
    /// of all values on the window `[0, 6]^d`.
    pub fn new(
        p: u64,
        q: BigUint,
        c0: BigRational,
        c: Vec<Vec<BigRational>>,
    ) -> Result<PSetTerm, SetError> {
        if q < BigUint::from(2u32) {
            return Err(SetError::InvalidTerm("q must be at least 2".into()));
        }
        if !is_power_of(&q, p) {
            return Err(SetError::InvalidTerm(format!("q = {} is not a power of p = {}", q, p)));
        }
        let d = c.len();
        if d == 0 {
            return Err(SetError::InvalidTerm("d must be positive".into()));
        }
        let cols = c[0].len();
        if cols == 0 || c.iter().any(|row| row.len() != cols) {
            return Err(SetError::InvalidTerm("ragged coefficient matrix".into()));
        }
        let r = cols - 1;
        let term = PSetTerm { p, q, d, r, c0, c };
        term.check_denominator_bound()?;
        term.check_window_integrality(6)?;
        Ok(term)
    }

    /// The geometric-series parametrization: integer `base` plus rows of
    /// integers `l[i][j]` giving `c_{ij} = l_{ij}/(q^{2^j}−1)` and
    /// `c₀ = base − Σ l_{ij}/(q^{2^j}−1)`. Every value
    /// `base + Σ l_{ij}(q^{2^j n_i}−1)/(q^{2^j}−1)` is an integer, so
    /// these terms are always valid.
    pub fn from_geometric(p: u64, q: BigUint, base: BigInt, l: Vec<Vec<BigInt>>) -> Result<PSetTerm, SetError> {
        let cols = l.first().map(|r| r.len()).unwrap_or(0);
        let mut c0 = BigRational::from_integer(base);
        let mut c = Vec::with_capacity(l.len());
        for row in &l {
            if row.len() != cols {
                return Err(SetError::InvalidTerm("ragged coefficient matrix".into()));
            }
            let mut crow = Vec::with_capacity(cols);
            for (j, lij) in row.iter().enumerate() {
                let denom = BigInt::from(pow_2j(&q, j)) - BigInt::one();
                let cij = BigRational::new(lij.clone(), denom);
                c0 -= &cij;
                crow.push(cij);
            }
            c.push(crow);
        }
        PSetTerm::new(p, q, c0, c)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn dims(&self) -> usize {
        self.d
    }

    pub fn depth(&self) -> usize {
        self.r
    }

    pub fn c0(&self) -> &BigRational {
        &self.c0
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigRational {
        &self.c[i][j]
    }

    fn check_denominator_bound(&self) -> Result<(), SetError> {
        for (i, row) in self.c.iter().enumerate() {
            for (j, cij) in row.iter().enumerate() {
                let qj = BigInt::from(pow_2j(&self.q, j));
                let mut factor = &qj - BigInt::one();
                for s in 0..=self.r {
                    if s != j {
                        factor *= &qj - BigInt::from(pow_2j(&self.q, s));
                    }
                }
                if !(cij * BigRational::from_integer(factor)).is_integer() {
                    return Err(SetError::InvalidTerm(format!(
                        "coefficient c[{}][{}] = {} violates the denominator bound",
                        i + 1,
                        j,
                        cij
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_window_integrality(&self, b: u64) -> Result<(), SetError> {
        let mut ns = vec![0u64; self.d];
        loop {
            let v = self.value(&ns);
            if !v.is_integer() {
                return Err(SetError::InvalidTerm(format!(
                    "value at {:?} is the non-integer {}",
                    ns, v
                )));
            }
            let mut i = 0;
            loop {
                if i == self.d {
                    return Ok(());
                }
                ns[i] += 1;
                if ns[i] <= b {
                    break;
                }
                ns[i] = 0;
                i += 1;
            }
        }
    }

    /// `c₀ + Σ_i Σ_j c_{ij}·q^{2^j·n_i}`.
    pub fn value(&self, ns: &[u64]) -> BigRational {
        assert_eq!(ns.len(), self.d);
        let mut acc = self.c0.clone();
        for (i, &ni) in ns.iter().enumerate() {
            acc += self.coord_value(i, ni);
        }
        acc
    }

    /// `f_i(v) = Σ_j c_{ij}·q^{2^j·v}`.
    fn coord_value(&self, i: usize, v: u64) -> BigRational {
        let mut acc = BigRational::zero();
        for (j, cij) in self.c[i].iter().enumerate() {
            if cij.is_zero() {
                continue;
            }
            let e = (1u64 << j) * v;
            acc += cij * BigRational::from_integer(BigInt::from(self.q.pow(
                u32::try_from(e).expect("exponent overflow"),
            )));
        }
        acc
    }

    /// Largest `j` with `c_{ij} ≠ 0`, or `None` for an inert coordinate.
    fn top_index(&self, i: usize) -> Option<usize> {
        (0..=self.r).rev().find(|&j| !self.c[i][j].is_zero())
    }

    /// Increment of the dominant term minus the absolute increments of
    /// the lower terms over one step at `v`; once this is ≥ 0 it stays so.
    fn step_dominance(&self, i: usize, v: u64) -> BigRational {
        let ri = match self.top_index(i) {
            Some(j) => j,
            None => return BigRational::zero(),
        };
        let q = &self.q;
        let pow = |j: usize, v: u64| {
            BigRational::from_integer(BigInt::from(q.pow(
                u32::try_from((1u64 << j) * v).expect("exponent overflow"),
            )))
        };
        let growth = |j: usize| BigRational::from_integer(BigInt::from(pow_2j(q, j)) - BigInt::one());
        let mut acc = self.c[i][ri].abs() * pow(ri, v) * growth(ri);
        for j in 0..ri {
            acc -= self.c[i][j].abs() * pow(j, v) * growth(j);
        }
        acc
    }

    /// Lower bound `|c_{i,r_i}|·q^{2^{r_i}v} − Σ_{j<r_i}|c_{ij}|·q^{2^j v}`
    /// on `|f_i(v)|`'s dominant-part excess.
    fn dominant_excess(&self, i: usize, v: u64) -> BigRational {
        let ri = match self.top_index(i) {
            Some(j) => j,
            None => return BigRational::zero(),
        };
        let q = &self.q;
        let pow = |j: usize, v: u64| {
            BigRational::from_integer(BigInt::from(q.pow(
                u32::try_from((1u64 << j) * v).expect("exponent overflow"),
            )))
        };
        let mut acc = self.c[i][ri].abs() * pow(ri, v);
        for j in 0..ri {
            acc -= self.c[i][j].abs() * pow(j, v);
        }
        acc
    }

    /// Certified minimum of `f_i` over `v ∈ [lo, ∞)`, when the dominant
    /// coefficient is positive: scans until the excess bound is both
    /// monotone and above the best seen.
    fn certified_tail_min(&self, i: usize, lo: u64) -> Option<BigRational> {
        let ri = self.top_index(i)?;
        if !self.c[i][ri].is_positive() {
            return None;
        }
        let mut best: Option<BigRational> = None;
        let mut v = lo;
        for _ in 0..512 {
            let fv = self.coord_value(i, v);
            if best.as_ref().map_or(true, |b| &fv < b) {
                best = Some(fv);
            }
            let excess = self.dominant_excess(i, v);
            let monotone = !self.step_dominance(i, v).is_negative();
            if monotone && best.as_ref().map_or(false, |b| &excess >= b) {
                // f_i(u) ≥ excess(u) ≥ excess(v) ≥ best for all u ≥ v
                return best;
            }
            v += 1;
        }
        None
    }

    /// Whether the coordinate has at least one nonzero coefficient.
    fn inert(&self, i: usize) -> bool {
        self.top_index(i).is_none()
    }

    /// Three-valued membership with per-coordinate search bound.
    pub fn member(&self, n: &BigInt, bound: u64) -> Verdict {
        let target = BigRational::from_integer(n.clone());
        // search [0, bound]^d, skipping inert coordinates (fixed at 0)
        let active: Vec<usize> = (0..self.d).filter(|&i| !self.inert(i)).collect();
        let mut ns = vec![0u64; self.d];
        if active.is_empty() {
            return if self.c0 == target {
                Verdict::Yes(ns)
            } else {
                Verdict::NoCertified
            };
        }
        // precompute coordinate values
        let tables: Vec<Vec<BigRational>> = active
            .iter()
            .map(|&i| (0..=bound).map(|v| self.coord_value(i, v)).collect())
            .collect();
        let mut idx = vec![0u64; active.len()];
        'search: loop {
            let mut acc = self.c0.clone();
            for (k, &v) in idx.iter().enumerate() {
                acc += &tables[k][v as usize];
            }
            if acc == target {
                for (k, &i) in active.iter().enumerate() {
                    ns[i] = idx[k];
                }
                return Verdict::Yes(ns);
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break 'search;
                }
                idx[k] += 1;
                if idx[k] <= bound {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
        // certification
        if self.certify_no_beyond(&target, bound, &active) {
            Verdict::NoCertified
        } else {
            Verdict::Unknown { searched: bound }
        }
    }

    /// Prove that no witness has any active coordinate beyond `bound`.
    fn certify_no_beyond(&self, target: &BigRational, bound: u64, active: &[usize]) -> bool {
        if active.len() == 1 {
            // |value − n| ≥ dominant excess − |c0 − n| eventually, any sign
            let i = active[0];
            let shifted = (self.c0.clone() - target).abs();
            let mut v = bound + 1;
            for _ in 0..512 {
                let excess = self.dominant_excess(i, v);
                let monotone = !self.step_dominance(i, v).is_negative();
                if monotone && excess > shifted {
                    return true;
                }
                // values in (bound, v] were not searched; check them directly
                if &(self.c0.clone() + self.coord_value(i, v)) == target {
                    return false;
                }
                v += 1;
            }
            return false;
        }
        // multi-coordinate: need every dominant coefficient positive
        let mut gmins = Vec::with_capacity(active.len());
        for &i in active {
            match self.certified_tail_min(i, 0) {
                Some(m) => gmins.push(m),
                None => return false,
            }
        }
        let total_gmin: BigRational = gmins.iter().cloned().sum();
        for (k, &i) in active.iter().enumerate() {
            let tail = match self.certified_tail_min(i, bound + 1) {
                Some(t) => t,
                None => return false,
            };
            // any tuple with n_i > bound has value ≥ c0 + tail + Σ_{i'≠i} gmin
            let low = self.c0.clone() + &tail + (&total_gmin - &gmins[k]);
            if &low <= target {
                return false;
            }
        }
        true
    }

    /// Exactly the elements of the term that lie in `[0, N]`, with a
    /// completeness certificate; errors when no certificate applies.
    pub fn window(&self, n_max: &BigInt) -> Result<Vec<BigInt>, SetError> {
        if n_max.is_negative() {
            return Ok(Vec::new());
        }
        let target_hi = BigRational::from_integer(n_max.clone());
        let active: Vec<usize> = (0..self.d).filter(|&i| !self.inert(i)).collect();
        if active.is_empty() {
            let v = &self.c0;
            return Ok(if !v.is_negative() && v <= &target_hi {
                vec![v.to_integer()]
            } else {
                Vec::new()
            });
        }
        // per-coordinate caps: beyond cap_i every tuple value exceeds N
        let mut caps = Vec::with_capacity(active.len());
        if active.len() == 1 {
            let i = active[0];
            let shifted = (self.c0.clone() - &target_hi).abs() + (self.c0.clone()).abs()
                + BigRational::from_integer(BigInt::from(1u32));
            let mut cap = None;
            let mut v = 0u64;
            for _ in 0..1024 {
                let excess = self.dominant_excess(i, v);
                let monotone = !self.step_dominance(i, v).is_negative();
                if monotone && excess > shifted {
                    cap = Some(v);
                    break;
                }
                v += 1;
            }
            caps.push(cap.ok_or(SetError::WindowUncertified)?);
        } else {
            let mut gmins = Vec::with_capacity(active.len());
            for &i in &active {
                gmins.push(self.certified_tail_min(i, 0).ok_or(SetError::WindowUncertified)?);
            }
            let total: BigRational = gmins.iter().cloned().sum();
            for (k, &i) in active.iter().enumerate() {
                let others = &total - &gmins[k];
                let mut cap = None;
                for v in 0..1024u64 {
                    let tail = self
                        .certified_tail_min(i, v)
                        .ok_or(SetError::WindowUncertified)?;
                    if self.c0.clone() + &tail + &others > target_hi {
                        cap = Some(v.saturating_sub(1));
                        break;
                    }
                }
                caps.push(cap.ok_or(SetError::WindowUncertified)?);
            }
        }
        // enumerate
        let mut out = std::collections::BTreeSet::new();
        let tables: Vec<Vec<BigRational>> = active
            .iter()
            .zip(&caps)
            .map(|(&i, &cap)| (0..=cap).map(|v| self.coord_value(i, v)).collect())
            .collect();
        let mut idx = vec![0u64; active.len()];
        loop {
            let mut acc = self.c0.clone();
            for (k, &v) in idx.iter().enumerate() {
                acc += &tables[k][v as usize];
            }
            if !acc.is_negative() && acc <= target_hi {
                out.insert(acc.to_integer());
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(out.into_iter().collect());
                }
                idx[k] += 1;
                if idx[k] <= caps[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// `a·S + b`: scales every coefficient and the constant.
    pub fn affine(&self, a: &BigInt, b: &BigInt) -> PSetTerm {
        let ar = BigRational::from_integer(a.clone());
        let br = BigRational::from_integer(b.clone());
        PSetTerm {
            p: self.p,
            q: self.q.clone(),
            d: self.d,
            r: self.r,
            c0: &self.c0 * &ar + br,
            c: self
                .c
                .iter()
                .map(|row| row.iter().map(|cij| cij * &ar).collect())
                .collect(),
        }
    }

    /// Definition-level classification: depth 0 with
    /// `(q−1)·c₀, (q−1)·c_{i0} ∈ ℤ` and `(q−1) | (q−1)c₀ + Σ (q−1)c_{i0}`.
    pub fn is_normal_form(&self) -> bool {
        if self.top_depth() != 0 {
            return false;
        }
        let qm1 = BigInt::from(self.q.clone()) - BigInt::one();
        let qm1r = BigRational::from_integer(qm1.clone());
        let c0p = &self.c0 * &qm1r;
        if !c0p.is_integer() {
            return false;
        }
        let mut sum = c0p.to_integer();
        for row in &self.c {
            let cip = &row[0] * &qm1r;
            if !cip.is_integer() {
                return false;
            }
            sum += cip.to_integer();
        }
        (sum % qm1).is_zero()
    }

    /// Largest `j` with a nonzero coefficient anywhere (effective depth).
    pub fn top_depth(&self) -> usize {
        (0..self.d).filter_map(|i| self.top_index(i)).max().unwrap_or(0)
    }
}

pub(crate) fn is_power_of(q: &BigUint, p: u64) -> bool {
    let p = BigUint::from(p);
    let mut v = q.clone();
    if v < p {
        return false;
    }
    while &v > &BigUint::one() {
        if (&v % &p) != BigUint::zero() {
            return false;
        }
        v /= &p;
    }
    true
}

/// `q^{2^j}`.
pub(crate) fn pow_2j(q: &BigUint, j: usize) -> BigUint {
    q.pow(1u32 << j)
}

impl fmt::Display for PSetTerm {
    /// `PS(q;c0;[c10,...,c1r|...|cd0,...,cdr])`, rationals as `a/b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PS({};{};[", self.q, rat_str(&self.c0))?;
        for (i, row) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (j, cij) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", rat_str(cij))?;
            }
        }
        write!(f, "])")
    }
}

impl fmt::Debug for PSetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn rat_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
