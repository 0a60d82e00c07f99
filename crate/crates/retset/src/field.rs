//! Prime fields `F_p` and extension fields `F_{p^k}`.
//!
//! `FpElem` is a residue bundled with its prime modulus. `Fq` is a shared
//! handle to an extension field `F_{p^k}` given by a monic irreducible
//! modulus polynomial; `FqElem` is a coefficient vector with respect to
//! the power basis of that modulus. When no modulus is supplied, one is
//! generated deterministically from `(p, k)` by smallest-lexicographic
//! search, so serialized elements are portable between runs.
//!
//! All values are immutable after construction and safe to share across
//! threads.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Errors from field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// Division by zero in `F_p` or `F_{p^k}`.
    DivisionByZero,
    /// The requested modulus is not prime.
    NotPrime(u64),
    /// The supplied modulus polynomial is not monic/irreducible of the claimed degree.
    BadModulus,
    /// No square root exists in this field.
    NoRoot,
    /// The source field does not embed into the target (degree or characteristic mismatch).
    NoEmbedding,
    /// Operation mixed elements of two different fields.
    FieldMismatch,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::NotPrime(p) => write!(f, "{} is not prime", p),
            FieldError::BadModulus => write!(f, "modulus is not a monic irreducible of the claimed degree"),
            FieldError::NoRoot => write!(f, "no square root in this field"),
            FieldError::NoEmbedding => write!(f, "no embedding between these fields"),
            FieldError::FieldMismatch => write!(f, "elements belong to different fields"),
        }
    }
}

impl std::error::Error for FieldError {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == d {
            return true;
        }
        if n % d == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization; adequate for the field orders used here.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// ============================================================================
// FpElem
// ============================================================================

/// An element of the prime field `F_p`: a residue in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    p: u64,
    v: u64,
}

impl FpElem {
    pub fn new(p: u64, v: i64) -> Self {
        debug_assert!(is_prime(p), "modulus must be prime");
        let m = v.rem_euclid(p as i64) as u64;
        FpElem { p, v: m }
    }

    pub fn from_u64(p: u64, v: u64) -> Self {
        debug_assert!(is_prime(p));
        FpElem { p, v: v % p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn check(&self, other: &FpElem) {
        assert_eq!(self.p, other.p, "mixed prime fields");
    }

    pub fn add(&self, other: &FpElem) -> FpElem {
        self.check(other);
        FpElem { p: self.p, v: (self.v + other.v) % self.p }
    }

    pub fn sub(&self, other: &FpElem) -> FpElem {
        self.check(other);
        FpElem { p: self.p, v: (self.v + self.p - other.v) % self.p }
    }

    pub fn neg(&self) -> FpElem {
        FpElem { p: self.p, v: (self.p - self.v) % self.p }
    }

    pub fn mul(&self, other: &FpElem) -> FpElem {
        self.check(other);
        let prod = (self.v as u128 * other.v as u128) % self.p as u128;
        FpElem { p: self.p, v: prod as u64 }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FpElem, FieldError> {
        if self.v == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // extended Euclid on (v, p)
        let (mut r0, mut r1) = (self.v as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        let inv = s0.rem_euclid(self.p as i128) as u64;
        Ok(FpElem { p: self.p, v: inv })
    }

    pub fn pow(&self, mut e: u64) -> FpElem {
        let mut base = *self;
        let mut acc = FpElem { p: self.p, v: 1 % self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

// ============================================================================
// Dense univariate polynomial helpers over F_p (internal)
// ============================================================================
//
// Little-endian coefficient vectors, trailing zeros trimmed. Used for the
// modulus arithmetic of F_{p^k}; elements never escape this module in this
// dense form.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let cur = out[i + j] as u128 + ai as u128 * bj as u128;
            out[i + j] = (cur % p as u128) as u64;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = i + shift;
                let sub = (lead as u128 * mi as u128) % p as u128;
                let cur = r[idx] as u128 + p as u128 * p as u128 - sub;
                r[idx] = (cur % p as u128) as u64;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    poly_rem(p, &poly_mul(p, a, b), m)
}

fn poly_powmod(p: u64, a: &[u64], mut e: BigUint, m: &[u64]) -> Vec<u64> {
    let mut base = poly_rem(p, a, m);
    let mut acc = vec![1u64];
    let two = BigUint::from(2u32);
    while !e.is_zero() {
        if (&e % &two).is_one() {
            acc = poly_mulmod(p, &acc, &base, m);
        }
        base = poly_mulmod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

/// gcd of two polynomials over F_p, monic output (empty = gcd with zero).
fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // make b monic for a stable remainder step
        let r = {
            let lc = *b.last().unwrap();
            let lcinv = FpElem::from_u64(p, lc).inv().unwrap().value();
            let monic: Vec<u64> =
                b.iter().map(|&c| ((c as u128 * lcinv as u128) % p as u128) as u64).collect();
            poly_rem(p, &a, &monic)
        };
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let lcinv = FpElem::from_u64(p, lc).inv().unwrap().value();
        for c in &mut a {
            *c = ((*c as u128 * lcinv as u128) % p as u128) as u64;
        }
    }
    a
}

/// Irreducibility of a monic polynomial over F_p, by the standard
/// Frobenius criterion: x^{p^k} ≡ x (mod f) and gcd(x^{p^{k/ℓ}} − x, f) = 1
/// for every prime ℓ | k.
fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let xm = poly_rem(p, &x, m);
    let sub_x = |frob: &[u64]| -> Vec<u64> {
        let mut d = frob.to_vec();
        d.resize(d.len().max(xm.len()), 0);
        for (i, &v) in xm.iter().enumerate() {
            d[i] = (d[i] + p - v) % p;
        }
        trim(&mut d);
        d
    };
    let pk = BigUint::from(p).pow(k as u32);
    // x^{p^k} ≡ x (mod m)
    if !sub_x(&poly_powmod(p, &x, pk, m)).is_empty() {
        return false;
    }
    for (l, _) in factorize(k as u64) {
        let e = k as u64 / l;
        let pe = BigUint::from(p).pow(e as u32);
        let d = sub_x(&poly_powmod(p, &x, pe, m));
        let g = poly_gcd(p, &d, m);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The smallest-lexicographic monic irreducible of degree k over F_p.
/// Candidates x^k + c_{k−1}x^{k−1} + … + c_0 are ordered by the base-p
/// integer with digits (c_{k−1}, …, c_0).
fn deterministic_modulus(p: u64, k: usize) -> Vec<u64> {
    let mut m = 0u64;
    loop {
        let mut coeffs = vec![0u64; k + 1];
        coeffs[k] = 1;
        let mut rest = m;
        for i in 0..k {
            coeffs[i] = rest % p;
            rest /= p;
        }
        assert_eq!(rest, 0, "exhausted modulus search space");
        if is_irreducible(p, &coeffs) {
            return coeffs;
        }
        m += 1;
    }
}

// ============================================================================
// Fq: the field handle
// ============================================================================

struct FqInner {
    p: u64,
    k: usize,
    /// Monic modulus, little-endian, length k+1.
    modulus: Vec<u64>,
    order: BigUint,
    generator: OnceLock<Vec<u64>>,
    nonresidue: OnceLock<Vec<u64>>,
}

/// A shared handle to `F_{p^k}`. Cloning is cheap; equality compares the
/// defining data, not the allocation.
#[derive(Clone)]
pub struct Fq {
    inner: Arc<FqInner>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.inner.p, self.inner.k)
    }
}

impl Fq {
    /// `F_{p^k}` with the deterministic smallest-lexicographic modulus.
    pub fn new(p: u64, k: usize) -> Result<Fq, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        assert!(k >= 1);
        let modulus = deterministic_modulus(p, k);
        Ok(Fq::build(p, k, modulus))
    }

    /// `F_{p^k}` with an explicit monic irreducible modulus (little-endian,
    /// length k+1, entries reduced mod p).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Fq, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus);
        }
        if !is_irreducible(p, &modulus) {
            return Err(FieldError::BadModulus);
        }
        Ok(Fq::build(p, k, modulus))
    }

    fn build(p: u64, k: usize, modulus: Vec<u64>) -> Fq {
        let order = BigUint::from(p).pow(k as u32);
        Fq {
            inner: Arc::new(FqInner {
                p,
                k,
                modulus,
                order,
                generator: OnceLock::new(),
                nonresidue: OnceLock::new(),
            }),
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.k
    }

    pub fn order(&self) -> &BigUint {
        &self.inner.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem { field: self.clone(), c: vec![0; self.inner.k] }
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, v: u64) -> FqElem {
        let mut c = vec![0; self.inner.k];
        c[0] = v % self.inner.p;
        FqElem { field: self.clone(), c }
    }

    pub fn from_i64(&self, v: i64) -> FqElem {
        self.from_u64(v.rem_euclid(self.inner.p as i64) as u64)
    }

    pub fn from_fp(&self, v: &FpElem) -> FqElem {
        assert_eq!(v.p(), self.inner.p, "characteristic mismatch");
        self.from_u64(v.value())
    }

    /// Element from a coefficient vector (low degree first); shorter
    /// vectors are zero-padded.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        assert!(coeffs.len() <= self.inner.k, "coefficient vector too long");
        let mut c = vec![0; self.inner.k];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v % self.inner.p;
        }
        FqElem { field: self.clone(), c }
    }

    /// The class of the modulus variable (zero when k = 1, where the
    /// deterministic modulus is `x` itself).
    pub fn gen(&self) -> FqElem {
        if self.inner.k == 1 {
            let mut c = vec![0];
            c[0] = (self.inner.p - self.inner.modulus[0]) % self.inner.p;
            return FqElem { field: self.clone(), c };
        }
        let mut c = vec![0; self.inner.k];
        c[1] = 1;
        FqElem { field: self.clone(), c }
    }

    /// Iterate all field elements in lexicographic coefficient order
    /// (c_0 varies fastest). Guarded: only for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        let n = self
            .inner
            .order
            .to_u64()
            .expect("field too large to enumerate");
        assert!(n <= 1 << 24, "field too large to enumerate");
        (0..n).map(move |m| {
            let mut c = vec![0u64; self.inner.k];
            let mut rest = m;
            for ci in c.iter_mut() {
                *ci = rest % self.inner.p;
                rest /= self.inner.p;
            }
            FqElem { field: self.clone(), c }
        })
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        let c: Vec<u64> = (0..self.inner.k).map(|_| rng.gen_range(0..self.inner.p)).collect();
        FqElem { field: self.clone(), c }
    }

    /// Deterministic multiplicative generator: the first element in
    /// lexicographic coefficient order that generates `F_q^×`.
    pub fn multiplicative_generator(&self) -> FqElem {
        let coeffs = self.inner.generator.get_or_init(|| {
            let qm1 = self.order() - BigUint::one();
            let qm1_u = qm1.to_u64().expect("field too large for generator search");
            let factors = factorize(qm1_u);
            for cand in self.elements() {
                if cand.is_zero() {
                    continue;
                }
                let ok = factors
                    .iter()
                    .all(|&(l, _)| !cand.pow_big(&(&qm1 / BigUint::from(l))).is_one());
                if ok {
                    return cand.c;
                }
            }
            unreachable!("F_q^× is cyclic");
        });
        FqElem { field: self.clone(), c: coeffs.clone() }
    }

    /// Deterministic quadratic non-residue (first in lexicographic order),
    /// for the square-root algorithm. Requires odd characteristic.
    fn nonresidue(&self) -> FqElem {
        assert!(self.inner.p != 2);
        let coeffs = self.inner.nonresidue.get_or_init(|| {
            let exp = (self.order() - BigUint::one()) >> 1;
            // Search small coefficient vectors without enumerating the field:
            // iterate the base-p counter directly.
            let mut m = 1u64;
            loop {
                let mut c = vec![0u64; self.inner.k];
                let mut rest = m;
                for ci in c.iter_mut() {
                    *ci = rest % self.inner.p;
                    rest /= self.inner.p;
                }
                assert!(rest == 0, "no quadratic non-residue found");
                let cand = FqElem { field: self.clone(), c: c.clone() };
                if !cand.is_zero() && !cand.pow_big(&exp).is_one() {
                    return c;
                }
                m += 1;
            }
        });
        FqElem { field: self.clone(), c: coeffs.clone() }
    }

    /// The embedding of `from` into `self`, when one is supported:
    /// identity, the canonical prime-subfield map, or a quadratic
    /// subfield (k even). The image of the source generator is the
    /// lexicographically least root of the source modulus.
    pub fn embedding(&self, from: &Fq) -> Result<Embedding, FieldError> {
        if from.p() != self.p() {
            return Err(FieldError::NoEmbedding);
        }
        if from == self {
            return Ok(Embedding::Identity);
        }
        if from.degree() == 1 {
            return Ok(Embedding::PrimeSubfield);
        }
        if from.degree() == 2 && self.degree() % 2 == 0 {
            // Root of x² + c1 x + c0 via the quadratic formula.
            let c0 = self.from_u64(from.modulus()[0]);
            let c1 = self.from_u64(from.modulus()[1]);
            let four = self.from_u64(4);
            let disc = c1.mul(&c1).sub(&four.mul(&c0));
            let s = disc.sqrt().ok_or(FieldError::NoEmbedding)?;
            let half = self.from_u64(2).inv()?;
            let r1 = c1.neg().add(&s).mul(&half);
            let r2 = c1.neg().sub(&s).mul(&half);
            let root = if r1.lex_cmp(&r2) == Ordering::Less { r1 } else { r2 };
            return Ok(Embedding::Quadratic { root });
        }
        Err(FieldError::NoEmbedding)
    }
}

/// How a coefficient field maps into an evaluation field.
#[derive(Clone, Debug)]
pub enum Embedding {
    Identity,
    PrimeSubfield,
    Quadratic { root: FqElem },
}

impl Embedding {
    pub fn apply(&self, target: &Fq, x: &FqElem) -> FqElem {
        match self {
            Embedding::Identity => {
                debug_assert!(x.field() == target);
                x.clone()
            }
            Embedding::PrimeSubfield => target.from_u64(x.c[0]),
            Embedding::Quadratic { root } => {
                // x = c0 + c1·u  ↦  c0 + c1·root
                let c0 = target.from_u64(x.c[0]);
                let c1 = target.from_u64(x.c[1]);
                c0.add(&c1.mul(root))
            }
        }
    }
}

// ============================================================================
// FqElem
// ============================================================================

/// An element of `F_{p^k}`: coefficients with respect to the power basis
/// of the field's modulus, low degree first.
#[derive(Clone)]
pub struct FqElem {
    field: Fq,
    c: Vec<u64>,
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}

impl Eq for FqElem {}

impl FqElem {
    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// Coefficients as `FpElem` values.
    pub fn fp_coeffs(&self) -> Vec<FpElem> {
        self.c.iter().map(|&v| FpElem::from_u64(self.field.p(), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&v| v == 0)
    }

    fn check(&self, other: &FqElem) {
        assert!(self.field == other.field, "mixed fields");
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        self.check(other);
        let p = self.field.p();
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| (a + b) % p).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn sub(&self, other: &FqElem) -> FqElem {
        self.check(other);
        let p = self.field.p();
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| (a + p - b) % p).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn neg(&self) -> FqElem {
        let p = self.field.p();
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        self.check(other);
        let p = self.field.p();
        let prod = poly_mul(p, &self.c, &other.c);
        let mut r = poly_rem(p, &prod, &self.field.inner.modulus);
        r.resize(self.field.inner.k, 0);
        FqElem { field: self.field.clone(), c: r }
    }

    /// Multiplicative inverse by extended Euclid on the modulus.
    pub fn inv(&self) -> Result<FqElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.field.p();
        let m = &self.field.inner.modulus;
        // extended Euclid over F_p[x]: r0 = m, r1 = self
        let mut r0: Vec<u64> = m.clone();
        let mut r1: Vec<u64> = self.c.clone();
        trim(&mut r1);
        let mut s0: Vec<u64> = Vec::new(); // coefficient of self in r0
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // divide r0 by r1
            let lc = *r1.last().unwrap();
            let lcinv = FpElem::from_u64(p, lc).inv().unwrap().value();
            let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
            let mut rem = r0.clone();
            while rem.len() >= r1.len() && !rem.is_empty() {
                let shift = rem.len() - r1.len();
                let coef = ((*rem.last().unwrap() as u128 * lcinv as u128) % p as u128) as u64;
                if coef != 0 {
                    q[shift] = coef;
                    for (i, &ri) in r1.iter().enumerate() {
                        let sub = (coef as u128 * ri as u128) % p as u128;
                        let cur = rem[i + shift] as u128 + p as u128 * p as u128 - sub;
                        rem[i + shift] = (cur % p as u128) as u64;
                    }
                }
                // leading coefficient is now zero by construction
                rem.pop();
                trim(&mut rem);
            }
            trim(&mut q);
            // (r0, r1) = (r1, rem); (s0, s1) = (s1, s0 - q*s1)
            let qs1 = poly_mul(p, &q, &s1);
            let mut s2 = s0.clone();
            s2.resize(s2.len().max(qs1.len()), 0);
            for (i, &v) in qs1.iter().enumerate() {
                s2[i] = (s2[i] + p - v % p) % p;
            }
            trim(&mut s2);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is gcd (degree 0 since modulus irreducible); normalize
        debug_assert_eq!(r0.len(), 1);
        let ginv = FpElem::from_u64(p, r0[0]).inv().unwrap().value();
        let mut out: Vec<u64> =
            s0.iter().map(|&v| ((v as u128 * ginv as u128) % p as u128) as u64).collect();
        out = poly_rem(p, &out, &self.field.inner.modulus);
        out.resize(self.field.inner.k, 0);
        Ok(FqElem { field: self.field.clone(), c: out })
    }

    pub fn div(&self, other: &FqElem) -> Result<FqElem, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> FqElem {
        self.pow_big(&BigUint::from(e))
    }

    pub fn pow_big(&self, e: &BigUint) -> FqElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        let mut e = e.clone();
        let two = BigUint::from(2u32);
        while !e.is_zero() {
            if (&e % &two).is_one() {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `x^{p^e}` — the e-fold Frobenius. Exponents are reduced modulo
    /// `q − 1` on units, so large `e` stays cheap.
    pub fn frobenius(&self, e: u64) -> FqElem {
        if self.is_zero() {
            return self.clone();
        }
        let qm1 = self.field.order() - BigUint::one();
        let exp = BigUint::from(self.field.p()).modpow(&BigUint::from(e), &qm1);
        self.pow_big(&exp)
    }

    /// Deterministic square root: the lexicographically smaller of the two
    /// roots under coefficient order, or `None` when `self` is a
    /// non-residue. Tonelli–Shanks over `F_q`.
    pub fn sqrt(&self) -> Option<FqElem> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let f = &self.field;
        let one = BigUint::one();
        let qm1 = f.order() - &one;
        // Euler criterion
        if !self.pow_big(&(&qm1 >> 1)).is_one() {
            return None;
        }
        // q − 1 = 2^s · m with m odd
        let mut s = 0u32;
        let mut m = qm1.clone();
        while (&m & &one).is_zero() {
            m >>= 1;
            s += 1;
        }
        let z = f.nonresidue();
        let mut c = z.pow_big(&m);
        let mut x = self.pow_big(&((&m + &one) >> 1));
        let mut t = self.pow_big(&m);
        let mut s_cur = s;
        while !t.is_one() {
            // least i with t^{2^i} = 1
            let mut i = 0u32;
            let mut tt = t.clone();
            while !tt.is_one() {
                tt = tt.mul(&tt);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(s_cur - i - 1) {
                b = b.mul(&b);
            }
            x = x.mul(&b);
            let b2 = b.mul(&b);
            t = t.mul(&b2);
            c = b2;
            s_cur = i;
        }
        debug_assert!(x.mul(&x) == *self);
        let nx = x.neg();
        Some(if x.lex_cmp(&nx) == Ordering::Less { x } else { nx })
    }

    /// Lexicographic comparison of coefficient vectors (c_0 first); the
    /// fixed coordinate order used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &FqElem) -> Ordering {
        self.c.cmp(&other.c)
    }

    /// Render with the modulus annotation, e.g. `[1,1] mod x^2+2`.
    pub fn display_with_modulus(&self) -> String {
        let m = &self.field.inner.modulus;
        let mut mstr = String::new();
        for (i, &c) in m.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !mstr.is_empty() {
                mstr.push('+');
            }
            match i {
                0 => mstr.push_str(&c.to_string()),
                1 if c == 1 => mstr.push('x'),
                1 => mstr.push_str(&format!("{}*x", c)),
                _ if c == 1 => mstr.push_str(&format!("x^{}", i)),
                _ => mstr.push_str(&format!("{}*x^{}", c, i)),
            }
        }
        format!("{} mod {}", self, mstr)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        write!(f, "[")?;
        for (i, v) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        let two = FpElem::new(5, 2);
        assert_eq!(two.inv().unwrap().value(), 3);
        let one = FpElem::new(5, 1);
        assert_eq!(one.inv().unwrap().value(), 1);
        assert_eq!(FpElem::new(5, 0).inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn deterministic_moduli() {
        // degree 1: x itself; degree 2 over F_5: x^2 + 2 (x^2, x^2+1 fail)
        assert_eq!(Fq::new(5, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(Fq::new(5, 2).unwrap().modulus(), &[2, 0, 1]);
    }

    #[test]
    fn fq_inverse_with_explicit_modulus() {
        // F_25 with modulus u² − 2 (= u² + 3): inv(u) = 3u since u·3u = 3·2 = 6 ≡ 1.
        let f = Fq::with_modulus(5, vec![3, 0, 1]).unwrap();
        let u = f.gen();
        let inv = u.inv().unwrap();
        assert_eq!(inv, f.from_coeffs(&[0, 3]));
        assert!(u.mul(&inv).is_one());
    }

    #[test]
    fn fq_inverse_deterministic_modulus() {
        // Deterministic F_25 has u² = −2 = 3, so inv(u) = 2u.
        let f = Fq::new(5, 2).unwrap();
        let u = f.gen();
        assert_eq!(u.mul(&u), f.from_u64(3));
        assert_eq!(u.inv().unwrap(), f.from_coeffs(&[0, 2]));
    }

    #[test]
    fn sqrt_in_f5() {
        let f = Fq::new(5, 1).unwrap();
        // x = 4: roots {2,3}, deterministic pick 2
        assert_eq!(f.from_u64(4).sqrt().unwrap(), f.from_u64(2));
        // 3 is not a square mod 5
        assert!(f.from_u64(3).sqrt().is_none());
        assert_eq!(f.zero().sqrt().unwrap(), f.zero());
    }

    #[test]
    fn sqrt_in_f25() {
        let f = Fq::new(5, 2).unwrap();
        let three = f.from_u64(3);
        let r = three.sqrt().expect("3 is a square in F_25");
        assert_eq!(r.mul(&r), three);
        // u² = 3 here, so the two roots are ±u; lexicographic pick is u = [0,1].
        assert_eq!(r, f.from_coeffs(&[0, 1]));
    }

    #[test]
    fn sqrt_exhaustive_small_fields() {
        // "no root" agrees with exhaustive squaring for p^k ≤ 5^4
        for k in 1..=4 {
            let f = Fq::new(5, k).unwrap();
            let squares: std::collections::BTreeSet<Vec<u64>> =
                f.elements().map(|x| x.mul(&x).c).collect();
            for x in f.elements() {
                match x.sqrt() {
                    Some(r) => assert_eq!(r.mul(&r), x),
                    None => assert!(!squares.contains(&x.c)),
                }
            }
        }
    }

    #[test]
    fn frobenius_is_field_automorphism() {
        let f = Fq::new(5, 3).unwrap();
        let mut rng = crate::testrng(7);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            let lhs = a.add(&b).frobenius(1);
            let rhs = a.frobenius(1).add(&b.frobenius(1));
            assert_eq!(lhs, rhs);
            assert_eq!(a.mul(&b).frobenius(2), a.frobenius(2).mul(&b.frobenius(2)));
            assert_eq!(a.frobenius(3), a); // p^3 = q fixes F_q
        }
    }

    #[test]
    fn multiplicative_generator_f25() {
        // u has order 8 and integers have order ≤ 4; the first generator in
        // lexicographic order is u + 1 = [1,1].
        let f = Fq::new(5, 2).unwrap();
        let g = f.multiplicative_generator();
        assert_eq!(g, f.from_coeffs(&[1, 1]));
        let mut pow = f.one();
        let mut order = 0;
        loop {
            pow = pow.mul(&g);
            order += 1;
            if pow.is_one() {
                break;
            }
        }
        assert_eq!(order, 24);
    }

    #[test]
    fn modulus_annotated_display() {
        let f = Fq::new(5, 2).unwrap();
        assert_eq!(f.from_coeffs(&[1, 1]).display_with_modulus(), "[1,1] mod x^2+2");
        let f5 = Fq::new(5, 1).unwrap();
        assert_eq!(f5.from_u64(3).display_with_modulus(), "3 mod x");
    }

    #[test]
    fn quadratic_embedding() {
        let small = Fq::new(5, 2).unwrap();
        let big = Fq::new(5, 4).unwrap();
        let emb = big.embedding(&small).unwrap();
        let u = small.gen();
        let img = emb.apply(&big, &u);
        // image satisfies x² + 2 = 0
        assert_eq!(img.mul(&img), big.from_u64(3));
        // homomorphism on a product
        let a = small.from_coeffs(&[2, 3]);
        let b = small.from_coeffs(&[4, 1]);
        assert_eq!(emb.apply(&big, &a.mul(&b)), emb.apply(&big, &a).mul(&emb.apply(&big, &b)));
        // no embedding into odd degree
        let odd = Fq::new(5, 3).unwrap();
        assert!(odd.embedding(&small).is_err());
    }
}
