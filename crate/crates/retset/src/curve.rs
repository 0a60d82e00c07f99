//! Constant elliptic curves `y² = x³ + Ax + B` over `F_p` and their
//! points with coordinates in either a finite field (after
//! specialization) or a multi-quadratic extension of `F_{p^k}(t)`
//! (symbolic).
//!
//! The group law is written once, generically over a coordinate context.
//! Scalar multiplication by `n = ±p^e·m` with `p ∤ m` routes the `p^e`
//! factor through the endomorphism `F² = [−p]` on supersingular curves:
//! `p^e·P = (−1)^e·F^{2e}(P)`, a termwise Frobenius power that keeps
//! symbolic coordinates sparse. Composite scalars only ever pay
//! double-and-add for their prime-to-`p` part.

use crate::field::{FpElem, Fq, FqElem};
use crate::poly::SparsePoly;
use crate::ratfunc::RatFunc;
use crate::tower::{SqrtTower, TowerElem};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveError {
    /// 4A³ + 27B² = 0.
    Singular,
    /// Points live over different coordinate fields.
    CoordMismatch,
    /// An operation needed a supersingular curve.
    NotSupersingular,
    /// Division-by-zero or other arithmetic failure in the coordinate domain.
    Arithmetic(String),
    /// The torsion search did not stabilize within the degree bound.
    BoundTooSmall,
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::Singular => write!(f, "singular curve: 4A^3 + 27B^2 = 0"),
            CurveError::CoordMismatch => write!(f, "coordinate-field mismatch"),
            CurveError::NotSupersingular => write!(f, "curve is not supersingular"),
            CurveError::Arithmetic(s) => write!(f, "{}", s),
            CurveError::BoundTooSmall => write!(f, "torsion count did not stabilize within the bound"),
        }
    }
}

impl std::error::Error for CurveError {}

// ============================================================================
// Curve
// ============================================================================

/// `y² = x³ + Ax + B` with constant coefficients in `F_p`, `p ≥ 5`.
#[derive(Clone, PartialEq, Eq)]
pub struct EllipticCurve {
    p: u64,
    a: FpElem,
    b: FpElem,
    trace: i64,
    supersingular: bool,
}

impl EllipticCurve {
    pub fn new(p: u64, a: i64, b: i64) -> Result<EllipticCurve, CurveError> {
        assert!(p >= 5, "characteristic must be at least 5");
        let a = FpElem::new(p, a);
        let b = FpElem::new(p, b);
        // 4A³ + 27B²
        let disc = FpElem::new(p, 4)
            .mul(&a.pow(3))
            .add(&FpElem::new(p, 27).mul(&b.pow(2)));
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        let mut curve = EllipticCurve { p, a, b, trace: 0, supersingular: false };
        let count = curve.count_points_over(1) as i64;
        curve.trace = p as i64 + 1 - count;
        // for p ≥ 5, Hasse gives |trace| < p, so trace ≡ 0 (mod p) means trace = 0
        curve.supersingular = curve.trace.rem_euclid(p as i64) == 0;
        Ok(curve)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> &FpElem {
        &self.a
    }

    pub fn b(&self) -> &FpElem {
        &self.b
    }

    pub fn trace(&self) -> i64 {
        self.trace
    }

    pub fn is_supersingular(&self) -> bool {
        self.supersingular
    }

    /// `|E(F_{p^k})|` by exhaustive x-enumeration; guarded to small fields.
    pub fn count_points_over(&self, k: usize) -> u64 {
        let f = Fq::new(self.p, k).unwrap();
        let mut count = 1u64; // the point at infinity
        for x in f.elements() {
            let rhs = self.rhs_at(&x);
            if rhs.is_zero() {
                count += 1;
            } else if rhs.sqrt().is_some() {
                count += 2;
            }
        }
        count
    }

    /// `x³ + Ax + B` evaluated in any `F_{p^k}`.
    pub fn rhs_at(&self, x: &FqElem) -> FqElem {
        let f = x.field();
        x.mul(x).mul(x).add(&f.from_fp(&self.a).mul(x)).add(&f.from_fp(&self.b))
    }

    /// A uniformly random affine point over the given field.
    pub fn random_point<R: rand::Rng + ?Sized>(&self, field: &Fq, rng: &mut R) -> ECPoint<FqElem> {
        assert_eq!(field.p(), self.p);
        loop {
            let x = field.random(rng);
            let rhs = self.rhs_at(&x);
            if let Some(y) = rhs.sqrt() {
                // flip the sign half the time so both roots appear
                let y = if rng.gen::<bool>() { y.neg() } else { y };
                return ECPoint::Affine(x, y);
            }
        }
    }
}

impl fmt::Debug for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {}x + {} over F_{}", self.a, self.b, self.p)
    }
}

// ============================================================================
// Points and coordinate contexts
// ============================================================================

/// A curve point: affine coordinates or the zero point `O = [0,1,0]`.
#[derive(Clone, PartialEq, Eq)]
pub enum ECPoint<C> {
    Infinity,
    Affine(C, C),
}

impl<C> ECPoint<C> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn x(&self) -> Option<&C> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&C> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine(_, y) => Some(y),
        }
    }
}

impl<C: fmt::Display> fmt::Display for ECPoint<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "O"),
            ECPoint::Affine(x, y) => write!(f, "({}, {})", x, y),
        }
    }
}

impl<C: fmt::Display> fmt::Debug for ECPoint<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Arithmetic a coordinate domain must supply for the chord–tangent law.
pub trait CoordCtx {
    type Elem: Clone;

    fn from_const(&self, c: &FpElem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, CurveError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// `a^{p^e}`.
    fn frob(&self, a: &Self::Elem, e: u64) -> Self::Elem;
    /// Post-step cleanup (gcd reduction on symbolic coordinates).
    fn tidy(&self, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }
    /// Whether the element belongs to this context's field.
    fn admits(&self, _a: &Self::Elem) -> bool {
        true
    }
}

/// Specialized coordinates: a finite field.
pub struct SpecCtx {
    pub field: Fq,
}

impl CoordCtx for SpecCtx {
    type Elem = FqElem;

    fn from_const(&self, c: &FpElem) -> FqElem {
        self.field.from_fp(c)
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.add(b)
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.sub(b)
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.mul(b)
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        a.neg()
    }

    fn inv(&self, a: &FqElem) -> Result<FqElem, CurveError> {
        a.inv().map_err(|e| CurveError::Arithmetic(e.to_string()))
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.is_zero()
    }

    fn eq(&self, a: &FqElem, b: &FqElem) -> bool {
        a == b
    }

    fn frob(&self, a: &FqElem, e: u64) -> FqElem {
        a.frobenius(e)
    }

    fn admits(&self, a: &FqElem) -> bool {
        *a.field() == self.field
    }
}

/// Symbolic coordinates: a quadratic tower over `F_{p^k}(t)`.
pub struct SymCtx {
    pub tower: Arc<SqrtTower>,
}

impl CoordCtx for SymCtx {
    type Elem = TowerElem;

    fn from_const(&self, c: &FpElem) -> TowerElem {
        TowerElem::from_base(
            &self.tower,
            RatFunc::constant(self.tower.field().from_fp(c)),
        )
    }

    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.add(b)
    }

    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.sub(b)
    }

    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.mul(b)
    }

    fn neg(&self, a: &TowerElem) -> TowerElem {
        a.neg()
    }

    fn inv(&self, a: &TowerElem) -> Result<TowerElem, CurveError> {
        a.inv().map_err(CurveError::Arithmetic)
    }

    fn is_zero(&self, a: &TowerElem) -> bool {
        a.is_zero()
    }

    fn eq(&self, a: &TowerElem, b: &TowerElem) -> bool {
        a.eq_exact(b)
    }

    fn frob(&self, a: &TowerElem, e: u64) -> TowerElem {
        a.frob_pow(e)
    }

    fn tidy(&self, a: &TowerElem) -> TowerElem {
        a.reduce()
    }
}

// ============================================================================
// Group law
// ============================================================================

pub fn ec_negate<Ctx: CoordCtx>(ctx: &Ctx, p: &ECPoint<Ctx::Elem>) -> ECPoint<Ctx::Elem> {
    match p {
        ECPoint::Infinity => ECPoint::Infinity,
        ECPoint::Affine(x, y) => ECPoint::Affine(x.clone(), ctx.neg(y)),
    }
}

pub fn ec_on_curve<Ctx: CoordCtx>(ctx: &Ctx, curve: &EllipticCurve, p: &ECPoint<Ctx::Elem>) -> bool {
    match p {
        ECPoint::Infinity => true,
        ECPoint::Affine(x, y) => {
            let rhs = ctx.add(
                &ctx.add(&ctx.mul(&ctx.mul(x, x), x), &ctx.mul(&ctx.from_const(curve.a()), x)),
                &ctx.from_const(curve.b()),
            );
            ctx.is_zero(&ctx.sub(&ctx.mul(y, y), &rhs))
        }
    }
}

/// Chord–tangent addition. Errors on coordinate-field mismatch.
pub fn ec_add<Ctx: CoordCtx>(
    ctx: &Ctx,
    curve: &EllipticCurve,
    p: &ECPoint<Ctx::Elem>,
    q: &ECPoint<Ctx::Elem>,
) -> Result<ECPoint<Ctx::Elem>, CurveError> {
    for pt in [p, q] {
        if let ECPoint::Affine(x, y) = pt {
            if !ctx.admits(x) || !ctx.admits(y) {
                return Err(CurveError::CoordMismatch);
            }
        }
    }
    let (x1, y1) = match p {
        ECPoint::Infinity => return Ok(q.clone()),
        ECPoint::Affine(x, y) => (x, y),
    };
    let (x2, y2) = match q {
        ECPoint::Infinity => return Ok(p.clone()),
        ECPoint::Affine(x, y) => (x, y),
    };
    let lambda = if ctx.eq(x1, x2) {
        if ctx.eq(y1, &ctx.neg(y2)) {
            return Ok(ECPoint::Infinity);
        }
        // tangent: (3x² + A)/(2y)
        let three = ctx.from_const(&FpElem::new(curve.p(), 3));
        let two = ctx.from_const(&FpElem::new(curve.p(), 2));
        let num = ctx.add(&ctx.mul(&three, &ctx.mul(x1, x1)), &ctx.from_const(curve.a()));
        let den = ctx.mul(&two, y1);
        ctx.mul(&num, &ctx.inv(&den)?)
    } else {
        let num = ctx.sub(y2, y1);
        let den = ctx.sub(x2, x1);
        ctx.mul(&num, &ctx.inv(&den)?)
    };
    let lambda = ctx.tidy(&lambda);
    let x3 = ctx.tidy(&ctx.sub(&ctx.sub(&ctx.mul(&lambda, &lambda), x1), x2));
    let y3 = ctx.tidy(&ctx.sub(&ctx.mul(&lambda, &ctx.sub(x1, &x3)), y1));
    Ok(ECPoint::Affine(x3, y3))
}

/// Coordinatewise `p^e`-th power; stays on the curve because the curve is
/// defined over `F_p`.
pub fn ec_frobenius<Ctx: CoordCtx>(ctx: &Ctx, p: &ECPoint<Ctx::Elem>, e: u64) -> ECPoint<Ctx::Elem> {
    match p {
        ECPoint::Infinity => ECPoint::Infinity,
        ECPoint::Affine(x, y) => ECPoint::Affine(ctx.frob(x, e), ctx.frob(y, e)),
    }
}

/// Plain double-and-add for a nonnegative scalar.
fn ec_scalar_mul_raw<Ctx: CoordCtx>(
    ctx: &Ctx,
    curve: &EllipticCurve,
    n: &BigUint,
    p: &ECPoint<Ctx::Elem>,
) -> Result<ECPoint<Ctx::Elem>, CurveError> {
    let mut acc = ECPoint::Infinity;
    let bits = n.bits();
    for i in (0..bits).rev() {
        acc = ec_add(ctx, curve, &acc, &acc)?;
        if n.bit(i) {
            acc = ec_add(ctx, curve, &acc, p)?;
        }
    }
    Ok(acc)
}

/// `n·P` for any integer `n`. On supersingular curves, `n = ±p^e·m`
/// factors through `m·P` by double-and-add followed by `e` applications
/// of `−F²` (one Frobenius power plus a sign); on ordinary curves the
/// whole scalar goes through double-and-add.
pub fn ec_scalar_mul<Ctx: CoordCtx>(
    ctx: &Ctx,
    curve: &EllipticCurve,
    n: &BigInt,
    p: &ECPoint<Ctx::Elem>,
) -> Result<ECPoint<Ctx::Elem>, CurveError> {
    if n.is_zero() || p.is_infinity() {
        return Ok(ECPoint::Infinity);
    }
    let (sign, mag) = n.clone().into_parts();
    let result = if curve.is_supersingular() {
        let (e, m) = split_p_power(curve.p(), &mag);
        let base = ec_scalar_mul_raw(ctx, curve, &m, p)?;
        let frobbed = if e > 0 { ec_frobenius(ctx, &base, 2 * e) } else { base };
        if e % 2 == 1 {
            ec_negate(ctx, &frobbed)
        } else {
            frobbed
        }
    } else {
        ec_scalar_mul_raw(ctx, curve, &mag, p)?
    };
    Ok(if sign == Sign::Minus { ec_negate(ctx, &result) } else { result })
}

/// `n = p^e·m` with `p ∤ m`.
fn split_p_power(p: u64, n: &BigUint) -> (u64, BigUint) {
    let p = BigUint::from(p);
    let mut e = 0u64;
    let mut m = n.clone();
    while !m.is_zero() {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        m = q;
        e += 1;
    }
    (e, m)
}

// ============================================================================
// Division polynomials
// ============================================================================

/// Coprime `(f_m, g_m)` with `x(m·P) = f_m(x)/g_m(x)`; `deg f_m = m²` and
/// the leading coefficient of `g_m` is `m² (mod p)`, for `gcd(m, p) = 1`.
/// Polynomials are in the variable of the returned `SparsePoly` (printed
/// as `t`) over `F_p`.
pub fn division_poly(curve: &EllipticCurve, m: u64) -> (SparsePoly, SparsePoly) {
    assert!(m >= 1);
    let ladder = division_poly_ladder(curve, m + 1);
    let f = Fq::new(curve.p(), 1).unwrap();
    let e_poly = curve_rhs_poly(curve, &f);
    // ψ_m² in x-form: a_m²·E when m is even, a_m² when odd
    let psi2 = |k: u64| -> SparsePoly {
        let a = &ladder[k as usize];
        let sq = a.mul(a);
        if k % 2 == 0 {
            sq.mul(&e_poly)
        } else {
            sq
        }
    };
    let g_m = psi2(m);
    // ψ_{m−1}·ψ_{m+1} in x-form: both even-indexed when m odd (picks up E)
    let cross = {
        let prod = ladder[(m - 1) as usize].mul(&ladder[(m + 1) as usize]);
        if m % 2 == 1 {
            prod.mul(&e_poly)
        } else {
            prod
        }
    };
    let x = SparsePoly::var(&f);
    let f_m = x.mul(&g_m).sub(&cross);
    (f_m, g_m)
}

/// `x³ + Ax + B` as a polynomial.
fn curve_rhs_poly(curve: &EllipticCurve, f: &Fq) -> SparsePoly {
    SparsePoly::from_terms(
        f,
        [
            (BigUint::from(3u32), f.one()),
            (BigUint::from(1u32), f.from_fp(curve.a())),
            (BigUint::zero(), f.from_fp(curve.b())),
        ],
    )
}

/// The x-parts `a_0..=a_max` of the division polynomials
/// (`ψ_k = a_k(x)·y^{[k even]}`).
fn division_poly_ladder(curve: &EllipticCurve, max: u64) -> Vec<SparsePoly> {
    let f = Fq::new(curve.p(), 1).unwrap();
    let a = f.from_fp(curve.a());
    let b = f.from_fp(curve.b());
    let e_poly = curve_rhs_poly(curve, &f);
    let mut lad: Vec<SparsePoly> = Vec::with_capacity(max as usize + 3);
    lad.push(SparsePoly::zero(&f)); // ψ0
    lad.push(SparsePoly::one(&f)); // ψ1
    lad.push(SparsePoly::constant(f.from_u64(2))); // ψ2 = 2y
    // ψ3 = 3x⁴ + 6Ax² + 12Bx − A²
    lad.push(SparsePoly::from_terms(
        &f,
        [
            (BigUint::from(4u32), f.from_u64(3)),
            (BigUint::from(2u32), f.from_u64(6).mul(&a)),
            (BigUint::from(1u32), f.from_u64(12).mul(&b)),
            (BigUint::zero(), a.mul(&a).neg()),
        ],
    ));
    // ψ4 = 4y(x⁶ + 5Ax⁴ + 20Bx³ − 5A²x² − 4ABx − 8B² − A³)
    lad.push(
        SparsePoly::from_terms(
            &f,
            [
                (BigUint::from(6u32), f.one()),
                (BigUint::from(4u32), f.from_u64(5).mul(&a)),
                (BigUint::from(3u32), f.from_u64(20).mul(&b)),
                (BigUint::from(2u32), f.from_u64(5).mul(&a).mul(&a).neg()),
                (BigUint::from(1u32), f.from_u64(4).mul(&a).mul(&b).neg()),
                (
                    BigUint::zero(),
                    f.from_u64(8).mul(&b).mul(&b).add(&a.mul(&a).mul(&a)).neg(),
                ),
            ],
        )
        .scale(&f.from_u64(4)),
    );
    let e2 = e_poly.mul(&e_poly);
    let half = f.from_u64(2).inv().unwrap();
    for k in 5..=(max as usize) {
        let next = if k % 2 == 1 {
            // k = 2m+1: E²-weighted by the parity of m
            let m = k / 2;
            let t1 = lad[m + 2].mul(&lad[m].mul(&lad[m]).mul(&lad[m]));
            let t2 = lad[m - 1].mul(&lad[m + 1].mul(&lad[m + 1]).mul(&lad[m + 1]));
            if m % 2 == 0 {
                t1.mul(&e2).sub(&t2)
            } else {
                t1.sub(&t2.mul(&e2))
            }
        } else {
            // k = 2m: a_{2m} = a_m(a_{m+2}a_{m−1}² − a_{m−2}a_{m+1}²)/2
            let m = k / 2;
            let t1 = lad[m + 2].mul(&lad[m - 1].mul(&lad[m - 1]));
            let t2 = lad[m - 2].mul(&lad[m + 1].mul(&lad[m + 1]));
            lad[m].mul(&t1.sub(&t2)).scale(&half)
        };
        lad.push(next);
    }
    lad
}

// ============================================================================
// Torsion
// ============================================================================

/// Count `m`-torsion points over `F_{p^k}` for `k = 1..=k_bound`, stopping
/// once the count reaches `m'²` where `m'` is the prime-to-`p` part of
/// `m`. Requires a supersingular curve (which has no `p`-torsion).
pub fn torsion_count(curve: &EllipticCurve, m: u64, k_bound: usize) -> Result<u64, CurveError> {
    assert!(m >= 1);
    if !curve.is_supersingular() {
        return Err(CurveError::NotSupersingular);
    }
    let (_, m_prime) = split_p_power(curve.p(), &BigUint::from(m));
    let target = (&m_prime * &m_prime).to_u64().expect("torsion target overflow");
    let n = BigInt::from(m);
    let mut last = 0u64;
    for k in 1..=k_bound {
        let f = Fq::new(curve.p(), k).unwrap();
        let ctx = SpecCtx { field: f.clone() };
        let mut count = 1u64; // O
        for x in f.elements() {
            let rhs = curve.rhs_at(&x);
            let mut ys = Vec::new();
            if rhs.is_zero() {
                ys.push(f.zero());
            } else if let Some(y) = rhs.sqrt() {
                ys.push(y.clone());
                ys.push(y.neg());
            }
            for y in ys {
                let pt = ECPoint::Affine(x.clone(), y);
                if ec_scalar_mul(&ctx, curve, &n, &pt)?.is_infinity() {
                    count += 1;
                }
            }
        }
        last = count;
        if count == target {
            return Ok(count);
        }
    }
    if last == target {
        Ok(last)
    } else {
        Err(CurveError::BoundTooSmall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textexpr::parse_ratfunc_with;
    use std::collections::BTreeMap;

    fn e36() -> EllipticCurve {
        EllipticCurve::new(5, 0, 1).unwrap()
    }

    fn f5() -> Fq {
        Fq::new(5, 1).unwrap()
    }

    fn spec_pt(x: u64, y: u64) -> ECPoint<FqElem> {
        let f = f5();
        ECPoint::Affine(f.from_u64(x), f.from_u64(y))
    }

    #[test]
    fn supersingular_detection() {
        // y² = x³+1 over F_5 has 6 points, trace 0
        let e = e36();
        assert_eq!(e.count_points_over(1), 6);
        assert_eq!(e.trace(), 0);
        assert!(e.is_supersingular());
        // y² = x³+x over F_5: 2² = 4 ≡ −1 so x³+x has an extra symmetry; count it
        let e2 = EllipticCurve::new(5, 1, 0).unwrap();
        assert_eq!(e2.trace().rem_euclid(5) == 0, e2.is_supersingular());
    }

    #[test]
    fn addition_examples() {
        let e = e36();
        let ctx = SpecCtx { field: f5() };
        // P + O = P
        let p = spec_pt(0, 1);
        assert_eq!(ec_add(&ctx, &e, &p, &ECPoint::Infinity).unwrap(), p);
        // (0,1) + (0,4) = O (inverse pair)
        assert_eq!(ec_add(&ctx, &e, &p, &spec_pt(0, 4)).unwrap(), ECPoint::Infinity);
        // (0,1) + (2,2) = (2,3): λ = 3, x₃ = 9−0−2 = 2, y₃ = 3(0−2)−1 = 3
        assert_eq!(ec_add(&ctx, &e, &p, &spec_pt(2, 2)).unwrap(), spec_pt(2, 3));
    }

    #[test]
    fn scalar_multiples() {
        let e = e36();
        let ctx = SpecCtx { field: f5() };
        let p = spec_pt(0, 1);
        // (0,1) has order 3
        assert_eq!(ec_scalar_mul(&ctx, &e, &BigInt::from(2), &p).unwrap(), spec_pt(0, 4));
        assert!(ec_scalar_mul(&ctx, &e, &BigInt::from(3), &p).unwrap().is_infinity());
        assert!(ec_scalar_mul(&ctx, &e, &BigInt::from(0), &p).unwrap().is_infinity());
        // F² then negate equals 5·P, checked on (0,1): order 3 and 5 ≡ 2 (mod 3)
        let f2 = ec_frobenius(&ctx, &p, 2);
        assert_eq!(
            ec_negate(&ctx, &f2),
            ec_scalar_mul(&ctx, &e, &BigInt::from(5), &p).unwrap()
        );
    }

    #[test]
    fn symbolic_five_torsion_route() {
        // 5·(t, y) has x-coordinate t^25 on the supersingular curve
        let e = e36();
        let f = f5();
        let rf = |s: &str| parse_ratfunc_with(&f, &BTreeMap::new(), s).unwrap();
        let tower = SqrtTower::new(&f, vec![("s".into(), rf("t^3+1"))]);
        let ctx = SymCtx { tower: tower.clone() };
        let p = ECPoint::Affine(
            TowerElem::from_base(&tower, rf("t")),
            TowerElem::root(&tower, 0),
        );
        assert!(ec_on_curve(&ctx, &e, &p));
        let q = ec_scalar_mul(&ctx, &e, &BigInt::from(5), &p).unwrap();
        let x = q.x().unwrap().as_base().unwrap().clone();
        assert!(x.eq_exact(&rf("t^25")));
        // frobenius keeps points on the curve
        let fr = ec_frobenius(&ctx, &p, 1);
        assert!(ec_on_curve(&ctx, &e, &fr));
    }

    #[test]
    fn symbolic_vs_specialized_scalar_mul() {
        // specialize(m·P) = m·specialize(P) for random m, θ
        let e = e36();
        let f = f5();
        let big = Fq::new(5, 4).unwrap();
        let rf = |s: &str| parse_ratfunc_with(&f, &BTreeMap::new(), s).unwrap();
        let tower = SqrtTower::new(&f, vec![("s".into(), rf("t^3+1"))]);
        let sym = SymCtx { tower: tower.clone() };
        let p_sym = ECPoint::Affine(
            TowerElem::from_base(&tower, rf("t")),
            TowerElem::root(&tower, 0),
        );
        let mut rng = crate::testrng(23);
        let mut tried = 0;
        let mut done = 0;
        while done < 6 && tried < 200 {
            tried += 1;
            let sp = crate::specialize::Specialization::random(&big, &f, &mut rng);
            let rad = match sp.eval_ratfunc(tower.radicand(0)) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let root = match rad.sqrt() {
                Some(r) => r,
                None => continue,
            };
            let spec = SpecCtx { field: big.clone() };
            let p_spec = ECPoint::Affine(sp.theta().clone(), root.clone());
            for m in [2i64, 3, 7, 25, 50] {
                let lhs = ec_scalar_mul(&sym, &e, &BigInt::from(m), &p_sym).unwrap();
                let rhs = ec_scalar_mul(&spec, &e, &BigInt::from(m), &p_spec).unwrap();
                match (&lhs, &rhs) {
                    (ECPoint::Infinity, ECPoint::Infinity) => {}
                    (ECPoint::Affine(xs, ys), ECPoint::Affine(xr, yr)) => {
                        assert_eq!(&xs.specialize(&sp, &[root.clone()]).unwrap(), xr);
                        assert_eq!(&ys.specialize(&sp, &[root.clone()]).unwrap(), yr);
                    }
                    _ => panic!("specialization mismatch at m = {}", m),
                }
            }
            done += 1;
        }
        assert!(done > 0, "no usable specialization found");
    }

    #[test]
    fn frobenius_squared_is_negation_of_five() {
        // F²(P) = −(5·P) on 100 random specialized points
        let e = e36();
        let field = Fq::new(5, 3).unwrap();
        let ctx = SpecCtx { field: field.clone() };
        let mut rng = crate::testrng(31);
        for _ in 0..100 {
            let p = e.random_point(&field, &mut rng);
            let lhs = ec_frobenius(&ctx, &p, 2);
            let rhs = ec_negate(&ctx, &ec_scalar_mul(&ctx, &e, &BigInt::from(5), &p).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn division_poly_examples() {
        let e = e36();
        let f = f5();
        // m = 1: (x, 1)
        let (f1, g1) = division_poly(&e, 1);
        assert_eq!(f1, SparsePoly::var(&f));
        assert_eq!(g1, SparsePoly::one(&f));
        // m = 2 on y² = x³+1: x(2P) = (x⁴+2x)/(4x³+4) mod 5
        let (f2, g2) = division_poly(&e, 2);
        assert_eq!(f2, crate::textexpr::parse_poly(&f, "t^4 + 2*t").unwrap());
        assert_eq!(g2, crate::textexpr::parse_poly(&f, "4*t^3 + 4").unwrap());
        // degree and leading-coefficient normal form for p ∤ m
        for m in [2u64, 3, 4, 6, 7, 8, 9, 11, 12] {
            let (fm, gm) = division_poly(&e, m);
            assert_eq!(fm.degree().unwrap(), &BigUint::from(m * m), "deg f_{}", m);
            assert_eq!(
                gm.leading_coeff().unwrap(),
                &f.from_u64((m * m) % 5),
                "lc g_{}",
                m
            );
            assert!(fm.gcd(&gm).unwrap().degree().unwrap().is_zero(), "coprime pair at m = {}", m);
        }
        // evaluate at x = 0: x(2·(0,1)) = 0, matching 2·(0,1) = (0,4)
        let x0 = f.zero();
        assert!(f2.eval(&x0).is_zero());
        assert!(!g2.eval(&x0).is_zero());
    }

    #[test]
    fn division_poly_matches_scalar_mul() {
        // x(m·P) via (f_m, g_m) equals the x-coordinate of m·P, random points
        let e = e36();
        let field = Fq::new(5, 3).unwrap();
        let ctx = SpecCtx { field: field.clone() };
        let mut rng = crate::testrng(37);
        for m in 2u64..=12 {
            if m % 5 == 0 {
                continue;
            }
            let (fm, gm) = division_poly(&e, m);
            let fm_big = fm.map_coeffs(&field, |c| field.from_u64(c.coeffs()[0]));
            let gm_big = gm.map_coeffs(&field, |c| field.from_u64(c.coeffs()[0]));
            for _ in 0..10 {
                let p = e.random_point(&field, &mut rng);
                let x = p.x().unwrap();
                let mp = ec_scalar_mul(&ctx, &e, &BigInt::from(m), &p).unwrap();
                let denom = gm_big.eval(x);
                match mp {
                    ECPoint::Infinity => assert!(denom.is_zero()),
                    ECPoint::Affine(mx, _) => {
                        assert_eq!(fm_big.eval(x), mx.mul(&denom));
                    }
                }
            }
        }
    }

    #[test]
    fn torsion_counts() {
        let e = e36();
        assert_eq!(torsion_count(&e, 1, 2).unwrap(), 1);
        // E[2]: O, (4,0), and two points with x ∈ F_25 solving x³ = −1
        assert_eq!(torsion_count(&e, 2, 2).unwrap(), 4);
        // supersingular: no 5-torsion
        assert_eq!(torsion_count(&e, 5, 2).unwrap(), 1);
        assert_eq!(torsion_count(&e, 3, 2).unwrap(), 9);
        // bound too small to see the full 2-torsion over F_5
        assert_eq!(torsion_count(&e, 2, 1), Err(CurveError::BoundTooSmall));
    }

    #[test]
    fn group_law_properties() {
        // associativity and commutativity on random specialized points
        let e = e36();
        let field = Fq::new(5, 2).unwrap();
        let ctx = SpecCtx { field: field.clone() };
        let mut rng = crate::testrng(41);
        for _ in 0..30 {
            let p = e.random_point(&field, &mut rng);
            let q = e.random_point(&field, &mut rng);
            let r = e.random_point(&field, &mut rng);
            let pq_r = ec_add(&ctx, &e, &ec_add(&ctx, &e, &p, &q).unwrap(), &r).unwrap();
            let p_qr = ec_add(&ctx, &e, &p, &ec_add(&ctx, &e, &q, &r).unwrap()).unwrap();
            assert_eq!(pq_r, p_qr);
            assert_eq!(
                ec_add(&ctx, &e, &p, &q).unwrap(),
                ec_add(&ctx, &e, &q, &p).unwrap()
            );
            let minus_p = ec_negate(&ctx, &p);
            assert!(ec_add(&ctx, &e, &p, &minus_p).unwrap().is_infinity());
        }
    }

    #[test]
    fn symbolic_group_laws() {
        // associativity/commutativity/inverses hold in the tower field too
        let e = e36();
        let f = f5();
        let rf = |s: &str| parse_ratfunc_with(&f, &BTreeMap::new(), s).unwrap();
        let tower = SqrtTower::new(&f, vec![("s".into(), rf("t^3+1"))]);
        let ctx = SymCtx { tower: tower.clone() };
        let p = ECPoint::Affine(TowerElem::from_base(&tower, rf("t")), TowerElem::root(&tower, 0));
        let q = ec_scalar_mul(&ctx, &e, &BigInt::from(2), &p).unwrap();
        let r = ec_negate(&ctx, &p);
        let pq_r = ec_add(&ctx, &e, &ec_add(&ctx, &e, &p, &q).unwrap(), &r).unwrap();
        let p_qr = ec_add(&ctx, &e, &p, &ec_add(&ctx, &e, &q, &r).unwrap()).unwrap();
        assert_eq!(pq_r, p_qr);
        assert_eq!(
            ec_add(&ctx, &e, &p, &q).unwrap(),
            ec_add(&ctx, &e, &q, &p).unwrap()
        );
        assert!(ec_add(&ctx, &e, &p, &r).unwrap().is_infinity());
        assert!(ec_on_curve(&ctx, &e, &pq_r));
    }

    #[test]
    fn coordinate_mismatch_rejected() {
        let e = e36();
        let ctx = SpecCtx { field: f5() };
        let other = Fq::new(5, 2).unwrap();
        let p = spec_pt(0, 1);
        let q = ECPoint::Affine(other.from_u64(0), other.from_u64(1));
        assert_eq!(ec_add(&ctx, &e, &p, &q), Err(CurveError::CoordMismatch));
    }
}
