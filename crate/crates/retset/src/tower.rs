//! Multi-quadratic extensions of `F_{p^k}(t)`.
//!
//! Curve points over the function field have ordinates `√(x³+Ax+B)` that
//! live outside `F_{p^k}(t)`. A [`SqrtTower`] adjoins finitely many
//! square roots `s_i = √(r_i)` of rational functions; a [`TowerElem`] is
//! a linear combination of the products `∏ s_i^{ε_i}` with
//! rational-function coefficients, indexed by the bitmask ε.
//!
//! The radicands are assumed to be non-squares and multiplicatively
//! independent (true for every tower this crate constructs); under that
//! assumption an element is zero exactly when all its coefficients are.

use crate::field::Fq;
use crate::ratfunc::RatFunc;
use crate::specialize::{SpecError, Specialization};
use crate::field::FqElem;
use std::fmt;
use std::sync::Arc;

/// The tower `F_{p^k}(t)(√r_1, …, √r_m)`.
pub struct SqrtTower {
    field: Fq,
    radicands: Vec<RatFunc>,
    names: Vec<String>,
}

impl SqrtTower {
    /// The trivial tower: no roots adjoined.
    pub fn trivial(field: &Fq) -> Arc<SqrtTower> {
        Arc::new(SqrtTower { field: field.clone(), radicands: Vec::new(), names: Vec::new() })
    }

    pub fn new(field: &Fq, radicands: Vec<(String, RatFunc)>) -> Arc<SqrtTower> {
        assert!(radicands.len() <= 16, "too many adjoined roots");
        let (names, rads) = radicands.into_iter().map(|(n, r)| (n, r)).unzip();
        Arc::new(SqrtTower { field: field.clone(), radicands: rads, names })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn num_roots(&self) -> usize {
        self.radicands.len()
    }

    pub fn radicand(&self, i: usize) -> &RatFunc {
        &self.radicands[i]
    }

    pub fn root_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn root_name(&self, i: usize) -> &str {
        &self.names[i]
    }
}

impl fmt::Debug for SqrtTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tower with {} adjoined roots", self.radicands.len())
    }
}

/// An element `Σ_ε c_ε ∏ s_i^{ε_i}`; `c` has length `2^m`, indexed by ε.
#[derive(Clone)]
pub struct TowerElem {
    tower: Arc<SqrtTower>,
    c: Vec<RatFunc>,
}

impl TowerElem {
    pub fn zero(tower: &Arc<SqrtTower>) -> TowerElem {
        let n = 1 << tower.num_roots();
        TowerElem {
            tower: tower.clone(),
            c: (0..n).map(|_| RatFunc::zero(tower.field())).collect(),
        }
    }

    pub fn from_base(tower: &Arc<SqrtTower>, v: RatFunc) -> TowerElem {
        let mut e = TowerElem::zero(tower);
        e.c[0] = v;
        e
    }

    pub fn one(tower: &Arc<SqrtTower>) -> TowerElem {
        TowerElem::from_base(tower, RatFunc::one(tower.field()))
    }

    /// The adjoined root `s_i`.
    pub fn root(tower: &Arc<SqrtTower>, i: usize) -> TowerElem {
        assert!(i < tower.num_roots());
        let mut e = TowerElem::zero(tower);
        e.c[1 << i] = RatFunc::one(tower.field());
        e
    }

    pub fn tower(&self) -> &Arc<SqrtTower> {
        &self.tower
    }

    pub fn coeff(&self, mask: usize) -> &RatFunc {
        &self.c[mask]
    }

    /// The base-field part, when no root actually appears.
    pub fn as_base(&self) -> Option<&RatFunc> {
        if self.c[1..].iter().all(|v| v.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    fn compatible(&self, other: &TowerElem) -> bool {
        Arc::ptr_eq(&self.tower, &other.tower) || {
            self.tower.field() == other.tower.field()
                && self.tower.radicands.len() == other.tower.radicands.len()
                && self
                    .tower
                    .radicands
                    .iter()
                    .zip(&other.tower.radicands)
                    .all(|(a, b)| a.eq_exact(b))
        }
    }

    pub fn add(&self, other: &TowerElem) -> TowerElem {
        assert!(self.compatible(other), "mixed towers");
        TowerElem {
            tower: self.tower.clone(),
            c: self.c.iter().zip(&other.c).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &TowerElem) -> TowerElem {
        assert!(self.compatible(other), "mixed towers");
        TowerElem {
            tower: self.tower.clone(),
            c: self.c.iter().zip(&other.c).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> TowerElem {
        TowerElem { tower: self.tower.clone(), c: self.c.iter().map(|a| a.neg()).collect() }
    }

    pub fn mul(&self, other: &TowerElem) -> TowerElem {
        assert!(self.compatible(other), "mixed towers");
        let mut out = TowerElem::zero(&self.tower);
        for (m1, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m2, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                // s_i² = r_i on the carry bits
                let mut prod = a.mul(b);
                let carry = m1 & m2;
                for i in 0..self.tower.num_roots() {
                    if carry & (1 << i) != 0 {
                        prod = prod.mul(self.tower.radicand(i));
                    }
                }
                let mask = m1 ^ m2;
                out.c[mask] = out.c[mask].add(&prod);
            }
        }
        out
    }

    pub fn scale(&self, v: &RatFunc) -> TowerElem {
        TowerElem { tower: self.tower.clone(), c: self.c.iter().map(|a| a.mul(v)).collect() }
    }

    /// Inverse by the recursive conjugate trick: writing `x = A + B·s_m`
    /// over the subtower, `x⁻¹ = (A − B·s_m)/(A² − B²·r_m)`.
    pub fn inv(&self) -> Result<TowerElem, String> {
        if self.is_zero() {
            return Err("inverting zero tower element".into());
        }
        Ok(self.inv_level(self.tower.num_roots()))
    }

    fn inv_level(&self, level: usize) -> TowerElem {
        if level == 0 {
            let mut out = TowerElem::zero(&self.tower);
            out.c[0] = self.c[0].inv();
            return out;
        }
        let half = 1 << (level - 1);
        let (a, b) = self.split(level - 1);
        if b.is_zero_below(half) {
            // x = A: recurse directly
            let mut out = a.inv_level(level - 1);
            out.truncate_above(half);
            return out;
        }
        // norm = A² − B² r, an element of the subtower
        let r = TowerElem::from_base(&self.tower, self.tower.radicand(level - 1).clone());
        let norm = a.mul_low(&a, half).sub(&b.mul_low(&b, half).mul_low(&r, half));
        let norm_inv = norm.inv_level(level - 1);
        // (A − B s) · norm⁻¹
        let a_part = a.mul_low(&norm_inv, half);
        let b_part = b.mul_low(&norm_inv, half).neg();
        let mut out = TowerElem::zero(&self.tower);
        for m in 0..half {
            out.c[m] = a_part.c[m].clone();
            out.c[m | half] = b_part.c[m].clone();
        }
        out
    }

    /// Split on root `i`: (part without s_i, coefficient of s_i), both with
    /// coefficients stored in the low masks.
    fn split(&self, i: usize) -> (TowerElem, TowerElem) {
        let bit = 1 << i;
        let mut a = TowerElem::zero(&self.tower);
        let mut b = TowerElem::zero(&self.tower);
        for (m, v) in self.c.iter().enumerate() {
            if m & bit == 0 {
                a.c[m] = v.clone();
            } else {
                b.c[m & !bit] = v.clone();
            }
        }
        (a, b)
    }

    fn is_zero_below(&self, n: usize) -> bool {
        self.c[..n].iter().all(|v| v.is_zero())
    }

    fn truncate_above(&mut self, n: usize) {
        for v in self.c[n..].iter_mut() {
            *v = RatFunc::zero(self.tower.field());
        }
    }

    /// Multiplication restricted to masks below `n` (a subtower product).
    fn mul_low(&self, other: &TowerElem, n: usize) -> TowerElem {
        let mut out = TowerElem::zero(&self.tower);
        for m1 in 0..n {
            if self.c[m1].is_zero() {
                continue;
            }
            for m2 in 0..n {
                if other.c[m2].is_zero() {
                    continue;
                }
                let mut prod = self.c[m1].mul(&other.c[m2]);
                let carry = m1 & m2;
                for i in 0..self.tower.num_roots() {
                    if carry & (1 << i) != 0 {
                        prod = prod.mul(self.tower.radicand(i));
                    }
                }
                let mask = m1 ^ m2;
                out.c[mask] = out.c[mask].add(&prod);
            }
        }
        out
    }

    /// `x^{p^e}`: coefficients take the polynomial Frobenius and each root
    /// contributes `s_i^{p^e} = s_i · r_i^{(p^e−1)/2}`.
    pub fn frob_pow(&self, e: u64) -> TowerElem {
        if e == 0 {
            return self.clone();
        }
        let field = self.tower.field();
        let p = field.p();
        assert!(p % 2 == 1);
        // r^{(p^e−1)/2} built iteratively: c_{j+1} = frob(c_j) · r^{(p−1)/2};
        // computed only for roots that actually appear in a nonzero mask
        let root_factor = |r: &RatFunc| -> RatFunc {
            let base = r.pow((p - 1) / 2);
            let mut acc = base.clone();
            for _ in 1..e {
                acc = acc.frob_pow(1).mul(&base);
            }
            acc
        };
        let mut factors: Vec<Option<RatFunc>> = vec![None; self.tower.num_roots()];
        for (m, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (i, slot) in factors.iter_mut().enumerate() {
                if m & (1 << i) != 0 && slot.is_none() {
                    *slot = Some(root_factor(self.tower.radicand(i)));
                }
            }
        }
        let mut out = TowerElem::zero(&self.tower);
        for (m, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut coeff = v.frob_pow(e);
            for (i, fac) in factors.iter().enumerate() {
                if m & (1 << i) != 0 {
                    coeff = coeff.mul(fac.as_ref().expect("factor computed for used roots"));
                }
            }
            out.c[m] = out.c[m].add(&coeff);
        }
        out
    }

    /// Reduce every coefficient (gcd of numerator and denominator).
    pub fn reduce(&self) -> TowerElem {
        TowerElem { tower: self.tower.clone(), c: self.c.iter().map(|v| v.reduce()).collect() }
    }

    pub fn eq_exact(&self, other: &TowerElem) -> bool {
        self.sub(other).is_zero()
    }

    /// Largest degree bound among the coefficients, for error estimates.
    pub fn degree_bound(&self) -> num_bigint::BigUint {
        self.c.iter().map(|v| v.degree_bound()).max().unwrap_or_default()
    }

    /// Specialize at `t = θ` with the given root images. `roots[i]` must
    /// square to `r_i(θ)`; the caller fixes the signs.
    pub fn specialize(&self, sp: &Specialization, roots: &[FqElem]) -> Result<FqElem, SpecError> {
        assert_eq!(roots.len(), self.tower.num_roots());
        let mut acc = sp.target().zero();
        for (m, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut term = sp.eval_ratfunc(v)?;
            for (i, root) in roots.iter().enumerate() {
                if m & (1 << i) != 0 {
                    term = term.mul(root);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

/// Expression evaluation into a tower: `t`, named constants, and the
/// adjoined root names are in scope.
pub struct TowerRing<'a> {
    pub tower: &'a Arc<SqrtTower>,
    pub constants: &'a std::collections::BTreeMap<String, FqElem>,
}

impl crate::textexpr::ExprRing for TowerRing<'_> {
    type Val = TowerElem;

    fn from_int(&self, n: &num_bigint::BigInt) -> TowerElem {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let f = self.tower.field();
        let red = n.mod_floor(&num_bigint::BigInt::from(f.p())).to_u64().unwrap();
        TowerElem::from_base(self.tower, RatFunc::constant(f.from_u64(red)))
    }

    fn var(&self, name: &str) -> Result<TowerElem, String> {
        if name == "t" {
            return Ok(TowerElem::from_base(self.tower, RatFunc::var(self.tower.field())));
        }
        if let Some(i) = self.tower.root_index(name) {
            return Ok(TowerElem::root(self.tower, i));
        }
        if let Some(c) = self.constants.get(name) {
            return Ok(TowerElem::from_base(self.tower, RatFunc::constant(c.clone())));
        }
        Err(format!("unknown name '{}'", name))
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

    fn div(&self, a: &TowerElem, b: &TowerElem) -> Result<TowerElem, String> {
        Ok(a.mul(&b.inv()?))
    }

    fn pow(&self, a: &TowerElem, e: &num_bigint::BigUint) -> TowerElem {
        use num_traits::ToPrimitive;
        // base-field values ride the sparse characteristic-p power
        if let Some(base) = a.as_base() {
            if let Some(p) = base.as_poly() {
                return TowerElem::from_base(self.tower, RatFunc::from_poly(p.pow_big(e)));
            }
            return TowerElem::from_base(self.tower, base.pow_big(e));
        }
        let e = e.to_u64().expect("tower exponent too large");
        let mut acc = TowerElem::one(self.tower);
        for _ in 0..e {
            acc = acc.mul(a);
        }
        acc
    }
}

/// Parse an expression into a tower element.
pub fn parse_tower_elem(
    tower: &Arc<SqrtTower>,
    constants: &std::collections::BTreeMap<String, FqElem>,
    src: &str,
) -> Result<TowerElem, String> {
    let expr = crate::textexpr::parse(src)?;
    let ring = TowerRing { tower, constants };
    crate::textexpr::eval(&expr, &ring)
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", v)?;
            for i in 0..self.tower.num_roots() {
                if m & (1 << i) != 0 {
                    write!(f, "*{}", self.tower.root_name(i))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::textexpr::parse_ratfunc_with;
    use std::collections::BTreeMap;

    fn f5() -> Fq {
        Fq::new(5, 1).unwrap()
    }

    fn rf(s: &str) -> RatFunc {
        parse_ratfunc_with(&f5(), &BTreeMap::new(), s).unwrap()
    }

    fn curve_tower() -> Arc<SqrtTower> {
        // the two ordinates of Example points: √((t+1)³+1) and √(t³+1)
        SqrtTower::new(
            &f5(),
            vec![
                ("s1".to_string(), rf("(t+1)^3 + 1")),
                ("s2".to_string(), rf("t^3 + 1")),
            ],
        )
    }

    #[test]
    fn roots_square_to_radicands() {
        let tw = curve_tower();
        for i in 0..2 {
            let s = TowerElem::root(&tw, i);
            let sq = s.mul(&s);
            assert!(sq.as_base().unwrap().eq_exact(tw.radicand(i)));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let tw = curve_tower();
        let s1 = TowerElem::root(&tw, 0);
        let s2 = TowerElem::root(&tw, 1);
        let t = TowerElem::from_base(&tw, rf("t"));
        let x = t.add(&s1.scale(&rf("t+2"))).add(&s2).add(&s1.mul(&s2).scale(&rf("3")));
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi).eq_exact(&TowerElem::one(&tw)));
        // an element with only the s2 part
        let y = s2.scale(&rf("t^2+1"));
        assert!(y.mul(&y.inv().unwrap()).eq_exact(&TowerElem::one(&tw)));
    }

    #[test]
    fn frobenius_squares_consistently() {
        let tw = curve_tower();
        let s2 = TowerElem::root(&tw, 1);
        // (s2^p)² must equal (s2²)^p = (t³+1)^p
        let fr = s2.frob_pow(1);
        let lhs = fr.mul(&fr);
        let rhs = TowerElem::from_base(&tw, rf("t^3+1").frob_pow(1));
        assert!(lhs.eq_exact(&rhs));
        // and frobenius is multiplicative on a mixed element
        let x = s2.add(&TowerElem::from_base(&tw, rf("t")));
        let x2 = x.mul(&x);
        assert!(x2.frob_pow(1).eq_exact(&x.frob_pow(1).mul(&x.frob_pow(1))));
    }

    #[test]
    fn specialization_with_root_images() {
        let tw = curve_tower();
        let big = Fq::new(5, 2).unwrap();
        let mut rng = crate::testrng(17);
        // find θ where both radicands are squares
        'outer: for _ in 0..200 {
            let sp = Specialization::random(&big, &f5(), &mut rng);
            let mut roots = Vec::new();
            for i in 0..2 {
                let rv = match sp.eval_ratfunc(tw.radicand(i)) {
                    Ok(v) => v,
                    Err(_) => continue 'outer,
                };
                match rv.sqrt() {
                    Some(r) => roots.push(r),
                    None => continue 'outer,
                }
            }
            let s1 = TowerElem::root(&tw, 0);
            let v = s1.specialize(&sp, &roots).unwrap();
            assert_eq!(v.mul(&v), sp.eval_ratfunc(tw.radicand(0)).unwrap());
            return;
        }
        panic!("no usable specialization found");
    }
}
