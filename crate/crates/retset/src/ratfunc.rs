//! Rational functions over `F_{p^k}(t)`, kept unnormalized.
//!
//! A value is a numerator/denominator pair of sparse polynomials with no
//! gcd reduction on the hot paths: equality is cross-multiplicative
//! (`a/b = c/d ⟺ ad = cb`), so huge-exponent values never meet a gcd.
//! An explicit [`RatFunc::reduce`] exists for the symbolic chord–tangent
//! path, where unreduced degrees would otherwise double per step; it
//! only fires on machine-size degrees.

use crate::field::{Fq, FqElem};
use crate::poly::SparsePoly;
use crate::specialize::{SpecError, Specialization};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use std::fmt;

/// A rational function `num/den`, `den ≠ 0`.
#[derive(Clone)]
pub struct RatFunc {
    num: SparsePoly,
    den: SparsePoly,
}

/// Result of an equality test that may have gone through specialization.
#[derive(Clone, Debug, PartialEq)]
pub enum EqVerdict {
    /// Cross-multiplied polynomials compared identical.
    EqualExact,
    /// All sample specializations agreed; false-accept probability bounded.
    EqualProbable { error_bound: f64 },
    NotEqual,
}

impl EqVerdict {
    pub fn holds(&self) -> bool {
        !matches!(self, EqVerdict::NotEqual)
    }

    /// True when the verdict came from the probabilistic path.
    pub fn probabilistic(&self) -> bool {
        matches!(self, EqVerdict::EqualProbable { .. })
    }
}

impl RatFunc {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert!(num.field() == den.field());
        RatFunc { num, den }
    }

    pub fn from_poly(num: SparsePoly) -> Self {
        let den = SparsePoly::one(num.field());
        RatFunc { num, den }
    }

    pub fn constant(c: FqElem) -> Self {
        RatFunc::from_poly(SparsePoly::constant(c))
    }

    pub fn zero(field: &Fq) -> Self {
        RatFunc::from_poly(SparsePoly::zero(field))
    }

    pub fn one(field: &Fq) -> Self {
        RatFunc::from_poly(SparsePoly::one(field))
    }

    pub fn var(field: &Fq) -> Self {
        RatFunc::from_poly(SparsePoly::var(field))
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial, when the denominator is a constant.
    pub fn as_poly(&self) -> Option<SparsePoly> {
        if self.den.degree().map_or(true, |d| d.to_u64() == Some(0)) {
            let c = self.den.constant_term();
            let cinv = c.inv().ok()?;
            Some(self.num.scale(&cinv))
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        assert!(!other.is_zero(), "division by zero rational function");
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverting zero");
        RatFunc { num: self.den.clone(), den: self.num.clone() }
    }

    pub fn pow_big(&self, e: &BigUint) -> RatFunc {
        RatFunc::new(self.num.pow_big(e), self.den.pow_big(e))
    }

    pub fn pow(&self, e: u64) -> RatFunc {
        self.pow_big(&BigUint::from(e))
    }

    /// Termwise `p^e`-th power of numerator and denominator.
    pub fn frob_pow(&self, e: u64) -> RatFunc {
        RatFunc { num: self.num.frob_pow(e), den: self.den.frob_pow(e) }
    }

    /// Exact equality by cross-multiplication.
    pub fn eq_exact(&self, other: &RatFunc) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Equality with a probabilistic fallback above a term-count
    /// threshold: `samples` independent specializations into `F_{p^k}`
    /// with `k = field_degree`. Per specialization the false-accept
    /// probability is at most (degree bound of the cross-multiplied
    /// difference) / p^k; the bounds multiply across samples.
    pub fn eq(&self, other: &RatFunc, threshold: usize, samples: usize, field_degree: usize, seed: u64) -> EqVerdict {
        let work = self
            .num
            .num_terms()
            .saturating_mul(other.den.num_terms())
            .saturating_add(other.num.num_terms().saturating_mul(self.den.num_terms()));
        if work <= threshold {
            return if self.eq_exact(other) { EqVerdict::EqualExact } else { EqVerdict::NotEqual };
        }
        let target = Fq::new(self.field().p(), field_degree).expect("specialization field");
        let diff_deg = [&self.num, &self.den, &other.num, &other.den]
            .iter()
            .filter_map(|p| p.degree())
            .fold(BigUint::one(), |acc, d| acc + d);
        let q_f = big_to_f64(target.order());
        let per = (big_to_f64(&diff_deg) / q_f).min(1.0);
        let mut bound = 1.0f64;
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut done = 0;
        let mut attempts = 0;
        while done < samples {
            attempts += 1;
            assert!(attempts < 100 * samples + 100, "could not find good specializations");
            let sp = Specialization::random(&target, self.field(), &mut rng);
            let l = sp.eval_ratfunc(self);
            let r = sp.eval_ratfunc(other);
            match (l, r) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        return EqVerdict::NotEqual;
                    }
                    bound *= per;
                    done += 1;
                }
                // denominator vanished at θ: retry with a fresh point
                _ => continue,
            }
        }
        EqVerdict::EqualProbable { error_bound: bound }
    }

    /// Remove the gcd of numerator and denominator and normalize the
    /// denominator to be monic. Only applies when both degrees fit in
    /// machine range; otherwise returns self unchanged.
    pub fn reduce(&self) -> RatFunc {
        let in_range = |p: &SparsePoly| p.degree().map_or(true, |d| d.to_u64().is_some());
        if !in_range(&self.num) || !in_range(&self.den) {
            return self.clone();
        }
        match self.num.gcd(&self.den) {
            Some(g) if g.degree().map_or(false, |d| !num_traits::Zero::is_zero(d)) => {
                let (n, _) = self.num.div_rem(&g).unwrap();
                let (d, _) = self.den.div_rem(&g).unwrap();
                normalize_monic(n, d)
            }
            Some(_) => normalize_monic(self.num.clone(), self.den.clone()),
            None => self.clone(),
        }
    }

    /// Degree bound `max(deg num, deg den)`, used for error estimates.
    pub fn degree_bound(&self) -> BigUint {
        let dn = self.num.degree().cloned().unwrap_or_default();
        let dd = self.den.degree().cloned().unwrap_or_default();
        dn.max(dd)
    }

    /// Evaluate at `t = θ`; errors when the denominator vanishes.
    pub fn eval(&self, theta: &FqElem) -> Result<FqElem, SpecError> {
        let d = self.den.eval(theta);
        if d.is_zero() {
            return Err(SpecError::BadSpecialization);
        }
        Ok(self.num.eval(theta).mul(&d.inv().unwrap()))
    }
}

fn normalize_monic(num: SparsePoly, den: SparsePoly) -> RatFunc {
    if let Some(lc) = den.leading_coeff().cloned() {
        if let Ok(lcinv) = lc.inv() {
            return RatFunc::new(num.scale(&lcinv), den.scale(&lcinv));
        }
    }
    RatFunc::new(num, den)
}

pub(crate) fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::MAX)
}

/// Structural equality (same num, same den). Mathematical equality is
/// [`RatFunc::eq_exact`]; this impl exists so containers can compare.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree().map_or(true, |d| num_traits::Zero::is_zero(d))
            && self.den.constant_term().is_one()
        {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
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

    #[test]
    fn cross_multiplicative_equality() {
        // (t²−1)/(t−1) = t+1 without any normalization
        let a = rf("(t^2 - 1)/(t - 1)");
        let b = rf("t + 1");
        assert!(a.eq_exact(&b));
        assert!(!rf("t").eq_exact(&rf("t + 1")));
    }

    #[test]
    fn alpha_square_identity() {
        // (t+α)² + (t−α)² = 2t² + 2α² over F_25
        let f25 = Fq::new(5, 2).unwrap();
        let mut consts = BTreeMap::new();
        consts.insert("a".to_string(), f25.multiplicative_generator());
        let lhs = parse_ratfunc_with(&f25, &consts, "(t+a)^2 + (t-a)^2").unwrap();
        let rhs = parse_ratfunc_with(&f25, &consts, "2*t^2 + 2*a^2").unwrap();
        assert!(lhs.eq_exact(&rhs));
        // and it fails at exponent 3: (t+α)³+(t−α)³ = 2t³+6tα² ≠ 2t³+2α²
        let lhs3 = parse_ratfunc_with(&f25, &consts, "(t+a)^3 + (t-a)^3").unwrap();
        let rhs3 = parse_ratfunc_with(&f25, &consts, "2*t^3 + 2*a^2").unwrap();
        assert!(!lhs3.eq_exact(&rhs3));
    }

    #[test]
    fn probabilistic_path_agrees_with_exact() {
        let a = rf("(t^2 - 1)/(t - 1)");
        let b = rf("t + 1");
        // threshold 0 forces the specialization path
        let v = a.eq(&b, 0, 4, 8, 12345);
        assert!(v.probabilistic());
        assert!(v.holds());
        match v {
            EqVerdict::EqualProbable { error_bound } => assert!(error_bound < 1e-6),
            _ => unreachable!(),
        }
        assert_eq!(rf("t").eq(&rf("t+1"), 0, 4, 8, 99), EqVerdict::NotEqual);
    }

    #[test]
    fn exact_and_specialization_paths_agree() {
        // random pairs small enough for both routes: the verdicts match
        let mut rng = crate::testrng(29);
        let f = f5();
        use rand::Rng;
        let mut randrf = |rng: &mut rand::rngs::StdRng| {
            let num = SparsePoly::from_int_coeffs(
                &f,
                &(0..4).map(|_| rng.gen_range(0..5)).collect::<Vec<i64>>(),
            );
            let mut den = SparsePoly::zero(&f);
            while den.is_zero() {
                den = SparsePoly::from_int_coeffs(
                    &f,
                    &(0..3).map(|_| rng.gen_range(0..5)).collect::<Vec<i64>>(),
                );
            }
            RatFunc::new(num, den)
        };
        let mut equal_seen = 0;
        for seed in 0..80u64 {
            let a = randrf(&mut rng);
            // half the trials compare a against a disguised rewriting of itself
            let b = if seed % 2 == 0 {
                randrf(&mut rng)
            } else {
                let scale = SparsePoly::from_int_coeffs(&f, &[2, 3]);
                RatFunc::new(a.num().mul(&scale), a.den().mul(&scale))
            };
            let exact = a.eq_exact(&b);
            let sampled = a.eq(&b, 0, 4, 10, seed).holds();
            assert_eq!(exact, sampled, "paths disagree on {} vs {}", a, b);
            if exact {
                equal_seen += 1;
            }
        }
        assert!(equal_seen >= 40, "rewriting trials must exercise the equal case");
    }

    #[test]
    fn reduce_strips_common_factors() {
        let a = rf("(t^3 + t^2)/(t^2)");
        let r = a.reduce();
        assert!(r.eq_exact(&rf("t + 1")));
        assert_eq!(r.num().degree().unwrap(), &num_bigint::BigUint::from(1u32));
    }

    #[test]
    fn equality_is_an_equivalence() {
        let mut rng = crate::testrng(3);
        let f = f5();
        let randrf = |rng: &mut rand::rngs::StdRng| {
            use rand::Rng;
            let num = SparsePoly::from_int_coeffs(
                &f,
                &(0..4).map(|_| rng.gen_range(0..5)).collect::<Vec<i64>>(),
            );
            let mut den = SparsePoly::zero(&f);
            while den.is_zero() {
                den = SparsePoly::from_int_coeffs(
                    &f,
                    &(0..3).map(|_| rng.gen_range(0..5)).collect::<Vec<i64>>(),
                );
            }
            RatFunc::new(num, den)
        };
        for _ in 0..50 {
            let a = randrf(&mut rng);
            let b = randrf(&mut rng);
            let c = randrf(&mut rng);
            assert!(a.eq_exact(&a));
            assert_eq!(a.eq_exact(&b), b.eq_exact(&a));
            if a.eq_exact(&b) && b.eq_exact(&c) {
                assert!(a.eq_exact(&c));
            }
        }
    }
}
