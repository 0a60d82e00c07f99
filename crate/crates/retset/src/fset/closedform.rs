//! Closed forms for return sets of F-sets inside a cyclic group, and the
//! doubled-exponent coefficient fitting.
//!
//! When `Φ(g) = t·g` up to torsion with `t = ±p^e`, the orbit sums
//! telescope to `c + Σ l_i·(t^{n_i}−1)/(t−1)`, an exponential-sum set.
//! For `t > 0` that is a single term; for `t < 0` the set splits over the
//! parities of the `n_i` into `2^d` terms in `t²`.

use super::module::FsetError;
use crate::setalg::{Domain, PSetTerm, SetError, SetExpr, Term};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `{c + Σ l_i (t^{n_i}−1)/(t−1)}` as a set expression over ℤ.
/// `t` must be `±p^e` with `e ≥ 1`; vanishing `l_i` are absorbed into
/// the constant.
pub fn cyclic_closed_form(
    p: u64,
    c: &BigInt,
    l: &[BigInt],
    t: &BigInt,
) -> Result<SetExpr, FsetError> {
    let t_abs = t.magnitude().clone();
    if !crate::setalg::is_prime_power_of(&t_abs, p) {
        return Err(FsetError::BadSpec(format!("t = {} is not ±(power of {})", t, p)));
    }
    let l: Vec<BigInt> = l.iter().filter(|v| !v.is_zero()).cloned().collect();
    if l.is_empty() {
        return Ok(SetExpr::new(
            p,
            Domain::Int,
            vec![Term::Ap { start: c.clone(), step: BigUint::zero() }],
        ));
    }
    let mk = |terms: Vec<Term>| SetExpr::new(p, Domain::Int, terms);
    if t.is_positive() {
        let term = PSetTerm::from_geometric(p, t_abs, c.clone(), l.iter().map(|v| vec![v.clone()]).collect())
            .map_err(set_to_fset)?;
        return Ok(mk(vec![Term::PSet(term)]));
    }
    // negative t: split over parities ε ∈ {0,1}^d in q = t²
    let q = (&t_abs * &t_abs).clone();
    let d = l.len();
    let tm1 = t - BigInt::one();
    let mut terms = Vec::with_capacity(1 << d);
    for eps in 0..(1u32 << d) {
        // c0 = c − Σ l_i/(t−1); coefficient row i: l_i·t^{ε_i}/(t−1)
        let mut c0 = BigRational::from_integer(c.clone());
        let mut rows = Vec::with_capacity(d);
        for (i, li) in l.iter().enumerate() {
            c0 -= BigRational::new(li.clone(), tm1.clone());
            let scale = if eps & (1 << i) != 0 { t.clone() } else { BigInt::one() };
            rows.push(vec![BigRational::new(li * scale, tm1.clone())]);
        }
        let term = PSetTerm::new(p, q.clone(), c0, rows).map_err(set_to_fset)?;
        terms.push(Term::PSet(term));
    }
    Ok(mk(terms))
}

fn set_to_fset(e: SetError) -> FsetError {
    FsetError::BadSpec(e.to_string())
}

/// Fit `l_n = Σ_{j=0}^{r−1} c_j·q^{2^j·n}` to the samples: solve the
/// generalized Vandermonde system on the first `r` samples, verify every
/// remaining sample exactly, and verify the telescoping structure
/// `l_{n+1} − q·l_n = Σ_{j≥1} c_j (q^{2^j} − q) q^{2^j n}`.
/// Returns failure, never a guess.
pub fn fit_doubling_powers(
    samples: &[BigInt],
    q: &BigInt,
    r: usize,
) -> Result<Vec<BigRational>, FsetError> {
    if samples.len() < r + 3 {
        return Err(FsetError::BadSpec(format!(
            "need at least r + 3 = {} samples, got {}",
            r + 3,
            samples.len()
        )));
    }
    if *q < BigInt::from(2) {
        return Err(FsetError::BadSpec("q must be at least 2".into()));
    }
    // nodes q^{2^j}; distinct for q > 1, so the system is never singular
    let nodes: Vec<BigInt> = (0..r).map(|j| pow_big(q, 1u64 << j)).collect();
    let coeffs = if r == 0 {
        Vec::new()
    } else {
        let mut mat: Vec<Vec<BigRational>> = (0..r)
            .map(|n| {
                nodes
                    .iter()
                    .map(|node| BigRational::from_integer(pow_big(node, n as u64)))
                    .collect()
            })
            .collect();
        let mut rhs: Vec<BigRational> =
            samples[..r].iter().map(|v| BigRational::from_integer(v.clone())).collect();
        solve_dense(&mut mat, &mut rhs).ok_or_else(|| {
            FsetError::BadSpec("vandermonde system is singular (impossible for q > 1)".into())
        })?
    };
    // exact verification of all samples
    for (n, sample) in samples.iter().enumerate() {
        let mut acc = BigRational::zero();
        for (j, cj) in coeffs.iter().enumerate() {
            acc += cj * BigRational::from_integer(pow_big(&nodes[j], n as u64));
        }
        if &acc != &BigRational::from_integer(sample.clone()) {
            return Err(FsetError::BadSpec(format!(
                "sample l_{} = {} is not of the fitted doubled-power form",
                n, sample
            )));
        }
    }
    // telescoping: l'_n = l_{n+1} − q·l_n loses the j = 0 layer
    for n in 0..samples.len() - 1 {
        let lhs = &samples[n + 1] - q * &samples[n];
        let mut rhs = BigRational::zero();
        for (j, cj) in coeffs.iter().enumerate().skip(1) {
            let factor = BigRational::from_integer(&nodes[j] - q);
            rhs += cj * factor * BigRational::from_integer(pow_big(&nodes[j], n as u64));
        }
        if BigRational::from_integer(lhs) != rhs {
            return Err(FsetError::BadSpec(format!(
                "telescoping identity fails at n = {}",
                n
            )));
        }
    }
    Ok(coeffs)
}

fn pow_big(b: &BigInt, e: u64) -> BigInt {
    b.pow(u32::try_from(e).expect("exponent too large"))
}

/// Gaussian elimination over ℚ; `None` on a singular system.
fn solve_dense(mat: &mut [Vec<BigRational>], rhs: &mut [BigRational]) -> Option<Vec<BigRational>> {
    let n = mat.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = mat[col][col].recip();
        for c in col..n {
            mat[col][c] = &mat[col][c] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in col..n {
                mat[r][c] = &mat[r][c] - &factor * &mat[col][c];
            }
            rhs[r] = &rhs[r] - &factor * &rhs[col];
        }
    }
    Some(rhs.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_positive_t() {
        // c=0, d=1, l₁=4, t=5 → {5ⁿ − 1}
        let e = cyclic_closed_form(5, &BigInt::zero(), &[BigInt::from(4)], &BigInt::from(5)).unwrap();
        assert_eq!(
            e.window(&BigInt::from(130)).unwrap(),
            [0, 4, 24, 124].map(BigInt::from).to_vec()
        );
    }

    #[test]
    fn closed_form_negative_t_splits() {
        // c=0, d=1, l₁=6, t=−5: values 1−25^m and 1+5·25^m
        let e = cyclic_closed_form(5, &BigInt::zero(), &[BigInt::from(6)], &BigInt::from(-5)).unwrap();
        assert_eq!(e.terms().len(), 2);
        // nonnegative window picks up {0, 6, 126, 3126}
        assert_eq!(
            e.window(&BigInt::from(3200)).unwrap(),
            [0, 6, 126, 3126].map(BigInt::from).to_vec()
        );
        // membership on the negative side: 1 − 25 = −24
        assert!(e.member(&BigInt::from(-24), 8).is_yes());
        assert!(e.member(&BigInt::from(-23), 8).is_no());
    }

    #[test]
    fn closed_form_absorbs_zero_coefficients() {
        let e = cyclic_closed_form(5, &BigInt::from(7), &[BigInt::zero()], &BigInt::from(5)).unwrap();
        assert_eq!(e.window(&BigInt::from(100)).unwrap(), vec![BigInt::from(7)]);
    }

    /// The independent oracle: orbit sums accumulated term by term.
    fn orbit_sum(c: &BigInt, l: &[BigInt], t: &BigInt, ns: &[u64]) -> BigInt {
        let mut acc = c.clone();
        for (li, &ni) in l.iter().zip(ns) {
            let mut power = BigInt::one();
            for _ in 0..ni {
                acc += li * &power;
                power *= t;
            }
        }
        acc
    }

    /// All orbit sums with `n_i ≤ cap`, via iterated addition.
    fn orbit_image(c: &BigInt, l: &[BigInt], t: &BigInt, cap: u64) -> std::collections::BTreeSet<BigInt> {
        let d = l.len().max(1);
        let mut image = std::collections::BTreeSet::new();
        let mut ns = vec![0u64; d];
        'outer: loop {
            let v = if l.is_empty() { c.clone() } else { orbit_sum(c, l, t, &ns) };
            image.insert(v);
            let mut i = 0;
            loop {
                if i == d {
                    break 'outer;
                }
                ns[i] += 1;
                if ns[i] <= cap {
                    break;
                }
                ns[i] = 0;
                i += 1;
            }
        }
        image
    }

    /// The two routes agree: iterated orbit sums on one side, the fitted
    /// term values on the other. For positive `t` the parametrizations
    /// coincide; for negative `t` the term values cover the orbit sums
    /// through the parity split `n_i = 2m_i + ε_i`.
    pub(crate) fn check_closed_form_against_orbit_sums(
        c: &BigInt,
        l: &[BigInt],
        t: &BigInt,
        cap: u64,
    ) {
        let expr = cyclic_closed_form(5, c, l, t).unwrap();
        let image = orbit_image(c, l, t, cap);
        // collect all term values over the matching parameter grid
        let mut values = std::collections::BTreeSet::new();
        let l_clean: Vec<BigInt> = l.iter().filter(|v| !v.is_zero()).cloned().collect();
        let d = l_clean.len();
        if d == 0 {
            assert_eq!(image, [c.clone()].into_iter().collect());
            return;
        }
        let half_cap = if t.is_negative() { cap / 2 } else { cap };
        for term in expr.terms() {
            let pset = match term {
                crate::setalg::Term::PSet(ps) => ps,
                other => panic!("unexpected term {}", other),
            };
            let mut ns = vec![0u64; d];
            'grid: loop {
                let v = pset.value(&ns);
                assert!(v.is_integer());
                values.insert(v.to_integer());
                let mut i = 0;
                loop {
                    if i == d {
                        break 'grid;
                    }
                    ns[i] += 1;
                    if ns[i] <= half_cap {
                        break;
                    }
                    ns[i] = 0;
                    i += 1;
                }
            }
        }
        // orbit sums with n_i ≤ cap are exactly covered
        for v in &image {
            assert!(values.contains(v), "orbit sum {} missing (t = {})", v, t);
        }
        // and term values on the restricted grid come from orbit sums
        let wide = orbit_image(c, &l_clean, t, 2 * cap + 2);
        for v in &values {
            assert!(wide.contains(v), "term value {} has no orbit preimage (t = {})", v, t);
        }
    }

    #[test]
    fn closed_form_matches_orbit_sums() {
        use rand::Rng;
        let mut rng = crate::testrng(71);
        for _ in 0..50 {
            let d = rng.gen_range(1..=3usize);
            let e = rng.gen_range(1..=2u32);
            let t = BigInt::from(5).pow(e) * if rng.gen() { 1 } else { -1 };
            let c = BigInt::from(rng.gen_range(-10..=10i64));
            let l: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-6..=6i64))).collect();
            check_closed_form_against_orbit_sums(&c, &l, &t, 8);
        }
    }

    #[test]
    fn fitting_examples() {
        // q=25, l_n = 3·25ⁿ + 2·625ⁿ → (3, 2)
        let q = BigInt::from(25);
        let samples: Vec<BigInt> = (0..6u32)
            .map(|n| BigInt::from(3) * BigInt::from(25).pow(n) + BigInt::from(2) * BigInt::from(625).pow(n))
            .collect();
        assert_eq!(samples[0], BigInt::from(5));
        assert_eq!(samples[1], BigInt::from(1325));
        assert_eq!(samples[2], BigInt::from(783125));
        let c = fit_doubling_powers(&samples, &q, 2).unwrap();
        assert_eq!(c, vec![
            BigRational::from_integer(BigInt::from(3)),
            BigRational::from_integer(BigInt::from(2))
        ]);
        // all-zero samples → all coefficients zero
        let zeros = vec![BigInt::zero(); 6];
        assert_eq!(fit_doubling_powers(&zeros, &q, 2).unwrap(), vec![BigRational::zero(); 2]);
        // samples 1, 26, 626 with r = 1: not a single q-power family
        let bad = [1, 26, 626, 15626].map(BigInt::from);
        assert!(fit_doubling_powers(&bad, &BigInt::from(25), 1).is_err());
    }

    #[test]
    fn telescoping_holds_on_random_fits() {
        use rand::Rng;
        let mut rng = crate::testrng(73);
        for _ in 0..50 {
            let r = rng.gen_range(1..=3usize);
            let q = BigInt::from(5);
            let cs: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(-9..=9i64))).collect();
            let samples: Vec<BigInt> = (0..=(r as u32 + 20))
                .map(|n| {
                    (0..r)
                        .map(|j| &cs[j] * pow_big(&q, (1u64 << j) * n as u64))
                        .fold(BigInt::zero(), |a, b| a + b)
                })
                .collect();
            let fitted = fit_doubling_powers(&samples, &q, r).unwrap();
            for (j, c) in cs.iter().enumerate() {
                assert_eq!(fitted[j], BigRational::from_integer(c.clone()));
            }
        }
    }
}
