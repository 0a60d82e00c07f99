//! Linear-recurrence coordinate sequences and eventual periods.
//!
//! For a monic `P(x) = x^s + a_{s−1}x^{s−1} + … + a_0` annihilating `Φ`,
//! the basis sequences `c_j` satisfy `c_j(i) = δ_{ij}` for `i < s` and
//! the recurrence of `P`, and give the expansion
//! `Φ^n(α) = Σ_j c_j(n)·Φ^j(α)` for every `n ≥ 0`.

use super::module::{FrobeniusSpec, FsetError, ModElem};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;

/// A linear recurrence with monic characteristic polynomial and explicit
/// initial values.
#[derive(Clone, Debug)]
pub struct LinRecSeq {
    /// Little-endian `[a_0, …, a_{s−1}, 1]`.
    charpoly: Vec<BigInt>,
    init: Vec<BigInt>,
}

impl LinRecSeq {
    pub fn new(charpoly: Vec<BigInt>, init: Vec<BigInt>) -> Result<LinRecSeq, FsetError> {
        let s = charpoly.len().saturating_sub(1);
        if s == 0 || charpoly.last() != Some(&BigInt::from(1)) {
            return Err(FsetError::BadSpec("characteristic polynomial must be monic".into()));
        }
        if init.len() != s {
            return Err(FsetError::BadSpec("need s initial values".into()));
        }
        Ok(LinRecSeq { charpoly, init })
    }

    pub fn order(&self) -> usize {
        self.init.len()
    }

    /// First `n+1` values.
    pub fn prefix(&self, n: u64) -> Vec<BigInt> {
        let s = self.order();
        let mut vals = self.init.clone();
        while (vals.len() as u64) <= n {
            let k = vals.len();
            let mut next = BigInt::zero();
            for i in 0..s {
                next -= &self.charpoly[i] * &vals[k - s + i];
            }
            vals.push(next);
        }
        vals.truncate(n as usize + 1);
        vals
    }

    pub fn value(&self, n: u64) -> BigInt {
        self.prefix(n).pop().unwrap()
    }

    /// Minimal `(preperiod, period)` of the value sequence modulo `m`,
    /// found by cycle detection on the length-`s` state vector and then
    /// minimized on the values themselves.
    pub fn period_mod(&self, m: u64) -> (u64, u64) {
        assert!(m >= 1);
        let s = self.order();
        let reduce = |v: &BigInt| -> u64 {
            use num_integer::Integer;
            u64::try_from(v.mod_floor(&BigInt::from(m))).unwrap()
        };
        let mut state: Vec<u64> = self.init.iter().map(&reduce).collect();
        let charpoly_mod: Vec<u64> = self.charpoly.iter().map(&reduce).collect();
        let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
        let mut values: Vec<u64> = Vec::new();
        let mut n = 0u64;
        let (mu_s, lambda_s) = loop {
            if let Some(&first) = seen.get(&state) {
                break (first, n - first);
            }
            seen.insert(state.clone(), n);
            values.push(state[0]);
            // advance one step: append recurrence value, drop the head
            let mut next = 0u128;
            for i in 0..s {
                let term = (charpoly_mod[i] as u128 * state[i] as u128) % m as u128;
                next = (next + (m as u128 * m as u128) - term) % m as u128;
            }
            state.rotate_left(1);
            state[s - 1] = (next % m as u128) as u64;
            n += 1;
        };
        // ensure the full first period of values is materialized
        while (values.len() as u64) < mu_s + lambda_s {
            values.push(0); // unreachable: states cover this range
        }
        minimal_value_period(&values, mu_s, lambda_s)
    }
}

/// Shrink a state-level `(μ, λ)` to the minimal value-level pair.
fn minimal_value_period(values: &[u64], mu_s: u64, lambda_s: u64) -> (u64, u64) {
    let period_ok = |mu: u64, lambda: u64| -> bool {
        // compare values on [mu, mu_s + lambda_s) against their shift
        let hi = mu_s + lambda_s;
        (mu..hi.saturating_sub(lambda)).all(|n| {
            let a = value_at(values, n, mu_s, lambda_s);
            let b = value_at(values, n + lambda, mu_s, lambda_s);
            a == b
        })
    };
    let mut lambda = lambda_s;
    for l in 1..=lambda_s {
        if lambda_s % l == 0 && period_ok(mu_s, l) {
            lambda = l;
            break;
        }
    }
    let mut mu = mu_s;
    while mu > 0 && period_ok(mu - 1, lambda) {
        mu -= 1;
    }
    (mu, lambda)
}

fn value_at(values: &[u64], n: u64, mu_s: u64, lambda_s: u64) -> u64 {
    if n < values.len() as u64 {
        values[n as usize]
    } else {
        let idx = mu_s + (n - mu_s) % lambda_s;
        values[idx as usize]
    }
}

/// The basis sequences `c_0, …, c_{s−1}` for a monic polynomial.
pub fn recurrence_basis(charpoly: &[BigInt]) -> Result<Vec<LinRecSeq>, FsetError> {
    let s = charpoly.len().saturating_sub(1);
    if s == 0 || charpoly.last() != Some(&BigInt::from(1)) {
        return Err(FsetError::BadSpec("polynomial must be monic of positive degree".into()));
    }
    Ok((0..s)
        .map(|j| {
            let init = (0..s).map(|i| BigInt::from(u8::from(i == j))).collect();
            LinRecSeq::new(charpoly.to_vec(), init).unwrap()
        })
        .collect())
}

/// `Φ^n(α)` through the expansion `Σ_j c_j(n)·Φ^j(α)`; for small `n` this
/// equals direct iteration (cross-checked in tests).
pub fn phi_power_apply(spec: &FrobeniusSpec, n: u64, alpha: &ModElem) -> ModElem {
    let s = spec.degree();
    let basis = recurrence_basis(spec.charpoly()).expect("validated charpoly");
    let mut acc = spec.module().zero();
    let mut phi_j = alpha.clone();
    for basis_j in basis.iter().take(s) {
        let cj = basis_j.value(n);
        acc = spec.module().add(&acc, &spec.module().scalar_mul(&cj, &phi_j));
        phi_j = spec.apply(&phi_j);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fset::module::{EigenData, FgModule};

    fn seq(charpoly: &[i64], init: &[i64]) -> LinRecSeq {
        LinRecSeq::new(
            charpoly.iter().map(|&c| BigInt::from(c)).collect(),
            init.iter().map(|&c| BigInt::from(c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn basis_examples() {
        // P = x² − 3x + 2: c₀(n) = 2 − 2ⁿ, c₁(n) = 2ⁿ − 1
        let basis = recurrence_basis(&[2, -3, 1].map(BigInt::from)).unwrap();
        assert_eq!(basis[0].value(2), BigInt::from(-2)); // 3·0 − 2·1
        for n in 0..10u64 {
            let two_n = BigInt::from(2).pow(n as u32);
            assert_eq!(basis[0].value(n), BigInt::from(2) - &two_n);
            assert_eq!(basis[1].value(n), &two_n - BigInt::from(1));
        }
        // P = x − 5: c₀(n) = 5ⁿ
        let basis5 = recurrence_basis(&[-5, 1].map(BigInt::from)).unwrap();
        assert_eq!(basis5[0].value(3), BigInt::from(125));
        // P = x² − 5x (root 0): c₁(3) = 25
        let basis0 = recurrence_basis(&[0, -5, 1].map(BigInt::from)).unwrap();
        assert_eq!(basis0[1].value(3), BigInt::from(25));
    }

    #[test]
    fn period_examples() {
        // 5ⁿ mod 4 → (0, 1); mod 8 → (0, 2); mod 5 → (1, 1)
        let five = seq(&[-5, 1], &[1]);
        assert_eq!(five.period_mod(4), (0, 1));
        assert_eq!(five.period_mod(8), (0, 2));
        assert_eq!(five.period_mod(5), (1, 1));
        // 2ⁿ mod 3 → (0, 2)
        let two = seq(&[-2, 1], &[1]);
        assert_eq!(two.period_mod(3), (0, 2));
        // Fibonacci mod 2: 0,1,1,0,1,1 → (0, 3)
        let fib = seq(&[-1, -1, 1], &[0, 1]);
        assert_eq!(fib.period_mod(2), (0, 3));
    }

    #[test]
    fn phi_power_matches_iteration() {
        use rand::Rng;
        let mut rng = crate::testrng(61);
        // M = ℤ ⊕ ℤ/3, Φ(a,s) = (5a, 2s): phi_power(2, (1,1)) = (25, 1)
        let m = FgModule::new(1, vec![3]).unwrap();
        let phi = FrobeniusSpec::new(
            m.clone(),
            vec![vec![5]],
            vec![vec![2]],
            vec![vec![0]],
            vec![10, -7, 1],
            5,
            EigenData::None,
        )
        .unwrap();
        let x = m.elem(vec![1], vec![1]);
        assert_eq!(phi_power_apply(&phi, 0, &x), x);
        assert_eq!(phi_power_apply(&phi, 2, &x), m.elem(vec![25], vec![1]));
        // a hundred random module/element pairs, n ≤ 12
        for _ in 0..100 {
            let rank = rng.gen_range(1..=2usize);
            let tor: Vec<u64> = if rng.gen() { vec![rng.gen_range(2..=4u64)] } else { vec![] };
            let m = FgModule::new(rank, tor.clone()).unwrap();
            // a diagonal-ish endomorphism annihilated by a product of linear factors
            let t = rng.gen_range(2..=5i64);
            let u = rng.gen_range(1..=4i64);
            let free = if rank == 1 {
                vec![vec![t]]
            } else {
                vec![vec![t, 0], vec![0, t]]
            };
            let tmat: Vec<Vec<i64>> = if tor.is_empty() { vec![] } else { vec![vec![u]] };
            let f2t: Vec<Vec<i64>> = if tor.is_empty() { vec![] } else { vec![vec![0; rank]] };
            // (x − t)(x − u)
            let charpoly = vec![t * u, -(t + u), 1];
            let phi = FrobeniusSpec::new(m.clone(), free, tmat, f2t, charpoly, 5, EigenData::None)
                .unwrap();
            let x = ModElem {
                free: (0..rank).map(|_| BigInt::from(rng.gen_range(-4..=4i64))).collect(),
                tor: tor.iter().map(|&d| rng.gen_range(0..d)).collect(),
            };
            for n in 0..=12u64 {
                assert_eq!(phi_power_apply(&phi, n, &x), phi.apply_iter(&x, n));
            }
        }
    }
}
