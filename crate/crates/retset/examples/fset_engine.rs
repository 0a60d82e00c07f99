//! The abstract engine: linear-recurrence coordinates of a Frobenius
//! endomorphism, eventual periods, index-set decomposition into good
//! cosets, closed-form return sets, and doubled-power coefficient
//! fitting.
//!
//! ```bash
//! cargo run --example fset_engine
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use retset::cosets::display_generators;
use retset::fset::{
    cyclic_closed_form, decompose_index_set, fit_doubling_powers, phi_power_apply,
    recurrence_basis, Certification, EigenData, FSetSpec, FgModule, FrobeniusSpec, LinRecSeq,
};

fn main() {
    // the coordinate sequences of P(x) = x² − 3x + 2
    let basis = recurrence_basis(&[2, -3, 1].map(BigInt::from)).unwrap();
    println!(
        "c₀(0..6) = {:?}",
        (0..6).map(|n| basis[0].value(n)).collect::<Vec<_>>()
    );
    println!(
        "c₁(0..6) = {:?}",
        (0..6).map(|n| basis[1].value(n)).collect::<Vec<_>>()
    );

    // eventual periods mod small integers
    let five = LinRecSeq::new(vec![BigInt::from(-5), BigInt::from(1)], vec![BigInt::from(1)]).unwrap();
    for m in [4u64, 8, 5] {
        println!("5^n mod {} has (preperiod, period) = {:?}", m, five.period_mod(m));
    }

    // the odd-index decomposition: M = ℤ ⊕ ℤ/3, Φ(a,s) = (5a, 2s),
    // α₀ = (0,1), α₁ = (1,1), Γ = ℤ·(1,0)
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
    let alpha = m.elem(vec![1], vec![1]);
    println!("Φ²(1,1) = {:?}", phi_power_apply(&phi, 2, &alpha));
    let fset = FSetSpec::plain(m.elem(vec![0], vec![1]), vec![alpha]);
    let g0 = m.elem(vec![1], vec![0]);
    let dec = decompose_index_set(&phi, &fset, &g0, 16).unwrap();
    assert_eq!(dec.certification, Certification::Exact);
    for c in &dec.cosets {
        println!(
            "index-set coset: {} with canonical span {}",
            c,
            display_generators(c.subgroup().generators())
        );
    }

    // the closed form of a cyclic return set: c = 0, l = 4, t = 5
    let expr = cyclic_closed_form(5, &BigInt::from(0), &[BigInt::from(4)], &BigInt::from(5)).unwrap();
    println!("closed form: {} ∩ [0,700] = {:?}", expr, expr.window(&BigInt::from(700)).unwrap());
    // and with a negative multiplier the set splits over parities
    let neg = cyclic_closed_form(5, &BigInt::from(0), &[BigInt::from(6)], &BigInt::from(-5)).unwrap();
    println!("t = −5 splits into {} terms", neg.terms().len());

    // doubled-power fitting: l_n = 3·25ⁿ + 2·625ⁿ
    let q = BigInt::from(25);
    let samples: Vec<BigInt> = (0..7u32)
        .map(|n| BigInt::from(3) * BigInt::from(25).pow(n) + BigInt::from(2) * BigInt::from(625).pow(n))
        .collect();
    let coeffs = fit_doubling_powers(&samples, &q, 2).unwrap();
    let shown: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    println!("fitted coefficients: [{}]", shown.join(", "));
    assert_eq!(coeffs[0], BigRational::from_integer(BigInt::from(3)));
    // a sequence outside the family is rejected, never guessed
    let bad = [1, 26, 626, 15626].map(BigInt::from);
    println!("fit of 25ⁿ+1 with one layer: {:?}", fit_doubling_powers(&bad, &q, 1).err().map(|e| e.to_string()));
}
