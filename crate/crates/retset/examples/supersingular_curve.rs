//! The supersingular curve y² = x³ + 1 over F_5: point counts, the
//! endomorphism identity F² = [−p], scalar multiplication routed through
//! Frobenius, division polynomials, and torsion counts.
//!
//! ```bash
//! cargo run --example supersingular_curve
//! ```

use num_bigint::BigInt;
use rand::SeedableRng;
use retset::curve::{
    division_poly, ec_frobenius, ec_negate, ec_scalar_mul, torsion_count, ECPoint, EllipticCurve,
    SpecCtx, SymCtx,
};
use retset::field::Fq;
use retset::textexpr::parse_ratfunc_with;
use retset::tower::{SqrtTower, TowerElem};
use std::collections::BTreeMap;

fn main() {
    let e = EllipticCurve::new(5, 0, 1).unwrap();
    println!("curve: {:?}", e);
    println!("|E(F_5)| = {} (trace {})", e.count_points_over(1), e.trace());
    println!("supersingular: {}", e.is_supersingular());

    // F²(P) = −(5·P) on a random point over F_125
    let f125 = Fq::new(5, 3).unwrap();
    let ctx = SpecCtx { field: f125.clone() };
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    let p = e.random_point(&f125, &mut rng);
    let lhs = ec_frobenius(&ctx, &p, 2);
    let rhs = ec_negate(&ctx, &ec_scalar_mul(&ctx, &e, &BigInt::from(5), &p).unwrap());
    println!("F^2(P) = -(5P) on a random point: {}", lhs == rhs);

    // symbolically: 5·(t, √(t³+1)) has x-coordinate t^25
    let f5 = Fq::new(5, 1).unwrap();
    let rf = |s: &str| parse_ratfunc_with(&f5, &BTreeMap::new(), s).unwrap();
    let tower = SqrtTower::new(&f5, vec![("s".into(), rf("t^3+1"))]);
    let sym = SymCtx { tower: tower.clone() };
    let pt = ECPoint::Affine(TowerElem::from_base(&tower, rf("t")), TowerElem::root(&tower, 0));
    let five_p = ec_scalar_mul(&sym, &e, &BigInt::from(5), &pt).unwrap();
    println!("x(5·(t, √(t³+1))) = {}", five_p.x().unwrap());

    // division polynomials: x(2P) = f₂/g₂
    let (f2, g2) = division_poly(&e, 2);
    println!("x(2P) = ({}) / ({})", f2, g2);
    for m in [3u64, 7, 12] {
        let (fm, gm) = division_poly(&e, m);
        println!(
            "m = {:2}: deg f = {} (= m²), lc g = {} (= m² mod 5)",
            m,
            fm.degree().unwrap(),
            gm.leading_coeff().unwrap()
        );
    }

    // torsion counts stabilize at the square of the prime-to-p part
    for m in [1u64, 2, 3, 5, 10] {
        println!("|E[{}]| = {}", m, torsion_count(&e, m, 4).unwrap());
    }
}
