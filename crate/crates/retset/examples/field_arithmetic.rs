//! Prime and extension fields: deterministic moduli, inverses, square
//! roots, Frobenius, and specialization of rational functions.
//!
//! ```bash
//! cargo run --example field_arithmetic
//! ```

use retset::field::Fq;
use retset::specialize::Specialization;
use retset::textexpr::parse_ratfunc_with;
use std::collections::BTreeMap;

fn main() {
    // F_5 and F_25 with deterministically generated moduli
    let f5 = Fq::new(5, 1).unwrap();
    let f25 = Fq::new(5, 2).unwrap();
    println!("modulus of F_25: {:?} (x^2 + 2)", f25.modulus());

    let two = f5.from_u64(2);
    println!("inv(2) in F_5 = {}", two.inv().unwrap());

    let u = f25.gen();
    println!("u^2 in F_25 = {} (u is the modulus class)", u.mul(&u));
    println!("inv(u) = {}", u.inv().unwrap());

    // deterministic square roots: the lexicographically least of the pair
    println!("sqrt(4) in F_5 = {}", f5.from_u64(4).sqrt().unwrap());
    println!("sqrt(3) in F_5 = {:?} (3 is a non-residue)", f5.from_u64(3).sqrt());
    println!("sqrt(3) in F_25 = {}", f25.from_u64(3).sqrt().unwrap());

    // the deterministic multiplicative generator of F_25^x
    let alpha = f25.multiplicative_generator();
    println!("generator of F_25^x: {} (order 24)", alpha);

    // Frobenius fixes the prime field and squares to the identity on F_25
    let x = f25.from_coeffs(&[3, 4]);
    println!("x = {}, x^5 = {}, x^25 = {}", x, x.frobenius(1), x.frobenius(2));

    // specialization t -> theta is a ring homomorphism where defined
    let consts = BTreeMap::new();
    let f = parse_ratfunc_with(&f5, &consts, "(t^2 - 1)/(t - 1)").unwrap();
    let g = parse_ratfunc_with(&f5, &consts, "t + 1").unwrap();
    let sp = Specialization::new(&f5, &f5, f5.from_u64(0)).unwrap();
    println!(
        "(t^2-1)/(t-1) at t=0 evaluates to {} and t+1 to {}",
        sp.eval_ratfunc(&f).unwrap(),
        sp.eval_ratfunc(&g).unwrap()
    );
    println!("cross-multiplied equality: {}", f.eq_exact(&g));
}
