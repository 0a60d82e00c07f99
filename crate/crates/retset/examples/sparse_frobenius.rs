//! Sparse polynomials with arbitrary-precision exponents and the
//! characteristic-p power trick: `f^n = Π (f^{p^i})^{d_i}` over the
//! base-p digits of n, each factor a termwise Frobenius power.
//!
//! ```bash
//! cargo run --example sparse_frobenius
//! ```

use num_bigint::BigUint;
use retset::field::Fq;
use retset::poly::SparsePoly;
use retset::textexpr::parse_poly;

fn main() {
    let f5 = Fq::new(5, 1).unwrap();

    // (t^3 + 2)^5 collapses to t^15 + 2 in characteristic 5
    let p = parse_poly(&f5, "t^3 + 2").unwrap();
    println!("(t^3+2)^5   = {}", p.pow(5));
    println!("(t+1)^25    = {}", parse_poly(&f5, "t+1").unwrap().pow(25));

    // huge exponents stay exact and sparse: (t+1)^(5^12)
    let e = BigUint::from(5u32).pow(12);
    let big = parse_poly(&f5, "t+1").unwrap().pow_big(&e);
    println!("(t+1)^(5^12) = {} ({} terms)", big, big.num_terms());

    // a dense-looking power is still cheap through the digit product
    let q = parse_poly(&f5, "t^2 + 3*t + 1").unwrap();
    let qn = q.pow_big(&BigUint::from(19999u32));
    println!(
        "(t^2+3t+1)^19999 has {} terms, degree {}",
        qn.num_terms(),
        qn.degree().unwrap()
    );

    // rational-function equality with the probabilistic fallback
    let a = retset::ratfunc::RatFunc::new(
        parse_poly(&f5, "t^4 + 4").unwrap(),
        parse_poly(&f5, "t^2 + 3").unwrap(),
    );
    let b = retset::ratfunc::RatFunc::new(parse_poly(&f5, "t^2 + 2").unwrap(), SparsePoly::one(&f5));
    println!("exact equality: {}", a.eq_exact(&b));
    let verdict = a.eq(&b, 0, 5, 10, 42);
    println!("probabilistic verdict (threshold forced to 0): {:?}", verdict);
}
