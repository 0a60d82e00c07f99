//! Solution sets of c₁·q^{n₁} + c₂·q^{n₂} = e₀ + Σ e_i·q^{m_i} as unions
//! of the five shapes (point, row tail, column tail, diagonal tail,
//! quadrant), fitted on a window and re-certified on its double.
//!
//! ```bash
//! cargo run --example two_exponential
//! ```

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use retset::setalg::{two_exponential_decompose, TwoExpProblem};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn solve(c1: i64, c2: i64, e0: i64, e: &[i64], q: u64, window: u64) {
    let prob = TwoExpProblem {
        c1: rat(c1),
        c2: rat(c2),
        e0: rat(e0),
        e: e.iter().map(|&v| rat(v)).collect(),
        q: BigUint::from(q),
    };
    let rhs: Vec<String> = e.iter().map(|v| format!("{}·{}^m", v, q)).collect();
    print!("{}·{}^n1 + {}·{}^n2 = {} + {}: ", c1, q, c2, q, e0, rhs.join(" + "));
    match two_exponential_decompose(&prob, window) {
        Ok(dec) => println!("{}", dec),
        Err(e) => println!("{}", e),
    }
}

fn main() {
    // 5^{n1} + 5^{n2} = 2·5^m forces the diagonal
    solve(1, 1, 0, &[2], 5, 10);
    // 5^{n1} = 5^{n2}
    solve(1, -1, 0, &[], 5, 10);
    // only (0,0) survives the residues: 2 + 3 = 1 + 4
    solve(2, 3, 1, &[4], 5, 8);
    // everything: 5^{n1} + 5^{n2} = 5^{m1} + 5^{m2}
    solve(1, 1, 0, &[1, 1], 5, 8);
    // axis tails: 5^{n1} + 5^{n2} = 1 + 5^m pins one exponent to zero
    solve(1, 1, 1, &[1], 5, 8);
}
