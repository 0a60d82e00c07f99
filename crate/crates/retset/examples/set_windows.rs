//! The set-expression calculus: the term grammar, certified windows,
//! three-valued membership, affine images, unions with exceptions,
//! classification, and windowed comparison.
//!
//! ```bash
//! cargo run --example set_windows
//! ```

use num_bigint::BigInt;
use retset::setalg::{compare_windows, parse_set_expr, Verdict};

fn main() {
    let p = 5;
    // {5^m − 1}
    let e = parse_set_expr(p, "PS(5;-1;[1])").unwrap();
    println!("{} ∩ [0,130] = {:?}", e, e.window(&BigInt::from(130)).unwrap());

    // {25^m + 25^{2m}}: the two-scale set behind the disproof
    let w = parse_set_expr(p, "PS(25;0;[1,1])").unwrap();
    println!("{} ∩ [0,1000] = {:?}", w, w.window(&BigInt::from(1000)).unwrap());
    println!("classify: {}", w.classify());

    // membership is three-valued with certificates where they exist
    for n in [24i64, 30, 650] {
        let verdict = match e.member(&BigInt::from(n), 12) {
            Verdict::Yes(witness) => format!("yes, witness {:?}", witness),
            Verdict::NoCertified => "no (certified)".into(),
            Verdict::Unknown { searched } => format!("unknown (searched {})", searched),
        };
        println!("{} ∈ {}? {}", n, e, verdict);
    }
    // mixed signs across two coordinates have no certificate
    let mixed = parse_set_expr(p, "PS(5;0;[1|-1])").unwrap();
    println!(
        "3 ∈ {}? {:?} (cancellation admits no growth bound)",
        mixed,
        mixed.member(&BigInt::from(3), 8)
    );

    // affine images rewrite term-by-term
    let shifted = e.affine(&BigInt::from(3), &BigInt::from(2)).unwrap();
    println!("3·S + 2 = {} ∩ [0,130] = {:?}", shifted, shifted.window(&BigInt::from(130)).unwrap());

    // unions and finite exceptions
    let u = parse_set_expr(p, "AP(1,6) + PS(5;-1;[1]) add{17} del{4}").unwrap();
    println!("{} ∩ [0,30] = {:?}", u, u.window(&BigInt::from(30)).unwrap());

    // windowed comparison: evidence for equality up to a finite set
    let s17 = parse_set_expr(p, "PS(5;-1;[1]) add{17}").unwrap();
    let report = compare_windows(&e, &s17, &BigInt::from(0), &BigInt::from(1000), &BigInt::from(100)).unwrap();
    println!(
        "symmetric difference on [0,1000]: {:?} (consistent: {})",
        report.differences, report.consistent_up_to_finite
    );
}
