//! The return set of the diagonal-style translation on E × E for the
//! supersingular curve y² = x³ + 1 over F₅(t): the p-powers all return
//! (exactly, through F² = [−p]), and every member found by scanning has
//! prime-to-5 part ≡ ±1 (mod 10).
//!
//! ```bash
//! cargo run --release --example return_set_example36
//! ```

use retset::scan::{verify_example36, Example36Params};

fn main() {
    // a desk-size window; the CLI default runs the full 10^5 window
    let params = Example36Params {
        max_power: 6,
        window: 3_000,
        samples: 5,
        field_degree: 12,
        seed: 11,
        ..Default::default()
    };
    let report = verify_example36(&params).unwrap();
    println!("supersingular: {}", report.curve_supersingular);
    println!("F² = [−p] spot checks: {}", report.endomorphism_identity_ok);
    println!("points on curve: {}", report.points_on_curve);
    for pi in &report.power_inclusions {
        println!("5^{} in the return set: {}", pi.j, pi.holds);
    }
    let scan = report.scan.as_ref().unwrap();
    println!("scan members in [0,{}]: {:?}", scan.window, scan.members);
    println!(
        "residue constraint (prime-to-5 part ≡ ±1 mod 10): {}",
        report.residue_constraint_ok
    );
    if !report.extra_members.is_empty() {
        println!("members beyond the 5-powers (data): {:?}", report.extra_members);
    }
    println!("verdict: {}", if report.pass { "pass" } else { "fail" });
}
