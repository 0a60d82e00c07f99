//! The computable ingredients of the disproof: the torus return-set
//! window, the sum-set witness triples certifying (5^j + 5^{2j})·g₀, and
//! the classifier separating the two-scale set from the depth-0 sets.
//!
//! ```bash
//! cargo run --release --example disproof_witnesses
//! ```

use retset::scan::{
    check_witness_level, counterexample_setup, torus_alpha_setup, verify_disproof_ingredients,
    DisproofParams,
};
use retset::setalg::{parse_set_expr, SetClass};

fn main() {
    // a reduced window keeps this example quick; the acceptance suite and
    // the CLI default run N = 20000
    let params = DisproofParams {
        window: 1_300,
        max_witness: 2,
        samples: 5,
        field_degree: 13,
        seed: 3,
        ..Default::default()
    };
    let report = verify_disproof_ingredients(&params).unwrap();
    println!("{}", report.scope_note);
    println!("torus window: {:?}", report.torus_members);
    println!("matches {{25^a + 25^b}}: {}", report.torus_window_ok);
    for w in &report.witness_levels {
        println!("witness level j={}: {} (bound {:e})", w.j, w.detail, w.error_bound);
    }
    println!("classifier: {}", report.classifier_ok);
    println!("verdict: {}", if report.pass { "pass" } else { "fail" });

    // the classifier verdicts spelled out
    let widely = parse_set_expr(5, "PS(25;0;[1,1])").unwrap();
    let plain = parse_set_expr(5, "PS(5;-1;[1])").unwrap();
    println!("PS(25;0;[1,1]) classifies {}", widely.classify());
    println!("PS(5;-1;[1])   classifies {}", plain.classify());
    assert_eq!(widely.classify(), SetClass::WidelyPNormalOnly);

    // a corrupted witness is caught with its failing index
    let (group, g0, _) = counterexample_setup();
    let verdict = check_witness_level(&group, &g0, 1, 3, 11, 9, true).unwrap();
    println!("corrupted factor-3 witness: {:?}", verdict);

    // the torus point and hyperplane are also reachable programmatically
    let (_, _, system) = torus_alpha_setup();
    println!("hyperplane equations: {}", system.equations().len());
}
