//! Good subgroups of ℤ^d and good cosets in ℕ^d: canonical generator
//! form, membership, enumeration, and intersection.
//!
//! ```bash
//! cargo run --example good_cosets
//! ```

use retset::cosets::{
    display_generators, parse_coset, GoodCoset, GoodSubgroup, Requirement,
};

fn main() {
    // n₁ = n₂ and n₃ = 2n₂ collapse to one generator with power-of-two
    // components
    let sub = GoodSubgroup::new(3, vec![Requirement::Eq(0, 1), Requirement::Double(2, 1)]).unwrap();
    println!("canonical form of {{n1=n2, n3=2n2}}: {}", display_generators(sub.generators()));

    // divisibility and pinning
    let sub2 = GoodSubgroup::new(2, vec![Requirement::Mult(0, 3), Requirement::Zero(1)]).unwrap();
    println!("canonical form of {{3|n1, n2=0}}: {}", display_generators(sub2.generators()));

    // a coset with a base point and rectangle
    let coset = parse_coset("coset base=(1,0) rect=(0,0) req=[eq(1,2), mult(1,2)]").unwrap();
    println!("coset: {}", coset);
    println!("members in [0,8]²: {:?}", coset.enumerate(8));
    println!("affine form: {:?}", coset.affine_form());

    // intersections recanonicalize and stay coset-shaped
    let diag = GoodCoset::new(
        vec![0, 0],
        vec![0, 0],
        GoodSubgroup::new(2, vec![Requirement::Eq(0, 1)]).unwrap(),
    )
    .unwrap();
    let even = GoodCoset::new(
        vec![0, 0],
        vec![0, 0],
        GoodSubgroup::new(2, vec![Requirement::Mult(0, 2)]).unwrap(),
    )
    .unwrap();
    let both = diag.intersect(&even).unwrap();
    println!("diagonal ∩ even-first: {}", both);
    println!("members in [0,8]²: {:?}", both.enumerate(8));

    // infeasible systems return an explicit empty marker
    let odd = GoodCoset::new(
        vec![1, 0],
        vec![0, 0],
        GoodSubgroup::new(2, vec![Requirement::Mult(0, 2), Requirement::Zero(1)]).unwrap(),
    )
    .unwrap();
    println!("even ∩ odd first coordinate: {:?}", even.intersect(&odd).map(|c| c.to_string()));
}
