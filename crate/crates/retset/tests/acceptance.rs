//! The acceptance suite: one test per criterion, each printing a
//! PASS/FAIL line (visible under `--nocapture`). Tolerances and windows
//! are pinned here, in code.
//!
//! ```bash
//! cargo test -p retset --test acceptance -- --nocapture
//! ```

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use retset::cosets::{GoodCoset, GoodSubgroup, Requirement};
use retset::fset::{
    cyclic_closed_form, decompose_index_set, fit_doubling_powers, Certification, EigenData,
    FSetSpec, FgModule, FrobeniusSpec,
};
use retset::scan::{
    check_witness_level, counterexample_setup, orbit_scan, torus_alpha_setup, two_power_sums,
    verify_example36, Example36Params, ScanMode,
};
use retset::setalg::{
    parse_set_expr, two_exponential_decompose, PSetTerm, SetClass, TwoExpProblem,
};
use std::sync::Mutex;
use std::time::{Duration, Instant};

/// The wall-clock criteria run one at a time.
static HEAVY: Mutex<()> = Mutex::new(());

fn verdict(name: &str, pass: bool, detail: &str) {
    println!("{}: criterion {} — {}", if pass { "PASS" } else { "FAIL" }, name, detail);
    assert!(pass, "criterion {} failed: {}", name, detail);
}

/// Criterion 1: the p-power inclusions p^j ∈ S for j = 0..6, verified
/// exactly through the supersingular route, in under 10 seconds.
#[test]
fn criterion_1_power_inclusions_exact() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    let params = Example36Params { max_power: 6, skip_scan: true, ..Default::default() };
    let report = verify_example36(&params).expect("verification must run");
    let elapsed = start.elapsed();
    let all = report.curve_supersingular
        && report.endomorphism_identity_ok
        && report.points_on_curve
        && report.power_inclusions.iter().all(|pi| pi.holds)
        && report.power_inclusions.len() == 7;
    let within = elapsed < Duration::from_secs(10);
    verdict(
        "1 (exact p-power inclusions)",
        all && within,
        &format!("j = 0..6 all hold = {}, elapsed {:?} (< 10 s required)", all, elapsed),
    );
}

/// Criterion 2: the window scan n ∈ [1, 10^5] with 5 specializations over
/// F_{5^19} (5^19 > 10^12): every member's prime-to-5 part ≡ ±1 (mod 10),
/// per-member false-accept bound < 10⁻⁶, in under 5 minutes.
#[test]
fn criterion_2_residue_scan() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    let params = Example36Params {
        max_power: 0,
        window: 100_000,
        samples: 5,
        field_degree: 19,
        seed: 0xacce97,
        ..Default::default()
    };
    assert!(BigUint::from(5u32).pow(19) > BigUint::from(10u64).pow(12));
    let report = verify_example36(&params).expect("verification must run");
    let elapsed = start.elapsed();
    let scan = report.scan.as_ref().expect("scan requested");
    let bound_ok = scan.max_member_error_bound < 1e-6;
    let within = elapsed < Duration::from_secs(300);
    println!(
        "  members: {:?}, max per-member false-accept bound {:e}",
        scan.members, scan.max_member_error_bound
    );
    verdict(
        "2 (mod-2p residue constraint on the scan)",
        report.residue_constraint_ok && bound_ok && within,
        &format!(
            "constraint = {}, bound {:e} < 1e-6, elapsed {:?} (< 5 min required)",
            report.residue_constraint_ok, scan.max_member_error_bound, elapsed
        ),
    );
}

/// Criterion 3: the exact symbolic torus scan of [0, 20000] returns
/// exactly the two-power sums, with zero tolerance, in under 2 minutes.
#[test]
fn criterion_3_torus_identity_window() {
    let _guard = HEAVY.lock().unwrap();
    let start = Instant::now();
    let (group, g, system) = torus_alpha_setup();
    let report = orbit_scan(&group, &g, &system, 20_000, &ScanMode::Exact).expect("exact scan");
    let elapsed = start.elapsed();
    let expected: Vec<u64> = vec![2, 26, 50, 626, 650, 1250, 15626, 15650, 16250];
    assert_eq!(expected, two_power_sums(25, 20_000));
    let within = elapsed < Duration::from_secs(120);
    verdict(
        "3 (exact torus return-set window)",
        report.members == expected && within,
        &format!("members = {:?}, elapsed {:?} (< 2 min required)", report.members, elapsed),
    );
}

/// Criterion 4: the witness triples certify (5^j + 5^{2j})·g₀ for
/// j = 0..3 under 5 specializations with false-accept bound < 10⁻⁶.
#[test]
fn criterion_4_sum_witnesses() {
    let _guard = HEAVY.lock().unwrap();
    let (group, g0, _) = counterexample_setup();
    let mut all = true;
    let mut worst = 0.0f64;
    for j in 0..=3u32 {
        let v = check_witness_level(&group, &g0, j, 5, 19, 0x417 + j as u64, false).expect("witness check");
        match v {
            retset::variety::WitnessVerdict::Verified { error_bound } => {
                worst = worst.max(error_bound);
                println!("  level j = {}: verified, bound {:e}", j, error_bound);
            }
            other => {
                println!("  level j = {}: {:?}", j, other);
                all = false;
            }
        }
    }
    verdict(
        "4 (sum-set witness certificates)",
        all && worst < 1e-6,
        &format!("all levels verified = {}, worst bound {:e} < 1e-6", all, worst),
    );
}

/// Criterion 5: 200 random valid exponential-sum terms with q ∈ {5, 25},
/// d ≤ 3, r ≤ 2: the certified window at 10^6 equals the brute-force
/// enumeration over [0, 10]^d, with zero mismatches.
#[test]
fn criterion_5_window_oracle_equivalence() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xacce5);
    let n_max = BigInt::from(1_000_000u64);
    let mut mismatches = 0;
    for trial in 0..200 {
        let d = rng.gen_range(1..=3usize);
        let r = rng.gen_range(0..=2usize);
        let q = if rng.gen() { BigUint::from(5u32) } else { BigUint::from(25u32) };
        let base = BigInt::from(rng.gen_range(-20..=20i64));
        let l: Vec<Vec<BigInt>> = (0..d)
            .map(|_| {
                (0..=r)
                    .map(|j| {
                        BigInt::from(if j == r {
                            rng.gen_range(1..=20i64)
                        } else {
                            rng.gen_range(-20..=20i64)
                        })
                    })
                    .collect()
            })
            .collect();
        let term = PSetTerm::from_geometric(5, q, base, l).expect("geometric terms are valid");
        let window = term.window(&n_max).expect("certified window");
        let brute = brute_window(&term, d, 10, &n_max);
        if window != brute {
            mismatches += 1;
            println!("  mismatch on trial {}: {}", trial, term);
        }
    }
    verdict(
        "5 (set-algebra oracle equivalence)",
        mismatches == 0,
        &format!("200 random terms, {} mismatches (0 required)", mismatches),
    );
}

/// Independent generate-and-collect oracle over `[0, cap]^d`.
fn brute_window(t: &PSetTerm, d: usize, cap: u64, n_max: &BigInt) -> Vec<BigInt> {
    use num_traits::Signed;
    let mut out = std::collections::BTreeSet::new();
    let mut ns = vec![0u64; d];
    'outer: loop {
        let v = t.value(&ns);
        assert!(v.is_integer(), "term values must be integral");
        let vi = v.to_integer();
        if !vi.is_negative() && &vi <= n_max {
            out.insert(vi);
        }
        let mut i = 0;
        loop {
            if i == d {
                break 'outer;
            }
            ns[i] += 1;
            if ns[i] <= cap {
                break;
            }
            ns[i] = 0;
            i += 1;
        }
    }
    out.into_iter().collect()
}

/// Criterion 6: canonical-form membership equals requirement membership
/// on [0,8]^d for 100 random requirement sets (d ≤ 4), and intersection
/// matches brute force on [0,12]^d for 100 random coset pairs.
#[test]
fn criterion_6_good_cosets() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xacce6);
    let mut canonical_mismatches = 0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=4usize);
        let reqs = random_requirements(&mut rng, d, 4);
        let g = GoodSubgroup::new(d, reqs).unwrap();
        let mut v = vec![0i64; d];
        'win: loop {
            if g.contains(&v) != g.contains_by_requirements(&v) {
                canonical_mismatches += 1;
                break;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break 'win;
                }
                v[i] += 1;
                if v[i] <= 8 {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }
    let mut intersect_mismatches = 0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=4usize);
        let a = random_coset(&mut rng, d);
        let b = random_coset(&mut rng, d);
        let c = a.intersect(&b);
        let mut v = vec![0i64; d];
        'win2: loop {
            let expect = a.member(&v) && b.member(&v);
            let got = c.as_ref().map_or(false, |c| c.member(&v));
            if expect != got {
                intersect_mismatches += 1;
                break;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break 'win2;
                }
                v[i] += 1;
                if v[i] <= 12 {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }
    verdict(
        "6 (good-coset canonicalization and intersection)",
        canonical_mismatches == 0 && intersect_mismatches == 0,
        &format!(
            "canonical mismatches {} / intersect mismatches {} (0 required)",
            canonical_mismatches, intersect_mismatches
        ),
    );
}

fn random_requirements(rng: &mut rand::rngs::StdRng, d: usize, max_n: usize) -> Vec<Requirement> {
    (0..rng.gen_range(0..=max_n))
        .map(|_| {
            let i = rng.gen_range(0..d);
            let j = rng.gen_range(0..d);
            match rng.gen_range(0..4) {
                0 => Requirement::Zero(i),
                1 => Requirement::Mult(i, rng.gen_range(1..=6)),
                2 => Requirement::Eq(i, j),
                _ => Requirement::Double(i, j),
            }
        })
        .collect()
}

fn random_coset(rng: &mut rand::rngs::StdRng, d: usize) -> GoodCoset {
    let reqs = random_requirements(rng, d, 3);
    let base = (0..d).map(|_| rng.gen_range(0..5i64)).collect();
    let rect = (0..d).map(|_| rng.gen_range(0..3u64)).collect();
    GoodCoset::new(base, rect, GoodSubgroup::new(d, reqs).unwrap()).unwrap()
}

/// Criterion 7: closed-form return sets match brute-force orbit sums on
/// 50 random instances (d ≤ 3, t = ±5^e, n_i ≤ 8); the doubled-power fit
/// verifies its telescoping identity for n ≤ 20 on 50 random coefficient
/// sets; the index-set decomposition reproduces the odd-index example.
#[test]
fn criterion_7_engine() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xacce7);
    // closed form vs orbit sums
    let mut cf_fail = 0;
    for _ in 0..50 {
        let d = rng.gen_range(1..=3usize);
        let e = rng.gen_range(1..=2u32);
        let t = BigInt::from(5).pow(e) * if rng.gen() { 1 } else { -1 };
        let c = BigInt::from(rng.gen_range(-10..=10i64));
        let l: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(-6..=6i64))).collect();
        if !closed_form_matches_orbit(&c, &l, &t, 8) {
            cf_fail += 1;
        }
    }
    // telescoping fits
    let mut fit_fail = 0;
    for _ in 0..50 {
        let r = rng.gen_range(1..=3usize);
        let q = BigInt::from(5);
        let cs: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(-9..=9i64))).collect();
        let samples: Vec<BigInt> = (0..=20u64)
            .map(|n| {
                (0..r)
                    .map(|j| &cs[j] * BigInt::from(5).pow(((1u64 << j) * n) as u32))
                    .fold(BigInt::from(0), |a, b| a + b)
            })
            .collect();
        match fit_doubling_powers(&samples, &q, r) {
            Ok(fitted) => {
                for (j, cj) in cs.iter().enumerate() {
                    if fitted[j] != BigRational::from_integer(cj.clone()) {
                        fit_fail += 1;
                        break;
                    }
                }
            }
            Err(_) => fit_fail += 1,
        }
    }
    // the odd-index decomposition
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
    let fset = FSetSpec::plain(m.elem(vec![0], vec![1]), vec![m.elem(vec![1], vec![1])]);
    let g0 = m.elem(vec![1], vec![0]);
    let dec = decompose_index_set(&phi, &fset, &g0, 16).unwrap();
    let odd_ok = dec.certification == Certification::Exact
        && (0..40i64).all(|n| dec.member(&[n]) == (n % 2 == 1));
    verdict(
        "7 (engine: closed forms, fits, decomposition)",
        cf_fail == 0 && fit_fail == 0 && odd_ok,
        &format!(
            "closed-form failures {}, fit failures {}, odd-index exact = {}",
            cf_fail, fit_fail, odd_ok
        ),
    );
}

/// Two routes: iterated orbit sums against the closed-form term values
/// over the matching parameter grid (parity-split for negative t).
fn closed_form_matches_orbit(c: &BigInt, l: &[BigInt], t: &BigInt, cap: u64) -> bool {
    use num_traits::Signed;
    let expr = cyclic_closed_form(5, c, l, t).unwrap();
    let l_clean: Vec<BigInt> = l.iter().filter(|v| !num_traits::Zero::is_zero(*v)).cloned().collect();
    let d = l_clean.len();
    let image = orbit_image(c, &l_clean, t, cap);
    if d == 0 {
        return image == [c.clone()].into_iter().collect();
    }
    let half_cap = if t.is_negative() { cap / 2 } else { cap };
    let mut values = std::collections::BTreeSet::new();
    for term in expr.terms() {
        let pset = match term {
            retset::setalg::Term::PSet(ps) => ps,
            _ => return false,
        };
        let mut ns = vec![0u64; d];
        'grid: loop {
            let v = pset.value(&ns);
            if !v.is_integer() {
                return false;
            }
            values.insert(v.to_integer());
            let mut i = 0;
            loop {
                if i == d {
                    break 'grid;
                }
                ns[i] += 1;
                if ns[i] <= half_cap {
                    break;
                }
                ns[i] = 0;
                i += 1;
            }
        }
    }
    let wide = orbit_image(c, &l_clean, t, 2 * cap + 2);
    image.iter().all(|v| values.contains(v)) && values.iter().all(|v| wide.contains(v))
}

fn orbit_image(
    c: &BigInt,
    l: &[BigInt],
    t: &BigInt,
    cap: u64,
) -> std::collections::BTreeSet<BigInt> {
    let d = l.len().max(1);
    let mut image = std::collections::BTreeSet::new();
    let mut ns = vec![0u64; d];
    'outer: loop {
        let mut acc = c.clone();
        for (li, &ni) in l.iter().zip(&ns) {
            let mut power = BigInt::from(1);
            for _ in 0..ni {
                acc += li * &power;
                power *= t;
            }
        }
        image.insert(acc);
        let mut i = 0;
        loop {
            if i == d {
                break 'outer;
            }
            ns[i] += 1;
            if ns[i] <= cap {
                break;
            }
            ns[i] = 0;
            i += 1;
        }
    }
    image
}

/// Criterion 8: 50 random two-exponential instances with q = 5 and
/// coefficients in [1, 10] (offsets in [−10, 10]): each successful
/// decomposition reproduces an independent bounded-search oracle on
/// [0, 60]²; fit failures are reported with the rate (informational
/// target < 10%).
#[test]
fn criterion_8_two_exponential() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xacce8);
    let rat = |n: i64| BigRational::from_integer(BigInt::from(n));
    let mut fit_failures = 0;
    let mut mismatches = 0;
    for _ in 0..50 {
        let c1 = rng.gen_range(1..=10i64);
        let c2 = rng.gen_range(1..=10i64);
        let e0 = rng.gen_range(-10..=10i64);
        let d = rng.gen_range(0..=2usize);
        let e: Vec<i64> = (0..d).map(|_| rng.gen_range(1..=10i64)).collect();
        let prob = TwoExpProblem {
            c1: rat(c1),
            c2: rat(c2),
            e0: rat(e0),
            e: e.iter().map(|&v| rat(v)).collect(),
            q: BigUint::from(5u32),
        };
        match two_exponential_decompose(&prob, 30) {
            Ok(dec) => {
                assert_eq!(dec.certified_window, 60);
                for x in 0..=60u64 {
                    for y in 0..=60u64 {
                        if dec.member(x, y) != oracle_solvable(c1, c2, e0, &e, x, y) {
                            mismatches += 1;
                        }
                    }
                }
            }
            Err(_) => fit_failures += 1,
        }
    }
    let rate = fit_failures as f64 / 50.0;
    println!(
        "  fit failures: {}/50 ({:.0}%, informational target < 10%)",
        fit_failures,
        rate * 100.0
    );
    verdict(
        "8 (two-exponential solution sets)",
        mismatches == 0,
        &format!("{} oracle mismatches (0 required); failure rate {:.0}%", mismatches, rate * 100.0),
    );
}

/// Independent oracle: for positive e_i a representation
/// Σ e_i·5^{m_i} = target has every m_i ≤ log₅(target), so bounded
/// search is complete.
fn oracle_solvable(c1: i64, c2: i64, e0: i64, e: &[i64], n1: u64, n2: u64) -> bool {
    let target = BigInt::from(c1) * BigInt::from(5).pow(n1 as u32)
        + BigInt::from(c2) * BigInt::from(5).pow(n2 as u32)
        - BigInt::from(e0);
    fn rec(target: &BigInt, e: &[i64]) -> bool {
        use num_traits::Signed;
        if e.is_empty() {
            return num_traits::Zero::is_zero(target);
        }
        if target.is_negative() {
            return false;
        }
        let head = BigInt::from(e[0]);
        let mut power = BigInt::from(1);
        loop {
            let contribution = &head * &power;
            if &contribution > target {
                return false;
            }
            if rec(&(target - &contribution), &e[1..]) {
                return true;
            }
            power *= 5;
        }
    }
    rec(&target, e)
}

/// Criterion 9: classification verdicts, exact.
#[test]
fn criterion_9_classifier() {
    let widely = parse_set_expr(5, "PS(25;0;[1,1])").unwrap();
    let plain = parse_set_expr(5, "PS(5;-1;[1])").unwrap();
    let ap = parse_set_expr(5, "AP(3,5)").unwrap();
    let ok = widely.classify() == SetClass::WidelyPNormalOnly
        && plain.classify() == SetClass::PNormal
        && ap.classify() == SetClass::PNormal;
    verdict(
        "9 (normality classifier)",
        ok,
        &format!(
            "PS(25;0;[1,1]) → {}, PS(5;-1;[1]) → {}, AP(3,5) → {}",
            widely.classify(),
            plain.classify(),
            ap.classify()
        ),
    );
}
