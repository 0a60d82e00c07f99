//! End-to-end checks of the command-line surface: file formats, exit
//! codes, output shapes, and reproducibility.

use retset::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_UNDECIDED, EXIT_USAGE};

fn run_capture(args: &[&str]) -> (i32, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut buf = Vec::new();
    let code = run(&args, &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("retset-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const TORUS_GROUP: &str = include_str!("../examples/data/torus_alpha.group");
const TORUS_VARIETY: &str = include_str!("../examples/data/torus_alpha.variety");
const CURVE_GROUP: &str = include_str!("../examples/data/product_curve.group");
const SEGRE_VARIETY: &str = include_str!("../examples/data/segre_hyperplane.variety");

#[test]
fn scan_exact_torus_window() {
    let group = write_temp("torus.group", TORUS_GROUP);
    let variety = write_temp("torus.variety", TORUS_VARIETY);
    let out = write_temp("torus.csv", "");
    let json = write_temp("torus.json", "");
    let (code, _) = run_capture(&[
        "scan",
        "--group",
        group.to_str().unwrap(),
        "--variety",
        variety.to_str().unwrap(),
        "--window",
        "700",
        "--exact",
        "--out",
        out.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PASS);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("n,verdict,error_bound\n"));
    assert!(csv.contains("\n650,member,0e0\n"));
    assert!(csv.contains("\n651,non-member,0e0\n"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["members"], serde_json::json!([2, 26, 50, 626, 650]));
    assert_eq!(report["mode"], "exact");
}

#[test]
fn scan_monte_carlo_curve_product() {
    let group = write_temp("curve.group", CURVE_GROUP);
    let variety = write_temp("segre.variety", SEGRE_VARIETY);
    let out = write_temp("curve.csv", "");
    let (code, _) = run_capture(&[
        "scan",
        "--group",
        group.to_str().unwrap(),
        "--variety",
        variety.to_str().unwrap(),
        "--window",
        "130",
        "--specializations",
        "4",
        "--field-degree",
        "14",
        "--seed",
        "99",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PASS);
    let csv = std::fs::read_to_string(&out).unwrap();
    for n in [0u64, 1, 5, 25, 125] {
        assert!(
            csv.contains(&format!("\n{},probable-member,", n)) || csv.starts_with(&format!("{},probable-member,", n)),
            "power {} missing from scan members:\n{}",
            n,
            csv.lines().take(8).collect::<Vec<_>>().join("\n")
        );
    }
    assert!(csv.contains("\n2,non-member,"));
}

#[test]
fn scan_reports_are_reproducible() {
    let group = write_temp("torus2.group", TORUS_GROUP);
    let variety = write_temp("torus2.variety", TORUS_VARIETY);
    let a = write_temp("runa.json", "");
    let b = write_temp("runb.json", "");
    for path in [&a, &b] {
        let (code, _) = run_capture(&[
            "scan",
            "--group",
            group.to_str().unwrap(),
            "--variety",
            variety.to_str().unwrap(),
            "--window",
            "80",
            "--specializations",
            "3",
            "--field-degree",
            "10",
            "--seed",
            "12345",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_PASS);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn weak_field_is_refused_without_override() {
    let group = write_temp("torus3.group", TORUS_GROUP);
    let variety = write_temp("torus3.variety", TORUS_VARIETY);
    let (code, _) = run_capture(&[
        "scan",
        "--group",
        group.to_str().unwrap(),
        "--variety",
        variety.to_str().unwrap(),
        "--window",
        "1000",
        "--field-degree",
        "4",
    ]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = run_capture(&[
        "scan",
        "--group",
        group.to_str().unwrap(),
        "--variety",
        variety.to_str().unwrap(),
        "--window",
        "1000",
        "--field-degree",
        "4",
        "--specializations",
        "2",
        "--allow-weak-field",
    ]);
    // runs, but the bound exceeds the ceiling only when a member's degree
    // outgrows the field; with the override the verdict stands
    assert!(code == EXIT_PASS || code == EXIT_UNDECIDED);
}

#[test]
fn verify_example36_passes_and_fails() {
    let (code, out) = run_capture(&[
        "verify-example36",
        "--max-power",
        "4",
        "--window",
        "30",
        "--specializations",
        "3",
        "--field-degree",
        "9",
        "--seed",
        "5",
    ]);
    assert_eq!(code, EXIT_PASS, "output:\n{}", out);
    assert!(out.contains("verdict: pass"));
    assert!(out.contains("p^4 in return set: true"));
    // the corrupted curve leaves the points off-curve: fail at j = 1
    let (code, out) = run_capture(&[
        "verify-example36",
        "--max-power",
        "2",
        "--curve-b",
        "2",
        "--skip-scan",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("points on curve: false"));
    assert!(out.contains("p^1 in return set: false"));
    assert!(out.contains("p^0 in return set: true"));
}

#[test]
fn verify_counterexample_small() {
    let json = write_temp("disproof.json", "");
    let (code, out) = run_capture(&[
        "verify-counterexample",
        "--window",
        "700",
        "--max-witness",
        "1",
        "--specializations",
        "3",
        "--field-degree",
        "13",
        "--seed",
        "8",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PASS, "output:\n{}", out);
    assert!(out.contains("torus return-set window: {2, 26, 50, 626, 650}"));
    assert!(out.contains("verdict: pass"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["torus_window_ok"], serde_json::json!(true));
    assert_eq!(report["classifier_ok"], serde_json::json!(true));
}

#[test]
fn set_subcommands_round_trip() {
    let (code, out) = run_capture(&["set", "window", "PS(25;0;[1,1])", "1000"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.trim(), "2,650");
    let (code, out) = run_capture(&["set", "affine", "3", "2", "PS(5;-1;[1])"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.trim(), "PS(5;-1;[3])");
    let (code, out) = run_capture(&["set", "compare", "PS(5;-1;[1])", "PS(5;-1;[1]) add{17}", "0", "200"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("{17}"));
    let (code, out) = run_capture(&["set", "union", "AP(0,2)", "AP(1,2)"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.trim(), "AP(0,2) + AP(1,2)");
    let (code, _) = run_capture(&["set", "member", "PS(5;0;[1|-1])", "3"]);
    assert_eq!(code, EXIT_UNDECIDED);
    let (code, out) = run_capture(&["set", "coset-enum", "coset base=(1,0) rect=(0,0) req=[eq(1,2), mult(1,2)]", "6"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().collect::<Vec<_>>(), vec!["(1,0)", "(3,2)", "(5,4)"]);
}

#[test]
fn malformed_files_give_usage_errors() {
    let bad = write_temp("bad.group", "component torus dim=2\n");
    let variety = write_temp("torus4.variety", TORUS_VARIETY);
    let (code, _) = run_capture(&[
        "scan",
        "--group",
        bad.to_str().unwrap(),
        "--variety",
        variety.to_str().unwrap(),
        "--window",
        "5",
        "--exact",
    ]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _) = run_capture(&["scan", "--group", "/nonexistent/x.group", "--variety", "y", "--window", "5"]);
    assert_eq!(code, EXIT_USAGE);
}
