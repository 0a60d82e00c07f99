//! Command-line front end.
//!
//! ```text
//! retset scan --group FILE --variety FILE --window N [--exact]
//!             [--specializations S] [--field-degree K] [--seed X]
//!             [--out CSV] [--json FILE] [--allow-weak-field]
//! retset verify-example36 [--max-power J] [--window N] [--prime P] …
//! retset verify-counterexample [--window N] [--max-witness J] …
//! retset set <window|classify|member|affine|union|compare|two-exp|
//!             coset-canon|coset-intersect|coset-member|coset-enum> …
//! ```
//!
//! Exit codes: 0 pass, 1 fail with a counterexample, 2 undecided or
//! resource-limited, 3 usage error. Monte Carlo pass verdicts whose
//! false-accept bound exceeds 10⁻⁶ are downgraded to exit code 2 unless
//! `--allow-weak-field` is given.

use crate::io::{parse_group_file, parse_variety_file, scan_report_csv, to_json};
use crate::scan::{
    check_field_size, orbit_scan, verify_disproof_ingredients, verify_example36, DisproofParams,
    Example36Params, ScanError, ScanMode,
};
use crate::setalg::{
    compare_windows, parse_set_expr, two_exponential_decompose, TwoExpProblem, Verdict,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use std::io::Write;
use std::str::FromStr;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

const BOUND_CEILING: f64 = 1e-6;

pub fn run_from_env() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut stdout = std::io::stdout();
    run(&args, &mut stdout)
}

struct Flags {
    positional: Vec<String>,
    named: std::collections::BTreeMap<String, String>,
    switches: std::collections::BTreeSet<String>,
}

const SWITCHES: &[&str] = &["exact", "allow-weak-field", "skip-scan", "timing"];

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut flags = Flags {
        positional: Vec::new(),
        named: Default::default(),
        switches: Default::default(),
    };
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if let Some(name) = a.strip_prefix("--") {
            if SWITCHES.contains(&name) {
                flags.switches.insert(name.to_string());
                i += 1;
            } else {
                let value = args.get(i + 1).ok_or_else(|| format!("--{} needs a value", name))?;
                flags.named.insert(name.to_string(), value.clone());
                i += 2;
            }
        } else {
            flags.positional.push(a.clone());
            i += 1;
        }
    }
    Ok(flags)
}

impl Flags {
    fn get<T: FromStr>(&self, name: &str, default: T) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.named.get(name) {
            Some(v) => v.parse::<T>().map_err(|e| format!("--{}: {}", name, e)),
            None => Ok(default),
        }
    }

    fn get_opt<T: FromStr>(&self, name: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.named.get(name) {
            Some(v) => v.parse::<T>().map(Some).map_err(|e| format!("--{}: {}", name, e)),
            None => Ok(None),
        }
    }

    fn require(&self, name: &str) -> Result<&String, String> {
        self.named.get(name).ok_or_else(|| format!("missing --{}", name))
    }

    fn has(&self, name: &str) -> bool {
        self.switches.contains(name)
    }
}

pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let started = std::time::Instant::now();
    let code = match args.first().map(String::as_str) {
        Some("scan") => cmd_scan(&args[1..], out),
        Some("verify-example36") => cmd_verify_example36(&args[1..], out),
        Some("verify-counterexample") => cmd_verify_counterexample(&args[1..], out),
        Some("set") => cmd_set(&args[1..], out),
        Some("--help") | Some("help") | None => {
            let _ = writeln!(out, "{}", USAGE);
            EXIT_PASS
        }
        Some(other) => {
            eprintln!("unknown command '{}'", other);
            eprintln!("{}", USAGE);
            EXIT_USAGE
        }
    };
    if args.iter().any(|a| a == "--timing") {
        eprintln!("elapsed: {:?}", started.elapsed());
    }
    code
}

const USAGE: &str = "usage:
  retset scan --group FILE --variety FILE --window N [--exact]
              [--specializations S] [--field-degree K] [--seed X]
              [--out CSV] [--json FILE] [--allow-weak-field] [--timing]
  retset verify-example36 [--prime P] [--max-power J] [--window N]
              [--specializations S] [--field-degree K] [--seed X]
              [--curve-a A] [--curve-b B] [--skip-scan] [--json FILE]
  retset verify-counterexample [--prime P] [--window N] [--max-witness J]
              [--specializations S] [--field-degree K] [--seed X] [--json FILE]
  retset set window EXPR N [--prime P] [--out CSV]
  retset set classify EXPR [--prime P]
  retset set member EXPR N [--prime P] [--bound B]
  retset set affine A B EXPR [--prime P]
  retset set union EXPR1 EXPR2 [--prime P]
  retset set compare EXPR1 EXPR2 W0 W1 [--threshold T] [--prime P]
  retset set two-exp C1 C2 E0 Q WINDOW [--terms e1,e2,...] [--prime P]
  retset set coset-canon REQS --dim D
  retset set coset-intersect COSET1 COSET2
  retset set coset-member COSET TUPLE
  retset set coset-enum COSET W";

fn usage_err(out: &mut dyn Write, msg: &str) -> i32 {
    let _ = out.flush();
    eprintln!("error: {}", msg);
    eprintln!("{}", USAGE);
    EXIT_USAGE
}

fn scan_error_exit(e: &ScanError) -> i32 {
    match e {
        ScanError::Config(_) => EXIT_USAGE,
        ScanError::Resource(_) => EXIT_UNDECIDED,
        _ => EXIT_UNDECIDED,
    }
}

fn write_outputs(
    out: &mut dyn Write,
    report: &crate::scan::ScanReport,
    csv_path: Option<&String>,
    json_path: Option<&String>,
) -> Result<(), String> {
    let csv = scan_report_csv(report);
    match csv_path {
        Some(path) => std::fs::write(path, &csv).map_err(|e| e.to_string())?,
        None => {
            let _ = out.write_all(csv.as_bytes());
        }
    }
    if let Some(path) = json_path {
        std::fs::write(path, to_json(report)).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn cmd_scan(args: &[String], out: &mut dyn Write) -> i32 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_err(out, &e),
    };
    let mut inner = || -> Result<i32, String> {
        let group_path = flags.require("group")?;
        let variety_path = flags.require("variety")?;
        let window: u64 = flags.get("window", 100)?;
        let group_src = std::fs::read_to_string(group_path).map_err(|e| e.to_string())?;
        let variety_src = std::fs::read_to_string(variety_path).map_err(|e| e.to_string())?;
        let (group, point) = parse_group_file(&group_src).map_err(|e| e.to_string())?;
        let system = parse_variety_file(&variety_src).map_err(|e| e.to_string())?;
        let mode = if flags.has("exact") {
            ScanMode::Exact
        } else {
            let samples: usize = flags.get("specializations", 5)?;
            let p = group.coeff_field().p();
            let field_degree: usize = match flags.get_opt::<usize>("field-degree")? {
                Some(k) => k,
                None => default_field_degree(p, window, system.equations().len()),
            };
            check_field_size(p, field_degree, window, system.equations().len(), flags.has("allow-weak-field"))
                .map_err(|e| e.to_string())?;
            let seed: u64 = flags.get("seed", 0xc0ffee)?;
            ScanMode::MonteCarlo { samples, field_degree, seed }
        };
        let report = match orbit_scan(&group, &point, &system, window, &mode) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("scan failed: {}", e);
                return Ok(scan_error_exit(&e));
            }
        };
        write_outputs(out, &report, flags.named.get("out"), flags.named.get("json"))?;
        let members: Vec<String> = report.members.iter().map(|n| n.to_string()).collect();
        eprintln!(
            "members in [0,{}]: {{{}}} (max false-accept bound {:e})",
            window,
            members.join(", "),
            report.max_member_error_bound
        );
        if report.max_member_error_bound > BOUND_CEILING && !flags.has("allow-weak-field") {
            eprintln!(
                "false-accept bound {:e} exceeds {:e}; increase --field-degree or pass --allow-weak-field",
                report.max_member_error_bound, BOUND_CEILING
            );
            return Ok(EXIT_UNDECIDED);
        }
        Ok(EXIT_PASS)
    };
    match inner() {
        Ok(code) => code,
        Err(e) => usage_err(out, &e),
    }
}

/// Smallest degree `k` with `p^k > N²·equations`, plus one for margin.
fn default_field_degree(p: u64, window: u64, equations: usize) -> usize {
    let need = BigUint::from(window.max(2)) * BigUint::from(window.max(2)) * BigUint::from(equations.max(1));
    let mut k = 1usize;
    let mut q = BigUint::from(p);
    while q <= need {
        q *= BigUint::from(p);
        k += 1;
    }
    k + 1
}

fn cmd_verify_example36(args: &[String], out: &mut dyn Write) -> i32 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_err(out, &e),
    };
    let params = {
        let defaults = Example36Params::default();
        let build = || -> Result<Example36Params, String> {
            Ok(Example36Params {
                prime: flags.get("prime", defaults.prime)?,
                max_power: flags.get("max-power", defaults.max_power)?,
                window: flags.get("window", defaults.window)?,
                samples: flags.get("specializations", defaults.samples)?,
                field_degree: flags.get("field-degree", defaults.field_degree)?,
                seed: flags.get("seed", defaults.seed)?,
                curve_a: flags.get("curve-a", defaults.curve_a)?,
                curve_b: flags.get("curve-b", defaults.curve_b)?,
                skip_scan: flags.has("skip-scan"),
            })
        };
        match build() {
            Ok(p) => p,
            Err(e) => return usage_err(out, &e),
        }
    };
    let report = match verify_example36(&params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return scan_error_exit(&e);
        }
    };
    let _ = writeln!(out, "supersingular curve: {}", report.curve_supersingular);
    let _ = writeln!(out, "endomorphism identity F^2 = [-p]: {}", report.endomorphism_identity_ok);
    let _ = writeln!(out, "points on curve: {}", report.points_on_curve);
    for pi in &report.power_inclusions {
        let _ = writeln!(out, "p^{} in return set: {}", pi.j, pi.holds);
    }
    if let Some(scan) = &report.scan {
        let members: Vec<String> = scan.members.iter().map(|n| n.to_string()).collect();
        let _ = writeln!(
            out,
            "scan members in [0,{}]: {{{}}} (max false-accept bound {:e})",
            scan.window,
            members.join(", "),
            scan.max_member_error_bound
        );
        let _ = writeln!(out, "prime-to-p residue constraint: {}", report.residue_constraint_ok);
        if !report.residue_violations.is_empty() {
            let _ = writeln!(out, "violations: {:?}", report.residue_violations);
        }
        if !report.extra_members.is_empty() {
            let _ = writeln!(
                out,
                "members beyond the p-powers (recorded as data): {:?}",
                report.extra_members
            );
        }
    }
    let _ = writeln!(out, "verdict: {}", if report.pass { "pass" } else { "fail" });
    if let Some(path) = flags.named.get("json") {
        if std::fs::write(path, to_json(&report)).is_err() {
            return usage_err(out, "cannot write JSON report");
        }
    }
    let weak = report
        .scan
        .as_ref()
        .map_or(false, |s| s.max_member_error_bound > BOUND_CEILING);
    if report.pass && weak && !flags.has("allow-weak-field") {
        eprintln!("pass verdict refused: false-accept bound above {:e}", BOUND_CEILING);
        return EXIT_UNDECIDED;
    }
    if report.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn cmd_verify_counterexample(args: &[String], out: &mut dyn Write) -> i32 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_err(out, &e),
    };
    let params = {
        let defaults = DisproofParams::default();
        let build = || -> Result<DisproofParams, String> {
            Ok(DisproofParams {
                prime: flags.get("prime", defaults.prime)?,
                window: flags.get("window", defaults.window)?,
                max_witness: flags.get("max-witness", defaults.max_witness)?,
                samples: flags.get("specializations", defaults.samples)?,
                field_degree: flags.get("field-degree", defaults.field_degree)?,
                seed: flags.get("seed", defaults.seed)?,
            })
        };
        match build() {
            Ok(p) => p,
            Err(e) => return usage_err(out, &e),
        }
    };
    let report = match verify_disproof_ingredients(&params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return scan_error_exit(&e);
        }
    };
    let _ = writeln!(out, "{}", report.scope_note);
    let members: Vec<String> = report.torus_members.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(out, "torus return-set window: {{{}}}", members.join(", "));
    let _ = writeln!(out, "window equals the two-power sums: {}", report.torus_window_ok);
    for w in &report.witness_levels {
        let _ = writeln!(
            out,
            "witness level j={}: {} (bound {:e})",
            w.j,
            w.detail,
            w.error_bound
        );
    }
    let _ = writeln!(out, "classifier verdicts: {}", report.classifier_ok);
    let _ = writeln!(out, "verdict: {}", if report.pass { "pass" } else { "fail" });
    if let Some(path) = flags.named.get("json") {
        if std::fs::write(path, to_json(&report)).is_err() {
            return usage_err(out, "cannot write JSON report");
        }
    }
    let weak = report
        .witness_levels
        .iter()
        .any(|w| w.verified && w.error_bound > BOUND_CEILING);
    if report.pass && weak && !flags.has("allow-weak-field") {
        eprintln!("pass verdict refused: false-accept bound above {:e}", BOUND_CEILING);
        return EXIT_UNDECIDED;
    }
    if report.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn cmd_set(args: &[String], out: &mut dyn Write) -> i32 {
    let sub = match args.first() {
        Some(s) => s.as_str(),
        None => return usage_err(out, "set needs a subcommand"),
    };
    let flags = match parse_flags(&args[1..]) {
        Ok(f) => f,
        Err(e) => return usage_err(out, &e),
    };
    let prime: u64 = match flags.get("prime", 5) {
        Ok(p) => p,
        Err(e) => return usage_err(out, &e),
    };
    let pos = &flags.positional;
    let mut inner = || -> Result<i32, String> {
        match sub {
            "window" => {
                let expr = pos.first().ok_or("window needs an expression")?;
                let n = pos.get(1).ok_or("window needs a bound")?;
                let e = parse_set_expr(prime, expr).map_err(|e| e.to_string())?;
                let n = BigInt::from_str(n).map_err(|e| e.to_string())?;
                let window = e.window(&n).map_err(|e| e.to_string())?;
                let items: Vec<String> = window.iter().map(|v| v.to_string()).collect();
                if let Some(path) = flags.named.get("out") {
                    let mut csv = String::from("n\n");
                    for v in &items {
                        csv.push_str(v);
                        csv.push('\n');
                    }
                    std::fs::write(path, csv).map_err(|e| e.to_string())?;
                }
                let _ = writeln!(out, "{}", items.join(","));
                Ok(EXIT_PASS)
            }
            "classify" => {
                let expr = pos.first().ok_or("classify needs an expression")?;
                let e = parse_set_expr(prime, expr).map_err(|e| e.to_string())?;
                let _ = writeln!(out, "{}", e.classify());
                Ok(EXIT_PASS)
            }
            "member" => {
                let expr = pos.first().ok_or("member needs an expression")?;
                let n = pos.get(1).ok_or("member needs a value")?;
                let bound: u64 = flags.get("bound", 24)?;
                let e = parse_set_expr(prime, expr).map_err(|e| e.to_string())?;
                let n = BigInt::from_str(n).map_err(|e| e.to_string())?;
                match e.member(&n, bound) {
                    Verdict::Yes(witness) => {
                        let _ = writeln!(out, "yes (witness {:?})", witness);
                        Ok(EXIT_PASS)
                    }
                    Verdict::NoCertified => {
                        let _ = writeln!(out, "no (certified)");
                        Ok(EXIT_FAIL)
                    }
                    Verdict::Unknown { searched } => {
                        let _ = writeln!(out, "unknown (searched up to {})", searched);
                        Ok(EXIT_UNDECIDED)
                    }
                }
            }
            "affine" => {
                let a = pos.first().ok_or("affine needs a scale")?;
                let b = pos.get(1).ok_or("affine needs an offset")?;
                let expr = pos.get(2).ok_or("affine needs an expression")?;
                let e = parse_set_expr(prime, expr).map_err(|e| e.to_string())?;
                let a = BigInt::from_str(a).map_err(|e| e.to_string())?;
                let b = BigInt::from_str(b).map_err(|e| e.to_string())?;
                let f = e.affine(&a, &b).map_err(|e| e.to_string())?;
                let _ = writeln!(out, "{}", f);
                Ok(EXIT_PASS)
            }
            "union" => {
                let e1 = pos.first().ok_or("union needs two expressions")?;
                let e2 = pos.get(1).ok_or("union needs two expressions")?;
                let a = parse_set_expr(prime, e1).map_err(|e| e.to_string())?;
                let b = parse_set_expr(prime, e2).map_err(|e| e.to_string())?;
                let u = a.union(&b).map_err(|e| e.to_string())?;
                let _ = writeln!(out, "{}", u);
                Ok(EXIT_PASS)
            }
            "compare" => {
                let e1 = pos.first().ok_or("compare needs two expressions")?;
                let e2 = pos.get(1).ok_or("compare needs two expressions")?;
                let w0 = pos.get(2).ok_or("compare needs a window start")?;
                let w1 = pos.get(3).ok_or("compare needs a window end")?;
                let a = parse_set_expr(prime, e1).map_err(|e| e.to_string())?;
                let b = parse_set_expr(prime, e2).map_err(|e| e.to_string())?;
                let w0 = BigInt::from_str(w0).map_err(|e| e.to_string())?;
                let w1 = BigInt::from_str(w1).map_err(|e| e.to_string())?;
                let threshold = match flags.named.get("threshold") {
                    Some(t) => BigInt::from_str(t).map_err(|e| e.to_string())?,
                    None => &w1 / BigInt::from(2),
                };
                let report = compare_windows(&a, &b, &w0, &w1, &threshold).map_err(|e| e.to_string())?;
                let diffs: Vec<String> = report.differences.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "differences in [{}, {}]: {{{}}}", w0, w1, diffs.join(", "));
                let _ = writeln!(
                    out,
                    "{}",
                    if report.consistent_up_to_finite {
                        "consistent with equality up to a finite set (window evidence only)"
                    } else {
                        "not consistent with equality up to a finite set"
                    }
                );
                Ok(if report.consistent_up_to_finite { EXIT_PASS } else { EXIT_FAIL })
            }
            "two-exp" => {
                let c1 = pos.first().ok_or("two-exp needs c1 c2 e0 q window")?;
                let c2 = pos.get(1).ok_or("two-exp needs c1 c2 e0 q window")?;
                let e0 = pos.get(2).ok_or("two-exp needs c1 c2 e0 q window")?;
                let q = pos.get(3).ok_or("two-exp needs c1 c2 e0 q window")?;
                let window = pos.get(4).ok_or("two-exp needs c1 c2 e0 q window")?;
                let parse_rat = |s: &str| -> Result<BigRational, String> {
                    if let Some((n, d)) = s.split_once('/') {
                        Ok(BigRational::new(
                            BigInt::from_str(n).map_err(|e| e.to_string())?,
                            BigInt::from_str(d).map_err(|e| e.to_string())?,
                        ))
                    } else {
                        Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|e| e.to_string())?))
                    }
                };
                let e: Vec<BigRational> = match flags.named.get("terms") {
                    Some(list) => list
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| parse_rat(s.trim()))
                        .collect::<Result<_, _>>()?,
                    None => Vec::new(),
                };
                let prob = TwoExpProblem {
                    c1: parse_rat(c1)?,
                    c2: parse_rat(c2)?,
                    e0: parse_rat(e0)?,
                    e,
                    q: BigUint::from_str(q).map_err(|e| e.to_string())?,
                };
                let window: u64 = window.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
                match two_exponential_decompose(&prob, window) {
                    Ok(dec) => {
                        let _ = writeln!(out, "{}", dec);
                        Ok(EXIT_PASS)
                    }
                    Err(e) => {
                        let _ = writeln!(out, "{}", e);
                        Ok(EXIT_UNDECIDED)
                    }
                }
            }
            "coset-canon" => {
                let reqs_src = pos.first().ok_or("coset-canon needs a requirement list")?;
                let dim: usize = flags.get("dim", 0)?;
                if dim == 0 {
                    return Err("coset-canon needs --dim".into());
                }
                let reqs = crate::cosets::parse_requirements(reqs_src)?;
                let sub = crate::cosets::GoodSubgroup::new(dim, reqs)?;
                let _ = writeln!(out, "{}", crate::cosets::display_generators(sub.generators()));
                Ok(EXIT_PASS)
            }
            "coset-intersect" => {
                let a = pos.first().ok_or("coset-intersect needs two cosets")?;
                let b = pos.get(1).ok_or("coset-intersect needs two cosets")?;
                let a = crate::cosets::parse_coset(a)?;
                let b = crate::cosets::parse_coset(b)?;
                match a.intersect(&b) {
                    Some(c) => {
                        let _ = writeln!(out, "{}", c);
                        Ok(EXIT_PASS)
                    }
                    None => {
                        let _ = writeln!(out, "empty");
                        Ok(EXIT_PASS)
                    }
                }
            }
            "coset-member" => {
                let c = pos.first().ok_or("coset-member needs a coset and a tuple")?;
                let v = pos.get(1).ok_or("coset-member needs a coset and a tuple")?;
                let coset = crate::cosets::parse_coset(c)?;
                let tuple: Vec<i64> = v
                    .trim_matches(|c| c == '(' || c == ')')
                    .split(',')
                    .map(|s| s.trim().parse::<i64>().map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?;
                let member = coset.member(&tuple);
                let _ = writeln!(out, "{}", member);
                Ok(if member { EXIT_PASS } else { EXIT_FAIL })
            }
            "coset-enum" => {
                let c = pos.first().ok_or("coset-enum needs a coset and a window")?;
                let w = pos.get(1).ok_or("coset-enum needs a coset and a window")?;
                let coset = crate::cosets::parse_coset(c)?;
                let w: u64 = w.parse().map_err(|e: std::num::ParseIntError| e.to_string())?;
                for v in coset.enumerate(w) {
                    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(out, "({})", items.join(","));
                }
                Ok(EXIT_PASS)
            }
            other => Err(format!("unknown set subcommand '{}'", other)),
        }
    };
    match inner() {
        Ok(code) => code,
        Err(e) => usage_err(out, &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut buf = Vec::new();
        let code = run(&args, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn set_window_examples() {
        let (code, out) = run_capture(&["set", "window", "PS(5;-1;[1])", "130"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.trim(), "0,4,24,124");
        let (code, out) = run_capture(&["set", "window", "AP(1,6)", "20"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.trim(), "1,7,13,19");
    }

    #[test]
    fn set_classify_examples() {
        let (code, out) = run_capture(&["set", "classify", "PS(25;0;[1,1])"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.trim(), "widely-p-normal-only");
        let (_, out) = run_capture(&["set", "classify", "PS(5;-1;[1])"]);
        assert_eq!(out.trim(), "p-normal");
    }

    #[test]
    fn set_member_exit_codes() {
        let (code, _) = run_capture(&["set", "member", "PS(5;-1;[1])", "24"]);
        assert_eq!(code, EXIT_PASS);
        let (code, _) = run_capture(&["set", "member", "PS(5;-1;[1])", "30"]);
        assert_eq!(code, EXIT_FAIL);
    }

    #[test]
    fn set_coset_commands() {
        let (code, out) = run_capture(&["set", "coset-canon", "eq(1,2), double(3,2)", "--dim", "3"]);
        assert_eq!(code, EXIT_PASS);
        assert_eq!(out.trim(), "1*(1,1,2)");
        let (code, out) = run_capture(&[
            "set",
            "coset-intersect",
            "coset base=(0,0) rect=(0,0) req=[eq(1,2)]",
            "coset base=(0,0) rect=(0,0) req=[mult(1,2)]",
        ]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("req=["));
        let (code, _) = run_capture(&[
            "set",
            "coset-member",
            "coset base=(1,0) rect=(0,0) req=[eq(1,2), mult(1,2)]",
            "(3,2)",
        ]);
        assert_eq!(code, EXIT_PASS);
    }

    #[test]
    fn set_two_exp_diagonal() {
        let (code, out) = run_capture(&[
            "set", "two-exp", "1", "1", "0", "5", "8", "--terms", "2",
        ]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("diag (0+n,0+n)"), "got: {}", out);
    }

    #[test]
    fn usage_errors() {
        let (code, _) = run_capture(&["set", "window"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
