//! The group/point and variety text formats, and report emission.
//!
//! Group/point description (line-oriented, `#` comments):
//!
//! ```text
//! prime 5
//! coeff-degree 2                  # coefficient field F_{p^k}, default 1
//! constant alpha generator        # or: constant c [1,2]  (coefficient vector)
//! component torus dim=3
//! component curve a=0 b=1
//! adjoin s2 = t^3 + 1             # names the square root of the radicand
//! point torus: t+alpha, t-alpha, t
//! point curve: (t, s2)            # or: point curve: O
//! ```
//!
//! `point` lines appear once per component, in component order. Adjoined
//! root names, declared constants, and `t` are in scope in coordinate
//! expressions.
//!
//! Variety description:
//!
//! ```text
//! prime 5
//! coeff-degree 2
//! constant alpha generator
//! coords torus: x, y, z
//! coords curve: x0, x1, x2        # three projective names per curve
//! equation x + y - 2*z - 2*alpha^2 = 0
//! nonzero x2                      # optional disequality constraints
//! ```
//!
//! Scan reports are emitted as CSV (`n,verdict,error_bound`) and JSON.
//! Reports are reproducible: the same configuration and seed give
//! byte-identical files (timing is never serialized).

use crate::ambient::{AmbientGroup, Component, Coords, GroupPoint};
use crate::curve::{ECPoint, EllipticCurve};
use crate::field::{Fq, FqElem};
use crate::scan::{ScanReport, ScanRow};
use crate::tower::{parse_tower_elem, SqrtTower};
use crate::variety::{CoordBlock, PolySystem};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Shared front matter of both formats.
struct Preamble {
    prime: u64,
    coeff: Fq,
    constants: BTreeMap<String, FqElem>,
}

fn parse_preamble(lines: &[(usize, String)]) -> Result<Preamble, ParseError> {
    let mut prime = None;
    let mut degree = 1usize;
    // first pass: prime and degree
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("prime") => {
                let v = it.next().ok_or_else(|| err(*ln, "prime needs a value"))?;
                prime = Some(v.parse::<u64>().map_err(|e| err(*ln, e.to_string()))?);
            }
            Some("coeff-degree") => {
                let v = it.next().ok_or_else(|| err(*ln, "coeff-degree needs a value"))?;
                degree = v.parse::<usize>().map_err(|e| err(*ln, e.to_string()))?;
            }
            _ => {}
        }
    }
    let prime = prime.ok_or_else(|| err(0, "missing 'prime' declaration"))?;
    let coeff = Fq::new(prime, degree).map_err(|e| err(0, e.to_string()))?;
    // second pass: constants
    let mut constants = BTreeMap::new();
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        if it.next() != Some("constant") {
            continue;
        }
        let name = it.next().ok_or_else(|| err(*ln, "constant needs a name"))?.to_string();
        let value = it.next().ok_or_else(|| err(*ln, "constant needs a value"))?;
        let elem = if value == "generator" {
            coeff.multiplicative_generator()
        } else if value.starts_with('[') && value.ends_with(']') {
            let inner = &value[1..value.len() - 1];
            let coeffs: Vec<u64> = inner
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|e| err(*ln, e.to_string())))
                .collect::<Result<_, _>>()?;
            coeff.from_coeffs(&coeffs)
        } else {
            let v = value.parse::<i64>().map_err(|e| err(*ln, e.to_string()))?;
            coeff.from_i64(v)
        };
        constants.insert(name, elem);
    }
    Ok(Preamble { prime, coeff, constants })
}

fn numbered_lines(src: &str) -> Vec<(usize, String)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| {
            let clean = match l.find('#') {
                Some(pos) => &l[..pos],
                None => l,
            };
            (i + 1, clean.trim().to_string())
        })
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

/// Parse a group/point description into the ambient group and its point.
pub fn parse_group_file(src: &str) -> Result<(AmbientGroup, GroupPoint), ParseError> {
    let lines = numbered_lines(src);
    let pre = parse_preamble(&lines)?;
    // components
    let mut components = Vec::new();
    for (ln, line) in &lines {
        let mut it = line.split_whitespace();
        if it.next() != Some("component") {
            continue;
        }
        match it.next() {
            Some("torus") => {
                let dim_kv = it.next().ok_or_else(|| err(*ln, "torus needs dim=<n>"))?;
                let dim = dim_kv
                    .strip_prefix("dim=")
                    .ok_or_else(|| err(*ln, "torus needs dim=<n>"))?
                    .parse::<usize>()
                    .map_err(|e| err(*ln, e.to_string()))?;
                if dim == 0 {
                    return Err(err(*ln, "torus dimension must be positive"));
                }
                components.push(Component::Torus { dim });
            }
            Some("curve") => {
                let mut a = 0i64;
                let mut b = 0i64;
                for kv in it {
                    if let Some(v) = kv.strip_prefix("a=") {
                        a = v.parse().map_err(|e: std::num::ParseIntError| err(*ln, e.to_string()))?;
                    } else if let Some(v) = kv.strip_prefix("b=") {
                        b = v.parse().map_err(|e: std::num::ParseIntError| err(*ln, e.to_string()))?;
                    } else {
                        return Err(err(*ln, format!("unknown curve parameter '{}'", kv)));
                    }
                }
                let curve = EllipticCurve::new(pre.prime, a, b).map_err(|e| err(*ln, e.to_string()))?;
                components.push(Component::Curve(curve));
            }
            other => return Err(err(*ln, format!("unknown component kind {:?}", other))),
        }
    }
    if components.is_empty() {
        return Err(err(0, "no components declared"));
    }
    let group = AmbientGroup::new(pre.coeff.clone(), components);
    // adjoined roots
    let mut radicands = Vec::new();
    for (ln, line) in &lines {
        let rest = match line.strip_prefix("adjoin ") {
            Some(r) => r,
            None => continue,
        };
        let (name, expr) = rest
            .split_once('=')
            .ok_or_else(|| err(*ln, "adjoin syntax: adjoin <name> = <polynomial>"))?;
        let rf = crate::textexpr::parse_ratfunc_with(&pre.coeff, &pre.constants, expr.trim())
            .map_err(|e| err(*ln, e))?;
        radicands.push((name.trim().to_string(), rf));
    }
    let tower = SqrtTower::new(&pre.coeff, radicands);
    // points, in component order
    let mut point_lines: Vec<(usize, String, String)> = Vec::new();
    for (ln, line) in &lines {
        if let Some(rest) = line.strip_prefix("point ") {
            let (kind, coords) = rest
                .split_once(':')
                .ok_or_else(|| err(*ln, "point syntax: point <kind>: <coords>"))?;
            point_lines.push((*ln, kind.trim().to_string(), coords.trim().to_string()));
        }
    }
    if point_lines.len() != group.components().len() {
        return Err(err(
            0,
            format!(
                "need one point line per component ({} components, {} point lines)",
                group.components().len(),
                point_lines.len()
            ),
        ));
    }
    let mut coords = Vec::new();
    for ((ln, kind, body), comp) in point_lines.iter().zip(group.components()) {
        match (kind.as_str(), comp) {
            ("torus", Component::Torus { dim }) => {
                let parts: Vec<&str> = split_commas(body);
                if parts.len() != *dim {
                    return Err(err(*ln, format!("expected {} torus coordinates", dim)));
                }
                let values = parts
                    .iter()
                    .map(|s| parse_tower_elem(&tower, &pre.constants, s).map_err(|e| err(*ln, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                coords.push(Coords::Torus(values));
            }
            ("curve", Component::Curve(_)) => {
                let body = body.trim();
                if body == "O" {
                    coords.push(Coords::Curve(ECPoint::Infinity));
                } else {
                    let inner = body
                        .strip_prefix('(')
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| err(*ln, "curve point syntax: (x, y) or O"))?;
                    let parts: Vec<&str> = split_commas(inner);
                    if parts.len() != 2 {
                        return Err(err(*ln, "curve point needs two coordinates"));
                    }
                    let x = parse_tower_elem(&tower, &pre.constants, parts[0]).map_err(|e| err(*ln, e))?;
                    let y = parse_tower_elem(&tower, &pre.constants, parts[1]).map_err(|e| err(*ln, e))?;
                    coords.push(Coords::Curve(ECPoint::Affine(x, y)));
                }
            }
            _ => return Err(err(*ln, "point kind does not match the component order")),
        }
    }
    let point = GroupPoint::new(&group, tower, coords).map_err(|e| err(0, e))?;
    Ok((group, point))
}

/// Comma split at paren depth zero.
fn split_commas(src: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in src.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(src[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(src[start..].trim());
    parts
}

/// Parse a variety description against no particular group; componentwise
/// coordinate blocks must later match the scanned point.
pub fn parse_variety_file(src: &str) -> Result<PolySystem, ParseError> {
    let lines = numbered_lines(src);
    let pre = parse_preamble(&lines)?;
    let mut blocks = Vec::new();
    for (ln, line) in &lines {
        let rest = match line.strip_prefix("coords ") {
            Some(r) => r,
            None => continue,
        };
        let (kind, names_src) = rest
            .split_once(':')
            .ok_or_else(|| err(*ln, "coords syntax: coords <kind>: a, b, c"))?;
        let names: Vec<String> = split_commas(names_src).iter().map(|s| s.to_string()).collect();
        match kind.trim() {
            "torus" => blocks.push(CoordBlock::Torus(names)),
            "curve" => {
                if names.len() != 3 {
                    return Err(err(*ln, "curve blocks declare three projective names"));
                }
                blocks.push(CoordBlock::Curve([
                    names[0].clone(),
                    names[1].clone(),
                    names[2].clone(),
                ]));
            }
            other => return Err(err(*ln, format!("unknown coords kind '{}'", other))),
        }
    }
    let mut equations = Vec::new();
    let mut nonzero = Vec::new();
    for (ln, line) in &lines {
        if let Some(rest) = line.strip_prefix("equation ") {
            equations.push(PolySystem::parse_equation(rest).map_err(|e| err(*ln, e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("nonzero ") {
            nonzero.push(PolySystem::parse_equation(rest).map_err(|e| err(*ln, e.to_string()))?);
        }
    }
    if equations.is_empty() {
        return Err(err(0, "no equations declared"));
    }
    PolySystem::new(&pre.coeff, pre.constants, blocks, equations, nonzero)
        .map_err(|e| err(0, e.to_string()))
}

// ============================================================================
// Report emission
// ============================================================================

/// `n,verdict,error_bound` rows.
pub fn scan_report_csv(report: &ScanReport) -> String {
    let mut out = String::from("n,verdict,error_bound\n");
    for ScanRow { n, verdict, error_bound } in &report.rows {
        let v = match verdict {
            crate::scan::RowVerdict::Member => "member",
            crate::scan::RowVerdict::ProbableMember => "probable-member",
            crate::scan::RowVerdict::NonMember => "non-member",
        };
        let _ = writeln!(out, "{},{},{:e}", n, v, error_bound);
    }
    out
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization") + "\n"
}
