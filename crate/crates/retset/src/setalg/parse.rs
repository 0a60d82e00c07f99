//! The line-oriented set-expression grammar:
//!
//! ```text
//! expr := term (' + ' term)* ['add{n,…}'] ['del{n,…}'] ['in' ('N'|'Z')]
//! term := 'AP(' int ',' uint ')'
//!       | 'PS(' q ';' rat ';' '[' row ('|' row)* ']' ')'
//!       | 'A(' q ';' q1 ',' q2 ')'
//!       | 'B(' q ';' c0 ',' c1 ')'
//! row  := rat (',' rat)*
//! rat  := int ['/' uint]
//! ```
//!
//! Parsing needs the session prime to validate the terms.

use super::expr::{ATerm, BTerm, Domain, SetExpr, Term};
use super::pset::{PSetTerm, SetError};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::str::FromStr;

pub fn parse_set_expr(p: u64, src: &str) -> Result<SetExpr, SetError> {
    let mut src = src.trim().to_string();
    let mut domain = Domain::Int;
    if let Some(stripped) = src.strip_suffix("in N") {
        domain = Domain::Nat;
        src = stripped.trim().to_string();
    } else if let Some(stripped) = src.strip_suffix("in Z") {
        src = stripped.trim().to_string();
    }
    let mut removed = BTreeSet::new();
    if let Some(pos) = src.find("del{") {
        let end = src[pos..].find('}').ok_or_else(|| bad("unterminated del{"))? + pos;
        removed = parse_int_set(&src[pos + 4..end])?;
        src = format!("{}{}", &src[..pos], &src[end + 1..]).trim().to_string();
    }
    let mut added = BTreeSet::new();
    if let Some(pos) = src.find("add{") {
        let end = src[pos..].find('}').ok_or_else(|| bad("unterminated add{"))? + pos;
        added = parse_int_set(&src[pos + 4..end])?;
        src = format!("{}{}", &src[..pos], &src[end + 1..]).trim().to_string();
    }
    let mut terms = Vec::new();
    for part in split_top_level(&src, '+') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        terms.push(parse_term(p, part)?);
    }
    if terms.is_empty() && added.is_empty() {
        return Err(bad("empty expression"));
    }
    SetExpr::new(p, domain, terms).with_exceptions(added, removed)
}

fn bad(msg: &str) -> SetError {
    SetError::InvalidTerm(msg.to_string())
}

fn split_top_level(src: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' | '[' | '{' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' | '}' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                parts.push(cur.clone());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts
}

fn parse_term(p: u64, src: &str) -> Result<Term, SetError> {
    let open = src.find('(').ok_or_else(|| bad(&format!("bad term '{}'", src)))?;
    let close = src.rfind(')').ok_or_else(|| bad(&format!("bad term '{}'", src)))?;
    let head = src[..open].trim();
    let body = &src[open + 1..close];
    match head {
        "AP" => {
            let args = split_top_level(body, ',');
            if args.len() != 2 {
                return Err(bad("AP takes two arguments"));
            }
            let start = parse_int(&args[0])?;
            let step = parse_uint(&args[1])?;
            Ok(Term::Ap { start, step })
        }
        "PS" => {
            let args = split_top_level(body, ';');
            if args.len() != 3 {
                return Err(bad("PS takes q;c0;[rows]"));
            }
            let q = parse_uint(&args[0])?;
            let c0 = parse_rat(&args[1])?;
            let rows_src = args[2].trim();
            let inner = rows_src
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| bad("PS rows need [..]"))?;
            let mut c = Vec::new();
            for row in split_top_level(inner, '|') {
                let mut crow = Vec::new();
                for ent in split_top_level(&row, ',') {
                    crow.push(parse_rat(&ent)?);
                }
                c.push(crow);
            }
            Ok(Term::PSet(PSetTerm::new(p, q, c0, c)?))
        }
        "A" => {
            let args = split_top_level(body, ';');
            if args.len() != 2 {
                return Err(bad("A takes q;q1,q2"));
            }
            let q = parse_uint(&args[0])?;
            let rest = split_top_level(&args[1], ',');
            if rest.len() != 2 {
                return Err(bad("A takes q;q1,q2"));
            }
            Ok(Term::A(ATerm::new(p, q, parse_uint(&rest[0])?, parse_uint(&rest[1])?)?))
        }
        "B" => {
            let args = split_top_level(body, ';');
            if args.len() != 2 {
                return Err(bad("B takes q;c0,c1"));
            }
            let q = parse_uint(&args[0])?;
            let rest = split_top_level(&args[1], ',');
            if rest.len() != 2 {
                return Err(bad("B takes q;c0,c1"));
            }
            Ok(Term::B(BTerm::new(p, q, parse_uint(&rest[0])?, parse_uint(&rest[1])?)?))
        }
        other => Err(bad(&format!("unknown term head '{}'", other))),
    }
}

fn parse_int(src: &str) -> Result<BigInt, SetError> {
    BigInt::from_str(src.trim()).map_err(|e| bad(&e.to_string()))
}

fn parse_uint(src: &str) -> Result<BigUint, SetError> {
    BigUint::from_str(src.trim()).map_err(|e| bad(&e.to_string()))
}

fn parse_rat(src: &str) -> Result<BigRational, SetError> {
    let src = src.trim();
    if let Some((n, d)) = src.split_once('/') {
        let num = parse_int(n)?;
        let den = parse_int(d)?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    } else {
        Ok(BigRational::from_integer(parse_int(src)?))
    }
}

fn parse_int_set(src: &str) -> Result<BTreeSet<BigInt>, SetError> {
    let mut out = BTreeSet::new();
    for part in src.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.insert(parse_int(part)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalg::expr::SetClass;

    #[test]
    fn parse_and_window() {
        let e = parse_set_expr(5, "PS(5;-1;[1])").unwrap();
        assert_eq!(
            e.window(&BigInt::from(130)).unwrap(),
            [0, 4, 24, 124].map(BigInt::from).to_vec()
        );
        let ap = parse_set_expr(5, "AP(1,6)").unwrap();
        assert_eq!(
            ap.window(&BigInt::from(20)).unwrap(),
            [1, 7, 13, 19].map(BigInt::from).to_vec()
        );
    }

    #[test]
    fn parse_classify() {
        assert_eq!(parse_set_expr(5, "PS(25;0;[1,1])").unwrap().classify(), SetClass::WidelyPNormalOnly);
        assert_eq!(parse_set_expr(5, "PS(5;-1;[1])").unwrap().classify(), SetClass::PNormal);
    }

    #[test]
    fn parse_round_trip() {
        for src in [
            "AP(1,6)",
            "PS(5;-1;[1])",
            "PS(25;0;[1,1])",
            "PS(25;-1/24;[1/24,3|0,2])",
            "A(25;1,25) + B(25;2,1)",
            "AP(0,3) + PS(5;-1;[1]) add{17} del{4} in N",
        ] {
            let e = parse_set_expr(5, src).unwrap();
            let printed = e.to_string();
            let again = parse_set_expr(5, &printed).unwrap();
            assert_eq!(printed, again.to_string(), "unstable print for '{}'", src);
        }
    }

    #[test]
    fn parse_rejects_junk() {
        assert!(parse_set_expr(5, "").is_err());
        assert!(parse_set_expr(5, "XX(1)").is_err());
        assert!(parse_set_expr(5, "PS(10;0;[1])").is_err()); // q not a power of 5
        assert!(parse_set_expr(5, "A(5;1,1)").is_err()); // q must be a power of 25
    }

    #[test]
    fn union_and_membership() {
        let e = parse_set_expr(5, "AP(0,2) + PS(5;-1;[1]) del{0}").unwrap();
        assert!(e.member(&BigInt::from(6), 6).is_yes());
        assert!(e.member(&BigInt::from(24), 6).is_yes());
        assert!(e.member(&BigInt::from(0), 6).is_no());
    }
}
