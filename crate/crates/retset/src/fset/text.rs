//! Text format for module/endomorphism descriptions and decomposition
//! reports.
//!
//! ```text
//! rank 1
//! torsion 3            # zero or more invariants
//! free [[5]]           # rank×rank integer matrix
//! tor [[2]]            # torsion×torsion
//! free-to-tor [[0]]    # torsion×rank
//! charpoly 10 -7 1     # little-endian, monic
//! q 5
//! ```
//!
//! Decomposition reports render one coset per line in the good-coset
//! text form, followed by an `exact` or `window-certified` flag line.

use super::decompose::{Certification, Decomposition};
use super::module::{EigenData, FgModule, FrobeniusSpec, FsetError};

pub fn parse_frobenius_spec(src: &str) -> Result<FrobeniusSpec, FsetError> {
    let mut rank = None;
    let mut torsion: Vec<u64> = Vec::new();
    let mut free: Option<Vec<Vec<i64>>> = None;
    let mut tor: Option<Vec<Vec<i64>>> = None;
    let mut free_to_tor: Option<Vec<Vec<i64>>> = None;
    let mut charpoly: Option<Vec<i64>> = None;
    let mut q = None;
    for raw in src.lines() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "rank" => rank = Some(parse_num::<usize>(rest)?),
            "torsion" => {
                torsion = rest
                    .split_whitespace()
                    .map(parse_num::<u64>)
                    .collect::<Result<_, _>>()?
            }
            "free" => free = Some(parse_matrix(rest)?),
            "tor" => tor = Some(parse_matrix(rest)?),
            "free-to-tor" => free_to_tor = Some(parse_matrix(rest)?),
            "charpoly" => {
                charpoly = Some(
                    rest.split_whitespace().map(parse_num::<i64>).collect::<Result<_, _>>()?,
                )
            }
            "q" => q = Some(parse_num::<u64>(rest)?),
            other => {
                return Err(FsetError::BadSpec(format!("unknown key '{}'", other)));
            }
        }
    }
    let rank = rank.ok_or_else(|| FsetError::BadSpec("missing rank".into()))?;
    let module = FgModule::new(rank, torsion.clone())?;
    let s = torsion.len();
    let free = free.unwrap_or_else(|| identity(rank));
    let tor = tor.unwrap_or_else(|| identity(s));
    let free_to_tor = free_to_tor.unwrap_or_else(|| vec![vec![0; rank]; s]);
    let charpoly = charpoly.ok_or_else(|| FsetError::BadSpec("missing charpoly".into()))?;
    let q = q.ok_or_else(|| FsetError::BadSpec("missing q".into()))?;
    FrobeniusSpec::new(module, free, tor, free_to_tor, charpoly, q, EigenData::None)
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, FsetError>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| FsetError::BadSpec(format!("'{}': {}", s, e)))
}

/// `[[a,b],[c,d]]`rows of integers.
fn parse_matrix(src: &str) -> Result<Vec<Vec<i64>>, FsetError> {
    let src = src.trim();
    let inner = src
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or_else(|| FsetError::BadSpec(format!("matrix syntax [[..],[..]]: '{}'", src)))?;
    inner
        .split("],[")
        .map(|row| {
            row.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(parse_num::<i64>)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect()
}

/// One coset per line, then the certification flag.
pub fn render_decomposition(dec: &Decomposition) -> String {
    let mut out = String::new();
    for c in &dec.cosets {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    match dec.certification {
        Certification::Exact => out.push_str("exact\n"),
        Certification::WindowCertified { window } => {
            out.push_str(&format!("window-certified [0,{}]^d\n", window));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fset::{decompose_index_set, FSetSpec};

    const ODD_INDEX: &str = "\
rank 1
torsion 3
free [[5]]
tor [[2]]
free-to-tor [[0]]
charpoly 10 -7 1
q 5
";

    #[test]
    fn parse_and_decompose() {
        let spec = parse_frobenius_spec(ODD_INDEX).unwrap();
        let m = spec.module().clone();
        let fset = FSetSpec::plain(m.elem(vec![0], vec![1]), vec![m.elem(vec![1], vec![1])]);
        let g0 = m.elem(vec![1], vec![0]);
        let dec = decompose_index_set(&spec, &fset, &g0, 16).unwrap();
        let rendered = render_decomposition(&dec);
        assert_eq!(rendered, "coset base=(1) rect=(0) req=[mult(1,2)]\nexact\n");
    }

    #[test]
    fn parse_rejects_incomplete() {
        assert!(parse_frobenius_spec("rank 1\n").is_err());
        assert!(parse_frobenius_spec("rank 1\ncharpoly 10 -7 1\nq 5\nfree [[3]]\n").is_err());
    }
}
