//! Good subgroups of `ℤ^d` and good cosets in `ℕ^d`.
//!
//! A good subgroup is cut out by requirements of four kinds: a coordinate
//! vanishes, a coordinate is divisible by `D`, two coordinates are equal,
//! or one coordinate is twice another. Every such subgroup admits a
//! canonical generating form `Σ ℤ·D_i·η_i` where the `η_i` have pairwise
//! disjoint supports and entries in `{0} ∪ {2^m}`; within one `η_i`, the
//! set of distinct powers that appear is a contiguous run `1, 2, …, 2^k`.
//!
//! A good coset is the intersection of a coset of a good subgroup with a
//! "big rectangle" `{n : n_i ≥ M_i}`. Cosets are closed under
//! intersection; the common-point search is an integer linear solve over
//! the canonical parametrizations.

use std::fmt;

/// One defining requirement of a good subgroup of `ℤ^d`.
/// Coordinate indices are 0-based in code and 1-based in the text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// `n_i = 0`
    Zero(usize),
    /// `D | n_i`, `D ≥ 1`
    Mult(usize, u64),
    /// `n_i = n_j`
    Eq(usize, usize),
    /// `n_i = 2·n_j`
    Double(usize, usize),
}

impl Requirement {
    fn validate(&self, d: usize) -> Result<(), String> {
        let ok = match *self {
            Requirement::Zero(i) => i < d,
            Requirement::Mult(i, dd) => i < d && dd >= 1,
            Requirement::Eq(i, j) | Requirement::Double(i, j) => i < d && j < d,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("requirement {:?} out of range for dimension {}", self, d))
        }
    }

    /// Does the vector satisfy this requirement?
    pub fn holds(&self, v: &[i64]) -> bool {
        match *self {
            Requirement::Zero(i) => v[i] == 0,
            Requirement::Mult(i, d) => v[i].rem_euclid(d as i64) == 0,
            Requirement::Eq(i, j) => v[i] == v[j],
            Requirement::Double(i, j) => v[i] == 2 * v[j],
        }
    }
}

/// One canonical generator: the subgroup contributes `ℤ·D·η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub multiplier: u64,
    pub eta: Vec<u64>,
}

/// A subgroup of `ℤ^d` defined by requirements, with its canonical form.
#[derive(Clone, Debug)]
pub struct GoodSubgroup {
    d: usize,
    requirements: Vec<Requirement>,
    /// Coordinates forced to zero.
    zeroed: Vec<bool>,
    generators: Vec<Generator>,
}

impl GoodSubgroup {
    pub fn new(d: usize, requirements: Vec<Requirement>) -> Result<GoodSubgroup, String> {
        assert!(d >= 1);
        for r in &requirements {
            r.validate(d)?;
        }
        let (zeroed, generators) = canonicalize(d, &requirements);
        Ok(GoodSubgroup { d, requirements, zeroed, generators })
    }

    pub fn full(d: usize) -> GoodSubgroup {
        GoodSubgroup::new(d, Vec::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.requirements
    }

    /// The canonical `(D_i, η_i)` list (empty for the trivial subgroup).
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership via the requirements (the defining semantics).
    pub fn contains_by_requirements(&self, v: &[i64]) -> bool {
        v.len() == self.d && self.requirements.iter().all(|r| r.holds(v))
    }

    /// Membership via the canonical span.
    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.d {
            return false;
        }
        for (i, &z) in self.zeroed.iter().enumerate() {
            if z && v[i] != 0 {
                return false;
            }
        }
        for g in &self.generators {
            let mut k: Option<i64> = None;
            for (i, &e) in g.eta.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if v[i].rem_euclid(e as i64) != 0 {
                    return false;
                }
                let ki = v[i] / e as i64;
                match k {
                    None => k = Some(ki),
                    Some(prev) if prev != ki => return false,
                    _ => {}
                }
            }
            if let Some(k) = k {
                if k.rem_euclid(g.multiplier as i64) != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// Canonicalization: contract the Eq/Double relation graph, propagate
/// forced zeros, scale each connected component to power-of-two
/// exponents, then fold Zero and Mult constraints into per-component
/// multipliers.
fn canonicalize(d: usize, reqs: &[Requirement]) -> (Vec<bool>, Vec<Generator>) {
    // adjacency with exponent weights: edge (i, j, w) means n_i = 2^w·n_j
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); d];
    for r in reqs {
        match *r {
            Requirement::Eq(i, j) => {
                adj[i].push((j, 0));
                adj[j].push((i, 0));
            }
            Requirement::Double(i, j) => {
                // n_i = 2·n_j: the exponent of i is one above that of j
                adj[j].push((i, 1));
                adj[i].push((j, -1));
            }
            _ => {}
        }
    }
    // BFS per component assigning relative exponents; inconsistent cycles
    // force the whole component to zero.
    let mut comp_id = vec![usize::MAX; d];
    let mut expo = vec![0i64; d];
    let mut comp_forced = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..d {
        if comp_id[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        comp_id[start] = id;
        expo[start] = 0;
        let mut forced = false;
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for &(j, w) in &adj[i] {
                let e = expo[i] + w;
                if comp_id[j] == usize::MAX {
                    comp_id[j] = id;
                    expo[j] = e;
                    members.push(j);
                    queue.push(j);
                } else if expo[j] != e {
                    // n_j = 2^a·k and n_j = 2^b·k with a ≠ b
                    forced = true;
                }
            }
        }
        comp_forced.push(forced);
        comps.push(members);
    }
    // Zero requirements force their component.
    for r in reqs {
        if let Requirement::Zero(i) = *r {
            comp_forced[comp_id[i]] = true;
        }
    }
    let mut zeroed = vec![false; d];
    let mut generators = Vec::new();
    for (id, members) in comps.iter().enumerate() {
        if comp_forced[id] {
            for &i in members {
                zeroed[i] = true;
            }
            continue;
        }
        let min_e = members.iter().map(|&i| expo[i]).min().unwrap();
        let mut eta = vec![0u64; d];
        for &i in members {
            let rel = expo[i] - min_e;
            assert!(rel < 63, "exponent chain too deep");
            eta[i] = 1u64 << rel;
        }
        // Mult constraints: D | 2^{e_i}·k ⟺ (D / gcd(D, 2^{e_i})) | k
        let mut multiplier = 1u64;
        for r in reqs {
            if let Requirement::Mult(i, dd) = *r {
                if comp_id[i] == id {
                    let red = dd / gcd_u64(dd, eta[i]);
                    multiplier = lcm_u64(multiplier, red);
                }
            }
        }
        generators.push((members.iter().min().copied().unwrap(), Generator { multiplier, eta }));
    }
    generators.sort_by_key(|(min_i, _)| *min_i);
    (zeroed, generators.into_iter().map(|(_, g)| g).collect())
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

// ============================================================================
// Good cosets
// ============================================================================

/// `{v ∈ ℕ^d : v_i ≥ M_i} ∩ (base + H)` for a good subgroup `H`.
#[derive(Clone, Debug)]
pub struct GoodCoset {
    base: Vec<i64>,
    rect: Vec<u64>,
    subgroup: GoodSubgroup,
}

impl GoodCoset {
    pub fn new(base: Vec<i64>, rect: Vec<u64>, subgroup: GoodSubgroup) -> Result<GoodCoset, String> {
        if base.len() != subgroup.dim() || rect.len() != subgroup.dim() {
            return Err("dimension mismatch".into());
        }
        Ok(GoodCoset { base, rect, subgroup })
    }

    /// The singleton `{v}`.
    pub fn singleton(v: Vec<i64>) -> GoodCoset {
        let d = v.len();
        let reqs = (0..d).map(Requirement::Zero).collect();
        GoodCoset {
            base: v,
            rect: vec![0; d],
            subgroup: GoodSubgroup::new(d, reqs).unwrap(),
        }
    }

    /// All of `ℕ^d`.
    pub fn full(d: usize) -> GoodCoset {
        GoodCoset { base: vec![0; d], rect: vec![0; d], subgroup: GoodSubgroup::full(d) }
    }

    pub fn dim(&self) -> usize {
        self.subgroup.dim()
    }

    pub fn base(&self) -> &[i64] {
        &self.base
    }

    pub fn rect(&self) -> &[u64] {
        &self.rect
    }

    pub fn subgroup(&self) -> &GoodSubgroup {
        &self.subgroup
    }

    pub fn member(&self, v: &[i64]) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        if v.iter().zip(&self.rect).any(|(&vi, &mi)| vi < 0 || (vi as u64) < mi) {
            return false;
        }
        let diff: Vec<i64> = v.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        self.subgroup.contains(&diff)
    }

    /// All members in `[0, w]^d`. Intended for desk-scale windows.
    pub fn enumerate(&self, w: u64) -> Vec<Vec<i64>> {
        let d = self.dim();
        assert!(d <= 6, "enumeration dimension too large");
        let mut out = Vec::new();
        let mut v = vec![0i64; d];
        loop {
            if self.member(&v) {
                out.push(v.clone());
            }
            // odometer
            let mut i = 0;
            loop {
                if i == d {
                    return out;
                }
                v[i] += 1;
                if v[i] as u64 <= w {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }

    /// The affine normal form `η₀ + Σ ℕ·D_i·η_i` of a nonempty coset:
    /// the least member plus the canonical steps. `None` when empty.
    pub fn affine_form(&self) -> Option<(Vec<u64>, Vec<Generator>)> {
        let d = self.dim();
        let mut eta0 = vec![0i64; d];
        // fixed coordinates: base must clear the rectangle and ℕ
        for i in 0..d {
            if self.subgroup.zeroed[i]
                || self.subgroup.generators.iter().all(|g| g.eta[i] == 0)
            {
                let v = self.base[i];
                if v < 0 || (v as u64) < self.rect[i] {
                    return None;
                }
                eta0[i] = v;
            }
        }
        for g in &self.subgroup.generators {
            // minimal k with base_i + 2^{e_i}·D·k ≥ max(rect_i, 0) for all i in support
            let step_of = |i: usize| g.eta[i] as i64 * g.multiplier as i64;
            let mut k_min = i64::MIN;
            for i in 0..d {
                if g.eta[i] == 0 {
                    continue;
                }
                let lo = (self.rect[i] as i64).max(0);
                let need = lo - self.base[i];
                let step = step_of(i);
                let k = div_ceil_i64(need, step);
                k_min = k_min.max(k);
            }
            if k_min == i64::MIN {
                continue;
            }
            for i in 0..d {
                if g.eta[i] != 0 {
                    eta0[i] = self.base[i] + step_of(i) * k_min;
                }
            }
        }
        let eta0u = eta0.iter().map(|&v| u64::try_from(v).ok()).collect::<Option<Vec<u64>>>()?;
        Some((eta0u, self.subgroup.generators.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.affine_form().is_none()
    }

    /// Intersection: the rectangle bounds are componentwise maxima, the
    /// requirement lists concatenate and recanonicalize, and a common
    /// base point comes from an integer linear solve over the two
    /// parametrizations. `None` when the system is infeasible.
    pub fn intersect(&self, other: &GoodCoset) -> Option<GoodCoset> {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let d = self.dim();
        let rect: Vec<u64> =
            self.rect.iter().zip(&other.rect).map(|(&a, &b)| a.max(b)).collect();
        let mut reqs = self.subgroup.requirements.clone();
        reqs.extend_from_slice(&other.subgroup.requirements);
        let sub = GoodSubgroup::new(d, reqs).ok()?;
        // Solve base_a + Σ j_c·(D η)_a = base_b + Σ i_c·(D η)_b coordinatewise.
        let ga = &self.subgroup.generators;
        let gb = &other.subgroup.generators;
        let cols = ga.len() + gb.len();
        let mut mat = vec![vec![0i128; cols]; d];
        let mut rhs = vec![0i128; d];
        for i in 0..d {
            for (c, g) in ga.iter().enumerate() {
                mat[i][c] = g.eta[i] as i128 * g.multiplier as i128;
            }
            for (c, g) in gb.iter().enumerate() {
                mat[i][ga.len() + c] = -(g.eta[i] as i128 * g.multiplier as i128);
            }
            rhs[i] = other.base[i] as i128 - self.base[i] as i128;
            // coordinates zeroed in either subgroup contribute no unknowns;
            // the equation is still required to balance.
        }
        let sol = solve_int_linear(&mat, &rhs)?;
        let mut w = self.base.clone();
        for (c, g) in ga.iter().enumerate() {
            for i in 0..d {
                w[i] += (sol[c] * g.eta[i] as i128 * g.multiplier as i128) as i64;
            }
        }
        let coset = GoodCoset { base: w, rect, subgroup: sub };
        // normalize the base into ℕ^d via the least member
        let (eta0, _) = coset.affine_form()?;
        let base = eta0.iter().map(|&v| v as i64).collect();
        Some(GoodCoset { base, rect: coset.rect, subgroup: coset.subgroup })
    }
}

fn div_ceil_i64(a: i64, b: i64) -> i64 {
    assert!(b > 0);
    if a <= 0 {
        -((-a) / b)
    } else {
        (a + b - 1) / b
    }
}

/// A particular integer solution of `A·x = b`, by triangularizing with
/// unimodular column operations (a Hermite-style reduction). Dimensions
/// here are tiny: columns are coset generators.
fn solve_int_linear(a: &[Vec<i128>], b: &[i128]) -> Option<Vec<i128>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect(); // u[col][orig] — rows of U as column recipes
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut next_col = 0usize;
    for r in 0..rows {
        if next_col >= cols {
            break;
        }
        // sweep columns next_col.. to leave a single nonzero (the gcd) at next_col
        let mut any = false;
        for c in next_col..cols {
            if h[r][c] != 0 {
                any = true;
            }
        }
        if !any {
            continue;
        }
        for c in (next_col + 1)..cols {
            if h[r][c] == 0 {
                continue;
            }
            let (g, s, t) = extgcd(h[r][next_col], h[r][c]);
            let (p, q) = (h[r][next_col] / g, h[r][c] / g);
            // col_p' = s·col_p + t·col_c ; col_c' = −q·col_p + p·col_c
            for rr in 0..rows {
                let vp = h[rr][next_col];
                let vc = h[rr][c];
                h[rr][next_col] = s * vp + t * vc;
                h[rr][c] = -q * vp + p * vc;
            }
            for k in 0..cols {
                let vp = u[next_col][k];
                let vc = u[c][k];
                u[next_col][k] = s * vp + t * vc;
                u[c][k] = -q * vp + p * vc;
            }
        }
        pivot_of_row[r] = Some(next_col);
        next_col += 1;
    }
    // forward substitution
    let mut y = vec![0i128; cols];
    for r in 0..rows {
        let mut val = b[r];
        for c in 0..cols {
            if Some(c) != pivot_of_row[r] {
                val -= h[r][c] * y[c];
            }
        }
        match pivot_of_row[r] {
            Some(p) => {
                let g = h[r][p];
                debug_assert!(g != 0);
                if val % g != 0 {
                    return None;
                }
                y[p] = val / g;
            }
            None => {
                if val != 0 {
                    return None;
                }
            }
        }
    }
    // x = U^T-composed: x[k] = Σ_col y[col]·u[col][k]
    let mut x = vec![0i128; cols];
    for (c, &yc) in y.iter().enumerate() {
        if yc == 0 {
            continue;
        }
        for k in 0..cols {
            x[k] += yc * u[c][k];
        }
    }
    Some(x)
}

fn extgcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        let g = a.abs();
        let s = if a < 0 { -1 } else { 1 };
        return (if g == 0 { 0 } else { g }, if g == 0 { 0 } else { s }, 0);
    }
    let (g, s1, t1) = extgcd(b, a % b);
    (g, t1, s1 - (a / b) * t1)
}

// ============================================================================
// Text form
// ============================================================================

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Requirement::Zero(i) => write!(f, "zero({})", i + 1),
            Requirement::Mult(i, d) => write!(f, "mult({},{})", i + 1, d),
            Requirement::Eq(i, j) => write!(f, "eq({},{})", i + 1, j + 1),
            Requirement::Double(i, j) => write!(f, "double({},{})", i + 1, j + 1),
        }
    }
}

impl fmt::Display for GoodCoset {
    /// `coset base=(1,0) rect=(0,0) req=[eq(1,2), mult(1,2)]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coset base=(")?;
        for (i, v) in self.base.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, ") rect=(")?;
        for (i, v) in self.rect.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, ") req=[")?;
        for (i, r) in self.subgroup.requirements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r)?;
        }
        write!(f, "]")
    }
}

/// Render a canonical form as a `D*η` list, e.g. `1*(1,1,2) + 3*(0,0,1)`.
pub fn display_generators(gens: &[Generator]) -> String {
    if gens.is_empty() {
        return "0".to_string();
    }
    gens.iter()
        .map(|g| {
            let eta = g
                .eta
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("{}*({})", g.multiplier, eta)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Parse the `coset base=(..) rect=(..) req=[..]` form.
pub fn parse_coset(src: &str) -> Result<GoodCoset, String> {
    let src = src.trim();
    let rest = src.strip_prefix("coset").ok_or("expected 'coset'")?.trim();
    let base = extract_paren_list(rest, "base")?;
    let rect = extract_paren_list(rest, "rect")?;
    let reqs_src = {
        let start = rest.find("req=[").ok_or("missing req=[..]")? + 5;
        let end = rest[start..].find(']').ok_or("unterminated req list")? + start;
        &rest[start..end]
    };
    let reqs = parse_requirements(reqs_src)?;
    let d = base.len();
    if rect.len() != d {
        return Err("base and rect dimension mismatch".into());
    }
    let rect_u = rect
        .iter()
        .map(|&v| u64::try_from(v).map_err(|_| "negative rectangle bound".to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let sub = GoodSubgroup::new(d, reqs)?;
    GoodCoset::new(base, rect_u, sub)
}

/// Parse a comma-separated requirement list like `eq(1,2), mult(1,2)`.
pub fn parse_requirements(src: &str) -> Result<Vec<Requirement>, String> {
    let mut out = Vec::new();
    let src = src.trim();
    if src.is_empty() {
        return Ok(out);
    }
    // split on commas at paren depth 0
    let mut depth = 0;
    let mut cur = String::new();
    let mut parts = Vec::new();
    for ch in src.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    for p in parts {
        let open = p.find('(').ok_or_else(|| format!("bad requirement '{}'", p))?;
        let name = p[..open].trim();
        let close = p.rfind(')').ok_or_else(|| format!("bad requirement '{}'", p))?;
        let args: Vec<i64> = p[open + 1..close]
            .split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let one_based = |v: i64| -> Result<usize, String> {
            if v >= 1 {
                Ok((v - 1) as usize)
            } else {
                Err(format!("coordinate index {} must be ≥ 1", v))
            }
        };
        let req = match (name, args.as_slice()) {
            ("zero", [i]) => Requirement::Zero(one_based(*i)?),
            ("mult", [i, d]) if *d >= 1 => Requirement::Mult(one_based(*i)?, *d as u64),
            ("eq", [i, j]) => Requirement::Eq(one_based(*i)?, one_based(*j)?),
            ("double", [i, j]) => Requirement::Double(one_based(*i)?, one_based(*j)?),
            _ => return Err(format!("bad requirement '{}'", p)),
        };
        out.push(req);
    }
    Ok(out)
}

fn extract_paren_list(src: &str, key: &str) -> Result<Vec<i64>, String> {
    let pat = format!("{}=(", key);
    let start = src.find(&pat).ok_or_else(|| format!("missing {}=(..)", key))? + pat.len();
    let end = src[start..].find(')').ok_or("unterminated list")? + start;
    src[start..end]
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|e| e.to_string()))
        .collect()
}
