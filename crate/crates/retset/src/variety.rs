//! Closed subvarieties as polynomial equation systems in ambient
//! coordinates, membership verdicts, and witness checking for sum-set
//! constructible sets.
//!
//! Coordinates are declared per ambient component: a torus of dimension
//! `k` contributes `k` variables, a curve contributes three projective
//! variables evaluated at the representatives `[x, y, 1]` (affine) and
//! `[0, 1, 0]` (the zero point). Equations must be homogeneous within
//! each projective block for membership to be representative-independent;
//! the built-in systems are, and a randomized rescaling test guards it.

use crate::ambient::{AmbientGroup, Coords, GroupPoint, SpecCoords, SpecPoint};
use crate::curve::ECPoint;
use crate::field::{Embedding, Fq, FqElem};
use crate::ratfunc::{big_to_f64, RatFunc};
use crate::specialize::{SpecError, Specialization};
use crate::textexpr::{self, Expr, ExprRing};
use crate::tower::{SqrtTower, TowerElem};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub enum VarietyError {
    UndeclaredCoordinate(String),
    BlockMismatch(String),
    Eval(String),
    /// Specialization retries exhausted.
    NoGoodSpecialization,
}

impl fmt::Display for VarietyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyError::UndeclaredCoordinate(v) => write!(f, "undeclared coordinate '{}'", v),
            VarietyError::BlockMismatch(s) => write!(f, "{}", s),
            VarietyError::Eval(s) => write!(f, "{}", s),
            VarietyError::NoGoodSpecialization => {
                write!(f, "specialization retries exhausted (denominators or roots degenerate)")
            }
        }
    }
}

impl std::error::Error for VarietyError {}

/// Coordinate names for one ambient component.
#[derive(Clone, Debug)]
pub enum CoordBlock {
    Torus(Vec<String>),
    /// Three projective coordinate names.
    Curve([String; 3]),
}

/// An equation system over declared coordinates and named constants.
#[derive(Clone)]
pub struct PolySystem {
    p: u64,
    coeff: Fq,
    constants: BTreeMap<String, FqElem>,
    blocks: Vec<CoordBlock>,
    /// Each expression is asserted to vanish.
    equations: Vec<Expr>,
    /// Each expression is asserted nonzero (locally closed conditions).
    nonzero: Vec<Expr>,
}

/// Membership verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Exact-arithmetic membership.
    Member,
    /// All sampled specializations vanished; false-accept bound attached.
    ProbableMember { error_bound: f64 },
    NonMember,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::NonMember)
    }
}

/// Evaluation mode for membership tests.
#[derive(Clone, Debug)]
pub enum Mode {
    Exact,
    MonteCarlo { samples: usize, field_degree: usize, seed: u64 },
}

impl PolySystem {
    pub fn new(
        coeff: &Fq,
        constants: BTreeMap<String, FqElem>,
        blocks: Vec<CoordBlock>,
        equations: Vec<Expr>,
        nonzero: Vec<Expr>,
    ) -> Result<PolySystem, VarietyError> {
        let sys = PolySystem { p: coeff.p(), coeff: coeff.clone(), constants, blocks, equations, nonzero };
        let declared = sys.coordinate_names();
        for eq in sys.equations.iter().chain(&sys.nonzero) {
            for v in eq.variables() {
                if !declared.contains(&v) && !sys.constants.contains_key(&v) {
                    return Err(VarietyError::UndeclaredCoordinate(v));
                }
            }
        }
        Ok(sys)
    }

    /// Parse equations of the form `lhs = rhs` (or a bare expression,
    /// asserted zero).
    pub fn parse_equation(src: &str) -> Result<Expr, VarietyError> {
        let expr = match src.split_once('=') {
            Some((lhs, rhs)) => Expr::Sub(
                Box::new(textexpr::parse(lhs).map_err(VarietyError::Eval)?),
                Box::new(textexpr::parse(rhs).map_err(VarietyError::Eval)?),
            ),
            None => textexpr::parse(src).map_err(VarietyError::Eval)?,
        };
        Ok(expr)
    }

    pub fn coeff_field(&self) -> &Fq {
        &self.coeff
    }

    pub fn blocks(&self) -> &[CoordBlock] {
        &self.blocks
    }

    pub fn equations(&self) -> &[Expr] {
        &self.equations
    }

    fn coordinate_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.blocks {
            match b {
                CoordBlock::Torus(names) => out.extend(names.iter().cloned()),
                CoordBlock::Curve(names) => out.extend(names.iter().cloned()),
            }
        }
        out
    }

    /// Bind a symbolic point's coordinates to the declared names.
    fn bind_symbolic(
        &self,
        point: &GroupPoint,
    ) -> Result<BTreeMap<String, TowerElem>, VarietyError> {
        let tower = point.tower();
        let mut out = BTreeMap::new();
        if point.coords().len() != self.blocks.len() {
            return Err(VarietyError::BlockMismatch(
                "point and system have different component counts".into(),
            ));
        }
        for (block, coords) in self.blocks.iter().zip(point.coords()) {
            match (block, coords) {
                (CoordBlock::Torus(names), Coords::Torus(values)) => {
                    if names.len() != values.len() {
                        return Err(VarietyError::BlockMismatch("torus dimension mismatch".into()));
                    }
                    for (n, v) in names.iter().zip(values) {
                        out.insert(n.clone(), v.clone());
                    }
                }
                (CoordBlock::Curve(names), Coords::Curve(pt)) => {
                    let (x0, x1, x2) = projective_rep_sym(tower, pt);
                    out.insert(names[0].clone(), x0);
                    out.insert(names[1].clone(), x1);
                    out.insert(names[2].clone(), x2);
                }
                _ => {
                    return Err(VarietyError::BlockMismatch(
                        "component kinds do not match the declaration".into(),
                    ))
                }
            }
        }
        Ok(out)
    }

    fn bind_specialized(
        &self,
        point: &SpecPoint,
    ) -> Result<BTreeMap<String, FqElem>, VarietyError> {
        let field = point.field();
        let mut out = BTreeMap::new();
        if point.coords().len() != self.blocks.len() {
            return Err(VarietyError::BlockMismatch(
                "point and system have different component counts".into(),
            ));
        }
        for (block, coords) in self.blocks.iter().zip(point.coords()) {
            match (block, coords) {
                (CoordBlock::Torus(names), SpecCoords::Torus(values)) => {
                    if names.len() != values.len() {
                        return Err(VarietyError::BlockMismatch("torus dimension mismatch".into()));
                    }
                    for (n, v) in names.iter().zip(values) {
                        out.insert(n.clone(), v.clone());
                    }
                }
                (CoordBlock::Curve(names), SpecCoords::Curve(pt)) => {
                    let (x0, x1, x2) = match pt {
                        ECPoint::Infinity => (field.zero(), field.one(), field.zero()),
                        ECPoint::Affine(x, y) => (x.clone(), y.clone(), field.one()),
                    };
                    out.insert(names[0].clone(), x0);
                    out.insert(names[1].clone(), x1);
                    out.insert(names[2].clone(), x2);
                }
                _ => {
                    return Err(VarietyError::BlockMismatch(
                        "component kinds do not match the declaration".into(),
                    ))
                }
            }
        }
        Ok(out)
    }

    /// Evaluate all equations at a symbolic point.
    pub fn eval_symbolic(&self, point: &GroupPoint) -> Result<Vec<TowerElem>, VarietyError> {
        let bindings = self.bind_symbolic(point)?;
        let ring = SymRing {
            tower: point.tower().clone(),
            coeff: &self.coeff,
            constants: &self.constants,
            bindings: &bindings,
        };
        self.equations
            .iter()
            .map(|eq| textexpr::eval(eq, &ring).map_err(VarietyError::Eval))
            .collect()
    }

    /// Evaluate all equations at a specialized point; constants embed
    /// into the point's field.
    pub fn eval_specialized(&self, point: &SpecPoint) -> Result<Vec<FqElem>, VarietyError> {
        let embedding = point
            .field()
            .embedding(&self.coeff)
            .map_err(|e| VarietyError::Eval(e.to_string()))?;
        let bindings = self.bind_specialized(point)?;
        let ring = SpecRing {
            field: point.field().clone(),
            coeff_embedding: embedding,
            coeff: &self.coeff,
            constants: &self.constants,
            bindings: &bindings,
        };
        self.equations
            .iter()
            .map(|eq| textexpr::eval(eq, &ring).map_err(VarietyError::Eval))
            .collect()
    }

    pub fn eval_nonzero_specialized(&self, point: &SpecPoint) -> Result<Vec<FqElem>, VarietyError> {
        let embedding = point
            .field()
            .embedding(&self.coeff)
            .map_err(|e| VarietyError::Eval(e.to_string()))?;
        let bindings = self.bind_specialized(point)?;
        let ring = SpecRing {
            field: point.field().clone(),
            coeff_embedding: embedding,
            coeff: &self.coeff,
            constants: &self.constants,
            bindings: &bindings,
        };
        self.nonzero
            .iter()
            .map(|eq| textexpr::eval(eq, &ring).map_err(VarietyError::Eval))
            .collect()
    }

    fn eval_nonzero_symbolic(&self, point: &GroupPoint) -> Result<Vec<TowerElem>, VarietyError> {
        let bindings = self.bind_symbolic(point)?;
        let ring = SymRing {
            tower: point.tower().clone(),
            coeff: &self.coeff,
            constants: &self.constants,
            bindings: &bindings,
        };
        self.nonzero
            .iter()
            .map(|eq| textexpr::eval(eq, &ring).map_err(VarietyError::Eval))
            .collect()
    }

    /// Membership of a symbolic point in the vanishing locus.
    pub fn contains(
        &self,
        group: &AmbientGroup,
        point: &GroupPoint,
        mode: &Mode,
    ) -> Result<Verdict, VarietyError> {
        match mode {
            Mode::Exact => {
                let values = self.eval_symbolic(point)?;
                if values.iter().any(|v| !v.is_zero()) {
                    return Ok(Verdict::NonMember);
                }
                for v in self.eval_nonzero_symbolic(point)? {
                    if v.is_zero() {
                        return Ok(Verdict::NonMember);
                    }
                }
                Ok(Verdict::Member)
            }
            Mode::MonteCarlo { samples, field_degree, seed } => {
                let _ = group;
                let target = Fq::new(self.p, *field_degree).map_err(|e| VarietyError::Eval(e.to_string()))?;
                use rand::SeedableRng;
                let mut rng = rand::rngs::StdRng::seed_from_u64(*seed);
                let per_bound = self.per_specialization_bound(point, &target);
                let mut bound = 1.0f64;
                let mut done = 0;
                let mut attempts = 0;
                while done < *samples {
                    attempts += 1;
                    if attempts > 100 * samples + 100 {
                        return Err(VarietyError::NoGoodSpecialization);
                    }
                    let sp = Specialization::random(&target, point.tower().field(), &mut rng);
                    let spec_point = match crate::ambient::specialize_point(point, &sp) {
                        Ok((p, _)) => p,
                        Err(_) => continue,
                    };
                    let values = match self.eval_specialized(&spec_point) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    if values.iter().any(|v| !v.is_zero()) {
                        return Ok(Verdict::NonMember);
                    }
                    // a vanishing "nonzero" witness is treated as a bad θ
                    match self.eval_nonzero_specialized(&spec_point) {
                        Ok(nz) if nz.iter().all(|v| !v.is_zero()) => {}
                        _ => continue,
                    }
                    bound *= per_bound;
                    done += 1;
                }
                Ok(Verdict::ProbableMember { error_bound: bound })
            }
        }
    }

    /// `Σ_eq deg(eq) / q` where equation degrees are bounded through the
    /// point's actual coordinate degrees.
    fn per_specialization_bound(&self, point: &GroupPoint, target: &Fq) -> f64 {
        let coord_bound = point_degree_bound(point);
        let mut total = BigUint::zero();
        for eq in &self.equations {
            total += expr_degree(eq, &coord_bound);
        }
        (big_to_f64(&total) / big_to_f64(target.order())).min(1.0)
    }
}

/// A conservative degree bound covering every coordinate of the point,
/// including the adjoined-root halves.
pub fn point_degree_bound(point: &GroupPoint) -> BigUint {
    let tower = point.tower();
    let mut bound = BigUint::one();
    let mut consider = |e: &TowerElem| {
        let d = e.degree_bound();
        if d > bound {
            bound = d;
        }
    };
    for c in point.coords() {
        match c {
            Coords::Torus(v) => v.iter().for_each(&mut consider),
            Coords::Curve(ECPoint::Affine(x, y)) => {
                consider(x);
                consider(y);
            }
            Coords::Curve(ECPoint::Infinity) => {}
        }
    }
    for i in 0..tower.num_roots() {
        let d = tower.radicand(i).degree_bound();
        if d > bound {
            bound = d;
        }
    }
    bound
}

/// Total degree of the equation in `t` once coordinates of degree
/// `coord_bound` are substituted.
fn expr_degree(expr: &Expr, coord_bound: &BigUint) -> BigUint {
    match expr {
        Expr::Int(_) => BigUint::zero(),
        Expr::Var(_) => coord_bound.clone(),
        Expr::Add(a, b) | Expr::Sub(a, b) => expr_degree(a, coord_bound).max(expr_degree(b, coord_bound)),
        Expr::Mul(a, b) | Expr::Div(a, b) => expr_degree(a, coord_bound) + expr_degree(b, coord_bound),
        Expr::Neg(a) | Expr::Sqrt(a) => expr_degree(a, coord_bound),
        Expr::Pow(a, e) => expr_degree(a, coord_bound) * e,
    }
}

// ---- evaluation rings ----

struct SymRing<'a> {
    tower: Arc<SqrtTower>,
    coeff: &'a Fq,
    constants: &'a BTreeMap<String, FqElem>,
    bindings: &'a BTreeMap<String, TowerElem>,
}

impl ExprRing for SymRing<'_> {
    type Val = TowerElem;

    fn from_int(&self, n: &BigInt) -> TowerElem {
        let red = n.mod_floor(&BigInt::from(self.coeff.p()));
        let v = self.coeff.from_u64(red.to_u64().unwrap());
        TowerElem::from_base(&self.tower, RatFunc::constant(v))
    }

    fn var(&self, name: &str) -> Result<TowerElem, String> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        if let Some(c) = self.constants.get(name) {
            return Ok(TowerElem::from_base(&self.tower, RatFunc::constant(c.clone())));
        }
        Err(format!("unknown name '{}'", name))
    }

    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.add(b)
    }

    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.sub(b)
    }

    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.mul(b)
    }

    fn div(&self, a: &TowerElem, b: &TowerElem) -> Result<TowerElem, String> {
        Ok(a.mul(&b.inv()?))
    }

    fn pow(&self, a: &TowerElem, e: &BigUint) -> TowerElem {
        // equation exponents are small
        let e = e.to_u64().expect("equation exponent too large");
        let mut acc = TowerElem::one(&self.tower);
        for _ in 0..e {
            acc = acc.mul(a);
        }
        acc
    }
}

struct SpecRing<'a> {
    field: Fq,
    coeff_embedding: Embedding,
    coeff: &'a Fq,
    constants: &'a BTreeMap<String, FqElem>,
    bindings: &'a BTreeMap<String, FqElem>,
}

impl ExprRing for SpecRing<'_> {
    type Val = FqElem;

    fn from_int(&self, n: &BigInt) -> FqElem {
        let red = n.mod_floor(&BigInt::from(self.coeff.p()));
        self.field.from_u64(red.to_u64().unwrap())
    }

    fn var(&self, name: &str) -> Result<FqElem, String> {
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        if let Some(c) = self.constants.get(name) {
            return Ok(self.coeff_embedding.apply(&self.field, c));
        }
        Err(format!("unknown name '{}'", name))
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.add(b)
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.sub(b)
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.mul(b)
    }

    fn div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, String> {
        a.div(b).map_err(|e| e.to_string())
    }

    fn pow(&self, a: &FqElem, e: &BigUint) -> FqElem {
        a.pow_big(e)
    }
}

fn projective_rep_sym(
    tower: &Arc<SqrtTower>,
    pt: &ECPoint<TowerElem>,
) -> (TowerElem, TowerElem, TowerElem) {
    match pt {
        ECPoint::Infinity => (
            TowerElem::zero(tower),
            TowerElem::one(tower),
            TowerElem::zero(tower),
        ),
        ECPoint::Affine(x, y) => (x.clone(), y.clone(), TowerElem::one(tower)),
    }
}

// ============================================================================
// Built-in systems
// ============================================================================

/// `x + y = 2z + 2a²` on `G_m³`, with `a` the deterministic generator of
/// the coefficient field.
pub fn torus_hyperplane_system(coeff: &Fq) -> PolySystem {
    let mut constants = BTreeMap::new();
    constants.insert("a".to_string(), coeff.multiplicative_generator());
    PolySystem::new(
        coeff,
        constants,
        vec![CoordBlock::Torus(vec!["x".into(), "y".into(), "z".into()])],
        vec![PolySystem::parse_equation("x + y - 2*z - 2*a^2").unwrap()],
        vec![],
    )
    .unwrap()
}

/// The Segre hyperplane `z02 = z20 + z22` on a product of two curves,
/// written in the projective coordinates of the factors:
/// `x0·y2 − x2·y0 − x2·y2 = 0`.
pub fn segre_hyperplane_system(coeff: &Fq) -> PolySystem {
    PolySystem::new(
        coeff,
        BTreeMap::new(),
        vec![
            CoordBlock::Curve(["x0".into(), "x1".into(), "x2".into()]),
            CoordBlock::Curve(["y0".into(), "y1".into(), "y2".into()]),
        ],
        vec![PolySystem::parse_equation("x0*y2 - x2*y0 - x2*y2").unwrap()],
        vec![],
    )
    .unwrap()
}

/// The x-coordinate reduction of the Segre hyperplane on `E × E`:
/// for two affine points the condition is `x(P) = x(Q) + 1`; when either
/// argument is the zero point all three Segre products vanish and the
/// condition holds.
pub fn reduce_segre_condition(p: &ECPoint<TowerElem>, q: &ECPoint<TowerElem>) -> bool {
    match (p, q) {
        (ECPoint::Affine(xp, _), ECPoint::Affine(xq, _)) => {
            let one = TowerElem::one(xp.tower());
            xp.sub(xq).sub(&one).is_zero()
        }
        _ => true,
    }
}

// ============================================================================
// Sum witnesses
// ============================================================================

/// Explicit points claimed to sum to a target, with per-factor membership
/// conditions. All points must live on one shared tower so that a single
/// specialization is consistent across the whole certificate.
pub struct SumWitness {
    pub factors: Vec<PolySystem>,
    pub points: Vec<GroupPoint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum WitnessVerdict {
    Verified { error_bound: f64 },
    /// 1-based index of the failing factor.
    FactorFailed { index: usize },
    SumMismatch,
}

impl WitnessVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, WitnessVerdict::Verified { .. })
    }
}

/// Verify each witness point against its factor conditions and the group
/// identity `Σ w_i = target`.
pub fn check_sum_witness(
    group: &AmbientGroup,
    witness: &SumWitness,
    target: &GroupPoint,
    mode: &Mode,
) -> Result<WitnessVerdict, VarietyError> {
    assert_eq!(witness.factors.len(), witness.points.len());
    for p in witness.points.iter() {
        if !Arc::ptr_eq(p.tower(), target.tower()) {
            return Err(VarietyError::BlockMismatch(
                "witness points must share the target's tower".into(),
            ));
        }
    }
    match mode {
        Mode::Exact => {
            for (i, (sys, point)) in witness.factors.iter().zip(&witness.points).enumerate() {
                if !sys.contains(group, point, mode)?.holds() {
                    return Ok(WitnessVerdict::FactorFailed { index: i + 1 });
                }
            }
            let mut sum = GroupPoint::identity(group, target.tower());
            for p in &witness.points {
                sum = sum.add(group, p).map_err(|e| VarietyError::Eval(e.to_string()))?;
            }
            if sum.eq_exact(target) {
                Ok(WitnessVerdict::Verified { error_bound: 0.0 })
            } else {
                Ok(WitnessVerdict::SumMismatch)
            }
        }
        Mode::MonteCarlo { samples, field_degree, seed } => {
            let target_field =
                Fq::new(target.tower().field().p(), *field_degree).map_err(|e| VarietyError::Eval(e.to_string()))?;
            use rand::SeedableRng;
            let mut rng = rand::rngs::StdRng::seed_from_u64(*seed);
            // degree bound across all points and equations
            let mut per_bound = 0.0f64;
            for (sys, point) in witness.factors.iter().zip(&witness.points) {
                per_bound += sys.per_specialization_bound(point, &target_field);
            }
            per_bound += {
                let d = point_degree_bound(target);
                8.0 * big_to_f64(&d) / big_to_f64(target_field.order())
            };
            let per_bound = per_bound.min(1.0);
            let mut bound = 1.0f64;
            let mut done = 0;
            let mut attempts = 0;
            while done < *samples {
                attempts += 1;
                if attempts > 100 * samples + 100 {
                    return Err(VarietyError::NoGoodSpecialization);
                }
                let sp = Specialization::random(&target_field, target.tower().field(), &mut rng);
                // one shared set of root images for every point
                let spec_points: Result<Vec<SpecPoint>, SpecError> = witness
                    .points
                    .iter()
                    .map(|p| crate::ambient::specialize_point(p, &sp).map(|(q, _)| q))
                    .collect();
                let spec_points = match spec_points {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                let spec_target = match crate::ambient::specialize_point(target, &sp) {
                    Ok((q, _)) => q,
                    Err(_) => continue,
                };
                // factor conditions
                let mut failed = None;
                let mut degenerate = false;
                for (i, (sys, point)) in witness.factors.iter().zip(&spec_points).enumerate() {
                    let values = match sys.eval_specialized(point) {
                        Ok(v) => v,
                        Err(_) => {
                            degenerate = true;
                            break;
                        }
                    };
                    if values.iter().any(|v| !v.is_zero()) {
                        failed = Some(i + 1);
                        break;
                    }
                    match sys.eval_nonzero_specialized(point) {
                        Ok(nz) if nz.iter().all(|v| !v.is_zero()) => {}
                        _ => {
                            degenerate = true;
                            break;
                        }
                    }
                }
                if degenerate {
                    continue;
                }
                if let Some(index) = failed {
                    return Ok(WitnessVerdict::FactorFailed { index });
                }
                // group-law sum
                let mut sum = SpecPoint::identity(group, &target_field);
                let mut sum_ok = true;
                for p in &spec_points {
                    match sum.add(group, p) {
                        Ok(s) => sum = s,
                        Err(_) => {
                            sum_ok = false;
                            break;
                        }
                    }
                }
                if !sum_ok {
                    continue;
                }
                if sum != spec_target {
                    return Ok(WitnessVerdict::SumMismatch);
                }
                bound *= per_bound;
                done += 1;
            }
            Ok(WitnessVerdict::Verified { error_bound: bound })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::Component;
    use num_bigint::BigInt;

    fn f25() -> Fq {
        Fq::new(5, 2).unwrap()
    }

    fn torus_setup() -> (AmbientGroup, GroupPoint, PolySystem) {
        let f = f25();
        let group = AmbientGroup::new(f.clone(), vec![Component::Torus { dim: 3 }]);
        let tower = SqrtTower::trivial(&f);
        let mut consts = BTreeMap::new();
        consts.insert("a".to_string(), f.multiplicative_generator());
        let rf = |s: &str| crate::textexpr::parse_ratfunc_with(&f, &consts, s).unwrap();
        let point = GroupPoint::new(
            &group,
            tower.clone(),
            vec![Coords::Torus(vec![
                TowerElem::from_base(&tower, rf("t + a")),
                TowerElem::from_base(&tower, rf("t - a")),
                TowerElem::from_base(&tower, rf("t")),
            ])],
        )
        .unwrap();
        (group, point, torus_hyperplane_system(&f))
    }

    #[test]
    fn torus_membership_examples() {
        let (group, g, sys) = torus_setup();
        // 2·g is a member, 3·g is not
        let g2 = g.mul(&group, &BigInt::from(2)).unwrap();
        let g3 = g.mul(&group, &BigInt::from(3)).unwrap();
        assert_eq!(sys.contains(&group, &g2, &Mode::Exact).unwrap(), Verdict::Member);
        assert_eq!(sys.contains(&group, &g3, &Mode::Exact).unwrap(), Verdict::NonMember);
        // Monte Carlo agrees (coefficients in F_25 need an even target degree)
        let mc = Mode::MonteCarlo { samples: 3, field_degree: 6, seed: 42 };
        match sys.contains(&group, &g2, &mc).unwrap() {
            Verdict::ProbableMember { error_bound } => assert!(error_bound < 1e-6),
            v => panic!("expected probable member, got {:?}", v),
        }
        assert_eq!(sys.contains(&group, &g3, &mc).unwrap(), Verdict::NonMember);
    }

    fn e36_setup() -> (AmbientGroup, GroupPoint, PolySystem) {
        let f5 = Fq::new(5, 1).unwrap();
        let e = crate::curve::EllipticCurve::new(5, 0, 1).unwrap();
        let group = AmbientGroup::new(
            f5.clone(),
            vec![Component::Curve(e.clone()), Component::Curve(e)],
        );
        let rf = |s: &str| crate::textexpr::parse_ratfunc_with(&f5, &BTreeMap::new(), s).unwrap();
        let tower = SqrtTower::new(
            &f5,
            vec![
                ("s1".to_string(), rf("(t+1)^3 + 1")),
                ("s2".to_string(), rf("t^3 + 1")),
            ],
        );
        let q1 = ECPoint::Affine(
            TowerElem::from_base(&tower, rf("t + 1")),
            TowerElem::root(&tower, 0),
        );
        let q2 = ECPoint::Affine(
            TowerElem::from_base(&tower, rf("t")),
            TowerElem::root(&tower, 1),
        );
        let point = GroupPoint::new(&group, tower, vec![Coords::Curve(q1), Coords::Curve(q2)]).unwrap();
        (group, point, segre_hyperplane_system(&f5))
    }

    #[test]
    fn segre_membership_at_small_multiples() {
        let (group, g, sys) = e36_setup();
        // n = 1: x(Q1) = x(Q2) + 1 holds (t+1 = t+1)
        assert_eq!(sys.contains(&group, &g, &Mode::Exact).unwrap(), Verdict::Member);
        // n = 0: both components are O; the chart makes it a member
        let g0 = g.mul(&group, &BigInt::from(0)).unwrap();
        assert_eq!(sys.contains(&group, &g0, &Mode::Exact).unwrap(), Verdict::Member);
        // n = 2 is not in the set
        let g2 = g.mul(&group, &BigInt::from(2)).unwrap();
        assert_eq!(sys.contains(&group, &g2, &Mode::Exact).unwrap(), Verdict::NonMember);
        // n = 5 is: x-coordinates are 25th powers
        let g5 = g.mul(&group, &BigInt::from(5)).unwrap();
        assert_eq!(sys.contains(&group, &g5, &Mode::Exact).unwrap(), Verdict::Member);
    }

    #[test]
    fn segre_reduction_matches_full_chart() {
        let (group, g, sys) = e36_setup();
        for n in 0..=6i64 {
            let gn = g.mul(&group, &BigInt::from(n)).unwrap();
            let reduced = match (&gn.coords()[0], &gn.coords()[1]) {
                (Coords::Curve(p), Coords::Curve(q)) => reduce_segre_condition(p, q),
                _ => unreachable!(),
            };
            let full = sys.contains(&group, &gn, &Mode::Exact).unwrap() == Verdict::Member;
            assert_eq!(reduced, full, "mismatch at n = {}", n);
        }
    }

    #[test]
    fn projective_rescaling_invariance() {
        // evaluating the Segre equation on λ-scaled representatives scales
        // the value by λ^1 per block and never changes its vanishing
        use crate::textexpr::eval;
        let f = Fq::new(5, 3).unwrap();
        let (_, _, sys) = e36_setup();
        let eq = &sys.equations()[0];
        let mut rng = crate::testrng(47);
        for _ in 0..50 {
            let mut bindings = BTreeMap::new();
            for name in ["x0", "x1", "x2", "y0", "y1", "y2"] {
                bindings.insert(name.to_string(), f.random(&mut rng));
            }
            let ring = |b: &BTreeMap<String, crate::field::FqElem>| SpecRingForTest {
                field: f.clone(),
                bindings: b.clone(),
            };
            let base = eval(eq, &ring(&bindings)).unwrap();
            // scale each block by an independent nonzero λ
            let mut l1 = f.zero();
            while l1.is_zero() {
                l1 = f.random(&mut rng);
            }
            let mut l2 = f.zero();
            while l2.is_zero() {
                l2 = f.random(&mut rng);
            }
            let mut scaled = BTreeMap::new();
            for (k, v) in &bindings {
                let lam = if k.starts_with('x') { &l1 } else { &l2 };
                scaled.insert(k.clone(), v.mul(lam));
            }
            let rescaled = eval(eq, &ring(&scaled)).unwrap();
            assert_eq!(rescaled, base.mul(&l1).mul(&l2), "not bihomogeneous of degree (1,1)");
            assert_eq!(rescaled.is_zero(), base.is_zero());
        }
    }

    struct SpecRingForTest {
        field: Fq,
        bindings: BTreeMap<String, crate::field::FqElem>,
    }

    impl crate::textexpr::ExprRing for SpecRingForTest {
        type Val = crate::field::FqElem;

        fn from_int(&self, n: &BigInt) -> Self::Val {
            use num_integer::Integer;
            use num_traits::ToPrimitive;
            let red = n.mod_floor(&BigInt::from(self.field.p())).to_u64().unwrap();
            self.field.from_u64(red)
        }

        fn var(&self, name: &str) -> Result<Self::Val, String> {
            self.bindings.get(name).cloned().ok_or_else(|| format!("unbound {}", name))
        }

        fn add(&self, a: &Self::Val, b: &Self::Val) -> Self::Val {
            a.add(b)
        }

        fn sub(&self, a: &Self::Val, b: &Self::Val) -> Self::Val {
            a.sub(b)
        }

        fn mul(&self, a: &Self::Val, b: &Self::Val) -> Self::Val {
            a.mul(b)
        }

        fn div(&self, a: &Self::Val, b: &Self::Val) -> Result<Self::Val, String> {
            a.div(b).map_err(|e| e.to_string())
        }

        fn pow(&self, a: &Self::Val, e: &num_bigint::BigUint) -> Self::Val {
            a.pow_big(e)
        }
    }

    #[test]
    fn exact_and_monte_carlo_agree_on_random_multiples() {
        let (group, g, sys) = torus_setup();
        let mc = Mode::MonteCarlo { samples: 3, field_degree: 8, seed: 71 };
        let mut rng = crate::testrng(53);
        use rand::Rng;
        for _ in 0..25 {
            let n = rng.gen_range(0..80i64);
            let gn = g.mul(&group, &BigInt::from(n)).unwrap();
            let exact = sys.contains(&group, &gn, &Mode::Exact).unwrap() == Verdict::Member;
            let sampled = sys.contains(&group, &gn, &mc).unwrap().holds();
            assert_eq!(exact, sampled, "disagreement at n = {}", n);
        }
    }

    #[test]
    fn undeclared_coordinate_rejected() {
        let f = f25();
        let bad = PolySystem::new(
            &f,
            BTreeMap::new(),
            vec![CoordBlock::Torus(vec!["x".into()])],
            vec![PolySystem::parse_equation("x + w").unwrap()],
            vec![],
        );
        assert!(matches!(bad, Err(VarietyError::UndeclaredCoordinate(_))));
    }
}
