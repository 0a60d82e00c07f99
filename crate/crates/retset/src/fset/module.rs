//! Finitely generated abelian groups `M = ℤ^l ⊕ ⊕_i ℤ/d_i` with an
//! endomorphism annihilated by a monic integer polynomial, and exact
//! arithmetic in quadratic orders for eigenvalue data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FsetError {
    BadSpec(String),
    /// The generator has no free part.
    TorsionPivot,
    /// The window tuple set did not fit a union of good cosets.
    NotCosetShaped { window: u64 },
    Resource(String),
}

impl fmt::Display for FsetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FsetError::BadSpec(s) => write!(f, "{}", s),
            FsetError::TorsionPivot => write!(f, "generator must be non-torsion in the free part"),
            FsetError::NotCosetShaped { window } => {
                write!(f, "index set is not coset-shaped on window [0,{}]^d", window)
            }
            FsetError::Resource(s) => write!(f, "resource limit: {}", s),
        }
    }
}

impl std::error::Error for FsetError {}

/// `M = ℤ^rank ⊕ ℤ/d_1 ⊕ … ⊕ ℤ/d_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgModule {
    rank: usize,
    torsion: Vec<u64>,
}

impl FgModule {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<FgModule, FsetError> {
        if torsion.iter().any(|&d| d < 2) {
            return Err(FsetError::BadSpec("torsion invariants must be at least 2".into()));
        }
        Ok(FgModule { rank, torsion })
    }

    pub fn free(rank: usize) -> FgModule {
        FgModule { rank, torsion: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn zero(&self) -> ModElem {
        ModElem { free: vec![BigInt::zero(); self.rank], tor: vec![0; self.torsion.len()] }
    }

    pub fn elem(&self, free: Vec<i64>, tor: Vec<i64>) -> ModElem {
        assert_eq!(free.len(), self.rank);
        assert_eq!(tor.len(), self.torsion.len());
        ModElem {
            free: free.into_iter().map(BigInt::from).collect(),
            tor: tor
                .into_iter()
                .zip(&self.torsion)
                .map(|(v, &d)| v.rem_euclid(d as i64) as u64)
                .collect(),
        }
    }

    pub fn add(&self, a: &ModElem, b: &ModElem) -> ModElem {
        ModElem {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            tor: a
                .tor
                .iter()
                .zip(&b.tor)
                .zip(&self.torsion)
                .map(|((x, y), &d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn neg(&self, a: &ModElem) -> ModElem {
        ModElem {
            free: a.free.iter().map(|x| -x).collect(),
            tor: a.tor.iter().zip(&self.torsion).map(|(x, &d)| (d - x) % d).collect(),
        }
    }

    pub fn sub(&self, a: &ModElem, b: &ModElem) -> ModElem {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: &BigInt, a: &ModElem) -> ModElem {
        ModElem {
            free: a.free.iter().map(|x| x * k).collect(),
            tor: a
                .tor
                .iter()
                .zip(&self.torsion)
                .map(|(x, &d)| {
                    let kd = k.mod_floor(&BigInt::from(d));
                    u64::try_from((BigInt::from(*x) * kd).mod_floor(&BigInt::from(d))).unwrap()
                })
                .collect(),
        }
    }
}

/// An element: a free vector in `ℤ^l` and a reduced torsion vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModElem {
    pub free: Vec<BigInt>,
    pub tor: Vec<u64>,
}

impl ModElem {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|x| x.is_zero()) && self.tor.iter().all(|&x| x == 0)
    }

    pub fn is_torsion(&self) -> bool {
        self.free.iter().all(|x| x.is_zero())
    }
}

/// Exact eigenvalue data for the endomorphism's annihilating polynomial.
#[derive(Clone, Debug)]
pub enum EigenData {
    None,
    /// Integer roots (with multiplicity one).
    Integer(Vec<BigInt>),
    /// Roots `a + b·ω` in the order with `ω² = u·ω − v`.
    Quadratic { u: BigInt, v: BigInt, roots: Vec<QuadInt> },
}

/// `a + b·ω` in the quadratic order `ℤ[ω]`, `ω² = u·ω − v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub u: BigInt,
    pub v: BigInt,
}

impl QuadInt {
    pub fn new(a: i64, b: i64, u: i64, v: i64) -> QuadInt {
        QuadInt { a: a.into(), b: b.into(), u: u.into(), v: v.into() }
    }

    fn same_order(&self, o: &QuadInt) {
        assert!(self.u == o.u && self.v == o.v, "mixed quadratic orders");
    }

    pub fn add(&self, o: &QuadInt) -> QuadInt {
        self.same_order(o);
        QuadInt { a: &self.a + &o.a, b: &self.b + &o.b, u: self.u.clone(), v: self.v.clone() }
    }

    pub fn sub(&self, o: &QuadInt) -> QuadInt {
        self.same_order(o);
        QuadInt { a: &self.a - &o.a, b: &self.b - &o.b, u: self.u.clone(), v: self.v.clone() }
    }

    pub fn mul(&self, o: &QuadInt) -> QuadInt {
        self.same_order(o);
        // (a + bω)(c + dω) = ac + (ad + bc)ω + bd·ω², ω² = uω − v
        let ac = &self.a * &o.a;
        let ad_bc = &self.a * &o.b + &self.b * &o.a;
        let bd = &self.b * &o.b;
        QuadInt {
            a: ac - &bd * &self.v,
            b: ad_bc + &bd * &self.u,
            u: self.u.clone(),
            v: self.v.clone(),
        }
    }

    pub fn conj(&self) -> QuadInt {
        // ω̄ = u − ω
        QuadInt {
            a: &self.a + &self.b * &self.u,
            b: -self.b.clone(),
            u: self.u.clone(),
            v: self.v.clone(),
        }
    }

    /// `N(a + bω) = a² + u·a·b + v·b²` (the product with the conjugate).
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.u * &self.a * &self.b + &self.v * &self.b * &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Horner evaluation of a monic integer polynomial (little-endian,
    /// leading 1 included).
    pub fn eval_poly(&self, coeffs: &[BigInt]) -> QuadInt {
        let zero = QuadInt { a: BigInt::zero(), b: BigInt::zero(), u: self.u.clone(), v: self.v.clone() };
        let mut acc = zero;
        for c in coeffs.iter().rev() {
            acc = acc.mul(self);
            acc.a += c;
        }
        acc
    }
}

/// An endomorphism of an `FgModule` together with a monic annihilating
/// polynomial and the Frobenius size `q`.
#[derive(Clone, Debug)]
pub struct FrobeniusSpec {
    module: FgModule,
    /// rank×rank action on the free part.
    free_matrix: Vec<Vec<BigInt>>,
    /// torsion×torsion action (entries reduced; must respect the d_i).
    tor_matrix: Vec<Vec<u64>>,
    /// torsion×rank mixing: the torsion component of the image of a free
    /// generator.
    free_to_tor: Vec<Vec<u64>>,
    /// Monic annihilating polynomial, little-endian with leading 1.
    charpoly: Vec<BigInt>,
    q: u64,
    eigen: EigenData,
}

impl FrobeniusSpec {
    pub fn new(
        module: FgModule,
        free_matrix: Vec<Vec<i64>>,
        tor_matrix: Vec<Vec<i64>>,
        free_to_tor: Vec<Vec<i64>>,
        charpoly: Vec<i64>,
        q: u64,
        eigen: EigenData,
    ) -> Result<FrobeniusSpec, FsetError> {
        let l = module.rank();
        let s = module.torsion().len();
        if free_matrix.len() != l || free_matrix.iter().any(|r| r.len() != l) {
            return Err(FsetError::BadSpec("free action must be rank×rank".into()));
        }
        if tor_matrix.len() != s || tor_matrix.iter().any(|r| r.len() != s) {
            return Err(FsetError::BadSpec("torsion action must be s×s".into()));
        }
        if free_to_tor.len() != s || free_to_tor.iter().any(|r| r.len() != l) {
            return Err(FsetError::BadSpec("free-to-torsion block must be s×rank".into()));
        }
        let charpoly: Vec<BigInt> = charpoly.into_iter().map(BigInt::from).collect();
        match charpoly.last() {
            Some(c) if *c == BigInt::from(1) => {}
            _ => return Err(FsetError::BadSpec("annihilating polynomial must be monic".into())),
        }
        // torsion well-definedness: m_ij·d_j ≡ 0 (mod d_i)
        for (i, row) in tor_matrix.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                let di = module.torsion()[i] as i64;
                let dj = module.torsion()[j] as i64;
                if (m * dj).rem_euclid(di) != 0 {
                    return Err(FsetError::BadSpec(format!(
                        "torsion action entry ({},{}) does not respect the invariants",
                        i, j
                    )));
                }
            }
        }
        let spec = FrobeniusSpec {
            free_matrix: free_matrix
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
            tor_matrix: tor_matrix
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter().map(|&m| m.rem_euclid(module.torsion()[i] as i64) as u64).collect()
                })
                .collect(),
            free_to_tor: free_to_tor
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter().map(|&m| m.rem_euclid(module.torsion()[i] as i64) as u64).collect()
                })
                .collect(),
            module,
            charpoly,
            q,
            eigen,
        };
        spec.verify_annihilation()?;
        spec.verify_eigen_data()?;
        Ok(spec)
    }

    pub fn module(&self) -> &FgModule {
        &self.module
    }

    pub fn charpoly(&self) -> &[BigInt] {
        &self.charpoly
    }

    pub fn degree(&self) -> usize {
        self.charpoly.len() - 1
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn apply(&self, x: &ModElem) -> ModElem {
        let l = self.module.rank();
        let free: Vec<BigInt> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| &self.free_matrix[i][j] * &x.free[j])
                    .fold(BigInt::zero(), |a, b| a + b)
            })
            .collect();
        let tor: Vec<u64> = self
            .module
            .torsion()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut acc = BigInt::zero();
                for (j, &m) in self.tor_matrix[i].iter().enumerate() {
                    acc += BigInt::from(m) * BigInt::from(x.tor[j]);
                }
                for (j, &m) in self.free_to_tor[i].iter().enumerate() {
                    acc += BigInt::from(m) * &x.free[j];
                }
                u64::try_from(acc.mod_floor(&BigInt::from(d))).unwrap()
            })
            .collect();
        ModElem { free, tor }
    }

    pub fn apply_iter(&self, x: &ModElem, n: u64) -> ModElem {
        let mut out = x.clone();
        for _ in 0..n {
            out = self.apply(&out);
        }
        out
    }

    /// `P(Φ)` annihilates random elements.
    fn verify_annihilation(&self) -> Result<(), FsetError> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for _ in 0..8 {
            let x = ModElem {
                free: (0..self.module.rank()).map(|_| BigInt::from(rng.gen_range(-5..=5i64))).collect(),
                tor: self.module.torsion().iter().map(|&d| rng.gen_range(0..d)).collect(),
            };
            // Σ a_k Φ^k(x) must vanish
            let mut acc = self.module.zero();
            let mut power = x.clone();
            for a in &self.charpoly {
                acc = self.module.add(&acc, &self.module.scalar_mul(a, &power));
                power = self.apply(&power);
            }
            if !acc.is_zero() {
                return Err(FsetError::BadSpec(
                    "annihilating polynomial fails on a sample element".into(),
                ));
            }
        }
        Ok(())
    }

    /// Roots must satisfy the polynomial; quadratic roots of the
    /// non-cyclotomic part must have norm `q` (absolute value `√q`).
    fn verify_eigen_data(&self) -> Result<(), FsetError> {
        match &self.eigen {
            EigenData::None => Ok(()),
            EigenData::Integer(roots) => {
                for r in roots {
                    let mut acc = BigInt::zero();
                    for c in self.charpoly.iter().rev() {
                        acc = acc * r + c;
                    }
                    if !acc.is_zero() {
                        return Err(FsetError::BadSpec(format!("{} is not a root", r)));
                    }
                    // |root| ∈ {q, √q}: integers satisfy r = ±q or r² = q
                    let q = BigInt::from(self.q);
                    if r.abs() != q && r * r != q {
                        return Err(FsetError::BadSpec(format!(
                            "integer root {} has absolute value other than q or √q",
                            r
                        )));
                    }
                }
                Ok(())
            }
            EigenData::Quadratic { u: _, v: _, roots } => {
                for r in roots {
                    if !r.eval_poly(&self.charpoly).is_zero() {
                        return Err(FsetError::BadSpec("quadratic root fails the polynomial".into()));
                    }
                    let n = r.norm();
                    let q = BigInt::from(self.q);
                    if n != q && n != &q * &q {
                        return Err(FsetError::BadSpec(format!(
                            "quadratic root has norm {} instead of q or q²",
                            n
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn eigen(&self) -> &EigenData {
        &self.eigen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_arithmetic() {
        let m = FgModule::new(1, vec![3]).unwrap();
        let x = m.elem(vec![2], vec![2]);
        let y = m.elem(vec![5], vec![2]);
        assert_eq!(m.add(&x, &y), m.elem(vec![7], vec![1]));
        assert_eq!(m.scalar_mul(&BigInt::from(-2), &x), m.elem(vec![-4], vec![-4]));
    }

    #[test]
    fn frobenius_apply_examples() {
        // M = ℤ ⊕ ℤ/3, Φ(a, s) = (5a, 2s)
        let m = FgModule::new(1, vec![3]).unwrap();
        let phi = FrobeniusSpec::new(
            m.clone(),
            vec![vec![5]],
            vec![vec![2]],
            vec![vec![0]],
            // (x−5)(x−2) kills both parts: x² − 7x + 10
            vec![10, -7, 1],
            5,
            EigenData::Integer(vec![BigInt::from(5)]),
        )
        .unwrap();
        let x = m.elem(vec![1], vec![1]);
        assert_eq!(phi.apply_iter(&x, 2), m.elem(vec![25], vec![1]));
    }

    #[test]
    fn quadratic_order_arithmetic() {
        // ω² = −5 (u = 0, v = 5): the supersingular F with F² = [−p]
        let w = QuadInt::new(0, 1, 0, 5);
        let w2 = w.mul(&w);
        assert_eq!(w2, QuadInt::new(-5, 0, 0, 5));
        assert_eq!(w.norm(), BigInt::from(5));
        assert_eq!(w.conj(), QuadInt::new(0, -1, 0, 5));
        // ω is a root of x² + 5
        assert!(w.eval_poly(&[BigInt::from(5), BigInt::zero(), BigInt::from(1)]).is_zero());
        // (1 + ω)(1 − ω) = 1 − ω² = 6
        let a = QuadInt::new(1, 1, 0, 5);
        let b = QuadInt::new(1, -1, 0, 5);
        assert_eq!(a.mul(&b), QuadInt::new(6, 0, 0, 5));
    }

    #[test]
    fn annihilation_is_checked() {
        let m = FgModule::free(1);
        let bad = FrobeniusSpec::new(
            m,
            vec![vec![5]],
            vec![],
            vec![],
            vec![-3, 1], // claims Φ = 3
            5,
            EigenData::None,
        );
        assert!(bad.is_err());
    }
}
