//! Concrete finitely generated groups with canonical normal forms.
//!
//! Each backend stores elements in a form that is unique per element, so
//! equality of [`GroupElement`] values is equality in the group. Words are
//! sequences of signed, 1-based generator indices: `2` is the second
//! generator and `-2` its inverse.

mod ball;
mod decode;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{bigint_json, IntMatrix};

pub use ball::Ball;

/// Default upper bound on the number of elements in a ball.
pub const DEFAULT_BALL_CAP: usize = 200_000;

/// Signed 1-based generator index.
pub type Letter = i32;

/// The group presentations this crate can compute in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    FreeGroup {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
    FiniteCyclic {
        modulus: u64,
    },
    /// ⟨a, b | b a b⁻¹ = a⁻¹⟩ with normal form aᵐbⁿ.
    KleinBottle,
    /// Subgroup of GL(n, Z) generated by the given matrices.
    MatrixGroup {
        generators: Vec<IntMatrix>,
    },
    /// F ⋉ Zⁿ where F is generated by the given matrices acting on Zⁿ.
    /// Generators are the matrices followed by the standard basis of Zⁿ.
    Semidirect {
        generators: Vec<IntMatrix>,
    },
    /// Permutations of {0, …, degree−1}, composed left to right.
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

impl GroupSpec {
    /// Sanov's free subgroup ⟨[[1,2],[0,1]], [[1,0],[2,1]]⟩ of SL(2, Z).
    pub fn sanov_generators() -> Vec<IntMatrix> {
        vec![
            IntMatrix::from_i64(&[[1, 2], [0, 1]]),
            IntMatrix::from_i64(&[[1, 0], [2, 1]]),
        ]
    }

    /// The semidirect product of Sanov's free group with Z².
    pub fn sanov_semidirect() -> Self {
        GroupSpec::Semidirect {
            generators: Self::sanov_generators(),
        }
    }

    /// The quaternion group Q₈ in its left regular representation on 8 points,
    /// generated by i and j.
    pub fn quaternion() -> Self {
        // Elements indexed as 1, i, j, k, -1, -i, -j, -k.
        fn mul(x: usize, y: usize) -> usize {
            let (sx, bx) = (x / 4, x % 4);
            let (sy, by) = (y / 4, y % 4);
            // unit table for 1, i, j, k: (sign flip, unit)
            const TABLE: [[(usize, usize); 4]; 4] = [
                [(0, 0), (0, 1), (0, 2), (0, 3)],
                [(0, 1), (1, 0), (0, 3), (1, 2)],
                [(0, 2), (1, 3), (1, 0), (0, 1)],
                [(0, 3), (0, 2), (1, 1), (1, 0)],
            ];
            let (s, b) = TABLE[bx][by];
            ((sx + sy + s) % 2) * 4 + b
        }
        let left = |g: usize| -> Vec<u32> { (0..8).map(|x| mul(g, x) as u32).collect() };
        GroupSpec::Permutation {
            degree: 8,
            generators: vec![left(1), left(2)],
        }
    }

    pub fn backend(&self) -> &'static str {
        match self {
            GroupSpec::FreeGroup { .. } => "free group",
            GroupSpec::FreeAbelian { .. } => "free abelian",
            GroupSpec::FiniteCyclic { .. } => "finite cyclic",
            GroupSpec::KleinBottle => "Klein bottle",
            GroupSpec::MatrixGroup { .. } => "matrix",
            GroupSpec::Semidirect { .. } => "semidirect",
            GroupSpec::Permutation { .. } => "permutation",
        }
    }
}

/// A group element in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupElement {
    /// Freely reduced word.
    Word(Vec<Letter>),
    Vector(Vec<i64>),
    Residue(u64),
    /// aᵐbⁿ in the Klein bottle group.
    Klein { a: i64, b: i64 },
    Matrix(IntMatrix),
    /// (M, v) in F ⋉ Zⁿ.
    Affine {
        matrix: IntMatrix,
        #[serde(
            serialize_with = "bigint_json::serialize_vec",
            deserialize_with = "bigint_json::deserialize_vec"
        )]
        vector: Vec<BigInt>,
    },
    Perm(Vec<u32>),
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(xs: &[T]) -> String {
            xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            GroupElement::Word(w) if w.is_empty() => write!(f, "e"),
            GroupElement::Word(w) => {
                let parts: Vec<String> = w
                    .iter()
                    .map(|&l| {
                        let name = letter_name(l.unsigned_abs() as usize - 1);
                        if l > 0 {
                            name
                        } else {
                            format!("{name}^-1")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" "))
            }
            GroupElement::Vector(v) => write!(f, "({})", join(v)),
            GroupElement::Residue(r) => write!(f, "a^{r}"),
            GroupElement::Klein { a, b } => write!(f, "a^{a} b^{b}"),
            GroupElement::Matrix(m) => write!(f, "{m}"),
            GroupElement::Affine { matrix, vector } => write!(f, "({matrix}, ({}))", join(vector)),
            GroupElement::Perm(p) => write!(f, "[{}]", join(p)),
        }
    }
}

fn letter_name(i: usize) -> String {
    const NAMES: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if i < NAMES.len() {
        (NAMES[i] as char).to_string()
    } else {
        format!("g{}", i + 1)
    }
}

pub(crate) fn free_reduce_push(word: &mut Vec<Letter>, l: Letter) {
    if word.last() == Some(&-l) {
        word.pop();
    } else {
        word.push(l);
    }
}

struct Inner {
    spec: GroupSpec,
    generators: Vec<GroupElement>,
    inverse_generators: Vec<GroupElement>,
    identity: GroupElement,
    ball_cap: usize,
}

/// A concrete group: a validated [`GroupSpec`] with its generators.
///
/// Cheap to clone; all clones share the same immutable data.
#[derive(Clone)]
pub struct Group(Arc<Inner>);

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Group").field(&self.0.spec).finish()
    }
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        Self::with_ball_cap(spec, DEFAULT_BALL_CAP)
    }

    pub fn with_ball_cap(spec: GroupSpec, ball_cap: usize) -> Result<Self> {
        let (identity, generators) = match &spec {
            GroupSpec::FreeGroup { rank } => {
                if *rank == 0 {
                    return Err(Error::InvalidGroup("free group of rank 0".into()));
                }
                let gens = (1..=*rank as Letter).map(|i| GroupElement::Word(vec![i])).collect();
                (GroupElement::Word(vec![]), gens)
            }
            GroupSpec::FreeAbelian { rank } => {
                if *rank == 0 {
                    return Err(Error::InvalidGroup("free abelian group of rank 0".into()));
                }
                let gens = (0..*rank)
                    .map(|i| {
                        let mut v = vec![0; *rank];
                        v[i] = 1;
                        GroupElement::Vector(v)
                    })
                    .collect();
                (GroupElement::Vector(vec![0; *rank]), gens)
            }
            GroupSpec::FiniteCyclic { modulus } => {
                if *modulus == 0 {
                    return Err(Error::InvalidGroup("modulus must be positive".into()));
                }
                let gen = GroupElement::Residue(1 % modulus);
                (GroupElement::Residue(0), vec![gen])
            }
            GroupSpec::KleinBottle => (
                GroupElement::Klein { a: 0, b: 0 },
                vec![GroupElement::Klein { a: 1, b: 0 }, GroupElement::Klein { a: 0, b: 1 }],
            ),
            GroupSpec::MatrixGroup { generators } => {
                let dim = check_matrices(generators)?;
                let gens = generators.iter().cloned().map(GroupElement::Matrix).collect();
                (GroupElement::Matrix(IntMatrix::identity(dim)), gens)
            }
            GroupSpec::Semidirect { generators } => {
                let dim = check_matrices(generators)?;
                let zero = vec![BigInt::zero(); dim];
                let mut gens: Vec<GroupElement> = generators
                    .iter()
                    .map(|m| GroupElement::Affine {
                        matrix: m.clone(),
                        vector: zero.clone(),
                    })
                    .collect();
                for i in 0..dim {
                    let mut v = zero.clone();
                    v[i] = BigInt::one();
                    gens.push(GroupElement::Affine {
                        matrix: IntMatrix::identity(dim),
                        vector: v,
                    });
                }
                (
                    GroupElement::Affine {
                        matrix: IntMatrix::identity(dim),
                        vector: zero,
                    },
                    gens,
                )
            }
            GroupSpec::Permutation { degree, generators } => {
                if generators.is_empty() {
                    return Err(Error::InvalidGroup("no generators".into()));
                }
                for p in generators {
                    let mut seen = vec![false; *degree];
                    if p.len() != *degree {
                        return Err(Error::InvalidGroup(format!(
                            "permutation {p:?} does not have degree {degree}"
                        )));
                    }
                    for &x in p {
                        let x = x as usize;
                        if x >= *degree || seen[x] {
                            return Err(Error::InvalidGroup(format!("{p:?} is not a permutation")));
                        }
                        seen[x] = true;
                    }
                }
                let gens = generators.iter().cloned().map(GroupElement::Perm).collect();
                (GroupElement::Perm((0..*degree as u32).collect()), gens)
            }
        };
        let mut inner = Inner {
            spec,
            generators,
            inverse_generators: vec![],
            identity,
            ball_cap,
        };
        let probe = Group(Arc::new(Inner {
            spec: inner.spec.clone(),
            generators: vec![],
            inverse_generators: vec![],
            identity: inner.identity.clone(),
            ball_cap,
        }));
        inner.inverse_generators = inner.generators.iter().map(|g| probe.inv(g)).collect();
        Ok(Group(Arc::new(inner)))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.0.spec
    }

    pub fn ball_cap(&self) -> usize {
        self.0.ball_cap
    }

    /// Same group with a different ball cap.
    pub fn with_cap(&self, cap: usize) -> Group {
        Group(Arc::new(Inner {
            spec: self.0.spec.clone(),
            generators: self.0.generators.clone(),
            inverse_generators: self.0.inverse_generators.clone(),
            identity: self.0.identity.clone(),
            ball_cap: cap,
        }))
    }

    pub fn generator_count(&self) -> usize {
        self.0.generators.len()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.0.generators
    }

    pub fn identity(&self) -> GroupElement {
        self.0.identity.clone()
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.0.identity
    }

    /// The element named by a signed 1-based generator index.
    pub fn letter(&self, l: Letter) -> Result<&GroupElement> {
        let count = self.generator_count();
        let i = l.unsigned_abs() as usize;
        if l == 0 || i > count {
            return Err(Error::UnknownGenerator { index: l, count });
        }
        Ok(if l > 0 {
            &self.0.generators[i - 1]
        } else {
            &self.0.inverse_generators[i - 1]
        })
    }

    /// Symmetric generating set in the order g₁, g₁⁻¹, g₂, g₂⁻¹, …
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        self.0
            .generators
            .iter()
            .zip(&self.0.inverse_generators)
            .flat_map(|(g, h)| [g.clone(), h.clone()])
            .collect()
    }

    pub fn evaluate_word(&self, word: &[Letter]) -> Result<GroupElement> {
        let mut acc = self.identity();
        for &l in word {
            let g = self.letter(l)?;
            acc = self.mul(&acc, g);
        }
        Ok(acc)
    }

    /// Checks that `g` has the shape of an element of this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let ok = match (&self.0.spec, g) {
            (GroupSpec::FreeGroup { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupSpec::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            (GroupSpec::FiniteCyclic { modulus }, GroupElement::Residue(r)) => r < modulus,
            (GroupSpec::KleinBottle, GroupElement::Klein { .. }) => true,
            (GroupSpec::MatrixGroup { .. }, GroupElement::Matrix(m)) => {
                Some(m.rows()) == self.dimension() && m.is_square()
            }
            (GroupSpec::Semidirect { .. }, GroupElement::Affine { matrix, vector }) => {
                Some(matrix.rows()) == self.dimension()
                    && matrix.is_square()
                    && vector.len() == matrix.rows()
            }
            (GroupSpec::Permutation { degree, .. }, GroupElement::Perm(p)) => p.len() == *degree,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                backend: self.0.spec.backend(),
                element: g.to_string(),
            })
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    /// Product of two elements already known to belong to this group.
    ///
    /// Panics if the element shapes do not match the backend.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (&self.0.spec, a, b) {
            (GroupSpec::FreeGroup { .. }, Word(x), Word(y)) => {
                let mut w = x.clone();
                for &l in y {
                    free_reduce_push(&mut w, l);
                }
                Word(w)
            }
            (GroupSpec::FreeAbelian { .. }, Vector(x), Vector(y)) => {
                Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupSpec::FiniteCyclic { modulus }, Residue(x), Residue(y)) => {
                Residue(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            (GroupSpec::KleinBottle, Klein { a: m, b: n }, Klein { a: p, b: q }) => {
                let p = if n.rem_euclid(2) == 0 { *p } else { -*p };
                Klein { a: m + p, b: n + q }
            }
            (GroupSpec::MatrixGroup { .. }, Matrix(x), Matrix(y)) => Matrix(x.mul(y)),
            (
                GroupSpec::Semidirect { .. },
                Affine { matrix: m1, vector: v1 },
                Affine { matrix: m2, vector: v2 },
            ) => {
                let shifted = m1.mul_vec(v2);
                Affine {
                    matrix: m1.mul(m2),
                    vector: v1.iter().zip(shifted).map(|(x, y)| x + y).collect(),
                }
            }
            (GroupSpec::Permutation { .. }, Perm(p), Perm(q)) => {
                Perm(p.iter().map(|&i| q[i as usize]).collect())
            }
            _ => panic!("element shapes {a} and {b} do not match the {} backend", self.0.spec.backend()),
        }
    }

    /// Inverse of an element already known to belong to this group.
    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (&self.0.spec, a) {
            (GroupSpec::FreeGroup { .. }, Word(w)) => Word(w.iter().rev().map(|l| -l).collect()),
            (GroupSpec::FreeAbelian { .. }, Vector(v)) => Vector(v.iter().map(|x| -x).collect()),
            (GroupSpec::FiniteCyclic { modulus }, Residue(r)) => Residue((modulus - r) % modulus),
            (GroupSpec::KleinBottle, Klein { a: m, b: n }) => {
                let m = if n.rem_euclid(2) == 0 { -m } else { *m };
                Klein { a: m, b: -n }
            }
            (GroupSpec::MatrixGroup { .. }, Matrix(m)) => {
                Matrix(m.inverse_unimodular().expect("group matrices are unimodular"))
            }
            (GroupSpec::Semidirect { .. }, Affine { matrix, vector }) => {
                let mi = matrix.inverse_unimodular().expect("group matrices are unimodular");
                let w = mi.mul_vec(vector);
                Affine {
                    matrix: mi,
                    vector: w.into_iter().map(|x| -x).collect(),
                }
            }
            (GroupSpec::Permutation { .. }, Perm(p)) => {
                let mut out = vec![0u32; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    out[x as usize] = i as u32;
                }
                Perm(out)
            }
            _ => panic!("element {a} does not match the {} backend", self.0.spec.backend()),
        }
    }

    /// gⁿ for any integer n, by repeated squaring.
    pub fn pow(&self, g: &GroupElement, n: i64) -> GroupElement {
        let mut base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// g h g⁻¹
    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.mul(&self.mul(g, h), &self.inv(g))
    }

    /// g h g⁻¹ h⁻¹
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.mul(&self.mul(g, h), &self.mul(&self.inv(g), &self.inv(h)))
    }

    /// Matrix dimension for the matrix and semidirect backends.
    pub fn dimension(&self) -> Option<usize> {
        match &self.0.spec {
            GroupSpec::MatrixGroup { generators } | GroupSpec::Semidirect { generators } => {
                generators.first().map(IntMatrix::rows)
            }
            _ => None,
        }
    }

    /// Rank of the free abelian part that orders on Zⁿ act on: the whole
    /// group for `FreeAbelian`, the fiber for `Semidirect`.
    pub fn fiber_rank(&self) -> Option<usize> {
        match &self.0.spec {
            GroupSpec::FreeAbelian { rank } => Some(*rank),
            GroupSpec::Semidirect { .. } => self.dimension(),
            _ => None,
        }
    }

    /// The element of the Zⁿ part with the given coordinates.
    pub fn fiber_element(&self, v: &[i64]) -> Result<GroupElement> {
        match (&self.0.spec, self.fiber_rank()) {
            (GroupSpec::FreeAbelian { .. }, Some(n)) if n == v.len() => Ok(GroupElement::Vector(v.to_vec())),
            (GroupSpec::Semidirect { .. }, Some(n)) if n == v.len() => Ok(GroupElement::Affine {
                matrix: IntMatrix::identity(n),
                vector: v.iter().map(|&x| BigInt::from(x)).collect(),
            }),
            _ => Err(Error::Unsupported(format!(
                "no Z^{} part in the {} backend",
                v.len(),
                self.0.spec.backend()
            ))),
        }
    }

    /// Coordinates of `g` if it lies in the Zⁿ part.
    pub fn fiber_coordinates(&self, g: &GroupElement) -> Option<Vec<BigInt>> {
        match g {
            GroupElement::Vector(v) => Some(v.iter().map(|&x| BigInt::from(x)).collect()),
            GroupElement::Affine { matrix, vector } if matrix.is_identity() => Some(vector.clone()),
            _ => None,
        }
    }

    /// Number of matrix generators (the rank of F) for matrix-based backends.
    pub fn matrix_generator_count(&self) -> Option<usize> {
        match &self.0.spec {
            GroupSpec::MatrixGroup { generators } | GroupSpec::Semidirect { generators } => {
                Some(generators.len())
            }
            _ => None,
        }
    }

    /// Recovers the reduced word over the matrix generators representing
    /// `m`, assuming the generators satisfy a ping-pong condition in which
    /// exactly one letter shortens a nontrivial matrix at every step (true
    /// for Sanov's generators). The result is verified by re-evaluation.
    pub fn decode_matrix_word(&self, m: &IntMatrix) -> Result<Vec<Letter>> {
        let gens = match &self.0.spec {
            GroupSpec::MatrixGroup { generators } | GroupSpec::Semidirect { generators } => generators,
            _ => {
                return Err(Error::Unsupported(format!(
                    "matrix decoding in the {} backend",
                    self.0.spec.backend()
                )))
            }
        };
        decode::decode(gens, m)
    }

    /// The matrix part of an element of a matrix-based backend.
    pub fn matrix_part<'a>(&self, g: &'a GroupElement) -> Option<&'a IntMatrix> {
        match g {
            GroupElement::Matrix(m) => Some(m),
            GroupElement::Affine { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    pub fn ball(&self, radius: usize) -> Result<Ball> {
        Ball::new(self, radius)
    }
}

fn check_matrices(generators: &[IntMatrix]) -> Result<usize> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidGroup("no generator matrices".into()))?;
    let dim = first.rows();
    for m in generators {
        if !m.is_square() || m.rows() != dim || dim == 0 {
            return Err(Error::InvalidGroup(format!(
                "generator {m} is not a square matrix of dimension {dim}"
            )));
        }
        if m.determinant().abs() != BigInt::one() {
            return Err(Error::InvalidGroup(format!(
                "generator {m} is not invertible over the integers"
            )));
        }
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> Group {
        Group::new(GroupSpec::KleinBottle).unwrap()
    }

    #[test]
    fn free_reduction_cancels() {
        let g = Group::new(GroupSpec::FreeGroup { rank: 2 }).unwrap();
        assert_eq!(g.evaluate_word(&[1, 2, -2]).unwrap(), GroupElement::Word(vec![1]));
        assert_eq!(g.evaluate_word(&[]).unwrap(), g.identity());
    }

    #[test]
    fn klein_relation_rewrites_ba() {
        let g = klein();
        assert_eq!(g.evaluate_word(&[2, 1]).unwrap(), GroupElement::Klein { a: -1, b: 1 });
        // b a b⁻¹ = a⁻¹
        assert_eq!(g.evaluate_word(&[2, 1, -2]).unwrap(), GroupElement::Klein { a: -1, b: 0 });
        assert_eq!(
            g.inverse(&GroupElement::Klein { a: 1, b: 1 }).unwrap(),
            GroupElement::Klein { a: 1, b: -1 }
        );
    }

    #[test]
    fn matrix_word_product() {
        let g = Group::new(GroupSpec::MatrixGroup {
            generators: GroupSpec::sanov_generators(),
        })
        .unwrap();
        assert_eq!(
            g.evaluate_word(&[1, 2]).unwrap(),
            GroupElement::Matrix(IntMatrix::from_i64(&[[5, 2], [2, 1]]))
        );
    }

    #[test]
    fn semidirect_fiber_is_abelian() {
        let g = Group::new(GroupSpec::sanov_semidirect()).unwrap();
        let x = g.fiber_element(&[1, 0]).unwrap();
        let y = g.fiber_element(&[0, 1]).unwrap();
        assert_eq!(g.mul(&x, &y), g.fiber_element(&[1, 1]).unwrap());
        // x and y are generators 3 and 4
        assert_eq!(g.letter(3).unwrap(), &x);
        assert_eq!(g.letter(4).unwrap(), &y);
    }

    #[test]
    fn conjugating_fiber_applies_matrix() {
        let g = Group::new(GroupSpec::sanov_semidirect()).unwrap();
        let t = g.evaluate_word(&[1, 2]).unwrap();
        let v = g.fiber_element(&[1, -3]).unwrap();
        assert_eq!(g.conjugate(&t, &v), g.fiber_element(&[-1, -1]).unwrap());
    }

    #[test]
    fn cyclic_arithmetic() {
        let g = Group::new(GroupSpec::FiniteCyclic { modulus: 5 }).unwrap();
        let prod = g.multiply(&GroupElement::Residue(3), &GroupElement::Residue(4)).unwrap();
        assert_eq!(prod, GroupElement::Residue(2));
        assert_eq!(g.inv(&GroupElement::Residue(0)), GroupElement::Residue(0));
    }

    #[test]
    fn errors_on_bad_input() {
        let g = Group::new(GroupSpec::FreeGroup { rank: 2 }).unwrap();
        assert_eq!(
            g.evaluate_word(&[3]),
            Err(Error::UnknownGenerator { index: 3, count: 2 })
        );
        assert!(matches!(
            g.multiply(&GroupElement::Residue(1), &g.identity()),
            Err(Error::BackendMismatch { .. })
        ));
        let bad = GroupSpec::MatrixGroup {
            generators: vec![IntMatrix::from_i64(&[[2, 0], [0, 1]])],
        };
        assert!(Group::new(bad).is_err());
        let not_perm = GroupSpec::Permutation {
            degree: 3,
            generators: vec![vec![0, 0, 1]],
        };
        assert!(Group::new(not_perm).is_err());
    }

    #[test]
    fn quaternion_relations() {
        let g = Group::new(GroupSpec::quaternion()).unwrap();
        let i = g.letter(1).unwrap().clone();
        let j = g.letter(2).unwrap().clone();
        let minus_one = g.pow(&i, 2);
        assert_ne!(minus_one, g.identity());
        assert_eq!(g.pow(&j, 2), minus_one);
        assert_eq!(g.pow(&i, 4), g.identity());
        // i j i⁻¹ = j⁻¹ in Q₈
        assert_eq!(g.conjugate(&i, &j), g.inv(&j));
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let g = klein();
        let ab = GroupElement::Klein { a: 1, b: 1 };
        let p = g.pow(&ab, -3);
        assert_eq!(g.mul(&p, &g.pow(&ab, 3)), g.identity());
    }
}
