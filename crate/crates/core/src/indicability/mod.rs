//! Infinite cyclic quotients of finitely presented groups.
//!
//! A finitely presented group surjects onto Z exactly when its
//! abelianization has positive free rank. The abelianization is the
//! cokernel of the relator exponent-sum matrix, read off its Smith normal
//! form; a homomorphism onto Z is an integer vector in the kernel of that
//! matrix.

mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub use snf::{smith_normal_form, SnfResult};

/// ⟨x₁, …, x_k | r₁, …⟩ with relators written as letters ±i for x_i^{±1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct Presentation {
    generators: usize,
    relators: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    generators: usize,
    #[serde(default)]
    relators: Vec<Vec<i64>>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = Error;

    fn try_from(r: RawPresentation) -> Result<Self> {
        Presentation::new(r.generators, r.relators)
    }
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Vec<i64>>) -> Result<Self> {
        for (k, r) in relators.iter().enumerate() {
            if let Some(&l) = r.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > generators) {
                return Err(Error::InvalidPresentation(format!(
                    "relator {k} uses letter {l} but there are {generators} generators"
                )));
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn free(generators: usize) -> Self {
        Presentation {
            generators,
            relators: Vec::new(),
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Vec<i64>] {
        &self.relators
    }

    /// Rows are relators, columns generators.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.generators);
        for (i, r) in self.relators.iter().enumerate() {
            for &l in r {
                let j = l.unsigned_abs() as usize - 1;
                let e = m.get(i, j) + l.signum();
                m.set(i, j, e);
            }
        }
        m
    }
}

pub fn abelianization(p: &Presentation) -> SnfResult {
    smith_normal_form(&p.exponent_matrix())
}

pub fn has_infinite_cyclic_quotient(p: &Presentation) -> bool {
    abelianization(p).free_rank >= 1
}

/// Images in Z of the generators under a homomorphism with infinite image,
/// primitive with first nonzero entry positive, or `None` when the
/// abelianization is finite.
pub fn z_quotient_witness(p: &Presentation) -> Option<Vec<BigInt>> {
    let s = abelianization(p);
    if s.free_rank == 0 {
        return None;
    }
    // M·V·e_j = U⁻¹·D·e_j = 0 for every column j past the rank.
    let j = s.matrix_rank;
    let mut phi: Vec<BigInt> = (0..p.generators).map(|i| s.v.get(i, j).clone()).collect();
    let g = phi.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    for x in phi.iter_mut() {
        *x = &*x / &g;
    }
    if phi.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in phi.iter_mut() {
            *x = -&*x;
        }
    }
    let m = p.exponent_matrix();
    let image = m.mul_vec(&phi);
    assert!(
        image.iter().all(Zero::is_zero) && phi.iter().any(|x| !x.is_zero()),
        "witness {phi:?} does not annihilate the relators"
    );
    Some(phi)
}

/// Witness entries as machine integers, when they fit.
pub fn witness_i64(w: &[BigInt]) -> Option<Vec<i64>> {
    w.iter().map(ToPrimitive::to_i64).collect()
}
