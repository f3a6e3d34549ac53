//! Truncated Magnus expansion of free group words.
//!
//! A generator xᵢ maps to 1 + Xᵢ and its inverse to 1 − Xᵢ + Xᵢ² − ⋯ in
//! the ring of noncommuting power series. A nontrivial word is positive
//! when the first nonzero coefficient of its expansion minus 1 is positive,
//! scanning monomials by degree and then lexicographically (X₁ < X₂ < ⋯).
//! This is the Magnus bi-ordering.

use crate::error::{Error, Result};
use crate::group::Letter;
use crate::order::Sign;

/// Upper bound on stored coefficients for a single truncated expansion.
const MAX_TERMS: usize = 1 << 24;

/// Coefficients of a truncated expansion, degree by degree. Degree d holds
/// rank^d entries indexed by the base-`rank` digits of the monomial, most
/// significant digit first, so numeric order is lexicographic order.
#[derive(Clone, Debug)]
pub struct Expansion {
    rank: usize,
    coeffs: Vec<Vec<i128>>,
}

impl Expansion {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, monomial: &[usize]) -> i128 {
        let idx = monomial.iter().fold(0usize, |acc, &v| acc * self.rank + v);
        self.coeffs[monomial.len()][idx]
    }

    /// First nonzero coefficient in degrees 1..=degree, with its degree.
    pub fn leading(&self) -> Option<(usize, i128)> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find_map(|(d, c)| c.iter().find(|x| **x != 0).map(|&x| (d, x)))
    }
}

fn terms(rank: usize, degree: usize) -> Option<usize> {
    let mut total = 0usize;
    let mut level = 1usize;
    for _ in 0..=degree {
        total = total.checked_add(level)?;
        level = level.checked_mul(rank)?;
    }
    Some(total)
}

/// Magnus expansion of `word` truncated at `degree`.
pub fn expand(word: &[Letter], rank: usize, degree: usize) -> Result<Expansion> {
    match terms(rank, degree) {
        Some(t) if t <= MAX_TERMS => {}
        _ => {
            return Err(Error::Unsupported(format!(
                "Magnus expansion of rank {rank} at degree {degree} is too large"
            )))
        }
    }
    let mut coeffs: Vec<Vec<i128>> = (0..=degree).map(|d| vec![0; rank.pow(d as u32)]).collect();
    coeffs[0][0] = 1;
    for &l in word {
        let i = l.unsigned_abs() as usize - 1;
        debug_assert!(i < rank);
        if l > 0 {
            // multiply by (1 + Xᵢ): highest degree first so lower degrees are still old
            for d in (1..=degree).rev() {
                let (lo, hi) = coeffs.split_at_mut(d);
                let (prev, cur) = (&lo[d - 1], &mut hi[0]);
                for (m, &c) in prev.iter().enumerate() {
                    if c != 0 {
                        let slot = &mut cur[m * rank + i];
                        *slot = slot.checked_add(c).ok_or(Error::CoefficientOverflow)?;
                    }
                }
            }
        } else {
            // multiply by (1 + Xᵢ)⁻¹: Q = P − Q·Xᵢ, lowest degree first
            for d in 1..=degree {
                let (lo, hi) = coeffs.split_at_mut(d);
                let (prev, cur) = (&lo[d - 1], &mut hi[0]);
                for (m, &c) in prev.iter().enumerate() {
                    if c != 0 {
                        let slot = &mut cur[m * rank + i];
                        *slot = slot.checked_sub(c).ok_or(Error::CoefficientOverflow)?;
                    }
                }
            }
        }
    }
    Ok(Expansion { rank, coeffs })
}

/// Sign of a reduced word under the Magnus order; `None` for the empty word.
///
/// With `max_degree = None` the truncation grows up to the word length,
/// which always suffices. A fixed degree that does not reach the first
/// nonzero coefficient is an error.
pub fn magnus_sign(word: &[Letter], rank: usize, max_degree: Option<usize>) -> Result<Option<Sign>> {
    if word.is_empty() {
        return Ok(None);
    }
    let len = word.len();
    let limit = max_degree.unwrap_or(len);
    let mut degree = limit.min(2);
    loop {
        let exp = expand(word, rank, degree)?;
        if let Some((_, c)) = exp.leading() {
            return Ok(Some(if c > 0 { Sign::Pos } else { Sign::Neg }));
        }
        if degree >= limit {
            break;
        }
        degree = (degree * 2).min(limit);
    }
    if limit >= len {
        // a nontrivial reduced word has a nonzero coefficient in degree ≤ length
        return Err(Error::OracleDefect(format!(
            "no nonzero Magnus coefficient up to degree {len}; word is not reduced"
        )));
    }
    Err(Error::TruncationTooSmall { degree: limit, length: len })
}
