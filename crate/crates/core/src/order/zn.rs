use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A left order on Zⁿ with integer-exact comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case")]
pub enum ZnOrder {
    /// Lexicographic: coordinates are inspected in `priority` order and the
    /// first nonzero one decides; `flips[i]` reverses coordinate i.
    /// Empty `priority` means 0, 1, …, n−1; empty `flips` means no flips.
    LexZn {
        #[serde(default)]
        priority: Vec<usize>,
        #[serde(default)]
        flips: Vec<bool>,
    },
    /// Positive iff f(v) > 0, or f(v) = 0 and v is positive in the standard
    /// lexicographic order.
    FunctionalLexZn { functional: Vec<i64> },
}

impl ZnOrder {
    pub fn lex(rank: usize) -> Self {
        ZnOrder::LexZn {
            priority: (0..rank).collect(),
            flips: vec![false; rank],
        }
    }

    /// Fills defaults and checks the parameters against the rank.
    pub fn normalized(&self, rank: usize) -> Result<ZnOrder> {
        match self {
            ZnOrder::LexZn { priority, flips } => {
                let priority = if priority.is_empty() {
                    (0..rank).collect()
                } else {
                    priority.clone()
                };
                let flips = if flips.is_empty() { vec![false; rank] } else { flips.clone() };
                let mut sorted = priority.clone();
                sorted.sort_unstable();
                if sorted != (0..rank).collect::<Vec<_>>() {
                    return Err(Error::InvalidParameter(format!(
                        "lex priority {priority:?} is not a permutation of 0..{rank}"
                    )));
                }
                if flips.len() != rank {
                    return Err(Error::InvalidParameter(format!(
                        "expected {rank} sign flips, got {}",
                        flips.len()
                    )));
                }
                Ok(ZnOrder::LexZn { priority, flips })
            }
            ZnOrder::FunctionalLexZn { functional } => {
                if functional.len() != rank {
                    return Err(Error::InvalidParameter(format!(
                        "functional has {} entries, rank is {rank}",
                        functional.len()
                    )));
                }
                if functional.iter().all(|&x| x == 0) {
                    return Err(Error::ZeroFunctional);
                }
                Ok(self.clone())
            }
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            ZnOrder::LexZn { priority, .. } => priority.len(),
            ZnOrder::FunctionalLexZn { functional } => functional.len(),
        }
    }

    /// Positivity of a vector; the order must be normalized.
    pub fn positive(&self, v: &[BigInt]) -> bool {
        match self {
            ZnOrder::LexZn { priority, flips } => priority
                .iter()
                .find(|&&p| !v[p].is_zero())
                .is_some_and(|&p| v[p].is_positive() != flips[p]),
            ZnOrder::FunctionalLexZn { functional } => {
                let value: BigInt = functional.iter().zip(v).map(|(f, x)| BigInt::from(*f) * x).sum();
                if value.is_zero() {
                    v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_positive)
                } else {
                    value.is_positive()
                }
            }
        }
    }

    /// An integer functional f with f(v) > 0 ⇒ v positive.
    pub fn dominant_functional(&self) -> Vec<i64> {
        match self {
            ZnOrder::LexZn { priority, flips } => {
                let mut f = vec![0; priority.len()];
                let p = priority[0];
                f[p] = if flips[p] { -1 } else { 1 };
                f
            }
            ZnOrder::FunctionalLexZn { functional } => functional.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lex_with_priority_and_flip() {
        let o = ZnOrder::LexZn {
            priority: vec![1, 0],
            flips: vec![false, true],
        }
        .normalized(2)
        .unwrap();
        assert!(!o.positive(&v(&[5, 1])));
        assert!(o.positive(&v(&[5, -1])));
        assert!(o.positive(&v(&[1, 0])));
        assert_eq!(o.dominant_functional(), vec![0, -1]);
    }

    #[test]
    fn functional_tie_break_on_kernel() {
        let o = ZnOrder::FunctionalLexZn { functional: vec![1, 0] };
        assert!(o.positive(&v(&[0, 5])));
        assert!(!o.positive(&v(&[0, -5])));
        assert!(!o.positive(&v(&[-1, 100])));
        let o = ZnOrder::FunctionalLexZn { functional: vec![2, 3] };
        assert!(o.positive(&v(&[3, -2])));
        assert!(!o.positive(&v(&[-3, 2])));
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(
            ZnOrder::FunctionalLexZn { functional: vec![0, 0] }.normalized(2),
            Err(Error::ZeroFunctional)
        );
        assert!(ZnOrder::LexZn {
            priority: vec![0, 0],
            flips: vec![]
        }
        .normalized(2)
        .is_err());
    }
}
