//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::matrix::{bigint_json, IntMatrix};

/// U·M·V = D with U, V unimodular and D diagonal, d₁ | d₂ | ….
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    /// Nonzero diagonal entries of D, all positive.
    #[serde(with = "bigint_json::vec")]
    pub invariants: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diagonal: IntMatrix,
    /// Number of nonzero invariants.
    pub matrix_rank: usize,
    /// Rank of the cokernel Zᶜᵒˡˢ / (row space), i.e. of the abelianization
    /// when M holds relator exponent sums.
    pub free_rank: usize,
    /// Invariants greater than 1.
    #[serde(with = "bigint_json::vec")]
    pub torsion: Vec<BigInt>,
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &-&q);
                    u.add_row_multiple(i, t, &-&q);
                }
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-&q);
                }
                dirty |= !a.get(t, j).is_zero();
            }
            if !dirty {
                // row and column cleared; enforce divisibility on the rest
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_multiple_of(&p));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        a.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                        continue;
                    }
                }
            }
            let (pi, pj) = smallest_nonzero(&a, t).expect("a remainder is nonzero");
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariants: Vec<BigInt> = (0..t).map(|i| a.get(i, i).clone()).collect();
    let result = SnfResult {
        matrix_rank: t,
        free_rank: cols - t,
        torsion: invariants.iter().filter(|d| !d.is_one()).cloned().collect(),
        invariants,
        u,
        v,
        diagonal: a,
    };
    if let Err(e) = check(m, &result) {
        panic!("Smith normal form self-check failed on {m}: {e}");
    }
    result
}

fn check(m: &IntMatrix, s: &SnfResult) -> Result<(), String> {
    if s.u.mul(m).mul(&s.v) != s.diagonal {
        return Err("U·M·V differs from D".into());
    }
    for w in [&s.u, &s.v] {
        if w.rows() > 0 && !w.determinant().abs().is_one() {
            return Err(format!("{w} is not unimodular"));
        }
    }
    let zero = BigInt::zero();
    for i in 0..s.diagonal.rows() {
        for j in 0..s.diagonal.cols() {
            let x = s.diagonal.get(i, j);
            let expected = if i == j && i < s.invariants.len() { &s.invariants[i] } else { &zero };
            if x != expected {
                return Err(format!("unexpected entry {x} at ({i}, {j})"));
            }
        }
    }
    if s.invariants.iter().any(|d| !d.is_positive()) {
        return Err("non-positive invariant".into());
    }
    if s.invariants.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
        return Err("divisibility chain broken".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m).invariants.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(inv(&IntMatrix::from_i64(&[[2, 0], [0, 3]])), vec![1, 6]);
        assert_eq!(inv(&IntMatrix::identity(2)), vec![1, 1]);
        assert_eq!(inv(&IntMatrix::from_i64(&[[2, -3]])), vec![1]);
        assert_eq!(inv(&IntMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]])), vec![2, 6, 12]);
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!((z.matrix_rank, z.free_rank), (0, 3));
        let empty = smith_normal_form(&IntMatrix::zeros(0, 2));
        assert_eq!(empty.free_rank, 2);
    }
}
