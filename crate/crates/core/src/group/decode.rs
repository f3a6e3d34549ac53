use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::group::Letter;
use crate::matrix::IntMatrix;

fn size(m: &IntMatrix) -> BigInt {
    (0..m.rows()).flat_map(|i| m.row(i).iter().map(Signed::abs)).sum()
}

/// Peels letters off the front of `m`: at each step exactly one letter x
/// must make x⁻¹·m strictly smaller in the entrywise ℓ¹ size.
pub(super) fn decode(generators: &[IntMatrix], m: &IntMatrix) -> Result<Vec<Letter>> {
    let mut letters: Vec<(Letter, IntMatrix)> = Vec::with_capacity(2 * generators.len());
    for (i, g) in generators.iter().enumerate() {
        let l = i as Letter + 1;
        let inv = g.inverse_unimodular()?;
        // multiplying by the inverse of letter l removes a leading l
        letters.push((l, inv.clone()));
        letters.push((-l, g.clone()));
    }
    let mut word = Vec::new();
    let mut current = m.clone();
    let mut current_size = size(&current);
    while !current.is_identity() {
        let mut found: Option<(Letter, IntMatrix, BigInt)> = None;
        for (l, undo) in &letters {
            let next = undo.mul(&current);
            let s = size(&next);
            if s < current_size {
                if found.is_some() {
                    return Err(Error::Unsupported(format!(
                        "ambiguous decoding step for {current}"
                    )));
                }
                found = Some((*l, next, s));
            }
        }
        let (l, next, s) = found.ok_or_else(|| {
            Error::Unsupported(format!("{m} is not decodable over the matrix generators"))
        })?;
        if word.last() == Some(&-l) {
            return Err(Error::Unsupported(format!("decoding of {m} produced a non-reduced word")));
        }
        word.push(l);
        current = next;
        current_size = s;
    }
    // verification by re-evaluation
    let mut check = IntMatrix::identity(m.rows());
    for &l in &word {
        let g = &generators[l.unsigned_abs() as usize - 1];
        check = if l > 0 {
            check.mul(g)
        } else {
            check.mul(&g.inverse_unimodular()?)
        };
    }
    if &check != m {
        return Err(Error::Unsupported(format!("decoding of {m} failed verification")));
    }
    Ok(word)
}
