//! Exact eigen-data of 2×2 integer matrices of determinant 1.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

fn check_sl2(m: &IntMatrix) -> Result<()> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::InvalidMatrix(format!("{m} is not 2×2")));
    }
    if !m.determinant().is_one() {
        return Err(Error::InvalidMatrix(format!("{m} has determinant {}, not 1", m.determinant())));
    }
    Ok(())
}

/// |trace| > 2, for a matrix of determinant 1.
pub fn is_hyperbolic(m: &IntMatrix) -> Result<bool> {
    check_sl2(m)?;
    Ok(m.trace().abs() > BigInt::from(2))
}

/// Eigenvalues (t ± √d)/2 with d = t² − 4, and the quadratic
/// c x² + (d' − a) x − b whose roots are the slopes x = v₁/v₂ of the
/// eigenlines of [[a, b], [c, d']].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenData {
    pub trace: BigInt,
    pub discriminant: BigInt,
    /// Coefficients (x², x, 1).
    pub eigenline_quadratic: [BigInt; 3],
    pub hyperbolic: bool,
    pub positive_eigenvalues: bool,
}

pub fn eigen_data(m: &IntMatrix) -> Result<EigenData> {
    check_sl2(m)?;
    let t = m.trace();
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let two = BigInt::from(2);
    Ok(EigenData {
        discriminant: &t * &t - 4,
        eigenline_quadratic: [c.clone(), d - a, -b],
        hyperbolic: t.abs() > two,
        positive_eigenvalues: t > two,
        trace: t,
    })
}

/// Resultant of p₂x² + p₁x + p₀ and q₂x² + q₁x + q₀.
pub fn quadratic_resultant(p: &[BigInt; 3], q: &[BigInt; 3]) -> BigInt {
    let [p2, p1, p0] = p;
    let [q2, q1, q0] = q;
    let u = p2 * q0 - p0 * q2;
    (&u * &u) - (p2 * q1 - p1 * q2) * (p1 * q0 - p0 * q1)
}

/// Whether two hyperbolic matrices share an eigenline.
///
/// Hyperbolic eigenline slopes are conjugate quadratic irrationals, so a
/// shared root of the two quadratics means both eigenlines coincide; the
/// test is the vanishing of their resultant.
pub fn common_eigenline(m1: &IntMatrix, m2: &IntMatrix) -> Result<bool> {
    let e1 = eigen_data(m1)?;
    let e2 = eigen_data(m2)?;
    for (m, e) in [(m1, &e1), (m2, &e2)] {
        if !e.hyperbolic {
            return Err(Error::NotHyperbolic(format!("{m} has trace {}", e.trace)));
        }
    }
    Ok(eigenline_resultant(&e1, &e2) == BigInt::from(0))
}

pub fn eigenline_resultant(e1: &EigenData, e2: &EigenData) -> BigInt {
    quadratic_resultant(&e1.eigenline_quadratic, &e2.eigenline_quadratic)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> IntMatrix {
        IntMatrix::from_i64(&[[5, 2], [2, 1]])
    }

    /// Sylvester determinant of two quadratics, expanded independently.
    fn sylvester(p: &[i64; 3], q: &[i64; 3]) -> BigInt {
        let rows = vec![
            vec![p[0], p[1], p[2], 0],
            vec![0, p[0], p[1], p[2]],
            vec![q[0], q[1], q[2], 0],
            vec![0, q[0], q[1], q[2]],
        ];
        IntMatrix::from_rows(&rows).unwrap().determinant()
    }

    #[test]
    fn sanov_product_data() {
        let e = eigen_data(&t()).unwrap();
        assert_eq!(e.trace, BigInt::from(6));
        assert_eq!(e.discriminant, BigInt::from(32));
        assert!(e.hyperbolic && e.positive_eigenvalues);
        assert!(!is_hyperbolic(&IntMatrix::identity(2)).unwrap());
        assert!(!is_hyperbolic(&IntMatrix::from_i64(&[[1, 1], [0, 1]])).unwrap());
        assert!(is_hyperbolic(&IntMatrix::from_i64(&[[2, 0], [0, 1]])).is_err());
    }

    #[test]
    fn eigenlines() {
        let t = t();
        let conj = IntMatrix::from_i64(&[[7, -4], [2, -1]]);
        assert!(!common_eigenline(&t, &conj).unwrap());
        assert!(common_eigenline(&t, &t.mul(&t)).unwrap());
        assert!(common_eigenline(&t, &t.inverse_unimodular().unwrap()).unwrap());
        let monic = quadratic_resultant(
            &[1.into(), (-2).into(), (-1).into()],
            &[1.into(), (-4).into(), 2.into()],
        );
        assert_eq!(monic, BigInt::from(-7));
        assert!(common_eigenline(&t, &IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases = [[2, -4, -2], [1, -4, 2], [3, 0, -7], [-5, 2, 1], [0, 3, 4], [4, 4, 1]];
        for p in &cases {
            for q in &cases {
                let pb = [p[0].into(), p[1].into(), p[2].into()];
                let qb = [q[0].into(), q[1].into(), q[2].into()];
                assert_eq!(quadratic_resultant(&pb, &qb), sylvester(p, q), "{p:?} {q:?}");
            }
        }
    }
}
