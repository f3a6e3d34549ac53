use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use ordlab::indicability::{abelianization, has_infinite_cyclic_quotient, smith_normal_form, z_quotient_witness, Presentation};
use ordlab::IntMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Laplace expansion, kept separate from the library's determinant.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 { term } else { -term }
        })
        .sum()
}

/// Invariant factors as ratios of successive gcds of k×k minors.
fn minors_oracle(m: &[Vec<i64>]) -> Vec<BigInt> {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in combinations(r, k) {
            for cols in combinations(c, k) {
                let sub: Vec<Vec<BigInt>> = rows.iter().map(|&i| cols.iter().map(|&j| BigInt::from(m[i][j])).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize) -> Vec<Vec<i64>> {
    let (r, c) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    let sparse = rng.gen_bool(0.3);
    (0..r)
        .map(|_| {
            (0..c)
                .map(|_| if sparse && rng.gen_bool(0.6) { 0 } else { rng.gen_range(-50..=50) })
                .collect()
        })
        .collect()
}

fn presentation_of(m: &[Vec<i64>]) -> Presentation {
    let k = m[0].len();
    let relators = m
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .flat_map(|(j, &e)| {
                    let l = (j as i64 + 1) * e.signum();
                    std::iter::repeat_n(l, e.unsigned_abs() as usize)
                })
                .collect()
        })
        .collect();
    Presentation::new(k, relators).unwrap()
}

#[test]
fn snf_matches_minors_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..500 {
        let small = case % 2 == 0;
        let m = random_matrix(&mut rng, if small { 4 } else { 8 });
        let im = IntMatrix::from_rows(&m).unwrap();
        let s = smith_normal_form(&im);
        assert_eq!(s.u.mul(&im).mul(&s.v), s.diagonal);
        assert!(s.u.determinant().abs().is_one() && s.v.determinant().abs().is_one());
        assert!(s.invariants.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        if small {
            let oracle = minors_oracle(&m);
            assert_eq!(s.invariants, oracle, "{m:?}");
            let p = presentation_of(&m);
            assert_eq!(has_infinite_cyclic_quotient(&p), m[0].len() > oracle.len());
            if let Some(phi) = z_quotient_witness(&p) {
                for row in &m {
                    let image: BigInt = row.iter().zip(&phi).map(|(e, f)| BigInt::from(*e) * f).sum();
                    assert!(image.is_zero());
                }
            }
        }
    }
}

#[test]
fn named_presentations() {
    let p = Presentation::new(2, vec![vec![1, 1, -2, -2, -2]]).unwrap();
    assert_eq!(abelianization(&p).free_rank, 1);
    assert_eq!(z_quotient_witness(&p), Some(vec![BigInt::from(3), BigInt::from(2)]));
    let klein = Presentation::new(2, vec![vec![2, 1, -2, 1]]).unwrap();
    let a = abelianization(&klein);
    assert_eq!((a.free_rank, a.torsion), (1, vec![BigInt::from(2)]));
    let c5 = Presentation::new(1, vec![vec![1; 5]]).unwrap();
    let a = abelianization(&c5);
    assert_eq!((a.free_rank, a.torsion), (0, vec![BigInt::from(5)]));
    assert_eq!(z_quotient_witness(&c5), None);
    assert_eq!(
        z_quotient_witness(&Presentation::free(2)),
        Some(vec![BigInt::from(1), BigInt::from(0)])
    );
}
