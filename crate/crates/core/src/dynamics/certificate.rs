//! Integer-exact non-recurrence certificates on F ⋉ Zⁿ.
//!
//! For γ = T̄⁻¹ the chain (e, v̄) stays increasing after right multiplication
//! by γᵏ exactly when T̄ᵏv̄T̄⁻ᵏ = overline{Tᵏv} is positive. If f is a
//! functional with f(x) > 0 ⇒ x̄ ≻ e and f(x) < 0 ⇒ x̄ ≺ e, it suffices to
//! find v with f(v) > 0 whose orbit enters an open orthant that T maps into
//! itself and on which f is negative, after passing only through negative
//! points. Invariance of the orthant follows from the sign pattern of T.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::hyperbolic::is_hyperbolic;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, GroupSpec, Letter};
use crate::matrix::{bigint_json, IntMatrix};
use crate::order::{OrderDescriptor, OrderOracle};

/// Orbit length explored for each candidate before giving up.
pub const MAX_ORBIT: usize = 64;
/// Largest number of candidate vectors a search box may hold.
const MAX_BOX: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonRecurrenceCertificate {
    pub group: GroupSpec,
    pub order: OrderDescriptor,
    pub conjugator: GroupElement,
    pub reversed: bool,
    pub t_word: Vec<Letter>,
    pub t_matrix: IntMatrix,
    /// γ = T̄⁻¹
    pub gamma: GroupElement,
    /// (e, v̄)
    pub chain: Vec<GroupElement>,
    #[serde(with = "bigint_json::vec")]
    pub functional: Vec<BigInt>,
    #[serde(with = "bigint_json::vec")]
    pub v: Vec<BigInt>,
    /// n₀: T^{n₀}(v) is the first orbit point inside the orthant.
    pub threshold: usize,
    /// T¹(v), …, T^{n₀}(v).
    #[serde(with = "bigint_json::rows")]
    pub orbit_prefix: Vec<Vec<BigInt>>,
    /// Coordinate signs (±1) of the invariant open orthant.
    pub orthant: Vec<i8>,
    pub region: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateSearch {
    Found(Box<NonRecurrenceCertificate>),
    /// No seed in the box; this is expected when ker f is close to an
    /// eigenline of T.
    NotFound { candidates: usize, max_orbit: usize },
}

/// The functional f with f(x) > 0 ⇒ x̄ ≻ e and f(x) < 0 ⇒ x̄ ≺ e for a
/// lexicographic extension oracle, accounting for translation and reversal.
pub fn fiber_functional(oracle: &OrderOracle) -> Result<Vec<BigInt>> {
    let group = oracle.group();
    let (GroupSpec::Semidirect { .. }, OrderDescriptor::LexSemidirect { .. }) = (group.spec(), oracle.descriptor()) else {
        return Err(Error::Unsupported(
            "a fiber functional is only known for lexicographic extensions on F ⋉ Zⁿ".into(),
        ));
    };
    let fiber = oracle.zn_fiber_order().expect("lexicographic extension has a fiber order");
    let f0: Vec<BigInt> = fiber.dominant_functional().into_iter().map(BigInt::from).collect();
    let m = group
        .matrix_part(oracle.conjugator())
        .cloned()
        .unwrap_or_else(|| IntMatrix::identity(f0.len()));
    // positivity of x̄ is decided by the base fiber order at M_c·x
    let mut f = m.transpose().mul_vec(&f0);
    if oracle.is_reversed() {
        f.iter_mut().for_each(|x| *x = -&*x);
    }
    Ok(f)
}

fn dot(f: &[BigInt], x: &[BigInt]) -> BigInt {
    f.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// The sign pattern of x if its open orthant is mapped into itself by T
/// and f is negative on it.
fn invariant_negative_orthant(t: &IntMatrix, f: &[BigInt], x: &[BigInt]) -> Option<Vec<i8>> {
    if x.iter().any(Zero::is_zero) {
        return None;
    }
    let s: Vec<i8> = x.iter().map(|c| if c.is_positive() { 1 } else { -1 }).collect();
    orthant_ok(t, f, &s).then_some(s)
}

/// D T D ≥ 0 entrywise with a positive entry in every row (D = diag(s)),
/// and sᵢfᵢ ≤ 0 for all i with at least one strict.
fn orthant_ok(t: &IntMatrix, f: &[BigInt], s: &[i8]) -> bool {
    let n = s.len();
    for i in 0..n {
        let mut row_positive = false;
        for j in 0..n {
            let e = t.get(i, j) * BigInt::from(s[i] * s[j]);
            if e.is_negative() {
                return false;
            }
            row_positive |= e.is_positive();
        }
        if !row_positive {
            return false;
        }
    }
    let prods: Vec<BigInt> = (0..n).map(|i| &f[i] * BigInt::from(s[i])).collect();
    prods.iter().all(|p| !p.is_positive()) && prods.iter().any(Signed::is_negative)
}

fn fiber(v: &[BigInt]) -> GroupElement {
    GroupElement::Affine {
        matrix: IntMatrix::identity(v.len()),
        vector: v.to_vec(),
    }
}

fn box_candidates(rank: usize, bound: i64) -> Result<Vec<Vec<i64>>> {
    let side = (2 * bound + 1) as usize;
    let total = (0..rank).try_fold(1usize, |acc, _| acc.checked_mul(side));
    if bound < 1 || total.map_or(true, |t| t > MAX_BOX) {
        return Err(Error::InvalidParameter(format!(
            "search box [-{bound}, {bound}]^{rank} is empty or too large"
        )));
    }
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.unsigned_abs()).sum::<u64>(), v.clone()));
    Ok(out)
}

fn t_element(group: &Group, t_word: &[Letter]) -> Result<(GroupElement, IntMatrix)> {
    let m = group.matrix_generator_count().unwrap_or(0);
    if t_word.is_empty() {
        return Err(Error::NotHyperbolic("T is the empty word".into()));
    }
    if let Some(&l) = t_word.iter().find(|l| l.unsigned_abs() as usize > m) {
        return Err(Error::InvalidParameter(format!("letter {l} is not a matrix generator")));
    }
    let t = group.evaluate_word(t_word)?;
    let matrix = group.matrix_part(&t).expect("semidirect element").clone();
    Ok((t, matrix))
}

/// Searches the box [−B, B]ⁿ, by ℓ¹ norm and then lexicographically, for
/// a seed v certifying that (e, v̄) never recurs under γ = T̄⁻¹.
pub fn non_recurrence_certificate(oracle: &OrderOracle, t_word: &[Letter], bound: i64) -> Result<CertificateSearch> {
    let group = oracle.group();
    let f = fiber_functional(oracle)?;
    let (t, tm) = t_element(group, t_word)?;
    if !is_hyperbolic(&tm)? {
        return Err(Error::NotHyperbolic(format!("T = {tm} has trace {}", tm.trace())));
    }
    let candidates = box_candidates(f.len(), bound)?;
    for v in &candidates {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        if !dot(&f, &v).is_positive() {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = v.clone();
        for _ in 0..MAX_ORBIT {
            x = tm.mul_vec(&x);
            orbit.push(x.clone());
            if let Some(orthant) = invariant_negative_orthant(&tm, &f, &x) {
                let cert = NonRecurrenceCertificate {
                    group: group.spec().clone(),
                    order: oracle.descriptor(),
                    conjugator: oracle.conjugator().clone(),
                    reversed: oracle.is_reversed(),
                    t_word: t_word.to_vec(),
                    t_matrix: tm.clone(),
                    gamma: group.inv(&t),
                    chain: vec![group.identity(), fiber(&v)],
                    functional: f.clone(),
                    threshold: orbit.len(),
                    region: region_text(&orthant, &tm),
                    orbit_prefix: orbit,
                    orthant,
                    v,
                };
                return Ok(CertificateSearch::Found(Box::new(cert)));
            }
            if oracle.positive(&fiber(&x))? {
                break;
            }
        }
    }
    Ok(CertificateSearch::NotFound {
        candidates: candidates.len(),
        max_orbit: MAX_ORBIT,
    })
}

fn region_text(orthant: &[i8], t: &IntMatrix) -> String {
    let signs: Vec<&str> = orthant.iter().map(|&s| if s > 0 { "positive" } else { "negative" }).collect();
    format!(
        "open orthant with coordinate signs ({}); T = {t} maps it into itself because diag(s)·T·diag(s) is entrywise nonnegative with a positive entry in each row, and f < 0 on it",
        signs.join(", ")
    )
}

impl NonRecurrenceCertificate {
    /// Independent replay from the recorded data.
    pub fn replay(&self) -> std::result::Result<(), String> {
        let err = |e: Error| e.to_string();
        let group = Group::new(self.group.clone()).map_err(err)?;
        let (t, tm) = t_element(&group, &self.t_word).map_err(err)?;
        if tm != self.t_matrix {
            return Err(format!("T evaluates to {tm}, certificate says {}", self.t_matrix));
        }
        if !is_hyperbolic(&tm).map_err(err)? {
            return Err("T is not hyperbolic".into());
        }
        let mut oracle = OrderOracle::from_descriptor(&group, &self.order)
            .and_then(|o| o.translate(&self.conjugator))
            .map_err(err)?;
        if self.reversed {
            oracle = oracle.reverse();
        }
        if fiber_functional(&oracle).map_err(err)? != self.functional {
            return Err("recorded functional does not match the order".into());
        }
        let f = &self.functional;
        let v_bar = fiber(&self.v);
        if self.gamma != group.inv(&t) || self.chain != vec![group.identity(), v_bar.clone()] {
            return Err("γ or the chain is not (T̄⁻¹, (e, v̄))".into());
        }
        if !dot(f, &self.v).is_positive() || !oracle.positive(&v_bar).map_err(err)? {
            return Err("v̄ is not positive".into());
        }
        if self.threshold == 0 || self.orbit_prefix.len() != self.threshold {
            return Err("orbit prefix length differs from the threshold".into());
        }
        let mut x = self.v.clone();
        let mut power = group.identity();
        for (k, listed) in self.orbit_prefix.iter().enumerate() {
            x = tm.mul_vec(&x);
            if &x != listed {
                return Err(format!("orbit point {} is {x:?}, not {listed:?}", k + 1));
            }
            power = group.mul(&power, &t);
            // chain·γᵏ increasing ⟺ T̄ᵏ v̄ T̄⁻ᵏ ≻ e, and that element is overline{Tᵏv}
            if group.conjugate(&power, &v_bar) != fiber(&x) {
                return Err(format!("conjugation identity fails at k = {}", k + 1));
            }
            if oracle.positive(&fiber(&x)).map_err(err)? {
                return Err(format!("orbit point {} is positive, so the chain recurs", k + 1));
            }
        }
        if self.orthant.len() != x.len() || self.orthant.iter().any(|&s| s != 1 && s != -1) {
            return Err("malformed orthant".into());
        }
        if !x.iter().zip(&self.orthant).all(|(c, &s)| (c * BigInt::from(s)).is_positive()) {
            return Err("last orbit point is not in the open orthant".into());
        }
        if !orthant_ok(&tm, f, &self.orthant) {
            return Err("orthant is not T-invariant with f < 0 on it".into());
        }
        Ok(())
    }
}
