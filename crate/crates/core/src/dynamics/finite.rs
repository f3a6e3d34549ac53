//! Poincaré recurrence on finite measure spaces.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A finite set {0, …, n−1} with a self-map and rational probability weights.
///
/// The weights must be invariant: μ(T⁻¹{x}) = μ(x) for every x. For a
/// bijection this says the weights are constant on cycles; in general it
/// forces every point of positive weight to be periodic, while points of
/// weight zero may be transient.
#[derive(Clone, Debug)]
pub struct FiniteDynamicalSystem {
    labels: Vec<String>,
    map: Vec<usize>,
    weights: Vec<BigRational>,
}

impl FiniteDynamicalSystem {
    pub fn new(map: Vec<usize>, weights: Vec<BigRational>) -> Result<Self> {
        let labels = (0..map.len()).map(|i| i.to_string()).collect();
        Self::with_labels(labels, map, weights)
    }

    pub fn with_labels(labels: Vec<String>, map: Vec<usize>, weights: Vec<BigRational>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidSystem("no points".into()));
        }
        if labels.len() != n || weights.len() != n {
            return Err(Error::InvalidSystem(format!(
                "{n} points but {} labels and {} weights",
                labels.len(),
                weights.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= n) {
            return Err(Error::InvalidSystem(format!("map sends a point to {bad}, outside 0..{n}")));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidSystem("negative weight".into()));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidSystem(format!("weights sum to {total}, not 1")));
        }
        let mut pushed = vec![BigRational::zero(); n];
        for (x, &y) in map.iter().enumerate() {
            pushed[y] += &weights[x];
        }
        if let Some(x) = (0..n).find(|&x| pushed[x] != weights[x]) {
            return Err(Error::NotInvariant(x));
        }
        Ok(FiniteDynamicalSystem { labels, map, weights })
    }

    /// Rotation x ↦ x + 1 on Z/n with the uniform measure.
    pub fn rotation(n: usize) -> Result<Self> {
        let w = BigRational::new(1.into(), n.max(1).into());
        Self::new((0..n).map(|x| (x + 1) % n.max(1)).collect(), vec![w; n])
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn weight(&self, x: usize) -> &BigRational {
        &self.weights[x]
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    pub fn apply(&self, x: usize, times: usize) -> usize {
        (0..times).fold(x, |y, _| self.map[y])
    }

    pub fn measure(&self, set: &BTreeSet<usize>) -> BigRational {
        set.iter().map(|&x| &self.weights[x]).sum()
    }

    fn check_subset(&self, a: &BTreeSet<usize>) -> Result<()> {
        match a.iter().find(|&&x| x >= self.len()) {
            Some(x) => Err(Error::InvalidSystem(format!("point {x} is not in the system"))),
            None => Ok(()),
        }
    }

    /// T^{-k}(B) = {x : Tᵏ(x) ∈ B}.
    pub fn preimage(&self, set: &BTreeSet<usize>, k: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&x| set.contains(&self.apply(x, k))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnTime {
    Returns(usize),
    /// Only possible for points of weight zero.
    NoReturn,
}

/// For each a ∈ A, the least n ≥ 1 with Tⁿ(a) ∈ A.
pub fn poincare_return_times(system: &FiniteDynamicalSystem, a: &BTreeSet<usize>) -> Result<Vec<(usize, ReturnTime)>> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("the return set must be nonempty".into()));
    }
    system.check_subset(a)?;
    let n = system.len();
    Ok(a.iter()
        .map(|&x| {
            let mut y = x;
            for t in 1..=n {
                y = system.map[y];
                if a.contains(&y) {
                    return (x, ReturnTime::Returns(t));
                }
            }
            (x, ReturnTime::NoReturn)
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct AnReport {
    pub n: usize,
    /// A_n = ⋃_{k≥1} T^{-kn}(A).
    pub a_n: BTreeSet<usize>,
    /// A ∖ A_n: points of A that never come back along multiples of n.
    pub exceptions: BTreeSet<usize>,
    pub exception_measure: BigRational,
    /// Least (k, ℓ), k < ℓ, with T^{-kn}(B) ∩ T^{-ℓn}(B) ≠ ∅ for B = A ∖ A_n.
    /// Disjointness of all these translates is what a positive μ(B) would
    /// contradict.
    pub overlap: Option<(usize, usize)>,
}

/// Computes A_n and checks μ(A ∖ A_n) = 0.
pub fn poincare_an_verification(system: &FiniteDynamicalSystem, a: &BTreeSet<usize>, n: usize) -> Result<AnReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    system.check_subset(a)?;
    let size = system.len();
    let tn: Vec<usize> = (0..size).map(|x| system.apply(x, n)).collect();
    // the orbit of x under Tⁿ is eventually periodic within |X| steps
    let a_n: BTreeSet<usize> = (0..size)
        .filter(|&x| {
            let mut y = x;
            (0..size).any(|_| {
                y = tn[y];
                a.contains(&y)
            })
        })
        .collect();
    let exceptions: BTreeSet<usize> = a.difference(&a_n).copied().collect();
    let exception_measure = system.measure(&exceptions);
    let overlap = if exceptions.is_empty() {
        None
    } else {
        let mut translates = vec![exceptions.clone()];
        for _ in 0..=size {
            let prev = translates.last().expect("nonempty");
            let next = (0..size).filter(|&x| prev.contains(&tn[x])).collect();
            translates.push(next);
        }
        (1..translates.len()).find_map(|l| {
            (0..l).find(|&k| !translates[k].is_disjoint(&translates[l])).map(|k| (k, l))
        })
    };
    if !exception_measure.is_zero() {
        return Err(Error::OracleDefect(format!(
            "μ(A ∖ A_{n}) = {exception_measure} for an invariant measure"
        )));
    }
    Ok(AnReport {
        n,
        a_n,
        exceptions,
        exception_measure,
        overlap,
    })
}
