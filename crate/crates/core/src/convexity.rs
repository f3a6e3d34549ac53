//! Convex subgroups, bounded-power sets and Archimedean tests.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dynamics::{positive_elements, soft, Instance, ScaleReport};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, GroupSpec};
use crate::order::{OrderDescriptor, OrderOracle, ZnOrder};

/// Subgroups given by a decidable membership predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupSpec {
    Trivial,
    Whole,
    /// {v ∈ Zⁿ : f·v = 0}, on the free abelian backend or the Zⁿ fiber of
    /// a semidirect product.
    Kernel { functional: Vec<i64> },
    /// Klein bottle elements aᵐbⁿ with n = 0, i.e. ⟨a⟩.
    KleinA,
    /// Elements with trivial matrix part in a semidirect product.
    Fiber,
}

#[derive(Clone, Debug)]
pub struct SubgroupOracle {
    group: Group,
    spec: SubgroupSpec,
}

impl SubgroupOracle {
    pub fn new(group: &Group, spec: SubgroupSpec) -> Result<Self> {
        let ok = match (&spec, group.spec()) {
            (SubgroupSpec::Trivial | SubgroupSpec::Whole, _) => true,
            (SubgroupSpec::Kernel { functional }, _) => {
                if functional.iter().all(|&x| x == 0) {
                    return Err(Error::ZeroFunctional);
                }
                group.fiber_rank() == Some(functional.len())
            }
            (SubgroupSpec::KleinA, GroupSpec::KleinBottle) => true,
            (SubgroupSpec::Fiber, GroupSpec::Semidirect { .. }) => true,
            _ => false,
        };
        if !ok {
            return Err(Error::Unsupported(format!(
                "subgroup {spec:?} on the {} backend",
                group.spec().backend()
            )));
        }
        Ok(SubgroupOracle {
            group: group.clone(),
            spec,
        })
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        self.group.check(g)?;
        Ok(match &self.spec {
            SubgroupSpec::Trivial => self.group.is_identity(g),
            SubgroupSpec::Whole => true,
            SubgroupSpec::Kernel { functional } => match self.group.fiber_coordinates(g) {
                Some(v) => functional
                    .iter()
                    .zip(&v)
                    .map(|(f, x)| BigInt::from(*f) * x)
                    .sum::<BigInt>()
                    .is_zero(),
                None => false,
            },
            SubgroupSpec::KleinA => matches!(g, GroupElement::Klein { b: 0, .. }),
            SubgroupSpec::Fiber => self.group.fiber_coordinates(g).is_some(),
        })
    }

    /// Checks identity, inverse and product closure on a sample.
    pub fn check_closure(&self, sample: &[GroupElement]) -> std::result::Result<(), String> {
        let member = |g: &GroupElement| self.contains(g).map_err(|e| e.to_string());
        if !member(&self.group.identity())? {
            return Err("identity is missing".into());
        }
        let inside: Vec<&GroupElement> = sample.iter().filter(|g| member(g).unwrap_or(false)).collect();
        for g in &inside {
            if !member(&self.group.inv(g))? {
                return Err(format!("{g} is in but its inverse is not"));
            }
            for h in &inside {
                if !member(&self.group.mul(g, h))? {
                    return Err(format!("{g} and {h} are in but their product is not"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConvexityVerdict {
    ConvexAtScale,
    /// e ≺ γ ≺ λ with λ ∈ Λ and γ ∉ Λ.
    Violation { gamma: GroupElement, lambda: GroupElement },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    #[serde(flatten)]
    pub verdict: ConvexityVerdict,
    pub checked_pairs: usize,
    pub undetermined_pairs: usize,
}

/// Checks e ≺ γ ≺ λ, λ ∈ Λ ⇒ γ ∈ Λ for all γ, λ in the sample.
pub fn convex_at_scale(order: &OrderOracle, sub: &SubgroupOracle, elements: &[GroupElement]) -> Result<ConvexityReport> {
    let pos = positive_elements(order, elements)?;
    let mut report = ConvexityReport {
        verdict: ConvexityVerdict::ConvexAtScale,
        checked_pairs: 0,
        undetermined_pairs: 0,
    };
    for lambda in &pos {
        if !sub.contains(lambda)? {
            continue;
        }
        for gamma in &pos {
            if sub.contains(gamma)? {
                continue;
            }
            match soft(order.compare(gamma, lambda).map(|o| o == Ordering::Less))? {
                None => report.undetermined_pairs += 1,
                Some(below) => {
                    report.checked_pairs += 1;
                    if below {
                        report.verdict = ConvexityVerdict::Violation {
                            gamma: gamma.clone(),
                            lambda: lambda.clone(),
                        };
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// {λ in the sample : λⁿ ≺ γ for all |n| ≤ N}, a superset of Λ_γ on the
/// sample that shrinks as N grows.
pub fn bounded_power_set(order: &OrderOracle, gamma: &GroupElement, elements: &[GroupElement], n_max: u32) -> Result<Vec<GroupElement>> {
    let group = order.group();
    if !order.positive(gamma)? {
        return Err(Error::InvalidParameter(format!("{gamma} is not positive")));
    }
    let mut out = Vec::new();
    'next: for lambda in elements {
        let li = group.inv(lambda);
        let (mut up, mut down) = (group.identity(), group.identity());
        for _ in 0..n_max {
            up = group.mul(&up, lambda);
            down = group.mul(&down, &li);
            for p in [&up, &down] {
                if order.compare(p, gamma)? != Ordering::Less {
                    continue 'next;
                }
            }
        }
        out.push(lambda.clone());
    }
    Ok(out)
}

const ARCHIMEDEAN_NOTE: &str = "a pair with no |n| ≤ N such that γ ⪯ λⁿ is inconclusive for the unbounded condition";

/// For all nontrivial γ, λ in the sample, looks for |n| ≤ N with γ ⪯ λⁿ,
/// trying n = 1, −1, 2, −2, ….
pub fn archimedean_at_scale(order: &OrderOracle, elements: &[GroupElement], n_max: u32) -> Result<ScaleReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let group = order.group();
    let nontrivial: Vec<&GroupElement> = elements.iter().filter(|g| !group.is_identity(g)).collect();
    let mut instances = Vec::new();
    for &gamma in &nontrivial {
        for &lambda in &nontrivial {
            let li = group.inv(lambda);
            let (mut up, mut down) = (group.identity(), group.identity());
            let mut witnesses = Vec::new();
            let mut undetermined = Vec::new();
            for n in 1..=n_max as i64 {
                up = group.mul(&up, lambda);
                down = group.mul(&down, &li);
                for (e, p) in [(n, &up), (-n, &down)] {
                    match soft(order.compare(gamma, p).map(|o| o != Ordering::Greater))? {
                        Some(true) => witnesses.push(e),
                        Some(false) => {}
                        None => undetermined.push(e),
                    }
                    if !witnesses.is_empty() {
                        break;
                    }
                }
                if !witnesses.is_empty() {
                    break;
                }
            }
            instances.push(Instance {
                gamma: gamma.clone(),
                chain: vec![lambda.clone()],
                holds: !witnesses.is_empty(),
                witnesses,
                undetermined,
                bound: n_max as i64,
            });
        }
    }
    Ok(ScaleReport::from_instances(instances, false, ARCHIMEDEAN_NOTE))
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetReport {
    pub well_defined: bool,
    /// One representative per coset met in the sample, in increasing coset order.
    pub cosets: Vec<GroupElement>,
    /// Pairs of cosets whose representatives compare inconsistently.
    pub inconsistent: Vec<(GroupElement, GroupElement)>,
}

/// Checks that the order induces a well-defined order on left cosets gΛ:
/// comparisons between different cosets do not depend on representatives.
pub fn coset_chain_check(order: &OrderOracle, sub: &SubgroupOracle, elements: &[GroupElement]) -> Result<CosetReport> {
    let conv = convex_at_scale(order, sub, elements)?;
    if let ConvexityVerdict::Violation { gamma, lambda } = &conv.verdict {
        return Err(Error::NotConvex(format!(
            "e ≺ {gamma} ≺ {lambda} with {lambda} in the subgroup and {gamma} not"
        )));
    }
    let group = order.group();
    let mut classes: Vec<Vec<&GroupElement>> = Vec::new();
    for g in elements {
        let gi = group.inv(g);
        let mut placed = false;
        for class in classes.iter_mut() {
            if sub.contains(&group.mul(&gi, class[0]))? {
                class.push(g);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![g]);
        }
    }
    let mut inconsistent = Vec::new();
    // ordering[i][j]: whether coset i lies below coset j
    let k = classes.len();
    let mut below = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let mut seen: Option<Ordering> = None;
            let mut consistent = true;
            for x in &classes[i] {
                for y in &classes[j] {
                    let Some(o) = soft(order.compare(x, y).map(|o| o == Ordering::Less))? else {
                        continue;
                    };
                    let o = if o { Ordering::Less } else { Ordering::Greater };
                    if *seen.get_or_insert(o) != o {
                        consistent = false;
                    }
                }
            }
            if !consistent && i < j {
                inconsistent.push((classes[i][0].clone(), classes[j][0].clone()));
            }
            below[i][j] = seen.map(|o| o == Ordering::Less);
        }
    }
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&i, &j| match below[i][j] {
        Some(true) => Ordering::Less,
        Some(false) => Ordering::Greater,
        None => i.cmp(&j),
    });
    Ok(CosetReport {
        well_defined: inconsistent.is_empty(),
        cosets: idx.into_iter().map(|i| classes[i][0].clone()).collect(),
        inconsistent,
    })
}

/// The maximal proper convex subgroup of a lexicographic or functional
/// order on Zⁿ: the highest-priority coordinate vanishes, or f vanishes.
pub fn maximal_convex_subgroup_zn(group: &Group, order: &OrderDescriptor) -> Result<SubgroupOracle> {
    let GroupSpec::FreeAbelian { rank } = group.spec() else {
        return Err(Error::Unsupported("maximal convex subgroups are exact only on Zⁿ".into()));
    };
    let functional = match order {
        OrderDescriptor::LexZn { priority, flips } => {
            let o = ZnOrder::LexZn {
                priority: priority.clone(),
                flips: flips.clone(),
            }
            .normalized(*rank)?;
            let ZnOrder::LexZn { priority, .. } = o else { unreachable!() };
            let mut f = vec![0; *rank];
            f[priority[0]] = 1;
            f
        }
        OrderDescriptor::FunctionalLexZn { functional } => {
            ZnOrder::FunctionalLexZn {
                functional: functional.clone(),
            }
            .normalized(*rank)?;
            functional.clone()
        }
        other => {
            return Err(Error::Unsupported(format!(
                "no exact maximal convex subgroup for {other:?}"
            )))
        }
    };
    let spec = if *rank == 1 {
        SubgroupSpec::Trivial
    } else {
        SubgroupSpec::Kernel { functional }
    };
    SubgroupOracle::new(group, spec)
}
