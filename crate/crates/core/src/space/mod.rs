//! Finite-scale exploration of the space of left orders.
//!
//! A left order restricts to a complete cone on every ball, so the absence
//! of consistent cones on some ball refutes orderability, and a complete
//! consistent cone is only evidence: it may fail to extend to a genuine
//! order.

mod certificate;
mod engine;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Ball, Group};
use crate::order::{OrderedChain, PartialCone, Sign};

pub use certificate::{verify_certificate, Conflict, DerivationNode, NonOrderabilityCertificate, Outcome, Reason, Step};
use engine::{Engine, RawReason, RawStep, SearchParams, Signs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Also propagate through products landing in ball(2r).
    pub strong: bool,
    pub workers: usize,
    /// Node budget for each parallel subtree.
    pub max_nodes: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strong: false,
            workers: 1,
            max_nodes: 2_000_000,
        }
    }
}

/// Depth of the sequential expansion before subtrees go to the worker pool.
const SPLIT_DEPTH: usize = 4;

/// Caveat attached to every positive search answer.
pub const OVER_APPROXIMATION_NOTE: &str =
    "consistent at radius r means a complete cone satisfies the cone axioms on the ball; it need not extend to a left order";

/// Outcome of closing a cone under the axioms.
#[derive(Clone, Debug, PartialEq)]
pub enum Propagation {
    Closed(PartialCone),
    Contradiction(Conflict),
}

/// Least fixed point of the antisymmetry and closure rules on the cone's ball.
pub fn propagate(cone: &PartialCone) -> Propagation {
    let ball = cone.ball().clone();
    let engine = Engine::new(ball.clone(), ball.len());
    let mut signs = vec![None; ball.len()];
    let seeds = Engine::known_as_seeds(&cone.signs().to_vec());
    match engine.propagate(&mut signs, &seeds, None) {
        Ok(()) => Propagation::Closed(PartialCone::from_signs(ball, signs).expect("same ball")),
        Err(c) => Propagation::Contradiction(certificate::convert_conflict(&ball, &c)),
    }
}

struct Setup {
    ball: Arc<Ball>,
    engine: Engine,
}

fn setup(group: &Group, r: usize, strong: bool) -> Result<Setup> {
    let ball = Arc::new(group.ball(r)?);
    let engine = if strong {
        let big = Arc::new(group.ball(2 * r)?);
        let n = big.prefix_len(r);
        debug_assert_eq!(&big.elements()[..n], ball.elements());
        Engine::new(big, n)
    } else {
        Engine::new(ball.clone(), ball.len())
    };
    Ok(Setup { ball, engine })
}

fn params(opts: &SearchOptions, stop_at: usize, logging: bool) -> SearchParams {
    SearchParams {
        stop_at,
        max_nodes: opts.max_nodes.max(1),
        split_depth: SPLIT_DEPTH,
        workers: opts.workers.max(1),
        logging,
    }
}

fn to_cone(ball: &Arc<Ball>, signs: Signs) -> PartialCone {
    PartialCone::from_signs(ball.clone(), signs).expect("search output matches the ball")
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub radius: usize,
    /// Sorted by sign vector in ball order.
    pub cones: Vec<PartialCone>,
    /// False when the cone limit or the node budget cut the search short.
    pub complete: bool,
    pub nodes: usize,
}

/// All complete consistent cones on ball(r), up to `limit`.
pub fn enumerate_cones(group: &Group, r: usize, limit: usize, opts: &SearchOptions) -> Result<Enumeration> {
    if limit == 0 {
        return Err(Error::InvalidParameter("cone limit must be at least 1".into()));
    }
    let s = setup(group, r, opts.strong)?;
    let root = vec![None; s.engine.ball.len()];
    let out = s.engine.search(root, &[], &params(opts, limit.saturating_add(1), false));
    let mut cones = out.cones;
    cones.sort();
    cones.dedup();
    let complete = !out.budget_hit && cones.len() <= limit;
    cones.truncate(limit);
    Ok(Enumeration {
        radius: r,
        cones: cones.into_iter().map(|c| to_cone(&s.ball, c)).collect(),
        complete,
        nodes: out.nodes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchVerdict {
    ConsistentAtRadius,
    EmptyAtRadius,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub verdict: SearchVerdict,
    pub radius: usize,
    pub witness: Option<PartialCone>,
    pub certificate: Option<NonOrderabilityCertificate>,
    pub nodes: usize,
}

fn find_one(s: &Setup, r: usize, seeds: &[usize], opts: &SearchOptions) -> SearchResult {
    let seed_steps: Vec<RawStep> = seeds
        .iter()
        .map(|&i| RawStep {
            idx: i as u32,
            sign: Sign::Pos,
            reason: RawReason::Seed,
        })
        .collect();
    let root = vec![None; s.engine.ball.len()];
    let out = s.engine.search(root, &seed_steps, &params(opts, 1, true));
    if let Some(first) = out.cones.into_iter().next() {
        return SearchResult {
            verdict: SearchVerdict::ConsistentAtRadius,
            radius: r,
            witness: Some(to_cone(&s.ball, first)),
            certificate: None,
            nodes: out.nodes,
        };
    }
    match out.tree {
        Some(tree) => SearchResult {
            verdict: SearchVerdict::EmptyAtRadius,
            radius: r,
            witness: None,
            certificate: Some(NonOrderabilityCertificate {
                radius: r,
                seeds: seeds.iter().map(|&i| s.engine.ball.element(i).clone()).collect(),
                root: certificate::convert(&s.engine.ball, &tree),
            }),
            nodes: out.nodes,
        },
        None => SearchResult {
            verdict: SearchVerdict::Inconclusive,
            radius: r,
            witness: None,
            certificate: None,
            nodes: out.nodes,
        },
    }
}

/// Searches ball(r) for a complete consistent cone in which every
/// consecutive quotient λᵢ⁻¹λᵢ₊₁ of the chain is positive.
pub fn basic_open_nonempty_at_radius(
    group: &Group,
    r: usize,
    chain: &OrderedChain,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let s = setup(group, r, opts.strong)?;
    for l in chain.elements() {
        group.check(l)?;
        if !s.ball.contains(l) {
            return Err(Error::OutsideBall(l.to_string()));
        }
    }
    let mut seeds = Vec::new();
    for q in chain.quotients(group) {
        let i = s.ball.index_of(&q).ok_or_else(|| Error::OutsideBall(q.to_string()))?;
        seeds.push(i);
    }
    Ok(find_one(&s, r, &seeds, opts))
}

#[derive(Clone, Debug)]
pub enum Refutation {
    Refuted(NonOrderabilityCertificate),
    /// A consistent cone exists at `radius` (or the budget ran out there).
    Inconclusive {
        radius: usize,
        witness: Option<PartialCone>,
        budget_hit: bool,
    },
}

/// Looks for a radius r ≤ r_max at which no complete consistent cone exists.
pub fn refute_left_orderability(group: &Group, r_max: usize, opts: &SearchOptions) -> Result<Refutation> {
    if r_max == 0 {
        return Err(Error::InvalidParameter("r_max must be at least 1".into()));
    }
    let mut last = None;
    for r in 1..=r_max {
        let s = setup(group, r, opts.strong)?;
        let res = find_one(&s, r, &[], opts);
        match res.verdict {
            SearchVerdict::EmptyAtRadius => {
                return Ok(Refutation::Refuted(res.certificate.expect("empty carries a certificate")))
            }
            SearchVerdict::ConsistentAtRadius => last = Some(res),
            SearchVerdict::Inconclusive => {
                return Ok(Refutation::Inconclusive {
                    radius: r,
                    witness: None,
                    budget_hit: true,
                })
            }
        }
    }
    let last = last.expect("r_max ≥ 1");
    Ok(Refutation::Inconclusive {
        radius: last.radius,
        witness: last.witness,
        budget_hit: false,
    })
}
