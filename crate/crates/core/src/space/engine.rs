//! Sign propagation and depth-first search over a ball.
//!
//! Everything here works on ball indices. The search first expands the tree
//! sequentially to a fixed depth, then solves the remaining subtrees on a
//! worker pool and stitches the results back in tree order, so the output
//! does not depend on the number of workers.

use std::sync::Arc;

use rayon::prelude::*;

use crate::group::Ball;
use crate::order::Sign;

pub(crate) type Signs = Vec<Option<Sign>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RawReason {
    Seed,
    Inverse(u32),
    Product(u32, u32),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct RawStep {
    pub idx: u32,
    pub sign: Sign,
    pub reason: RawReason,
}

/// A derivation of `sign` for `idx` that clashes with the current state;
/// `idx == 0` means a product of two equally signed elements is trivial.
pub(crate) type RawConflict = RawStep;

#[derive(Debug)]
pub(crate) enum RawOutcome {
    Conflict(RawConflict),
    Branch(u32, Box<RawNode>, Box<RawNode>),
    Pending(usize),
}

#[derive(Debug)]
pub(crate) struct RawNode {
    pub steps: Vec<RawStep>,
    pub outcome: RawOutcome,
}

pub(crate) struct Engine {
    pub ball: Arc<Ball>,
    /// Only indices below this are branched on.
    pub branch_len: usize,
    inv: Vec<u32>,
    /// right[i] holds (j, k) with i·j = k.
    right: Vec<Vec<(u32, u32)>>,
    /// left[i] holds (j, k) with j·i = k.
    left: Vec<Vec<(u32, u32)>>,
}

impl Engine {
    pub fn new(ball: Arc<Ball>, branch_len: usize) -> Engine {
        let n = ball.len();
        let right = ball.product_table();
        let mut left = vec![Vec::new(); n];
        for (i, row) in right.iter().enumerate() {
            for &(j, k) in row {
                left[j as usize].push((i as u32, k));
            }
        }
        let inv = (0..n).map(|i| ball.inverse_index(i) as u32).collect();
        Engine {
            ball,
            branch_len,
            inv,
            right,
            left,
        }
    }

    fn derive(
        &self,
        signs: &mut Signs,
        queue: &mut Vec<u32>,
        log: &mut Option<&mut Vec<RawStep>>,
        step: RawStep,
    ) -> Result<(), RawConflict> {
        let k = step.idx as usize;
        if k == 0 {
            return Err(step);
        }
        match signs[k] {
            Some(s) if s == step.sign => Ok(()),
            Some(_) => Err(step),
            None => {
                signs[k] = Some(step.sign);
                if let Some(log) = log {
                    log.push(step);
                }
                queue.push(step.idx);
                Ok(())
            }
        }
    }

    /// Assigns the given steps and closes under the cone rules.
    pub fn propagate(
        &self,
        signs: &mut Signs,
        initial: &[RawStep],
        mut log: Option<&mut Vec<RawStep>>,
    ) -> Result<(), RawConflict> {
        let mut queue = Vec::new();
        for &step in initial {
            self.derive(signs, &mut queue, &mut log, step)?;
        }
        while let Some(i) = queue.pop() {
            let s = signs[i as usize].expect("queued elements are signed");
            let inverse = RawStep {
                idx: self.inv[i as usize],
                sign: s.flip(),
                reason: RawReason::Inverse(i),
            };
            self.derive(signs, &mut queue, &mut log, inverse)?;
            for &(j, k) in &self.right[i as usize] {
                if signs[j as usize] == Some(s) {
                    let step = RawStep {
                        idx: k,
                        sign: s,
                        reason: RawReason::Product(i, j),
                    };
                    self.derive(signs, &mut queue, &mut log, step)?;
                }
            }
            for &(j, k) in &self.left[i as usize] {
                if signs[j as usize] == Some(s) {
                    let step = RawStep {
                        idx: k,
                        sign: s,
                        reason: RawReason::Product(j, i),
                    };
                    self.derive(signs, &mut queue, &mut log, step)?;
                }
            }
        }
        Ok(())
    }

    /// Every already known sign, as seed steps, so a fresh propagation
    /// reaches the fixed point of a hand-built state.
    pub fn known_as_seeds(signs: &Signs) -> Vec<RawStep> {
        signs
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                s.map(|sign| RawStep {
                    idx: i as u32,
                    sign,
                    reason: RawReason::Seed,
                })
            })
            .collect()
    }

    fn next_unknown(&self, signs: &Signs) -> Option<usize> {
        (1..self.branch_len).find(|&i| signs[i].is_none())
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct SearchParams {
    pub stop_at: usize,
    pub max_nodes: usize,
    pub split_depth: usize,
    pub workers: usize,
    pub logging: bool,
}

#[derive(Default)]
struct Collector {
    cones: Vec<Signs>,
    nodes: usize,
    budget_hit: bool,
}

pub(crate) struct SearchOutput {
    /// Complete cones (restricted to the branching prefix), in tree order.
    pub cones: Vec<Signs>,
    pub nodes: usize,
    pub budget_hit: bool,
    /// The closed derivation tree, when every branch ended in a contradiction
    /// and logging was on.
    pub tree: Option<RawNode>,
}

impl Engine {
    /// Assigns a decision and propagates; the decision itself is implied by
    /// the branch and so is not logged.
    fn decide(&self, signs: &Signs, idx: usize, sign: Sign, logging: bool) -> (Signs, Vec<RawStep>, Result<(), RawConflict>) {
        let mut state = signs.clone();
        let mut log = Vec::new();
        let decision = RawStep {
            idx: idx as u32,
            sign,
            reason: RawReason::Seed,
        };
        let outcome = self.propagate(&mut state, &[decision], logging.then_some(&mut log));
        if logging {
            log.remove(0);
        }
        (state, log, outcome)
    }

    /// Solves the subtree below an already propagated state.
    fn dfs(&self, signs: Signs, steps: Vec<RawStep>, params: &SearchParams, acc: &mut Collector) -> Option<RawNode> {
        acc.nodes += 1;
        let Some(idx) = self.next_unknown(&signs) else {
            acc.cones.push(signs[..self.branch_len].to_vec());
            return None;
        };
        let mut children = Vec::with_capacity(2);
        for sign in [Sign::Pos, Sign::Neg] {
            if acc.cones.len() >= params.stop_at {
                return None;
            }
            if acc.nodes >= params.max_nodes {
                acc.budget_hit = true;
                return None;
            }
            let (state, log, outcome) = self.decide(&signs, idx, sign, params.logging);
            children.push(match outcome {
                Err(conflict) => {
                    acc.nodes += 1;
                    params.logging.then(|| RawNode {
                        steps: log,
                        outcome: RawOutcome::Conflict(conflict),
                    })
                }
                Ok(()) => self.dfs(state, log, params, acc),
            });
        }
        let neg = children.pop().flatten()?;
        let pos = children.pop().flatten()?;
        params.logging.then(|| RawNode {
            steps,
            outcome: RawOutcome::Branch(idx as u32, Box::new(pos), Box::new(neg)),
        })
    }

    /// Expands the tree to `split_depth`, leaving `Pending` placeholders for
    /// the subtrees recorded in `frontier`.
    fn split(
        &self,
        signs: Signs,
        steps: Vec<RawStep>,
        depth: usize,
        params: &SearchParams,
        frontier: &mut Vec<(Signs, Vec<RawStep>)>,
    ) -> RawNode {
        let idx = match self.next_unknown(&signs) {
            Some(idx) if depth < params.split_depth => idx,
            _ => {
                frontier.push((signs, steps));
                return RawNode {
                    steps: Vec::new(),
                    outcome: RawOutcome::Pending(frontier.len() - 1),
                };
            }
        };
        let mut children = Vec::with_capacity(2);
        for sign in [Sign::Pos, Sign::Neg] {
            let (state, log, outcome) = self.decide(&signs, idx, sign, params.logging);
            children.push(match outcome {
                Err(conflict) => RawNode {
                    steps: log,
                    outcome: RawOutcome::Conflict(conflict),
                },
                Ok(()) => self.split(state, log, depth + 1, params, frontier),
            });
        }
        let neg = children.pop().expect("two children");
        let pos = children.pop().expect("two children");
        RawNode {
            steps,
            outcome: RawOutcome::Branch(idx as u32, Box::new(pos), Box::new(neg)),
        }
    }

    /// Searches all completions of `root` extended by `seeds`.
    pub fn search(&self, root: Signs, seeds: &[RawStep], params: &SearchParams) -> SearchOutput {
        let mut signs = root;
        let mut steps = Vec::new();
        if let Err(conflict) = self.propagate(&mut signs, seeds, params.logging.then_some(&mut steps)) {
            return SearchOutput {
                cones: Vec::new(),
                nodes: 1,
                budget_hit: false,
                tree: params.logging.then(|| RawNode {
                    steps,
                    outcome: RawOutcome::Conflict(conflict),
                }),
            };
        }
        let mut frontier = Vec::new();
        let skeleton = self.split(signs, steps, 0, params, &mut frontier);
        let solve = |(signs, steps): (Signs, Vec<RawStep>)| {
            let mut acc = Collector::default();
            let node = self.dfs(signs, steps, params, &mut acc);
            (node, acc)
        };
        let results: Vec<(Option<RawNode>, Collector)> = if params.workers > 1 && frontier.len() > 1 {
            match rayon::ThreadPoolBuilder::new().num_threads(params.workers).build() {
                Ok(pool) => pool.install(|| frontier.into_par_iter().map(solve).collect()),
                Err(_) => frontier.into_iter().map(solve).collect(),
            }
        } else {
            frontier.into_iter().map(solve).collect()
        };
        let mut out = SearchOutput {
            cones: Vec::new(),
            nodes: 0,
            budget_hit: false,
            tree: None,
        };
        let mut subtrees = Vec::with_capacity(results.len());
        for (node, acc) in results {
            out.cones.extend(acc.cones);
            out.nodes += acc.nodes;
            out.budget_hit |= acc.budget_hit;
            subtrees.push(node);
        }
        if params.logging && out.cones.is_empty() && !out.budget_hit {
            out.tree = fill(skeleton, &mut subtrees);
        }
        out
    }
}

fn fill(node: RawNode, subtrees: &mut [Option<RawNode>]) -> Option<RawNode> {
    match node.outcome {
        RawOutcome::Pending(id) => subtrees[id].take(),
        RawOutcome::Conflict(_) => Some(node),
        RawOutcome::Branch(idx, pos, neg) => {
            let pos = fill(*pos, subtrees)?;
            let neg = fill(*neg, subtrees)?;
            Some(RawNode {
                steps: node.steps,
                outcome: RawOutcome::Branch(idx, Box::new(pos), Box::new(neg)),
            })
        }
    }
}
