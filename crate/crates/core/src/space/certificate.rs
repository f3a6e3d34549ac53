use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::group::{Group, GroupElement};
use crate::order::Sign;
use crate::space::engine::{RawNode, RawOutcome, RawReason, RawStep};
use crate::group::Ball;

/// Why a sign was forced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Reason {
    /// A constraint of the problem (only at the root).
    Seed,
    /// sign(g) is the flip of sign(g⁻¹).
    Inverse { of: GroupElement },
    /// left and right carry the same sign, so their product does too.
    Product { left: GroupElement, right: GroupElement },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub element: GroupElement,
    pub sign: Sign,
    pub reason: Reason,
}

/// A derivation clashing with a known sign, or forcing a sign on the identity.
pub type Conflict = Step;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Contradiction(Conflict),
    /// Case split on the sign of `element`; each child starts from that decision.
    Branch {
        element: GroupElement,
        positive: Box<DerivationNode>,
        negative: Box<DerivationNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationNode {
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

/// Proof that no cone satisfies the seeds: every branch of the case
/// analysis derives a contradiction from the cone axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonOrderabilityCertificate {
    pub radius: usize,
    /// Elements required to be positive; empty for a left-orderability refutation.
    pub seeds: Vec<GroupElement>,
    pub root: DerivationNode,
}

impl NonOrderabilityCertificate {
    /// Number of steps, contradictions and branch points in the log.
    pub fn size(&self) -> usize {
        fn walk(n: &DerivationNode) -> usize {
            n.steps.len()
                + match &n.outcome {
                    Outcome::Contradiction(_) => 1,
                    Outcome::Branch { positive, negative, .. } => 1 + walk(positive) + walk(negative),
                }
        }
        walk(&self.root)
    }
}

fn convert_step(ball: &Ball, s: &RawStep) -> Step {
    let el = |i: u32| ball.element(i as usize).clone();
    Step {
        element: el(s.idx),
        sign: s.sign,
        reason: match s.reason {
            RawReason::Seed => Reason::Seed,
            RawReason::Inverse(i) => Reason::Inverse { of: el(i) },
            RawReason::Product(i, j) => Reason::Product { left: el(i), right: el(j) },
        },
    }
}

pub(crate) fn convert(ball: &Ball, node: &RawNode) -> DerivationNode {
    DerivationNode {
        steps: node.steps.iter().map(|s| convert_step(ball, s)).collect(),
        outcome: match &node.outcome {
            RawOutcome::Conflict(c) => Outcome::Contradiction(convert_step(ball, c)),
            RawOutcome::Branch(i, pos, neg) => Outcome::Branch {
                element: ball.element(*i as usize).clone(),
                positive: Box::new(convert(ball, pos)),
                negative: Box::new(convert(ball, neg)),
            },
            RawOutcome::Pending(_) => unreachable!("unfilled subtree in a closed derivation"),
        },
    }
}

pub(crate) fn convert_conflict(ball: &Ball, c: &RawStep) -> Conflict {
    convert_step(ball, c)
}

type Known = HashMap<GroupElement, Sign>;

/// Replays a certificate using only the group operations.
///
/// This deliberately shares no code with the search: it recomputes every
/// product and inverse and tracks signs in a plain map.
pub fn verify_certificate(group: &Group, cert: &NonOrderabilityCertificate) -> Result<(), String> {
    for s in &cert.seeds {
        group.check(s).map_err(|e| e.to_string())?;
    }
    check_node(group, cert, &cert.root, Known::new(), true)
}

fn justified(group: &Group, known: &Known, cert: &NonOrderabilityCertificate, step: &Step, root: bool) -> Result<(), String> {
    group.check(&step.element).map_err(|e| e.to_string())?;
    match &step.reason {
        Reason::Seed => {
            if !root || step.sign != Sign::Pos || !cert.seeds.contains(&step.element) {
                return Err(format!("{} is not a positive seed", step.element));
            }
        }
        Reason::Inverse { of } => {
            if known.get(of) != Some(&step.sign.flip()) {
                return Err(format!("inverse step cites {of}, whose sign is not {}", step.sign.flip()));
            }
            if group.inverse(of).map_err(|e| e.to_string())? != step.element {
                return Err(format!("{} is not the inverse of {of}", step.element));
            }
        }
        Reason::Product { left, right } => {
            if known.get(left) != Some(&step.sign) || known.get(right) != Some(&step.sign) {
                return Err(format!("product step cites {left}, {right} without sign {}", step.sign));
            }
            if group.multiply(left, right).map_err(|e| e.to_string())? != step.element {
                return Err(format!("{} is not {left}·{right}", step.element));
            }
        }
    }
    Ok(())
}

fn check_node(
    group: &Group,
    cert: &NonOrderabilityCertificate,
    node: &DerivationNode,
    mut known: Known,
    root: bool,
) -> Result<(), String> {
    for step in &node.steps {
        justified(group, &known, cert, step, root)?;
        if group.is_identity(&step.element) {
            return Err("a step signs the identity".into());
        }
        match known.insert(step.element.clone(), step.sign) {
            Some(old) if old != step.sign => {
                return Err(format!("step on {} clashes before the contradiction", step.element))
            }
            _ => {}
        }
    }
    match &node.outcome {
        Outcome::Contradiction(c) => {
            justified(group, &known, cert, c, root)?;
            if group.is_identity(&c.element) || known.get(&c.element) == Some(&c.sign.flip()) {
                Ok(())
            } else {
                Err(format!("claimed contradiction at {} does not clash", c.element))
            }
        }
        Outcome::Branch {
            element,
            positive,
            negative,
        } => {
            group.check(element).map_err(|e| e.to_string())?;
            if group.is_identity(element) {
                return Err("branch on the identity".into());
            }
            for (sign, child) in [(Sign::Pos, positive), (Sign::Neg, negative)] {
                let mut k = known.clone();
                if k.insert(element.clone(), sign) == Some(sign.flip()) {
                    return Err(format!("branch on {element} contradicts a known sign"));
                }
                check_node(group, cert, child, k, false)?;
            }
            Ok(())
        }
    }
}
