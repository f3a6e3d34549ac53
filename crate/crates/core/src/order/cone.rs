use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Ball, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_positive(positive: bool) -> Sign {
        if positive {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Sign assignment (+, −, unknown) on the non-identity elements of a ball.
#[derive(Clone)]
pub struct PartialCone {
    ball: Arc<Ball>,
    signs: Vec<Option<Sign>>,
}

impl fmt::Debug for PartialCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialCone(r={}, {})", self.ball.radius(), self.signature())
    }
}

impl PartialEq for PartialCone {
    fn eq(&self, other: &Self) -> bool {
        self.ball.elements() == other.ball.elements() && self.signs == other.signs
    }
}

impl PartialCone {
    pub fn unknown(ball: Arc<Ball>) -> Self {
        let n = ball.len();
        PartialCone {
            ball,
            signs: vec![None; n],
        }
    }

    /// `signs` is indexed by ball index; entry 0 (the identity) must be `None`.
    pub fn from_signs(ball: Arc<Ball>, signs: Vec<Option<Sign>>) -> Result<Self> {
        if signs.len() != ball.len() || signs[0].is_some() {
            return Err(Error::InvalidParameter(
                "sign vector does not match the ball".into(),
            ));
        }
        Ok(PartialCone { ball, signs })
    }

    /// Parses the format produced by [`PartialCone::signature`].
    pub fn from_signature(ball: Arc<Ball>, text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() + 1 != ball.len() {
            return Err(Error::InvalidParameter(format!(
                "signature has {} symbols, ball has {} non-identity elements",
                chars.len(),
                ball.len() - 1
            )));
        }
        let mut signs = vec![None];
        for c in chars {
            signs.push(match c {
                '+' => Some(Sign::Pos),
                '-' => Some(Sign::Neg),
                '?' => None,
                other => {
                    return Err(Error::InvalidParameter(format!("unexpected sign symbol {other:?}")))
                }
            });
        }
        Ok(PartialCone { ball, signs })
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn signs(&self) -> &[Option<Sign>] {
        &self.signs
    }

    pub fn sign(&self, i: usize) -> Option<Sign> {
        self.signs[i]
    }

    pub fn set(&mut self, i: usize, s: Option<Sign>) {
        assert!(i != 0, "the identity carries no sign");
        self.signs[i] = s;
    }

    /// Sign of an element; `Err` if it lies outside the ball.
    pub fn sign_of(&self, g: &GroupElement) -> Result<Option<Sign>> {
        self.ball
            .index_of(g)
            .map(|i| self.signs[i])
            .ok_or_else(|| Error::OutsideBall(g.to_string()))
    }

    pub fn is_complete(&self) -> bool {
        self.signs.iter().skip(1).all(Option::is_some)
    }

    pub fn unknown_count(&self) -> usize {
        self.signs.iter().skip(1).filter(|s| s.is_none()).count()
    }

    /// One symbol per non-identity ball element, in ball order.
    pub fn signature(&self) -> String {
        self.signs
            .iter()
            .skip(1)
            .map(|s| s.map_or('?', Sign::symbol))
            .collect()
    }

    pub fn positives(&self) -> Vec<GroupElement> {
        (1..self.ball.len())
            .filter(|&i| self.signs[i] == Some(Sign::Pos))
            .map(|i| self.ball.element(i).clone())
            .collect()
    }

    /// Checks antisymmetry and closure on the known signs.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let b = &self.ball;
        for i in 1..b.len() {
            let j = b.inverse_index(i);
            if let (Some(s), Some(t)) = (self.signs[i], self.signs[j]) {
                if s == t {
                    return Err(format!(
                        "{} and its inverse {} both have sign {s}",
                        b.element(i),
                        b.element(j)
                    ));
                }
            }
        }
        for i in 1..b.len() {
            let Some(s) = self.signs[i] else { continue };
            for j in 1..b.len() {
                if self.signs[j] != Some(s) {
                    continue;
                }
                if let Some(k) = b.product_index(i, j) {
                    if k == 0 || self.signs[k] == Some(s.flip()) {
                        return Err(format!(
                            "{} and {} have sign {s} but their product does not",
                            b.element(i),
                            b.element(j)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The cone of the translated order: sign(g) becomes sign(γ g γ⁻¹),
    /// unknown where the conjugate leaves the ball.
    pub fn translate(&self, gamma: &GroupElement) -> Result<PartialCone> {
        let group = self.ball.group();
        group.check(gamma)?;
        let signs = (0..self.ball.len())
            .map(|i| {
                if i == 0 {
                    return None;
                }
                let c = group.conjugate(gamma, self.ball.element(i));
                self.ball.index_of(&c).and_then(|k| self.signs[k])
            })
            .collect();
        Ok(PartialCone {
            ball: self.ball.clone(),
            signs,
        })
    }

    /// Restriction to a smaller ball whose elements form a prefix of this one.
    pub fn restrict(&self, smaller: Arc<Ball>) -> Result<PartialCone> {
        let signs = smaller
            .elements()
            .iter()
            .map(|g| self.sign_of(g))
            .collect::<Result<Vec<_>>>()?;
        PartialCone::from_signs(smaller, signs)
    }
}
