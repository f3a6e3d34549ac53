//! Left-invariant orders represented by positive cones.
//!
//! An [`OrderOracle`] decides positivity of arbitrary elements. Comparison
//! uses left invariance: a ≺ b iff a⁻¹b is positive. Right translation by γ
//! acts on the cone by conjugation, so a translated oracle just carries an
//! accumulated conjugator.

mod cone;
pub mod magnus;
mod zn;

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{free_reduce_push, Ball, Group, GroupElement, GroupSpec, Letter};

pub use cone::{PartialCone, Sign};
pub use zn::ZnOrder;

/// Serializable description of a library order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case")]
pub enum OrderDescriptor {
    LexZn {
        #[serde(default)]
        priority: Vec<usize>,
        #[serde(default)]
        flips: Vec<bool>,
    },
    FunctionalLexZn {
        functional: Vec<i64>,
    },
    /// Magnus order; `degree: None` truncates at the length of each query.
    MagnusFree {
        #[serde(default)]
        degree: Option<usize>,
    },
    /// Klein bottle order: the sign of the b-exponent decides, then the
    /// sign of the a-exponent.
    KleinLex {
        #[serde(default = "yes")]
        b_positive: bool,
        #[serde(default = "yes")]
        a_positive: bool,
    },
    /// Lexicographic extension on F ⋉ Zⁿ: the quotient order on F decides
    /// unless the matrix part is trivial, then the fiber order does.
    LexSemidirect {
        quotient: Box<OrderDescriptor>,
        fiber: ZnOrder,
    },
    /// Finite cone on ball(radius), given by its signature.
    PartialCone {
        radius: usize,
        signs: String,
    },
}

fn yes() -> bool {
    true
}

#[derive(Clone)]
enum Base {
    Zn(ZnOrder),
    Magnus { degree: Option<usize> },
    Klein { b_positive: bool, a_positive: bool },
    LexSemidirect { quotient_degree: Option<usize>, fiber: ZnOrder },
    Partial(Arc<PartialCone>),
}

/// A total left-invariant order, given by a pure positivity predicate.
#[derive(Clone)]
pub struct OrderOracle {
    group: Group,
    base: Base,
    conjugator: GroupElement,
    reversed: bool,
}

impl std::fmt::Debug for OrderOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrderOracle")
            .field("descriptor", &self.descriptor())
            .field("conjugator", &self.conjugator)
            .field("reversed", &self.reversed)
            .finish()
    }
}

impl OrderOracle {
    fn with_base(group: &Group, base: Base) -> Self {
        OrderOracle {
            group: group.clone(),
            conjugator: group.identity(),
            base,
            reversed: false,
        }
    }

    fn zn_rank(group: &Group) -> Result<usize> {
        match group.spec() {
            GroupSpec::FreeAbelian { rank } => Ok(*rank),
            _ => Err(Error::OracleUndefined(
                "Zⁿ orders need the free abelian backend".into(),
            )),
        }
    }

    pub fn lex_order_zn(group: &Group, priority: Vec<usize>, flips: Vec<bool>) -> Result<Self> {
        let rank = Self::zn_rank(group)?;
        let order = ZnOrder::LexZn { priority, flips }.normalized(rank)?;
        Ok(Self::with_base(group, Base::Zn(order)))
    }

    /// Standard lexicographic order, first coordinate dominant.
    pub fn standard_lex(group: &Group) -> Result<Self> {
        Self::lex_order_zn(group, vec![], vec![])
    }

    pub fn functional_lex_order_zn(group: &Group, functional: Vec<i64>) -> Result<Self> {
        let rank = Self::zn_rank(group)?;
        let order = ZnOrder::FunctionalLexZn { functional }.normalized(rank)?;
        Ok(Self::with_base(group, Base::Zn(order)))
    }

    /// Magnus order on a free group, or on a matrix group whose elements
    /// decode to reduced words over its generators.
    pub fn magnus_order_free(group: &Group, degree: Option<usize>) -> Result<Self> {
        match group.spec() {
            GroupSpec::FreeGroup { .. } | GroupSpec::MatrixGroup { .. } => {}
            _ => {
                return Err(Error::OracleUndefined(
                    "the Magnus order needs a free group or a free matrix group".into(),
                ))
            }
        }
        if degree == Some(0) {
            return Err(Error::InvalidParameter("Magnus truncation degree must be positive".into()));
        }
        Ok(Self::with_base(group, Base::Magnus { degree }))
    }

    pub fn klein_order(group: &Group, b_positive: bool, a_positive: bool) -> Result<Self> {
        if *group.spec() != GroupSpec::KleinBottle {
            return Err(Error::OracleUndefined("Klein order on a non-Klein backend".into()));
        }
        Ok(Self::with_base(group, Base::Klein { b_positive, a_positive }))
    }

    /// Magnus order on the matrix quotient, extended by `fiber` on Zⁿ.
    pub fn lex_extension_semidirect(group: &Group, quotient_degree: Option<usize>, fiber: ZnOrder) -> Result<Self> {
        let GroupSpec::Semidirect { .. } = group.spec() else {
            return Err(Error::OracleUndefined(
                "lexicographic extension needs the semidirect backend".into(),
            ));
        };
        let rank = group.fiber_rank().unwrap_or(0);
        let fiber = fiber.normalized(rank)?;
        Ok(Self::with_base(group, Base::LexSemidirect { quotient_degree, fiber }))
    }

    /// Oracle backed by a finite cone; queries outside its ball, or on
    /// unknown signs, are errors.
    pub fn cone_oracle_from_partial(cone: PartialCone) -> Self {
        let group = cone.ball().group().clone();
        Self::with_base(&group, Base::Partial(Arc::new(cone)))
    }

    pub fn from_descriptor(group: &Group, d: &OrderDescriptor) -> Result<Self> {
        match d {
            OrderDescriptor::LexZn { priority, flips } => {
                Self::lex_order_zn(group, priority.clone(), flips.clone())
            }
            OrderDescriptor::FunctionalLexZn { functional } => {
                Self::functional_lex_order_zn(group, functional.clone())
            }
            OrderDescriptor::MagnusFree { degree } => Self::magnus_order_free(group, *degree),
            OrderDescriptor::KleinLex { b_positive, a_positive } => {
                Self::klein_order(group, *b_positive, *a_positive)
            }
            OrderDescriptor::LexSemidirect { quotient, fiber } => match quotient.as_ref() {
                OrderDescriptor::MagnusFree { degree } => {
                    Self::lex_extension_semidirect(group, *degree, fiber.clone())
                }
                other => Err(Error::Unsupported(format!(
                    "quotient order {other:?}; only magnus_free is available"
                ))),
            },
            OrderDescriptor::PartialCone { radius, signs } => {
                let ball = Arc::new(group.ball(*radius)?);
                let cone = PartialCone::from_signature(ball, signs)?;
                cone.check_axioms().map_err(Error::OracleDefect)?;
                Ok(Self::cone_oracle_from_partial(cone))
            }
        }
    }

    /// Descriptor of the underlying library order, before translation or reversal.
    pub fn descriptor(&self) -> OrderDescriptor {
        match &self.base {
            Base::Zn(ZnOrder::LexZn { priority, flips }) => OrderDescriptor::LexZn {
                priority: priority.clone(),
                flips: flips.clone(),
            },
            Base::Zn(ZnOrder::FunctionalLexZn { functional }) => OrderDescriptor::FunctionalLexZn {
                functional: functional.clone(),
            },
            Base::Magnus { degree } => OrderDescriptor::MagnusFree { degree: *degree },
            Base::Klein { b_positive, a_positive } => OrderDescriptor::KleinLex {
                b_positive: *b_positive,
                a_positive: *a_positive,
            },
            Base::LexSemidirect { quotient_degree, fiber } => OrderDescriptor::LexSemidirect {
                quotient: Box::new(OrderDescriptor::MagnusFree { degree: *quotient_degree }),
                fiber: fiber.clone(),
            },
            Base::Partial(cone) => OrderDescriptor::PartialCone {
                radius: cone.ball().radius(),
                signs: cone.signature(),
            },
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// Accumulated conjugator c: this order's cone is c⁻¹ P c for the base cone P.
    pub fn conjugator(&self) -> &GroupElement {
        &self.conjugator
    }

    /// The Zⁿ order this oracle induces on the fiber, when it is a library
    /// Zⁿ order and no translation has been applied.
    pub fn zn_fiber_order(&self) -> Option<&ZnOrder> {
        match &self.base {
            Base::Zn(o) | Base::LexSemidirect { fiber: o, .. } => Some(o),
            _ => None,
        }
    }

    fn base_positive(&self, g: &GroupElement) -> Result<bool> {
        let group = &self.group;
        match (&self.base, g) {
            (Base::Zn(order), GroupElement::Vector(_)) => {
                let v = group.fiber_coordinates(g).expect("vector element");
                Ok(order.positive(&v))
            }
            (Base::Magnus { degree }, GroupElement::Word(w)) => {
                let rank = group.generator_count();
                Ok(magnus::magnus_sign(w, rank, *degree)? == Some(Sign::Pos))
            }
            (Base::Magnus { degree }, GroupElement::Matrix(m)) => {
                let w = group.decode_matrix_word(m)?;
                let rank = group.generator_count();
                Ok(magnus::magnus_sign(&w, rank, *degree)? == Some(Sign::Pos))
            }
            (Base::Klein { b_positive, a_positive }, GroupElement::Klein { a, b }) => Ok(if *b != 0 {
                (*b > 0) == *b_positive
            } else {
                (*a > 0) == *a_positive
            }),
            (Base::LexSemidirect { quotient_degree, fiber }, GroupElement::Affine { matrix, vector }) => {
                if matrix.is_identity() {
                    Ok(fiber.positive(vector))
                } else {
                    let w = group.decode_matrix_word(matrix)?;
                    let rank = group.matrix_generator_count().unwrap_or(0);
                    Ok(magnus::magnus_sign(&w, rank, *quotient_degree)? == Some(Sign::Pos))
                }
            }
            (Base::Partial(cone), _) => match cone.sign_of(g)? {
                Some(s) => Ok(s == Sign::Pos),
                None => Err(Error::OracleUndefined(format!("sign of {g} is unknown in the cone"))),
            },
            _ => Err(Error::BackendMismatch {
                backend: "order oracle",
                element: g.to_string(),
            }),
        }
    }

    /// Positivity of `g` (false for the identity).
    pub fn positive(&self, g: &GroupElement) -> Result<bool> {
        self.group.check(g)?;
        if self.group.is_identity(g) {
            return Ok(false);
        }
        let h = self.group.conjugate(&self.conjugator, g);
        Ok(self.base_positive(&h)? != self.reversed)
    }

    /// Sign of a non-identity element; `None` for the identity.
    pub fn sign(&self, g: &GroupElement) -> Result<Option<Sign>> {
        if self.group.is_identity(g) {
            return Ok(None);
        }
        Ok(Some(Sign::from_positive(self.positive(g)?)))
    }

    /// Less iff a ≺ b, i.e. a⁻¹b is positive.
    pub fn compare(&self, a: &GroupElement, b: &GroupElement) -> Result<Ordering> {
        self.group.check(a)?;
        self.group.check(b)?;
        if a == b {
            return Ok(Ordering::Equal);
        }
        let q = self.group.mul(&self.group.inv(a), b);
        Ok(if self.positive(&q)? {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }

    /// Positivity of γ⁻ⁿqγⁿ for n = 1..=N.
    ///
    /// On matrix-based backends the conjugates are decided from reduced
    /// words built symbolically from the words of γ and q, instead of
    /// decoding every conjugate matrix.
    pub fn power_conjugate_signs(&self, gamma: &GroupElement, q: &GroupElement, n_max: u32) -> Vec<Result<bool>> {
        let fallback = || {
            let gi = self.group.inv(gamma);
            let mut p = self.group.identity();
            (0..n_max)
                .map(|_| {
                    p = self.group.mul(&p, &gi);
                    self.positive(&self.group.conjugate(&p, q))
                })
                .collect()
        };
        let degree = match &self.base {
            Base::Magnus { degree } if matches!(self.group.spec(), GroupSpec::MatrixGroup { .. }) => *degree,
            Base::LexSemidirect { quotient_degree, .. } => *quotient_degree,
            _ => return fallback(),
        };
        if self.group.check(gamma).and(self.group.check(q)).is_err() {
            return fallback();
        }
        let group = &self.group;
        let c = &self.conjugator;
        let g = group.conjugate(c, gamma);
        let h = group.conjugate(c, q);
        let (Some(gm), Some(hm)) = (group.matrix_part(&g), group.matrix_part(&h)) else {
            return fallback();
        };
        if hm.is_identity() {
            // the fiber is normal; only the vector changes
            return fallback();
        }
        let (wg, wh) = match (group.decode_matrix_word(gm), group.decode_matrix_word(hm)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return vec![Err(e); n_max as usize],
        };
        let rank = group.matrix_generator_count().unwrap_or(0);
        let inv_g: Vec<Letter> = wg.iter().rev().map(|l| -l).collect();
        (1..=n_max as usize)
            .map(|n| {
                let mut w = Vec::new();
                for _ in 0..n {
                    inv_g.iter().for_each(|&l| free_reduce_push(&mut w, l));
                }
                wh.iter().for_each(|&l| free_reduce_push(&mut w, l));
                for _ in 0..n {
                    wg.iter().for_each(|&l| free_reduce_push(&mut w, l));
                }
                Ok((magnus::magnus_sign(&w, rank, degree)? == Some(Sign::Pos)) != self.reversed)
            })
            .collect()
    }

    /// The order ≺_γ with a ≺_γ b ⟺ aγ⁻¹ ≺ bγ⁻¹; its cone is γ⁻¹Pγ.
    pub fn translate(&self, gamma: &GroupElement) -> Result<OrderOracle> {
        self.group.check(gamma)?;
        let mut out = self.clone();
        out.conjugator = self.group.mul(&self.conjugator, gamma);
        Ok(out)
    }

    pub fn reverse(&self) -> OrderOracle {
        let mut out = self.clone();
        out.reversed = !out.reversed;
        out
    }

    /// Whether the order lies in the basic open set of the chain.
    pub fn in_basic_open(&self, chain: &OrderedChain) -> Result<bool> {
        for pair in chain.elements().windows(2) {
            if self.compare(&pair[0], &pair[1])? != Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The complete cone this order induces on a ball.
    pub fn restrict_to_ball(&self, ball: &Arc<Ball>) -> Result<PartialCone> {
        let mut signs = vec![None; ball.len()];
        for (i, g) in ball.elements().iter().enumerate().skip(1) {
            signs[i] = Some(Sign::from_positive(self.positive(g)?));
        }
        for i in 1..ball.len() {
            let j = ball.inverse_index(i);
            if j == i || signs[i] == signs[j] {
                return Err(Error::OracleDefect(format!(
                    "trichotomy fails for {} and its inverse",
                    ball.element(i)
                )));
            }
        }
        let cone = PartialCone::from_signs(ball.clone(), signs)?;
        cone.check_axioms().map_err(Error::OracleDefect)?;
        Ok(cone)
    }

    /// Sorts elements increasingly.
    pub fn sort(&self, elements: &mut [GroupElement]) -> Result<()> {
        let mut err = None;
        elements.sort_by(|a, b| match self.compare(a, b) {
            Ok(o) => o,
            Err(e) => {
                err.get_or_insert(e);
                Ordering::Equal
            }
        });
        err.map_or(Ok(()), Err)
    }
}

/// Distinct elements λ₁, …, λ_r (r ≥ 2) naming the basic open set
/// {≺ : λ₁ ≺ ⋯ ≺ λ_r}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderedChain(Vec<GroupElement>);

impl OrderedChain {
    pub fn new(elements: Vec<GroupElement>) -> Result<Self> {
        if elements.len() < 2 {
            return Err(Error::InvalidChain(format!(
                "a chain needs at least two elements, got {}",
                elements.len()
            )));
        }
        for (i, a) in elements.iter().enumerate() {
            if elements[i + 1..].contains(a) {
                return Err(Error::InvalidChain(format!("{a} occurs twice")));
            }
        }
        Ok(OrderedChain(elements))
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// λ₁γ, …, λ_rγ
    pub fn right_multiply(&self, group: &Group, gamma: &GroupElement) -> OrderedChain {
        OrderedChain(self.0.iter().map(|l| group.mul(l, gamma)).collect())
    }

    /// The consecutive quotients λᵢ⁻¹λᵢ₊₁ that must be positive.
    pub fn quotients(&self, group: &Group) -> Vec<GroupElement> {
        self.0
            .windows(2)
            .map(|p| group.mul(&group.inv(&p[0]), &p[1]))
            .collect()
    }
}
