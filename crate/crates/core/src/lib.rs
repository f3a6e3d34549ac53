//! Computing with left-invariant orders on finitely generated groups.
//!
//! Orders are represented by their positive cones. The crate provides
//! concrete groups with solvable word problem ([`group`]), total order
//! oracles and finite partial cones ([`order`]), finite-scale exploration
//! of the space of orders by constraint propagation ([`space`]), the
//! dynamical conditions (Conradian, recurrent) together with integer-exact
//! non-recurrence certificates ([`dynamics`]), convex subgroups
//! ([`convexity`]) and indicability through Smith normal form
//! ([`indicability`]).
//!
//! Everything is exact: group arithmetic uses arbitrary precision integers
//! where entries can grow, and no verdict ever depends on floating point.

pub mod convexity;
pub mod dynamics;
pub mod error;
pub mod group;
pub mod indicability;
pub mod matrix;
pub mod order;
pub mod space;

pub use error::{Error, Result};
pub use group::{Ball, Group, GroupElement, GroupSpec};
pub use matrix::IntMatrix;
pub use order::{OrderOracle, OrderedChain, PartialCone, Sign};
