//! Route planning for persistent monitoring with a distinct depot.
//!
//! A UAV must keep visiting `n` targets forever, returning to a depot for
//! recharging after exactly `k` visits per cycle. The objective is the
//! *revisit time*: the largest time that elapses between two successive
//! visits to any target while the `k`-visit walk is repeated. This crate
//! provides:
//!
//! - problem instances over a symmetric travel-time matrix ([`instance`]),
//! - the walk algebra: validation, permutation, concatenation, shortcutting
//!   and insertion ([`walk`]),
//! - evaluation of travel and revisit times ([`evaluator`]),
//! - exact optimization of the three small seed walks from which everything
//!   else derives ([`small_walk`]),
//! - lower bounds on the optimal revisit time and the asymptotic-shape
//!   classifier ([`bounds`]),
//! - construction of feasible `k`-visit walks for large `k` by block
//!   concatenation of seed walks ([`builder`]),
//! - budgeted exact search over all `k`-visit walks ([`exact`]),
//! - brute-force reference implementations used by the test suite
//!   ([`oracle`]).

pub mod bounds;
pub mod builder;
pub mod evaluator;
pub mod exact;
pub mod instance;
pub mod numeric;
pub mod oracle;
pub mod small_walk;
pub mod walk;

pub use instance::Instance;
pub use walk::{TargetId, Visit, Walk, WalkKind};
