//! Executable combinatorics and exact symbolic algebra for bubble-tree
//! compactifications of instanton moduli spaces.
//!
//! * [`algebra`]: exact rationals, graded polynomials, Laurent series in `u`.
//! * [`tree`]: bubble trees, the stratum set 𝒯_K, contraction order, ghost ends
//!   and stratum dimension bookkeeping.
//! * [`notation`]: the bracket notations for trees and point configurations.
//! * [`fm`]: weighted configuration strata and degeneration limits of colliding
//!   point families.
//! * [`flip`]: the flip-resolution algorithm as surgery on the stratum poset.
//! * [`localization`]: S¹-equivariant fixed-point sums in exact arithmetic.
//! * [`wallcross`]: b⁺ = 1 walls, wall invariants and the wall-crossing residues.
//! * [`cli`]: the command-line front end.

pub mod algebra;
pub mod cli;
pub mod flip;
pub mod fm;
pub mod localization;
pub mod notation;
pub mod tree;
pub mod wallcross;
