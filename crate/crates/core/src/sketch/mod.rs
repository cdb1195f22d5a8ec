//! Recovery of a low-rank matrix `F` from forward sketches `FX` alone.
//!
//! Without adjoint queries the sketch only pins `F` down to the ambiguity
//! set of rank-`k` matrices `A` with `AX = FX` whose left and right singular
//! subspaces are `ε`-close. This module measures near-symmetry, bounds the
//! diameter of that set from both sides, builds a pair of members that
//! realizes the lower bound, and checks membership.

mod bounds;
mod instance;
mod membership;
mod symmetry;
mod toeplitz;
mod witness;

pub use bounds::{diameter_lower_bound, diameter_upper_bound, BoundReport};
pub use instance::SketchInstance;
pub use membership::{membership_check, MembershipReport, MEMBERSHIP_TOL};
pub use symmetry::{align_rotation, near_symmetry_delta, RANK_TOL};
pub use toeplitz::toeplitz_from_two_queries;
pub use witness::{construct_extremal_pair, ExtremalPair};
