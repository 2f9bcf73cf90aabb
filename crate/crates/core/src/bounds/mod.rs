//! Capacity bound evaluators and the capacity-chain check.

pub mod accessible;
pub mod capacity;
pub mod lower;
pub mod report;
pub mod upper;

pub use accessible::{
    accessible_information, badziag_bound, bell_states, product_basis, projective_povm,
    AccessibleInformation, BadziagBound, Ensemble,
};
pub use capacity::{q_capacity, CapacityOptimizerConfig, CapacityResult};
pub use lower::{
    entropy_triple, lower_bound_aggregate, lower_bound_basic, lower_bound_timeshare,
    timeshare_single_state, AggregateLowerBound, LowerBoundBranch, LowerBoundCandidate,
};
pub use report::{
    chain_check, chain_check_with, channel_digest, digest_parts, BoundEntry, BoundKind, BoundReport, BoundUnit,
    CapacityLevel, ChainViolation,
};
pub use upper::{
    optimize_thm5_gamma, upper_bound_cor6, upper_bound_thm4, upper_bound_thm5, BoundParams,
    ConditionalBound, Thm5Bound, Thm5Optimum, CONDITIONAL_TAG,
};
