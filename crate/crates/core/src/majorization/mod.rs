//! Majorization order, averaging, the worst-case candidate family and the
//! Monte Carlo harness that turns stochastic domination into worst-case error
//! estimates for convex symmetric statistics.

pub mod family;
pub mod harness;
pub mod order;

pub use family::{worst_case_family, CandidateFamily, FamilyMember};
pub use harness::{
    dominance_check, empirical_error_estimate, max_cdf_excess, null_calibrated_threshold,
    sample_statistic_values, worst_case_type2, DominanceReport, MemberRate, Side, WorstCaseReport,
};
pub use order::{average_on_subset, l1_to_uniform, majorizes, two_level_average};
