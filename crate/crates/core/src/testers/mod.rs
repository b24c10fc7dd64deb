//! Uniformity and identity testers and the baseline statistics.

pub mod reduction;
pub mod statistic;
pub mod uniformity;

pub use reduction::{
    build_reduction_channel, identity_required_samples, identity_target_config, test_identity,
    test_identity_with, IdentityVerdict, ReductionChannel,
};
pub use statistic::{
    statistic_chi_squared, statistic_collisions, statistic_distinct, StatisticKind,
};
pub use uniformity::{
    required_samples, sample_complexity_shape, test_uniformity, Decision, TesterConfig,
    UniformityTester, Verdict, DEFAULT_SAMPLE_CONSTANT, DEFAULT_THRESHOLD_CONSTANT,
};
