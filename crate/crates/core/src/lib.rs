//! Uniformity and identity testing of discrete distributions in the
//! high-confidence regime.
//!
//! The tester thresholds the empirical total variation distance between the
//! sample histogram and the uniform distribution. Alongside it the crate
//! provides exact expectation calculators for that statistic, a reduction from
//! identity to uniformity testing, a Monte Carlo harness that evaluates
//! worst-case error over a finite candidate family, and the lower-bound
//! constructions with their Hellinger certificates.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the common `f64` instantiation.
//!
//! ```
//! use hctest::{sample_multinomial, test_uniformity, Decision, Distribution, TesterConfig};
//!
//! let config = TesterConfig::new(100, 0.3, 0.05).unwrap();
//! let m = hctest::required_samples(&config);
//! let hist = sample_multinomial(&Distribution::uniform(100), m, 1).unwrap();
//! let verdict = test_uniformity(&hist, &config).unwrap();
//! assert!(matches!(verdict.decision, Decision::Yes | Decision::No));
//! ```

// Range checks are written as negated comparisons so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod confidence;
pub mod distance;
pub mod distribution;
pub mod error;
pub mod exact;
pub mod hardness;
pub mod histogram;
pub mod majorization;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod special;
pub mod testers;

pub use confidence::{clopper_pearson_upper, RateEstimate, CONFIDENCE};
pub use distance::{hellinger_distance, hellinger_squared, l1_distance, tv_distance};
pub use distribution::{DiscreteDistribution, DistributionKind, PseudoBounds};
pub use error::{Error, Result};
pub use exact::{
    expectation_gap_bound, hessian_entry, mu_exact, mu_t_exact, mu_uniform, statistic_empirical_tv,
    threshold, GapBound, Regime, TailBoundQuery,
};
pub use hardness::{
    composed_hellinger2, hellinger2_poisson_mixture, lb_instance, lower_bound_samples,
    tv_upper_from_hellinger, LowerBoundInstance,
};
pub use histogram::{Histogram, SamplingMode};
pub use majorization::{
    dominance_check, empirical_error_estimate, worst_case_family, worst_case_type2,
    DominanceReport, Side, WorstCaseReport,
};
pub use sampling::{sample_multinomial, sample_poissonized};
pub use scalar::Scalar;
pub use testers::{
    build_reduction_channel, required_samples, test_identity, test_uniformity, Decision,
    IdentityVerdict, ReductionChannel, StatisticKind, TesterConfig, UniformityTester, Verdict,
};

pub type Distribution = DiscreteDistribution<f64>;
pub type Distribution32 = DiscreteDistribution<f32>;
pub type Config = TesterConfig<f64>;
pub type Config32 = TesterConfig<f32>;
pub type Verdict64 = Verdict<f64>;
pub type Verdict32 = Verdict<f32>;
pub type Tester = UniformityTester<f64>;
pub type Tester32 = UniformityTester<f32>;
pub type Channel = ReductionChannel<f64>;
pub type Family = majorization::CandidateFamily<f64>;
pub type Instance = LowerBoundInstance<f64>;

/// Library version, embedded in every experiment report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
