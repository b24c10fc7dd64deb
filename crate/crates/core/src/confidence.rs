//! Exact binomial confidence bounds for Monte Carlo error rates.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

/// Confidence level of every reported upper bound: `1 − 10⁻³`.
pub const CONFIDENCE: f64 = 1.0 - 1e-3;

/// One-sided Clopper–Pearson upper bound on a binomial rate after observing
/// `successes` out of `trials`, at confidence `confidence`.
pub fn clopper_pearson_upper(successes: u64, trials: u64, confidence: f64) -> f64 {
    assert!(trials > 0 && successes <= trials);
    if successes == trials {
        return 1.0;
    }
    let beta =
        Beta::new(successes as f64 + 1.0, (trials - successes) as f64).expect("positive shapes");
    beta.inverse_cdf(confidence).clamp(0.0, 1.0)
}

/// Monte Carlo estimate of an event probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub events: u64,
    pub trials: u64,
    pub rate: f64,
    pub ci_upper: f64,
}

impl RateEstimate {
    pub fn new(events: u64, trials: u64) -> Self {
        Self {
            events,
            trials,
            rate: events as f64 / trials as f64,
            ci_upper: clopper_pearson_upper(events, trials, CONFIDENCE),
        }
    }
}
