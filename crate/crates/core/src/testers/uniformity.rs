//! The empirical-TV uniformity tester.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{mu_uniform, statistic_empirical_tv, threshold, Regime};
use crate::histogram::Histogram;
use crate::Scalar;

/// Threshold constant from the bundled calibration run
/// (`hctest calibrate --seed 11`, default grid, 2000 trials per cell).
pub const DEFAULT_THRESHOLD_CONSTANT: f64 = 0.652;
/// Sample-size constant from the same run: the smallest passing value found,
/// 1.028, times a 1.15 safety margin, rounded up.
pub const DEFAULT_SAMPLE_CONSTANT: f64 = 1.19;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterConfig<T> {
    pub n: usize,
    pub epsilon: T,
    pub delta: T,
    pub constant_c: T,
    pub sample_constant: T,
}

impl<T: Scalar> TesterConfig<T> {
    /// Config with the calibrated default constants.
    pub fn new(n: usize, epsilon: T, delta: T) -> Result<Self> {
        Self {
            n,
            epsilon,
            delta,
            constant_c: T::lit(DEFAULT_THRESHOLD_CONSTANT),
            sample_constant: T::lit(DEFAULT_SAMPLE_CONSTANT),
        }
        .validated()
    }

    pub fn with_constants(mut self, constant_c: T, sample_constant: T) -> Result<Self> {
        self.constant_c = constant_c;
        self.sample_constant = sample_constant;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let unit = |x: T| x > T::zero() && x < T::one();
        if self.n < 1 {
            return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
        }
        if !unit(self.epsilon) {
            return Err(Error::ParameterOutOfRange(format!(
                "epsilon = {} must lie in (0, 1)",
                self.epsilon
            )));
        }
        if !unit(self.delta) {
            return Err(Error::ParameterOutOfRange(format!(
                "delta = {} must lie in (0, 1)",
                self.delta
            )));
        }
        if !(self.constant_c > T::zero() && self.sample_constant > T::zero()) {
            return Err(Error::ParameterOutOfRange(
                "constants must be positive".into(),
            ));
        }
        Ok(self)
    }
}

/// `(√(n·ln(1/δ)) + ln(1/δ))/ε²`, the shared shape of the upper and lower bounds.
pub fn sample_complexity_shape<T: Scalar>(n: usize, epsilon: T, delta: T) -> T {
    let log = delta.recip().ln();
    ((T::from_index(n) * log).sqrt() + log) / (epsilon * epsilon)
}

/// Ceiling that ignores floating-point noise just above an integer.
pub(crate) fn ceil_count<T: Scalar>(x: T) -> u64 {
    let r = x.round();
    let snapped = if (x - r).abs() <= T::lit(1e-9) * r.max(T::one()) {
        r
    } else {
        x.ceil()
    };
    snapped.max(T::zero()).to_u64().unwrap_or(u64::MAX)
}

/// `⌈sample_constant · (√(n ln(1/δ)) + ln(1/δ))/ε²⌉`, at least 6.
pub fn required_samples<T: Scalar>(config: &TesterConfig<T>) -> u64 {
    ceil_count(
        config.sample_constant * sample_complexity_shape(config.n, config.epsilon, config.delta),
    )
    .max(6)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict<T> {
    pub decision: Decision,
    pub statistic: T,
    pub threshold: T,
    pub regime: Regime,
    /// Set when `m` is below [`required_samples`]; the verdict is still computed.
    pub insufficient_samples: bool,
}

/// Tester specialised to one sample size, so `μ(U_n)` and the threshold are computed once.
#[derive(Clone, Copy, Debug)]
pub struct UniformityTester<T> {
    config: TesterConfig<T>,
    m: u64,
    mu_uniform: T,
    threshold: T,
    regime: Regime,
}

impl<T: Scalar> UniformityTester<T> {
    pub fn new(config: TesterConfig<T>, m: u64) -> Result<Self> {
        let config = config.validated()?;
        if m == 0 {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        let mu = mu_uniform::<T>(config.n, m);
        let t = threshold(config.n, m, config.epsilon, config.constant_c, mu)?;
        Ok(Self {
            config,
            m,
            mu_uniform: mu,
            threshold: t,
            regime: Regime::classify(config.n, m, config.epsilon),
        })
    }

    pub fn config(&self) -> &TesterConfig<T> {
        &self.config
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    pub fn mu_uniform(&self) -> T {
        self.mu_uniform
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn decide(&self, samples: &Histogram) -> Result<Verdict<T>> {
        samples.ensure_domain(self.config.n)?;
        if samples.total() != self.m {
            return Err(Error::InconsistentHistogram {
                sum: samples.total(),
                m: self.m,
            });
        }
        let s = statistic_empirical_tv::<T>(samples, self.config.n)?;
        Ok(Verdict {
            decision: if s >= self.threshold {
                Decision::No
            } else {
                Decision::Yes
            },
            statistic: s,
            threshold: self.threshold,
            regime: self.regime,
            insufficient_samples: self.m < required_samples(&self.config),
        })
    }
}

/// Runs the tester on a multinomial histogram: NO iff `S ≥ μ(U_n) + ½·C·shape`.
pub fn test_uniformity<T: Scalar>(
    samples: &Histogram,
    config: &TesterConfig<T>,
) -> Result<Verdict<T>> {
    UniformityTester::new(*config, samples.total())?.decide(samples)
}
