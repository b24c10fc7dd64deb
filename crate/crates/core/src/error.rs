use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight vector is empty")]
    Empty,

    #[error("weight {index} is negative or not finite ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("pseudo-distribution mass {sum} outside [{lower}, {upper}]")]
    SumOutOfRange { sum: f64, lower: f64, upper: f64 },

    #[error("weights sum to {sum}, too far from 1 to normalize")]
    NotNormalizable { sum: f64 },

    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("operation requires a true distribution, got a pseudo-distribution")]
    PseudoDistributionInput,

    #[error("histogram is inconsistent: counts sum to {sum} but m = {m}")]
    InconsistentHistogram { sum: u64, m: u64 },

    #[error("sample index {index} outside domain of size {n}")]
    SampleOutOfDomain { index: usize, n: usize },

    #[error("threshold parameter t = {t} outside [0, {m}]")]
    TOutOfRange { t: f64, m: u64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("statistic needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: u64, got: u64 },

    #[error("subset is empty")]
    EmptySubset,

    #[error("no feasible candidate at n = {n}, epsilon = {epsilon}; heavy-set sizes up to {max_feasible_k} survive")]
    NoFeasibleMember {
        n: usize,
        epsilon: f64,
        max_feasible_k: usize,
    },

    #[error("statistic {0} is not a convex symmetric function of the histogram")]
    NonConvexStatistic(String),

    #[error("Poisson truncation at {truncation} leaves tail mass {tail:e}")]
    TruncationInsufficient { truncation: u64, tail: f64 },

    #[error("entry {index} = {value} outside [0, 1]")]
    EntryOutOfRange { index: usize, value: f64 },

    #[error("instance generation failed after {attempts} attempts")]
    GenerationFailed { attempts: u64 },

    #[error(
        "calibration infeasible at cell n = {n}, epsilon = {epsilon}, delta = {delta}: {reason}"
    )]
    CalibrationInfeasible {
        n: usize,
        epsilon: f64,
        delta: f64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
