//! Discrete (pseudo-)distributions over the domain `[n] = {0, …, n-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

/// Distance from 1 within which a weight vector is renormalized to a true distribution.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionKind {
    Distribution,
    PseudoDistribution,
}

/// Admissible total mass `[1/c₁, c₂]` for pseudo-distributions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoBounds {
    pub c1: f64,
    pub c2: f64,
}

impl Default for PseudoBounds {
    fn default() -> Self {
        Self { c1: 2.0, c2: 2.0 }
    }
}

/// A nonnegative weight vector. True distributions sum to one; pseudo-distributions
/// carry total mass within [`PseudoBounds`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "DistributionRecord<T>",
    bound(deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct DiscreteDistribution<T> {
    kind: DistributionKind,
    weights: Vec<T>,
}

#[derive(Deserialize)]
struct DistributionRecord<T> {
    kind: DistributionKind,
    weights: Vec<T>,
}

impl<T: Scalar> TryFrom<DistributionRecord<T>> for DiscreteDistribution<T> {
    type Error = Error;

    fn try_from(r: DistributionRecord<T>) -> Result<Self> {
        Self::validate(r.weights, r.kind, PseudoBounds::default())
    }
}

impl<T: Scalar> DiscreteDistribution<T> {
    pub fn validate(weights: Vec<T>, kind: DistributionKind, bounds: PseudoBounds) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        for (index, &w) in weights.iter().enumerate() {
            if !(w >= T::zero()) || !w.is_finite() {
                return Err(Error::NegativeWeight {
                    index,
                    value: w.as_f64(),
                });
            }
        }
        let sum: T = weights.iter().copied().sum();
        match kind {
            DistributionKind::Distribution => {
                if (sum - T::one()).abs() > T::lit(NORMALIZATION_TOLERANCE) {
                    return Err(Error::NotNormalizable { sum: sum.as_f64() });
                }
                let weights = if sum == T::one() {
                    weights
                } else {
                    weights.into_iter().map(|w| w / sum).collect()
                };
                Ok(Self { kind, weights })
            }
            DistributionKind::PseudoDistribution => {
                let lower = 1.0 / bounds.c1;
                let s = sum.as_f64();
                if s < lower || s > bounds.c2 {
                    return Err(Error::SumOutOfRange {
                        sum: s,
                        lower,
                        upper: bounds.c2,
                    });
                }
                Ok(Self { kind, weights })
            }
        }
    }

    pub fn new(weights: Vec<T>) -> Result<Self> {
        Self::validate(
            weights,
            DistributionKind::Distribution,
            PseudoBounds::default(),
        )
    }

    pub fn pseudo(weights: Vec<T>) -> Result<Self> {
        Self::validate(
            weights,
            DistributionKind::PseudoDistribution,
            PseudoBounds::default(),
        )
    }

    /// Scales arbitrary nonnegative weights to sum to one.
    pub fn from_unnormalized(weights: Vec<T>) -> Result<Self> {
        let sum: T = weights.iter().copied().sum();
        if !(sum > T::zero()) {
            return Err(Error::NotNormalizable { sum: sum.as_f64() });
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    /// `U_n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution needs n >= 1");
        Self {
            kind: DistributionKind::Distribution,
            weights: vec![T::one() / T::from_index(n); n],
        }
    }

    /// Point mass on `index`.
    pub fn point_mass(n: usize, index: usize) -> Self {
        let mut weights = vec![T::zero(); n];
        weights[index] = T::one();
        Self {
            kind: DistributionKind::Distribution,
            weights,
        }
    }

    /// Wraps weights already known to satisfy the invariants of `kind`.
    pub(crate) fn from_parts_unchecked(weights: Vec<T>, kind: DistributionKind) -> Self {
        Self { kind, weights }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<T> {
        self.weights
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn is_true_distribution(&self) -> bool {
        self.kind == DistributionKind::Distribution
    }

    pub fn total_mass(&self) -> T {
        self.weights.iter().copied().sum()
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    pub fn ensure_true(&self) -> Result<()> {
        if self.is_true_distribution() {
            Ok(())
        } else {
            Err(Error::PseudoDistributionInput)
        }
    }

    pub fn ensure_same_domain(&self, other: &Self) -> Result<()> {
        if self.n() == other.n() {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                left: self.n(),
                right: other.n(),
            })
        }
    }

    /// Weights sorted non-increasingly.
    pub fn sorted_desc(&self) -> Vec<T> {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| b.partial_cmp(a).expect("weights are finite"));
        w
    }

    pub fn to_f64(&self) -> DiscreteDistribution<f64> {
        DiscreteDistribution {
            kind: self.kind,
            weights: self.weights.iter().map(|w| w.as_f64()).collect(),
        }
    }
}
