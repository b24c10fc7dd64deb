//! Symmetric statistics of the histogram, oriented so that larger means
//! farther from uniform.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::statistic_empirical_tv;
use crate::histogram::Histogram;
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatisticKind {
    /// `½ Σ |X_i/m − 1/n|`
    EmpiricalTv,
    /// Colliding pairs over `C(m, 2)`.
    Collisions,
    /// `−#{i : X_i > 0}`.
    Distinct,
    /// `Σ ((X_i − m/n)² − X_i)/(m/n)`.
    ChiSquared,
}

impl StatisticKind {
    pub const ALL: [StatisticKind; 4] = [
        StatisticKind::EmpiricalTv,
        StatisticKind::Collisions,
        StatisticKind::Distinct,
        StatisticKind::ChiSquared,
    ];

    /// Whether the statistic is convex in the histogram, the hypothesis of the
    /// majorization-based worst-case reduction.
    pub fn is_convex(self) -> bool {
        !matches!(self, StatisticKind::Distinct)
    }

    pub fn name(self) -> &'static str {
        match self {
            StatisticKind::EmpiricalTv => "empirical-tv",
            StatisticKind::Collisions => "collisions",
            StatisticKind::Distinct => "distinct",
            StatisticKind::ChiSquared => "chi-squared",
        }
    }

    pub fn ensure_convex(self) -> Result<()> {
        if self.is_convex() {
            Ok(())
        } else {
            Err(Error::NonConvexStatistic(self.name().to_string()))
        }
    }

    pub fn evaluate<T: Scalar>(self, hist: &Histogram) -> Result<T> {
        match self {
            StatisticKind::EmpiricalTv => statistic_empirical_tv(hist, hist.n()),
            StatisticKind::Collisions => statistic_collisions(hist),
            StatisticKind::Distinct => Ok(statistic_distinct(hist)),
            StatisticKind::ChiSquared => statistic_chi_squared(hist, hist.n()),
        }
    }

    /// Same statistic on a real-valued histogram with fixed total `m`.
    pub fn evaluate_relaxed<T: Scalar>(self, counts: &[T], m: T) -> T {
        let n = T::from_index(counts.len());
        match self {
            StatisticKind::EmpiricalTv => {
                let inv_n = T::one() / n;
                counts.iter().map(|&x| (x / m - inv_n).abs()).sum::<T>() * T::lit(0.5)
            }
            StatisticKind::Collisions => {
                let pairs = m * (m - T::one());
                counts.iter().map(|&x| x * (x - T::one())).sum::<T>() / pairs
            }
            StatisticKind::Distinct => {
                -T::from_index(counts.iter().filter(|&&x| x > T::zero()).count())
            }
            StatisticKind::ChiSquared => {
                let e = m / n;
                counts.iter().map(|&x| ((x - e) * (x - e) - x) / e).sum()
            }
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    /// Accepts the kebab-case names and their upper snake-case spellings.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::ParameterOutOfRange(format!("unknown statistic {s:?}")))
    }
}

/// `Σ_i C(X_i, 2) / C(m, 2)`.
pub fn statistic_collisions<T: Scalar>(hist: &Histogram) -> Result<T> {
    let m = hist.total();
    if m < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: m });
    }
    let pairs: u64 = hist
        .counts()
        .iter()
        .map(|&x| x * x.saturating_sub(1) / 2)
        .sum();
    Ok(T::from_count(pairs) / T::from_count(m * (m - 1) / 2))
}

/// `−#{i : X_i > 0}`.
pub fn statistic_distinct<T: Scalar>(hist: &Histogram) -> T {
    -T::from_index(hist.counts().iter().filter(|&&x| x > 0).count())
}

pub fn statistic_chi_squared<T: Scalar>(hist: &Histogram, n: usize) -> Result<T> {
    hist.ensure_domain(n)?;
    let m = hist.total();
    if m == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let e = T::from_count(m) / T::from_index(n);
    Ok(hist
        .counts()
        .iter()
        .map(|&x| {
            let x = T::from_count(x);
            ((x - e) * (x - e) - x) / e
        })
        .sum())
}
