use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Exactly `m` i.i.d. draws; counts sum to `m`.
    Multinomial,
    /// Independent Poisson counts with means `m·w_i`; `m` is the nominal rate.
    Poissonized,
}

/// Occurrence counts `X_1, …, X_n` of each domain element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HistogramRecord")]
pub struct Histogram {
    counts: Vec<u64>,
    m: u64,
    mode: SamplingMode,
}

#[derive(Deserialize)]
struct HistogramRecord {
    counts: Vec<u64>,
    m: Option<u64>,
    mode: Option<SamplingMode>,
}

impl TryFrom<HistogramRecord> for Histogram {
    type Error = Error;

    fn try_from(r: HistogramRecord) -> Result<Self> {
        let sum = r.counts.iter().sum();
        match r.mode.unwrap_or(SamplingMode::Multinomial) {
            SamplingMode::Multinomial => Self::multinomial(r.counts, r.m.unwrap_or(sum)),
            SamplingMode::Poissonized => Self::poissonized(r.counts, r.m.unwrap_or(sum)),
        }
    }
}

impl Histogram {
    /// Counts from a fixed-size sample; `m` must equal the total.
    pub fn multinomial(counts: Vec<u64>, m: u64) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        let sum: u64 = counts.iter().sum();
        if sum != m {
            return Err(Error::InconsistentHistogram { sum, m });
        }
        Ok(Self {
            counts,
            m,
            mode: SamplingMode::Multinomial,
        })
    }

    pub fn poissonized(counts: Vec<u64>, m: u64) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self {
            counts,
            m,
            mode: SamplingMode::Poissonized,
        })
    }

    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let m = counts.iter().sum();
        Self::multinomial(counts, m)
    }

    /// Tallies a raw sample list over `[n]`.
    pub fn from_samples(samples: &[usize], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut counts = vec![0u64; n];
        for &s in samples {
            if s >= n {
                return Err(Error::SampleOutOfDomain { index: s, n });
            }
            counts[s] += 1;
        }
        Self::multinomial(counts, samples.len() as u64)
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Nominal sample size.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Realized number of samples, `Σ X_i`.
    pub fn total(&self) -> u64 {
        match self.mode {
            SamplingMode::Multinomial => self.m,
            SamplingMode::Poissonized => self.counts.iter().sum(),
        }
    }

    pub fn mode(&self) -> SamplingMode {
        self.mode
    }

    pub fn zero_count(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 0).count()
    }

    pub fn ensure_domain(&self, n: usize) -> Result<()> {
        if self.n() == n {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                left: self.n(),
                right: n,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multinomial_requires_matching_total() {
        assert!(Histogram::multinomial(vec![1, 2], 3).is_ok());
        assert_eq!(
            Histogram::multinomial(vec![1, 2], 4),
            Err(Error::InconsistentHistogram { sum: 3, m: 4 })
        );
    }

    #[test]
    fn poissonized_total_is_realized() {
        let h = Histogram::poissonized(vec![0, 3, 1], 5).unwrap();
        assert_eq!(h.m(), 5);
        assert_eq!(h.total(), 4);
    }

    #[test]
    fn tallies_samples() {
        let h = Histogram::from_samples(&[0, 2, 2, 1, 2], 4).unwrap();
        assert_eq!(h.counts(), &[1, 1, 3, 0]);
        assert_eq!(h.zero_count(), 1);
        assert!(matches!(
            Histogram::from_samples(&[5], 4),
            Err(Error::SampleOutOfDomain { index: 5, n: 4 })
        ));
    }

    #[test]
    fn json_shape() {
        let h = Histogram::from_counts(vec![2, 0, 1]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"counts":[2,0,1],"m":3,"mode":"multinomial"}"#);
        let back: Histogram = serde_json::from_str(r#"{"counts":[2,0,1]}"#).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<Histogram>(r#"{"counts":[2,0,1],"m":9}"#).is_err());
    }
}
