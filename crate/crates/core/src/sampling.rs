//! Multinomial and Poissonized sample generation.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::rng::{labels, substream};
use crate::Scalar;

/// Splits `m` draws over `weights` (which must sum to one) by sequential
/// conditional binomials.
pub fn multinomial_counts<R: Rng + ?Sized>(rng: &mut R, weights: &[f64], m: u64) -> Vec<u64> {
    let mut counts = vec![0u64; weights.len()];
    // Suffix sums, so zero-weight tails never receive draws through rounding.
    let mut tail: Vec<f64> = weights
        .iter()
        .rev()
        .scan(0.0, |acc, &w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    tail.reverse();
    let mut remaining = m;
    for (i, &w) in weights.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let rest = tail.get(i + 1).copied().unwrap_or(0.0);
        if rest <= 0.0 {
            counts[i] = remaining;
            break;
        }
        let p = (w / tail[i]).clamp(0.0, 1.0);
        let c = if p == 0.0 {
            0
        } else {
            Binomial::new(remaining, p)
                .expect("valid binomial")
                .sample(rng)
        };
        counts[i] = c;
        remaining -= c;
    }
    counts
}

/// Draws `m` samples from a true distribution using the supplied stream.
pub fn multinomial_with<T: Scalar, R: Rng + ?Sized>(
    p: &DiscreteDistribution<T>,
    m: u64,
    rng: &mut R,
) -> Result<Histogram> {
    p.ensure_true()?;
    let weights: Vec<f64> = p.weights().iter().map(|w| w.as_f64()).collect();
    Histogram::multinomial(multinomial_counts(rng, &weights, m), m)
}

/// Histogram of `m` i.i.d. samples from `p`; a pure function of `(p, m, seed)`.
pub fn sample_multinomial<T: Scalar>(
    p: &DiscreteDistribution<T>,
    m: u64,
    seed: u64,
) -> Result<Histogram> {
    if m == 0 {
        return Err(Error::ParameterOutOfRange("m must be at least 1".into()));
    }
    multinomial_with(p, m, &mut substream(seed, labels::MULTINOMIAL, 0))
}

pub fn poissonized_with<T: Scalar, R: Rng + ?Sized>(
    w: &DiscreteDistribution<T>,
    m: u64,
    rng: &mut R,
) -> Result<Histogram> {
    let counts = w
        .weights()
        .iter()
        .map(|&wi| {
            let lambda = m as f64 * wi.as_f64();
            if lambda > 0.0 {
                Poisson::new(lambda).expect("positive rate").sample(rng) as u64
            } else {
                0
            }
        })
        .collect();
    Histogram::poissonized(counts, m)
}

/// Independent `Poi(m·w_i)` counts per coordinate; `w` may be a pseudo-distribution.
pub fn sample_poissonized<T: Scalar>(
    w: &DiscreteDistribution<T>,
    m: u64,
    seed: u64,
) -> Result<Histogram> {
    if m == 0 {
        return Err(Error::ParameterOutOfRange("m must be at least 1".into()));
    }
    poissonized_with(w, m, &mut substream(seed, labels::POISSON, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DiscreteDistribution<f64>;

    #[test]
    fn single_element() {
        let h = sample_multinomial(&D::new(vec![1.0]).unwrap(), 7, 3).unwrap();
        assert_eq!(h.counts(), &[7]);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = D::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = sample_multinomial(&p, 1000, 42).unwrap();
        let b = sample_multinomial(&p, 1000, 42).unwrap();
        let c = sample_multinomial(&p, 1000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.counts().iter().sum::<u64>(), 1000);
    }

    #[test]
    fn rejects_pseudo_input() {
        let w = D::pseudo(vec![0.6, 0.6]).unwrap();
        assert_eq!(
            sample_multinomial(&w, 5, 0),
            Err(Error::PseudoDistributionInput)
        );
        assert!(sample_poissonized(&w, 5, 0).is_ok());
    }

    #[test]
    fn zero_weights_yield_zero_counts() {
        let p = D::new(vec![0.0, 1.0, 0.0]).unwrap();
        let h = sample_multinomial(&p, 50, 1).unwrap();
        assert_eq!(h.counts(), &[0, 50, 0]);
        let w = D::from_parts_unchecked(vec![0.0; 4], crate::DistributionKind::PseudoDistribution);
        let h = sample_poissonized(&w, 10, 1).unwrap();
        assert_eq!(h.counts(), &[0; 4]);
        assert_eq!(h.total(), 0);
    }

    #[test]
    fn fair_coin_concentrates() {
        // Bin(10^6, 1/2) has sd 500; the 0.002·m band is 4 sd.
        let h = sample_multinomial(&D::uniform(2), 1_000_000, 9).unwrap();
        let frac = h.counts()[0] as f64 / 1e6;
        assert!((frac - 0.5).abs() < 0.002, "{frac}");
    }

    #[test]
    fn poisson_means() {
        let n = 10;
        let trials = 10_000u64;
        let p = D::uniform(n);
        let mut sums = vec![0u64; n];
        let mut grand = 0u64;
        let mut grand_sq = 0f64;
        for t in 0..trials {
            let h = poissonized_with(&p, n as u64, &mut substream(5, 0, t)).unwrap();
            for (s, &c) in sums.iter_mut().zip(h.counts()) {
                *s += c;
            }
            grand += h.total();
            grand_sq += (h.total() as f64).powi(2);
        }
        let band = 3.0 / (trials as f64).sqrt();
        for s in sums {
            let mean = s as f64 / trials as f64;
            assert!((mean - 1.0).abs() <= band, "{mean}");
        }
        // Σ counts ~ Poi(m·Σw) = Poi(10): mean 10, sd of the mean sqrt(10/trials).
        let mean = grand as f64 / trials as f64;
        let var = grand_sq / trials as f64 - mean * mean;
        assert!((mean - 10.0).abs() <= 3.0 * (10.0 / trials as f64).sqrt());
        assert!((var - 10.0).abs() < 1.0);
    }
}
