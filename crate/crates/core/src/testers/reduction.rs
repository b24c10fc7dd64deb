//! Identity-to-uniformity reduction.
//!
//! The channel first mixes its input with `U_n` (weight ½), then grains the
//! mixed reference `q' = ½q + ½U_n` onto `6n` buckets: element `i` owns
//! `⌊6n·q'_i⌋` dedicated buckets, each receiving probability `1/(6n·q'_i)`,
//! and the leftover probability of every row is spread evenly over a shared
//! pool made of the remaining buckets. Under `q` every bucket then receives
//! exactly `1/(6n)`. Because `q'_i ≥ 1/(2n)`, each element owns at least three
//! dedicated buckets, which keeps at least ¾ of any `p'`−`q'` difference
//! visible and yields `‖F(p) − U_{6n}‖₁ ≥ ‖p − q‖₁/3`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::sampling::multinomial_counts;
use crate::testers::uniformity::{required_samples, test_uniformity, TesterConfig, Verdict};
use crate::Scalar;

/// Target domain size per source element.
pub const EXPANSION: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct GrainRow<T> {
    start: usize,
    dedicated: usize,
    dedicated_prob: T,
    pool_prob: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionChannel<T> {
    source_n: usize,
    target_n: usize,
    uniform_mix: T,
    pool_start: usize,
    rows: Vec<GrainRow<T>>,
}

impl<T: Scalar> ReductionChannel<T> {
    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn target_n(&self) -> usize {
        self.target_n
    }

    /// Number of shared pool buckets.
    pub fn pool_size(&self) -> usize {
        self.target_n - self.pool_start
    }

    fn grain_dense(&self, i: usize, out: &mut [T], weight: T) {
        let r = &self.rows[i];
        for x in &mut out[r.start..r.start + r.dedicated] {
            *x = *x + weight * r.dedicated_prob;
        }
        if r.pool_prob > T::zero() {
            for x in &mut out[self.pool_start..] {
                *x = *x + weight * r.pool_prob;
            }
        }
    }

    /// Row `i` of the full channel as a dense probability vector over `[6n]`.
    pub fn row(&self, i: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.target_n];
        let keep = T::one() - self.uniform_mix;
        self.grain_dense(i, &mut out, keep);
        let share = self.uniform_mix / T::from_index(self.source_n);
        for j in 0..self.source_n {
            self.grain_dense(j, &mut out, share);
        }
        out
    }

    /// Exact image `F(p)` of a distribution over `[n]`.
    pub fn pushforward(&self, p: &DiscreteDistribution<T>) -> Result<DiscreteDistribution<T>> {
        if p.n() != self.source_n {
            return Err(Error::DomainMismatch {
                left: p.n(),
                right: self.source_n,
            });
        }
        let keep = T::one() - self.uniform_mix;
        let share = self.uniform_mix / T::from_index(self.source_n);
        let mut out = vec![T::zero(); self.target_n];
        for (i, &pi) in p.weights().iter().enumerate() {
            self.grain_dense(i, &mut out, keep * pi + share);
        }
        Ok(DiscreteDistribution::from_parts_unchecked(out, p.kind()))
    }

    /// Passes every sample in `hist` through the channel independently.
    pub fn map_histogram<R: Rng + ?Sized>(
        &self,
        hist: &Histogram,
        rng: &mut R,
    ) -> Result<Histogram> {
        hist.ensure_domain(self.source_n)?;
        let keep = (T::one() - self.uniform_mix).as_f64();
        let mut mixed = vec![0u64; self.source_n];
        let mut moved = 0u64;
        for (i, &c) in hist.counts().iter().enumerate() {
            let kept = multinomial_counts(rng, &[keep, 1.0 - keep], c)[0];
            mixed[i] += kept;
            moved += c - kept;
        }
        let uniform = vec![1.0 / self.source_n as f64; self.source_n];
        for (slot, c) in mixed
            .iter_mut()
            .zip(multinomial_counts(rng, &uniform, moved))
        {
            *slot += c;
        }

        let mut out = vec![0u64; self.target_n];
        let mut to_pool = 0u64;
        for (i, &c) in mixed.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = &self.rows[i];
            let dedicated_mass = (r.dedicated_prob * T::from_index(r.dedicated))
                .as_f64()
                .min(1.0);
            let split = multinomial_counts(rng, &[dedicated_mass, 1.0 - dedicated_mass], c);
            to_pool += split[1];
            if r.dedicated > 0 && split[0] > 0 {
                let even = vec![1.0 / r.dedicated as f64; r.dedicated];
                for (b, k) in multinomial_counts(rng, &even, split[0])
                    .into_iter()
                    .enumerate()
                {
                    out[r.start + b] += k;
                }
            }
        }
        if to_pool > 0 {
            let pool = self.pool_size();
            let even = vec![1.0 / pool as f64; pool];
            for (b, k) in multinomial_counts(rng, &even, to_pool)
                .into_iter()
                .enumerate()
            {
                out[self.pool_start + b] += k;
            }
        }
        Histogram::multinomial(out, hist.total())
    }
}

/// Builds the channel `F` with `F(q) = U_{6n}`.
pub fn build_reduction_channel<T: Scalar>(
    q: &DiscreteDistribution<T>,
) -> Result<ReductionChannel<T>> {
    q.ensure_true()?;
    let n = q.n();
    let target_n = EXPANSION * n;
    let tn = T::from_index(target_n);
    let half = T::lit(0.5);
    let inv_n = T::one() / T::from_index(n);
    let mixed: Vec<T> = q
        .weights()
        .iter()
        .map(|&w| half * w + half * inv_n)
        .collect();

    let mut dedicated: Vec<usize> = mixed
        .iter()
        .map(|&w| (tn * w).floor().to_usize().unwrap_or(0))
        .collect();
    // Rounding can only overshoot by a bucket or two; take them back from the largest owners.
    while dedicated.iter().sum::<usize>() > target_n {
        let i = (0..n).max_by_key(|&i| dedicated[i]).expect("n >= 1");
        dedicated[i] -= 1;
    }
    let pool_start: usize = dedicated.iter().sum();
    let pool = target_n - pool_start;

    let mut rows = Vec::with_capacity(n);
    let mut start = 0;
    for (&w, &k) in mixed.iter().zip(&dedicated) {
        let row = if pool == 0 {
            GrainRow {
                start,
                dedicated: k,
                dedicated_prob: T::one() / T::from_index(k),
                pool_prob: T::zero(),
            }
        } else {
            let residual = (w - T::from_index(k) / tn).max(T::zero());
            GrainRow {
                start,
                dedicated: k,
                dedicated_prob: T::one() / (tn * w),
                pool_prob: residual / (w * T::from_index(pool)),
            }
        };
        rows.push(row);
        start += k;
    }
    Ok(ReductionChannel {
        source_n: n,
        target_n,
        uniform_mix: half,
        pool_start,
        rows,
    })
}

/// Outcome of the identity tester: the uniformity verdict on the mapped samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityVerdict<T> {
    pub verdict: Verdict<T>,
    pub target_n: usize,
    pub target_epsilon: T,
}

/// Uniformity-tester configuration for the mapped problem: `6n` elements at proximity `ε/3`.
pub fn identity_target_config<T: Scalar>(config: &TesterConfig<T>) -> Result<TesterConfig<T>> {
    TesterConfig {
        n: EXPANSION * config.n,
        epsilon: config.epsilon / T::lit(3.0),
        ..*config
    }
    .validated()
}

pub fn identity_required_samples<T: Scalar>(config: &TesterConfig<T>) -> Result<u64> {
    Ok(required_samples(&identity_target_config(config)?))
}

/// Tests whether the samples come from `q` by mapping them through the
/// reduction channel and testing uniformity over `[6n]` at `ε/3`.
pub fn test_identity<T: Scalar, R: Rng + ?Sized>(
    samples: &Histogram,
    q: &DiscreteDistribution<T>,
    config: &TesterConfig<T>,
    rng: &mut R,
) -> Result<IdentityVerdict<T>> {
    samples.ensure_domain(q.n())?;
    if config.n != q.n() {
        return Err(Error::DomainMismatch {
            left: config.n,
            right: q.n(),
        });
    }
    let channel = build_reduction_channel(q)?;
    test_identity_with(&channel, samples, config, rng)
}

/// As [`test_identity`] with a prebuilt channel.
pub fn test_identity_with<T: Scalar, R: Rng + ?Sized>(
    channel: &ReductionChannel<T>,
    samples: &Histogram,
    config: &TesterConfig<T>,
    rng: &mut R,
) -> Result<IdentityVerdict<T>> {
    let target = identity_target_config(config)?;
    let mapped = channel.map_histogram(samples, rng)?;
    Ok(IdentityVerdict {
        verdict: test_uniformity(&mapped, &target)?,
        target_n: target.n,
        target_epsilon: target.epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::l1_distance;
    use crate::rng::substream;

    type D = DiscreteDistribution<f64>;

    fn assert_uniform(v: &D) {
        let u = 1.0 / v.n() as f64;
        for &w in v.weights() {
            assert!((w - u).abs() <= 1e-12, "{w} vs {u}");
        }
    }

    #[test]
    fn uniform_reference_grains_exactly() {
        let c = build_reduction_channel(&D::uniform(5)).unwrap();
        assert_eq!(c.target_n(), 30);
        assert_eq!(c.pool_size(), 0);
        for i in 0..5 {
            let row = c.row(i);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_uniform(&c.pushforward(&D::uniform(5)).unwrap());
    }

    #[test]
    fn skewed_reference_maps_to_uniform() {
        let q = D::new(vec![0.7, 0.2, 0.05, 0.05, 0.0]).unwrap();
        let c = build_reduction_channel(&q).unwrap();
        assert!(c.pool_size() > 0);
        for i in 0..q.n() {
            assert!((c.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_uniform(&c.pushforward(&q).unwrap());

        let p = D::new(vec![0.2, 0.2, 0.2, 0.2, 0.2]).unwrap();
        let fp = c.pushforward(&p).unwrap();
        let u = D::uniform(c.target_n());
        let ratio = l1_distance(fp.weights(), u.weights()) / l1_distance(p.weights(), q.weights());
        assert!(ratio >= 1.0 / 3.0, "{ratio}");
    }

    #[test]
    fn dense_rows_agree_with_pushforward() {
        let q = D::new(vec![0.5, 0.3, 0.15, 0.05]).unwrap();
        let p = D::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let c = build_reduction_channel(&q).unwrap();
        let mut via_rows = vec![0.0; c.target_n()];
        for (i, &pi) in p.weights().iter().enumerate() {
            for (acc, r) in via_rows.iter_mut().zip(c.row(i)) {
                *acc += pi * r;
            }
        }
        let direct = c.pushforward(&p).unwrap();
        assert!(l1_distance(&via_rows, direct.weights()) < 1e-12);
    }

    #[test]
    fn mapped_histogram_keeps_sample_count() {
        let q = D::new(vec![0.5, 0.3, 0.2]).unwrap();
        let c = build_reduction_channel(&q).unwrap();
        let h = Histogram::from_counts(vec![40, 0, 7]).unwrap();
        let a = c.map_histogram(&h, &mut substream(1, 2, 3)).unwrap();
        let b = c.map_histogram(&h, &mut substream(1, 2, 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 18);
        assert_eq!(a.total(), 47);
    }

    #[test]
    fn mapped_samples_follow_pushforward() {
        // Empirical bucket frequencies over many mapped samples match F(p).
        let q = D::new(vec![0.6, 0.25, 0.1, 0.05]).unwrap();
        let p = D::new(vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        let c = build_reduction_channel(&q).unwrap();
        let fp = c.pushforward(&p).unwrap();
        let m = 400_000u64;
        let h = crate::sampling::sample_multinomial(&p, m, 11).unwrap();
        let mapped = c.map_histogram(&h, &mut substream(11, 5, 0)).unwrap();
        for (&count, &prob) in mapped.counts().iter().zip(fp.weights()) {
            let sd = (prob * (1.0 - prob) / m as f64).sqrt();
            assert!((count as f64 / m as f64 - prob).abs() < 5.0 * sd + 1e-9);
        }
    }

    #[test]
    fn identity_config_scales_domain_and_epsilon() {
        let cfg = TesterConfig::new(10, 0.3f64, 0.05).unwrap();
        let t = identity_target_config(&cfg).unwrap();
        assert_eq!(t.n, 60);
        assert!((t.epsilon - 0.1).abs() < 1e-15);
        assert!(identity_required_samples(&cfg).unwrap() >= required_samples(&cfg));
    }
}
