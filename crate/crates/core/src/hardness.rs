//! Lower-bound constructions and certificate calculators: random
//! pseudo-distribution instances, Hellinger distance between a Poisson law and
//! a symmetric Poisson mixture, the Hellinger-to-TV bound, composition across
//! coordinates, the coin instance and a Monte Carlo indistinguishability
//! witness.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{DiscreteCDF, Poisson};

use crate::distribution::{DiscreteDistribution, DistributionKind};
use crate::error::{Error, Result};
use crate::exact::statistic_empirical_tv;
use crate::histogram::Histogram;
use crate::rng::{labels, substream};
use crate::sampling::poissonized_with;
use crate::special::poisson_pmf;
use crate::testers::uniformity::{ceil_count, sample_complexity_shape};
use crate::Scalar;

/// Attempts before [`lb_instance`] gives up.
pub const MAX_ATTEMPTS: u64 = 1_000_000;

/// Largest Poisson tail mass tolerated beyond the summation cutoff.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// A pseudo-distribution with every coordinate `(1 ± ε)/n` and total mass
/// within `ε/2` of one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + serde::de::DeserializeOwned"))]
pub struct LowerBoundInstance<T> {
    pub w: DiscreteDistribution<T>,
    pub epsilon: T,
    pub heavy: usize,
    pub accepted: bool,
    pub rejections: u64,
    pub seed: u64,
}

fn check_instance_params<T: Scalar>(n: usize, epsilon: T) -> Result<()> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::ParameterOutOfRange(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// Draws each coordinate as `(1+ε)/n` or `(1−ε)/n` with a fair coin and
/// redraws the whole vector until `|1 − Σw| ≤ ε/2`.
pub fn lb_instance_with<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    epsilon: T,
    rng: &mut R,
) -> Result<(DiscreteDistribution<T>, usize, u64)> {
    check_instance_params(n, epsilon)?;
    let nf = T::from_index(n);
    let hi = (T::one() + epsilon) / nf;
    let lo = (T::one() - epsilon) / nf;
    let mut signs = vec![false; n];
    for attempt in 0..MAX_ATTEMPTS {
        signs.iter_mut().for_each(|s| *s = rng.random());
        let heavy = signs.iter().filter(|&&s| s).count();
        // |1 − Σw| = ε·|2h − n|/n, so the constraint is 2|2h − n| ≤ n.
        if 2 * (2 * heavy).abs_diff(n) <= n {
            let w = signs.iter().map(|&s| if s { hi } else { lo }).collect();
            return Ok((
                DiscreteDistribution::from_parts_unchecked(w, DistributionKind::PseudoDistribution),
                heavy,
                attempt,
            ));
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
    })
}

pub fn lb_instance<T: Scalar>(n: usize, epsilon: T, seed: u64) -> Result<LowerBoundInstance<T>> {
    let (w, heavy, rejections) =
        lb_instance_with(n, epsilon, &mut substream(seed, labels::INSTANCE, 0))?;
    Ok(LowerBoundInstance {
        w,
        epsilon,
        heavy,
        accepted: true,
        rejections,
        seed,
    })
}

/// Default summation cutoff `λ(1+ε) + 40√(λ(1+ε)) + 40`.
pub fn default_truncation(lambda: f64, epsilon: f64) -> u64 {
    let top = lambda * (1.0 + epsilon);
    (top + 40.0 * top.sqrt() + 40.0).ceil() as u64
}

/// `H²(Poi(λ), ½Poi((1+ε)λ) + ½Poi((1−ε)λ))` summed over `{0, …, truncation}`.
pub fn hellinger2_poisson_mixture<T: Scalar>(
    lambda: T,
    epsilon: T,
    truncation: Option<u64>,
) -> Result<T> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::ParameterOutOfRange(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(epsilon >= T::zero() && epsilon < T::one()) {
        return Err(Error::ParameterOutOfRange(format!(
            "epsilon must lie in [0, 1), got {epsilon}"
        )));
    }
    let (l, e) = (lambda.as_f64(), epsilon.as_f64());
    let cutoff = truncation.unwrap_or_else(|| default_truncation(l, e));
    let tail = Poisson::new(l * (1.0 + e))
        .expect("positive rate")
        .sf(cutoff);
    if tail >= TAIL_TOLERANCE {
        return Err(Error::TruncationInsufficient {
            truncation: cutoff,
            tail,
        });
    }
    // With r_k = Q(k)/P(k) = ½[(1+ε)^k e^{−λε} + (1−ε)^k e^{λε}], each term is
    // ½P(k)(1 − √r_k)² and 1 − r_k is formed from expm1 to avoid cancellation.
    let half = T::lit(0.5);
    let le = lambda * epsilon;
    let (up, down) = (epsilon.ln_1p(), (-epsilon).ln_1p());
    let h2 = (0..=cutoff)
        .map(|k| {
            let kf = T::from_count(k);
            let one_minus_r = -half * ((kf * up - le).exp_m1() + (kf * down + le).exp_m1());
            let r = T::one() - one_minus_r;
            let d = one_minus_r / (T::one() + r.max(T::zero()).sqrt());
            half * poisson_pmf(lambda, k) * d * d
        })
        .sum();
    Ok(h2)
}

/// `1 − (1 − h2)²/2`, the total variation bound implied by squared Hellinger distance `h2`.
pub fn tv_upper_from_hellinger<T: Scalar>(h2: T) -> Result<T> {
    if !(h2 >= T::zero() && h2 <= T::one()) {
        return Err(Error::ParameterOutOfRange(format!(
            "h2 must lie in [0, 1], got {h2}"
        )));
    }
    let d = T::one() - h2;
    Ok(T::one() - d * d * T::lit(0.5))
}

/// `1 − Π(1 − h2_i)`, squared Hellinger distance of product measures.
pub fn composed_hellinger2<T: Scalar>(per_coord_h2: &[T]) -> Result<T> {
    let mut log_affinity = T::zero();
    for (index, &h) in per_coord_h2.iter().enumerate() {
        if !(h >= T::zero() && h <= T::one()) {
            return Err(Error::EntryOutOfRange {
                index,
                value: h.as_f64(),
            });
        }
        log_affinity = log_affinity + (-h).ln_1p();
    }
    Ok(-log_affinity.exp_m1())
}

/// `⌈constant·(√(n·ln(1/δ)) + ln(1/δ))/ε²⌉`: no tester with fewer samples can
/// succeed (up to the constant). Advisory only.
pub fn lower_bound_samples<T: Scalar>(n: usize, epsilon: T, delta: T, constant: T) -> Result<u64> {
    if n < 1
        || !(epsilon > T::zero() && epsilon <= T::one())
        || !(delta > T::zero() && delta < T::one())
    {
        return Err(Error::ParameterOutOfRange(format!(
            "need n ≥ 1, ε in (0, 1], δ in (0, 1); got n={n}, ε={epsilon}, δ={delta}"
        )));
    }
    if !(constant > T::zero()) {
        return Err(Error::ParameterOutOfRange(format!(
            "constant must be positive, got {constant}"
        )));
    }
    Ok(ceil_count(
        constant * sample_complexity_shape(n, epsilon, delta),
    ))
}

/// Number of paired coordinates in the coin instance: odd `n` sets the last
/// coordinate to `1/n` and works on the remaining `n − 1`.
pub fn coin_half(n: usize) -> usize {
    n / 2
}

/// First half of the paired coordinates at `(1+ε)/n` and second half at
/// `(1−ε)/n` (swapped when `heavy_first` is false); a trailing `1/n` for odd `n`.
pub fn coin_instance<T: Scalar>(
    n: usize,
    epsilon: T,
    heavy_first: bool,
) -> Result<DiscreteDistribution<T>> {
    check_instance_params(n, epsilon)?;
    let half = coin_half(n);
    let nf = T::from_index(n);
    let (a, b) = if heavy_first {
        (T::one() + epsilon, T::one() - epsilon)
    } else {
        (T::one() - epsilon, T::one() + epsilon)
    };
    let mut w = Vec::with_capacity(n);
    w.extend(std::iter::repeat_n(a / nf, half));
    w.extend(std::iter::repeat_n(b / nf, half));
    if n % 2 == 1 {
        w.push(T::one() / nf);
    }
    DiscreteDistribution::new(w)
}

/// Sample counts falling in the first and second half of the paired
/// coordinates. Conditioned on their sum `m'`, the first is `Bin(m', (1±ε)/2)`;
/// for even `n` it is exactly `Bin(m, (1±ε)/2)`.
pub fn coin_halves(hist: &Histogram) -> (u64, u64) {
    let half = coin_half(hist.n());
    let c = hist.counts();
    (c[..half].iter().sum(), c[half..2 * half].iter().sum())
}

/// A single-threshold decision rule and its empirical errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRule {
    pub threshold: f64,
    /// Rejects when the statistic is `≥ threshold`; otherwise rejects when `< threshold`.
    pub reject_above: bool,
    pub type1: f64,
    pub type2: f64,
    pub total_error: f64,
}

/// The single-threshold rule with smallest `type1 + type2`, searched over
/// both orientations and every threshold that changes a decision.
pub fn best_threshold_rule(null: &[f64], alt: &[f64]) -> ThresholdRule {
    assert!(!null.is_empty() && !alt.is_empty());
    let mut a = null.to_vec();
    let mut b = alt.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut candidates: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    candidates.push(f64::INFINITY);
    let mut best: Option<ThresholdRule> = None;
    let (mut i, mut j) = (0usize, 0usize);
    for &t in &candidates {
        while i < a.len() && a[i] < t {
            i += 1;
        }
        while j < b.len() && b[j] < t {
            j += 1;
        }
        // Reject when S ≥ t: type I = Pr_null[S ≥ t], type II = Pr_alt[S < t].
        let null_above = (a.len() - i) as f64 / na;
        let alt_below = j as f64 / nb;
        for (reject_above, type1, type2) in [
            (true, null_above, alt_below),
            (false, 1.0 - null_above, 1.0 - alt_below),
        ] {
            let total_error = type1 + type2;
            if best.is_none_or(|r| total_error < r.total_error) {
                best = Some(ThresholdRule {
                    threshold: t,
                    reject_above,
                    type1,
                    type2,
                    total_error,
                });
            }
        }
    }
    best.expect("at least one candidate")
}

/// Outcome of pitting the empirical-TV statistic against the lower-bound
/// construction at a fixed sample rate, with the matching Hellinger certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndistinguishabilityWitness {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub m: u64,
    pub trials: u64,
    pub seed: u64,
    pub best_rule: ThresholdRule,
    /// Hellinger distance squared for one coordinate at rate `λ = m/n`.
    pub per_coordinate_h2: f64,
    pub composed_h2: f64,
    /// Upper bound on the total variation between the two Poissonized sample laws.
    pub tv_upper: f64,
    pub mean_rejections: f64,
}

impl IndistinguishabilityWitness {
    /// No single-threshold rule reaches total error `2δ`.
    pub fn monte_carlo_holds(&self) -> bool {
        self.best_rule.total_error > 2.0 * self.delta
    }

    /// The certificate keeps total variation below `1 − δ`.
    pub fn certificate_holds(&self) -> bool {
        self.tv_upper < 1.0 - self.delta
    }
}

/// `⌈factor·√(n·ln(1/δ))/ε²⌉`, the sample rate at which the witness is run.
pub fn witness_samples(n: usize, epsilon: f64, delta: f64, factor: f64) -> u64 {
    ceil_count(factor * (n as f64 * (1.0 / delta).ln()).sqrt() / (epsilon * epsilon))
}

fn poissonized_tv(hist: &Histogram, n: usize) -> Result<f64> {
    if hist.total() == 0 {
        return Ok(1.0);
    }
    statistic_empirical_tv(hist, n)
}

/// Runs `trials` Poissonized samples from `U_n` and from fresh lower-bound
/// instances, and reports the best threshold rule on the empirical-TV
/// statistic together with the Hellinger certificate.
pub fn indistinguishability_witness(
    n: usize,
    epsilon: f64,
    delta: f64,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<IndistinguishabilityWitness> {
    check_instance_params(n, epsilon)?;
    if !(delta > 0.0 && delta < 1.0) || m == 0 || trials == 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "need δ in (0, 1), m ≥ 1 and trials ≥ 1; got δ={delta}, m={m}, trials={trials}"
        )));
    }
    let uniform = DiscreteDistribution::<f64>::uniform(n);
    let null = (0..trials)
        .into_par_iter()
        .map(|j| {
            let hist =
                poissonized_with(&uniform, m, &mut substream(seed, labels::WITNESS_NULL, j))?;
            poissonized_tv(&hist, n)
        })
        .collect::<Result<Vec<f64>>>()?;
    let alt = (0..trials)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, labels::WITNESS_ALT, j);
            let (w, _, rejections) = lb_instance_with(n, epsilon, &mut rng)?;
            let hist = poissonized_with(&w, m, &mut rng)?;
            Ok((poissonized_tv(&hist, n)?, rejections))
        })
        .collect::<Result<Vec<(f64, u64)>>>()?;
    let mean_rejections = alt.iter().map(|&(_, r)| r as f64).sum::<f64>() / trials as f64;
    let alt: Vec<f64> = alt.into_iter().map(|(s, _)| s).collect();
    let per_coordinate_h2 = hellinger2_poisson_mixture(m as f64 / n as f64, epsilon, None)?;
    let composed_h2 = composed_hellinger2(&vec![per_coordinate_h2; n])?;
    Ok(IndistinguishabilityWitness {
        n,
        epsilon,
        delta,
        m,
        trials,
        seed,
        best_rule: best_threshold_rule(&null, &alt),
        per_coordinate_h2,
        composed_h2,
        tv_upper: tv_upper_from_hellinger(composed_h2)?,
        mean_rejections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_coordinates_and_constraint() {
        for seed in 0..20 {
            let inst = lb_instance(31, 0.4f64, seed).unwrap();
            assert!(inst.accepted);
            let (hi, lo) = (1.4 / 31.0, 0.6 / 31.0);
            assert!(inst.w.weights().iter().all(|&w| w == hi || w == lo));
            assert!((1.0 - inst.w.total_mass()).abs() <= 0.2 + 1e-12);
            assert_eq!(
                inst.w.weights().iter().filter(|&&w| w == hi).count(),
                inst.heavy
            );
            assert!(!inst.w.is_true_distribution());
        }
        assert_eq!(
            lb_instance(31, 0.4f64, 9).unwrap(),
            lb_instance(31, 0.4f64, 9).unwrap()
        );
        assert!(lb_instance(1, 0.4f64, 0).is_err());
        assert!(lb_instance(4, 1.0f64, 0).is_err());
    }

    #[test]
    fn balanced_instance_has_unit_mass() {
        let inst = (0..200)
            .map(|s| lb_instance(10, 0.5f64, s).unwrap())
            .find(|i| i.heavy == 5)
            .unwrap();
        assert!((inst.w.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hellinger_mixture_trivial_cases() {
        assert_eq!(hellinger2_poisson_mixture(0.7f64, 0.0, None).unwrap(), 0.0);
        let tiny = hellinger2_poisson_mixture(1e-6f64, 0.5, None).unwrap();
        assert!(tiny < 1e-12, "{tiny}");
        assert!(matches!(
            hellinger2_poisson_mixture(50.0f64, 0.5, Some(10)),
            Err(Error::TruncationInsufficient { .. })
        ));
        assert!(hellinger2_poisson_mixture(0.0f64, 0.5, None).is_err());
    }

    #[test]
    fn tv_bound_examples() {
        assert_eq!(tv_upper_from_hellinger(0.0f64).unwrap(), 0.5);
        assert_eq!(tv_upper_from_hellinger(1.0f64).unwrap(), 1.0);
        assert!((tv_upper_from_hellinger(0.75f64).unwrap() - 0.96875).abs() < 1e-15);
        assert!(tv_upper_from_hellinger(1.5f64).is_err());
    }

    #[test]
    fn composition_examples() {
        assert_eq!(composed_hellinger2(&[0.0f64; 5]).unwrap(), 0.0);
        assert!((composed_hellinger2(&[0.3f64]).unwrap() - 0.3).abs() < 1e-15);
        assert!((composed_hellinger2(&[0.5f64, 0.5]).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(composed_hellinger2(&[0.2f64, 1.0]).unwrap(), 1.0);
        assert!(matches!(
            composed_hellinger2(&[0.1f64, -0.1]),
            Err(Error::EntryOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn lower_bound_sample_examples() {
        let v = lower_bound_samples(10_000, 0.1f64, 0.01, 1.0).unwrap();
        let l = 100f64.ln();
        let expect = ((1e4 * l).sqrt() + l) * 100.0;
        assert_eq!(v, expect.ceil() as u64);
        assert!((21_900..21_950).contains(&v));
    }

    #[test]
    fn coin_instance_layout() {
        let p = coin_instance(7, 0.2f64, true).unwrap();
        assert_eq!(p.n(), 7);
        assert!((p.weights()[0] - 1.2 / 7.0).abs() < 1e-15);
        assert!((p.weights()[3] - 0.8 / 7.0).abs() < 1e-15);
        assert!((p.weights()[6] - 1.0 / 7.0).abs() < 1e-15);
        let q = coin_instance(6, 0.2f64, false).unwrap();
        assert!(q.weights()[0] < q.weights()[5]);
        let h = Histogram::multinomial(vec![1, 2, 3, 4, 5, 6, 7], 28).unwrap();
        assert_eq!(coin_halves(&h), (6, 15));
    }

    #[test]
    fn best_rule_separable_and_identical() {
        let r = best_threshold_rule(&[0.0, 0.1, 0.2], &[0.5, 0.6]);
        assert_eq!(r.total_error, 0.0);
        assert!(r.reject_above && r.threshold > 0.2 && r.threshold <= 0.5);
        let flipped = best_threshold_rule(&[0.5, 0.6], &[0.0, 0.1]);
        assert_eq!(flipped.total_error, 0.0);
        assert!(!flipped.reject_above);
        let same = best_threshold_rule(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        assert!((same.total_error - 1.0).abs() < 1e-15);
    }

    #[test]
    fn witness_is_deterministic() {
        let a = indistinguishability_witness(60, 0.3, 0.05, 40, 300, 4).unwrap();
        let b = indistinguishability_witness(60, 0.3, 0.05, 40, 300, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.best_rule.total_error <= 1.0);
    }
}
