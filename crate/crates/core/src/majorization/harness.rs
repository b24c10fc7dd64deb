//! Monte Carlo evaluation: error-rate estimates, stochastic-domination checks
//! and the worst-case type-II search over the candidate family.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::family::worst_case_family;
use super::order::majorizes;
use crate::confidence::RateEstimate;
use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::rng::{labels, substream};
use crate::sampling::multinomial_with;
use crate::testers::StatisticKind;
use crate::Scalar;

/// Which side of the threshold counts as an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    /// `statistic ≥ threshold` (a rejection).
    Above,
    /// `statistic < threshold` (an acceptance).
    Below,
}

impl Side {
    pub fn hit<T: Scalar>(self, value: T, threshold: T) -> bool {
        match self {
            Side::Above => value >= threshold,
            Side::Below => value < threshold,
        }
    }
}

/// Statistic values on `trials` independent multinomial samples; trial `j`
/// uses stream `(seed, label, j)`.
pub fn sample_statistic_values<T: Scalar>(
    statistic: StatisticKind,
    dist: &DiscreteDistribution<T>,
    m: u64,
    trials: u64,
    seed: u64,
    label: u64,
) -> Result<Vec<T>> {
    dist.ensure_true()?;
    (0..trials)
        .into_par_iter()
        .map(|j| {
            let hist = multinomial_with(dist, m, &mut substream(seed, label, j))?;
            statistic.evaluate::<T>(&hist)
        })
        .collect()
}

/// Estimates `Pr[statistic ≥ threshold]` (or `<`) under `m` samples from `dist`.
pub fn empirical_error_estimate<T: Scalar>(
    statistic: StatisticKind,
    dist: &DiscreteDistribution<T>,
    m: u64,
    threshold: T,
    side: Side,
    trials: u64,
    seed: u64,
) -> Result<RateEstimate> {
    if trials < 100 {
        return Err(Error::ParameterOutOfRange(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    let values = sample_statistic_values(statistic, dist, m, trials, seed, labels::ERROR_ESTIMATE)?;
    let events = values.iter().filter(|&&v| side.hit(v, threshold)).count() as u64;
    Ok(RateEstimate::new(events, trials))
}

/// Smallest observed null value `v` with `Pr_null[statistic ≥ v] ≤ level`,
/// estimated from `trials` samples of `U_n`; one above the largest observed
/// value when no such `v` exists. Used to threshold statistics other than the
/// tester's own.
pub fn null_calibrated_threshold<T: Scalar>(
    statistic: StatisticKind,
    n: usize,
    m: u64,
    level: f64,
    trials: u64,
    seed: u64,
) -> Result<T> {
    if trials == 0 || !(0.0..1.0).contains(&level) {
        return Err(Error::ParameterOutOfRange(format!(
            "need trials ≥ 1 and level in [0, 1), got {trials}, {level}"
        )));
    }
    let uniform = DiscreteDistribution::<T>::uniform(n);
    let mut values =
        sample_statistic_values(statistic, &uniform, m, trials, seed, labels::WITNESS_NULL)?;
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite statistic"));
    let total = values.len();
    for i in 0..total {
        let first = i == 0 || values[i - 1] < values[i];
        if first && (total - i) as f64 <= level * total as f64 {
            return Ok(values[i]);
        }
    }
    Ok(values[total - 1] + T::one())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub trials: u64,
    /// Largest `F_p(x) − F_q(x)` over all observed `x`; positive values are
    /// points where the dominating law's empirical CDF sits above the dominated one.
    pub max_cdf_violation: f64,
    /// `√(1/(2·trials))`, the largest standard error of a difference of two
    /// independent empirical CDFs.
    pub standard_error: f64,
    pub pass: bool,
    /// Whether `p ≻ q` actually holds; the check runs either way.
    pub hypothesis_holds: bool,
    pub mean_dominating: f64,
    pub mean_dominated: f64,
}

/// Largest amount by which the empirical CDF of `dominating` exceeds that of `dominated`.
pub fn max_cdf_excess(dominating: &[f64], dominated: &[f64]) -> f64 {
    let mut a = dominating.to_vec();
    let mut b = dominated.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut worst = f64::NEG_INFINITY;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        worst = worst.max(i as f64 / na - j as f64 / nb);
    }
    worst.max(0.0)
}

/// Checks empirically that the statistic under `p` stochastically dominates
/// the statistic under `q`.
pub fn dominance_check<T: Scalar>(
    p: &DiscreteDistribution<T>,
    q: &DiscreteDistribution<T>,
    statistic: StatisticKind,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<DominanceReport> {
    statistic.ensure_convex()?;
    if trials == 0 {
        return Err(Error::ParameterOutOfRange("need at least one trial".into()));
    }
    let hypothesis_holds = majorizes(p, q)?;
    let to_f64 = |v: Vec<T>| v.into_iter().map(|x| x.as_f64()).collect::<Vec<f64>>();
    let vp = to_f64(sample_statistic_values(
        statistic,
        p,
        m,
        trials,
        seed,
        labels::DOMINANT,
    )?);
    let vq = to_f64(sample_statistic_values(
        statistic,
        q,
        m,
        trials,
        seed,
        labels::DOMINATED,
    )?);
    let violation = max_cdf_excess(&vp, &vq);
    let se = (0.5 / trials as f64).sqrt();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(DominanceReport {
        trials,
        max_cdf_violation: violation,
        standard_error: se,
        pass: violation <= 3.0 * se,
        hypothesis_holds,
        mean_dominating: mean(&vp),
        mean_dominated: mean(&vq),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberRate {
    pub heavy: usize,
    pub middle: bool,
    pub description: String,
    pub estimate: RateEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseReport {
    pub statistic: StatisticKind,
    pub n: usize,
    pub m: u64,
    /// Distance of every family member from uniform.
    pub epsilon: f64,
    pub threshold: f64,
    /// The worst rate bounds the type-II error of every distribution at
    /// total variation at least this far from uniform.
    pub guaranteed_radius: f64,
    pub trials_per_member: u64,
    pub rows: Vec<MemberRate>,
    pub worst_rate: f64,
    pub argmax_heavy: usize,
    pub argmax_middle: bool,
    /// Largest per-member Clopper–Pearson upper bound.
    pub ci_upper: f64,
}

/// Maximizes the acceptance rate `Pr[statistic < threshold]` over the
/// candidate family at distance `epsilon`, `trials` samples per member.
pub fn worst_case_type2<T: Scalar>(
    statistic: StatisticKind,
    n: usize,
    m: u64,
    epsilon: T,
    threshold: T,
    trials: u64,
    seed: u64,
) -> Result<WorstCaseReport> {
    statistic.ensure_convex()?;
    if trials == 0 {
        return Err(Error::ParameterOutOfRange("need at least one trial".into()));
    }
    let family = worst_case_family(n, epsilon)?;
    let rows = family
        .iter()
        .map(|member| {
            let label =
                labels::FAMILY ^ ((member.heavy as u64) << 1 | u64::from(member.middle)) << 32;
            let values =
                sample_statistic_values(statistic, &member.distribution, m, trials, seed, label)?;
            let events = values.iter().filter(|&&v| v < threshold).count() as u64;
            Ok(MemberRate {
                heavy: member.heavy,
                middle: member.middle,
                description: member.describe(),
                estimate: RateEstimate::new(events, trials),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = rows
        .iter()
        .max_by(|a, b| a.estimate.rate.total_cmp(&b.estimate.rate))
        .expect("family is nonempty");
    Ok(WorstCaseReport {
        statistic,
        n,
        m,
        epsilon: epsilon.as_f64(),
        threshold: threshold.as_f64(),
        guaranteed_radius: 2.0 * epsilon.as_f64(),
        trials_per_member: trials,
        worst_rate: worst.estimate.rate,
        argmax_heavy: worst.heavy,
        argmax_middle: worst.middle,
        ci_upper: rows.iter().map(|r| r.estimate.ci_upper).fold(0.0, f64::max),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = DiscreteDistribution<f64>;

    #[test]
    fn infinite_thresholds() {
        let u = D::uniform(5);
        let all = empirical_error_estimate(
            StatisticKind::EmpiricalTv,
            &u,
            20,
            f64::NEG_INFINITY,
            Side::Above,
            200,
            1,
        )
        .unwrap();
        assert_eq!(all.rate, 1.0);
        assert_eq!(all.ci_upper, 1.0);
        let none = empirical_error_estimate(
            StatisticKind::EmpiricalTv,
            &u,
            20,
            f64::INFINITY,
            Side::Above,
            200,
            1,
        )
        .unwrap();
        assert_eq!(none.rate, 0.0);
        assert!(empirical_error_estimate(
            StatisticKind::EmpiricalTv,
            &u,
            20,
            0.0,
            Side::Above,
            99,
            1
        )
        .is_err());
    }

    #[test]
    fn fair_coin_median() {
        // Under U_2 with m = 100, S = |X_1 − 50|/100; its median is the value
        // splitting the sampled law in half.
        let u = D::uniform(2);
        let mut values = sample_statistic_values(
            StatisticKind::EmpiricalTv,
            &u,
            100,
            4000,
            3,
            labels::ERROR_ESTIMATE,
        )
        .unwrap();
        values.sort_by(f64::total_cmp);
        let median = values[values.len() / 2];
        let above = empirical_error_estimate(
            StatisticKind::EmpiricalTv,
            &u,
            100,
            median,
            Side::Above,
            4000,
            3,
        )
        .unwrap();
        let below = empirical_error_estimate(
            StatisticKind::EmpiricalTv,
            &u,
            100,
            median,
            Side::Below,
            4000,
            3,
        )
        .unwrap();
        assert_eq!(above.events + below.events, 4000);
        assert!(above.rate >= 0.5 && below.rate <= 0.5);
        assert!(below.rate > 0.3, "{}", below.rate);
    }

    #[test]
    fn cdf_excess_basics() {
        assert_eq!(max_cdf_excess(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        // dominating law shifted left is a violation of 1.
        assert_eq!(max_cdf_excess(&[0.0, 0.0], &[5.0, 5.0]), 1.0);
        assert_eq!(max_cdf_excess(&[5.0, 5.0], &[0.0, 0.0]), 0.0);
        assert!((max_cdf_excess(&[1.0, 3.0], &[2.0, 3.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identical_laws_pass() {
        let p = D::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let r = dominance_check(&p, &p, StatisticKind::Collisions, 12, 20_000, 5).unwrap();
        assert!(r.hypothesis_holds);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn point_mass_dominates_uniform() {
        let p = D::point_mass(10, 0);
        let r = dominance_check(
            &p,
            &D::uniform(10),
            StatisticKind::EmpiricalTv,
            30,
            20_000,
            6,
        )
        .unwrap();
        assert!(r.pass && r.hypothesis_holds);
        assert!(r.mean_dominating > r.mean_dominated);
    }

    #[test]
    fn reversed_pair_is_flagged_and_fails() {
        let p = D::point_mass(10, 0);
        let r =
            dominance_check(&D::uniform(10), &p, StatisticKind::EmpiricalTv, 30, 2000, 6).unwrap();
        assert!(!r.hypothesis_holds);
        assert!(!r.pass);
        assert!(dominance_check(&p, &p, StatisticKind::Distinct, 30, 10, 0).is_err());
    }

    #[test]
    fn null_threshold_controls_rejections() {
        let t: f64 =
            null_calibrated_threshold(StatisticKind::Collisions, 10, 20, 0.1, 2000, 8).unwrap();
        let u = D::uniform(10);
        let est =
            empirical_error_estimate(StatisticKind::Collisions, &u, 20, t, Side::Above, 2000, 8)
                .unwrap();
        assert!(est.rate <= 0.15, "{est:?}");
        let distinct: f64 =
            null_calibrated_threshold(StatisticKind::Distinct, 3, 500, 0.05, 200, 1).unwrap();
        assert_eq!(distinct, -2.0);
    }

    #[test]
    fn worst_case_below_minimum_threshold_is_zero() {
        let r = worst_case_type2(StatisticKind::EmpiricalTv, 8, 16, 0.3f64, -1.0, 200, 2).unwrap();
        assert_eq!(r.worst_rate, 0.0);
        assert_eq!(r.guaranteed_radius, 0.6);
        assert_eq!(r.rows.len(), worst_case_family(8, 0.3f64).unwrap().len());
    }

    #[test]
    fn worst_case_is_deterministic() {
        let a = worst_case_type2(StatisticKind::Collisions, 9, 30, 0.4f64, 0.2, 300, 77).unwrap();
        let b = worst_case_type2(StatisticKind::Collisions, 9, 30, 0.4f64, 0.2, 300, 77).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.iter().any(|r| r.middle));
    }
}
