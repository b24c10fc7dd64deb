//! Exact expectations of the empirical-TV statistic, the closed-form Hessian of
//! its expectation, the piecewise expectation-gap bound and the tester
//! threshold, plus bounded-difference tail calculators.
//!
//! All binomial probabilities are evaluated in log-space with one final
//! exponentiation per term, so `m` in the millions is fine.

use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::special::{binomial_pmf, ln_binomial};
use crate::Scalar;

/// Sample-size regime relative to the domain size and proximity parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// `m ≤ n`
    Small,
    /// `n < m < n/ε²`
    Mid,
    /// `m ≥ n/ε²`
    Large,
}

impl Regime {
    pub fn classify<T: Scalar>(n: usize, m: u64, epsilon: T) -> Self {
        if m <= n as u64 {
            Regime::Small
        } else if T::from_count(m) * epsilon * epsilon >= T::from_index(n) {
            Regime::Large
        } else {
            Regime::Mid
        }
    }

    /// The regime's gap shape without its constant: `ε²m²/n²`, `ε²√(m/n)` or `ε`.
    pub fn shape<T: Scalar>(self, n: usize, m: u64, epsilon: T) -> T {
        let ratio = T::from_count(m) / T::from_index(n);
        match self {
            Regime::Small => epsilon * epsilon * ratio * ratio,
            Regime::Mid => epsilon * epsilon * ratio.sqrt(),
            Regime::Large => epsilon,
        }
    }
}

/// Lower bound on `μ(p) − μ(U_n)` for `p` at distance `ε` from uniform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapBound<T> {
    pub regime: Regime,
    pub value: T,
    pub constant_used: T,
}

/// Deviation query for the bounded-difference inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBoundQuery<T> {
    pub z: T,
    pub bounded_difference: T,
    pub per_sample_variances: Option<Vec<T>>,
    pub m: u64,
}

impl<T: Scalar> TailBoundQuery<T> {
    pub fn new(z: T, bounded_difference: T, m: u64) -> Result<Self> {
        if !(z >= T::zero()) || !(bounded_difference > T::zero()) {
            return Err(Error::ParameterOutOfRange(format!(
                "need z >= 0 and B > 0, got z = {z}, B = {bounded_difference}"
            )));
        }
        Ok(Self {
            z,
            bounded_difference,
            per_sample_variances: None,
            m,
        })
    }

    pub fn with_variances(mut self, variances: Vec<T>) -> Result<Self> {
        if variances.iter().any(|v| !(*v >= T::zero())) {
            return Err(Error::ParameterOutOfRange(
                "variances must be nonnegative".into(),
            ));
        }
        self.per_sample_variances = Some(variances);
        Ok(self)
    }

    pub fn mcdiarmid(&self) -> T {
        mcdiarmid_bound(self.z, self.m, self.bounded_difference)
    }

    /// Bernstein form; `None` when no per-sample variances were supplied.
    pub fn bernstein(&self) -> Option<T> {
        let sum: T = self.per_sample_variances.as_ref()?.iter().copied().sum();
        Some(bernstein_mcdiarmid_bound(
            self.z,
            self.bounded_difference,
            sum,
        ))
    }
}

/// Evaluates `S = ½ Σ |X_i/m − 1/n|` term by term, with no shortcut.
pub fn empirical_tv_direct<T: Scalar>(hist: &Histogram, n: usize) -> Result<T> {
    hist.ensure_domain(n)?;
    let total = hist.total();
    if total == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let m = T::from_count(total);
    let inv_n = T::one() / T::from_index(n);
    let s: T = hist
        .counts()
        .iter()
        .map(|&x| (T::from_count(x) / m - inv_n).abs())
        .sum();
    Ok(s * T::lit(0.5))
}

/// The tester's statistic. When at most `n` samples were seen it equals the
/// fraction of unseen elements, which is returned exactly.
pub fn statistic_empirical_tv<T: Scalar>(hist: &Histogram, n: usize) -> Result<T> {
    hist.ensure_domain(n)?;
    let total = hist.total();
    if total == 0 {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    if total <= n as u64 {
        return Ok(T::from_index(hist.zero_count()) / T::from_index(n));
    }
    empirical_tv_direct(hist, n)
}

/// `E[max{Bin(m, p) − t, 0}]`.
pub fn expected_excess<T: Scalar>(m: u64, p: T, t: T) -> T {
    if p <= T::zero() {
        return T::zero();
    }
    if p >= T::one() {
        return (T::from_count(m) - t).max(T::zero());
    }
    let start = t.ceil().max(T::zero()).to_u64().unwrap_or(0);
    if start > m {
        return T::zero();
    }
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let mut acc = T::zero();
    for k in start..=m {
        let ln = ln_binomial::<T>(m, k) + T::from_count(k) * ln_p + T::from_count(m - k) * ln_q;
        acc = acc + ln.exp() * (T::from_count(k) - t);
    }
    acc
}

/// Contribution of one coordinate with mass `p_i` to `μ_t`: `(1/m)·E[max{X_i − t, 0}]`.
/// `μ_t(p)` is the sum of these, so this is also `μ_t` as a function of a single free `p_i`.
pub fn mu_t_coordinate<T: Scalar>(m: u64, t: T, p_i: T) -> T {
    expected_excess(m, p_i, t) / T::from_count(m)
}

/// `μ(U_n) = E[S]` under uniform samples, in `O(m)` terms.
pub fn mu_uniform<T: Scalar>(n: usize, m: u64) -> T {
    assert!(n >= 1 && m >= 1, "mu_uniform needs n, m >= 1");
    if n == 1 {
        return T::zero();
    }
    let nn = T::from_index(n);
    let t = T::from_count(m) / nn;
    nn * expected_excess(m, T::one() / nn, t) / T::from_count(m)
}

/// `μ_t(p) = E_{x∼Multinomial(m,p)}[(1/m) Σ_i max{x_i − t, 0}]`.
///
/// Coordinates with equal mass share one binomial sum, so structured inputs
/// (uniform, two- or three-valued) cost `O(m)` per distinct value.
pub fn mu_t_exact<T: Scalar>(p: &DiscreteDistribution<T>, m: u64, t: T) -> Result<T> {
    p.ensure_true()?;
    if m == 0 {
        return Err(Error::ParameterOutOfRange("m must be at least 1".into()));
    }
    if !(t >= T::zero()) || t > T::from_count(m) {
        return Err(Error::TOutOfRange { t: t.as_f64(), m });
    }
    let mut masses = p.weights().to_vec();
    masses.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
    let mut total = T::zero();
    let mut i = 0;
    while i < masses.len() {
        let mut j = i + 1;
        while j < masses.len() && masses[j] == masses[i] {
            j += 1;
        }
        total = total + T::from_index(j - i) * mu_t_coordinate(m, t, masses[i]);
        i = j;
    }
    Ok(total)
}

/// `μ(p) = μ_{m/n}(p)`.
pub fn mu_exact<T: Scalar>(p: &DiscreteDistribution<T>, m: u64) -> Result<T> {
    mu_t_exact(p, m, T::from_count(m) / T::from_index(p.n()))
}

fn hessian_integer<T: Scalar>(m: u64, t: u64, p: T) -> T {
    if t == 0 {
        return T::zero();
    }
    let ln = T::from_count(m - 1).ln()
        + ln_binomial::<T>(m - 2, t - 1)
        + T::from_count(t - 1) * p.ln()
        + T::from_count(m - t - 1) * (-p).ln_1p();
    ln.exp()
}

/// Diagonal entry `∂²μ_t/∂p_i²`: zero at `t = 0`,
/// `(m−1)·C(m−2, t−1)·p^{t−1}(1−p)^{m−t−1}` at integer `t ≥ 1`, and linear
/// interpolation between the neighbouring integers otherwise.
pub fn hessian_entry<T: Scalar>(m: u64, t: T, p_i: T) -> Result<T> {
    if !(p_i > T::zero() && p_i < T::one()) {
        return Err(Error::ParameterOutOfRange(format!(
            "p_i = {p_i} must lie in (0, 1)"
        )));
    }
    if !(t >= T::zero()) || m < 1 || t > T::from_count(m - 1) {
        return Err(Error::ParameterOutOfRange(format!(
            "t = {t} must lie in [0, m-1] with m = {m}"
        )));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    if t >= T::one() && m < 3 {
        return Err(Error::ParameterOutOfRange(format!(
            "m = {m} must be at least 3 when t >= 1"
        )));
    }
    let lo = t.floor();
    let hi = t.ceil();
    let lo_i = lo.to_u64().expect("t is bounded by m");
    if lo == hi {
        return Ok(hessian_integer(m, lo_i, p_i));
    }
    let dt = hi - t;
    Ok(dt * hessian_integer(m, lo_i, p_i) + (T::one() - dt) * hessian_integer(m, lo_i + 1, p_i))
}

fn check_gap_inputs<T: Scalar>(n: usize, m: u64, epsilon: T, constant: T) -> Result<()> {
    if n < 1 || m < 1 {
        return Err(Error::ParameterOutOfRange(format!(
            "need n, m >= 1, got n = {n}, m = {m}"
        )));
    }
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::ParameterOutOfRange(format!(
            "epsilon = {epsilon} must lie in (0, 1]"
        )));
    }
    if !(constant > T::zero()) || !constant.is_finite() {
        return Err(Error::ParameterOutOfRange(format!(
            "constant = {constant} must be positive"
        )));
    }
    Ok(())
}

/// `constant × {ε²m²/n², ε²√(m/n), ε}` by regime. Defined for `m ≥ 6`, `n ≥ 2`.
pub fn expectation_gap_bound<T: Scalar>(
    n: usize,
    m: u64,
    epsilon: T,
    constant: T,
) -> Result<GapBound<T>> {
    if m < 6 || n < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "gap bound holds for m >= 6 and n >= 2, got m = {m}, n = {n}"
        )));
    }
    check_gap_inputs(n, m, epsilon, constant)?;
    Ok(gap_bound_unchecked(n, m, epsilon, constant))
}

fn gap_bound_unchecked<T: Scalar>(n: usize, m: u64, epsilon: T, constant: T) -> GapBound<T> {
    let regime = Regime::classify(n, m, epsilon);
    GapBound {
        regime,
        value: constant * regime.shape(n, m, epsilon),
        constant_used: constant,
    }
}

/// `t = μ(U_n) + ½·gap bound`: the midpoint between the completeness mean and
/// the guaranteed soundness mean. Evaluated for any `m ≥ 1` so that
/// undersized samples can still be tested.
pub fn threshold<T: Scalar>(n: usize, m: u64, epsilon: T, constant: T, mu_u: T) -> Result<T> {
    check_gap_inputs(n, m, epsilon, constant)?;
    Ok(mu_u + T::lit(0.5) * gap_bound_unchecked(n, m, epsilon, constant).value)
}

/// `exp(−2z²/(m B²))`.
pub fn mcdiarmid_bound<T: Scalar>(z: T, m: u64, b: T) -> T {
    if z == T::zero() {
        return T::one();
    }
    (-(T::lit(2.0) * z * z) / (T::from_count(m) * b * b)).exp()
}

/// `exp(−z²/(2Σσ_j² + 2Bz/3))`.
pub fn bernstein_mcdiarmid_bound<T: Scalar>(z: T, b: T, sum_sigma2: T) -> T {
    if z == T::zero() {
        return T::one();
    }
    let two = T::lit(2.0);
    (-(z * z) / (two * sum_sigma2 + two * b * z / T::lit(3.0))).exp()
}

/// Per-sample variance proxy `2m/n³` of the statistic when `m ≤ n`.
pub fn small_regime_sample_variance<T: Scalar>(n: usize, m: u64) -> T {
    let nn = T::from_index(n);
    T::lit(2.0) * T::from_count(m) / (nn * nn * nn)
}

/// `Pr[Bin(m, 1/n) = k]`, exposed for the completeness-case table.
pub fn uniform_count_pmf<T: Scalar>(n: usize, m: u64, k: u64) -> T {
    binomial_pmf(m, T::one() / T::from_index(n), k)
}
