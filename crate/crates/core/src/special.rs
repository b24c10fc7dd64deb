//! Log-space special functions used by the exact binomial and Poisson sums.

use crate::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_index(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// `ln k!`; exact table lookup for small `k`.
pub fn ln_factorial<T: Scalar>(k: u64) -> T {
    if k < 2 {
        return T::zero();
    }
    if k <= 20 {
        let mut f: u64 = 1;
        for j in 2..=k {
            f *= j;
        }
        return T::from_count(f).ln();
    }
    ln_gamma(T::from_count(k) + T::one())
}

pub fn ln_binomial<T: Scalar>(n: u64, k: u64) -> T {
    debug_assert!(k <= n);
    ln_factorial::<T>(n) - ln_factorial::<T>(k) - ln_factorial::<T>(n - k)
}

/// `Pr[Bin(m, p) = k]`, with the degenerate endpoints `p ∈ {0, 1}` handled exactly.
pub fn binomial_pmf<T: Scalar>(m: u64, p: T, k: u64) -> T {
    if k > m {
        return T::zero();
    }
    if p <= T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    if p >= T::one() {
        return if k == m { T::one() } else { T::zero() };
    }
    let ln =
        ln_binomial::<T>(m, k) + T::from_count(k) * p.ln() + T::from_count(m - k) * (-p).ln_1p();
    ln.exp()
}

/// `Pr[Poi(λ) = k]`.
pub fn poisson_pmf<T: Scalar>(lambda: T, k: u64) -> T {
    if lambda <= T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    (T::from_count(k) * lambda.ln() - lambda - ln_factorial::<T>(k)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut f = 1.0f64;
        for k in 1..30u64 {
            f *= k as f64;
            let got: f64 = ln_gamma((k + 1) as f64);
            assert!((got - f.ln()).abs() < 1e-12 * f.ln().max(1.0), "k = {k}");
        }
        let half: f64 = ln_gamma(0.5);
        assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn binomial_pmf_sums_to_one() {
        for &(m, p) in &[(10u64, 0.3f64), (200, 0.01), (1000, 0.5)] {
            let total: f64 = (0..=m).map(|k| binomial_pmf(m, p, k)).sum();
            assert!((total - 1.0).abs() < 1e-11, "m = {m}");
        }
        assert_eq!(binomial_pmf(5, 0.0f64, 0), 1.0);
        assert_eq!(binomial_pmf(5, 1.0f64, 5), 1.0);
        assert_eq!(binomial_pmf(5, 1.0f64, 4), 0.0);
    }

    #[test]
    fn small_binomial_values() {
        let v: f64 = binomial_pmf(4, 0.5, 2);
        assert!((v - 0.375).abs() < 1e-15);
        let w: f32 = binomial_pmf(4, 0.5, 2);
        assert!((w - 0.375).abs() < 1e-6);
    }

    #[test]
    fn poisson_pmf_sums_to_one() {
        let total: f64 = (0..200).map(|k| poisson_pmf(12.5, k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(poisson_pmf(0.0f64, 0), 1.0);
    }
}
