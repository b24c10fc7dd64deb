mod common;

use common::brute_force;
use hctest::exact::{
    expected_excess, hessian_entry, mu_exact, mu_t_coordinate, mu_t_exact, mu_uniform,
};
use hctest::{Distribution, Distribution32};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn mu_matches_enumeration_on_small_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=3usize {
        for m in 1..=6u32 {
            let u = Distribution::uniform(n);
            let (tv, _) = brute_force(u.weights(), m, 0.0);
            assert!(
                (mu_uniform::<f64>(n, m as u64) - tv).abs() < 1e-12,
                "n={n} m={m}"
            );
            let p = common::random_spiky_distribution(&mut rng, n);
            let t = rng.random_range(0.0..m as f64);
            let (tv, ex) = brute_force(p.weights(), m, t);
            assert!((mu_exact(&p, m as u64).unwrap() - tv).abs() < 1e-12);
            assert!((mu_t_exact(&p, m as u64, t).unwrap() - ex).abs() < 1e-12);
        }
    }
}

#[test]
fn excess_is_convex_and_decreasing_in_t() {
    for m in [5u64, 17, 60] {
        for p in [0.01, 0.3, 0.77] {
            let vals: Vec<f64> = (0..=4 * m)
                .map(|j| expected_excess(m, p, j as f64 / 4.0))
                .collect();
            assert!((vals[0] - m as f64 * p).abs() < 1e-10);
            for w in vals.windows(3) {
                assert!(w[1] <= w[0] + 1e-13);
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-12);
            }
        }
    }
}

#[test]
fn hessian_matches_second_differences() {
    let h = 1e-4;
    for m in (6u64..=30).step_by(3) {
        for t2 in 0..(2 * (m - 1)) {
            let t = t2 as f64 / 2.0;
            for p in [0.1, 0.35, 0.6, 0.9] {
                let d2 = (mu_t_coordinate(m, t, p + h) - 2.0 * mu_t_coordinate(m, t, p)
                    + mu_t_coordinate(m, t, p - h))
                    / (h * h);
                let s = hessian_entry(m, t, p).unwrap();
                assert!(
                    (s - d2).abs() <= 1e-4 * d2.abs().max(1.0),
                    "m={m} t={t} p={p}: {s} vs {d2}"
                );
            }
        }
    }
}

#[test]
fn hessian_interpolates_linearly() {
    for m in [6u64, 13, 40] {
        for p in [0.05, 0.5, 0.95] {
            for k in 0..(m - 1) {
                let (lo, hi) = (
                    hessian_entry(m, k as f64, p).unwrap(),
                    hessian_entry(m, (k + 1) as f64, p).unwrap(),
                );
                for f in [0.25, 0.5, 0.8] {
                    let mid = hessian_entry(m, k as f64 + f, p).unwrap();
                    assert!((mid - ((1.0 - f) * lo + f * hi)).abs() <= 1e-12 * lo.max(hi).max(1.0));
                }
            }
        }
    }
}

#[test]
fn uniform_minimizes_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let n = rng.random_range(2..30);
        let m = rng.random_range(1..200u64);
        let p = common::random_distribution(&mut rng, n);
        assert!(mu_exact(&p, m).unwrap() >= mu_uniform::<f64>(n, m) - 1e-12);
    }
}

#[test]
fn single_precision_tracks_double() {
    let p64 = Distribution::new(vec![0.5, 0.25, 0.125, 0.125]).unwrap();
    let p32 = Distribution32::new(vec![0.5, 0.25, 0.125, 0.125]).unwrap();
    for m in [3u64, 20, 150] {
        let a = mu_exact(&p64, m).unwrap();
        let b = mu_exact(&p32, m).unwrap() as f64;
        assert!((a - b).abs() < 1e-4, "{a} {b}");
        assert!((mu_uniform::<f64>(7, m) - mu_uniform::<f32>(7, m) as f64).abs() < 1e-4);
    }
}

#[test]
fn large_m_is_finite_and_tends_to_distance() {
    let p = Distribution::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
    let mu = mu_exact(&p, 1_000_000).unwrap();
    let tv = 0.5 * (0.15 + 0.05 + 0.05 + 0.15);
    assert!(mu.is_finite() && (mu - tv).abs() < 1e-3, "{mu}");
}
