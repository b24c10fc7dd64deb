// Shared helpers for integration tests: independent oracles and generators.
#![allow(dead_code)]

use hctest::Distribution;
use rand::Rng;

/// `E[½ Σ |X_i/m − 1/n|]` and `(1/m) Σ E[(X_i − t)⁺]` by enumerating all `n^m`
/// ordered samples.
pub fn brute_force(p: &[f64], m: u32, t: f64) -> (f64, f64) {
    let n = p.len();
    let total = n.pow(m);
    let (mut tv, mut excess) = (0.0, 0.0);
    let mut counts = vec![0u32; n];
    for code in 0..total {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut c = code;
        let mut prob = 1.0;
        for _ in 0..m {
            let i = c % n;
            c /= n;
            counts[i] += 1;
            prob *= p[i];
        }
        let s: f64 = counts
            .iter()
            .map(|&x| (x as f64 / m as f64 - 1.0 / n as f64).abs())
            .sum::<f64>()
            * 0.5;
        let e: f64 = counts.iter().map(|&x| (x as f64 - t).max(0.0)).sum::<f64>() / m as f64;
        tv += prob * s;
        excess += prob * e;
    }
    (tv, excess)
}

pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Distribution {
    let w: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
    Distribution::from_unnormalized(w).unwrap()
}

/// A random distribution with some exact zeros and repeated masses.
pub fn random_spiky_distribution<R: Rng>(rng: &mut R, n: usize) -> Distribution {
    let w: Vec<f64> = (0..n)
        .map(|_| match rng.random_range(0..4) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        return Distribution::uniform(n);
    }
    Distribution::from_unnormalized(w).unwrap()
}

/// `q = Σ λ_j P_j p` for random permutations `P_j`, so `q` is majorized by `p`.
pub fn random_majorized<R: Rng>(rng: &mut R, p: &Distribution, mixes: usize) -> Distribution {
    use rand::seq::SliceRandom;
    let n = p.n();
    let lambdas: Vec<f64> = (0..mixes).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = lambdas.iter().sum();
    let mut q = vec![0.0; n];
    for &l in &lambdas {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            q[i] += l / total * p.weights()[j];
        }
    }
    Distribution::from_unnormalized(q).unwrap()
}
