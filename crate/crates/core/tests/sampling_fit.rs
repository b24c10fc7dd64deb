use hctest::rng::substream;
use hctest::sampling::{multinomial_with, poissonized_with};
use hctest::{sample_multinomial, Distribution, SamplingMode};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square_p_value(observed: &[u64], expected: &[f64]) -> f64 {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    ChiSquared::new((observed.len() - 1) as f64)
        .unwrap()
        .sf(stat)
}

#[test]
fn multinomial_cell_counts_fit() {
    let p = Distribution::new(vec![0.05, 0.1, 0.15, 0.2, 0.5]).unwrap();
    let m = 400_000;
    let hist = sample_multinomial(&p, m, 17).unwrap();
    let expected: Vec<f64> = p.weights().iter().map(|w| w * m as f64).collect();
    assert!(chi_square_p_value(hist.counts(), &expected) > 1e-3);
}

#[test]
fn first_cell_is_binomial_across_trials() {
    // X_1 for m = 8 draws with p_1 = 0.3, tallied over many independent streams.
    let p = Distribution::new(vec![0.3, 0.45, 0.25]).unwrap();
    let (m, trials) = (8u64, 20_000u64);
    let mut tally = vec![0u64; m as usize + 1];
    for j in 0..trials {
        let h = multinomial_with(&p, m, &mut substream(5, 1, j)).unwrap();
        tally[h.counts()[0] as usize] += 1;
    }
    let expected: Vec<f64> = (0..=m)
        .map(|k| trials as f64 * hctest::special::binomial_pmf(m, 0.3f64, k))
        .collect();
    // pool the sparse upper tail
    let (obs, exp): (Vec<u64>, Vec<f64>) = {
        let cut = 6;
        let mut o = tally[..cut].to_vec();
        let mut e = expected[..cut].to_vec();
        o.push(tally[cut..].iter().sum());
        e.push(expected[cut..].iter().sum());
        (o, e)
    };
    assert!(chi_square_p_value(&obs, &exp) > 1e-3);
}

#[test]
fn poissonized_totals_have_poisson_dispersion() {
    let w = Distribution::pseudo(vec![0.3, 0.3, 0.3]).unwrap();
    let trials = 5000u64;
    let totals: Vec<f64> = (0..trials)
        .map(|j| {
            let h = poissonized_with(&w, 50, &mut substream(9, 2, j)).unwrap();
            assert_eq!(h.mode(), SamplingMode::Poissonized);
            h.total() as f64
        })
        .collect();
    let mean = totals.iter().sum::<f64>() / trials as f64;
    let var = totals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    // Σ Poi(15) = Poi(45)
    assert!(
        (mean - 45.0).abs() < 4.0 * (45.0f64 / trials as f64).sqrt(),
        "{mean}"
    );
    assert!((var / 45.0 - 1.0).abs() < 0.1, "{var}");
}
