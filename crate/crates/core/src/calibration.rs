//! Finite-size calibration of the tester's two universal constants.
//!
//! For a candidate sample constant `s`, every grid cell gets `m(s)` samples.
//! The threshold constant `C` is then chosen so that the threshold sits at
//! the midpoint between `μ(U_n)` and the smallest exact expectation over the
//! worst-case family, minimized across cells. The smallest `s` whose
//! Clopper–Pearson upper bounds on type-I and worst-case type-II error are all
//! at most `δ` is found by bisection, inflated by a safety margin and
//! re-verified on a fresh seed.

use serde::{Deserialize, Serialize};

use crate::confidence::RateEstimate;
use crate::error::{Error, Result};
use crate::exact::{mu_exact, mu_uniform, Regime};
use crate::majorization::{empirical_error_estimate, worst_case_family, worst_case_type2, Side};
use crate::rng::derive_seed;
use crate::testers::{required_samples, StatisticKind, TesterConfig, UniformityTester};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
}

impl GridCell {
    pub fn new(n: usize, epsilon: f64, delta: f64) -> Self {
        Self { n, epsilon, delta }
    }
}

/// The grid the bundled default constants were calibrated on.
pub fn default_grid() -> Vec<GridCell> {
    vec![
        GridCell::new(100, 0.3, 0.05),
        GridCell::new(50, 0.5, 0.05),
        GridCell::new(200, 0.25, 0.01),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellErrors {
    pub cell: GridCell,
    pub m: u64,
    pub regime: Regime,
    pub threshold: f64,
    pub type1: RateEstimate,
    pub type2_worst: RateEstimate,
    pub argmax_heavy: usize,
    /// `max` of the two Clopper–Pearson upper bounds.
    pub ci: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub constant_c: f64,
    pub sample_constant: f64,
    /// Smallest passing sample constant found before the margin was applied.
    pub minimal_sample_constant: f64,
    pub margin: f64,
    pub trials: u64,
    pub seed: u64,
    pub grid: Vec<GridCell>,
    pub achieved_errors: Vec<CellErrors>,
    pub all_pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSettings {
    pub trials: u64,
    pub seed: u64,
    /// Multiplier applied to the minimal passing sample constant.
    pub margin: f64,
    /// Initial bracket for the sample constant.
    pub lower: f64,
    pub upper: f64,
    pub bisection_steps: u32,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        Self {
            trials: 2000,
            seed: 0,
            margin: 1.15,
            lower: 0.05,
            upper: 8.0,
            bisection_steps: 10,
        }
    }
}

fn config(cell: &GridCell, constant_c: f64, sample_constant: f64) -> Result<TesterConfig<f64>> {
    TesterConfig::new(cell.n, cell.epsilon, cell.delta)?.with_constants(constant_c, sample_constant)
}

/// Smallest exact family expectation gap over the regime shape, at `m` samples.
pub fn normalized_min_gap(cell: &GridCell, m: u64) -> Result<f64> {
    let family = worst_case_family(cell.n, cell.epsilon)?;
    let mu_u = mu_uniform::<f64>(cell.n, m);
    let mut min_gap = f64::INFINITY;
    for member in family.iter() {
        min_gap = min_gap.min(mu_exact(&member.distribution, m)? - mu_u);
    }
    let shape = Regime::classify(cell.n, m, cell.epsilon).shape(cell.n, m, cell.epsilon);
    Ok(min_gap / shape)
}

/// The threshold constant implied by `sample_constant` on `grid`.
pub fn threshold_constant_for(grid: &[GridCell], sample_constant: f64) -> Result<f64> {
    let mut c = f64::INFINITY;
    for cell in grid {
        let m = required_samples(&config(cell, 1.0, sample_constant)?);
        c = c.min(normalized_min_gap(cell, m)?);
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!(
            "non-positive expectation gap, C = {c}"
        )));
    }
    Ok(c)
}

/// Measures type-I and worst-case type-II error of the tester on one cell.
pub fn evaluate_cell(
    cell: &GridCell,
    constant_c: f64,
    sample_constant: f64,
    trials: u64,
    seed: u64,
) -> Result<CellErrors> {
    let cfg = config(cell, constant_c, sample_constant)?;
    let m = required_samples(&cfg);
    let tester = UniformityTester::new(cfg, m)?;
    let t = tester.threshold();
    let cell_seed = derive_seed(
        seed,
        ((cell.n as u64) << 32) ^ cell.epsilon.to_bits() ^ cell.delta.to_bits().rotate_left(17),
    );
    let uniform = crate::DiscreteDistribution::<f64>::uniform(cell.n);
    let type1 = empirical_error_estimate(
        StatisticKind::EmpiricalTv,
        &uniform,
        m,
        t,
        Side::Above,
        trials,
        cell_seed,
    )?;
    let worst = worst_case_type2(
        StatisticKind::EmpiricalTv,
        cell.n,
        m,
        cell.epsilon,
        t,
        trials,
        cell_seed,
    )?;
    let type2_worst = worst
        .rows
        .iter()
        .map(|r| r.estimate)
        .max_by(|a, b| a.ci_upper.total_cmp(&b.ci_upper))
        .expect("family is nonempty");
    let ci = type1.ci_upper.max(worst.ci_upper);
    Ok(CellErrors {
        cell: *cell,
        m,
        regime: tester.regime(),
        threshold: t,
        type1,
        type2_worst,
        argmax_heavy: worst.argmax_heavy,
        ci,
        pass: ci <= cell.delta,
    })
}

fn evaluate_grid(
    grid: &[GridCell],
    sample_constant: f64,
    trials: u64,
    seed: u64,
) -> Result<(f64, Vec<CellErrors>)> {
    let c = threshold_constant_for(grid, sample_constant)?;
    let cells = grid
        .iter()
        .map(|cell| evaluate_cell(cell, c, sample_constant, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok((c, cells))
}

/// Bisects for the smallest sample constant meeting every cell's error
/// budget, then applies the margin and re-evaluates on an independent seed.
pub fn calibrate(grid: &[GridCell], settings: &CalibrationSettings) -> Result<CalibrationResult> {
    if grid.is_empty() {
        return Err(Error::Empty);
    }
    if !(settings.margin >= 1.0 && settings.lower > 0.0 && settings.upper > settings.lower) {
        return Err(Error::ParameterOutOfRange(
            "need margin ≥ 1 and 0 < lower < upper".into(),
        ));
    }
    let passes = |s: f64| -> Result<bool> {
        let (_, cells) = evaluate_grid(grid, s, settings.trials, settings.seed)?;
        Ok(cells.iter().all(|c| c.pass))
    };
    if !passes(settings.upper)? {
        let cell = grid[0];
        return Err(Error::CalibrationInfeasible {
            n: cell.n,
            epsilon: cell.epsilon,
            delta: cell.delta,
            reason: format!("error budget not met at sample constant {}", settings.upper),
        });
    }
    let (mut lo, mut hi) = (settings.lower, settings.upper);
    for _ in 0..settings.bisection_steps {
        let mid = (lo * hi).sqrt();
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let sample_constant = hi * settings.margin;
    let verify_seed = derive_seed(settings.seed, 0x7665_7269);
    let (constant_c, achieved_errors) =
        evaluate_grid(grid, sample_constant, settings.trials, verify_seed)?;
    Ok(CalibrationResult {
        constant_c,
        sample_constant,
        minimal_sample_constant: hi,
        margin: settings.margin,
        trials: settings.trials,
        seed: settings.seed,
        grid: grid.to_vec(),
        all_pass: achieved_errors.iter().all(|c| c.pass),
        achieved_errors,
    })
}
