//! Subcommand arguments and handlers. Each handler returns the process exit code.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use hctest::calibration::{calibrate, default_grid, CalibrationSettings, GridCell};
use hctest::hardness::{indistinguishability_witness, witness_samples};
use hctest::majorization::null_calibrated_threshold;
use hctest::rng::{derive_seed, substream};
use hctest::testers::{
    identity_required_samples, DEFAULT_SAMPLE_CONSTANT, DEFAULT_THRESHOLD_CONSTANT,
};
use hctest::{
    dominance_check, empirical_error_estimate, exact, hardness, lb_instance, required_samples,
    sample_multinomial, test_identity, test_uniformity, worst_case_type2, Config, Decision,
    Distribution, Side, StatisticKind, Tester, VERSION,
};
use serde::{Deserialize, Serialize};

use crate::config::{merge, need, SampleSize};
use crate::report::{emit, write_csv, Report};
use crate::source::{load_samples, DistSpec};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 3;

const CHANNEL_LABEL: u64 = 0x6368_616e;
const THRESHOLD_LABEL: u64 = 0x7468_7265;

fn report<C: Serialize, R: Serialize>(
    command: &str,
    seed: Option<u64>,
    config: C,
    result: R,
    started: Instant,
    output: Option<&std::path::Path>,
) -> Result<()> {
    emit(
        &Report {
            command,
            version: VERSION,
            seed,
            config,
            result,
            duration_ms: started.elapsed().as_millis(),
        },
        output,
    )
}

fn tester_config(
    n: usize,
    epsilon: f64,
    delta: f64,
    c: Option<f64>,
    s: Option<f64>,
) -> Result<Config> {
    Ok(Config::new(n, epsilon, delta)?.with_constants(
        c.unwrap_or(DEFAULT_THRESHOLD_CONSTANT),
        s.unwrap_or(DEFAULT_SAMPLE_CONSTANT),
    )?)
}

fn decision_code(decision: Decision) -> i32 {
    match decision {
        Decision::Yes => EXIT_YES,
        Decision::No => EXIT_NO,
    }
}

/// Options shared by every experiment command.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Common {
    /// JSON file with flat keys mirroring the flags; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// RNG seed; the same seed and config reproduce the same report.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TestUniformityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Domain size (inferred from a histogram file when omitted).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Failure probability [default: 0.05].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Number of samples to draw: `auto` uses the required sample size.
    #[arg(long)]
    pub m: Option<SampleSize>,
    /// Generator: uniform, point[:i], family:k=K[,middle] or a distribution JSON file.
    #[arg(long)]
    pub from: Option<String>,
    /// Sample file: histogram JSON, JSON index array or plain index list.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Threshold constant C (calibrated default when omitted).
    #[arg(long)]
    pub constant_c: Option<f64>,
    /// Sample-size constant (calibrated default when omitted).
    #[arg(long)]
    pub sample_constant: Option<f64>,
}

#[derive(Serialize)]
struct UniformityResult {
    #[serde(flatten)]
    verdict: hctest::Verdict64,
    n: usize,
    m: u64,
    required_samples: u64,
}

pub fn test_uniformity_cmd(args: &TestUniformityArgs) -> Result<i32> {
    let started = Instant::now();
    let mut a = merge(args, args.common.config.as_deref())?;
    let epsilon = need(a.epsilon, "epsilon")?;
    let delta = *a.delta.get_or_insert(0.05);
    let seed = *a.common.seed.get_or_insert(0);
    let hist = match (&a.input, &a.from) {
        (Some(path), None) => Some(load_samples(path, a.n)?),
        (None, Some(_)) => None,
        (Some(_), Some(_)) => bail!("--input and --from are mutually exclusive"),
        (None, None) => bail!("supply samples with --input or a generator with --from"),
    };
    let n = match &hist {
        Some(h) => *a.n.get_or_insert(h.n()),
        None => need(a.n, "n")?,
    };
    let cfg = tester_config(n, epsilon, delta, a.constant_c, a.sample_constant)?;
    a.constant_c = Some(cfg.constant_c);
    a.sample_constant = Some(cfg.sample_constant);
    let needed = required_samples(&cfg);
    let hist = match hist {
        Some(h) => h,
        None => {
            let spec: DistSpec = a.from.as_deref().unwrap_or("uniform").parse()?;
            let m = a.m.get_or_insert(SampleSize::Auto).resolve(needed);
            sample_multinomial(&spec.resolve(Some(n), Some(epsilon))?, m, seed)?
        }
    };
    let verdict = test_uniformity(&hist, &cfg)?;
    let code = decision_code(verdict.decision);
    let result = UniformityResult {
        verdict,
        n,
        m: hist.total(),
        required_samples: needed,
    };
    report(
        "test-uniformity",
        Some(seed),
        &a,
        result,
        started,
        a.common.output.as_deref(),
    )?;
    Ok(code)
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TestIdentityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Reference distribution q: uniform, point[:i], family:k=K or a JSON file.
    #[arg(long)]
    pub reference: Option<String>,
    /// Domain size, needed when the reference is a named generator.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub m: Option<SampleSize>,
    /// Sample generator; `reference` draws from q itself.
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Threshold constant C (calibrated default when omitted).
    #[arg(long)]
    pub constant_c: Option<f64>,
    /// Sample-size constant (calibrated default when omitted).
    #[arg(long)]
    pub sample_constant: Option<f64>,
}

#[derive(Serialize)]
struct IdentityResult {
    #[serde(flatten)]
    verdict: hctest::IdentityVerdict<f64>,
    n: usize,
    m: u64,
    required_samples: u64,
}

pub fn test_identity_cmd(args: &TestIdentityArgs) -> Result<i32> {
    let started = Instant::now();
    let mut a = merge(args, args.common.config.as_deref())?;
    let epsilon = need(a.epsilon, "epsilon")?;
    let delta = *a.delta.get_or_insert(0.05);
    let seed = *a.common.seed.get_or_insert(0);
    let reference: DistSpec = need(a.reference.as_deref(), "reference")?.parse()?;
    let q = reference.resolve(a.n, Some(epsilon))?;
    let n = *a.n.get_or_insert(q.n());
    let cfg = tester_config(n, epsilon, delta, a.constant_c, a.sample_constant)?;
    a.constant_c = Some(cfg.constant_c);
    a.sample_constant = Some(cfg.sample_constant);
    let needed = identity_required_samples(&cfg)?;
    let hist = match (&a.input, &a.from) {
        (Some(path), None) => load_samples(path, Some(n))?,
        (None, Some(from)) => {
            let p = if from == "reference" {
                q.clone()
            } else {
                from.parse::<DistSpec>()?.resolve(Some(n), Some(epsilon))?
            };
            let m = a.m.get_or_insert(SampleSize::Auto).resolve(needed);
            sample_multinomial(&p, m, seed)?
        }
        (Some(_), Some(_)) => bail!("--input and --from are mutually exclusive"),
        (None, None) => bail!("supply samples with --input or a generator with --from"),
    };
    let verdict = test_identity(&hist, &q, &cfg, &mut substream(seed, CHANNEL_LABEL, 0))?;
    let code = decision_code(verdict.verdict.decision);
    let result = IdentityResult {
        verdict,
        n,
        m: hist.total(),
        required_samples: needed,
    };
    report(
        "test-identity",
        Some(seed),
        &a,
        result,
        started,
        a.common.output.as_deref(),
    )?;
    Ok(code)
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EvalWorstCaseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// empirical-tv, collisions, chi-squared or `all` [default: empirical-tv].
    #[arg(long)]
    pub statistic: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub m: Option<SampleSize>,
    /// Rejection threshold. Defaults to the tester's threshold for
    /// empirical-tv and to the null (1 − δ)-quantile otherwise.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Trials per family member [default: 2000].
    #[arg(long)]
    pub trials: Option<u64>,
    /// Threshold constant C (calibrated default when omitted).
    #[arg(long)]
    pub constant_c: Option<f64>,
    /// Sample-size constant (calibrated default when omitted).
    #[arg(long)]
    pub sample_constant: Option<f64>,
    /// Per-member CSV rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct WorstCaseResult {
    threshold_source: &'static str,
    type1: hctest::RateEstimate,
    #[serde(flatten)]
    worst: hctest::WorstCaseReport,
}

#[derive(Serialize)]
#[serde(untagged)]
enum WorstCaseOutput {
    One(WorstCaseResult),
    All { runs: Vec<WorstCaseResult> },
}

#[derive(Serialize)]
struct MemberRow<'a> {
    statistic: StatisticKind,
    heavy: usize,
    middle: bool,
    description: &'a str,
    events: u64,
    trials: u64,
    rate: f64,
    ci_upper: f64,
}

struct WorstCaseRun {
    n: usize,
    m: u64,
    epsilon: f64,
    delta: f64,
    trials: u64,
    seed: u64,
    threshold: Option<f64>,
}

fn worst_case_one(
    run: &WorstCaseRun,
    cfg: &Config,
    statistic: StatisticKind,
) -> Result<WorstCaseResult> {
    let WorstCaseRun {
        n,
        m,
        epsilon,
        delta,
        trials,
        seed,
        ..
    } = *run;
    let (threshold, source) = match (run.threshold, statistic) {
        (Some(t), _) => (t, "explicit"),
        (None, StatisticKind::EmpiricalTv) => (Tester::new(*cfg, m)?.threshold(), "tester"),
        (None, _) => (
            null_calibrated_threshold(
                statistic,
                n,
                m,
                delta,
                trials,
                derive_seed(seed, THRESHOLD_LABEL),
            )?,
            "null-quantile",
        ),
    };
    let uniform = Distribution::uniform(n);
    let type1 = empirical_error_estimate(
        statistic,
        &uniform,
        m,
        threshold,
        Side::Above,
        trials.max(100),
        seed,
    )?;
    let worst = worst_case_type2(statistic, n, m, epsilon, threshold, trials, seed)?;
    Ok(WorstCaseResult {
        threshold_source: source,
        type1,
        worst,
    })
}

pub fn eval_worst_case_cmd(args: &EvalWorstCaseArgs) -> Result<i32> {
    let started = Instant::now();
    let mut a = merge(args, args.common.config.as_deref())?;
    let n = need(a.n, "n")?;
    let epsilon = need(a.epsilon, "epsilon")?;
    let delta = *a.delta.get_or_insert(0.05);
    let seed = *a.common.seed.get_or_insert(0);
    let trials = *a.trials.get_or_insert(2000);
    let which = a
        .statistic
        .get_or_insert_with(|| "empirical-tv".into())
        .clone();
    let statistics: Vec<StatisticKind> = if which == "all" {
        StatisticKind::ALL
            .into_iter()
            .filter(|s| s.is_convex())
            .collect()
    } else {
        let s: StatisticKind = which.parse()?;
        s.ensure_convex()?;
        vec![s]
    };
    let cfg = tester_config(n, epsilon, delta, a.constant_c, a.sample_constant)?;
    a.constant_c = Some(cfg.constant_c);
    a.sample_constant = Some(cfg.sample_constant);
    let m =
        a.m.get_or_insert(SampleSize::Auto)
            .resolve(required_samples(&cfg));
    let run = WorstCaseRun {
        n,
        m,
        epsilon,
        delta,
        trials,
        seed,
        threshold: a.threshold,
    };
    let mut runs = statistics
        .into_iter()
        .map(|s| worst_case_one(&run, &cfg, s))
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &a.csv {
        write_csv(
            path,
            runs.iter().flat_map(|r| {
                r.worst.rows.iter().map(|row| MemberRow {
                    statistic: r.worst.statistic,
                    heavy: row.heavy,
                    middle: row.middle,
                    description: &row.description,
                    events: row.estimate.events,
                    trials: row.estimate.trials,
                    rate: row.estimate.rate,
                    ci_upper: row.estimate.ci_upper,
                })
            }),
        )?;
    }
    let result = if which == "all" {
        WorstCaseOutput::All { runs }
    } else {
        let one = runs.pop().expect("one statistic");
        a.threshold = Some(one.worst.threshold);
        WorstCaseOutput::One(one)
    };
    report(
        "eval-worst-case",
        Some(seed),
        &a,
        result,
        started,
        a.common.output.as_deref(),
    )?;
    Ok(EXIT_YES)
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DominanceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// The majorizing distribution (same syntax as --from).
    #[arg(long)]
    pub p: Option<String>,
    /// The majorized distribution.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Proximity for family generators.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// A convex statistic, or `all` [default: all].
    #[arg(long)]
    pub statistic: Option<String>,
    #[arg(long)]
    pub m: Option<u64>,
    /// [default: 100000]
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Serialize)]
struct DominanceRow {
    statistic: StatisticKind,
    #[serde(flatten)]
    report: hctest::DominanceReport,
}

pub fn dominance_cmd(args: &DominanceArgs) -> Result<i32> {
    let started = Instant::now();
    let mut a = merge(args, args.common.config.as_deref())?;
    let p = need(a.p.as_deref(), "p")?
        .parse::<DistSpec>()?
        .resolve(a.n, a.epsilon)?;
    let q = need(a.q.as_deref(), "q")?
        .parse::<DistSpec>()?
        .resolve(a.n, a.epsilon)?;
    let m = need(a.m, "m")?;
    let seed = *a.common.seed.get_or_insert(0);
    let trials = *a.trials.get_or_insert(100_000);
    let which = a.statistic.get_or_insert_with(|| "all".into()).clone();
    let statistics: Vec<StatisticKind> = if which == "all" {
        StatisticKind::ALL
            .into_iter()
            .filter(|s| s.is_convex())
            .collect()
    } else {
        vec![which.parse()?]
    };
    let rows = statistics
        .into_iter()
        .map(|s| {
            Ok(DominanceRow {
                statistic: s,
                report: dominance_check(&p, &q, s, m, trials, seed)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let code = if rows.iter().all(|r| r.report.pass) {
        EXIT_YES
    } else {
        EXIT_NO
    };
    report(
        "dominance-check",
        Some(seed),
        &a,
        rows,
        started,
        a.common.output.as_deref(),
    )?;
    Ok(code)
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct LbInstanceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Also run the Monte Carlo indistinguishability witness.
    #[arg(long)]
    pub witness: bool,
    /// Witness failure probability [default: 0.01].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Witness Poisson rate; defaults to factor·√(n ln(1/δ))/ε².
    #[arg(long)]
    pub m: Option<u64>,
    /// [default: 0.2]
    #[arg(long)]
    pub factor: Option<f64>,
    /// Witness trials per hypothesis [default: 10000].
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Serialize)]
struct LbResult {
    instance: hctest::Instance,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<hardness::IndistinguishabilityWitness>,
}

pub fn lb_instance_cmd(args: &LbInstanceArgs) -> Result<i32> {
    let started = Instant::now();
    let mut a = merge(args, args.common.config.as_deref())?;
    let n = need(a.n, "n")?;
    let epsilon = need(a.epsilon, "epsilon")?;
    let seed = *a.common.seed.get_or_insert(0);
    let instance = lb_instance(n, epsilon, seed)?;
    let witness = if a.witness {
        let delta = *a.delta.get_or_insert(0.01);
        let factor = *a.factor.get_or_insert(0.2);
        let m =
            *a.m.get_or_insert(witness_samples(n, epsilon, delta, factor));
        let trials = *a.trials.get_or_insert(10_000);
        Some(indistinguishability_witness(
            n, epsilon, delta, m, trials, seed,
        )?)
    } else {
        None
    };
    report(
        "lb-instance",
        Some(seed),
        &a,
        LbResult { instance, witness },
        started,
        a.common.output.as_deref(),
    )?;
    Ok(EXIT_YES)
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CalibrateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Cells as `n:epsilon:delta`, comma separated [default: the bundled grid].
    #[arg(long)]
    pub grid: Option<String>,
    /// Trials per cell and per family member [default: 2000].
    #[arg(long)]
    pub trials: Option<u64>,
    /// Safety factor on the minimal sample constant [default: 1.15].
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub lower: Option<f64>,
    #[arg(long)]
    pub upper: Option<f64>,
    #[arg(long)]
    pub steps: Option<u32>,
    /// Per-cell CSV rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_grid(text: &str) -> Result<Vec<GridCell>> {
    text.split(',')
        .map(|cell| {
            let parts: Vec<&str> = cell.trim().split(':').collect();
            let [n, e, d] = parts[..] else {
                bail!("grid cell {cell:?} is not n:epsilon:delta");
            };
            Ok(GridCell::new(n.parse()?, e.parse()?, d.parse()?))
        })
        .collect()
}

#[derive(Serialize)]
struct CellRow {
    n: usize,
    epsilon: f64,
    delta: f64,
    m: u64,
    threshold: f64,
    type1_rate: f64,
    type1_ci: f64,
    type2_worst_rate: f64,
    type2_worst_ci: f64,
    argmax_heavy: usize,
    pass: bool,
}

pub fn calibrate_cmd(args: &CalibrateArgs) -> Result<i32> {
    let started = Instant::now();
    let mut a = merge(args, args.common.config.as_deref())?;
    let defaults = CalibrationSettings::default();
    let settings = CalibrationSettings {
        trials: *a.trials.get_or_insert(defaults.trials),
        seed: *a.common.seed.get_or_insert(defaults.seed),
        margin: *a.margin.get_or_insert(defaults.margin),
        lower: *a.lower.get_or_insert(defaults.lower),
        upper: *a.upper.get_or_insert(defaults.upper),
        bisection_steps: *a.steps.get_or_insert(defaults.bisection_steps),
    };
    let grid = match &a.grid {
        Some(text) => parse_grid(text)?,
        None => default_grid(),
    };
    let result = calibrate(&grid, &settings)?;
    if let Some(path) = &a.csv {
        write_csv(
            path,
            result.achieved_errors.iter().map(|c| CellRow {
                n: c.cell.n,
                epsilon: c.cell.epsilon,
                delta: c.cell.delta,
                m: c.m,
                threshold: c.threshold,
                type1_rate: c.type1.rate,
                type1_ci: c.type1.ci_upper,
                type2_worst_rate: c.type2_worst.rate,
                type2_worst_ci: c.type2_worst.ci_upper,
                argmax_heavy: c.argmax_heavy,
                pass: c.pass,
            }),
        )?;
    }
    let code = if result.all_pass { EXIT_YES } else { EXIT_NO };
    report(
        "calibrate",
        Some(settings.seed),
        &a,
        result,
        started,
        a.common.output.as_deref(),
    )?;
    Ok(code)
}

/// Exact calculators; flags only.
#[derive(Subcommand, Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
pub enum ExactOp {
    /// μ(U_n), the expected statistic under uniform samples.
    MuUniform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
    },
    /// μ(p) for a distribution.
    Mu {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        m: u64,
    },
    /// μ_t(p) = (1/m) Σ E[(X_i − t)⁺].
    MuT {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: f64,
    },
    /// Diagonal Hessian entry of μ_t at coordinate mass p.
    Hessian {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        p: f64,
    },
    /// Lower bound on the expectation gap, with its regime.
    Gap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_CONSTANT)]
        constant: f64,
    },
    /// Tester threshold μ(U_n) + ½·gap.
    Threshold {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_CONSTANT)]
        constant: f64,
    },
    /// Bounded-difference tail bounds.
    Tail {
        #[arg(long)]
        z: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        m: u64,
        /// Σσ² for the variance-sensitive bound.
        #[arg(long)]
        sigma2_sum: Option<f64>,
    },
    /// Sample size the tester uses for (n, ε, δ).
    RequiredSamples {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_CONSTANT)]
        sample_constant: f64,
    },
    /// Lower-bound sample complexity, up to the given constant.
    LowerBoundSamples {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
    },
    /// H² between Poi(λ) and the symmetric mixture at ±ε.
    HellingerMixture {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        truncation: Option<u64>,
    },
    /// Total-variation upper bound implied by a squared Hellinger distance.
    TvFromHellinger {
        #[arg(long)]
        h2: f64,
    },
}

pub fn exact_cmd(op: &ExactOp, output: Option<&std::path::Path>) -> Result<i32> {
    use serde_json::json;
    let started = Instant::now();
    let value = match op {
        ExactOp::MuUniform { n, m } => json!({ "mu_uniform": exact::mu_uniform::<f64>(*n, *m) }),
        ExactOp::Mu {
            dist,
            n,
            epsilon,
            m,
        } => {
            let p = dist.parse::<DistSpec>()?.resolve(*n, *epsilon)?;
            json!({ "mu": exact::mu_exact(&p, *m)?, "mu_uniform": exact::mu_uniform::<f64>(p.n(), *m) })
        }
        ExactOp::MuT {
            dist,
            n,
            epsilon,
            m,
            t,
        } => {
            let p = dist.parse::<DistSpec>()?.resolve(*n, *epsilon)?;
            json!({ "mu_t": exact::mu_t_exact(&p, *m, *t)? })
        }
        ExactOp::Hessian { m, t, p } => {
            json!({ "hessian_entry": exact::hessian_entry(*m, *t, *p)? })
        }
        ExactOp::Gap {
            n,
            m,
            epsilon,
            constant,
        } => {
            json!(exact::expectation_gap_bound(*n, *m, *epsilon, *constant)?)
        }
        ExactOp::Threshold {
            n,
            m,
            epsilon,
            constant,
        } => {
            let mu = exact::mu_uniform::<f64>(*n, *m);
            json!({ "threshold": exact::threshold(*n, *m, *epsilon, *constant, mu)?, "mu_uniform": mu })
        }
        ExactOp::Tail {
            z,
            b,
            m,
            sigma2_sum,
        } => {
            let mut q = exact::TailBoundQuery::new(*z, *b, *m)?;
            if let Some(s) = sigma2_sum {
                q = q.with_variances(vec![*s])?;
            }
            json!({ "mcdiarmid": q.mcdiarmid(), "bernstein": q.bernstein() })
        }
        ExactOp::RequiredSamples {
            n,
            epsilon,
            delta,
            sample_constant,
        } => {
            let cfg = tester_config(*n, *epsilon, *delta, None, Some(*sample_constant))?;
            json!({ "required_samples": required_samples(&cfg) })
        }
        ExactOp::LowerBoundSamples {
            n,
            epsilon,
            delta,
            constant,
        } => {
            json!({ "lower_bound_samples": hardness::lower_bound_samples(*n, *epsilon, *delta, *constant)? })
        }
        ExactOp::HellingerMixture {
            lambda,
            epsilon,
            truncation,
        } => {
            json!({ "hellinger2": hardness::hellinger2_poisson_mixture(*lambda, *epsilon, *truncation)? })
        }
        ExactOp::TvFromHellinger { h2 } => {
            json!({ "tv_upper": hardness::tv_upper_from_hellinger(*h2)? })
        }
    };
    report("exact", None, op, value, started, output)?;
    Ok(EXIT_YES)
}
