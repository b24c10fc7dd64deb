//! Distribution generators and sample files.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use hctest::{worst_case_family, Distribution, Histogram};
use serde_json::Value;

/// `uniform`, `point[:i]`, `family:k=K[,middle]`, or a path to a JSON
/// distribution (an object with `kind` and `weights`, or a bare weight array).
#[derive(Clone, Debug, PartialEq)]
pub enum DistSpec {
    Uniform,
    Point(usize),
    Family { heavy: usize, middle: bool },
    File(PathBuf),
}

impl FromStr for DistSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(DistSpec::Uniform);
        }
        if s == "point" {
            return Ok(DistSpec::Point(0));
        }
        if let Some(i) = s.strip_prefix("point:") {
            return Ok(DistSpec::Point(i.parse().context("point index")?));
        }
        if let Some(rest) = s.strip_prefix("family:") {
            let mut heavy = None;
            let mut middle = false;
            for part in rest.split(',') {
                match part.split_once('=') {
                    Some(("k", k)) => heavy = Some(k.parse::<usize>().context("family k")?),
                    None if part == "middle" => middle = true,
                    _ => bail!("unrecognized family option {part:?}"),
                }
            }
            let heavy = heavy.ok_or_else(|| anyhow!("family generator needs k=<heavy count>"))?;
            return Ok(DistSpec::Family { heavy, middle });
        }
        Ok(DistSpec::File(PathBuf::from(s)))
    }
}

impl DistSpec {
    /// Builds the distribution; `n` and `epsilon` are needed by the named generators.
    pub fn resolve(&self, n: Option<usize>, epsilon: Option<f64>) -> Result<Distribution> {
        let need_n = || n.ok_or_else(|| anyhow!("--n is required for generator distributions"));
        let dist = match self {
            DistSpec::Uniform => Distribution::uniform(need_n()?),
            DistSpec::Point(i) => {
                let n = need_n()?;
                if *i >= n {
                    bail!("point index {i} outside domain of size {n}");
                }
                Distribution::point_mass(n, *i)
            }
            DistSpec::Family { heavy, middle } => {
                let n = need_n()?;
                let eps = epsilon
                    .ok_or_else(|| anyhow!("--epsilon is required for the family generator"))?;
                let family = worst_case_family(n, eps)?;
                let member = family
                    .iter()
                    .find(|m| m.heavy == *heavy && m.middle == *middle)
                    .map(|m| m.distribution.clone())
                    .ok_or_else(|| {
                        anyhow!(
                            "no family member with k={heavy} (middle={middle}) at n={n}, ε={eps}"
                        )
                    })?;
                member
            }
            DistSpec::File(path) => load_distribution(path)?,
        };
        if let Some(n) = n {
            if dist.n() != n {
                bail!("distribution has {} elements but --n is {n}", dist.n());
            }
        }
        Ok(dist)
    }
}

pub fn load_distribution(path: &Path) -> Result<Distribution> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let dist = match value {
        Value::Array(_) => Distribution::new(serde_json::from_value(value)?)?,
        _ => serde_json::from_value(value)?,
    };
    Ok(dist)
}

/// Reads a histogram object, a JSON array of 0-based sample indices, or a
/// whitespace/comma separated list of indices.
pub fn load_samples(path: &Path, n: Option<usize>) -> Result<Histogram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let trimmed = text.trim_start();
    let indices: Vec<usize> = if trimmed.starts_with('{') {
        let hist: Histogram =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(n) = n {
            hist.ensure_domain(n)?;
        }
        return Ok(hist);
    } else if trimmed.starts_with('[') {
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    } else {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .with_context(|| format!("bad sample index {t:?}"))
            })
            .collect::<Result<_>>()?
    };
    let n = n.ok_or_else(|| anyhow!("--n is required when reading raw samples"))?;
    Ok(Histogram::from_samples(&indices, n)?)
}
