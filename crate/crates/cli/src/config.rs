//! Flat JSON config files whose keys mirror the command-line flags.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

/// Overlays the flags that were given on the file's values. Unset options and
/// `false` switches do not override the file.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, file: Option<&Path>) -> Result<T> {
    let overlay = serde_json::to_value(flags)?;
    let Some(path) = file else {
        return Ok(serde_json::from_value(overlay)?);
    };
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut base = match serde_json::from_str::<Value>(&text)
        .with_context(|| format!("parsing config {}", path.display()))?
    {
        Value::Object(map) => map,
        _ => bail!("config {} must be a JSON object", path.display()),
    };
    let Value::Object(overlay) = overlay else {
        unreachable!("flag structs serialize to objects")
    };
    for (key, value) in overlay {
        if !(value.is_null() || value == Value::Bool(false)) {
            base.insert(key, value);
        }
    }
    serde_json::from_value(Value::Object(Map::from_iter(base)))
        .with_context(|| format!("invalid config {}", path.display()))
}

/// A missing required parameter; reported with the subcommand's usage line.
#[derive(Debug)]
pub struct MissingParameter(pub &'static str);

impl fmt::Display for MissingParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "missing required parameter --{}", self.0)
    }
}

impl std::error::Error for MissingParameter {}

pub fn need<T>(value: Option<T>, name: &'static str) -> Result<T> {
    value.ok_or_else(|| MissingParameter(name).into())
}

/// `auto` or an explicit sample count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SampleSize {
    #[default]
    Auto,
    Count(u64),
}

impl SampleSize {
    pub fn resolve(self, auto: u64) -> u64 {
        match self {
            SampleSize::Auto => auto,
            SampleSize::Count(m) => m,
        }
    }
}

impl FromStr for SampleSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(SampleSize::Auto);
        }
        match s.parse::<u64>() {
            Ok(m) if m > 0 => Ok(SampleSize::Count(m)),
            _ => Err(format!("expected `auto` or a positive integer, got {s:?}")),
        }
    }
}

impl Serialize for SampleSize {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SampleSize::Auto => s.serialize_str("auto"),
            SampleSize::Count(m) => s.serialize_u64(*m),
        }
    }
}

impl<'de> Deserialize<'de> for SampleSize {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(0) => Err(serde::de::Error::custom("m must be positive")),
            Raw::Count(m) => Ok(SampleSize::Count(m)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
