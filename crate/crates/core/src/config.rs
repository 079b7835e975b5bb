//! `key=value` configuration documents.
//!
//! Pairs are separated by whitespace or newlines; `#` starts a comment.
//!
//! | key                 | default         |
//! |---------------------|-----------------|
//! | `sources`           | required        |
//! | `multiple`          | required        |
//! | `mean_pairs`        | required        |
//! | `steps`             | 3               |
//! | `cycles`            | 100000          |
//! | `seed`              | 1               |
//! | `feedback`          | `off`           |
//! | `feedback_strength` | 0               |
//! | `boundary`          | `constrained`   |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::simulator::SimConfig;

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| config_err(format!("invalid value `{value}` for `{key}`")))
}

pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut sources = None;
    let mut multiple = None;
    let mut mean_pairs = None;
    let mut cfg = SimConfig::new(1, 1, 1.0);
    let mut seen = std::collections::HashSet::new();

    let tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace);
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| config_err(format!("expected key=value, got `{token}`")))?;
        if !seen.insert(key.to_string()) {
            return Err(config_err(format!("duplicate key `{key}`")));
        }
        match key {
            "sources" => sources = Some(parse_value::<usize>(key, value)?),
            "multiple" => multiple = Some(parse_value::<u32>(key, value)?),
            "mean_pairs" => mean_pairs = Some(parse_value::<f64>(key, value)?),
            "steps" => cfg.step_count = parse_value(key, value)?,
            "cycles" => cfg.cycles = parse_value(key, value)?,
            "seed" => cfg.seed = parse_value(key, value)?,
            "feedback" => cfg.feedback.mode = value.parse()?,
            "feedback_strength" => cfg.feedback.strength = parse_value(key, value)?,
            "boundary" => cfg.boundary = value.parse()?,
            other => return Err(config_err(format!("unknown key `{other}`"))),
        }
    }
    cfg.source_count = sources.ok_or_else(|| config_err("missing key `sources`"))?;
    cfg.multiple = multiple.ok_or_else(|| config_err("missing key `multiple`"))?;
    cfg.mean_pairs = mean_pairs.ok_or_else(|| config_err("missing key `mean_pairs`"))?;
    cfg.validate()?;
    Ok(cfg)
}

impl fmt::Display for SimConfig {
    /// Writes the config in the document format read by [`parse_config`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sources={}", self.source_count)?;
        writeln!(f, "steps={}", self.step_count)?;
        writeln!(f, "multiple={}", self.multiple)?;
        writeln!(f, "mean_pairs={:?}", self.mean_pairs)?;
        writeln!(f, "cycles={}", self.cycles)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "feedback={}", self.feedback.mode.as_str())?;
        writeln!(f, "feedback_strength={:?}", self.feedback.strength)?;
        writeln!(f, "boundary={}", self.boundary.as_str())
    }
}

impl FromStr for SimConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_config(s)
    }
}
