//! Strict JSON configuration. Every section denies unknown fields, and the
//! shorthands `dsbs(p)`, `uniform(k)` and `bsc(q)` are expanded into explicit
//! matrices before a config is echoed back into a record.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::SourceModel;
use crate::prob::{Channel, JointPmf, Pmf};
use crate::scheme::SchemeConfig;
use crate::sim::{ConverseSettings, Hypotheses, EXACT_GUARD};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Shorthand(String),
    Rows(Vec<Vec<f64>>),
}

/// Parses `name(arg)`.
fn shorthand<'a>(s: &'a str, path: &str) -> Result<(&'a str, &'a str)> {
    let s = s.trim();
    let open = s.find('(');
    match (open, s.strip_suffix(')')) {
        (Some(i), Some(body)) => Ok((s[..i].trim(), body[i + 1..].trim())),
        _ => Err(Error::config(path, format!("unrecognized shorthand `{s}`"))),
    }
}

fn parse_arg<T: std::str::FromStr>(arg: &str, path: &str) -> Result<T> {
    arg.parse()
        .map_err(|_| Error::config(path, format!("bad shorthand argument `{arg}`")))
}

impl MatrixSpec {
    pub fn model(&self, path: &str) -> Result<SourceModel> {
        let pxy = match self {
            MatrixSpec::Rows(rows) => JointPmf::from_rows(rows.clone()),
            MatrixSpec::Shorthand(s) => match shorthand(s, path)? {
                ("dsbs", a) => JointPmf::dsbs(parse_arg(a, path)?),
                ("uniform", a) => {
                    let k: usize = parse_arg(a, path)?;
                    Pmf::uniform(k).map(|p| JointPmf::product(&p, &p))
                }
                (name, _) => return Err(Error::config(path, format!("unknown model shorthand `{name}`"))),
            },
        };
        pxy.map(SourceModel::new)
            .map_err(|e| Error::config(path, e.to_string()))
    }

    pub fn channel(&self, path: &str, inputs: usize) -> Result<Channel> {
        let ch = match self {
            MatrixSpec::Rows(rows) => Channel::new(rows.clone()),
            MatrixSpec::Shorthand(s) => match shorthand(s, path)? {
                ("bsc", a) => Channel::bsc(parse_arg(a, path)?),
                ("uniform", a) => {
                    // output independent of the input
                    let k: usize = parse_arg(a, path)?;
                    Pmf::uniform(k).and_then(|p| Channel::constant(inputs, &p))
                }
                (name, _) => return Err(Error::config(path, format!("unknown channel shorthand `{name}`"))),
            },
        };
        ch.map_err(|e| Error::config(path, e.to_string()))
    }
}

pub(crate) fn model_rows(m: &SourceModel) -> MatrixSpec {
    let j = m.pxy();
    MatrixSpec::Rows((0..j.row_alphabet()).map(|r| j.row(r).to_vec()).collect())
}

pub(crate) fn channel_rows(c: &Channel) -> MatrixSpec {
    MatrixSpec::Rows(c.rows().iter().map(|r| r.probs().to_vec()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentConfig {
    pub model: MatrixSpec,
    pub epsilon: f64,
    pub rate: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_alphabet: Option<usize>,
    /// Also run the exhaustive grid at this resolution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_resolution: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: MatrixSpec,
    pub epsilon: f64,
    pub rates: Vec<f64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_alphabet: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub model: MatrixSpec,
    pub test_channel: MatrixSpec,
    pub scheme: SchemeConfig,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub hypotheses: Hypotheses,
}

fn default_exact_guard() -> f64 {
    EXACT_GUARD
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactConfig {
    pub model: MatrixSpec,
    pub test_channel: MatrixSpec,
    pub scheme: SchemeConfig,
    #[serde(default = "default_exact_guard")]
    pub guard: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub model: MatrixSpec,
    pub test_channel: MatrixSpec,
    pub epsilon: f64,
    pub mu: f64,
    pub n_values: Vec<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    pub model: MatrixSpec,
    pub test_channel: MatrixSpec,
    pub scheme: SchemeConfig,
    /// Solver seed, and the trial seed when `trials` is set.
    pub seed: u64,
    /// Defaults to the scheme's design rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    /// Monte-Carlo trials per hypothesis; exact enumeration when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converse: Option<ConverseSettings>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodecCheckConfig {
    /// Every index in `1..=max_index` is round-tripped.
    pub max_index: u64,
}

/// Parses a config, reporting the failing JSON path.
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}
