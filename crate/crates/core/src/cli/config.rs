//! JSON configuration of the `heat` subcommand.

use std::path::PathBuf;

use serde_json::{Map, Value};

use super::Failure;
use crate::heat::DEFAULT_TERMS;

const KEYS: [&str; 9] = ["L", "k", "alpha", "beta", "f", "n_terms", "t", "x_points", "output"];

/// Heat run with every field optional, as read from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HeatSettings {
    pub length: Option<f64>,
    pub k: Option<f64>,
    pub alpha: Option<Vec<f64>>,
    pub beta: Option<f64>,
    pub f: Option<String>,
    pub n_terms: Option<usize>,
    pub t: Option<f64>,
    pub x_points: Option<usize>,
    pub output: Option<PathBuf>,
}

/// Fully resolved heat run.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatRun {
    pub length: f64,
    pub k: f64,
    pub alphas: Vec<f64>,
    pub beta: f64,
    pub f: String,
    pub n_terms: usize,
    pub t: f64,
    pub x_points: usize,
    pub output: Option<PathBuf>,
}

fn invalid(key: &str, reason: impl std::fmt::Display) -> Failure {
    Failure::Validation(format!("config key `{key}`: {reason}"))
}

fn number(key: &str, v: &Value) -> Result<f64, Failure> {
    v.as_f64()
        .ok_or_else(|| invalid(key, format!("expected a number, got {v}")))
}

fn count(key: &str, v: &Value) -> Result<usize, Failure> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| invalid(key, format!("expected a non-negative integer, got {v}")))
}

fn text(key: &str, v: &Value) -> Result<String, Failure> {
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| invalid(key, format!("expected a string, got {v}")))
}

impl HeatSettings {
    pub fn from_json(source: &str) -> Result<Self, Failure> {
        let doc: Value =
            serde_json::from_str(source).map_err(|e| Failure::Validation(format!("config is not valid JSON: {e}")))?;
        let obj: &Map<String, Value> = doc
            .as_object()
            .ok_or_else(|| Failure::Validation("config must be a JSON object".into()))?;
        let mut s = HeatSettings::default();
        for (key, v) in obj {
            match key.as_str() {
                "L" => s.length = Some(number(key, v)?),
                "k" => s.k = Some(number(key, v)?),
                "alpha" => {
                    let list = match v {
                        Value::Array(items) => items.iter().map(|x| number(key, x)).collect::<Result<Vec<_>, _>>()?,
                        other => vec![number(key, other)?],
                    };
                    s.alpha = Some(list);
                }
                "beta" => s.beta = Some(number(key, v)?),
                "f" => s.f = Some(text(key, v)?),
                "n_terms" => s.n_terms = Some(count(key, v)?),
                "t" => s.t = Some(number(key, v)?),
                "x_points" => s.x_points = Some(count(key, v)?),
                "output" => s.output = Some(PathBuf::from(text(key, v)?)),
                other => {
                    return Err(invalid(
                        other,
                        format!("unknown key; expected one of {}", KEYS.join(", ")),
                    ))
                }
            }
        }
        Ok(s)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: HeatSettings) -> HeatSettings {
        HeatSettings {
            length: over.length.or(self.length),
            k: over.k.or(self.k),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            f: over.f.or(self.f),
            n_terms: over.n_terms.or(self.n_terms),
            t: over.t.or(self.t),
            x_points: over.x_points.or(self.x_points),
            output: over.output.or(self.output),
        }
    }

    /// Fills defaults and checks the grid; the physical parameters are
    /// checked again by the solver.
    pub fn resolve(self) -> Result<HeatRun, Failure> {
        let missing = |key: &str| invalid(key, "missing (set it in the config file or by flag)");
        let run = HeatRun {
            length: self.length.unwrap_or(1.0),
            k: self.k.ok_or_else(|| missing("k"))?,
            alphas: self.alpha.ok_or_else(|| missing("alpha"))?,
            beta: self.beta.ok_or_else(|| missing("beta"))?,
            f: self.f.ok_or_else(|| missing("f"))?,
            n_terms: self.n_terms.unwrap_or(DEFAULT_TERMS),
            t: self.t.ok_or_else(|| missing("t"))?,
            x_points: self.x_points.unwrap_or(201),
            output: self.output,
        };
        if run.alphas.is_empty() {
            return Err(invalid("alpha", "needs at least one value"));
        }
        if run.x_points < 2 {
            return Err(invalid(
                "x_points",
                format!("needs at least 2 points, got {}", run.x_points),
            ));
        }
        if !(run.t.is_finite() && run.t >= 0.0) {
            return Err(invalid(
                "t",
                format!("must be a finite non-negative number, got {}", run.t),
            ));
        }
        Ok(run)
    }
}
