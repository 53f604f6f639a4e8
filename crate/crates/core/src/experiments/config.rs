//! Flat TOML configuration of a rate study.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use super::ExperimentError;
use crate::datagen::{parse_call, CompositeKind, Profile, ProblemSpec};
use crate::func1d::Interval;
use crate::regularizer::Mode;

/// Regularization parameter as a function of the noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaRule {
    Fixed(f64),
    SqrtDelta,
    Delta,
    /// `δ^{2/3}`
    Delta23,
}

impl AlphaRule {
    pub fn alpha(&self, delta: f64) -> f64 {
        match *self {
            AlphaRule::Fixed(a) => a,
            AlphaRule::SqrtDelta => delta.sqrt(),
            AlphaRule::Delta => delta,
            AlphaRule::Delta23 => delta.powf(2.0 / 3.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsRule {
    EqualDelta,
    Fixed(f64),
}

impl EpsRule {
    pub fn eps(&self, delta: f64) -> f64 {
        match *self {
            EpsRule::EqualDelta => delta,
            EpsRule::Fixed(e) => e,
        }
    }
}

/// Mesh width of the projection as a function of the noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HRule {
    SqrtDelta,
    Fixed(f64),
}

impl HRule {
    pub fn h(&self, delta: f64) -> f64 {
        match *self {
            HRule::SqrtDelta => delta.sqrt(),
            HRule::Fixed(h) => h,
        }
    }
}

fn rule_error(kind: &str, s: &str) -> String {
    format!("unknown {kind} `{s}`")
}

impl FromStr for AlphaRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "sqrt_delta" => Ok(AlphaRule::SqrtDelta),
            "delta" => Ok(AlphaRule::Delta),
            "delta_23" => Ok(AlphaRule::Delta23),
            t => parse_call(t, "fixed").map(AlphaRule::Fixed).ok_or_else(|| rule_error("alpha_rule", t)),
        }
    }
}

impl FromStr for EpsRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "equal_delta" => Ok(EpsRule::EqualDelta),
            t => parse_call(t, "fixed").map(EpsRule::Fixed).ok_or_else(|| rule_error("eps_rule", t)),
        }
    }
}

impl FromStr for HRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "sqrt_delta" => Ok(HRule::SqrtDelta),
            t => parse_call(t, "fixed").map(HRule::Fixed).ok_or_else(|| rule_error("h_rule", t)),
        }
    }
}

impl fmt::Display for AlphaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaRule::Fixed(a) => write!(f, "fixed({a})"),
            AlphaRule::SqrtDelta => f.write_str("sqrt_delta"),
            AlphaRule::Delta => f.write_str("delta"),
            AlphaRule::Delta23 => f.write_str("delta_23"),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    a0: String,
    composite: String,
    g0: f64,
    g1: f64,
    #[serde(default)]
    c_end: f64,
    n: usize,
    mode: String,
    alpha_rule: String,
    delta_list: Vec<f64>,
    #[serde(default)]
    eps_rule: Option<String>,
    #[serde(default)]
    h_rule: Option<String>,
    seeds: Vec<u64>,
    output_dir: PathBuf,
    #[serde(default)]
    exclude_saturated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub mode: Mode,
    pub alpha_rule: AlphaRule,
    pub delta_list: Vec<f64>,
    pub eps_rule: EpsRule,
    /// Present exactly in `NoisyL2` mode.
    pub h_rule: Option<HRule>,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    /// Drop the largest noise level from the fit when its error has saturated.
    pub exclude_saturated: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        let cfg = |e: String| ExperimentError::Config(e);
        let interval = Interval::new(raw.g0, raw.g1).map_err(|e| cfg(e.to_string()))?;
        let problem = ProblemSpec {
            profile: raw.a0.parse::<Profile>().map_err(cfg)?,
            composite: raw.composite.parse::<CompositeKind>().map_err(cfg)?,
            interval,
            n: raw.n,
            c_end: raw.c_end,
        };
        let mode = raw.mode.parse::<Mode>().map_err(|e| cfg(e.to_string()))?;
        let config = Self {
            problem,
            mode,
            alpha_rule: raw.alpha_rule.parse().map_err(cfg)?,
            delta_list: raw.delta_list,
            eps_rule: raw.eps_rule.as_deref().unwrap_or("equal_delta").parse().map_err(cfg)?,
            h_rule: raw.h_rule.as_deref().map(str::parse).transpose().map_err(cfg)?,
            seeds: raw.seeds,
            output_dir: raw.output_dir,
            exclude_saturated: raw.exclude_saturated,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        if config.output_dir.is_relative() {
            if let Some(dir) = path.parent() {
                config.output_dir = dir.join(&config.output_dir);
            }
        }
        Ok(config)
    }

    /// Structural checks; bounds that depend on the problem instance are
    /// checked per sweep cell.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.problem.n < 5 {
            return bad(format!("n = {} is below the minimum of 5", self.problem.n));
        }
        if self.delta_list.is_empty() {
            return bad("delta_list is empty".into());
        }
        if self.delta_list.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return bad("delta_list entries must be finite and non-negative".into());
        }
        if self.delta_list.windows(2).any(|w| w[1] >= w[0]) {
            return bad("delta_list must be strictly decreasing".into());
        }
        if self.seeds.is_empty() {
            return bad("seeds is empty".into());
        }
        match (self.mode, self.h_rule) {
            (Mode::NoisyL2, None) => return bad("noisy_l2 mode needs h_rule".into()),
            (Mode::NoisyL2, Some(_)) => {}
            (_, Some(_)) => return bad("h_rule is only used in noisy_l2 mode".into()),
            _ => {}
        }
        for &d in &self.delta_list {
            let alpha = self.alpha_rule.alpha(d);
            if !(alpha > 0.0 && alpha < 1.0) {
                return bad(format!("alpha_rule {} gives alpha = {alpha} at delta = {d}", self.alpha_rule));
            }
        }
        Ok(())
    }
}
