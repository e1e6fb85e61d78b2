//! Experiment configuration: command-line flags layered over an optional
//! flat `key = value` file.

use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

pub const COMMANDS: [&str; 8] = [
    "apply",
    "solve",
    "exp",
    "step",
    "topsv",
    "lowerbound",
    "precision-sweep",
    "paige-check",
];

const KEYS: [&str; 18] = [
    "command",
    "generator",
    "mtx",
    "function",
    "k",
    "eps",
    "eta",
    "kappa",
    "bits",
    "seed",
    "output_dir",
    "target",
    "kmax",
    "gamma",
    "delta",
    "trials",
    "c",
    "count",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    File { path: String, line: usize, message: String },
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("conflicting settings: {0}")]
    Conflict(String),
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
}

#[derive(Debug, Parser, Default)]
#[command(
    name = "lanczos-lab",
    version,
    about = "Seeded Lanczos experiments with CSV/JSON reports"
)]
pub struct Cli {
    /// One of apply, solve, exp, step, topsv, lowerbound, precision-sweep, paige-check.
    pub command: Option<String>,
    /// Flat key=value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// diag:v1,v2,... | random-spd:n[,kappa] | random-sym:n[,norm] | hard-spectrum:kappa,eta | gaussian:m,n
    #[arg(long)]
    pub generator: Option<String>,
    /// Matrix Market file.
    #[arg(long)]
    pub mtx: Option<PathBuf>,
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub kappa: Option<String>,
    /// Comma-separated mantissa widths.
    #[arg(long)]
    pub bits: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub kmax: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    /// Potential exponent constant for `lowerbound`.
    #[arg(long)]
    pub c: Option<String>,
    /// Number of sweep points for `lowerbound`.
    #[arg(long)]
    pub count: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MatrixSource {
    Generator(String),
    Mtx(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub source: Option<MatrixSource>,
    pub function: String,
    pub k: usize,
    pub eps: f64,
    pub eta: Option<f64>,
    pub kappa: f64,
    pub bits: Vec<u32>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub target: f64,
    pub kmax: usize,
    pub gamma: f64,
    pub delta: f64,
    pub trials: usize,
    pub c: f64,
    pub count: usize,
}

/// Raw string settings from one layer (file or flags).
#[derive(Debug, Default, Clone)]
struct Layer {
    values: Vec<(&'static str, String)>,
}

impl Layer {
    fn get(&self, key: &str) -> Option<&str> {
        self.values.iter().find(|(k, _)| *k == key).map(|(_, v)| v.as_str())
    }

    fn set(&mut self, key: &'static str, value: String) {
        self.values.retain(|(k, _)| *k != key);
        self.values.push((key, value));
    }

    fn check_source(&self) -> Result<(), ConfigError> {
        if self.get("generator").is_some() && self.get("mtx").is_some() {
            return Err(ConfigError::Conflict(
                "`generator` and `mtx` are mutually exclusive".into(),
            ));
        }
        Ok(())
    }
}

fn canonical_key(raw: &str) -> Result<&'static str, ConfigError> {
    let norm = raw.trim().replace('-', "_");
    KEYS.iter()
        .find(|k| **k == norm)
        .copied()
        .ok_or_else(|| ConfigError::UnknownKey(raw.trim().to_string()))
}

/// Parses the flat `key = value` format; `#` starts a comment.
pub fn parse_config_file(text: &str, path: &Path) -> Result<Vec<(&'static str, String)>, ConfigError> {
    let mut out: Vec<(&'static str, String)> = Vec::new();
    let file_err = |line: usize, message: String| ConfigError::File {
        path: path.display().to_string(),
        line,
        message,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(file_err(idx + 1, format!("expected `key = value`, found `{line}`")));
        };
        let key = canonical_key(key).map_err(|e| file_err(idx + 1, e.to_string()))?;
        if out.iter().any(|(k, _)| *k == key) {
            return Err(file_err(idx + 1, format!("duplicate key `{key}`")));
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

fn cli_layer(cli: &Cli) -> Layer {
    let mut layer = Layer::default();
    let mut put = |key: &'static str, v: Option<String>| {
        if let Some(v) = v {
            layer.set(key, v);
        }
    };
    put("command", cli.command.clone());
    put("generator", cli.generator.clone());
    put("mtx", cli.mtx.as_ref().map(|p| p.display().to_string()));
    put("function", cli.function.clone());
    put("k", cli.k.clone());
    put("eps", cli.eps.clone());
    put("eta", cli.eta.clone());
    put("kappa", cli.kappa.clone());
    put("bits", cli.bits.clone());
    put("seed", cli.seed.clone());
    put("output_dir", cli.output_dir.as_ref().map(|p| p.display().to_string()));
    put("target", cli.target.clone());
    put("kmax", cli.kmax.clone());
    put("gamma", cli.gamma.clone());
    put("delta", cli.delta.clone());
    put("trials", cli.trials.clone());
    put("c", cli.c.clone());
    put("count", cli.count.clone());
    layer
}

fn parse_num<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse::<T>().map_err(|e| ConfigError::Invalid {
        key,
        message: format!("`{v}`: {e}"),
    })
}

fn invalid(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        message: message.into(),
    }
}

/// Builds the configuration from parsed flags, reading `--config` if given.
pub fn resolve(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let flags = cli_layer(cli);
    flags.check_source()?;
    let mut merged = Layer::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let file = Layer {
            values: parse_config_file(&text, path)?,
        };
        file.check_source()?;
        merged = file;
    }
    let flag_source = flags.get("generator").is_some() || flags.get("mtx").is_some();
    if flag_source {
        merged.values.retain(|(k, _)| *k != "generator" && *k != "mtx");
    }
    for (k, v) in flags.values {
        merged.set(k, v);
    }
    build(&merged)
}

fn build(l: &Layer) -> Result<ExperimentConfig, ConfigError> {
    let command = l.get("command").ok_or(ConfigError::Missing("command"))?.to_string();
    if !COMMANDS.contains(&command.as_str()) {
        return Err(invalid(
            "command",
            format!("`{command}` is not one of {}", COMMANDS.join(", ")),
        ));
    }
    let source = match (l.get("generator"), l.get("mtx")) {
        (Some(g), None) => Some(MatrixSource::Generator(g.to_string())),
        (None, Some(m)) => Some(MatrixSource::Mtx(PathBuf::from(m))),
        (None, None) => None,
        (Some(_), Some(_)) => unreachable!("checked per layer"),
    };
    let cfg = ExperimentConfig {
        function: l.get("function").unwrap_or("exp").to_string(),
        k: l.get("k").map(|v| parse_num("k", v)).transpose()?.unwrap_or(20),
        eps: l.get("eps").map(|v| parse_num("eps", v)).transpose()?.unwrap_or(1e-6),
        eta: l.get("eta").map(|v| parse_num("eta", v)).transpose()?,
        kappa: l
            .get("kappa")
            .map(|v| parse_num("kappa", v))
            .transpose()?
            .unwrap_or(64.0),
        bits: match l.get("bits") {
            Some(v) => v
                .split(',')
                .map(|b| parse_num::<u32>("bits", b))
                .collect::<Result<_, _>>()?,
            None => vec![12, 16, 24, 52],
        },
        seed: l.get("seed").map(|v| parse_num("seed", v)).transpose()?.unwrap_or(0),
        output_dir: PathBuf::from(l.get("output_dir").unwrap_or("lanczos-lab-out")),
        target: l
            .get("target")
            .map(|v| parse_num("target", v))
            .transpose()?
            .unwrap_or(1.0 / 6.0),
        kmax: l.get("kmax").map(|v| parse_num("kmax", v)).transpose()?.unwrap_or(120),
        gamma: l
            .get("gamma")
            .map(|v| parse_num("gamma", v))
            .transpose()?
            .unwrap_or(0.1),
        delta: l
            .get("delta")
            .map(|v| parse_num("delta", v))
            .transpose()?
            .unwrap_or(0.05),
        trials: l
            .get("trials")
            .map(|v| parse_num("trials", v))
            .transpose()?
            .unwrap_or(30),
        c: l.get("c").map(|v| parse_num("c", v)).transpose()?.unwrap_or(0.2),
        count: l
            .get("count")
            .map(|v| parse_num("count", v))
            .transpose()?
            .unwrap_or(200),
        command,
        source,
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(c: &ExperimentConfig) -> Result<(), ConfigError> {
    if c.k < 1 {
        return Err(invalid("k", "must be at least 1"));
    }
    if !(c.eps > 0.0 && c.eps < 1.0) {
        return Err(invalid("eps", "must lie in (0, 1)"));
    }
    if let Some(eta) = c.eta {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(invalid("eta", "must be positive"));
        }
    }
    if !(c.kappa >= 1.0 && c.kappa.is_finite()) {
        return Err(invalid("kappa", "must be at least 1"));
    }
    if c.bits.is_empty() || c.bits.iter().any(|b| !(4..=52).contains(b)) {
        return Err(invalid("bits", "each width must lie in 4..=52"));
    }
    if !(c.target > 0.0) {
        return Err(invalid("target", "must be positive"));
    }
    if c.kmax < 1 || c.kmax > 201 {
        return Err(invalid("kmax", "must lie in 1..=201"));
    }
    if !(c.gamma > 0.0 && c.gamma < 0.5) {
        return Err(invalid("gamma", "must lie in (0, 1/2)"));
    }
    if !(c.delta > 0.0 && c.delta <= 0.5) {
        return Err(invalid("delta", "must lie in (0, 1/2]"));
    }
    if c.trials < 1 {
        return Err(invalid("trials", "must be at least 1"));
    }
    if !(0.2..=0.5).contains(&c.c) {
        return Err(invalid("c", "must lie in [1/5, 1/2]"));
    }
    if c.count < 1 {
        return Err(invalid("count", "must be at least 1"));
    }
    let needs_source = !matches!(c.command.as_str(), "lowerbound");
    if needs_source && c.source.is_none() {
        return Err(ConfigError::Missing("generator or mtx"));
    }
    Ok(())
}
