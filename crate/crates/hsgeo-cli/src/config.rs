//! Run configuration: `key = value` text from `HSGEO_CONFIG` merged with
//! command-line flags, flags taking precedence.

use crate::CommonArgs;
use hsgeo::{Family, ScalingSequence};
use std::collections::HashMap;
use std::path::PathBuf;

/// Process exit codes of the front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    ResidualFailure = 1,
    Config = 2,
    Precondition = 3,
}

/// A failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { code: ExitCode::Config, message: message.into() }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "family",
    "scaling",
    "N",
    "N-range",
    "i",
    "j",
    "k",
    "m",
    "tol",
    "out",
    "format",
    "jobs",
    "terms",
    "order",
    "deterministic",
];

/// Flag values layered over the config file.
pub struct Config {
    args: CommonArgs,
    file: HashMap<String, String>,
}

impl Config {
    pub fn load(args: &CommonArgs) -> Result<Self, CliError> {
        let mut file = HashMap::new();
        if let Ok(path) = std::env::var("HSGEO_CONFIG") {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::config(format!("cannot read config {path}: {e}")))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::config(format!("{path}:{}: expected `key = value`", lineno + 1))
                })?;
                let key = key.trim();
                if !KNOWN_KEYS.contains(&key) {
                    return Err(CliError::config(format!(
                        "{path}:{}: unknown key `{key}`",
                        lineno + 1
                    )));
                }
                file.insert(key.to_string(), value.trim().to_string());
            }
        }
        Ok(Config { args: args.clone(), file })
    }

    fn key(&self, name: &str) -> Option<&str> {
        self.file.get(name).map(String::as_str)
    }

    pub fn family(&self) -> Result<Option<Family>, CliError> {
        let tag = match self.args.family.as_deref().or_else(|| self.key("family")) {
            Some(t) => t,
            None => return Ok(None),
        };
        Family::from_tag(tag)
            .map(Some)
            .ok_or_else(|| CliError::config(format!("unknown family `{tag}` (gl, so or tri)")))
    }

    pub fn scaling(&self) -> Result<Option<ScalingSequence>, CliError> {
        match self.args.scaling.as_deref().or_else(|| self.key("scaling")) {
            Some(spec) => {
                ScalingSequence::parse(spec).map(Some).map_err(|e| CliError::config(e.to_string()))
            }
            None => Ok(None),
        }
    }

    fn parsed<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        name: &str,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.key(name) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::config(format!("cannot parse `{raw}` for {name}"))),
            None => Ok(None),
        }
    }

    pub fn n(&self) -> Result<Option<u32>, CliError> {
        match self.parsed(self.args.n, "N")? {
            Some(0) => Err(CliError::config("N must be positive")),
            other => Ok(other),
        }
    }

    /// Truncation grid `a:b:step`, inclusive of `b` when the step lands on it.
    pub fn n_range(&self) -> Result<Option<Vec<u32>>, CliError> {
        let spec = match self.args.n_range.as_deref().or_else(|| self.key("N-range")) {
            Some(s) => s,
            None => return Ok(None),
        };
        let bad = || CliError::config(format!("cannot parse N-range `{spec}` (want a:b:step)"));
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Vec<u32> =
            parts.iter().map(|p| p.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let (a, b, step) = (nums[0], nums[1], nums[2]);
        if a == 0 || step == 0 || b < a {
            return Err(CliError::config(format!(
                "invalid N-range `{spec}`: need 1 <= a <= b and step >= 1"
            )));
        }
        Ok(Some((a..=b).step_by(step as usize).collect()))
    }

    pub fn index_pair(&self) -> Result<Option<(u32, u32)>, CliError> {
        let i = self.parsed(self.args.i, "i")?;
        let j = self.parsed(self.args.j, "j")?;
        match (i, j) {
            (Some(i), Some(j)) => Ok(Some((i, j))),
            (None, None) => Ok(None),
            _ => Err(CliError::config("--i and --j must be given together")),
        }
    }

    /// `--k/--m`, falling back to `--i/--j`.
    pub fn principal_pair(&self) -> Result<Option<(u32, u32)>, CliError> {
        let k = self.parsed(self.args.k, "k")?;
        let m = self.parsed(self.args.m, "m")?;
        match (k, m) {
            (Some(k), Some(m)) => Ok(Some((k, m))),
            (None, None) => self.index_pair(),
            _ => Err(CliError::config("--k and --m must be given together")),
        }
    }

    pub fn tol(&self) -> Result<Option<f64>, CliError> {
        match self.parsed(self.args.tol, "tol")? {
            Some(t) if !(t > 0.0) => Err(CliError::config("tolerance must be positive")),
            other => Ok(other),
        }
    }

    pub fn format(&self) -> Result<String, CliError> {
        let fmt = self
            .args
            .format
            .clone()
            .or_else(|| self.key("format").map(str::to_string))
            .unwrap_or_else(|| "csv".to_string());
        match fmt.as_str() {
            "csv" | "json" => Ok(fmt),
            _ => Err(CliError::config(format!("unknown format `{fmt}` (csv or json)"))),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.args.out.clone().or_else(|| self.key("out").map(PathBuf::from))
    }

    pub fn jobs(&self) -> Option<usize> {
        self.args.jobs.or_else(|| self.key("jobs").and_then(|v| v.parse().ok()))
    }

    pub fn u32_key(&self, name: &str) -> Result<Option<u32>, CliError> {
        self.parsed(None, name)
    }

    pub fn usize_key(&self, name: &str) -> Result<Option<usize>, CliError> {
        self.parsed(None, name)
    }

    /// Write a report to `--out`, or to stdout when no path is configured.
    pub fn emit(&self, text: &str) -> Result<(), CliError> {
        match self.out() {
            Some(path) => std::fs::write(&path, text)
                .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
