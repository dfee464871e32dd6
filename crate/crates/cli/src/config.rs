//! Run configuration: defaults, then `key = value` config file, then flags.

use crate::error::{CliError, CliResult};
use std::path::PathBuf;
use std::str::FromStr;
use waring_core::aux_count::DEFAULT_BUDGET;
use waring_core::expsum_arcs::DEFAULT_GRID_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::config(format!("format must be csv or json, got {s:?}"))),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: Option<u32>,
    pub k_range: Option<(u32, u32)>,
    pub theorem: Option<u8>,
    pub p: Vec<f64>,
    pub theta: Option<f64>,
    pub s: Option<u32>,
    pub budget_ops: u64,
    pub budget_grid: u64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub paper_faithful: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: None,
            k_range: None,
            theorem: None,
            p: Vec::new(),
            theta: None,
            s: None,
            budget_ops: DEFAULT_BUDGET,
            budget_grid: DEFAULT_GRID_BUDGET,
            seed: 0,
            format: Format::Csv,
            out: None,
            paper_faithful: false,
        }
    }
}

pub const KEYS: [&str; 12] = [
    "k",
    "k-range",
    "theorem",
    "P",
    "theta",
    "s",
    "budget-ops",
    "budget-grid",
    "seed",
    "format",
    "out",
    "paper-faithful",
];

fn parse<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("{key}: cannot parse {value:?}")))
}

fn positive_budget(key: &str, value: &str) -> CliResult<u64> {
    let v: i128 = parse(key, value)?;
    if v <= 0 || v > u64::MAX as i128 {
        return Err(CliError::config(format!("{key} must be a positive integer, got {value}")));
    }
    Ok(v as u64)
}

pub fn parse_k_range(value: &str) -> CliResult<(u32, u32)> {
    let (a, b) = value
        .split_once(':')
        .ok_or_else(|| CliError::config(format!("k-range must look like a:b, got {value:?}")))?;
    let (a, b): (u32, u32) = (parse("k-range", a)?, parse("k-range", b)?);
    if a > b {
        return Err(CliError::config(format!("k-range {a}:{b} is empty")));
    }
    Ok((a, b))
}

/// Comma-separated list.
pub fn parse_list<T: FromStr>(key: &str, value: &str) -> CliResult<Vec<T>> {
    value
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse(key, t))
        .collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "k" => self.k = Some(parse(key, value)?),
            "k-range" => self.k_range = Some(parse_k_range(value)?),
            "theorem" => {
                let t: u8 = parse(key, value)?;
                if !(1..=2).contains(&t) {
                    return Err(CliError::config(format!("theorem must be 1 or 2, got {t}")));
                }
                self.theorem = Some(t);
            }
            "P" => {
                let p: Vec<f64> = parse_list(key, value)?;
                if p.is_empty() || p.iter().any(|x| !(x.is_finite() && *x >= 1.0)) {
                    return Err(CliError::config(format!("P must be a list of reals >= 1, got {value:?}")));
                }
                self.p = p;
            }
            "theta" => {
                let t: f64 = parse(key, value)?;
                if !(t > 0.0 && t <= 1.0) {
                    return Err(CliError::config(format!("theta must lie in (0, 1], got {t}")));
                }
                self.theta = Some(t);
            }
            "s" => {
                let s: u32 = parse(key, value)?;
                if s == 0 {
                    return Err(CliError::config("s must be positive"));
                }
                self.s = Some(s);
            }
            "budget-ops" => self.budget_ops = positive_budget(key, value)?,
            "budget-grid" => self.budget_grid = positive_budget(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "format" => self.format = value.trim().parse()?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "paper-faithful" => self.paper_faithful = parse(key, value)?,
            _ => return Err(CliError::config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> CliResult<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::config(format!("line {}: {}", n + 1, e.message)))?;
        }
        Ok(())
    }

    /// `k_range` if given, else `k`, else the supplied default.
    pub fn ks(&self, default: u32) -> Vec<u32> {
        match (self.k_range, self.k) {
            (Some((a, b)), _) => (a..=b).collect(),
            (None, Some(k)) => vec![k],
            (None, None) => vec![default],
        }
    }

    pub fn k_or(&self, default: u32) -> u32 {
        self.k.or(self.k_range.map(|r| r.0)).unwrap_or(default)
    }

    pub fn p_or(&self, default: &[f64]) -> Vec<f64> {
        if self.p.is_empty() {
            default.to_vec()
        } else {
            self.p.clone()
        }
    }

    /// Resolved flag values, echoed into every report header.
    pub fn echo(&self) -> Vec<(String, String)> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(String::new, T::to_string)
        }
        let p: Vec<String> = self.p.iter().map(f64::to_string).collect();
        vec![
            ("k".into(), opt(&self.k)),
            (
                "k-range".into(),
                self.k_range.map_or_else(String::new, |(a, b)| format!("{a}:{b}")),
            ),
            ("theorem".into(), opt(&self.theorem)),
            ("P".into(), p.join(",")),
            ("theta".into(), opt(&self.theta)),
            ("s".into(), opt(&self.s)),
            ("budget-ops".into(), self.budget_ops.to_string()),
            ("budget-grid".into(), self.budget_grid.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("format".into(), self.format.name().into()),
            ("paper-faithful".into(), self.paper_faithful.to_string()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        c.apply_file("# comment\nk = 5   # trailing\n\nP = 10, 20\nbudget-ops=1000\n").unwrap();
        assert_eq!((c.k, c.p.clone(), c.budget_ops), (Some(5), vec![10.0, 20.0], 1000));
        c.set("k", "7").unwrap();
        assert_eq!(c.ks(3), vec![7]);
        c.set("k-range", "3:5").unwrap();
        assert_eq!(c.ks(3), vec![3, 4, 5]);
    }

    #[test]
    fn schema_errors() {
        let mut c = RunConfig::default();
        assert!(c.apply_file("budget-ops = -5").is_err());
        assert!(c.apply_file("budget-grid = 0").is_err());
        assert!(c.apply_file("colour = red").is_err());
        assert!(c.apply_file("k 5").is_err());
        assert!(c.set("k-range", "9:3").is_err());
        assert!(c.set("theorem", "3").is_err());
        assert!(c.set("format", "xml").is_err());
        assert_eq!(c.apply_file("budget-ops = -5").unwrap_err().exit_code(), 2);
    }
}
