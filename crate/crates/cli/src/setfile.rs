//! Plain-text set files:
//!
//! ```text
//! # waring-set k=3 mode=multi P=10000 delta=1
//! 1001
//! 1309
//! ```
//!
//! The header must carry `k`, `mode` and `P`; further `key=value` pairs are
//! kept in order. Elements are one decimal integer per line, ascending.

use crate::error::{CliError, CliResult};
use std::fmt::Write as _;

const MAGIC: &str = "# waring-set";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFile {
    pub meta: Vec<(String, String)>,
    pub elements: Vec<u64>,
}

impl SetFile {
    pub fn new(k: u32, mode: &str, p: f64, extra: Vec<(String, String)>, elements: Vec<u64>) -> Self {
        let mut meta = vec![
            ("k".to_string(), k.to_string()),
            ("mode".to_string(), mode.to_string()),
            ("P".to_string(), p.to_string()),
        ];
        meta.extend(extra);
        Self { meta, elements }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|m| m.0 == key).map(|m| m.1.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::from(MAGIC);
        for (k, v) in &self.meta {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        for x in &self.elements {
            let _ = writeln!(out, "{x}");
        }
        out
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|h| h.strip_prefix(MAGIC))
            .ok_or_else(|| CliError::config("set file must start with '# waring-set'"))?;
        let meta = header
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| CliError::config(format!("bad header field {kv:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        for key in ["k", "mode", "P"] {
            if !meta.iter().any(|m| m.0 == key) {
                return Err(CliError::config(format!("set header lacks {key}")));
            }
        }
        let mut elements = Vec::new();
        for (n, line) in lines.enumerate() {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let x: u64 = t
                .parse()
                .map_err(|_| CliError::config(format!("line {}: {t:?} is not an integer", n + 2)))?;
            if elements.last().is_some_and(|&last| last >= x) {
                return Err(CliError::config(format!("line {}: elements must ascend", n + 2)));
            }
            elements.push(x);
        }
        Ok(Self { meta, elements })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = SetFile::new(
            3,
            "multi",
            10000.0,
            vec![("delta".into(), "1".into())],
            vec![1001, 1309, 1463],
        );
        let text = f.render();
        assert_eq!(text, "# waring-set k=3 mode=multi P=10000 delta=1\n1001\n1309\n1463\n");
        let back = SetFile::parse(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.render(), text);
        assert_eq!(back.get("delta"), Some("1"));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(SetFile::parse("1\n2\n").is_err());
        assert!(SetFile::parse("# waring-set k=3 mode=x\n1\n").is_err());
        assert!(SetFile::parse("# waring-set k=3 mode=x P=4\n2\n1\n").is_err());
        assert!(SetFile::parse("# waring-set k=3 mode=x P=4\nfoo\n").is_err());
    }
}
