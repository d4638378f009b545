//! Flat key-value configuration with dotted sections.
//!
//! ```text
//! # comment
//! lattice.kind = tri_z
//! lattice.n = 8
//! mc.samples = 2000
//! ```
//!
//! Unknown keys are rejected so a typo cannot silently fall back to a
//! default. Values are plain strings; list values are comma separated and
//! offset lists use `;` between triples (`1,0,0;-1,0,0`).

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Keys every subcommand accepts from a config file.
pub const ALLOWED_KEYS: &[&str] = &[
    "seed",
    "out",
    "lattice.kind",
    "lattice.n",
    "lattice.center",
    "lattice.offsets",
    "event",
    "event.n",
    "event.layers",
    "exact.beta",
    "exact.h",
    "exact.bc",
    "hybrid.beta",
    "hybrid.p",
    "hybrid.h",
    "hybrid.bc",
    "hybrid.mask_cap",
    "hybrid.grid.p_min",
    "hybrid.grid.p_max",
    "hybrid.grid.p_steps",
    "hybrid.grid.h_min",
    "hybrid.grid.h_max",
    "hybrid.grid.h_steps",
    "mc.beta",
    "mc.h",
    "mc.p",
    "mc.samples",
    "mc.sweeps",
    "mc.sampler",
    "mc.bc",
    "mc.stream_csv",
    "verify.check",
    "verify.instances",
    "sweep.scan",
    "sweep.beta",
    "sweep.h",
    "sweep.n_list",
    "sweep.h_grid",
    "sweep.beta_grid",
    "sweep.samples",
    "sweep.column_len",
    "plot.kind",
    "plot.input",
    "plot.output",
    "caps.enum_sites",
    "caps.mask_sites",
];

#[derive(Clone, Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }
        Ok(Config { values })
    }

    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        let config = Config::parse(&text)?;
        config.reject_unknown(ALLOWED_KEYS)?;
        Ok(config)
    }

    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown config key `{key}`")));
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// Typed lookup; missing key yields `default`.
    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| Error::Config(format!("key `{key}`: cannot parse `{raw}`"))),
        }
    }

    pub fn get_list_f64(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key).map(parse_f64_list).transpose()
    }

    pub fn get_list_i32(&self, key: &str) -> Result<Option<Vec<i32>>> {
        self.get(key).map(parse_i32_list).transpose()
    }
}

pub fn parse_f64_list(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad float `{s}` in list")))
        })
        .collect()
}

pub fn parse_i32_list(raw: &str) -> Result<Vec<i32>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad integer `{s}` in list")))
        })
        .collect()
}

/// Offset triples: `1,0,0;-1,0,0;...`
pub fn parse_offsets(raw: &str) -> Result<Vec<[i32; 3]>> {
    raw.split(';')
        .map(|triple| {
            let parts = parse_i32_list(triple)?;
            if parts.len() != 3 {
                return Err(Error::Config(format!("offset `{triple}` is not a triple")));
            }
            Ok([parts[0], parts[1], parts[2]])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_values() {
        let c = Config::parse("# hello\nlattice.n = 3\n\nmc.samples= 10\n").unwrap();
        assert_eq!(c.get("lattice.n"), Some("3"));
        assert_eq!(c.get_or("mc.samples", 0u64).unwrap(), 10);
        assert_eq!(c.get_or("mc.sweeps", 7u64).unwrap(), 7);
    }

    #[test]
    fn rejects_malformed_and_duplicates() {
        assert!(Config::parse("no equals sign").is_err());
        assert!(Config::parse("a = 1\na = 2").is_err());
    }

    #[test]
    fn rejects_unknown_keys() {
        let c = Config::parse("lattice.knid = tri_z").unwrap();
        assert!(matches!(c.reject_unknown(ALLOWED_KEYS), Err(Error::Config(_))));
        let ok = Config::parse("lattice.kind = tri_z").unwrap();
        assert!(ok.reject_unknown(ALLOWED_KEYS).is_ok());
    }

    #[test]
    fn list_parsers() {
        assert_eq!(parse_i32_list("4, 8,16").unwrap(), vec![4, 8, 16]);
        assert_eq!(parse_f64_list("-0.2,0.0").unwrap(), vec![-0.2, 0.0]);
        assert_eq!(
            parse_offsets("1,0,0;-1,0,0").unwrap(),
            vec![[1, 0, 0], [-1, 0, 0]]
        );
        assert!(parse_offsets("1,0").is_err());
    }
}
