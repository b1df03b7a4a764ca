//! Run configuration: defaults, then a flat JSON file, then command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const CONFIG_ENV: &str = "FRLP_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    pub dim: usize,
    pub extent: f64,
    pub samples: usize,
    pub alpha: f64,
    pub seed: u64,
    pub j_min: i32,
    pub j_max: i32,
    pub strict: bool,
    pub format: String,
    pub delta1: f64,
    pub delta2: f64,
    pub s_min: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dim: 1,
            extent: 8.0,
            samples: 256,
            alpha: 1.1,
            seed: 0,
            j_min: -2,
            j_max: 4,
            strict: false,
            format: "csv".into(),
            delta1: 0.1,
            delta2: 3.0,
            s_min: 0.1,
        }
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid: Option<String>,
    pub dim: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
    pub strict: bool,
    pub format: Option<String>,
}

impl Config {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "config: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    /// `explicit` wins over `$FRLP_CONFIG`; with neither, the defaults.
    pub fn load(explicit: Option<&Path>) -> CliResult<Self> {
        let path: Option<PathBuf> = explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                Self::from_json(&text)
            }
        }
    }

    pub fn apply(mut self, o: &Overrides) -> CliResult<Self> {
        if let Some(g) = &o.grid {
            let (l, n) = parse_grid(g)?;
            self.extent = l;
            self.samples = n;
        }
        if let Some(d) = o.dim {
            self.dim = d;
        }
        if let Some(a) = o.alpha {
            self.alpha = a;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.strict |= o.strict;
        if let Some(f) = &o.format {
            self.format = f.clone();
        }
        if !matches!(self.format.as_str(), "csv" | "bin" | "json") {
            return Err(CliError::Usage(format!("unknown format '{}' (csv, bin or json)", self.format)));
        }
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// `"L,N"` to `(L, N)`.
pub fn parse_grid(s: &str) -> CliResult<(f64, usize)> {
    let bad = || CliError::Usage(format!("--grid expects L,N, got '{s}'"));
    let (l, n) = s.split_once(',').ok_or_else(bad)?;
    let l: f64 = l.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    Ok((l, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let cfg = Config::from_json(r#"{"schema_version":1,"samples":512,"alpha":0.7}"#).unwrap();
        assert_eq!(cfg.samples, 512);
        assert_eq!(cfg.extent, 8.0);
        let o = Overrides { grid: Some("4,128".into()), seed: Some(9), ..Default::default() };
        let merged = cfg.apply(&o).unwrap();
        assert_eq!((merged.extent, merged.samples, merged.seed, merged.alpha), (4.0, 128, 9, 0.7));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Config::from_json(r#"{"schema_version":2}"#).is_err());
        assert!(Config::from_json(r#"{"nope":1}"#).is_err());
        assert!(parse_grid("8;256").is_err());
        let o = Overrides { format: Some("xml".into()), ..Default::default() };
        assert!(Config::default().apply(&o).is_err());
    }
}
