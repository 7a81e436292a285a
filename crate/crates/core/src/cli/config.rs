//! TOML configuration for `vecmac search`.
//!
//! ```toml
//! target = "maclaurin"       # maclaurin | newton | reduction | projection_sharp
//! dims = [[3, 3]]            # (m, d) pairs
//! k = [2]
//! p = ["-1"]                 # maclaurin only: numbers, "0" or "inf"
//! restarts = 100
//! steps = 2000
//! scale = 1.0
//! seed = 12345
//! distribution = "gaussian"  # gaussian | uniform-cube | near-orthonormal(eps)
//! ```
//!
//! Every key is optional; missing keys take the values of
//! [`SearchConfig::default`].

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::search::{Distribution, SearchConfig, Target};
use crate::sums::PowerExponent;

/// Environment variable consulted for the search seed.
pub const SEED_ENV: &str = "VECMAC_SEED";

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Exponent {
    Number(f64),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    target: Option<String>,
    dims: Option<Vec<(usize, usize)>>,
    k: Option<Vec<usize>>,
    p: Option<Vec<Exponent>>,
    restarts: Option<usize>,
    steps: Option<usize>,
    scale: Option<f64>,
    seed: Option<u64>,
    distribution: Option<String>,
}

/// A parsed search configuration. `seed` is `None` when the file does not set one.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchFile {
    pub config: SearchConfig,
    pub targets: Vec<Target>,
    pub seed: Option<u64>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn field_error(field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        field: field.to_string(),
        message: message.into(),
    }
}

pub fn parse_search_config(text: &str) -> Result<SearchFile> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        field: "config".into(),
        message: e.message().to_string(),
    })?;
    let mut config = SearchConfig::default();
    if let Some(dims) = raw.dims {
        config.dims = dims;
    }
    if let Some(k) = raw.k {
        config.k_values = k;
    }
    if let Some(ps) = raw.p {
        config.p_values = ps
            .into_iter()
            .map(|p| match p {
                Exponent::Number(x) => PowerExponent::from_f64(x),
                Exponent::Text(s) => s.parse(),
            })
            .collect::<Result<_>>()
            .map_err(|e| field_error("p", e.to_string()))?;
    }
    if let Some(r) = raw.restarts {
        config.restarts = r;
    }
    if let Some(s) = raw.steps {
        config.steps = s;
    }
    if let Some(s) = raw.scale {
        config.scale = s;
    }
    if let Some(d) = raw.distribution {
        config.distribution = d
            .parse::<Distribution>()
            .map_err(|e| field_error("distribution", e.to_string()))?;
    }
    if let Some(s) = raw.seed {
        config.seed = s;
    }
    let target = raw.target.as_deref().unwrap_or("maclaurin");
    let targets = match target {
        "maclaurin" => config.maclaurin_targets(),
        "newton" => config.k_values.iter().map(|&k| Target::Newton { k }).collect(),
        "reduction" => config.k_values.iter().map(|&k| Target::Reduction { k }).collect(),
        "projection_sharp" => config
            .k_values
            .iter()
            .map(|&k| Target::ProjectionSharp { k })
            .collect(),
        other => return Err(field_error("target", format!("unknown target `{other}`"))),
    };
    if targets.is_empty() {
        return Err(field_error("k", "no targets: `k` (and `p` for maclaurin) must be non-empty"));
    }
    config.validate().map_err(|e| field_error("config", e.to_string()))?;
    Ok(SearchFile {
        config,
        targets,
        seed: raw.seed,
    })
}

/// Flag first, then the configuration file, then the environment, then the default.
pub fn resolve_seed(flag: Option<u64>, file: Option<u64>, env: Option<&str>, default: u64) -> Result<u64> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(s) => s
            .parse()
            .map_err(|_| field_error(SEED_ENV, format!("`{s}` is not an unsigned 64-bit integer"))),
        None => Ok(default),
    }
}
