//! Run configuration: defaults, then a JSON config file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub out: PathBuf,
    pub seed: u64,
    pub dims: usize,
    pub quad_order: usize,
    pub c: f64,
    pub eta: f64,
    pub n_max: usize,
    pub eps: f64,
    pub t: f64,
    pub log_axes: bool,
    /// Command-specific parameters.
    pub params: Map<String, Value>,
}

fn defaults(command: &str) -> Value {
    let c = nilprofile::profiles::DEFAULT_C;
    serde_json::json!({
        "command": command,
        "out": "nilprofile-out",
        "seed": 0,
        "dims": nilprofile::domains::DEFAULT_DIM,
        "quad_order": nilprofile::measures::DEFAULT_ORDER,
        "c": c,
        "eta": c * 2f64.powf(-0.75),
        "n_max": 16,
        "eps": 1.0,
        "t": 1.0,
        "log_axes": false,
        "params": {},
    })
}

fn merge(base: &mut Map<String, Value>, over: Map<String, Value>) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Object(b)), Value::Object(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

impl RunConfig {
    /// `flags` holds only the values given on the command line. When `c` is
    /// overridden without `eta`, `eta` follows as `c·2^{−3/4}`.
    pub fn resolve(command: &str, file: Option<&Path>, flags: Map<String, Value>) -> Result<Self> {
        let Value::Object(mut cfg) = defaults(command) else {
            unreachable!("defaults are an object")
        };
        let mut explicit_eta = flags.contains_key("eta");
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let value: Value = serde_json::from_str(&text)
                .with_context(|| format!("malformed JSON in config {}", path.display()))?;
            let Value::Object(obj) = value else {
                bail!("config {} must hold a JSON object", path.display());
            };
            if obj.get("command").is_some_and(|c| c != command) {
                bail!(
                    "config {} is for command {}, not {command}",
                    path.display(),
                    obj["command"]
                );
            }
            explicit_eta |= obj.contains_key("eta");
            merge(&mut cfg, obj);
        }
        merge(&mut cfg, flags);
        if !explicit_eta {
            if let Some(c) = cfg.get("c").and_then(Value::as_f64) {
                cfg.insert("eta".into(), (c * 2f64.powf(-0.75)).into());
            }
        }
        let rc: RunConfig =
            serde_json::from_value(Value::Object(cfg)).context("invalid run configuration")?;
        Ok(rc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run config serializes")
    }

    pub fn param_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .with_context(|| format!("parameter `{key}` must be a number")),
        }
    }

    pub fn param_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|n| Some(n as usize))
                .with_context(|| format!("parameter `{key}` must be a non-negative integer")),
        }
    }

    pub fn param_str(&self, key: &str) -> Result<Option<&str>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .with_context(|| format!("parameter `{key}` must be a string")),
        }
    }

    pub fn param_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| {
                    x.as_f64()
                        .with_context(|| format!("parameter `{key}` must hold numbers"))
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => bail!("parameter `{key}` must be an array of numbers"),
        }
    }
}

/// Parse `"a,b,c"` into numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .with_context(|| format!("`{x}` is not a number"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_eta_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"seed": 5, "c": 0.02, "params": {"k": 12}}"#).unwrap();
        let mut flags = Map::new();
        flags.insert("seed".into(), 9.into());
        let rc = RunConfig::resolve("dist", Some(&path), flags).unwrap();
        assert_eq!(rc.seed, 9);
        assert_eq!(rc.c, 0.02);
        assert!((rc.eta - 0.02 * 2f64.powf(-0.75)).abs() < 1e-15);
        assert_eq!(rc.param_usize("k").unwrap(), Some(12));
        std::fs::write(&path, r#"{"sede": 5}"#).unwrap();
        assert!(RunConfig::resolve("dist", Some(&path), Map::new()).is_err());
        std::fs::write(&path, "{not json").unwrap();
        assert!(RunConfig::resolve("dist", Some(&path), Map::new()).is_err());
    }
}
