use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Serialize;
use serde_json::Value;

use crate::report::Status;

#[derive(Debug, Args, Serialize)]
pub struct BatchArgs {
    /// JSON file holding an array of descriptors such as
    /// `{"command": "reproduce", "phi": "gaussian:0,1", "r": 1, "json": "out.json"}`.
    pub file: PathBuf,
    /// Write a summary of all runs here.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct BatchEntry {
    pub index: usize,
    pub command: String,
    pub status: Option<Status>,
    pub error: Option<String>,
}

/// Reads the descriptors and turns each into an argument vector.
pub fn load(path: &PathBuf) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))?;
    let Value::Array(items) = value else {
        bail!("{} must hold a JSON array of descriptors", path.display());
    };
    items
        .iter()
        .enumerate()
        .map(|(k, v)| descriptor_argv(v).with_context(|| format!("descriptor {k}")))
        .collect()
}

/// `{"command": "geometry", "scan_dist": "0:6:0.1", "verify_q": true}`
/// becomes `eow geometry --scan-dist 0:6:0.1 --verify-q`. Arrays repeat
/// the flag; `false` and `null` omit it.
pub fn descriptor_argv(v: &Value) -> Result<Vec<String>> {
    let Value::Object(map) = v else {
        bail!("descriptor must be a JSON object");
    };
    let command = map
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("descriptor needs a string \"command\""))?;
    if command == "batch" {
        bail!("batch descriptors cannot nest another batch");
    }
    let mut argv = vec!["eow".to_string(), command.to_string()];
    for (key, value) in map.iter().filter(|(k, _)| k.as_str() != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        let items: Vec<&Value> = match value {
            Value::Array(xs) => xs.iter().collect(),
            other => vec![other],
        };
        for item in items {
            match item {
                Value::Bool(true) => argv.push(flag.clone()),
                Value::Bool(false) | Value::Null => {}
                Value::String(s) => argv.extend([flag.clone(), s.clone()]),
                Value::Number(n) => argv.extend([flag.clone(), n.to_string()]),
                _ => bail!("value of {key:?} must be a string, number, boolean or array of those"),
            }
        }
    }
    Ok(argv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_become_flags() {
        let v: Value = serde_json::from_str(
            r#"{"command": "local-eow", "xi": [-2, 2], "ladder": "0.02:0.5:6", "eta": null, "verify_q": false, "R": 0.5}"#,
        )
        .unwrap();
        let argv = descriptor_argv(&v).unwrap();
        assert_eq!(
            argv,
            [
                "eow",
                "local-eow",
                "--R",
                "0.5",
                "--ladder",
                "0.02:0.5:6",
                "--xi",
                "-2",
                "--xi",
                "2"
            ]
        );
        assert!(descriptor_argv(&serde_json::json!({"r": 1})).is_err());
        assert!(descriptor_argv(&serde_json::json!({"command": "batch"})).is_err());
    }
}
