//! JSON command configs with `key=value` overrides.
//!
//! A config file is a JSON object carrying `"schema": 1`. Overrides set
//! nested keys with dotted paths (`model.w=2`); a value is parsed as JSON
//! when possible and kept as a string otherwise.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

fn set_path(root: &mut Map<String, Value>, key: &str, value: Value) -> Result<(), CliError> {
    let mut parts = key.split('.').peekable();
    let mut node = root;
    while let Some(part) = parts.next() {
        if part.is_empty() {
            return Err(CliError::Config(format!("empty key segment in '{key}'")));
        }
        if parts.peek().is_none() {
            node.insert(part.to_string(), value);
            return Ok(());
        }
        let child = node.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
        node = child
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("'{part}' in '{key}' is not an object")))?;
    }
    Ok(())
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Merges the optional file and the overrides into one JSON object.
pub fn merged(file: Option<&Path>, overrides: &[String]) -> Result<Map<String, Value>, CliError> {
    let mut root = match file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let Value::Object(map) = value else {
                return Err(CliError::Config(format!("{} must hold a JSON object", path.display())));
            };
            match map.get("schema") {
                Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => {}
                Some(other) => return Err(CliError::Config(format!("unsupported schema {other}"))),
                None => return Err(CliError::Config(format!("{} lacks \"schema\": 1", path.display()))),
            }
            map
        }
        None => Map::new(),
    };
    for kv in overrides {
        let (key, raw) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got '{kv}'")))?;
        set_path(&mut root, key.trim(), parse_value(raw))?;
    }
    if let Some(v) = root.remove("schema") {
        if v.as_u64() != Some(SCHEMA_VERSION) {
            return Err(CliError::Config(format!("unsupported schema {v}")));
        }
    }
    Ok(root)
}

/// Loads a typed config; unknown keys are rejected by the target type.
pub fn load<T: DeserializeOwned>(file: Option<&Path>, overrides: &[String]) -> Result<T, CliError> {
    let map = merged(file, overrides)?;
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Config(e.to_string()))
}
