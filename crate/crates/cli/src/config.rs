use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::UsageError;

/// Reads a TOML or JSON file (chosen by extension, TOML otherwise) into a JSON value.
pub fn read_value(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let value = if is_json {
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
    } else {
        toml::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
    };
    Ok(value)
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Overlays the keys of a config file on parsed flags; file values win.
pub fn overlay<A: Serialize + DeserializeOwned>(args: A, path: Option<&Path>) -> Result<A> {
    let Some(path) = path else { return Ok(args) };
    let mut base = serde_json::to_value(&args)?;
    let over = read_value(path)?;
    if let Value::Object(o) = &over {
        if let Value::Object(b) = &base {
            if let Some(k) = o.keys().find(|k| !b.contains_key(*k)) {
                return Err(UsageError(format!("{}: unknown key {k:?}", path.display())).into());
            }
        }
    }
    merge(&mut base, over);
    serde_json::from_value(base).map_err(|e| UsageError(format!("{}: {e}", path.display())).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    struct Flags {
        a: f64,
        b: Option<usize>,
    }

    #[test]
    fn file_values_override_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "b = 3\n").unwrap();
        let out = overlay(Flags { a: 1.5, b: None }, Some(&path)).unwrap();
        assert_eq!(out, Flags { a: 1.5, b: Some(3) });

        let json = dir.path().join("c.json");
        std::fs::write(&json, r#"{"a": 2.0}"#).unwrap();
        assert_eq!(overlay(Flags { a: 1.5, b: Some(1) }, Some(&json)).unwrap().a, 2.0);

        std::fs::write(&path, "zzz = 1\n").unwrap();
        assert!(overlay(Flags { a: 1.5, b: None }, Some(&path)).is_err());
    }
}
