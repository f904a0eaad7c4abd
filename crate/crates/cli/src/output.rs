use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::exit::CliResult;

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = concat!("cmsoule ", env!("CARGO_PKG_VERSION"));

/// Wraps a payload as `{"schema": 1, "tool_version": ..., "command": ..., <payload>}`.
pub fn envelope(command: &str, payload: impl Serialize) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "tool_version": TOOL_VERSION,
        "command": command,
    });
    match serde_json::to_value(payload).expect("serializable") {
        Value::Object(map) => v.as_object_mut().unwrap().extend(map),
        other => {
            v["result"] = other;
        }
    }
    v
}

/// Writes `contents` to `path` through a sibling temporary file, so a
/// failed run never leaves a partial report behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".part");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(contents)?;
    f.sync_all()?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Pretty JSON to `path`, or to stdout when no path is given.
pub fn emit_json(value: &Value, path: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_flattens_objects() {
        let v = envelope("x", json!({"a": 1}));
        assert_eq!(v["schema"], 1);
        assert_eq!(v["a"], 1);
        let v = envelope("x", vec![1, 2]);
        assert_eq!(v["result"], json!([1, 2]));
    }

    #[test]
    fn atomic_write_leaves_no_temporary() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"{}").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "{}");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
