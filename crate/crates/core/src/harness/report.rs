use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Pretty JSON with keys in sorted order and a trailing newline, so reports
/// can be diffed byte for byte.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's Map is ordered by key unless `preserve_order` is enabled.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_report<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, canonical_json(value)?)?;
    Ok(())
}

/// Compare against a stored report.
pub fn matches_golden<T: Serialize>(path: &Path, value: &T) -> Result<bool> {
    let stored = std::fs::read_to_string(path)?;
    Ok(stored == canonical_json(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_are_sorted() {
        let mut m = HashMap::new();
        for k in ["b", "a", "c"] {
            m.insert(k, 1);
        }
        assert_eq!(
            canonical_json(&m).unwrap(),
            "{\n  \"a\": 1,\n  \"b\": 1,\n  \"c\": 1\n}\n"
        );
    }
}
