//! Flat `key = value` text: one pair per line, `#` starts a comment, blank
//! lines are ignored. Shared by run configs and instance files.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for KvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for KvError {}

/// Parsed pairs with their 1-based line numbers, in file order.
pub fn parse(text: &str) -> Result<Vec<(usize, String, String)>, KvError> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| KvError {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(KvError {
                line: i + 1,
                message: format!("invalid key `{key}`"),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(KvError {
                line: i + 1,
                message: format!("duplicate key `{key}`"),
            });
        }
        out.push((i + 1, key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}
