//! Line-oriented key-value format shared by scenario and experiment files.
//!
//! ```text
//! # comment
//! key = value
//! [section optional-label]
//! key = value
//! ```
//!
//! Keys before the first header belong to an unnamed root section.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line number, 0 when the error is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Section {
    /// Empty for the root section.
    pub name: String,
    pub label: Option<String>,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get(key).ok_or_else(|| {
            let place = if self.name.is_empty() {
                String::new()
            } else {
                format!(" in [{}]", self.name)
            };
            ConfigError::new(self.line, format!("missing field `{key}`{place}"))
        })
    }

    pub fn parse_value<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e.parse().map(Some),
        }
    }

    pub fn require_value<T: FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.require(key)?.parse()
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(ConfigError::new(e.line, format!("unknown field `{}`", e.key)));
            }
        }
        Ok(())
    }
}

impl Entry {
    pub fn parse<T: FromStr>(&self) -> Result<T, ConfigError> {
        self.value.parse().map_err(|_| {
            ConfigError::new(
                self.line,
                format!("field `{}`: cannot parse `{}`", self.key, self.value),
            )
        })
    }

    pub fn parse_list<T: FromStr>(&self) -> Result<Vec<T>, ConfigError> {
        parse_list(&self.value).map_err(|bad| {
            ConfigError::new(
                self.line,
                format!("field `{}`: cannot parse list item `{bad}`", self.key),
            )
        })
    }
}

/// Parses a comma-separated list; on failure returns the offending item.
pub fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>, String> {
    let text = text.trim().trim_start_matches('[').trim_end_matches(']');
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse().map_err(|_| item.to_string())
        })
        .collect()
}

pub fn parse_document(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections = vec![Section::default()];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::new(line_no, "unterminated section header"))?
                .trim();
            let mut parts = inner.split_whitespace();
            let name = parts
                .next()
                .ok_or_else(|| ConfigError::new(line_no, "empty section header"))?;
            let label = parts.next().map(str::to_string);
            if parts.next().is_some() {
                return Err(ConfigError::new(line_no, "section header takes at most one label"));
            }
            sections.push(Section {
                name: name.to_string(),
                label,
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(line_no, format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::new(line_no, "empty key"));
        }
        let section = sections.last_mut().expect("root section");
        if section.get(key).is_some() {
            return Err(ConfigError::new(line_no, format!("duplicate field `{key}`")));
        }
        section.entries.push(Entry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line: line_no,
        });
    }
    Ok(sections)
}
