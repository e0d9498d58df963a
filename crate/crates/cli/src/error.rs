use std::fmt;
use std::path::{Path, PathBuf};

/// Input problem, reported as `file:line: message` when the location is known.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub file: Option<PathBuf>,
    pub line: Option<usize>,
    pub message: String,
}

impl CliError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            file: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn in_file(path: &Path, message: impl Into<String>) -> Self {
        Self {
            file: Some(path.to_path_buf()),
            line: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, line: Option<usize>) -> Self {
        if self.line.is_none() {
            self.line = line;
        }
        self
    }

    /// Attaches `path` unless a file is already set.
    pub fn within(mut self, path: &Path) -> Self {
        if self.file.is_none() {
            self.file = Some(path.to_path_buf());
        }
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.file, self.line) {
            (Some(p), Some(l)) => write!(f, "{}:{l}: {}", p.display(), self.message),
            (Some(p), None) => write!(f, "{}: {}", p.display(), self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for CliError {}

/// 1-based line of byte offset `pos`.
pub fn line_at(text: &str, pos: usize) -> usize {
    text[..pos.min(text.len())].matches('\n').count() + 1
}

/// First line mentioning any backquoted token of `message`, then any of `extra`.
pub fn locate(text: &str, message: &str, extra: &[&str]) -> Option<usize> {
    let quoted = message.split('`').skip(1).step_by(2);
    for tok in quoted.chain(extra.iter().copied()) {
        if tok.is_empty() {
            continue;
        }
        // bare port names also match node headers; prefer a quoted occurrence
        for needle in [format!("\"{tok}\""), tok.to_string()] {
            if let Some(p) = text.find(&needle) {
                return Some(line_at(text, p));
            }
        }
    }
    None
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::in_file(path, format!("cannot read: {e}")))
}

pub fn parse_toml<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_at(text, s.start));
        CliError::in_file(path, e.message().trim().to_string()).at(line)
    })
}
