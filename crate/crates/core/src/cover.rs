//! Path covers and their text and structured encodings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::IsometricPath;

/// A path together with how many times it occurs in a cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverEntry {
    pub path: IsometricPath,
    pub copies: u64,
}

/// A multiset of paths, stored as entries with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cover {
    entries: Vec<CoverEntry>,
}

impl Cover {
    pub fn new() -> Self {
        Self::default()
    }

    /// One entry per path, each with multiplicity one.
    pub fn from_paths(paths: impl IntoIterator<Item = IsometricPath>) -> Self {
        Self {
            entries: paths
                .into_iter()
                .map(|path| CoverEntry { path, copies: 1 })
                .collect(),
        }
    }

    pub fn push(&mut self, path: IsometricPath, copies: u64) {
        if copies > 0 {
            self.entries.push(CoverEntry { path, copies });
        }
    }

    pub fn extend(&mut self, other: Cover) {
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> &[CoverEntry] {
        &self.entries
    }

    /// Total number of paths, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.entries.iter().map(|e| e.copies).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every path, repeated according to its multiplicity.
    pub fn paths(&self) -> impl Iterator<Item = &IsometricPath> + '_ {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(&e.path, e.copies as usize))
    }

    /// Sorted list of orientation-normalized paths; equal for equal multisets.
    pub fn canonical(&self) -> Vec<IsometricPath> {
        let mut all: Vec<_> = self.paths().map(|p| p.clone().normalized()).collect();
        all.sort();
        all
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Text form: `ip <value>` followed by one path per line, repeated per copy.
pub fn write_cover_text(value: u64, cover: &Cover) -> String {
    let mut out = format!("ip {value}\n");
    for path in cover.paths() {
        out.push_str(&path.to_string());
        out.push('\n');
    }
    out
}

/// Parses the text form. The `ip` header is optional; its value is returned
/// when present.
pub fn parse_cover_text(text: &str) -> Result<(Option<u64>, Cover), CoverParseError> {
    let mut value = None;
    let mut paths = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let malformed = |message: String| CoverParseError::Malformed { line, message };
        if let Some(rest) = content.strip_prefix("ip") {
            if value.is_some() || !paths.is_empty() {
                return Err(malformed("`ip` header must come first".into()));
            }
            let rest = rest.trim();
            value = Some(
                rest.parse()
                    .map_err(|_| malformed(format!("`{rest}` is not a count")))?,
            );
            continue;
        }
        let vertices = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| malformed(format!("`{tok}` is not a vertex id")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        paths.push(IsometricPath::new(vertices));
    }
    Ok((value, Cover::from_paths(paths)))
}

/// Machine-readable solve output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredOutput {
    pub value: u64,
    pub paths: Vec<Vec<usize>>,
    pub regularized_labels: Vec<u32>,
    pub verified: bool,
}

impl StructuredOutput {
    pub fn new(value: u64, cover: &Cover, regularized: &[u32], verified: bool) -> Self {
        Self {
            value,
            paths: cover.paths().map(|p| p.vertices().to_vec()).collect(),
            regularized_labels: regularized.to_vec(),
            verified,
        }
    }

    pub fn cover(&self) -> Cover {
        Cover::from_paths(self.paths.iter().cloned().map(IsometricPath::new))
    }
}
