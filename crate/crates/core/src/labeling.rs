//! Vertex labelings (per-vertex demands) and the companion label file format.

use thiserror::Error;

/// A non-negative integer demand on every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabeling(Vec<u32>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabelParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: vertex {vertex} labelled twice")]
    Duplicate { line: usize, vertex: usize },
}

impl VertexLabeling {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn constant(n: usize, value: u32) -> Self {
        Self(vec![value; n])
    }

    pub fn get(&self, v: usize) -> u32 {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, value: u32) {
        self.0[v] = value;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Labels restricted to `vertices`, in that order.
    pub fn restrict(&self, vertices: &[usize]) -> Self {
        Self(vertices.iter().map(|&v| self.0[v]).collect())
    }
}

impl From<Vec<u32>> for VertexLabeling {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Parses `v f(v)` lines for a graph on `n` vertices. Unlisted vertices get 0.
pub fn parse_labels(text: &str, n: usize) -> Result<VertexLabeling, LabelParseError> {
    let mut labels = vec![0u32; n];
    let mut seen = vec![false; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let malformed = |message: String| LabelParseError::Malformed { line, message };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [v, f] = tokens[..] else {
            return Err(malformed("expected `vertex label`".into()));
        };
        let vertex: usize = v
            .parse()
            .map_err(|_| malformed(format!("`{v}` is not a vertex id")))?;
        let value: u32 = f
            .parse()
            .map_err(|_| malformed(format!("`{f}` is not a 32-bit unsigned label")))?;
        if vertex >= n {
            return Err(LabelParseError::VertexOutOfRange { line, vertex, n });
        }
        if std::mem::replace(&mut seen[vertex], true) {
            return Err(LabelParseError::Duplicate { line, vertex });
        }
        labels[vertex] = value;
    }
    Ok(VertexLabeling(labels))
}

/// One `v f(v)` line per vertex.
pub fn write_labels(f: &VertexLabeling) -> String {
    let mut out = String::new();
    for (v, value) in f.0.iter().enumerate() {
        out.push_str(&format!("{v} {value}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_defaults_to_zero() {
        let f = parse_labels("# demands\n0 3\n2 1\n", 4).unwrap();
        assert_eq!(f.as_slice(), &[3, 0, 1, 0]);
        assert_eq!(parse_labels(&write_labels(&f), 4).unwrap(), f);
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(
            parse_labels("5 1", 3),
            Err(LabelParseError::VertexOutOfRange {
                line: 1,
                vertex: 5,
                n: 3
            })
        );
        assert_eq!(
            parse_labels("0 1\n0 2", 3),
            Err(LabelParseError::Duplicate { line: 2, vertex: 0 })
        );
        assert!(matches!(
            parse_labels("0 -1", 3),
            Err(LabelParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_labels("0 4294967296", 3),
            Err(LabelParseError::Malformed { .. })
        ));
        assert!(matches!(
            parse_labels("0", 3),
            Err(LabelParseError::Malformed { .. })
        ));
    }
}
