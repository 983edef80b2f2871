//! The annotation record every linker emits, and the line-delimited
//! interchange file that lets external systems take part by file drop.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One system's link for a span of scene text.
///
/// `uri` is absent for spotted-but-unresolved mentions; those take part in
/// pooling but never count as a link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub debate_id: String,
    pub scene_id: String,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub uri: Option<String>,
    pub system_id: String,
    pub confidence: f64,
}

impl Annotation {
    pub fn is_link(&self) -> bool {
        self.uri.as_deref().is_some_and(|u| !u.is_empty())
    }

    pub fn overlaps(&self, start: usize, end: usize) -> bool {
        self.start < end && start < self.end
    }
}

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Parse JSON Lines, skipping blank lines.
pub fn parse_jsonl<T: DeserializeOwned>(input: &str) -> Result<Vec<T>, JsonlError> {
    input
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| JsonlError::Parse {
                line: n + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn to_jsonl<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn read_jsonl<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<T>, JsonlError> {
    let path = path.as_ref();
    let input = std::fs::read_to_string(path).map_err(|source| JsonlError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_jsonl(&input)
}

pub fn write_jsonl<T: Serialize>(path: impl AsRef<Path>, records: &[T]) -> Result<(), JsonlError> {
    let path = path.as_ref();
    std::fs::write(path, to_jsonl(records)).map_err(|source| JsonlError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_annotations(path: impl AsRef<Path>) -> Result<Vec<Annotation>, JsonlError> {
    read_jsonl(path)
}
