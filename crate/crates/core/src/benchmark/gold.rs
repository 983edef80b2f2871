//! Gold-standard decisions and their append-only log.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::{parse_jsonl, JsonlError};
use crate::uri::normalize_uri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Link,
    NilNotInKb,
    DoNotAnnotate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Round {
    Independent,
    Consensus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldDecision {
    pub phrase_id: String,
    pub verdict: Verdict,
    #[serde(default)]
    pub uris: Vec<String>,
    pub annotator_id: String,
    pub round: Round,
}

#[derive(Debug, Error)]
pub enum GoldError {
    #[error("invalid decision for phrase {phrase_id}: {message}")]
    Invalid { phrase_id: String, message: String },
    #[error("phrase {0} already has a consensus decision")]
    DuplicateConsensus(String),
    #[error("gold log {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] JsonlError),
}

/// `scheme:rest` with a letter-led scheme of letters, digits, `+`, `-`, `.`.
fn is_absolute_uri(uri: &str) -> bool {
    let Some((scheme, rest)) = uri.split_once(':') else {
        return false;
    };
    let mut chars = scheme.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !rest.is_empty()
}

impl GoldDecision {
    pub fn validate(&self) -> Result<(), GoldError> {
        let invalid = |message: &str| {
            Err(GoldError::Invalid {
                phrase_id: self.phrase_id.clone(),
                message: message.to_string(),
            })
        };
        if self.phrase_id.is_empty() {
            return invalid("phrase_id is empty");
        }
        if self.annotator_id.is_empty() {
            return invalid("annotator_id is empty");
        }
        match self.verdict {
            Verdict::Link if self.uris.is_empty() => invalid("a link verdict needs at least one uri"),
            Verdict::NilNotInKb | Verdict::DoNotAnnotate if !self.uris.is_empty() => {
                invalid("only a link verdict may carry uris")
            }
            _ => match self.uris.iter().find(|u| !is_absolute_uri(u)) {
                Some(u) => invalid(&format!("`{u}` is not an absolute uri")),
                None => Ok(()),
            },
        }
    }

    /// Validated copy with URIs normalized, deduplicated and sorted.
    pub fn normalized(&self) -> Result<GoldDecision, GoldError> {
        self.validate()?;
        let uris: BTreeSet<String> = self.uris.iter().map(|u| normalize_uri(u)).collect();
        Ok(GoldDecision {
            uris: uris.into_iter().collect(),
            ..self.clone()
        })
    }

    pub fn is_linkable(&self) -> bool {
        self.verdict == Verdict::Link
    }
}

/// The decision that counts for each phrase: the latest consensus decision,
/// or the latest independent one when no consensus exists.
pub fn resolve_gold(decisions: &[GoldDecision]) -> BTreeMap<String, GoldDecision> {
    let mut out: BTreeMap<String, GoldDecision> = BTreeMap::new();
    for d in decisions {
        let replace = match out.get(&d.phrase_id) {
            None => true,
            Some(prev) => d.round >= prev.round,
        };
        if replace {
            out.insert(d.phrase_id.clone(), d.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub annotator_id: String,
    pub round: Round,
    /// Distinct phrases decided.
    pub decided: usize,
    pub total: usize,
}

pub fn progress(decisions: &[GoldDecision], total_phrases: usize) -> Vec<Progress> {
    let mut decided: BTreeMap<(&str, Round), BTreeSet<&str>> = BTreeMap::new();
    for d in decisions {
        decided
            .entry((&d.annotator_id, d.round))
            .or_default()
            .insert(&d.phrase_id);
    }
    decided
        .into_iter()
        .map(|((annotator, round), phrases)| Progress {
            annotator_id: annotator.to_string(),
            round,
            decided: phrases.len(),
            total: total_phrases,
        })
        .collect()
}

/// Append-only decision log.
///
/// Writers are serialized; readers take an immutable snapshot. Each decision
/// is written as one line with a single `write_all` followed by a flush, and a
/// torn final line left by a crash is dropped when the log is opened.
#[derive(Debug)]
pub struct GoldStore {
    file: Mutex<Option<(PathBuf, File)>>,
    snapshot: RwLock<Arc<Vec<GoldDecision>>>,
}

impl GoldStore {
    pub fn in_memory() -> Self {
        GoldStore {
            file: Mutex::new(None),
            snapshot: RwLock::new(Arc::new(Vec::new())),
        }
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self, GoldError> {
        let path = path.as_ref().to_path_buf();
        let io = |source| GoldError::Io {
            path: path.clone(),
            source,
        };
        let existing = match std::fs::read_to_string(&path) {
            Ok(s) => s,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(io(e)),
        };
        let complete = match existing.rfind('\n') {
            Some(i) => &existing[..=i],
            None => "",
        };
        let decisions: Vec<GoldDecision> = parse_jsonl(complete)?;
        let file = OpenOptions::new().create(true).append(true).open(&path).map_err(io)?;
        if complete.len() != existing.len() {
            file.set_len(complete.len() as u64).map_err(io)?;
        }
        Ok(GoldStore {
            file: Mutex::new(Some((path, file))),
            snapshot: RwLock::new(Arc::new(decisions)),
        })
    }

    pub fn snapshot(&self) -> Arc<Vec<GoldDecision>> {
        Arc::clone(&self.snapshot.read())
    }

    /// Validate, normalize and append one decision.
    pub fn append(&self, decision: &GoldDecision) -> Result<GoldDecision, GoldError> {
        let decision = decision.normalized()?;
        let mut file = self.file.lock();
        let current = self.snapshot();
        if decision.round == Round::Consensus
            && current
                .iter()
                .any(|d| d.round == Round::Consensus && d.phrase_id == decision.phrase_id)
        {
            return Err(GoldError::DuplicateConsensus(decision.phrase_id));
        }
        if let Some((path, file)) = file.as_mut() {
            let mut line = serde_json::to_string(&decision).expect("decision serializes");
            line.push('\n');
            file.write_all(line.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|source| GoldError::Io {
                    path: path.clone(),
                    source,
                })?;
        }
        let mut next = Vec::with_capacity(current.len() + 1);
        next.extend(current.iter().cloned());
        next.push(decision.clone());
        *self.snapshot.write() = Arc::new(next);
        Ok(decision)
    }

    pub fn resolved(&self) -> BTreeMap<String, GoldDecision> {
        resolve_gold(&self.snapshot())
    }

    pub fn progress(&self, total_phrases: usize) -> Vec<Progress> {
        progress(&self.snapshot(), total_phrases)
    }

    /// The log as JSONL.
    pub fn export(&self) -> String {
        crate::annotation::to_jsonl(&self.snapshot())
    }
}
