//! Structured conversational records: debates, scenes, speech units and the
//! speakers list derived from them.
//!
//! The on-disk corpus is JSON Lines, one debate per line. Blank lines and lines
//! starting with `#` are ignored, so a file holding only comments is a valid
//! empty corpus; a file with no content at all is rejected.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("corpus file is empty")]
    Empty,
    #[error("invalid record `{id}`: {message}")]
    Invariant { id: String, message: String },
    #[error("unmapped portfolio(s): {}", .0.join(", "))]
    UnmappedPortfolio(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeakerRole {
    Minister,
    Secretary,
    Member,
    Chair,
}

impl SpeakerRole {
    pub fn is_government(self) -> bool {
        matches!(self, SpeakerRole::Minister | SpeakerRole::Secretary)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeakerRef {
    pub uri: String,
    pub display_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<SpeakerRole>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub portfolio: Option<String>,
}

impl SpeakerRef {
    pub fn is_government(&self) -> bool {
        self.role.is_some_and(SpeakerRole::is_government)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeechUnit {
    pub id: String,
    pub speaker: SpeakerRef,
    pub text: String,
}

/// A single member's speaking time, including interruptions and replies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub id: String,
    pub speech_units: Vec<SpeechUnit>,
}

impl Scene {
    /// Linking text: speech-unit texts joined by a single `\n`.
    pub fn text(&self) -> String {
        let parts: Vec<&str> = self.speech_units.iter().map(|u| u.text.as_str()).collect();
        parts.join("\n")
    }

    pub fn text_len(&self) -> usize {
        let joins = self.speech_units.len().saturating_sub(1);
        self.speech_units.iter().map(|u| text::char_len(&u.text)).sum::<usize>() + joins
    }

    /// Start offset of each speech unit within [`Scene::text`].
    pub fn unit_starts(&self) -> Vec<usize> {
        let mut starts = Vec::with_capacity(self.speech_units.len());
        let mut at = 0;
        for unit in &self.speech_units {
            starts.push(at);
            at += text::char_len(&unit.text) + 1;
        }
        starts
    }

    pub fn principal_speaker(&self) -> Option<&SpeakerRef> {
        self.speech_units.first().map(|u| &u.speaker)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Debate {
    pub id: String,
    pub date: NaiveDate,
    pub house: String,
    pub scenes: Vec<Scene>,
}

impl Debate {
    pub fn scene(&self, scene_id: &str) -> Option<&Scene> {
        self.scenes.iter().find(|s| s.id == scene_id)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |id: &str, message: &str| CorpusError::Invariant {
            id: id.to_string(),
            message: message.to_string(),
        };
        if self.id.is_empty() {
            return Err(bad("<empty>", "debate id is empty"));
        }
        if self.scenes.is_empty() {
            return Err(bad(&self.id, "debate has no scenes"));
        }
        let mut seen = HashSet::new();
        for scene in &self.scenes {
            if !seen.insert(scene.id.as_str()) {
                return Err(bad(&scene.id, &format!("duplicate scene id in debate {}", self.id)));
            }
            if scene.speech_units.is_empty() {
                return Err(bad(&scene.id, "scene has no speech units"));
            }
            for unit in &scene.speech_units {
                if unit.speaker.uri.is_empty() {
                    return Err(bad(&unit.id, "speaker uri is empty"));
                }
            }
        }
        Ok(())
    }
}

/// Identifier of a scene across the whole corpus: `debate_id:scene_id`.
pub fn scene_key(debate_id: &str, scene_id: &str) -> String {
    format!("{debate_id}:{scene_id}")
}

pub fn parse_corpus(input: &str) -> Result<Vec<Debate>, CorpusError> {
    if input.trim().is_empty() {
        return Err(CorpusError::Empty);
    }
    let mut debates: Vec<Debate> = Vec::new();
    let mut ids = HashSet::new();
    for (n, line) in input.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let debate: Debate = serde_json::from_str(line).map_err(|e| CorpusError::Parse {
            line: n + 1,
            column: e.column(),
            message: e.to_string(),
        })?;
        debate.validate()?;
        if !ids.insert(debate.id.clone()) {
            return Err(CorpusError::Invariant {
                id: debate.id,
                message: "duplicate debate id".into(),
            });
        }
        debates.push(debate);
    }
    Ok(debates)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Debate>, CorpusError> {
    let path = path.as_ref();
    let input = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&input)
}

pub fn write_corpus(debates: &[Debate]) -> String {
    let mut out = String::new();
    for d in debates {
        out.push_str(&serde_json::to_string(d).expect("debate serializes"));
        out.push('\n');
    }
    out
}

/// Distinct speakers of a debate in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SpeakersList {
    pub entries: Vec<SpeakerRef>,
}

impl SpeakersList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SpeakerRef> {
        self.entries.iter()
    }
}

pub fn speakers_list(debate: &Debate) -> SpeakersList {
    let mut seen = HashSet::new();
    let entries = debate
        .scenes
        .iter()
        .flat_map(|s| &s.speech_units)
        .filter(|u| seen.insert(u.speaker.uri.as_str()))
        .map(|u| u.speaker.clone())
        .collect();
    SpeakersList { entries }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DepartmentLabel {
    pub name: String,
    pub is_none_stratum: bool,
}

impl fmt::Display for DepartmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub const NONE_STRATUM: &str = "Without department";

/// Portfolio → department association, read from a `portfolio<TAB>department`
/// table. Portfolios are compared case-insensitively.
#[derive(Debug, Clone)]
pub struct PortfolioMap {
    map: HashMap<String, DepartmentLabel>,
    none: DepartmentLabel,
}

impl PortfolioMap {
    pub fn new(none_stratum_name: &str) -> Self {
        PortfolioMap {
            map: HashMap::new(),
            none: DepartmentLabel {
                name: none_stratum_name.to_string(),
                is_none_stratum: true,
            },
        }
    }

    pub fn insert(&mut self, portfolio: &str, department: &str) -> Result<(), String> {
        let label = if department == self.none.name {
            self.none.clone()
        } else {
            DepartmentLabel {
                name: department.to_string(),
                is_none_stratum: false,
            }
        };
        let key = text::fold_str(portfolio.trim());
        match self.map.get(&key) {
            Some(existing) if existing != &label => Err(format!(
                "portfolio `{portfolio}` mapped to both `{existing}` and `{label}`"
            )),
            _ => {
                self.map.insert(key, label);
                Ok(())
            }
        }
    }

    pub fn parse(input: &str) -> Result<Self, CorpusError> {
        let mut pm = PortfolioMap::new(NONE_STRATUM);
        for (n, line) in input.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(portfolio), Some(department), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(CorpusError::Parse {
                    line: n + 1,
                    column: 1,
                    message: "expected `portfolio<TAB>department`".into(),
                });
            };
            pm.insert(portfolio, department.trim())
                .map_err(|message| CorpusError::Parse {
                    line: n + 1,
                    column: 1,
                    message,
                })?;
        }
        Ok(pm)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let input = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&input)
    }

    pub fn none_stratum(&self) -> &DepartmentLabel {
        &self.none
    }

    pub fn get(&self, portfolio: &str) -> Option<&DepartmentLabel> {
        self.map.get(&text::fold_str(portfolio.trim()))
    }

    /// Every label of the configuration, the none stratum included.
    pub fn departments(&self) -> BTreeSet<DepartmentLabel> {
        let mut all: BTreeSet<_> = self.map.values().cloned().collect();
        all.insert(self.none.clone());
        all
    }
}

/// Departments a debate is associated with, judged by its government speakers.
///
/// Government speakers without a portfolio contribute no label. When no label
/// results, the debate belongs to the none stratum.
pub fn infer_departments(
    debate: &Debate,
    portfolio_map: &PortfolioMap,
) -> Result<BTreeSet<DepartmentLabel>, CorpusError> {
    let mut labels = BTreeSet::new();
    let mut unmapped = BTreeSet::new();
    for speaker in speakers_list(debate).entries {
        if !speaker.is_government() {
            continue;
        }
        let Some(portfolio) = speaker.portfolio.as_deref() else {
            continue;
        };
        match portfolio_map.get(portfolio) {
            Some(label) => {
                labels.insert(label.clone());
            }
            None => {
                unmapped.insert(portfolio.to_string());
            }
        }
    }
    if !unmapped.is_empty() {
        return Err(CorpusError::UnmappedPortfolio(unmapped.into_iter().collect()));
    }
    if labels.is_empty() {
        labels.insert(portfolio_map.none_stratum().clone());
    }
    Ok(labels)
}
