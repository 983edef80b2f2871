use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::kb::{EntityKind, KnowledgeBase};
use crate::pipeline::PooledPhrase;
use crate::uri::normalize_uri;

/// An entity offered to annotators for a phrase. Systems may link outside the
/// KB, so name and kind are only known for KB entities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub uri: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<EntityKind>,
    /// Proposed by at least one system rather than found by name search.
    pub from_systems: bool,
}

/// URIs linked by the phrase's systems, followed by the top `k` KB search
/// results for the phrase surface. Duplicates (after normalization) are
/// dropped, keeping the first occurrence.
pub fn preselect_candidates(phrase: &PooledPhrase, kb: &KnowledgeBase, k: usize) -> Vec<Candidate> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for uri in phrase.annotations.iter().filter_map(|a| a.uri.as_deref()) {
        if !seen.insert(normalize_uri(uri)) {
            continue;
        }
        let entity = kb.entity(uri);
        out.push(Candidate {
            uri: uri.to_string(),
            name: entity.map(|e| e.canonical_name.clone()),
            kind: entity.map(|e| e.kind),
            from_systems: true,
        });
    }
    for e in kb.search(&phrase.surface, k) {
        if seen.insert(normalize_uri(&e.uri)) {
            out.push(Candidate {
                uri: e.uri.clone(),
                name: Some(e.canonical_name.clone()),
                kind: Some(e.kind),
                from_systems: false,
            });
        }
    }
    out
}
