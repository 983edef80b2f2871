use serde::{Deserialize, Serialize};

use crate::annotation::Annotation;
use crate::corpus::Scene;
use crate::text::char_slice;

use super::PipelineError;

/// A group of transitively overlapping annotations from any systems, shown as
/// their longest span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PooledPhrase {
    pub phrase_id: String,
    pub debate_id: String,
    pub scene_id: String,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub annotations: Vec<Annotation>,
}

impl PooledPhrase {
    pub fn overlaps(&self, start: usize, end: usize) -> bool {
        self.start < end && start < self.end
    }

    /// URI-bearing annotations of one system.
    pub fn links_of<'a>(&'a self, system_id: &'a str) -> impl Iterator<Item = &'a Annotation> + 'a {
        self.annotations
            .iter()
            .filter(move |a| a.system_id == system_id && a.is_link())
    }

    pub fn is_linked_by(&self, system_id: &str) -> bool {
        self.links_of(system_id).next().is_some()
    }
}

pub fn phrase_id(debate_id: &str, scene_id: &str, ordinal: usize) -> String {
    format!("{debate_id}:{scene_id}:{ordinal}")
}

/// Pool the annotations of one scene into overlap-connected phrases.
pub fn pool(annotations: &[Annotation], debate_id: &str, scene: &Scene) -> Result<Vec<PooledPhrase>, PipelineError> {
    let text = scene.text();
    let len = scene.text_len();
    for a in annotations {
        if a.debate_id != debate_id || a.scene_id != scene.id {
            return Err(PipelineError::ForeignAnnotation {
                expected: crate::corpus::scene_key(debate_id, &scene.id),
                found: crate::corpus::scene_key(&a.debate_id, &a.scene_id),
            });
        }
        if a.start >= a.end || a.end > len {
            return Err(PipelineError::BadSpan {
                scene: crate::corpus::scene_key(debate_id, &scene.id),
                start: a.start,
                end: a.end,
                len,
            });
        }
    }
    let mut sorted: Vec<&Annotation> = annotations.iter().collect();
    sorted.sort_by(|a, b| (a.start, a.end, &a.system_id, &a.uri).cmp(&(b.start, b.end, &b.system_id, &b.uri)));

    let mut groups: Vec<(usize, usize, Vec<Annotation>)> = Vec::new();
    for a in sorted {
        match groups.last_mut() {
            Some((_, end, members)) if a.start < *end => {
                *end = (*end).max(a.end);
                members.push(a.clone());
            }
            _ => groups.push((a.start, a.end, vec![a.clone()])),
        }
    }
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(i, (start, end, annotations))| PooledPhrase {
            phrase_id: phrase_id(debate_id, &scene.id, i),
            debate_id: debate_id.to_string(),
            scene_id: scene.id.clone(),
            start,
            end,
            surface: char_slice(&text, start, end).to_string(),
            annotations,
        })
        .collect())
}
