use std::collections::{BTreeMap, BTreeSet};

use crate::annotation::Annotation;

use super::{PipelineError, PooledPhrase};

pub const VOTE_SYSTEM_ID: &str = "vote";

/// Validated system order for preference combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceOrder(Vec<String>);

impl PreferenceOrder {
    pub fn new<'a>(order: Vec<String>, known: impl IntoIterator<Item = &'a str>) -> Result<Self, PipelineError> {
        if order.is_empty() {
            return Err(PipelineError::EmptyOrder);
        }
        let known: BTreeSet<&str> = known.into_iter().collect();
        let mut seen = BTreeSet::new();
        for id in &order {
            if !known.contains(id.as_str()) {
                return Err(PipelineError::UnknownSystem(id.clone()));
            }
            if !seen.insert(id.as_str()) {
                return Err(PipelineError::DuplicateSystem(id.clone()));
            }
        }
        Ok(PreferenceOrder(order))
    }

    pub fn systems(&self) -> &[String] {
        &self.0
    }

    pub fn first(&self) -> &str {
        &self.0[0]
    }
}

/// Per phrase, the links of the first system in `order` that linked it.
///
/// Systems are consulted in order and the next one is only asked when the
/// previous one produced no URI-bearing annotation in the phrase.
pub fn combine_preference(order: &PreferenceOrder, phrases: &[PooledPhrase]) -> Vec<Annotation> {
    let mut out = Vec::new();
    for phrase in phrases {
        for system in order.systems() {
            let links: Vec<&Annotation> = phrase.links_of(system).collect();
            if !links.is_empty() {
                out.extend(links.into_iter().cloned());
                break;
            }
        }
    }
    out
}

/// Supporting systems, their confidences and annotations for one URI.
type Support<'a> = (BTreeSet<&'a str>, Vec<f64>, Vec<&'a Annotation>);

/// Majority vote over systems per phrase.
///
/// Each system supports a URI at most once per phrase. Ties go to the higher
/// mean confidence, then to the lexicographically smaller URI. The emitted
/// annotation takes the longest supporting span.
pub fn combine_voting(phrases: &[PooledPhrase]) -> Vec<Annotation> {
    let mut out = Vec::new();
    for phrase in phrases {
        let mut support: BTreeMap<&str, Support> = BTreeMap::new();
        for a in phrase.annotations.iter().filter(|a| a.is_link()) {
            let slot = support.entry(a.uri.as_deref().unwrap()).or_default();
            slot.0.insert(&a.system_id);
            slot.1.push(a.confidence);
            slot.2.push(a);
        }
        let winner = support.iter().max_by(|(ua, a), (ub, b)| {
            let mean = |c: &Vec<f64>| c.iter().sum::<f64>() / c.len() as f64;
            a.0.len()
                .cmp(&b.0.len())
                .then(mean(&a.1).total_cmp(&mean(&b.1)))
                .then(ub.cmp(ua))
        });
        let Some((uri, (_, confidences, anns))) = winner else {
            continue;
        };
        let span = anns
            .iter()
            .max_by(|a, b| (a.end - a.start).cmp(&(b.end - b.start)).then(b.start.cmp(&a.start)))
            .expect("winner has support");
        out.push(Annotation {
            uri: Some(uri.to_string()),
            system_id: VOTE_SYSTEM_ID.to_string(),
            confidence: confidences.iter().sum::<f64>() / confidences.len() as f64,
            ..(*span).clone()
        });
    }
    out
}
