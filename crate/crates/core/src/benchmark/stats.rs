use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::scene_key;
use crate::kb::EntityKind;
use crate::pipeline::PooledPhrase;

use super::eval::KindLookup;
use super::gold::{GoldDecision, Verdict};
use super::sample::SampleItem;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub department: String,
    pub scenes: usize,
    /// Pooled phrases.
    pub phrases: usize,
    /// Phrases whose gold links a person.
    pub persons: usize,
    /// Phrases whose gold links a party or other organization.
    pub organizations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats {
    pub rows: Vec<StatsRow>,
    pub total: StatsRow,
}

/// Composition of a sample: one row per department, most phrases first.
///
/// `gold` must already be resolved to one decision per phrase.
pub fn sample_stats(
    sample: &[SampleItem],
    phrases: &[PooledPhrase],
    gold: &BTreeMap<String, GoldDecision>,
    kinds: &dyn KindLookup,
) -> SampleStats {
    let mut by_scene: HashMap<String, Vec<&PooledPhrase>> = HashMap::new();
    for p in phrases {
        by_scene
            .entry(scene_key(&p.debate_id, &p.scene_id))
            .or_default()
            .push(p);
    }
    let mut rows: BTreeMap<&str, StatsRow> = BTreeMap::new();
    for item in sample {
        let row = rows.entry(&item.department).or_insert_with(|| StatsRow {
            department: item.department.clone(),
            ..StatsRow::default()
        });
        row.scenes += 1;
        let scene_phrases = by_scene
            .get(&scene_key(&item.debate_id, &item.scene_id))
            .map(Vec::as_slice)
            .unwrap_or_default();
        row.phrases += scene_phrases.len();
        for p in scene_phrases {
            let Some(d) = gold.get(&p.phrase_id).filter(|d| d.verdict == Verdict::Link) else {
                continue;
            };
            match d.uris.iter().find_map(|u| kinds.kind_of(u)) {
                Some(EntityKind::Person) => row.persons += 1,
                Some(EntityKind::Party | EntityKind::Organization) => row.organizations += 1,
                _ => {}
            }
        }
    }
    let mut rows: Vec<StatsRow> = rows.into_values().collect();
    rows.sort_by(|a, b| b.phrases.cmp(&a.phrases).then(a.department.cmp(&b.department)));
    let mut total = StatsRow {
        department: "Total".to_string(),
        ..StatsRow::default()
    };
    for r in &rows {
        total.scenes += r.scenes;
        total.phrases += r.phrases;
        total.persons += r.persons;
        total.organizations += r.organizations;
    }
    SampleStats { rows, total }
}
