//! Boundary-agnostic scoring of system annotations against pooled gold.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::annotation::Annotation;
use crate::corpus::scene_key;
use crate::kb::{EntityKind, KnowledgeBase};
use crate::pipeline::PooledPhrase;
use crate::uri::normalize_uri;

use super::gold::{GoldDecision, Verdict};
use super::BenchmarkError;

/// Entity kind of a URI, where known.
pub trait KindLookup {
    fn kind_of(&self, uri: &str) -> Option<EntityKind>;
}

impl KindLookup for KnowledgeBase {
    fn kind_of(&self, uri: &str) -> Option<EntityKind> {
        KnowledgeBase::kind_of(self, uri)
    }
}

impl KindLookup for HashMap<String, EntityKind> {
    fn kind_of(&self, uri: &str) -> Option<EntityKind> {
        self.get(&normalize_uri(uri)).copied()
    }
}

/// Every URI counts as `other`.
pub struct NoKinds;

impl KindLookup for NoKinds {
    fn kind_of(&self, _uri: &str) -> Option<EntityKind> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slice {
    Person,
    Organization,
    Other,
}

impl Slice {
    pub fn of(kind: Option<EntityKind>) -> Slice {
        match kind {
            Some(EntityKind::Person) => Slice::Person,
            Some(EntityKind::Party | EntityKind::Organization) => Slice::Organization,
            Some(EntityKind::Other) | None => Slice::Other,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Scores {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Scores {
        let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Scores {
            tp,
            fp,
            fn_,
            precision,
            recall,
            f1,
        }
    }

    fn add(&mut self, tp: usize, fp: usize, fn_: usize) {
        *self = Scores::from_counts(self.tp + tp, self.fp + fp, self.fn_ + fn_);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaF1 {
    pub baseline: String,
    /// (F1 - F1 of baseline) / F1 of baseline.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system_id: Option<String>,
    #[serde(flatten)]
    pub scores: Scores,
    pub slices: BTreeMap<Slice, Scores>,
    /// Links on phrases judged not in the KB.
    pub fp_on_nil: usize,
    /// Links on phrases that should not be annotated.
    pub fp_on_do_not_annotate: usize,
    /// System links counted in tp + fp.
    pub scored_links: usize,
    /// Phrases with a link verdict.
    pub linkable_phrases: usize,
    /// Pooled phrases without any gold decision.
    pub unscored_phrases: usize,
    /// System annotations that overlap no pooled phrase.
    pub unpooled_links: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_f1_vs: Option<DeltaF1>,
}

impl EvalReport {
    pub fn with_baseline(mut self, name: &str, baseline: &EvalReport) -> EvalReport {
        self.delta_f1_vs = Some(DeltaF1 {
            baseline: name.to_string(),
            value: delta_f1(self.scores.f1, baseline.scores.f1),
        });
        self
    }
}

/// Relative F1 change; undefined for a zero baseline.
pub fn delta_f1(f1: f64, baseline_f1: f64) -> Option<f64> {
    (baseline_f1 != 0.0).then(|| (f1 - baseline_f1) / baseline_f1)
}

/// Maps annotations onto the pooled phrases they overlap.
pub struct PhraseLocator<'a> {
    phrases: &'a [PooledPhrase],
    by_scene: HashMap<String, Vec<usize>>,
}

impl<'a> PhraseLocator<'a> {
    pub fn new(phrases: &'a [PooledPhrase]) -> Self {
        let mut by_scene: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, p) in phrases.iter().enumerate() {
            by_scene
                .entry(scene_key(&p.debate_id, &p.scene_id))
                .or_default()
                .push(i);
        }
        PhraseLocator { phrases, by_scene }
    }

    /// Index of the phrase sharing the most characters with `a`; the earliest
    /// one on a tie.
    pub fn locate(&self, a: &Annotation) -> Option<usize> {
        let candidates = self.by_scene.get(&scene_key(&a.debate_id, &a.scene_id))?;
        let mut best: Option<(usize, usize)> = None;
        for &i in candidates {
            let p = &self.phrases[i];
            if !p.overlaps(a.start, a.end) {
                continue;
            }
            let shared = a.end.min(p.end) - a.start.max(p.start);
            if best.is_none_or(|(_, s)| shared > s) {
                best = Some((i, shared));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Distinct normalized URIs linked per phrase index, plus the number of
    /// links that fell outside every phrase.
    pub fn links_by_phrase(&self, annotations: &[Annotation]) -> (BTreeMap<usize, BTreeSet<String>>, usize) {
        let mut out: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        let mut unpooled = 0;
        for a in annotations {
            let Some(uri) = a.uri.as_deref() else { continue };
            match self.locate(a) {
                Some(i) => {
                    out.entry(i).or_default().insert(normalize_uri(uri));
                }
                None => unpooled += 1,
            }
        }
        (out, unpooled)
    }
}

/// Outcome of one phrase under the scoring rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhraseScore {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

/// Scores one phrase given the system's distinct normalized URIs there and
/// the gold decision (with normalized URIs).
///
/// A correct URI makes the phrase a single TP and excuses any other URIs the
/// system put on it. Otherwise every distinct URI is an FP, and a linkable
/// phrase is also an FN.
pub fn score_phrase(system_uris: &BTreeSet<String>, gold: &GoldDecision) -> PhraseScore {
    let linkable = gold.verdict == Verdict::Link;
    if system_uris.is_empty() {
        return PhraseScore {
            tp: 0,
            fp: 0,
            fn_: usize::from(linkable),
        };
    }
    if linkable && gold.uris.iter().any(|u| system_uris.contains(u)) {
        return PhraseScore { tp: 1, fp: 0, fn_: 0 };
    }
    PhraseScore {
        tp: 0,
        fp: system_uris.len(),
        fn_: usize::from(linkable),
    }
}

/// Resolve gold to one decision per phrase and check it refers to the pool.
pub fn resolve_against_pool(
    gold: &[GoldDecision],
    phrases: &[PooledPhrase],
) -> Result<BTreeMap<String, GoldDecision>, BenchmarkError> {
    let known: BTreeSet<&str> = phrases.iter().map(|p| p.phrase_id.as_str()).collect();
    if let Some(d) = gold.iter().find(|d| !known.contains(d.phrase_id.as_str())) {
        return Err(BenchmarkError::UnknownPhrase(d.phrase_id.clone()));
    }
    let normalized = gold.iter().map(|d| d.normalized()).collect::<Result<Vec<_>, _>>()?;
    Ok(super::gold::resolve_gold(&normalized))
}

pub fn evaluate(
    system: &[Annotation],
    gold: &[GoldDecision],
    phrases: &[PooledPhrase],
    kinds: &dyn KindLookup,
) -> Result<EvalReport, BenchmarkError> {
    let gold = resolve_against_pool(gold, phrases)?;
    let locator = PhraseLocator::new(phrases);
    let (links, unpooled_links) = locator.links_by_phrase(system);
    let empty = BTreeSet::new();

    let mut scores = Scores::from_counts(0, 0, 0);
    let mut slices: BTreeMap<Slice, Scores> = [Slice::Person, Slice::Organization, Slice::Other]
        .into_iter()
        .map(|s| (s, Scores::from_counts(0, 0, 0)))
        .collect();
    let mut report = EvalReport {
        system_id: system.first().map(|a| a.system_id.clone()),
        scores,
        slices: BTreeMap::new(),
        fp_on_nil: 0,
        fp_on_do_not_annotate: 0,
        scored_links: 0,
        linkable_phrases: 0,
        unscored_phrases: 0,
        unpooled_links,
        delta_f1_vs: None,
    };
    for (i, phrase) in phrases.iter().enumerate() {
        let Some(decision) = gold.get(&phrase.phrase_id) else {
            report.unscored_phrases += 1;
            continue;
        };
        let uris = links.get(&i).unwrap_or(&empty);
        let s = score_phrase(uris, decision);
        scores.add(s.tp, s.fp, s.fn_);
        report.scored_links += s.tp + s.fp;
        match decision.verdict {
            Verdict::Link => report.linkable_phrases += 1,
            Verdict::NilNotInKb => report.fp_on_nil += s.fp,
            Verdict::DoNotAnnotate => report.fp_on_do_not_annotate += s.fp,
        }
        // a linkable phrase is sliced by what it refers to, anything else by
        // what the system claimed it was
        let kind = if decision.verdict == Verdict::Link {
            decision.uris.iter().find_map(|u| kinds.kind_of(u))
        } else {
            uris.iter().find_map(|u| kinds.kind_of(u))
        };
        slices
            .get_mut(&Slice::of(kind))
            .expect("all slices present")
            .add(s.tp, s.fp, s.fn_);
    }
    report.scores = scores;
    report.slices = slices;
    Ok(report)
}

/// Phrases linked by exactly one of the two systems.
pub fn recall_gain_bound(a: &[Annotation], b: &[Annotation], phrases: &[PooledPhrase]) -> usize {
    let locator = PhraseLocator::new(phrases);
    let linked = |anns: &[Annotation]| -> BTreeSet<usize> { locator.links_by_phrase(anns).0.into_keys().collect() };
    linked(a).symmetric_difference(&linked(b)).count()
}
