//! Gazetteer linker for unambiguously named entity types such as political
//! parties.
//!
//! Matching runs in three steps: every alias occurrence is found with an
//! Aho-Corasick scan, matches that start or end inside a longer alphanumeric
//! token are dropped, and the survivors are reduced to a leftmost-longest,
//! non-overlapping selection.

mod automaton;

pub use automaton::{Automaton, EmptyDictionary, RawMatch, ScanStats, StateId, ROOT};

use crate::annotation::Annotation;
use crate::corpus::Scene;
use crate::kb::{AliasDictionary, CasePolicy};
use crate::text::{char_slice, fold_char, is_token_char};

pub const SYSTEM_ID: &str = "dict";

pub fn build_automaton(dict: &AliasDictionary) -> Result<Automaton, EmptyDictionary> {
    Automaton::build(dict)
}

pub fn find_matches(automaton: &Automaton, text: &str) -> Vec<RawMatch> {
    automaton.find_matches(text)
}

/// Reference matcher: compares every alias at every offset.
pub fn brute_force_matches(dict: &AliasDictionary, text: &str) -> Vec<RawMatch> {
    let text: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    for (alias_id, entry) in dict.entries().iter().enumerate() {
        let alias: Vec<char> = entry.alias.chars().collect();
        if alias.len() > text.len() {
            continue;
        }
        for start in 0..=text.len() - alias.len() {
            let window = &text[start..start + alias.len()];
            let equal = match entry.case {
                CasePolicy::Sensitive => window == &alias[..],
                CasePolicy::Insensitive => window.iter().zip(&alias).all(|(&a, &b)| fold_char(a) == fold_char(b)),
            };
            if equal {
                out.push(RawMatch {
                    start,
                    end: start + alias.len(),
                    alias_id,
                });
            }
        }
    }
    out.sort_unstable();
    out
}

/// True when the match neither starts nor ends inside an alphanumeric run.
pub fn on_token_boundary(text: &[char], m: &RawMatch) -> bool {
    let before = m.start.checked_sub(1).map(|i| text[i]);
    let after = text.get(m.end).copied();
    !before.is_some_and(is_token_char) && !after.is_some_and(is_token_char)
}

/// Leftmost-longest selection: earliest start wins, then the longest match,
/// then the lowest alias id; every match overlapping a selected one is dropped.
pub fn select_leftmost_longest(mut matches: Vec<RawMatch>) -> Vec<RawMatch> {
    matches.sort_by(|a, b| {
        a.start
            .cmp(&b.start)
            .then(b.end.cmp(&a.end))
            .then(a.alias_id.cmp(&b.alias_id))
    });
    let mut selected: Vec<RawMatch> = Vec::new();
    for m in matches {
        if selected.last().is_none_or(|last| m.start >= last.end) {
            selected.push(m);
        }
    }
    selected
}

/// Automaton paired with the dictionary it was built from.
#[derive(Debug, Clone)]
pub struct DictLinker {
    automaton: Automaton,
    dict: AliasDictionary,
    system_id: String,
}

impl DictLinker {
    pub fn new(dict: AliasDictionary) -> Result<Self, EmptyDictionary> {
        Ok(DictLinker {
            automaton: Automaton::build(&dict)?,
            dict,
            system_id: SYSTEM_ID.to_string(),
        })
    }

    pub fn with_system_id(mut self, id: impl Into<String>) -> Self {
        self.system_id = id.into();
        self
    }

    pub fn system_id(&self) -> &str {
        &self.system_id
    }

    pub fn dictionary(&self) -> &AliasDictionary {
        &self.dict
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    /// Boundary-filtered, leftmost-longest matches in `text`.
    pub fn select(&self, text: &str) -> Vec<RawMatch> {
        let chars: Vec<char> = text.chars().collect();
        let kept = self
            .automaton
            .find_matches(text)
            .into_iter()
            .filter(|m| on_token_boundary(&chars, m))
            .collect();
        select_leftmost_longest(kept)
    }

    pub fn link(&self, debate_id: &str, scene: &Scene) -> Vec<Annotation> {
        let text = scene.text();
        self.select(&text)
            .into_iter()
            .map(|m| Annotation {
                debate_id: debate_id.to_string(),
                scene_id: scene.id.clone(),
                start: m.start,
                end: m.end,
                surface: char_slice(&text, m.start, m.end).to_string(),
                uri: Some(self.dict.entry(m.alias_id).uri.clone()),
                system_id: self.system_id.clone(),
                confidence: 1.0,
            })
            .collect()
    }
}

pub fn link_dictionary(linker: &DictLinker, debate_id: &str, scene: &Scene) -> Vec<Annotation> {
    linker.link(debate_id, scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{SpeakerRef, SpeechUnit};
    use crate::kb::AliasEntry;
    use proptest::prelude::*;

    fn dict(pairs: &[(&str, &str)]) -> AliasDictionary {
        let entries = pairs
            .iter()
            .map(|(a, u)| AliasEntry {
                alias: a.to_string(),
                uri: u.to_string(),
                case: CasePolicy::Insensitive,
            })
            .collect();
        AliasDictionary::from_entries(entries, CasePolicy::Insensitive).unwrap()
    }

    fn scene(text: &str) -> Scene {
        Scene {
            id: "s1".into(),
            speech_units: vec![SpeechUnit {
                id: "u1".into(),
                speaker: SpeakerRef {
                    uri: "pm:m/x".into(),
                    display_name: "X".into(),
                    role: None,
                    portfolio: None,
                },
                text: text.into(),
            }],
        }
    }

    fn links(linker: &DictLinker, text: &str) -> Vec<(usize, usize, String)> {
        linker
            .link("d1", &scene(text))
            .into_iter()
            .map(|a| (a.start, a.end, a.uri.unwrap()))
            .collect()
    }

    #[test]
    fn find_matches_examples() {
        let d = dict(&[("PvdA", "p1"), ("VVD", "p2")]);
        let a = build_automaton(&d).unwrap();
        assert!(find_matches(&a, "").is_empty());
        let got: Vec<_> = find_matches(&a, "De PvdA en de VVD")
            .iter()
            .map(|m| (m.start, m.end))
            .collect();
        assert_eq!(got, [(3, 7), (14, 17)]);
        let got: Vec<_> = find_matches(&a, "pvda").iter().map(|m| (m.start, m.end)).collect();
        assert_eq!(got, [(0, 4)]);
        assert_eq!(
            brute_force_matches(&d, "De PvdA en de VVD"),
            find_matches(&a, "De PvdA en de VVD")
        );
        assert!(brute_force_matches(&d, "VV").is_empty());
    }

    #[test]
    fn link_examples() {
        let linker = DictLinker::new(dict(&[("Partij van de Arbeid", "p1"), ("Arbeid", "p2")])).unwrap();
        assert_eq!(
            links(&linker, "Partij van de Arbeid stemde voor"),
            [(0, 20, "p1".to_string())]
        );

        let linker = DictLinker::new(dict(&[("PvdA", "p1")])).unwrap();
        assert_eq!(links(&linker, "de PvdA-fractie"), [(3, 7, "p1".to_string())]);
        assert!(links(&linker, "OPvdAX").is_empty());

        let ann = linker.link("d1", &scene("de PVDA"));
        assert_eq!(ann[0].surface, "PVDA");
        assert_eq!(ann[0].system_id, "dict");
        assert_eq!(ann[0].confidence, 1.0);
    }

    #[test]
    fn case_sensitive_rows() {
        let d = AliasDictionary::parse_tsv("GL\tp1\nGroen\tp2\tcase=sensitive\n", CasePolicy::Insensitive).unwrap();
        let linker = DictLinker::new(d.clone()).unwrap();
        assert_eq!(
            links(&linker, "gl en Groen"),
            [(0, 2, "p1".into()), (6, 11, "p2".into())]
        );
        assert_eq!(links(&linker, "gl en groen"), [(0, 2, "p1".into())]);
        assert_eq!(
            brute_force_matches(&d, "gl groen Groen"),
            linker.automaton().find_matches("gl groen Groen")
        );
    }

    #[test]
    fn non_ascii_offsets() {
        let linker = DictLinker::new(dict(&[("Financiën", "f")])).unwrap();
        let ann = linker.link("d", &scene("de minister van FINANCIËN zei"));
        assert_eq!((ann[0].start, ann[0].end), (16, 25));
        assert_eq!(ann[0].surface, "FINANCIËN");
    }

    fn alias_strategy() -> impl Strategy<Value = Vec<String>> {
        prop::collection::btree_set("[abAB ]{1,4}", 1..8).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn selection_is_non_overlapping_maximal_and_on_boundaries(
            aliases in alias_strategy(),
            text in "[abAB .-]{0,60}",
        ) {
            let pairs: Vec<(String, String)> = aliases
                .iter()
                .map(|a| (a.clone(), format!("u:{}", crate::text::fold_str(a))))
                .collect();
            let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, u)| (a.as_str(), u.as_str())).collect();
            // one URI per fold class, so no alias is ambiguous
            let linker = DictLinker::new(dict(&refs)).unwrap();
            let chars: Vec<char> = text.chars().collect();
            let selected = linker.select(&text);
            for w in selected.windows(2) {
                prop_assert!(w[0].end <= w[1].start);
            }
            let candidates: Vec<RawMatch> = linker
                .automaton()
                .find_matches(&text)
                .into_iter()
                .filter(|m| on_token_boundary(&chars, m))
                .collect();
            for c in &candidates {
                let addable = selected.iter().all(|s| c.end <= s.start || s.end <= c.start);
                prop_assert!(!addable || selected.contains(c), "{c:?} could be added");
            }
            for m in &selected {
                prop_assert!(on_token_boundary(&chars, m));
            }
            let upper = linker.link("d", &scene(&text.to_uppercase()));
            let lower = linker.link("d", &scene(&text));
            let strip = |v: Vec<Annotation>| v.into_iter().map(|a| (a.start, a.end, a.uri)).collect::<Vec<_>>();
            prop_assert_eq!(strip(upper), strip(lower));
        }
    }
}
