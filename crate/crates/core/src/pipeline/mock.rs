//! Deterministic stand-in for an open-domain linker.
//!
//! The mock spots surface forms from a behaviour table and then, per spotted
//! occurrence, decides whether to emit it (recall dial) and whether to emit the
//! right URI or a decoy (precision dial). Both decisions come from a generator
//! seeded by the configured seed and the occurrence's position, so output is
//! reproducible and independent of scene processing order.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::annotation::Annotation;
use crate::corpus::{Debate, Scene};
use crate::dict_linker::DictLinker;
use crate::kb::{AliasDictionary, AliasEntry, CasePolicy, KbError};
use crate::text::char_slice;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockRule {
    /// Surface form, matched case-insensitively on token boundaries.
    pub pattern: String,
    pub uri: String,
    #[serde(default = "one")]
    pub confidence: f64,
    /// Per-rule recall override.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recall: Option<f64>,
    /// Per-rule precision override.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockConfig {
    pub system_id: String,
    pub seed: u64,
    pub recall: f64,
    pub precision: f64,
    pub rules: Vec<MockRule>,
    /// URI emitted for a wrong link; `<uri>#wrong` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoy_uri: Option<String>,
}

impl MockConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, std::io::Error> {
        let input = std::fs::read_to_string(path)?;
        serde_json::from_str(&input).map_err(std::io::Error::other)
    }
}

#[derive(Debug, Clone)]
pub struct MockGeneralist {
    config: MockConfig,
    spotter: DictLinker,
}

fn fnv1a(parts: &[&[u8]]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in *part {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl MockGeneralist {
    pub fn new(config: MockConfig) -> Result<Self, KbError> {
        // alias ids index into the dictionary, which sorts and dedups its
        // entries; map the uri back to a rule afterwards
        let entries = config
            .rules
            .iter()
            .map(|r| AliasEntry {
                alias: r.pattern.clone(),
                uri: r.uri.clone(),
                case: CasePolicy::Insensitive,
            })
            .collect();
        let dict = AliasDictionary::from_entries(entries, CasePolicy::Insensitive)?;
        let spotter = DictLinker::new(dict).map_err(|_| KbError::NoEntities)?;
        Ok(MockGeneralist { config, spotter })
    }

    pub fn system_id(&self) -> &str {
        &self.config.system_id
    }

    fn rule_for(&self, alias: &str, uri: &str) -> &MockRule {
        self.config
            .rules
            .iter()
            .find(|r| r.pattern == alias && r.uri == uri)
            .expect("every dictionary entry comes from a rule")
    }

    pub fn link(&self, debate_id: &str, scene: &Scene) -> Vec<Annotation> {
        let text = scene.text();
        let mut out = Vec::new();
        for m in self.spotter.select(&text) {
            let entry = self.spotter.dictionary().entry(m.alias_id);
            let rule = self.rule_for(&entry.alias, &entry.uri);
            let seed = fnv1a(&[
                &self.config.seed.to_le_bytes(),
                debate_id.as_bytes(),
                scene.id.as_bytes(),
                &(m.start as u64).to_le_bytes(),
            ]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spotted: f64 = rng.random();
            let correct: f64 = rng.random();
            if spotted >= rule.recall.unwrap_or(self.config.recall) {
                continue;
            }
            let uri = if correct < rule.precision.unwrap_or(self.config.precision) {
                rule.uri.clone()
            } else {
                self.config
                    .decoy_uri
                    .clone()
                    .unwrap_or_else(|| format!("{}#wrong", rule.uri))
            };
            out.push(Annotation {
                debate_id: debate_id.to_string(),
                scene_id: scene.id.clone(),
                start: m.start,
                end: m.end,
                surface: char_slice(&text, m.start, m.end).to_string(),
                uri: Some(uri),
                system_id: self.config.system_id.clone(),
                confidence: rule.confidence,
            });
        }
        out
    }

    pub fn link_debate(&self, debate: &Debate) -> Vec<Annotation> {
        debate.scenes.iter().flat_map(|s| self.link(&debate.id, s)).collect()
    }
}
