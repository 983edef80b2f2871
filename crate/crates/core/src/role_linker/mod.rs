//! Specialist linker for persons addressed by honorific and name, or by their
//! government role with or without a portfolio.
//!
//! Mentions are resolved left to right within a scene. Names are first looked
//! up among the debate's speakers, then in the member index for the debate's
//! date and house. Role-with-portfolio mentions go to the government index.
//! Bare roles are resolved against speakers holding that role; with several
//! such speakers, the one mentioned or speaking most recently wins. A link is
//! only produced when exactly one candidate remains.

mod patterns;

pub use patterns::{detect_role_mentions, MentionDetector, MentionForm, PatternConfig, RoleMention, RoleWord};

use std::sync::Arc;

use chrono::NaiveDate;
use serde::Serialize;

use crate::annotation::Annotation;
use crate::corpus::{speakers_list, Debate, Scene, SpeakerRef, SpeakerRole, SpeakersList};
use crate::kb::{GovRole, KnowledgeBase, NameMatch};
use crate::text::{char_slice, fold_str};

pub const SYSTEM_ID: &str = "role";

/// How a link was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    Speaker,
    MemberIndex(NameMatch),
    GovernmentIndex,
    SoleRoleHolder,
    LastMentioned,
}

/// Why a detected mention stayed unlinked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Abstention {
    NoCandidate,
    Ambiguous { candidates: usize },
    NoPriorMention { candidates: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub mention: RoleMention,
    pub result: Result<(String, Resolution), Abstention>,
}

impl Outcome {
    pub fn uri(&self) -> Option<&str> {
        self.result.as_ref().ok().map(|(u, _)| u.as_str())
    }
}

/// A point in the scene where a member was mentioned or started speaking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextEntry {
    pub start: usize,
    pub uri: String,
    pub speech_turn: bool,
}

/// Per-scene resolution state.
#[derive(Debug, Clone)]
pub struct SceneContext {
    pub date: NaiveDate,
    pub house: String,
    pub speakers: SpeakersList,
    /// Earlier resolved mentions and speech turns, ordered by start offset.
    pub resolved_mentions: Vec<ContextEntry>,
}

impl SceneContext {
    pub fn new(date: NaiveDate, house: &str, speakers: SpeakersList) -> Self {
        SceneContext {
            date,
            house: house.to_string(),
            speakers,
            resolved_mentions: Vec::new(),
        }
    }

    /// Context seeded with the speech turns of `scene`.
    pub fn for_scene(debate: &Debate, scene: &Scene, speakers: SpeakersList) -> Self {
        let mut ctx = SceneContext::new(debate.date, &debate.house, speakers);
        for (unit, start) in scene.speech_units.iter().zip(scene.unit_starts()) {
            ctx.resolved_mentions.push(ContextEntry {
                start,
                uri: unit.speaker.uri.clone(),
                speech_turn: true,
            });
        }
        ctx
    }

    fn record(&mut self, start: usize, uri: &str) {
        let at = self.resolved_mentions.partition_point(|e| e.start <= start);
        self.resolved_mentions.insert(
            at,
            ContextEntry {
                start,
                uri: uri.to_string(),
                speech_turn: false,
            },
        );
    }

    /// Among `candidates`, the one mentioned or speaking last before `before`.
    fn last_mentioned<'a>(&self, candidates: &[&'a str], before: usize) -> Option<&'a str> {
        self.resolved_mentions
            .iter()
            .rev()
            .filter(|e| e.start < before)
            .find_map(|e| candidates.iter().find(|c| **c == e.uri).copied())
    }
}

fn speaker_matches(speaker: &SpeakerRef, name: &str, kb: &KnowledgeBase) -> bool {
    let want = fold_str(name);
    let key = |s: &str| fold_str(&s.split_whitespace().collect::<Vec<_>>().join(" "));
    if key(&speaker.display_name) == want {
        return true;
    }
    match kb.member(&speaker.uri) {
        Some(m) => key(&m.surname) == want || key(&m.entity.canonical_name) == want,
        None => speaker
            .display_name
            .split_whitespace()
            .last()
            .is_some_and(|last| fold_str(last) == want),
    }
}

pub fn resolve_honorific_name(
    mention: &RoleMention,
    ctx: &SceneContext,
    kb: &KnowledgeBase,
) -> Result<(String, Resolution), Abstention> {
    let Some(name) = mention.name.as_deref() else {
        return Err(Abstention::NoCandidate);
    };
    let name = name.split_whitespace().collect::<Vec<_>>().join(" ");
    let speakers: Vec<&SpeakerRef> = ctx.speakers.iter().filter(|s| speaker_matches(s, &name, kb)).collect();
    if let [only] = speakers[..] {
        return Ok((only.uri.clone(), Resolution::Speaker));
    }
    let hits = kb.query_member_index_detailed(&name, ctx.date, &ctx.house);
    match &hits[..] {
        [only] => Ok((only.uri.clone(), Resolution::MemberIndex(only.matched))),
        [] if speakers.is_empty() => Err(Abstention::NoCandidate),
        _ => Err(Abstention::Ambiguous {
            candidates: hits.len().max(speakers.len()),
        }),
    }
}

fn speaker_has_role(speaker: &SpeakerRef, role: GovRole) -> bool {
    matches!(
        (speaker.role, role),
        (Some(SpeakerRole::Minister), GovRole::Minister) | (Some(SpeakerRole::Secretary), GovRole::Secretary)
    )
}

pub fn resolve_role_mention(
    mention: &RoleMention,
    ctx: &SceneContext,
    kb: &KnowledgeBase,
) -> Result<(String, Resolution), Abstention> {
    let Some(role) = mention.role else {
        return Err(Abstention::NoCandidate);
    };
    if let Some(portfolio) = mention.portfolio.as_deref() {
        let holders = kb.query_government_index(role, portfolio, ctx.date);
        return match &holders[..] {
            [only] => Ok((only.clone(), Resolution::GovernmentIndex)),
            [] => Err(Abstention::NoCandidate),
            _ => Err(Abstention::Ambiguous {
                candidates: holders.len(),
            }),
        };
    }
    let candidates: Vec<&str> = ctx
        .speakers
        .iter()
        .filter(|s| speaker_has_role(s, role))
        .map(|s| s.uri.as_str())
        .collect();
    match &candidates[..] {
        [] => Err(Abstention::NoCandidate),
        [only] => Ok((only.to_string(), Resolution::SoleRoleHolder)),
        several => ctx
            .last_mentioned(several, mention.start)
            .map(|uri| (uri.to_string(), Resolution::LastMentioned))
            .ok_or(Abstention::NoPriorMention {
                candidates: several.len(),
            }),
    }
}

/// Resolve `mentions` in order, threading the context through.
pub fn resolve_mentions(mentions: Vec<RoleMention>, ctx: &mut SceneContext, kb: &KnowledgeBase) -> Vec<Outcome> {
    mentions
        .into_iter()
        .map(|mention| {
            let result = match mention.form {
                MentionForm::HonorificName => resolve_honorific_name(&mention, ctx, kb),
                MentionForm::RoleOnly | MentionForm::RoleWithPortfolio => resolve_role_mention(&mention, ctx, kb),
            };
            if let Ok((uri, _)) = &result {
                ctx.record(mention.start, uri);
            }
            Outcome { mention, result }
        })
        .collect()
}

/// The role linker as a whole: detector, KB and output labelling.
#[derive(Debug, Clone)]
pub struct RoleLinker {
    detector: MentionDetector,
    kb: Arc<KnowledgeBase>,
    system_id: String,
}

impl RoleLinker {
    pub fn new(config: &PatternConfig, kb: Arc<KnowledgeBase>) -> Self {
        RoleLinker {
            detector: MentionDetector::new(config),
            kb,
            system_id: SYSTEM_ID.to_string(),
        }
    }

    pub fn system_id(&self) -> &str {
        &self.system_id
    }

    pub fn resolve_scene(&self, debate: &Debate, scene: &Scene, speakers: SpeakersList) -> Vec<Outcome> {
        let mut ctx = SceneContext::for_scene(debate, scene, speakers);
        let mentions = self.detector.detect(&scene.text());
        resolve_mentions(mentions, &mut ctx, &self.kb)
    }

    /// Annotations for every detected mention; unresolved ones carry no URI.
    pub fn link_with_speakers(&self, debate: &Debate, scene: &Scene, speakers: SpeakersList) -> Vec<Annotation> {
        let text = scene.text();
        self.resolve_scene(debate, scene, speakers)
            .into_iter()
            .map(|o| Annotation {
                debate_id: debate.id.clone(),
                scene_id: scene.id.clone(),
                start: o.mention.start,
                end: o.mention.end,
                surface: char_slice(&text, o.mention.start, o.mention.end).to_string(),
                confidence: if o.result.is_ok() { 1.0 } else { 0.0 },
                uri: o.uri().map(str::to_string),
                system_id: self.system_id.clone(),
            })
            .collect()
    }

    pub fn link(&self, debate: &Debate, scene: &Scene) -> Vec<Annotation> {
        self.link_with_speakers(debate, scene, speakers_list(debate))
    }
}

pub fn link_roles(linker: &RoleLinker, debate: &Debate, scene: &Scene) -> Vec<Annotation> {
    linker.link(debate, scene)
}
