//! Linker systems, annotation pooling and the combination strategies.

mod combine;
mod mock;
mod pool;

pub use combine::{combine_preference, combine_voting, PreferenceOrder, VOTE_SYSTEM_ID};
pub use mock::{MockConfig, MockGeneralist, MockRule};
pub use pool::{phrase_id, pool, PooledPhrase};

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::annotation::Annotation;
use crate::corpus::{scene_key, Debate, Scene};
use crate::dict_linker::DictLinker;
use crate::role_linker::RoleLinker;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("annotation for scene {found} pooled with scene {expected}")]
    ForeignAnnotation { expected: String, found: String },
    #[error("annotation span [{start},{end}) is invalid for scene {scene} of length {len}")]
    BadSpan {
        scene: String,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("annotation references unknown scene {0}")]
    UnknownScene(String),
    #[error("preference order is empty")]
    EmptyOrder,
    #[error("unknown system id `{0}` in order")]
    UnknownSystem(String),
    #[error("system id `{0}` appears twice")]
    DuplicateSystem(String),
}

/// Anything that links the text of a scene.
///
/// Implementations are shared across threads and must not keep per-call state.
pub trait LinkerSystem: Send + Sync {
    fn system_id(&self) -> &str;
    fn link(&self, debate: &Debate, scene: &Scene) -> Vec<Annotation>;
}

impl LinkerSystem for DictLinker {
    fn system_id(&self) -> &str {
        DictLinker::system_id(self)
    }

    fn link(&self, debate: &Debate, scene: &Scene) -> Vec<Annotation> {
        DictLinker::link(self, &debate.id, scene)
    }
}

impl LinkerSystem for RoleLinker {
    fn system_id(&self) -> &str {
        RoleLinker::system_id(self)
    }

    fn link(&self, debate: &Debate, scene: &Scene) -> Vec<Annotation> {
        RoleLinker::link(self, debate, scene)
    }
}

impl LinkerSystem for MockGeneralist {
    fn system_id(&self) -> &str {
        MockGeneralist::system_id(self)
    }

    fn link(&self, debate: &Debate, scene: &Scene) -> Vec<Annotation> {
        MockGeneralist::link(self, &debate.id, scene)
    }
}

/// Annotations produced elsewhere and dropped in as an interchange file.
#[derive(Debug, Clone, Default)]
pub struct ExternalSystem {
    system_id: String,
    by_scene: HashMap<String, Vec<Annotation>>,
}

impl ExternalSystem {
    pub fn new(system_id: impl Into<String>, annotations: Vec<Annotation>) -> Self {
        let system_id = system_id.into();
        let mut by_scene: HashMap<String, Vec<Annotation>> = HashMap::new();
        for a in annotations.into_iter().filter(|a| a.system_id == system_id) {
            by_scene
                .entry(scene_key(&a.debate_id, &a.scene_id))
                .or_default()
                .push(a);
        }
        ExternalSystem { system_id, by_scene }
    }
}

impl LinkerSystem for ExternalSystem {
    fn system_id(&self) -> &str {
        &self.system_id
    }

    fn link(&self, debate: &Debate, scene: &Scene) -> Vec<Annotation> {
        self.by_scene
            .get(&scene_key(&debate.id, &scene.id))
            .cloned()
            .unwrap_or_default()
    }
}

/// Run every system over the selected scenes (all scenes when `scenes` is
/// `None`). Returns annotations per system id, in scene order.
pub fn run_systems(
    systems: &[&dyn LinkerSystem],
    corpus: &[Debate],
    scenes: Option<&[(String, String)]>,
) -> BTreeMap<String, Vec<Annotation>> {
    let mut out: BTreeMap<String, Vec<Annotation>> = systems
        .iter()
        .map(|s| (s.system_id().to_string(), Vec::new()))
        .collect();
    for (debate, scene) in select_scenes(corpus, scenes) {
        for system in systems {
            out.get_mut(system.system_id())
                .expect("registered above")
                .extend(system.link(debate, scene));
        }
    }
    out
}

fn select_scenes<'a>(corpus: &'a [Debate], scenes: Option<&[(String, String)]>) -> Vec<(&'a Debate, &'a Scene)> {
    let all = corpus.iter().flat_map(|d| d.scenes.iter().map(move |s| (d, s)));
    match scenes {
        None => all.collect(),
        Some(wanted) => {
            let wanted: std::collections::HashSet<(&str, &str)> =
                wanted.iter().map(|(d, s)| (d.as_str(), s.as_str())).collect();
            all.filter(|(d, s)| wanted.contains(&(d.id.as_str(), s.id.as_str())))
                .collect()
        }
    }
}

/// Pool annotations scene by scene over the selected scenes.
pub fn pool_corpus(
    corpus: &[Debate],
    annotations: &[Annotation],
    scenes: Option<&[(String, String)]>,
) -> Result<Vec<PooledPhrase>, PipelineError> {
    let mut by_scene: HashMap<(&str, &str), Vec<Annotation>> = HashMap::new();
    for a in annotations {
        by_scene
            .entry((a.debate_id.as_str(), a.scene_id.as_str()))
            .or_default()
            .push(a.clone());
    }
    let selected = select_scenes(corpus, scenes);
    let known: std::collections::HashSet<(&str, &str)> = corpus
        .iter()
        .flat_map(|d| d.scenes.iter().map(move |s| (d.id.as_str(), s.id.as_str())))
        .collect();
    if let Some(((d, s), _)) = by_scene.iter().find(|(k, _)| !known.contains(*k)) {
        return Err(PipelineError::UnknownScene(scene_key(d, s)));
    }
    let mut out = Vec::new();
    for (debate, scene) in selected {
        let anns = by_scene
            .remove(&(debate.id.as_str(), scene.id.as_str()))
            .unwrap_or_default();
        out.extend(pool(&anns, &debate.id, scene)?);
    }
    Ok(out)
}
