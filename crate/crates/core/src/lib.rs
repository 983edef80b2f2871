//! Entity linking for parliamentary proceedings.
//!
//! Two specialist linkers (an alias dictionary matcher and a resolver for
//! forms of address such as "mevrouw Jansen" or "de minister van Financiën")
//! are combined with generalist linkers by preference order or by vote. The
//! `benchmark` module builds a pooled, stratified gold standard and scores
//! systems against it.

pub mod annotation;
pub mod benchmark;
pub mod corpus;
pub mod dict_linker;
pub mod kb;
pub mod pipeline;
pub mod role_linker;
pub mod synthetic;
pub mod text;
pub mod uri;

pub use annotation::Annotation;
pub use corpus::{Debate, DepartmentLabel, PortfolioMap, Scene, SpeakerRef, SpeakerRole, SpeechUnit};
pub use dict_linker::DictLinker;
pub use kb::{AliasDictionary, Entity, EntityKind, KnowledgeBase};
pub use pipeline::{LinkerSystem, PooledPhrase};
pub use role_linker::RoleLinker;
pub use uri::normalize_uri;
