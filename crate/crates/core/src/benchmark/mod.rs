//! Benchmark construction and scoring.

mod candidates;
mod eval;
mod gold;
mod sample;
mod stats;

pub use candidates::{preselect_candidates, Candidate};
pub use eval::{
    delta_f1, evaluate, recall_gain_bound, resolve_against_pool, score_phrase, DeltaF1, EvalReport, KindLookup,
    NoKinds, PhraseLocator, PhraseScore, Scores, Slice,
};
pub use gold::{progress, resolve_gold, GoldDecision, GoldError, GoldStore, Progress, Round, Verdict};
pub use sample::{
    department_debates, largest_remainder, sample_with_plan, stratified_sample, SampleItem, SamplePlan, Stratum,
};
pub use stats::{sample_stats, SampleStats, StatsRow};

use thiserror::Error;

use crate::corpus::CorpusError;

#[derive(Debug, Error)]
pub enum BenchmarkError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("department `{0}` has a quota but no debates")]
    NoDebates(String),
    #[error("gold decision references unknown phrase {0}")]
    UnknownPhrase(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Gold(#[from] GoldError),
}
