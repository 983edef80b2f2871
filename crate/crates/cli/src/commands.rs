use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use hybridlink_core::annotation::{read_annotations, read_jsonl, write_jsonl, Annotation};
use hybridlink_core::benchmark::{
    evaluate, resolve_gold, sample_stats, stratified_sample, EvalReport, GoldDecision, KindLookup, NoKinds, SampleItem,
    SampleStats,
};
use hybridlink_core::corpus::{load_corpus, CorpusError, Debate, PortfolioMap};
use hybridlink_core::dict_linker::DictLinker;
use hybridlink_core::kb::{build_alias_dictionary, AliasDictionary, CasePolicy, KnowledgeBase};
use hybridlink_core::pipeline::{
    combine_preference, combine_voting, pool_corpus, run_systems, ExternalSystem, LinkerSystem, MockConfig,
    MockGeneralist, PooledPhrase, PreferenceOrder,
};
use hybridlink_core::role_linker::{PatternConfig, RoleLinker};

use crate::args::{CombineArgs, EvaluateArgs, LinkArgs, PoolArgs, SampleArgs, StatsArgs, Strategy};

/// A corpus file with no debates in it is an empty corpus here, not an error.
pub fn read_corpus(path: &Path) -> Result<Vec<Debate>> {
    match load_corpus(path) {
        Err(CorpusError::Empty) => Ok(Vec::new()),
        other => other.with_context(|| format!("loading corpus {}", path.display())),
    }
}

pub fn read_kb(path: &Path) -> Result<KnowledgeBase> {
    KnowledgeBase::load(path).with_context(|| format!("loading knowledge base {}", path.display()))
}

pub fn read_sample(path: &Path) -> Result<Vec<SampleItem>> {
    read_jsonl(path).with_context(|| format!("loading sample {}", path.display()))
}

pub fn read_pool(path: &Path) -> Result<Vec<PooledPhrase>> {
    read_jsonl(path).with_context(|| format!("loading pool {}", path.display()))
}

pub fn read_gold(path: &Path) -> Result<Vec<GoldDecision>> {
    read_jsonl(path).with_context(|| format!("loading gold {}", path.display()))
}

fn scene_pairs(sample: &[SampleItem]) -> Vec<(String, String)> {
    sample
        .iter()
        .map(|s| (s.debate_id.clone(), s.scene_id.clone()))
        .collect()
}

fn write_out<T: serde::Serialize>(dir: &Path, name: &str, records: &[T]) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    write_jsonl(&path, records)?;
    Ok(path)
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Writes `<system_id>.jsonl` per system; returns the paths by system id.
pub fn link(args: &LinkArgs) -> Result<BTreeMap<String, PathBuf>> {
    let corpus = read_corpus(&args.corpus)?;
    let kb = Arc::new(read_kb(&args.kb)?);
    for debate in &corpus {
        for warning in kb.check_speaker_roles(debate) {
            eprintln!("warning: {warning}");
        }
    }
    let dict = match &args.dict {
        Some(path) => AliasDictionary::load(path, CasePolicy::Insensitive)
            .with_context(|| format!("loading dictionary {}", path.display()))?,
        None => build_alias_dictionary(kb.entities())?,
    };
    let patterns = match &args.patterns {
        Some(path) => PatternConfig::load(path).with_context(|| format!("loading patterns {}", path.display()))?,
        None => PatternConfig::dutch(),
    };
    let dict_linker = DictLinker::new(dict)?;
    let role_linker = RoleLinker::new(&patterns, Arc::clone(&kb));
    let mut mocks = Vec::new();
    for path in &args.mock {
        let config = MockConfig::load(path).with_context(|| format!("loading mock config {}", path.display()))?;
        mocks.push(MockGeneralist::new(config).with_context(|| format!("mock config {}", path.display()))?);
    }
    let mut externals = Vec::new();
    for path in &args.external {
        let anns = read_annotations(path).with_context(|| format!("loading annotations {}", path.display()))?;
        let mut ids: Vec<String> = anns.iter().map(|a| a.system_id.clone()).collect();
        ids.sort();
        ids.dedup();
        for id in ids {
            externals.push(ExternalSystem::new(id, anns.clone()));
        }
    }

    let mut systems: Vec<&dyn LinkerSystem> = vec![&dict_linker, &role_linker];
    systems.extend(mocks.iter().map(|m| m as &dyn LinkerSystem));
    systems.extend(externals.iter().map(|e| e as &dyn LinkerSystem));
    let mut seen = std::collections::HashSet::new();
    for s in &systems {
        if !seen.insert(s.system_id()) {
            bail!("system id `{}` is used by more than one system", s.system_id());
        }
    }

    let sample = args.sample.as_deref().map(read_sample).transpose()?;
    let scenes = sample.as_deref().map(scene_pairs);
    let by_system = run_systems(&systems, &corpus, scenes.as_deref());
    by_system
        .into_iter()
        .map(|(id, anns)| Ok((id.clone(), write_out(&args.out, &format!("{id}.jsonl"), &anns)?)))
        .collect()
}

pub fn sample(args: &SampleArgs) -> Result<Vec<SampleItem>> {
    let corpus = read_corpus(&args.corpus)?;
    let map = PortfolioMap::load(&args.portfolio_map)
        .with_context(|| format!("loading portfolio map {}", args.portfolio_map.display()))?;
    let sample = stratified_sample(&corpus, &map, args.limit, args.seed)?;
    write_out(&args.out, "sample.jsonl", &sample)?;
    Ok(sample)
}

fn annotation_files(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).with_context(|| format!("reading {}", path.display()))? {
        let p = entry?.path();
        if p.extension().is_some_and(|e| e == "jsonl") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

pub fn pool(args: &PoolArgs) -> Result<Vec<PooledPhrase>> {
    let corpus = read_corpus(&args.corpus)?;
    let mut anns: Vec<Annotation> = Vec::new();
    for path in &args.annotations {
        for file in annotation_files(path)? {
            anns.extend(read_annotations(&file).with_context(|| format!("loading annotations {}", file.display()))?);
        }
    }
    let sample = args.sample.as_deref().map(read_sample).transpose()?;
    let scenes = sample.as_deref().map(scene_pairs);
    let phrases = pool_corpus(&corpus, &anns, scenes.as_deref())?;
    write_out(&args.out, "pool.jsonl", &phrases)?;
    Ok(phrases)
}

pub fn combine(args: &CombineArgs) -> Result<Vec<Annotation>> {
    let phrases = read_pool(&args.pool)?;
    let combined = match args.strategy {
        Strategy::Voting => combine_voting(&phrases),
        Strategy::Preference => {
            if args.order.is_empty() {
                bail!("--order is required for the preference strategy");
            }
            let known: std::collections::BTreeSet<&str> = phrases
                .iter()
                .flat_map(|p| p.annotations.iter().map(|a| a.system_id.as_str()))
                .collect();
            let order = PreferenceOrder::new(args.order.clone(), known.iter().copied())?;
            combine_preference(&order, &phrases)
        }
    };
    write_out(&args.out, "combined.jsonl", &combined)?;
    Ok(combined)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "system".into())
}

/// Writes `<stem>.eval.json` per scored file.
pub fn evaluate_files(args: &EvaluateArgs) -> Result<Vec<EvalReport>> {
    let phrases = read_pool(&args.pool)?;
    let gold = read_gold(&args.gold)?;
    let kb = args.kb.as_deref().map(read_kb).transpose()?;
    let kinds: &dyn KindLookup = match &kb {
        Some(kb) => kb,
        None => &NoKinds,
    };
    let score = |path: &Path| -> Result<EvalReport> {
        let anns = read_annotations(path).with_context(|| format!("loading annotations {}", path.display()))?;
        let mut report = evaluate(&anns, &gold, &phrases, kinds)?;
        report.system_id = Some(stem(path));
        Ok(report)
    };
    let baseline = args
        .baseline
        .as_deref()
        .map(|p| score(p).map(|r| (stem(p), r)))
        .transpose()?;
    let mut reports = Vec::new();
    for path in &args.system {
        let mut report = score(path)?;
        if let Some((name, b)) = &baseline {
            report = report.with_baseline(name, b);
        }
        write_json(&args.out, &format!("{}.eval.json", stem(path)), &report)?;
        reports.push(report);
    }
    Ok(reports)
}

pub fn stats(args: &StatsArgs) -> Result<SampleStats> {
    let sample = read_sample(&args.sample)?;
    let phrases = read_pool(&args.pool)?;
    let gold = resolve_gold(&read_gold(&args.gold)?);
    let kb = read_kb(&args.kb)?;
    let stats = sample_stats(&sample, &phrases, &gold, &kb);
    write_json(&args.out, "stats.json", &stats)?;
    Ok(stats)
}

pub fn format_reports(reports: &[EvalReport]) -> String {
    let mut out = String::from("system\tP\tR\tF1\ttp\tfp\tfn\tdF1\n");
    for r in reports {
        let delta = r
            .delta_f1_vs
            .as_ref()
            .and_then(|d| d.value)
            .map(|v| format!("{v:+.3}"))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{}\t{:.3}\t{:.3}\t{:.3}\t{}\t{}\t{}\t{}\n",
            r.system_id.as_deref().unwrap_or("-"),
            r.scores.precision,
            r.scores.recall,
            r.scores.f1,
            r.scores.tp,
            r.scores.fp,
            r.scores.fn_,
            delta
        ));
    }
    out
}

pub fn format_stats(stats: &SampleStats) -> String {
    let mut out = String::from("department\tscenes\tphrases\tpersons\torganizations\n");
    for r in stats.rows.iter().chain(std::iter::once(&stats.total)) {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.department, r.scenes, r.phrases, r.persons, r.organizations
        ));
    }
    out
}
