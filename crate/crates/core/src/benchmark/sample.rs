//! Stratified round-robin scene sampling.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{infer_departments, Debate, DepartmentLabel, PortfolioMap};

use super::BenchmarkError;

/// One sampled scene. Line schema of the sample file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleItem {
    pub department: String,
    pub debate_id: String,
    pub scene_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub label: DepartmentLabel,
    pub quota: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SamplePlan {
    pub strata: Vec<Stratum>,
    pub overall_limit: usize,
    pub seed: u64,
}

/// Hamilton apportionment of `limit` over `counts`.
///
/// Each stratum gets the floor of its exact share; the seats left over go to
/// the largest remainders, ties to the larger count and then to the name.
pub fn largest_remainder(counts: &[(DepartmentLabel, usize)], limit: usize) -> Vec<Stratum> {
    let total: usize = counts.iter().map(|(_, n)| n).sum();
    if total == 0 {
        return counts
            .iter()
            .map(|(label, _)| Stratum {
                label: label.clone(),
                quota: 0,
            })
            .collect();
    }
    let shares: Vec<(usize, usize)> = counts
        .iter()
        .map(|(_, n)| {
            let exact = limit as u128 * *n as u128;
            ((exact / total as u128) as usize, (exact % total as u128) as usize)
        })
        .collect();
    let assigned: usize = shares.iter().map(|(q, _)| q).sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| {
        shares[b]
            .1
            .cmp(&shares[a].1)
            .then(counts[b].1.cmp(&counts[a].1))
            .then(counts[a].0.name.cmp(&counts[b].0.name))
    });
    let mut quotas: Vec<usize> = shares.iter().map(|(q, _)| *q).collect();
    for &i in order.iter().take(limit.saturating_sub(assigned)) {
        quotas[i] += 1;
    }
    counts
        .iter()
        .zip(quotas)
        .map(|((label, _), quota)| Stratum {
            label: label.clone(),
            quota,
        })
        .collect()
}

/// Debate indices per department label.
pub fn department_debates(
    corpus: &[Debate],
    portfolio_map: &PortfolioMap,
) -> Result<BTreeMap<DepartmentLabel, Vec<usize>>, BenchmarkError> {
    let mut out: BTreeMap<DepartmentLabel, Vec<usize>> = BTreeMap::new();
    for (i, debate) in corpus.iter().enumerate() {
        for label in infer_departments(debate, portfolio_map)? {
            out.entry(label).or_default().push(i);
        }
    }
    Ok(out)
}

impl SamplePlan {
    /// Quotas proportional to the number of debates per department.
    pub fn proportional(
        by_department: &BTreeMap<DepartmentLabel, Vec<usize>>,
        overall_limit: usize,
        seed: u64,
    ) -> Self {
        let counts: Vec<(DepartmentLabel, usize)> = by_department.iter().map(|(l, d)| (l.clone(), d.len())).collect();
        SamplePlan {
            strata: largest_remainder(&counts, overall_limit),
            overall_limit,
            seed,
        }
    }
}

/// Draw scenes for `plan`.
///
/// Departments take turns in descending quota order (ties by name). On its
/// turn a department draws a random debate not drawn before and then a random
/// scene from it. Departments at quota, or without debates left, skip their
/// turn. Sampling stops at the overall limit or when nobody can draw.
pub fn sample_with_plan(
    corpus: &[Debate],
    by_department: &BTreeMap<DepartmentLabel, Vec<usize>>,
    plan: &SamplePlan,
) -> Result<Vec<SampleItem>, BenchmarkError> {
    for s in &plan.strata {
        if s.quota > 0 && by_department.get(&s.label).is_none_or(Vec::is_empty) {
            return Err(BenchmarkError::NoDebates(s.label.name.clone()));
        }
    }
    let mut strata: Vec<&Stratum> = plan.strata.iter().filter(|s| s.quota > 0).collect();
    strata.sort_by(|a, b| b.quota.cmp(&a.quota).then(a.label.name.cmp(&b.label.name)));

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut drawn: HashSet<usize> = HashSet::new();
    let mut taken = vec![0usize; strata.len()];
    let mut out = Vec::new();
    while out.len() < plan.overall_limit {
        let mut progressed = false;
        for (i, stratum) in strata.iter().enumerate() {
            if out.len() == plan.overall_limit {
                break;
            }
            if taken[i] >= stratum.quota {
                continue;
            }
            let available: Vec<usize> = by_department[&stratum.label]
                .iter()
                .copied()
                .filter(|d| !drawn.contains(d))
                .collect();
            if available.is_empty() {
                continue;
            }
            let index = available[rng.random_range(0..available.len())];
            drawn.insert(index);
            let debate = &corpus[index];
            let scene = &debate.scenes[rng.random_range(0..debate.scenes.len())];
            out.push(SampleItem {
                department: stratum.label.name.clone(),
                debate_id: debate.id.clone(),
                scene_id: scene.id.clone(),
            });
            taken[i] += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    Ok(out)
}

pub fn stratified_sample(
    corpus: &[Debate],
    portfolio_map: &PortfolioMap,
    overall_limit: usize,
    seed: u64,
) -> Result<Vec<SampleItem>, BenchmarkError> {
    if corpus.is_empty() {
        return Err(BenchmarkError::EmptyCorpus);
    }
    let by_department = department_debates(corpus, portfolio_map)?;
    let plan = SamplePlan::proportional(&by_department, overall_limit, seed);
    sample_with_plan(corpus, &by_department, &plan)
}
