//! Knowledge base of parties, members and government positions, with the
//! lookup structures the specialist linkers query.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Debate;
use crate::text::{fold_changes_length, fold_str};
use crate::uri::normalize_uri;

#[derive(Debug, Error)]
pub enum KbError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid record `{uri}`: {message}")]
    Invariant { uri: String, message: String },
    #[error("no entities given")]
    NoEntities,
    #[error("ambiguous alias(es): {}", describe_conflicts(.0))]
    Ambiguous(Vec<AliasConflict>),
    #[error("alias `{0}` contains a character whose case fold changes length")]
    UnfoldableAlias(String),
}

fn describe_conflicts(conflicts: &[AliasConflict]) -> String {
    conflicts
        .iter()
        .map(|c| format!("\"{}\" -> {} / {}", c.alias, c.uris.0, c.uris.1))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Party,
    Person,
    Organization,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub uri: String,
    pub kind: EntityKind,
    pub canonical_name: String,
    pub aliases: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wikipedia_uri: Option<String>,
}

/// Closed or open-ended date interval; both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<NaiveDate>,
}

impl Interval {
    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && self.end.is_none_or(|end| date <= end)
    }

    pub fn is_well_ordered(&self) -> bool {
        self.end.is_none_or(|end| self.start <= end)
    }

    fn overlaps(&self, other: &Interval) -> bool {
        let a_before_b = self.end.is_some_and(|e| e < other.start);
        let b_before_a = other.end.is_some_and(|e| e < self.start);
        !a_before_b && !b_before_a
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub house: String,
    #[serde(flatten)]
    pub interval: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GovRole {
    Minister,
    Secretary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GovPosition {
    pub role: GovRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub portfolio: Option<String>,
    #[serde(flatten)]
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub entity: Entity,
    pub surname: String,
    pub memberships: Vec<Membership>,
    pub positions: Vec<GovPosition>,
}

impl Member {
    pub fn uri(&self) -> &str {
        &self.entity.uri
    }

    pub fn sits_in(&self, house: &str, date: NaiveDate) -> bool {
        let house = fold_str(house);
        self.memberships
            .iter()
            .any(|m| fold_str(&m.house) == house && m.interval.contains(date))
    }

    pub fn holds(&self, role: GovRole, portfolio: Option<&str>, date: NaiveDate) -> bool {
        let portfolio = portfolio.map(fold_str);
        self.positions.iter().any(|p| {
            p.role == role
                && p.interval.contains(date)
                && portfolio
                    .as_ref()
                    .is_none_or(|want| p.portfolio.as_deref().map(fold_str).as_ref() == Some(want))
        })
    }
}

/// One line of the KB file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KbRecord {
    pub uri: String,
    pub kind: EntityKind,
    pub canonical_name: String,
    pub aliases: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wikipedia_uri: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surname: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub memberships: Vec<Membership>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub positions: Vec<GovPosition>,
}

/// Which name field satisfied a member-index query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NameMatch {
    Surname,
    FullName,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberHit {
    pub uri: String,
    pub matched: NameMatch,
}

fn name_key(name: &str) -> String {
    fold_str(&name.split_whitespace().collect::<Vec<_>>().join(" "))
}

#[derive(Debug, Default)]
pub struct KnowledgeBase {
    entities: Vec<Entity>,
    by_uri: HashMap<String, usize>,
    members: Vec<Member>,
    member_by_uri: HashMap<String, usize>,
    names: HashMap<String, Vec<(usize, NameMatch)>>,
    government: HashMap<(GovRole, String), Vec<usize>>,
}

impl KnowledgeBase {
    pub fn from_records(records: Vec<KbRecord>) -> Result<Self, KbError> {
        let mut kb = KnowledgeBase::default();
        for rec in records {
            kb.add(rec)?;
        }
        Ok(kb)
    }

    fn add(&mut self, rec: KbRecord) -> Result<(), KbError> {
        let bad = |message: &str| KbError::Invariant {
            uri: rec.uri.clone(),
            message: message.to_string(),
        };
        if rec.uri.is_empty() {
            return Err(bad("uri is empty"));
        }
        if rec.aliases.is_empty() {
            return Err(bad("aliases are empty"));
        }
        if !rec.aliases.contains(&rec.canonical_name) {
            return Err(bad("canonical_name is not among the aliases"));
        }
        let key = normalize_uri(&rec.uri);
        if self.by_uri.contains_key(&key) {
            return Err(bad("duplicate uri"));
        }
        let is_member = rec.surname.is_some() || !rec.memberships.is_empty() || !rec.positions.is_empty();
        if is_member {
            if rec.kind != EntityKind::Person {
                return Err(bad("member records must have kind=person"));
            }
            let mut by_house: BTreeMap<String, Vec<&Interval>> = BTreeMap::new();
            for m in &rec.memberships {
                if !m.interval.is_well_ordered() {
                    return Err(bad("membership ends before it starts"));
                }
                by_house.entry(fold_str(&m.house)).or_default().push(&m.interval);
            }
            for intervals in by_house.values() {
                for (i, a) in intervals.iter().enumerate() {
                    if intervals[i + 1..].iter().any(|b| a.overlaps(b)) {
                        return Err(bad("overlapping membership intervals in one house"));
                    }
                }
            }
            if rec.positions.iter().any(|p| !p.interval.is_well_ordered()) {
                return Err(bad("position ends before it starts"));
            }
        }

        let entity = Entity {
            uri: rec.uri.clone(),
            kind: rec.kind,
            canonical_name: rec.canonical_name.clone(),
            aliases: rec.aliases.iter().cloned().collect(),
            wikipedia_uri: rec.wikipedia_uri.clone(),
        };
        let idx = self.entities.len();
        self.by_uri.insert(key, idx);
        if let Some(wiki) = &entity.wikipedia_uri {
            self.by_uri.entry(normalize_uri(wiki)).or_insert(idx);
        }
        self.entities.push(entity.clone());

        if is_member {
            let surname = rec.surname.clone().unwrap_or_else(|| {
                rec.canonical_name
                    .split_whitespace()
                    .last()
                    .unwrap_or_default()
                    .to_string()
            });
            let m = self.members.len();
            self.member_by_uri.insert(rec.uri.clone(), m);
            let mut keys = vec![(name_key(&rec.canonical_name), NameMatch::FullName)];
            if name_key(&surname) != keys[0].0 {
                keys.push((name_key(&surname), NameMatch::Surname));
            }
            for (k, how) in keys {
                self.names.entry(k).or_default().push((m, how));
            }
            for p in &rec.positions {
                if let Some(portfolio) = &p.portfolio {
                    let slot = self.government.entry((p.role, name_key(portfolio))).or_default();
                    if !slot.contains(&m) {
                        slot.push(m);
                    }
                }
            }
            self.members.push(Member {
                entity,
                surname,
                memberships: rec.memberships,
                positions: rec.positions,
            });
        }
        Ok(())
    }

    pub fn parse(input: &str) -> Result<Self, KbError> {
        let mut records = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let rec: KbRecord = serde_json::from_str(t).map_err(|e| KbError::Parse {
                line: n + 1,
                message: e.to_string(),
            })?;
            records.push(rec);
        }
        Self::from_records(records)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, KbError> {
        let path = path.as_ref();
        let input = std::fs::read_to_string(path).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&input)
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// Lookup by URI or by Wikipedia URI, after normalization.
    pub fn entity(&self, uri: &str) -> Option<&Entity> {
        self.by_uri.get(&normalize_uri(uri)).map(|&i| &self.entities[i])
    }

    pub fn member(&self, uri: &str) -> Option<&Member> {
        self.member_by_uri.get(uri).map(|&i| &self.members[i])
    }

    pub fn kind_of(&self, uri: &str) -> Option<EntityKind> {
        self.entity(uri).map(|e| e.kind)
    }

    /// Members matching `name` (surname or full name, case-insensitive) who
    /// sit in `house` on `date`, sorted by URI.
    pub fn query_member_index_detailed(&self, name: &str, date: NaiveDate, house: &str) -> Vec<MemberHit> {
        let mut hits: BTreeMap<&str, NameMatch> = BTreeMap::new();
        for &(m, how) in self.names.get(&name_key(name)).into_iter().flatten() {
            let member = &self.members[m];
            if member.sits_in(house, date) {
                let slot = hits.entry(member.uri()).or_insert(how);
                *slot = (*slot).max(how);
            }
        }
        hits.into_iter()
            .map(|(uri, matched)| MemberHit {
                uri: uri.to_string(),
                matched,
            })
            .collect()
    }

    pub fn query_member_index(&self, name: &str, date: NaiveDate, house: &str) -> Vec<String> {
        self.query_member_index_detailed(name, date, house)
            .into_iter()
            .map(|h| h.uri)
            .collect()
    }

    /// Holders of `role` for `portfolio` on `date`, sorted by URI.
    pub fn query_government_index(&self, role: GovRole, portfolio: &str, date: NaiveDate) -> Vec<String> {
        let Some(slot) = self.government.get(&(role, name_key(portfolio))) else {
            return Vec::new();
        };
        let mut uris: Vec<String> = slot
            .iter()
            .map(|&m| &self.members[m])
            .filter(|m| m.holds(role, Some(portfolio), date))
            .map(|m| m.uri().to_string())
            .collect();
        uris.sort();
        uris
    }

    /// Name search used for candidate pre-selection.
    ///
    /// Ranks exact alias matches first, then aliases that start with the
    /// query, then entities sharing at least one token with the query (more
    /// shared tokens first). Ties are broken by URI.
    pub fn search(&self, query: &str, k: usize) -> Vec<&Entity> {
        let q = name_key(query);
        if q.is_empty() || k == 0 {
            return Vec::new();
        }
        let q_tokens: HashSet<&str> = q.split(' ').collect();
        let mut scored: Vec<((u8, usize), &Entity)> = Vec::new();
        for e in &self.entities {
            let mut best: Option<(u8, usize)> = None;
            for alias in &e.aliases {
                let a = name_key(alias);
                let score = if a == q {
                    (0, 0)
                } else if a.starts_with(&q) {
                    (1, 0)
                } else {
                    let overlap = a.split(' ').collect::<HashSet<_>>().intersection(&q_tokens).count();
                    if overlap == 0 {
                        continue;
                    }
                    (2, usize::MAX - overlap)
                };
                best = Some(best.map_or(score, |b| b.min(score)));
            }
            if let Some(score) = best {
                scored.push((score, e));
            }
        }
        scored.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.uri.cmp(&b.1.uri)));
        scored.into_iter().take(k).map(|(_, e)| e).collect()
    }

    /// Speakers presented as minister/secretary who do not hold such a
    /// position in the KB on the debate date.
    pub fn check_speaker_roles(&self, debate: &Debate) -> Vec<String> {
        let mut problems = BTreeSet::new();
        for unit in debate.scenes.iter().flat_map(|s| &s.speech_units) {
            let sp = &unit.speaker;
            let role = match sp.role {
                Some(crate::corpus::SpeakerRole::Minister) => GovRole::Minister,
                Some(crate::corpus::SpeakerRole::Secretary) => GovRole::Secretary,
                _ => continue,
            };
            let ok = self
                .member(&sp.uri)
                .is_some_and(|m| m.holds(role, sp.portfolio.as_deref(), debate.date));
            if !ok {
                problems.insert(format!(
                    "{} in debate {}: no {:?} position on {}",
                    sp.uri, debate.id, role, debate.date
                ));
            }
        }
        problems.into_iter().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CasePolicy {
    #[default]
    Insensitive,
    Sensitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AliasEntry {
    pub alias: String,
    pub uri: String,
    pub case: CasePolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AliasConflict {
    pub alias: String,
    pub uris: (String, String),
}

/// Many-to-one mapping from names to entity URIs.
///
/// Entries are kept sorted by alias; an alias id is an index into
/// [`AliasDictionary::entries`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasDictionary {
    entries: Vec<AliasEntry>,
    case_policy: CasePolicy,
}

impl AliasDictionary {
    pub fn from_entries(mut entries: Vec<AliasEntry>, case_policy: CasePolicy) -> Result<Self, KbError> {
        if entries.is_empty() {
            return Err(KbError::NoEntities);
        }
        for e in &entries {
            if e.alias.is_empty() {
                return Err(KbError::Invariant {
                    uri: e.uri.clone(),
                    message: "empty alias".into(),
                });
            }
            if e.case == CasePolicy::Insensitive && e.alias.chars().any(fold_changes_length) {
                return Err(KbError::UnfoldableAlias(e.alias.clone()));
            }
        }
        entries.sort_by(|a, b| (&a.alias, &a.uri, a.case).cmp(&(&b.alias, &b.uri, b.case)));
        entries.dedup_by(|b, a| a.alias == b.alias && a.uri == b.uri);

        let mut by_fold: BTreeMap<String, Vec<&AliasEntry>> = BTreeMap::new();
        for e in &entries {
            by_fold.entry(fold_str(&e.alias)).or_default().push(e);
        }
        let mut conflicts = BTreeSet::new();
        for group in by_fold.values() {
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    let disjoint =
                        a.case == CasePolicy::Sensitive && b.case == CasePolicy::Sensitive && a.alias != b.alias;
                    if a.uri != b.uri && !disjoint {
                        let (lo, hi) = if a.uri < b.uri { (a, b) } else { (b, a) };
                        conflicts.insert(AliasConflict {
                            alias: lo.alias.clone(),
                            uris: (lo.uri.clone(), hi.uri.clone()),
                        });
                    }
                }
            }
        }
        if !conflicts.is_empty() {
            return Err(KbError::Ambiguous(conflicts.into_iter().collect()));
        }
        Ok(AliasDictionary { entries, case_policy })
    }

    /// Parse an `alias<TAB>uri[<TAB>case=sensitive]` table.
    pub fn parse_tsv(input: &str, default_policy: CasePolicy) -> Result<Self, KbError> {
        let mut entries = Vec::new();
        for (n, line) in input.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let err = |message: &str| KbError::Parse {
                line: n + 1,
                message: message.to_string(),
            };
            let case = match cols.len() {
                2 => default_policy,
                3 => match cols[2].trim() {
                    "case=sensitive" => CasePolicy::Sensitive,
                    "case=insensitive" => CasePolicy::Insensitive,
                    other => return Err(err(&format!("unknown option `{other}`"))),
                },
                _ => return Err(err("expected `alias<TAB>uri[<TAB>case=sensitive]`")),
            };
            entries.push(AliasEntry {
                alias: cols[0].to_string(),
                uri: cols[1].trim().to_string(),
                case,
            });
        }
        Self::from_entries(entries, default_policy)
    }

    pub fn load(path: impl AsRef<Path>, default_policy: CasePolicy) -> Result<Self, KbError> {
        let path = path.as_ref();
        let input = std::fs::read_to_string(path).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_tsv(&input, default_policy)
    }

    pub fn entries(&self) -> &[AliasEntry] {
        &self.entries
    }

    pub fn entry(&self, alias_id: usize) -> &AliasEntry {
        &self.entries[alias_id]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn case_policy(&self) -> CasePolicy {
        self.case_policy
    }

    pub fn uri_for(&self, alias: &str) -> Option<&str> {
        let folded = fold_str(alias);
        self.entries
            .iter()
            .find(|e| match e.case {
                CasePolicy::Sensitive => e.alias == alias,
                CasePolicy::Insensitive => fold_str(&e.alias) == folded,
            })
            .map(|e| e.uri.as_str())
    }
}

/// Dictionary over every alias of every entity, matched case-insensitively.
pub fn build_alias_dictionary(entities: &[Entity]) -> Result<AliasDictionary, KbError> {
    if entities.is_empty() {
        return Err(KbError::NoEntities);
    }
    let entries = entities
        .iter()
        .flat_map(|e| {
            e.aliases.iter().map(|a| AliasEntry {
                alias: a.clone(),
                uri: e.uri.clone(),
                case: CasePolicy::Insensitive,
            })
        })
        .collect();
    AliasDictionary::from_entries(entries, CasePolicy::Insensitive)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonWordWarning {
    pub alias: String,
    pub uri: String,
    pub word: String,
    /// Whether the entry already uses case-sensitive matching.
    pub case_sensitive: bool,
}

impl std::fmt::Display for CommonWordWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "alias \"{}\" ({}) is also the common word \"{}\"",
            self.alias, self.uri, self.word
        )?;
        if !self.case_sensitive {
            write!(f, "; consider case-sensitive matching for it")?;
        }
        Ok(())
    }
}

/// Aliases that double as common words in `lexicon`.
pub fn validate_common_words<'a>(
    dict: &AliasDictionary,
    lexicon: impl IntoIterator<Item = &'a str>,
) -> Vec<CommonWordWarning> {
    let words: HashSet<String> = lexicon.into_iter().map(|w| fold_str(w.trim())).collect();
    dict.entries()
        .iter()
        .filter_map(|e| {
            let folded = fold_str(&e.alias);
            words.contains(&folded).then(|| CommonWordWarning {
                alias: e.alias.clone(),
                uri: e.uri.clone(),
                word: folded,
                case_sensitive: e.case == CasePolicy::Sensitive,
            })
        })
        .collect()
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Vec<String>, KbError> {
    let path = path.as_ref();
    let input = std::fs::read_to_string(path).map_err(|source| KbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}
