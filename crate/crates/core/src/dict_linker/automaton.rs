//! Aho-Corasick automaton over case-folded alias characters.
//!
//! Outputs are propagated along failure links at build time, so every state's
//! output set already contains the outputs of its failure state and a scan
//! only has to read the output set of the current state.

use std::collections::VecDeque;

use crate::kb::{AliasDictionary, CasePolicy};
use crate::text::fold_char;

pub type StateId = usize;

pub const ROOT: StateId = 0;

#[derive(Debug, Clone)]
struct State {
    /// Sorted by character.
    goto: Vec<(char, StateId)>,
    fail: StateId,
    outputs: Vec<usize>,
    parent: StateId,
    label: char,
    depth: usize,
}

impl State {
    fn new(parent: StateId, label: char, depth: usize) -> Self {
        State {
            goto: Vec::new(),
            fail: ROOT,
            outputs: Vec::new(),
            parent,
            label,
            depth,
        }
    }

    fn next(&self, c: char) -> Option<StateId> {
        self.goto
            .binary_search_by_key(&c, |&(k, _)| k)
            .ok()
            .map(|i| self.goto[i].1)
    }
}

#[derive(Debug, Clone)]
struct Pattern {
    chars: Vec<char>,
    sensitive: bool,
}

/// A match of one dictionary alias; offsets count Unicode scalar values and
/// `end` is exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawMatch {
    pub start: usize,
    pub end: usize,
    pub alias_id: usize,
}

/// Work done by one scan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanStats {
    pub goto_steps: usize,
    pub failure_steps: usize,
}

#[derive(Debug, Clone)]
pub struct Automaton {
    states: Vec<State>,
    patterns: Vec<Pattern>,
}

#[derive(Debug, thiserror::Error)]
#[error("cannot build an automaton from an empty dictionary")]
pub struct EmptyDictionary;

impl Automaton {
    pub fn build(dict: &AliasDictionary) -> Result<Self, EmptyDictionary> {
        if dict.is_empty() {
            return Err(EmptyDictionary);
        }
        let mut states = vec![State::new(ROOT, '\0', 0)];
        let mut patterns = Vec::with_capacity(dict.len());

        for (id, entry) in dict.entries().iter().enumerate() {
            let chars: Vec<char> = entry.alias.chars().collect();
            let mut s = ROOT;
            for &c in &chars {
                let c = fold_char(c);
                s = match states[s].next(c) {
                    Some(t) => t,
                    None => {
                        let t = states.len();
                        let depth = states[s].depth + 1;
                        states.push(State::new(s, c, depth));
                        let goto = &mut states[s].goto;
                        let at = goto.partition_point(|&(k, _)| k < c);
                        goto.insert(at, (c, t));
                        t
                    }
                };
            }
            states[s].outputs.push(id);
            patterns.push(Pattern {
                chars,
                sensitive: entry.case == CasePolicy::Sensitive,
            });
        }

        // Breadth-first so a state's failure target is finished before it.
        let mut queue: VecDeque<StateId> = states[ROOT].goto.iter().map(|&(_, t)| t).collect();
        while let Some(s) = queue.pop_front() {
            let children = states[s].goto.clone();
            for (c, t) in children {
                let mut f = states[s].fail;
                let target = loop {
                    if let Some(next) = states[f].next(c) {
                        break next;
                    }
                    if f == ROOT {
                        break ROOT;
                    }
                    f = states[f].fail;
                };
                states[t].fail = target;
                let inherited = states[target].outputs.clone();
                states[t].outputs.extend(inherited);
                queue.push_back(t);
            }
        }
        Ok(Automaton { states, patterns })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn failure(&self, s: StateId) -> StateId {
        self.states[s].fail
    }

    pub fn outputs(&self, s: StateId) -> &[usize] {
        &self.states[s].outputs
    }

    /// The folded string spelled by the path from the root to `s`.
    pub fn path(&self, mut s: StateId) -> String {
        let mut rev = Vec::with_capacity(self.states[s].depth);
        while s != ROOT {
            rev.push(self.states[s].label);
            s = self.states[s].parent;
        }
        rev.iter().rev().collect()
    }

    /// State reached by following goto transitions for `folded`, if any.
    pub fn lookup(&self, folded: &str) -> Option<StateId> {
        folded.chars().try_fold(ROOT, |s, c| self.states[s].next(c))
    }

    pub fn find_matches(&self, text: &str) -> Vec<RawMatch> {
        self.find_matches_with_stats(text).0
    }

    pub fn find_matches_with_stats(&self, text: &str) -> (Vec<RawMatch>, ScanStats) {
        let original: Vec<char> = text.chars().collect();
        let mut stats = ScanStats::default();
        let mut out = Vec::new();
        let mut s = ROOT;
        for (i, &raw) in original.iter().enumerate() {
            let c = fold_char(raw);
            loop {
                if let Some(t) = self.states[s].next(c) {
                    s = t;
                    stats.goto_steps += 1;
                    break;
                }
                if s == ROOT {
                    stats.goto_steps += 1;
                    break;
                }
                s = self.states[s].fail;
                stats.failure_steps += 1;
            }
            for &p in &self.states[s].outputs {
                let pattern = &self.patterns[p];
                let end = i + 1;
                let start = end - pattern.chars.len();
                if pattern.sensitive && original[start..end] != pattern.chars[..] {
                    continue;
                }
                out.push(RawMatch {
                    start,
                    end,
                    alias_id: p,
                });
            }
        }
        out.sort_unstable();
        (out, stats)
    }
}
