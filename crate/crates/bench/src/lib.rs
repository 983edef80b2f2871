//! Inputs for the linking benchmarks.

use hybridlink_core::kb::{AliasDictionary, AliasEntry, CasePolicy};

/// Deterministic pseudo-random words, so benches need no RNG dependency.
struct Words(u64);

impl Words {
    fn next(&mut self) -> u64 {
        // xorshift64
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn word(&mut self, min: usize, max: usize) -> String {
        let len = min + (self.next() as usize) % (max - min + 1);
        (0..len).map(|_| (b'a' + (self.next() % 26) as u8) as char).collect()
    }
}

/// `aliases` distinct one- to three-word aliases.
pub fn dictionary(aliases: usize, seed: u64) -> AliasDictionary {
    let mut words = Words(seed | 1);
    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::with_capacity(aliases);
    while entries.len() < aliases {
        let n = 1 + (words.next() % 3) as usize;
        let alias: Vec<String> = (0..n).map(|_| words.word(3, 8)).collect();
        let alias = alias.join(" ");
        if seen.insert(alias.clone()) {
            entries.push(AliasEntry {
                uri: format!("pm:e/{}", entries.len()),
                alias,
                case: CasePolicy::Insensitive,
            });
        }
    }
    AliasDictionary::from_entries(entries, CasePolicy::Insensitive).expect("aliases are distinct")
}

/// About `chars` characters of filler words with aliases of `dict` mixed in.
pub fn text(dict: &AliasDictionary, chars: usize, seed: u64) -> String {
    let mut words = Words(seed | 1);
    let mut out = String::with_capacity(chars + 32);
    while out.len() < chars {
        if words.next().is_multiple_of(8) {
            let entry = dict.entry((words.next() as usize) % dict.len());
            out.push_str(&entry.alias);
        } else {
            out.push_str(&words.word(2, 9));
        }
        out.push(if words.next().is_multiple_of(12) { '.' } else { ' ' });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_deterministic_and_contain_aliases() {
        let dict = dictionary(100, 3);
        assert_eq!(dict.len(), 100);
        let a = text(&dict, 2000, 9);
        assert_eq!(a, text(&dict, 2000, 9));
        assert!(dict.entries().iter().any(|e| a.contains(&e.alias)));
    }
}
