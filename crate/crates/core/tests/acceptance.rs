//! Acceptance suite. Prints one PASS/FAIL line per criterion, then fails if
//! any criterion failed.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hybridlink_core::annotation::Annotation;
use hybridlink_core::benchmark::{
    evaluate, largest_remainder, recall_gain_bound, resolve_gold, sample_stats, stratified_sample, GoldDecision,
    NoKinds, Round, Verdict,
};
use hybridlink_core::corpus::{Debate, DepartmentLabel, Scene, SpeakerRef, SpeakerRole, SpeechUnit};
use hybridlink_core::dict_linker::{
    brute_force_matches, build_automaton, find_matches, on_token_boundary, DictLinker, RawMatch,
};
use hybridlink_core::kb::{AliasDictionary, AliasEntry, CasePolicy, KnowledgeBase, NameMatch};
use hybridlink_core::pipeline::{
    combine_preference, pool, pool_corpus, run_systems, LinkerSystem, PooledPhrase, PreferenceOrder,
};
use hybridlink_core::role_linker::{Abstention, PatternConfig, Resolution, RoleLinker};
use hybridlink_core::synthetic::{end_to_end_fixture, reference_sample_fixture, GeneralistDials, REFERENCE_SAMPLE};
use hybridlink_core::text::{char_slice, fold_str};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 8] = [
        ("matching oracle equivalence", matching_oracle_equivalence),
        ("leftmost-longest and token boundaries", leftmost_longest_suite),
        ("role resolution fixture pack", role_fixture_pack),
        ("combiner laws", combiner_laws),
        ("hybrid gain", hybrid_gain),
        ("metric correctness", metric_correctness),
        ("sampler", sampler),
        ("recall gain bound", recall_gain),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(panic) => Err(panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                println!("[FAIL] {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

// ---------------------------------------------------------------------------
// dictionary matching

fn random_dictionary(rng: &mut ChaCha8Rng, max_aliases: usize, alphabet: &[char], max_len: usize) -> AliasDictionary {
    let n = rng.random_range(1..=max_aliases);
    let mut entries = Vec::new();
    let mut seen_folded = BTreeSet::new();
    for _ in 0..n {
        let len = rng.random_range(1..=max_len);
        let alias: String = (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect();
        let case = if rng.random_bool(0.3) {
            CasePolicy::Sensitive
        } else {
            CasePolicy::Insensitive
        };
        // one URI per fold class keeps the dictionary unambiguous
        let folded = fold_str(&alias);
        let uri = format!("u:{folded}");
        if case == CasePolicy::Insensitive && !seen_folded.insert(folded) {
            continue;
        }
        entries.push(AliasEntry { alias, uri, case });
    }
    AliasDictionary::from_entries(entries, CasePolicy::Insensitive).expect("unambiguous by construction")
}

fn random_text(rng: &mut ChaCha8Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

fn matching_oracle_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac);
    let alphabet: Vec<char> = "abcABCéÉ -".chars().collect();
    let started = Instant::now();
    let mut total_matches = 0;
    for case in 0..1000 {
        let dict = random_dictionary(&mut rng, 50, &alphabet, 6);
        let text = random_text(&mut rng, &alphabet, 500);
        let automaton = build_automaton(&dict).map_err(|e| e.to_string())?;
        let fast: BTreeSet<RawMatch> = find_matches(&automaton, &text).into_iter().collect();
        let slow: BTreeSet<RawMatch> = brute_force_matches(&dict, &text).into_iter().collect();
        ensure(fast == slow, || {
            format!("case {case}: automaton and brute force disagree on {text:?}")
        })?;
        total_matches += fast.len();
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("1000 cases, {total_matches} matches, {elapsed:.2?}"))
}

type MatchKey = (usize, std::cmp::Reverse<usize>, usize);

/// Among all maximal non-overlapping selections, the lexicographically least
/// by (start, longer first, alias id).
fn exhaustive_selection(candidates: &[RawMatch]) -> Vec<RawMatch> {
    let key = |m: &RawMatch| (m.start, std::cmp::Reverse(m.end), m.alias_id);
    let mut sorted = candidates.to_vec();
    sorted.sort_by_key(key);
    let mut best: Option<Vec<RawMatch>> = None;
    let mut current = Vec::new();
    fn walk(
        sorted: &[RawMatch],
        current: &mut Vec<RawMatch>,
        best: &mut Option<Vec<RawMatch>>,
        key: &dyn Fn(&RawMatch) -> MatchKey,
    ) {
        let free: Vec<&RawMatch> = sorted
            .iter()
            .filter(|m| current.iter().all(|c: &RawMatch| m.end <= c.start || c.end <= m.start))
            .collect();
        if free.is_empty() {
            let mut sel = current.clone();
            sel.sort_by_key(key);
            let better = match best {
                None => true,
                Some(b) => sel.iter().map(key).lt(b.iter().map(key)),
            };
            if better {
                *best = Some(sel);
            }
            return;
        }
        for m in free {
            current.push(*m);
            walk(sorted, current, best, key);
            current.pop();
        }
    }
    walk(&sorted, &mut current, &mut best, &key);
    best.unwrap_or_default()
}

fn leftmost_longest_suite() -> Result<String, String> {
    let link = |pairs: &[(&str, &str)], text: &str| -> Vec<(usize, usize, String)> {
        let entries = pairs
            .iter()
            .map(|(a, u)| AliasEntry {
                alias: a.to_string(),
                uri: u.to_string(),
                case: CasePolicy::Insensitive,
            })
            .collect();
        let linker = DictLinker::new(AliasDictionary::from_entries(entries, CasePolicy::Insensitive).unwrap()).unwrap();
        let scene = Scene {
            id: "s".into(),
            speech_units: vec![SpeechUnit {
                id: "u".into(),
                speaker: SpeakerRef {
                    uri: "pm:x".into(),
                    display_name: "X".into(),
                    role: None,
                    portfolio: None,
                },
                text: text.into(),
            }],
        };
        linker
            .link("d", &scene)
            .into_iter()
            .map(|a| (a.start, a.end, a.uri.unwrap()))
            .collect()
    };
    let examples = [
        (
            link(
                &[("Partij van de Arbeid", "p1"), ("Arbeid", "p2")],
                "Partij van de Arbeid stemde voor",
            ),
            vec![(0, 20, "p1".to_string())],
        ),
        (
            link(&[("PvdA", "p1")], "de PvdA-fractie"),
            vec![(3, 7, "p1".to_string())],
        ),
        (link(&[("PvdA", "p1")], "OPvdAX"), vec![]),
    ];
    for (i, (got, want)) in examples.iter().enumerate() {
        ensure(got == want, || format!("example {i}: got {got:?}, want {want:?}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let alphabet: Vec<char> = "abA  -".chars().collect();
    let mut cases = 0;
    let mut selected_total = 0;
    while cases < 50 {
        let dict = random_dictionary(&mut rng, 8, &alphabet, 3);
        let text = random_text(&mut rng, &alphabet, 24);
        let linker = DictLinker::new(dict.clone()).map_err(|e| e.to_string())?;
        let chars: Vec<char> = text.chars().collect();
        let candidates: Vec<RawMatch> = brute_force_matches(&dict, &text)
            .into_iter()
            .filter(|m| on_token_boundary(&chars, m))
            .collect();
        if candidates.len() > 14 {
            continue;
        }
        let want = exhaustive_selection(&candidates);
        let got = linker.select(&text);
        ensure(got == want, || format!("{text:?}: got {got:?}, oracle {want:?}"))?;
        cases += 1;
        selected_total += got.len();
    }
    Ok(format!(
        "3 examples, 50 random cases ({selected_total} selected matches)"
    ))
}

// ---------------------------------------------------------------------------
// role resolution

const ROLE_KB: &str = r#"
{"uri":"pm:m/els-jansen","kind":"person","canonical_name":"Els Jansen","aliases":["Els Jansen"],"surname":"Jansen","memberships":[{"house":"Tweede Kamer","start":"2002-05-23"}]}
{"uri":"pm:m/piet-jansen","kind":"person","canonical_name":"Piet Jansen","aliases":["Piet Jansen"],"surname":"Jansen","memberships":[{"house":"Tweede Kamer","start":"2002-05-23"}]}
{"uri":"pm:m/pietersen","kind":"person","canonical_name":"Gerard Pietersen","aliases":["Gerard Pietersen"],"surname":"Pietersen","memberships":[{"house":"Tweede Kamer","start":"1998-05-19"}]}
{"uri":"pm:m/vos","kind":"person","canonical_name":"Sander Vos","aliases":["Sander Vos"],"surname":"Vos","memberships":[{"house":"Tweede Kamer","start":"1998-05-19"}]}
{"uri":"pm:m/de-vries","kind":"person","canonical_name":"Anna de Vries","aliases":["Anna de Vries"],"surname":"de Vries","memberships":[{"house":"Tweede Kamer","start":"2002-05-23"}]}
{"uri":"pm:m/zalm","kind":"person","canonical_name":"Gerrit Zalm","aliases":["Gerrit Zalm"],"surname":"Zalm","positions":[{"role":"minister","portfolio":"Financiën","start":"2002-07-22","end":"2007-02-22"}]}
{"uri":"pm:m/donner","kind":"person","canonical_name":"Piet Hein Donner","aliases":["Piet Hein Donner"],"surname":"Donner","positions":[{"role":"minister","portfolio":"Justitie","start":"2002-07-22","end":"2006-09-26"}]}
{"uri":"pm:m/wijn","kind":"person","canonical_name":"Joop Wijn","aliases":["Joop Wijn"],"surname":"Wijn","positions":[{"role":"secretary","portfolio":"Economische Zaken","start":"2003-05-27","end":"2006-06-07"}]}
"#;

fn who(uri: &str, role: SpeakerRole) -> SpeakerRef {
    let portfolio = match uri {
        "pm:m/zalm" => Some("Financiën".to_string()),
        "pm:m/donner" => Some("Justitie".to_string()),
        _ => None,
    };
    SpeakerRef {
        uri: uri.into(),
        display_name: uri.trim_start_matches("pm:m/").into(),
        role: Some(role),
        portfolio,
    }
}

fn member(uri: &str) -> SpeakerRef {
    who(uri, SpeakerRole::Member)
}

fn minister(uri: &str) -> SpeakerRef {
    who(uri, SpeakerRole::Minister)
}

type Expected = Vec<(&'static str, Result<(&'static str, Resolution), Abstention>)>;
type Outcomes = Vec<(String, Result<(String, Resolution), Abstention>)>;

struct RoleCase {
    name: &'static str,
    date: (i32, u32, u32),
    /// Scenes before the one under test, to populate the speakers list.
    earlier: Vec<Vec<(SpeakerRef, &'static str)>>,
    scene: Vec<(SpeakerRef, &'static str)>,
    expected: Expected,
}

fn role_cases() -> Vec<RoleCase> {
    use Resolution::*;
    let today = (2004, 3, 1);
    vec![
        RoleCase {
            name: "addressed speaker, surname shared in the index",
            date: today,
            earlier: vec![],
            scene: vec![
                (member("pm:m/els-jansen"), "Voorzitter, ik heb een vraag."),
                (member("pm:m/vos"), "Ik dank mevrouw Jansen voor haar vraag."),
            ],
            expected: vec![("mevrouw Jansen", Ok(("pm:m/els-jansen", Speaker)))],
        },
        RoleCase {
            name: "unique surname in the member index",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik dank de heer Pietersen voor zijn inbreng.")],
            expected: vec![(
                "de heer Pietersen",
                Ok(("pm:m/pietersen", MemberIndex(NameMatch::Surname))),
            )],
        },
        RoleCase {
            name: "full name in the member index",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik sluit mij aan bij de heer Piet Jansen.")],
            expected: vec![(
                "de heer Piet Jansen",
                Ok(("pm:m/piet-jansen", MemberIndex(NameMatch::FullName))),
            )],
        },
        RoleCase {
            name: "ambiguous surname abstains",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik dank mevrouw Jansen.")],
            expected: vec![("mevrouw Jansen", Err(Abstention::Ambiguous { candidates: 2 }))],
        },
        RoleCase {
            name: "unknown name abstains",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik dank de heer Bakker.")],
            expected: vec![("de heer Bakker", Err(Abstention::NoCandidate))],
        },
        RoleCase {
            name: "particle surname",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik dank mevrouw De Vries voor het debat.")],
            expected: vec![(
                "mevrouw De Vries",
                Ok(("pm:m/de-vries", MemberIndex(NameMatch::Surname))),
            )],
        },
        RoleCase {
            name: "portfolio lookup",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik vraag de minister van Financiën om een reactie.")],
            expected: vec![("minister van Financiën", Ok(("pm:m/zalm", GovernmentIndex)))],
        },
        RoleCase {
            name: "portfolio lookup outside the term of office",
            date: (2001, 6, 1),
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik vraag de minister van Financiën om een reactie.")],
            expected: vec![("minister van Financiën", Err(Abstention::NoCandidate))],
        },
        RoleCase {
            name: "secretary by portfolio",
            date: today,
            earlier: vec![],
            scene: vec![(
                member("pm:m/vos"),
                "Ik vraag de staatssecretaris van Economische Zaken om uitleg.",
            )],
            expected: vec![(
                "staatssecretaris van Economische Zaken",
                Ok(("pm:m/wijn", GovernmentIndex)),
            )],
        },
        RoleCase {
            name: "unknown portfolio abstains",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "Ik vraag de minister van Landbouw om een reactie.")],
            expected: vec![("minister van Landbouw", Err(Abstention::NoCandidate))],
        },
        RoleCase {
            name: "sole minister among the speakers",
            date: today,
            earlier: vec![],
            scene: vec![
                (minister("pm:m/donner"), "Dat zal ik doen."),
                (member("pm:m/vos"), "De minister zegt toe dat te doen."),
            ],
            expected: vec![("minister", Ok(("pm:m/donner", SoleRoleHolder)))],
        },
        RoleCase {
            name: "last minister to speak",
            date: today,
            earlier: vec![],
            scene: vec![
                (minister("pm:m/donner"), "Dat zal ik doen."),
                (minister("pm:m/zalm"), "Daar ben ik het mee eens."),
                (member("pm:m/vos"), "De minister heeft mij overtuigd."),
            ],
            expected: vec![("minister", Ok(("pm:m/zalm", LastMentioned)))],
        },
        RoleCase {
            name: "last minister mentioned",
            date: today,
            earlier: vec![],
            scene: vec![
                (minister("pm:m/zalm"), "Dat klopt."),
                (minister("pm:m/donner"), "Dat zal ik doen."),
                (
                    member("pm:m/vos"),
                    "De minister van Financiën heeft gelijk, en de minister blijft bij zijn standpunt.",
                ),
            ],
            expected: vec![
                ("minister van Financiën", Ok(("pm:m/zalm", GovernmentIndex))),
                ("minister", Ok(("pm:m/zalm", LastMentioned))),
            ],
        },
        RoleCase {
            name: "several ministers, none mentioned in the scene",
            date: today,
            earlier: vec![vec![
                (minister("pm:m/zalm"), "Dat klopt."),
                (minister("pm:m/donner"), "Inderdaad."),
            ]],
            scene: vec![(member("pm:m/vos"), "De minister heeft het beloofd.")],
            expected: vec![("minister", Err(Abstention::NoPriorMention { candidates: 2 }))],
        },
        RoleCase {
            name: "bare role nobody holds",
            date: today,
            earlier: vec![],
            scene: vec![(member("pm:m/vos"), "De staatssecretaris is er niet.")],
            expected: vec![("staatssecretaris", Err(Abstention::NoCandidate))],
        },
        RoleCase {
            name: "two addresses in one sentence",
            date: today,
            earlier: vec![],
            scene: vec![
                (member("pm:m/pietersen"), "Ik heb een vraag."),
                (member("pm:m/vos"), "Ik dank de heer Pietersen en mevrouw De Vries."),
            ],
            expected: vec![
                ("de heer Pietersen", Ok(("pm:m/pietersen", Speaker))),
                (
                    "mevrouw De Vries",
                    Ok(("pm:m/de-vries", MemberIndex(NameMatch::Surname))),
                ),
            ],
        },
        RoleCase {
            name: "mentions stop at a speech turn",
            date: today,
            earlier: vec![],
            scene: vec![
                (member("pm:m/vos"), "Ik dank mevrouw"),
                (member("pm:m/pietersen"), "Jansen is er niet."),
            ],
            expected: vec![],
        },
    ]
}

fn role_fixture_pack() -> Result<String, String> {
    let kb = Arc::new(KnowledgeBase::parse(ROLE_KB).map_err(|e| e.to_string())?);
    let linker = RoleLinker::new(&PatternConfig::dutch(), Arc::clone(&kb));
    let cases = role_cases();
    let mut outcomes = 0;
    for case in &cases {
        let scene_of = |i: usize, units: &[(SpeakerRef, &str)]| Scene {
            id: format!("s{i}"),
            speech_units: units
                .iter()
                .enumerate()
                .map(|(j, (s, t))| SpeechUnit {
                    id: format!("s{i}.u{j}"),
                    speaker: s.clone(),
                    text: t.to_string(),
                })
                .collect(),
        };
        let mut scenes: Vec<Scene> = case.earlier.iter().enumerate().map(|(i, u)| scene_of(i, u)).collect();
        scenes.push(scene_of(scenes.len(), &case.scene));
        let (y, m, d) = case.date;
        let debate = Debate {
            id: "d".into(),
            date: NaiveDate::from_ymd_opt(y, m, d).unwrap(),
            house: "Tweede Kamer".into(),
            scenes,
        };
        let scene = debate.scenes.last().unwrap();
        let text = scene.text();
        let got: Outcomes = linker
            .resolve_scene(&debate, scene, hybridlink_core::corpus::speakers_list(&debate))
            .into_iter()
            .map(|o| (char_slice(&text, o.mention.start, o.mention.end).to_string(), o.result))
            .collect();
        let want: Outcomes = case
            .expected
            .iter()
            .map(|(s, r)| (s.to_string(), r.map(|(u, res)| (u.to_string(), res))))
            .collect();
        ensure(got == want, || format!("{}: got {got:?}, want {want:?}", case.name))?;

        let links: Vec<Option<String>> = linker.link(&debate, scene).into_iter().map(|a| a.uri).collect();
        let want_links: Vec<Option<String>> = want
            .iter()
            .map(|(_, r)| r.as_ref().ok().map(|(u, _)| u.clone()))
            .collect();
        ensure(links == want_links, || format!("{}: annotations {links:?}", case.name))?;
        outcomes += want.len();
    }
    ensure(cases.len() >= 12, || format!("only {} scenes", cases.len()))?;
    Ok(format!("{} scenes, {outcomes} expected outcomes", cases.len()))
}

// ---------------------------------------------------------------------------
// combination

fn random_annotations(rng: &mut ChaCha8Rng, systems: &[&str], text_len: usize) -> Vec<Annotation> {
    let mut out = Vec::new();
    for system in systems {
        for _ in 0..rng.random_range(0..8) {
            let start = rng.random_range(0..text_len - 1);
            let end = rng.random_range(start + 1..=(start + 6).min(text_len));
            let uri = (!rng.random_bool(0.15)).then(|| format!("u:{}", rng.random_range(0..6)));
            out.push(Annotation {
                debate_id: "d".into(),
                scene_id: "s".into(),
                start,
                end,
                surface: String::new(),
                uri,
                system_id: system.to_string(),
                confidence: rng.random_range(0.0..1.0),
            });
        }
    }
    out
}

fn plain_scene(text: &str) -> Scene {
    Scene {
        id: "s".into(),
        speech_units: vec![SpeechUnit {
            id: "u".into(),
            speaker: SpeakerRef {
                uri: "pm:x".into(),
                display_name: "X".into(),
                role: None,
                portfolio: None,
            },
            text: text.into(),
        }],
    }
}

fn random_gold(rng: &mut ChaCha8Rng, phrases: &[PooledPhrase]) -> Vec<GoldDecision> {
    phrases
        .iter()
        .map(|p| {
            let (verdict, uris) = match rng.random_range(0..5) {
                0 => (Verdict::NilNotInKb, vec![]),
                1 => (Verdict::DoNotAnnotate, vec![]),
                _ => {
                    let n = rng.random_range(1..=2);
                    (
                        Verdict::Link,
                        (0..n).map(|_| format!("u:{}", rng.random_range(0..6))).collect(),
                    )
                }
            };
            GoldDecision {
                phrase_id: p.phrase_id.clone(),
                verdict,
                uris,
                annotator_id: "g".into(),
                round: Round::Consensus,
            }
        })
        .collect()
}

fn combiner_laws() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0);
    let text = "x".repeat(60);
    let scene = plain_scene(&text);
    let systems = ["a", "b", "c"];
    let mut non_trivial = 0;
    for case in 0..600 {
        let anns = random_annotations(&mut rng, &systems, 60);
        let phrases = pool(&anns, "d", &scene).map_err(|e| e.to_string())?;
        let mut order: Vec<String> = systems.iter().map(|s| s.to_string()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let order = PreferenceOrder::new(order, systems).map_err(|e| e.to_string())?;
        let combined = combine_preference(&order, &phrases);
        let first = order.first();

        // the first system keeps every one of its links
        for p in &phrases {
            let mine: Vec<&Annotation> = p.links_of(first).collect();
            if !mine.is_empty() {
                let kept: Vec<&Annotation> = combined
                    .iter()
                    .filter(|a| a.start >= p.start && a.end <= p.end)
                    .collect();
                ensure(kept == mine, || {
                    format!("case {case}: first system links changed in {}", p.phrase_id)
                })?;
            }
        }
        // linked phrases of the combination are the union over systems
        let covered = |anns: &[Annotation]| -> BTreeSet<String> {
            anns.iter()
                .filter(|a| a.is_link())
                .map(|a| {
                    phrases
                        .iter()
                        .find(|p| p.overlaps(a.start, a.end))
                        .expect("every annotation was pooled")
                        .phrase_id
                        .clone()
                })
                .collect()
        };
        let union: BTreeSet<String> = phrases
            .iter()
            .filter(|p| systems.iter().any(|s| p.is_linked_by(s)))
            .map(|p| p.phrase_id.clone())
            .collect();
        ensure(covered(&combined) == union, || {
            format!("case {case}: coverage differs from union")
        })?;

        // recall never drops below the first system's
        let gold = random_gold(&mut rng, &phrases);
        let first_only: Vec<Annotation> = anns.iter().filter(|a| a.system_id == first).cloned().collect();
        let r_combined = evaluate(&combined, &gold, &phrases, &NoKinds).map_err(|e| e.to_string())?;
        let r_first = evaluate(&first_only, &gold, &phrases, &NoKinds).map_err(|e| e.to_string())?;
        ensure(r_combined.scores.recall >= r_first.scores.recall, || {
            format!(
                "case {case}: recall {} < first system {}",
                r_combined.scores.recall, r_first.scores.recall
            )
        })?;
        if r_combined.scores.recall > r_first.scores.recall {
            non_trivial += 1;
        }
    }
    Ok(format!(
        "600 random pools, combined recall strictly higher in {non_trivial}"
    ))
}

fn hybrid_gain() -> Result<String, String> {
    let fixture = end_to_end_fixture(60, 2024);
    let dict = fixture.dict_linker();
    let role = fixture.role_linker();
    let mock = fixture.generalist(&GeneralistDials::weak_on_persons(), 7);
    let systems: [&dyn LinkerSystem; 3] = [&dict, &role, &mock];
    let by_system = run_systems(&systems, &fixture.corpus, None);
    let all: Vec<Annotation> = by_system.values().flatten().cloned().collect();
    let phrases = pool_corpus(&fixture.corpus, &all, None).map_err(|e| e.to_string())?;
    let gold = fixture.gold(&phrases);
    let kinds = fixture.world.kinds();

    let known = ["dict", "role", "mock"];
    let order = |ids: &[&str]| PreferenceOrder::new(ids.iter().map(|s| s.to_string()).collect(), known).unwrap();
    let specialists = combine_preference(&order(&["dict", "role"]), &phrases);
    let hybrid = combine_preference(&order(&["dict", "role", "mock"]), &phrases);
    let generalist = &by_system["mock"];

    let f1 = |anns: &[Annotation]| evaluate(anns, &gold, &phrases, &kinds).map(|r| r.scores);
    let s = f1(&specialists).map_err(|e| e.to_string())?;
    let g = f1(generalist).map_err(|e| e.to_string())?;
    let h = f1(&hybrid).map_err(|e| e.to_string())?;
    ensure(s.precision == 1.0, || format!("specialist precision {}", s.precision))?;
    let persons = evaluate(generalist, &gold, &phrases, &kinds)
        .map_err(|e| e.to_string())?
        .slices[&hybridlink_core::benchmark::Slice::Person];
    ensure(persons.f1 < g.f1, || "generalist is not weakest on persons".into())?;
    ensure(h.f1 > g.f1 && h.f1 > s.f1, || {
        format!("F1 hybrid {:.3}, generalist {:.3}, specialists {:.3}", h.f1, g.f1, s.f1)
    })?;
    Ok(format!(
        "{} phrases; F1 hybrid {:.3} > generalist {:.3} (persons {:.3}), specialists {:.3}",
        phrases.len(),
        h.f1,
        g.f1,
        persons.f1,
        s.f1
    ))
}

// ---------------------------------------------------------------------------
// metrics

fn metric_correctness() -> Result<String, String> {
    let phrases: Vec<PooledPhrase> = (0..20)
        .map(|i| PooledPhrase {
            phrase_id: format!("d:s:{i}"),
            debate_id: "d".into(),
            scene_id: "s".into(),
            start: i * 10,
            end: i * 10 + 6,
            surface: String::new(),
            annotations: Vec::new(),
        })
        .collect();
    let link = |i: usize, uri: &str, start: usize, end: usize| Annotation {
        debate_id: "d".into(),
        scene_id: "s".into(),
        start: i * 10 + start,
        end: i * 10 + end,
        surface: String::new(),
        uri: Some(uri.into()),
        system_id: "sys".into(),
        confidence: 1.0,
    };
    let gold = |i: usize, verdict: Verdict, uris: &[&str]| GoldDecision {
        phrase_id: format!("d:s:{i}"),
        verdict,
        uris: uris.iter().map(|u| u.to_string()).collect(),
        annotator_id: "c".into(),
        round: Round::Consensus,
    };
    use Verdict::*;
    let golds = vec![
        gold(0, Link, &["pm:a"]),
        gold(1, Link, &["pm:b"]),
        gold(2, Link, &["pm:c1", "https://nl.wikipedia.org/wiki/C"]),
        gold(3, Link, &["pm:d1", "pm:d2"]),
        gold(4, Link, &["pm:e"]),
        gold(5, Link, &["pm:f"]),
        gold(6, Link, &["pm:g"]),
        gold(7, Link, &["pm:h"]),
        gold(8, Link, &["pm:i"]),
        gold(9, Link, &["pm:j"]),
        gold(10, NilNotInKb, &[]),
        gold(11, NilNotInKb, &[]),
        gold(12, DoNotAnnotate, &[]),
        gold(13, DoNotAnnotate, &[]),
        gold(14, Link, &["pm:l"]),
        gold(15, Link, &["https://nl.wikipedia.org/wiki/Den_Bosch"]),
        gold(16, Link, &["pm:p"]),
        gold(17, NilNotInKb, &[]),
        // 18 stays without a decision
        gold(19, Link, &["pm:r"]),
    ];
    let system = vec![
        link(0, "pm:a", 0, 6),
        link(1, "pm:b", 1, 3),
        link(2, "https://nl.wikipedia.org/wiki/C", 0, 6),
        link(3, "pm:d1", 0, 4),
        link(4, "pm:x", 0, 6),
        link(5, "pm:y", 0, 6),
        link(8, "pm:i", 0, 3),
        link(8, "pm:i", 3, 6),
        link(9, "pm:k", 0, 2),
        link(9, "pm:j", 2, 6),
        link(10, "pm:z", 0, 6),
        link(12, "pm:w", 0, 6),
        link(14, "pm:m", 0, 3),
        link(14, "pm:n", 3, 6),
        link(15, "HTTPS://nl.wikipedia.org/wiki/Den%20Bosch/", 0, 6),
        link(16, "pm:p", 0, 6),
        link(17, "pm:s1", 0, 3),
        link(17, "pm:s2", 3, 6),
        link(18, "pm:q", 0, 6),
        link(19, "pm:r", 4, 9),
    ];
    let r = evaluate(&system, &golds, &phrases, &NoKinds).map_err(|e| e.to_string())?;
    // hand count: TP 0,1,2,3,8,9,15,16,19; FP 4,5,10,12,17x2,14x2; FN 4,5,6,7,14
    let (tp, fp, fn_) = (9usize, 8usize, 5usize);
    let p = 9.0 / 17.0;
    let rc = 9.0 / 14.0;
    let f1 = 18.0 / 31.0;
    ensure((r.scores.tp, r.scores.fp, r.scores.fn_) == (tp, fp, fn_), || {
        format!("counts {:?}", (r.scores.tp, r.scores.fp, r.scores.fn_))
    })?;
    for (name, got, want) in [
        ("P", r.scores.precision, p),
        ("R", r.scores.recall, rc),
        ("F1", r.scores.f1, f1),
    ] {
        ensure((got - want).abs() < 1e-12, || format!("{name} {got} != {want}"))?;
    }
    ensure(
        r.fp_on_nil == 3 && r.fp_on_do_not_annotate == 1 && r.unscored_phrases == 1,
        || {
            format!(
                "breakdown {} {} {}",
                r.fp_on_nil, r.fp_on_do_not_annotate, r.unscored_phrases
            )
        },
    )?;
    ensure(r.scores.tp + r.scores.fp == r.scored_links, || {
        "tp+fp != scored links".into()
    })?;
    ensure(r.scores.tp + r.scores.fn_ == r.linkable_phrases, || {
        "tp+fn != linkable phrases".into()
    })?;
    Ok(format!("tp={tp} fp={fp} fn={fn_} P=9/17 R=9/14 F1=18/31"))
}

// ---------------------------------------------------------------------------
// sampling

fn sampler() -> Result<String, String> {
    let label = |n: &str| DepartmentLabel {
        name: n.into(),
        is_none_stratum: false,
    };
    let quotas: Vec<usize> = largest_remainder(&[(label("A"), 10), (label("B"), 5)], 3)
        .into_iter()
        .map(|s| s.quota)
        .collect();
    ensure(quotas == [2, 1], || format!("(10,5)/3 gave {quotas:?}"))?;

    // the same case through the whole sampler
    let small = end_to_end_fixture(15, 1);
    let mut corpus: Vec<Debate> = small.corpus.clone();
    for (i, d) in corpus.iter_mut().enumerate() {
        let portfolio = if i < 10 { "Financiën" } else { "Defensie" };
        for s in &mut d.scenes {
            for u in &mut s.speech_units {
                if u.speaker.role == Some(SpeakerRole::Minister) {
                    u.speaker.portfolio = Some(portfolio.into());
                }
            }
        }
        if !d
            .scenes
            .iter()
            .flat_map(|s| &s.speech_units)
            .any(|u| u.speaker.role == Some(SpeakerRole::Minister))
        {
            let unit = &mut d.scenes[0].speech_units[0];
            unit.speaker.role = Some(SpeakerRole::Minister);
            unit.speaker.portfolio = Some(portfolio.into());
        }
    }
    let pm = small.world.portfolio_map();
    let sample = stratified_sample(&corpus, &pm, 3, 5).map_err(|e| e.to_string())?;
    let finance = sample.iter().filter(|s| s.department == "Finance").count();
    ensure((finance, sample.len() - finance) == (2, 1), || {
        format!("sampled {sample:?}")
    })?;

    // determinism and the stratified sample of 43 scenes
    let fixture = reference_sample_fixture(2, 43);
    let pm = fixture.world.portfolio_map();
    let run = |seed| {
        let s = stratified_sample(&fixture.corpus, &pm, 43, seed).unwrap();
        hybridlink_core::annotation::to_jsonl(&s)
    };
    let first = run(17);
    ensure(first == run(17), || "same seed, different sample".into())?;
    ensure(first != run(18), || "seed has no effect".into())?;
    let sample = stratified_sample(&fixture.corpus, &pm, 43, 17).map_err(|e| e.to_string())?;
    let mut per_department: BTreeMap<&str, usize> = BTreeMap::new();
    for item in &sample {
        *per_department.entry(&item.department).or_default() += 1;
    }
    for (name, scenes, ..) in REFERENCE_SAMPLE {
        let got = per_department.get(name).copied().unwrap_or(0);
        ensure(got == scenes, || format!("{name}: {got} scenes, want {scenes}"))?;
    }
    ensure(sample.len() == 43, || format!("{} scenes", sample.len()))?;

    // the composition of the sample, through linking, pooling and gold
    let fixture = reference_sample_fixture(1, 43);
    let pm = fixture.world.portfolio_map();
    let sample = stratified_sample(&fixture.corpus, &pm, 43, 17).map_err(|e| e.to_string())?;
    let scenes: Vec<(String, String)> = sample
        .iter()
        .map(|s| (s.debate_id.clone(), s.scene_id.clone()))
        .collect();
    let dict = fixture.dict_linker();
    let role = fixture.role_linker();
    let mock = fixture.generalist(&GeneralistDials::full_coverage(), 3);
    let systems: [&dyn LinkerSystem; 3] = [&dict, &role, &mock];
    let all: Vec<Annotation> = run_systems(&systems, &fixture.corpus, Some(&scenes))
        .into_values()
        .flatten()
        .collect();
    let phrases = pool_corpus(&fixture.corpus, &all, Some(&scenes)).map_err(|e| e.to_string())?;
    let gold = resolve_gold(&fixture.gold(&phrases));
    let stats = sample_stats(&sample, &phrases, &gold, &fixture.world.kinds());
    let t = &stats.total;
    ensure(
        (t.scenes, t.phrases, t.persons, t.organizations) == (43, 682, 271, 91),
        || format!("totals {:?}", (t.scenes, t.phrases, t.persons, t.organizations)),
    )?;
    for (name, scenes, a, per, org) in REFERENCE_SAMPLE {
        let row = stats
            .rows
            .iter()
            .find(|r| r.department == name)
            .ok_or(format!("no row for {name}"))?;
        ensure(
            (row.scenes, row.phrases, row.persons, row.organizations) == (scenes, a, per, org),
            || format!("{name}: {row:?}"),
        )?;
    }
    Ok("quotas (2,1); seeded runs identical; 12 strata sum to 43; totals 43/682/271/91".into())
}

// ---------------------------------------------------------------------------
// recall gain

fn recall_gain() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a);
    let mut largest = 0;
    for case in 0..200 {
        let n = rng.random_range(0..30);
        let phrases: Vec<PooledPhrase> = (0..n)
            .map(|i| PooledPhrase {
                phrase_id: format!("d:s:{i}"),
                debate_id: "d".into(),
                scene_id: "s".into(),
                start: i * 10,
                end: i * 10 + 5,
                surface: String::new(),
                annotations: Vec::new(),
            })
            .collect();
        let mut system = |id: &str| -> (Vec<Annotation>, BTreeSet<usize>) {
            let mut anns = Vec::new();
            let mut linked = BTreeSet::new();
            for i in 0..n {
                if !rng.random_bool(0.4) {
                    continue;
                }
                let start = i * 10 + rng.random_range(0..4);
                let has_uri = rng.random_bool(0.8);
                anns.push(Annotation {
                    debate_id: "d".into(),
                    scene_id: "s".into(),
                    start,
                    end: start + 1,
                    surface: String::new(),
                    uri: has_uri.then(|| "u:x".to_string()),
                    system_id: id.into(),
                    confidence: 1.0,
                });
                if has_uri {
                    linked.insert(i);
                }
            }
            (anns, linked)
        };
        let (a, la) = system("a");
        let (b, lb) = system("b");
        let want = la.difference(&lb).count() + lb.difference(&la).count();
        let ab = recall_gain_bound(&a, &b, &phrases);
        let ba = recall_gain_bound(&b, &a, &phrases);
        ensure(ab == want && ba == want, || {
            format!("case {case}: {ab}/{ba}, oracle {want}")
        })?;
        largest = largest.max(want);
    }
    Ok(format!(
        "200 random pairs, symmetric and equal to the set oracle (max {largest})"
    ))
}
