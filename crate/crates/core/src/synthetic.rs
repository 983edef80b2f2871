//! Generated parliament: a small KB, debates with known mentions, and the gold
//! standard those mentions imply.
//!
//! Every mention is written into the text by the generator, so the expected
//! link of each pooled phrase is known without human annotation. Filler text
//! avoids the address vocabulary and all entity names.

use std::collections::HashMap;
use std::sync::Arc;

use chrono::NaiveDate;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::benchmark::{GoldDecision, Round, Verdict};
use crate::corpus::{scene_key, Debate, PortfolioMap, Scene, SpeakerRef, SpeakerRole, SpeechUnit, NONE_STRATUM};
use crate::dict_linker::DictLinker;
use crate::kb::{
    build_alias_dictionary, EntityKind, GovPosition, GovRole, Interval, KbRecord, KnowledgeBase, Membership,
};
use crate::pipeline::{MockConfig, MockGeneralist, MockRule, PooledPhrase};
use crate::role_linker::{PatternConfig, RoleLinker};
use crate::uri::normalize_uri;

pub const HOUSE: &str = "Tweede Kamer";
const WIKI: &str = "https://nl.wikipedia.org/wiki/";

const MEMBERS: &[(&str, &str)] = &[
    ("Els", "Jansen"),
    ("Gerard", "Pietersen"),
    ("Anouk", "Verbeek"),
    ("Bram", "Hoekstra"),
    ("Carla", "Dijkman"),
    ("Dirk", "Veldhuis"),
    ("Eva", "Koster"),
    ("Frank", "Mulder"),
    ("Greetje", "Postma"),
    ("Hans", "Brouwer"),
    ("Ilse", "Kuipers"),
    ("Joost", "Bosman"),
    ("Karin", "Wessels"),
    ("Lucas", "Visscher"),
    ("Marieke", "Dekker"),
    ("Niels", "Huisman"),
    ("Olga", "Timmer"),
    ("Pieter", "Jonkers"),
    ("Ria", "Scholten"),
    ("Sander", "Vos"),
    ("Tineke", "Hendriks"),
    ("Ruud", "Smeets"),
    ("Wouter", "Geerts"),
    ("Yvonne", "Maas"),
];

const CHAIR: (&str, &str) = ("Frans", "Weisveld");

/// (first name, surname, portfolio, department)
const MINISTERS: &[(&str, &str, &str, &str)] = &[
    ("Karel", "Brink", "Economische Zaken", "Economic Affairs"),
    ("Lotte", "Zandbergen", "Veiligheid en Justitie", "Security and Justice"),
    (
        "Maarten",
        "Oosting",
        "Infrastructuur en Milieu",
        "Infrastructure and the Environment",
    ),
    (
        "Nora",
        "Claassen",
        "Sociale Zaken en Werkgelegenheid",
        "Social Affairs and Employment",
    ),
    (
        "Otto",
        "Ruiter",
        "Binnenlandse Zaken en Koninkrijksrelaties",
        "Interior and Kingdom Relations",
    ),
    ("Paul", "Zalmsma", "Financiën", "Finance"),
    ("Quinta", "Baars", "Buitenlandse Zaken", "Foreign Affairs"),
    (
        "Rob",
        "Teunissen",
        "Onderwijs, Cultuur en Wetenschap",
        "Education, Culture and Science",
    ),
    (
        "Sanne",
        "Lindeman",
        "Volksgezondheid, Welzijn en Sport",
        "Health, Welfare and Sport",
    ),
    ("Thijs", "Wolters", "Algemene Zaken", "General Affairs"),
    ("Vera", "Gorter", "Defensie", "Defense"),
];

/// (aliases, Wikipedia title)
const PARTIES: &[(&[&str], &str)] = &[
    (&["VVD"], "Volkspartij_voor_Vrijheid_en_Democratie"),
    (&["CDA"], "Christen-Democratisch_Appèl"),
    (&["PvdA", "Partij van de Arbeid"], "Partij_van_de_Arbeid"),
    (&["SP"], "Socialistische_Partij"),
    (&["GroenLinks"], "GroenLinks"),
    (&["D66"], "Democraten_66"),
    (&["ChristenUnie"], "ChristenUnie"),
];

const KB_ORGANIZATIONS: &[(&str, &str)] = &[
    ("Raad van State", "Raad_van_State"),
    ("Algemene Rekenkamer", "Algemene_Rekenkamer"),
];

/// Organizations only a generalist knows about.
const EXTERNAL_ORGANIZATIONS: &[(&str, &str)] = &[
    ("Verenigde Naties", "Verenigde_Naties"),
    ("Europese Unie", "Europese_Unie"),
    ("NAVO", "Noord-Atlantische_Verdragsorganisatie"),
    ("Shell", "Royal_Dutch_Shell"),
    ("Greenpeace", "Greenpeace"),
];

const PLACES: &[(&str, &str)] = &[
    ("Amsterdam", "Amsterdam"),
    ("Rotterdam", "Rotterdam"),
    ("Irak", "Irak"),
    ("Afghanistan", "Afghanistan"),
    ("Groningen", "Groningen_(stad)"),
    ("Duitsland", "Duitsland"),
];

/// People absent from every KB; a generalist links them to a namesake.
const NIL_NAMES: &[(&str, &str)] = &[
    ("Jan Smit", "Jan_Smit_(zanger)"),
    ("Henk Bakker", "Henk_Bakker_(voetballer)"),
    ("Kees de Boer", "Kees_de_Boer_(schrijver)"),
];

/// Place names used for the institutions seated there; not to be linked.
const METONYMS: &[(&str, &str)] = &[("Den Haag", "Den_Haag"), ("Brussel", "Brussel")];

const PREFIXES: &[&str] = &[
    "Ik wil iets zeggen over",
    "Wij spreken vandaag ook over",
    "Het kabinet kijkt naar",
    "Dat geldt zeker voor",
    "Ik denk daarbij aan",
    "Laten wij eerlijk zijn over",
];

const ADDRESS_PREFIXES: &[&str] = &["Ik dank", "Ik ben het eens met", "Ik hoor graag van"];

const OFFICE_PREFIXES: &[&str] = &["Ik vraag de", "Graag hoor ik van de", "Ik ben het eens met de"];

const SUFFIXES: &[&str] = &[
    "want dat is belangrijk",
    "zoals eerder is gezegd",
    "omdat het zo hoort",
    "maar dat weet iedereen al",
    "want daar gaat het om",
];

const FILLER: &[&str] = &[
    "Voorzitter, dit is een belangrijk debat.",
    "Wij moeten hier zorgvuldig mee omgaan.",
    "Dat is een terechte vraag.",
    "Ik kom daar straks nog op terug.",
    "Het gaat om heel veel geld.",
];

const CHAIR_LINES: &[&str] = &["Dank u wel.", "Gaat uw gang.", "Het woord is weer aan u."];

fn wiki(title: &str) -> String {
    format!("{WIKI}{title}")
}

fn slug(s: &str) -> String {
    s.to_lowercase().replace(' ', "-")
}

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MentionKind {
    /// Full name of a member or minister.
    PersonName,
    /// Honorific followed by a member's surname.
    Honorific,
    /// A minister named by office and portfolio.
    Office,
    Party,
    KbOrganization,
    ExternalOrganization,
    Place,
    Nil,
    Metonym,
}

impl MentionKind {
    pub fn is_person(self) -> bool {
        matches!(
            self,
            MentionKind::PersonName | MentionKind::Honorific | MentionKind::Office
        )
    }

    pub fn is_organization(self) -> bool {
        matches!(
            self,
            MentionKind::Party | MentionKind::KbOrganization | MentionKind::ExternalOrganization
        )
    }
}

/// A mention the generator wrote, with the decision an annotator would make.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthMention {
    pub debate_id: String,
    pub scene_id: String,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub kind: MentionKind,
    pub verdict: Verdict,
    pub uris: Vec<String>,
}

/// Mentions per scene by what gold will say about them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SceneProfile {
    /// Linked to a person.
    pub persons: usize,
    /// Linked to a party or other organization.
    pub organizations: usize,
    /// Places, people outside every KB, and names not to be linked.
    pub others: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dial {
    pub recall: f64,
    pub precision: f64,
}

/// Behaviour of the mock generalist per entity category.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralistDials {
    pub persons: Dial,
    pub organizations: Dial,
    pub others: Dial,
}

impl GeneralistDials {
    /// Poor at the people of parliament, decent at organizations and places.
    pub fn weak_on_persons() -> Self {
        GeneralistDials {
            persons: Dial {
                recall: 0.25,
                precision: 0.5,
            },
            organizations: Dial {
                recall: 0.9,
                precision: 0.9,
            },
            others: Dial {
                recall: 0.95,
                precision: 0.9,
            },
        }
    }

    /// As above, but every organization and other name is spotted, so each
    /// generated mention ends up in the pool.
    pub fn full_coverage() -> Self {
        GeneralistDials {
            organizations: Dial {
                recall: 1.0,
                precision: 0.9,
            },
            others: Dial {
                recall: 1.0,
                precision: 0.9,
            },
            ..Self::weak_on_persons()
        }
    }
}

#[derive(Debug, Clone)]
struct Person {
    name: String,
    surname: String,
    uri: String,
    wiki: String,
    portfolio: Option<String>,
}

/// The fixed cast of the generated parliament.
#[derive(Debug, Clone)]
pub struct World {
    members: Vec<Person>,
    chair: Person,
    ministers: Vec<Person>,
    departments: Vec<(String, String)>,
}

impl Default for World {
    fn default() -> Self {
        Self::new()
    }
}

impl World {
    pub fn new() -> Self {
        let person = |first: &str, surname: &str, portfolio: Option<&str>| Person {
            name: format!("{first} {surname}"),
            surname: surname.to_string(),
            uri: format!("pm:m/{}", slug(surname)),
            wiki: wiki(&format!("{first}_{surname}")),
            portfolio: portfolio.map(str::to_string),
        };
        World {
            members: MEMBERS.iter().map(|(f, s)| person(f, s, None)).collect(),
            chair: person(CHAIR.0, CHAIR.1, None),
            ministers: MINISTERS.iter().map(|(f, s, p, _)| person(f, s, Some(p))).collect(),
            departments: MINISTERS
                .iter()
                .map(|(_, _, p, d)| (p.to_string(), d.to_string()))
                .collect(),
        }
    }

    pub fn kb_records(&self) -> Vec<KbRecord> {
        let term = Interval {
            start: date(2002, 5, 23),
            end: None,
        };
        let mut out = Vec::new();
        for p in self.members.iter().chain([&self.chair]) {
            out.push(KbRecord {
                uri: p.uri.clone(),
                kind: EntityKind::Person,
                canonical_name: p.name.clone(),
                aliases: vec![p.name.clone()],
                wikipedia_uri: Some(p.wiki.clone()),
                surname: Some(p.surname.clone()),
                memberships: vec![Membership {
                    house: HOUSE.into(),
                    interval: term,
                }],
                positions: Vec::new(),
            });
        }
        for p in &self.ministers {
            out.push(KbRecord {
                uri: p.uri.clone(),
                kind: EntityKind::Person,
                canonical_name: p.name.clone(),
                aliases: vec![p.name.clone()],
                wikipedia_uri: Some(p.wiki.clone()),
                surname: Some(p.surname.clone()),
                memberships: Vec::new(),
                positions: vec![GovPosition {
                    role: GovRole::Minister,
                    portfolio: p.portfolio.clone(),
                    interval: term,
                }],
            });
        }
        for (aliases, title) in PARTIES {
            out.push(KbRecord {
                uri: format!("pm:p/{}", slug(aliases[0])),
                kind: EntityKind::Party,
                canonical_name: aliases[0].to_string(),
                aliases: aliases.iter().map(|a| a.to_string()).collect(),
                wikipedia_uri: Some(wiki(title)),
                surname: None,
                memberships: Vec::new(),
                positions: Vec::new(),
            });
        }
        for (name, title) in KB_ORGANIZATIONS {
            out.push(KbRecord {
                uri: format!("pm:o/{}", slug(name)),
                kind: EntityKind::Organization,
                canonical_name: name.to_string(),
                aliases: vec![name.to_string()],
                wikipedia_uri: Some(wiki(title)),
                surname: None,
                memberships: Vec::new(),
                positions: Vec::new(),
            });
        }
        out
    }

    pub fn knowledge_base(&self) -> KnowledgeBase {
        KnowledgeBase::from_records(self.kb_records()).expect("generated KB is consistent")
    }

    pub fn portfolio_map(&self) -> PortfolioMap {
        PortfolioMap::parse(&self.portfolio_map_tsv()).expect("generated map is consistent")
    }

    pub fn portfolio_map_tsv(&self) -> String {
        self.departments.iter().map(|(p, d)| format!("{p}\t{d}\n")).collect()
    }

    pub fn department_of(&self, portfolio: &str) -> Option<&str> {
        self.departments
            .iter()
            .find(|(p, _)| p == portfolio)
            .map(|(_, d)| d.as_str())
    }

    pub fn portfolio_of(&self, department: &str) -> Option<&str> {
        self.departments
            .iter()
            .find(|(_, d)| d == department)
            .map(|(p, _)| p.as_str())
    }

    /// Kind of every URI the generator can put in gold, keyed by normalized URI.
    pub fn kinds(&self) -> HashMap<String, EntityKind> {
        let mut out = HashMap::new();
        for r in self.kb_records() {
            out.insert(normalize_uri(&r.uri), r.kind);
            if let Some(w) = &r.wikipedia_uri {
                out.insert(normalize_uri(w), r.kind);
            }
        }
        for (_, title) in EXTERNAL_ORGANIZATIONS {
            out.insert(normalize_uri(&wiki(title)), EntityKind::Organization);
        }
        for (_, title) in PLACES {
            out.insert(normalize_uri(&wiki(title)), EntityKind::Other);
        }
        out
    }

    pub fn mock_config(&self, dials: &GeneralistDials, seed: u64) -> MockConfig {
        let rule = |pattern: &str, uri: String, dial: Dial| MockRule {
            pattern: pattern.to_string(),
            uri,
            confidence: 0.5,
            recall: Some(dial.recall),
            precision: Some(dial.precision),
        };
        let mut rules = Vec::new();
        for p in self.members.iter().chain(&self.ministers) {
            rules.push(rule(&p.name, p.wiki.clone(), dials.persons));
        }
        for (aliases, title) in PARTIES {
            for a in *aliases {
                rules.push(rule(a, wiki(title), dials.organizations));
            }
        }
        for (name, title) in KB_ORGANIZATIONS.iter().chain(EXTERNAL_ORGANIZATIONS) {
            rules.push(rule(name, wiki(title), dials.organizations));
        }
        for (name, title) in PLACES {
            rules.push(rule(name, wiki(title), dials.others));
        }
        // always spotted; the namesake or the city itself is the wrong answer
        let always = Dial {
            recall: dials.others.recall,
            precision: 1.0,
        };
        for (name, title) in NIL_NAMES.iter().chain(METONYMS) {
            rules.push(rule(name, wiki(title), always));
        }
        MockConfig {
            system_id: "mock".into(),
            seed,
            recall: 1.0,
            precision: 1.0,
            rules,
            decoy_uri: None,
        }
    }

    fn person_mention(&self, rng: &mut ChaCha8Rng) -> (MentionKind, String, &'static str, Vec<String>) {
        match rng.random_range(0..3) {
            0 => {
                let p = self.members.iter().chain(&self.ministers).collect::<Vec<_>>();
                let p = p.choose(rng).expect("cast is not empty");
                (
                    MentionKind::PersonName,
                    p.name.clone(),
                    "",
                    vec![p.uri.clone(), p.wiki.clone()],
                )
            }
            1 => {
                let p = self.members.choose(rng).expect("members exist");
                let honorific = if rng.random_bool(0.5) { "mevrouw" } else { "de heer" };
                (
                    MentionKind::Honorific,
                    format!("{honorific} {}", p.surname),
                    "address",
                    vec![p.uri.clone(), p.wiki.clone()],
                )
            }
            _ => {
                let p = self.ministers.choose(rng).expect("ministers exist");
                (
                    MentionKind::Office,
                    format!(
                        "minister van {}",
                        p.portfolio.as_deref().expect("ministers hold a portfolio")
                    ),
                    "office",
                    vec![p.uri.clone(), p.wiki.clone()],
                )
            }
        }
    }
}

/// One written mention before it is placed in text.
struct Planned {
    kind: MentionKind,
    surface: String,
    /// Which prefix list introduces it.
    context: &'static str,
    verdict: Verdict,
    uris: Vec<String>,
}

fn plan_mentions(world: &World, profile: SceneProfile, rng: &mut ChaCha8Rng) -> Vec<Planned> {
    let link = |kind, surface: &str, uris: Vec<String>| Planned {
        kind,
        surface: surface.to_string(),
        context: "",
        verdict: Verdict::Link,
        uris,
    };
    let mut out = Vec::new();
    for _ in 0..profile.persons {
        let (kind, surface, context, uris) = world.person_mention(rng);
        out.push(Planned {
            kind,
            surface,
            context,
            verdict: Verdict::Link,
            uris,
        });
    }
    for _ in 0..profile.organizations {
        out.push(match rng.random_range(0..4) {
            0 | 1 => {
                let (aliases, title) = PARTIES.choose(rng).expect("parties exist");
                let surface = aliases.choose(rng).expect("party has an alias");
                link(
                    MentionKind::Party,
                    surface,
                    vec![format!("pm:p/{}", slug(aliases[0])), wiki(title)],
                )
            }
            2 => {
                let (name, title) = KB_ORGANIZATIONS.choose(rng).expect("organizations exist");
                link(
                    MentionKind::KbOrganization,
                    name,
                    vec![format!("pm:o/{}", slug(name)), wiki(title)],
                )
            }
            _ => {
                let (name, title) = EXTERNAL_ORGANIZATIONS.choose(rng).expect("organizations exist");
                link(MentionKind::ExternalOrganization, name, vec![wiki(title)])
            }
        });
    }
    for _ in 0..profile.others {
        out.push(match rng.random_range(0..5) {
            0..=2 => {
                let (name, title) = PLACES.choose(rng).expect("places exist");
                link(MentionKind::Place, name, vec![wiki(title)])
            }
            3 => {
                let (name, _) = NIL_NAMES.choose(rng).expect("names exist");
                Planned {
                    verdict: Verdict::NilNotInKb,
                    uris: Vec::new(),
                    ..link(MentionKind::Nil, name, Vec::new())
                }
            }
            _ => {
                let (name, _) = METONYMS.choose(rng).expect("metonyms exist");
                Planned {
                    verdict: Verdict::DoNotAnnotate,
                    uris: Vec::new(),
                    ..link(MentionKind::Metonym, name, Vec::new())
                }
            }
        });
    }
    out.shuffle(rng);
    out
}

/// Writes sentences and remembers where each mention landed.
struct UnitWriter {
    text: String,
    len: usize,
    mentions: Vec<(usize, usize, Planned)>,
}

impl UnitWriter {
    fn new() -> Self {
        UnitWriter {
            text: String::new(),
            len: 0,
            mentions: Vec::new(),
        }
    }

    fn push(&mut self, s: &str) {
        if !self.text.is_empty() {
            self.text.push(' ');
            self.len += 1;
        }
        self.text.push_str(s);
        self.len += s.chars().count();
    }

    fn filler(&mut self, rng: &mut ChaCha8Rng) {
        self.push(FILLER.choose(rng).expect("filler exists"));
    }

    fn mention(&mut self, m: Planned, rng: &mut ChaCha8Rng) {
        let prefixes = match m.context {
            "address" => ADDRESS_PREFIXES,
            "office" => OFFICE_PREFIXES,
            _ => PREFIXES,
        };
        self.push(prefixes.choose(rng).expect("prefix exists"));
        let start = self.len + 1;
        self.push(&m.surface);
        let end = self.len;
        self.mentions.push((start, end, m));
        self.push(&format!("{}.", SUFFIXES.choose(rng).expect("suffix exists")));
    }
}

fn speaker(p: &Person, role: SpeakerRole) -> SpeakerRef {
    SpeakerRef {
        uri: p.uri.clone(),
        display_name: p.surname.clone(),
        role: Some(role),
        portfolio: if role == SpeakerRole::Minister {
            p.portfolio.clone()
        } else {
            None
        },
    }
}

/// Corpus, KB and the mentions written into the corpus.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub world: World,
    pub corpus: Vec<Debate>,
    pub truth: Vec<TruthMention>,
}

/// Blueprint of one debate: the department whose minister takes part (none
/// for a debate without government) and one profile per scene.
#[derive(Debug, Clone)]
pub struct DebatePlan {
    pub department: Option<String>,
    pub scenes: Vec<SceneProfile>,
}

impl Fixture {
    pub fn generate(world: World, plans: &[DebatePlan], seed: u64) -> Fixture {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut corpus = Vec::new();
        let mut truth = Vec::new();
        for (d, plan) in plans.iter().enumerate() {
            let debate_id = format!("d{:03}", d + 1);
            let minister = plan.department.as_deref().map(|dep| {
                let portfolio = world.portfolio_of(dep).expect("department of the generated world");
                world
                    .ministers
                    .iter()
                    .find(|m| m.portfolio.as_deref() == Some(portfolio))
                    .expect("every portfolio has a minister")
                    .clone()
            });
            let day = rng.random_range(0..900);
            let debate_date = date(2004, 1, 5) + chrono::Days::new(day);
            let mut scenes = Vec::new();
            for (s, profile) in plan.scenes.iter().enumerate() {
                let scene_id = format!("s{}", s + 1);
                let principal = world.members.choose(&mut rng).expect("members exist").clone();
                let mut planned = plan_mentions(&world, *profile, &mut rng);

                // principal speaks, the chair interrupts, the minister (if any)
                // replies and the principal closes
                let mut units: Vec<(SpeakerRef, UnitWriter)> =
                    vec![(speaker(&principal, SpeakerRole::Member), UnitWriter::new())];
                units.push((speaker(&world.chair, SpeakerRole::Chair), UnitWriter::new()));
                if let Some(m) = &minister {
                    units.push((speaker(m, SpeakerRole::Minister), UnitWriter::new()));
                }
                units.push((speaker(&principal, SpeakerRole::Member), UnitWriter::new()));
                let talking: Vec<usize> = (0..units.len()).filter(|&i| i != 1).collect();
                units[1]
                    .1
                    .push(CHAIR_LINES.choose(&mut rng).expect("chair line exists"));
                for &i in &talking {
                    units[i].1.filler(&mut rng);
                }
                for m in planned.drain(..) {
                    let i = *talking.choose(&mut rng).expect("someone talks");
                    units[i].1.mention(m, &mut rng);
                    if rng.random_bool(0.3) {
                        units[i].1.filler(&mut rng);
                    }
                }

                let mut offset = 0;
                let mut speech_units = Vec::new();
                for (u, (who, writer)) in units.into_iter().enumerate() {
                    for (start, end, m) in writer.mentions {
                        truth.push(TruthMention {
                            debate_id: debate_id.clone(),
                            scene_id: scene_id.clone(),
                            start: offset + start,
                            end: offset + end,
                            surface: m.surface,
                            kind: m.kind,
                            verdict: m.verdict,
                            uris: m.uris,
                        });
                    }
                    offset += writer.len + 1;
                    speech_units.push(SpeechUnit {
                        id: format!("{scene_id}.u{}", u + 1),
                        speaker: who,
                        text: writer.text,
                    });
                }
                scenes.push(Scene {
                    id: scene_id,
                    speech_units,
                });
            }
            corpus.push(Debate {
                id: debate_id,
                date: debate_date,
                house: HOUSE.into(),
                scenes,
            });
        }
        Fixture { world, corpus, truth }
    }

    pub fn knowledge_base(&self) -> Arc<KnowledgeBase> {
        Arc::new(self.world.knowledge_base())
    }

    pub fn dict_linker(&self) -> DictLinker {
        let kb = self.world.knowledge_base();
        DictLinker::new(build_alias_dictionary(kb.entities()).expect("generated aliases are unambiguous"))
            .expect("dictionary is not empty")
    }

    pub fn role_linker(&self) -> RoleLinker {
        RoleLinker::new(&PatternConfig::dutch(), self.knowledge_base())
    }

    pub fn generalist(&self, dials: &GeneralistDials, seed: u64) -> MockGeneralist {
        MockGeneralist::new(self.world.mock_config(dials, seed)).expect("mock patterns are unambiguous")
    }

    /// Consensus gold for `phrases`: each phrase gets the decision of the
    /// written mention it overlaps most. A phrase covering no written mention
    /// is marked not to be annotated.
    pub fn gold(&self, phrases: &[PooledPhrase]) -> Vec<GoldDecision> {
        let mut by_scene: HashMap<String, Vec<&TruthMention>> = HashMap::new();
        for t in &self.truth {
            by_scene
                .entry(scene_key(&t.debate_id, &t.scene_id))
                .or_default()
                .push(t);
        }
        phrases
            .iter()
            .map(|p| {
                let best = by_scene
                    .get(&scene_key(&p.debate_id, &p.scene_id))
                    .into_iter()
                    .flatten()
                    .filter(|t| t.start < p.end && p.start < t.end)
                    .max_by_key(|t| (t.end.min(p.end) - t.start.max(p.start), std::cmp::Reverse(t.start)));
                let (verdict, uris) = match best {
                    Some(t) => (t.verdict, t.uris.clone()),
                    None => (Verdict::DoNotAnnotate, Vec::new()),
                };
                GoldDecision {
                    phrase_id: p.phrase_id.clone(),
                    verdict,
                    uris,
                    annotator_id: "fixture".into(),
                    round: Round::Consensus,
                }
            })
            .collect()
    }
}

/// Rows of the stratified sample the fixture reproduces: department,
/// scenes, pooled phrases, person-linked and organization-linked phrases.
pub const REFERENCE_SAMPLE: [(&str, usize, usize, usize, usize); 12] = [
    ("Economic Affairs", 4, 97, 29, 10),
    ("Security and Justice", 4, 90, 31, 7),
    ("Infrastructure and the Environment", 4, 79, 41, 14),
    (NONE_STRATUM, 4, 72, 33, 16),
    ("Social Affairs and Employment", 4, 61, 32, 10),
    ("Interior and Kingdom Relations", 4, 57, 17, 11),
    ("Finance", 4, 53, 30, 1),
    ("Foreign Affairs", 3, 51, 7, 5),
    ("Education, Culture and Science", 2, 43, 16, 7),
    ("Health, Welfare and Sport", 4, 32, 19, 1),
    ("General Affairs", 3, 32, 11, 5),
    ("Defense", 3, 15, 5, 4),
];

/// `total` split into `parts` near-equal shares, larger shares first.
fn split(total: usize, parts: usize) -> impl Iterator<Item = usize> {
    (0..parts).map(move |i| total / parts + usize::from(i < total % parts))
}

/// Corpus with `copies` debates per sampled scene of each row, so that a
/// sample of 43 scenes gets the row's scene count as quota. With one copy the
/// sample draws every debate, and all scenes of a debate share its profile,
/// so the composition of the sample is fixed whatever scene is drawn.
pub fn reference_sample_fixture(copies: usize, seed: u64) -> Fixture {
    let world = World::new();
    let mut plans = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (department, scenes, phrases, persons, organizations) in REFERENCE_SAMPLE {
        let department = (department != NONE_STRATUM).then(|| department.to_string());
        let shares = split(phrases, scenes)
            .zip(split(persons, scenes))
            .zip(split(organizations, scenes))
            .map(|((a, per), org)| SceneProfile {
                persons: per,
                organizations: org,
                others: a - per - org,
            })
            .collect::<Vec<_>>();
        for _ in 0..copies {
            for profile in &shares {
                let n = rng.random_range(1..=3);
                plans.push(DebatePlan {
                    department: department.clone(),
                    scenes: vec![*profile; n],
                });
            }
        }
    }
    Fixture::generate(world, &plans, seed)
}

/// Mixed corpus for end-to-end runs: debates cycle through the departments
/// and the none stratum, with random mention counts.
pub fn end_to_end_fixture(debates: usize, seed: u64) -> Fixture {
    let world = World::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let departments: Vec<Option<String>> = std::iter::once(None)
        .chain(world.departments.iter().map(|(_, d)| Some(d.clone())))
        .collect();
    let plans: Vec<DebatePlan> = (0..debates)
        .map(|i| DebatePlan {
            department: departments[i % departments.len()].clone(),
            scenes: (0..rng.random_range(1..=3))
                .map(|_| SceneProfile {
                    persons: rng.random_range(2..=6),
                    organizations: rng.random_range(1..=3),
                    others: rng.random_range(1..=4),
                })
                .collect(),
        })
        .collect();
    Fixture::generate(world, &plans, seed)
}
