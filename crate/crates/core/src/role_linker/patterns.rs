//! Address-pattern detection: honorific + name, role alone, and role followed
//! by a portfolio phrase.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::kb::GovRole;
use crate::text::{char_slice, fold_str};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleWord {
    pub word: String,
    pub role: GovRole,
}

/// Declarative replacement for a hand-written address regex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternConfig {
    pub honorifics: Vec<String>,
    pub roles: Vec<RoleWord>,
    pub portfolio_connectors: Vec<String>,
    pub name_particles: Vec<String>,
    pub max_name_tokens: usize,
    /// Tokens allowed between two capitalized portfolio words, e.g. `,` and `en`.
    #[serde(default)]
    pub portfolio_joiners: Vec<String>,
}

impl PatternConfig {
    /// Address forms used in Dutch parliamentary minutes, plus the English
    /// `Mr.`/`Mrs.` forms.
    pub fn dutch() -> Self {
        let strings = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        PatternConfig {
            honorifics: strings(&["de heer", "mevrouw", "collega", "Mr.", "Mrs.", "Ms."]),
            roles: vec![
                RoleWord {
                    word: "minister".into(),
                    role: GovRole::Minister,
                },
                RoleWord {
                    word: "staatssecretaris".into(),
                    role: GovRole::Secretary,
                },
                RoleWord {
                    word: "secretary of state".into(),
                    role: GovRole::Secretary,
                },
            ],
            portfolio_connectors: strings(&["van", "voor", "of", "for"]),
            name_particles: strings(&["van", "de", "der", "den", "ter", "ten", "het", "'t", "in", "op"]),
            max_name_tokens: 4,
            portfolio_joiners: strings(&[",", "en", "and"]),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, std::io::Error> {
        let input = std::fs::read_to_string(path)?;
        serde_json::from_str(&input).map_err(std::io::Error::other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MentionForm {
    HonorificName,
    RoleOnly,
    RoleWithPortfolio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoleMention {
    pub start: usize,
    pub end: usize,
    pub form: MentionForm,
    /// Surface of the honorific or role word(s).
    pub honorific_or_role: String,
    /// Role when the mention opens with a role word.
    pub role: Option<GovRole>,
    pub name: Option<String>,
    pub portfolio: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokenKind {
    Word,
    Punct,
    Break,
}

#[derive(Debug, Clone)]
struct Token {
    start: usize,
    end: usize,
    folded: String,
    kind: TokenKind,
    capitalized: bool,
    all_upper: bool,
}

fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            tokens.push(Token {
                start: i,
                end: i + 1,
                folded: "\n".into(),
                kind: TokenKind::Break,
                capitalized: false,
                all_upper: false,
            });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let start = i;
            i += 1;
            while i < chars.len() {
                let joined =
                    matches!(chars[i], '-' | '\'' | '’') && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
                if chars[i].is_alphanumeric() || joined {
                    i += 1;
                } else {
                    break;
                }
            }
            let word: String = chars[start..i].iter().collect();
            let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
            tokens.push(Token {
                start,
                end: i,
                folded: fold_str(&word),
                kind: TokenKind::Word,
                capitalized: c.is_uppercase(),
                all_upper: letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()),
            });
        } else {
            tokens.push(Token {
                start: i,
                end: i + 1,
                folded: fold_str(&c.to_string()),
                kind: TokenKind::Punct,
                capitalized: false,
                all_upper: false,
            });
            i += 1;
        }
    }
    tokens
}

fn phrase_tokens(phrase: &str) -> Vec<String> {
    tokenize(phrase).into_iter().map(|t| t.folded).collect()
}

/// Compiled form of a [`PatternConfig`].
#[derive(Debug, Clone)]
pub struct MentionDetector {
    honorifics: Vec<Vec<String>>,
    roles: Vec<(Vec<String>, GovRole)>,
    connectors: Vec<String>,
    particles: Vec<String>,
    joiners: Vec<String>,
    max_name_tokens: usize,
}

impl MentionDetector {
    pub fn new(config: &PatternConfig) -> Self {
        let mut honorifics: Vec<Vec<String>> = config.honorifics.iter().map(|h| phrase_tokens(h)).collect();
        let mut roles: Vec<(Vec<String>, GovRole)> =
            config.roles.iter().map(|r| (phrase_tokens(&r.word), r.role)).collect();
        // longest phrase first
        honorifics.sort_by_key(|h| std::cmp::Reverse(h.len()));
        roles.sort_by_key(|r| std::cmp::Reverse(r.0.len()));
        let fold_all = |xs: &[String]| xs.iter().map(|x| fold_str(x.trim())).collect();
        MentionDetector {
            honorifics: honorifics.into_iter().filter(|h| !h.is_empty()).collect(),
            roles: roles.into_iter().filter(|r| !r.0.is_empty()).collect(),
            connectors: fold_all(&config.portfolio_connectors),
            particles: fold_all(&config.name_particles),
            joiners: fold_all(&config.portfolio_joiners),
            max_name_tokens: config.max_name_tokens.max(1),
        }
    }

    pub fn detect(&self, text: &str) -> Vec<RoleMention> {
        let tokens = tokenize(text);
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            if let Some((j, role)) = self.match_role(&tokens, i) {
                let lead = char_slice(text, tokens[i].start, tokens[j - 1].end).to_string();
                if let Some((p_first, p_last)) = self.portfolio_at(&tokens, j) {
                    out.push(RoleMention {
                        start: tokens[i].start,
                        end: tokens[p_last].end,
                        form: MentionForm::RoleWithPortfolio,
                        honorific_or_role: lead,
                        role: Some(role),
                        name: None,
                        portfolio: Some(char_slice(text, tokens[p_first].start, tokens[p_last].end).to_string()),
                    });
                    i = p_last + 1;
                } else if let Some(last) = self.name_at(&tokens, j) {
                    out.push(RoleMention {
                        start: tokens[i].start,
                        end: tokens[last].end,
                        form: MentionForm::HonorificName,
                        honorific_or_role: lead,
                        role: Some(role),
                        name: Some(char_slice(text, tokens[j].start, tokens[last].end).to_string()),
                        portfolio: None,
                    });
                    i = last + 1;
                } else {
                    out.push(RoleMention {
                        start: tokens[i].start,
                        end: tokens[j - 1].end,
                        form: MentionForm::RoleOnly,
                        honorific_or_role: lead,
                        role: Some(role),
                        name: None,
                        portfolio: None,
                    });
                    i = j;
                }
            } else if let Some(j) = self.match_honorific(&tokens, i) {
                if let Some(last) = self.name_at(&tokens, j) {
                    out.push(RoleMention {
                        start: tokens[i].start,
                        end: tokens[last].end,
                        form: MentionForm::HonorificName,
                        honorific_or_role: char_slice(text, tokens[i].start, tokens[j - 1].end).to_string(),
                        role: None,
                        name: Some(char_slice(text, tokens[j].start, tokens[last].end).to_string()),
                        portfolio: None,
                    });
                    i = last + 1;
                } else {
                    i = j;
                }
            } else {
                i += 1;
            }
        }
        out
    }

    fn phrase_at(tokens: &[Token], i: usize, phrase: &[String]) -> bool {
        tokens.len() >= i + phrase.len()
            && tokens[i..i + phrase.len()]
                .iter()
                .zip(phrase)
                .all(|(t, p)| t.kind != TokenKind::Break && &t.folded == p)
    }

    fn match_role(&self, tokens: &[Token], i: usize) -> Option<(usize, GovRole)> {
        self.roles
            .iter()
            .find(|(p, _)| Self::phrase_at(tokens, i, p))
            .map(|(p, role)| (i + p.len(), *role))
    }

    fn match_honorific(&self, tokens: &[Token], i: usize) -> Option<usize> {
        self.honorifics
            .iter()
            .find(|p| Self::phrase_at(tokens, i, p))
            .map(|p| i + p.len())
    }

    fn is_particle(&self, t: &Token) -> bool {
        t.kind == TokenKind::Word && self.particles.contains(&t.folded)
    }

    fn is_name_shaped(&self, t: &Token) -> bool {
        t.kind == TokenKind::Word && t.capitalized && !t.all_upper && !self.is_particle(t)
    }

    /// Index of the last token of a name starting at `j`.
    fn name_at(&self, tokens: &[Token], j: usize) -> Option<usize> {
        let mut last_core = None;
        let mut k = j;
        while k < tokens.len() && k - j < self.max_name_tokens {
            let t = &tokens[k];
            if self.is_name_shaped(t) {
                last_core = Some(k);
            } else if !self.is_particle(t) {
                break;
            }
            k += 1;
        }
        last_core
    }

    /// First and last token of a portfolio phrase introduced by a connector at `j`.
    fn portfolio_at(&self, tokens: &[Token], j: usize) -> Option<(usize, usize)> {
        let connector = tokens.get(j)?;
        if connector.kind != TokenKind::Word || !self.connectors.contains(&connector.folded) {
            return None;
        }
        let head = |t: &Token| t.kind == TokenKind::Word && t.capitalized;
        let first = j + 1;
        if !tokens.get(first).is_some_and(head) {
            return None;
        }
        let mut last = first;
        let mut k = first + 1;
        while k < tokens.len() {
            if head(&tokens[k]) {
                last = k;
                k += 1;
            } else if tokens[k].kind != TokenKind::Break
                && self.joiners.contains(&tokens[k].folded)
                && tokens.get(k + 1).is_some_and(head)
            {
                last = k + 1;
                k += 2;
            } else {
                break;
            }
        }
        Some((first, last))
    }
}

pub fn detect_role_mentions(scene_text: &str, config: &PatternConfig) -> Vec<RoleMention> {
    MentionDetector::new(config).detect(scene_text)
}
