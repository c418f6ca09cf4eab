//! The seven deterministic triple rules, evaluated in order r1..r7.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::Triple;

const SHIPPED_PREDICATES: &str = include_str!("../../data/predicate_blacklist.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// Predicate is on the predicate blacklist.
    R1,
    /// Predicate contains `ID`.
    R2,
    /// Object contains an http(s) URL scheme.
    R3,
    /// Some character belongs to a non-Latin script block.
    R4,
    /// Subject or object is a namespaced wiki page.
    R5,
    /// Subject or object starts with a raw Q-identifier.
    R6,
    /// Subject equals object.
    R7,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = *self as u8 + 1;
        write!(f, "r{n}")
    }
}

/// Outcome of [`RuleSet::apply`]; `failed_rule` is the first rule violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub failed_rule: Option<Rule>,
}

impl FilterVerdict {
    pub const PASS: Self = Self { failed_rule: None };

    pub fn passed(&self) -> bool {
        self.failed_rule.is_none()
    }
}

/// Unicode blocks rejected by r4.
///
/// Chinese: CJK Unified Ideographs and Extension A. Arabic/Persian: Arabic,
/// Arabic Supplement, Arabic Extended-A, Arabic Presentation Forms A and B.
/// Cyrillic and Cyrillic Supplement. Bopomofo and Bopomofo Extended.
/// Katakana and Katakana Phonetic Extensions. Greek and Coptic, Greek
/// Extended. Bengali. Hebrew.
pub const NON_LATIN_BLOCKS: &[(char, char, &str)] = &[
    ('\u{0370}', '\u{03FF}', "Greek and Coptic"),
    ('\u{0400}', '\u{04FF}', "Cyrillic"),
    ('\u{0500}', '\u{052F}', "Cyrillic Supplement"),
    ('\u{0590}', '\u{05FF}', "Hebrew"),
    ('\u{0600}', '\u{06FF}', "Arabic"),
    ('\u{0750}', '\u{077F}', "Arabic Supplement"),
    ('\u{08A0}', '\u{08FF}', "Arabic Extended-A"),
    ('\u{0980}', '\u{09FF}', "Bengali"),
    ('\u{1F00}', '\u{1FFF}', "Greek Extended"),
    ('\u{30A0}', '\u{30FF}', "Katakana"),
    ('\u{3100}', '\u{312F}', "Bopomofo"),
    ('\u{31A0}', '\u{31BF}', "Bopomofo Extended"),
    ('\u{31F0}', '\u{31FF}', "Katakana Phonetic Extensions"),
    ('\u{3400}', '\u{4DBF}', "CJK Unified Ideographs Extension A"),
    ('\u{4E00}', '\u{9FFF}', "CJK Unified Ideographs"),
    ('\u{FB50}', '\u{FDFF}', "Arabic Presentation Forms-A"),
    ('\u{FE70}', '\u{FEFF}', "Arabic Presentation Forms-B"),
];

pub fn is_non_latin(c: char) -> bool {
    NON_LATIN_BLOCKS.iter().any(|&(lo, hi, _)| (lo..=hi).contains(&c))
}

const NAMESPACE_PREFIXES: [&str; 4] = ["Category:", "Template:", "Wikipedia:", "Portal:"];

fn is_namespaced(s: &str) -> bool {
    NAMESPACE_PREFIXES.iter().any(|p| s.starts_with(p))
}

/// `Q` followed by at least five digits at the start of the string.
fn starts_with_qid(s: &str) -> bool {
    s.strip_prefix('Q')
        .is_some_and(|rest| rest.bytes().take_while(u8::is_ascii_digit).count() >= 5)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    predicate_blacklist: Vec<String>,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::from_predicate_list(SHIPPED_PREDICATES)
    }
}

impl RuleSet {
    /// Parses a predicate list: one predicate per line, `#` comments allowed.
    pub fn from_predicate_list(text: &str) -> Self {
        let predicate_blacklist = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
        Self { predicate_blacklist }
    }

    /// The rule set with the shipped predicate list, built once.
    pub fn shipped() -> &'static RuleSet {
        static SHIPPED: OnceLock<RuleSet> = OnceLock::new();
        SHIPPED.get_or_init(RuleSet::default)
    }

    pub fn extend_predicates<I: IntoIterator<Item = String>>(&mut self, extra: I) {
        for p in extra {
            if !self.predicate_blacklist.contains(&p) {
                self.predicate_blacklist.push(p);
            }
        }
    }

    pub fn predicate_blacklist(&self) -> &[String] {
        &self.predicate_blacklist
    }

    pub fn check(&self, rule: Rule, t: &Triple) -> bool {
        match rule {
            Rule::R1 => !self.predicate_blacklist.contains(&t.predicate),
            Rule::R2 => !t.predicate.contains("ID"),
            Rule::R3 => !(t.object.contains("http://") || t.object.contains("https://")),
            Rule::R4 => !t.fields().iter().any(|f| f.chars().any(is_non_latin)),
            Rule::R5 => !(is_namespaced(&t.subject) || is_namespaced(&t.object)),
            Rule::R6 => !(starts_with_qid(&t.subject) || starts_with_qid(&t.object)),
            Rule::R7 => t.subject != t.object,
        }
    }

    pub fn apply(&self, t: &Triple) -> FilterVerdict {
        const ORDER: [Rule; 7] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::R7];
        FilterVerdict {
            failed_rule: ORDER.into_iter().find(|&r| !self.check(r, t)),
        }
    }
}

/// Applies the shipped rule set.
pub fn apply_rules(t: &Triple) -> FilterVerdict {
    RuleSet::shipped().apply(t)
}
