//! Inline filtering operators: rule-based triple filtering, subject–predicate
//! uniqueness and the entity-expansion blacklist.

mod blacklist;
mod rules;

use std::collections::HashMap;

use crate::kb::KnowledgeBase;
use crate::Triple;

pub use blacklist::{Blacklist, BlacklistEntry};
pub use rules::{apply_rules, is_non_latin, FilterVerdict, Rule, RuleSet, NON_LATIN_BLOCKS};

/// False iff `subject` has at least two rule-passing triples with `predicate`
/// and distinct objects anywhere in the knowledge base.
pub fn sp_unique_with(rules: &RuleSet, kb: &KnowledgeBase, subject: &str, predicate: &str) -> bool {
    let mut first: Option<&str> = None;
    for t in kb.outgoing(subject) {
        if t.predicate != predicate || !rules.apply(t).passed() {
            continue;
        }
        match first {
            None => first = Some(&t.object),
            Some(o) if o != t.object => return false,
            Some(_) => {}
        }
    }
    true
}

pub fn sp_unique(kb: &KnowledgeBase, subject: &str, predicate: &str) -> bool {
    sp_unique_with(RuleSet::shipped(), kb, subject, predicate)
}

/// True iff the entity may be expanded.
pub fn no_expand(blacklist: &Blacklist, label: &str, external_id: Option<&str>) -> bool {
    !blacklist.contains(label, external_id)
}

/// Outgoing triples of `subject` that pass the rules and whose predicate is
/// subject-unique, in ingestion order. Does not consult the blacklist.
pub fn rule_and_sp_filtered<'kb>(rules: &RuleSet, kb: &'kb KnowledgeBase, subject: &str) -> Vec<&'kb Triple> {
    let passing: Vec<&Triple> = kb
        .outgoing(subject)
        .into_iter()
        .filter(|t| rules.apply(t).passed())
        .collect();
    let mut objects: HashMap<&str, (&str, bool)> = HashMap::new();
    for t in &passing {
        objects
            .entry(t.predicate.as_str())
            .and_modify(|(o, multi)| *multi |= *o != t.object)
            .or_insert((t.object.as_str(), false));
    }
    passing
        .into_iter()
        .filter(|t| !objects[t.predicate.as_str()].1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(s, p, o).unwrap()
    }

    #[test]
    fn sp_unique_cases() {
        let kb = KnowledgeBase::from_triples([
            t("US", "diplomatic relation", "France"),
            t("US", "diplomatic relation", "Italy"),
            t("US", "capital", "Washington, D.C."),
            t("X", "official website", "https://x.org"),
            t("X", "official website", "x.org"),
        ]);
        assert!(!sp_unique(&kb, "US", "diplomatic relation"));
        assert!(sp_unique(&kb, "US", "capital"));
        // the URL object fails r3, leaving one rule-passing object
        assert!(sp_unique(&kb, "X", "official website"));
        assert!(sp_unique(&kb, "nobody", "anything"));
    }

    #[test]
    fn no_expand_cases() {
        let shipped = Blacklist::shipped();
        assert!(!no_expand(&shipped, "left", Some("Q13196750")));
        assert!(no_expand(&shipped, "Albert Einstein", None));
        let empty = Blacklist::new();
        for e in ["left", "human", "anything"] {
            assert!(no_expand(&empty, e, None));
        }
    }

    #[test]
    fn filtered_matches_definition() {
        let kb = KnowledgeBase::from_triples([
            t("s", "a", "1"),
            t("s", "a", "2"),
            t("s", "b", "3"),
            t("s", "c", "https://u"),
            t("s", "c", "4"),
            t("s", "d", "s"),
        ]);
        let got: Vec<_> = rule_and_sp_filtered(RuleSet::shipped(), &kb, "s")
            .into_iter()
            .map(|t| t.object.as_str())
            .collect();
        assert_eq!(got, ["3", "4"]);
    }
}
