//! Independent re-verification of extracted subgraphs.
//!
//! Every property is recomputed from the knowledge base and the subgraph
//! record alone; nothing here goes through [`super::Extractor`].

use std::collections::HashMap;

use serde::Serialize;

use super::Subgraph;
use crate::filter::{no_expand, sp_unique_with, Blacklist, Rule, RuleSet};
use crate::kb::KnowledgeBase;
use crate::Triple;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    HopsLengthMismatch { triples: usize, hops: usize },
    UnknownTriple { triple: Triple },
    DuplicateTriple { triple: Triple },
    RuleFailed { triple: Triple, rule: Rule },
    NotSpUnique { triple: Triple },
    BlacklistedSubject { triple: Triple },
    MBound { subject: String, count: usize, m: usize },
    HopOutOfRange { triple: Triple, hop: usize, k: usize },
    Disconnected { triple: Triple, hop: usize },
    Unreachable { entity: String },
}

pub fn verify_subgraph(kb: &KnowledgeBase, blacklist: &Blacklist, rules: &RuleSet, sg: &Subgraph) -> Vec<Violation> {
    let mut v = Vec::new();
    if sg.triples.len() != sg.hops.len() {
        v.push(Violation::HopsLengthMismatch {
            triples: sg.triples.len(),
            hops: sg.hops.len(),
        });
        return v;
    }

    let mut seen: HashMap<&Triple, usize> = HashMap::new();
    let mut per_subject: HashMap<&str, usize> = HashMap::new();
    // earliest hop at which each entity appears as an object
    let mut object_hop: HashMap<&str, usize> = HashMap::new();
    for (t, &h) in sg.triples.iter().zip(&sg.hops) {
        let e = object_hop.entry(&t.object).or_insert(h);
        *e = (*e).min(h);
    }

    for (t, &hop) in sg.triples.iter().zip(&sg.hops) {
        if seen.insert(t, hop).is_some() {
            v.push(Violation::DuplicateTriple { triple: t.clone() });
        }
        if !kb.contains(t) {
            v.push(Violation::UnknownTriple { triple: t.clone() });
        }
        if let Some(rule) = rules.apply(t).failed_rule {
            v.push(Violation::RuleFailed {
                triple: t.clone(),
                rule,
            });
        }
        if !sp_unique_with(rules, kb, &t.subject, &t.predicate) {
            v.push(Violation::NotSpUnique { triple: t.clone() });
        }
        if !no_expand(blacklist, &t.subject, kb.external_id(&t.subject)) {
            v.push(Violation::BlacklistedSubject { triple: t.clone() });
        }
        if hop == 0 || hop > sg.k {
            v.push(Violation::HopOutOfRange {
                triple: t.clone(),
                hop,
                k: sg.k,
            });
        }
        let connected = if t.subject == sg.seed {
            hop == 1
        } else {
            object_hop.get(t.subject.as_str()).is_some_and(|&h| h < hop)
        };
        if !connected {
            v.push(Violation::Disconnected { triple: t.clone(), hop });
        }
        *per_subject.entry(&t.subject).or_default() += 1;
    }

    let mut over: Vec<_> = per_subject.into_iter().filter(|&(_, c)| c > sg.m).collect();
    over.sort();
    for (s, count) in over {
        v.push(Violation::MBound {
            subject: s.to_string(),
            count,
            m: sg.m,
        });
    }

    let reachable = sg.reachable();
    for e in sg.entities() {
        if !reachable.contains(e) {
            v.push(Violation::Unreachable { entity: e.to_string() });
        }
    }
    v
}
