//! Adapter from line-delimited Wikidata entity dumps onto the triple store.
//!
//! The dump is scanned twice: the first pass builds an id → label table for
//! items and properties in the requested language, the second emits
//! `(entity label, property label, value label)` triples from truthy
//! statements.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use serde_json::Value;

use super::{IngestReport, KbError, KnowledgeBase, HUMAN_CATEGORY};
use crate::Triple;

const INSTANCE_OF: &str = "P31";
const HUMAN: &str = "Q5";

/// Strips the array punctuation official dumps wrap around each document.
fn document(line: &str) -> Option<&str> {
    let line = line.trim();
    let line = line.strip_suffix(',').unwrap_or(line).trim_end();
    match line {
        "" | "[" | "]" => None,
        _ => Some(line),
    }
}

fn label<'a>(doc: &'a Value, language: &str) -> Option<&'a str> {
    doc.get("labels")?
        .get(language)?
        .get("value")?
        .as_str()
        .filter(|s| !s.trim().is_empty())
}

fn entity_id(value: &Value) -> Option<String> {
    if let Some(id) = value.get("id").and_then(Value::as_str) {
        return Some(id.to_string());
    }
    let n = value.get("numeric-id")?.as_u64()?;
    let prefix = match value.get("entity-type").and_then(Value::as_str) {
        Some("property") => 'P',
        _ => 'Q',
    };
    Some(format!("{prefix}{n}"))
}

/// Truthy statements: the preferred-rank ones if any exist, else normal rank.
fn truthy(claims: &[Value]) -> impl Iterator<Item = &Value> {
    let rank = |c: &Value| c.get("rank").and_then(Value::as_str).unwrap_or("normal").to_string();
    let wanted = if claims.iter().any(|c| rank(c) == "preferred") {
        "preferred"
    } else {
        "normal"
    };
    claims.iter().filter(move |c| rank(c) == wanted)
}

enum Resolved {
    Label(String),
    Unresolved,
}

fn resolve_value(snak: &Value, labels: &HashMap<String, String>, language: &str) -> Resolved {
    if snak.get("snaktype").and_then(Value::as_str) != Some("value") {
        return Resolved::Unresolved;
    }
    let Some(dv) = snak.get("datavalue") else {
        return Resolved::Unresolved;
    };
    let value = &dv["value"];
    let resolved = match dv.get("type").and_then(Value::as_str) {
        Some("wikibase-entityid") => entity_id(value).and_then(|id| labels.get(&id).cloned()),
        Some("string") => value.as_str().map(str::to_string),
        Some("monolingualtext") => (value.get("language").and_then(Value::as_str) == Some(language))
            .then(|| value.get("text").and_then(Value::as_str).map(str::to_string))
            .flatten(),
        Some("quantity") => value
            .get("amount")
            .and_then(Value::as_str)
            .map(|a| a.trim_start_matches('+').to_string()),
        Some("time") => value.get("time").and_then(Value::as_str).map(|t| {
            let t = t.trim_start_matches('+');
            t.split('T').next().unwrap_or(t).to_string()
        }),
        _ => None,
    };
    match resolved {
        Some(s) if !s.trim().is_empty() => Resolved::Label(s),
        _ => Resolved::Unresolved,
    }
}

fn is_human(doc: &Value) -> bool {
    doc.get("claims")
        .and_then(|c| c.get(INSTANCE_OF))
        .and_then(Value::as_array)
        .is_some_and(|claims| {
            truthy(claims).any(|c| {
                c.pointer("/mainsnak/datavalue/value")
                    .and_then(entity_id)
                    .is_some_and(|id| id == HUMAN)
            })
        })
}

/// Ingests a Wikidata JSON dump, keeping labels in `language`.
pub fn ingest_wikidata_json(path: &Path, language: &str) -> Result<(KnowledgeBase, IngestReport), KbError> {
    let open = || -> io::Result<BufReader<File>> { Ok(BufReader::new(File::open(path)?)) };
    ingest_wikidata_reader(open, path, language)
}

/// Same as [`ingest_wikidata_json`] with a caller-supplied opener; the input
/// is opened twice.
pub fn ingest_wikidata_reader<R, F>(
    open: F,
    path: &Path,
    language: &str,
) -> Result<(KnowledgeBase, IngestReport), KbError>
where
    R: BufRead,
    F: Fn() -> io::Result<R>,
{
    let io_err = |source| KbError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut report = IngestReport::default();

    // Pass 1: id -> label for items and properties.
    let mut labels: HashMap<String, String> = HashMap::new();
    let mut parsed = 0usize;
    for line in open().map_err(io_err)?.lines() {
        let line = line.map_err(io_err)?;
        let Some(doc) = document(&line) else { continue };
        report.lines += 1;
        let Ok(doc) = serde_json::from_str::<Value>(doc) else {
            report.malformed += 1;
            continue;
        };
        let Some(id) = doc.get("id").and_then(Value::as_str) else {
            report.malformed += 1;
            continue;
        };
        parsed += 1;
        if let Some(l) = label(&doc, language) {
            labels.insert(id.to_string(), l.trim().to_string());
        }
    }
    if parsed == 0 {
        return Err(KbError::Format {
            path: path.display().to_string(),
            format: "Wikidata JSON",
            reason: "no entity documents parsed".into(),
        });
    }

    // Pass 2: emit triples for items.
    let mut builder = KnowledgeBase::builder();
    for line in open().map_err(io_err)?.lines() {
        let line = line.map_err(io_err)?;
        let Some(doc) = document(&line) else { continue };
        let Ok(doc) = serde_json::from_str::<Value>(doc) else {
            continue;
        };
        let Some(id) = doc.get("id").and_then(Value::as_str) else {
            continue;
        };
        if doc.get("type").and_then(Value::as_str) == Some("property") || id.starts_with('P') {
            continue;
        }
        let Some(subject) = labels.get(id) else {
            report.skipped_values += 1;
            continue;
        };
        builder.add_entity(subject, Some(id));
        report.entities += 1;
        if is_human(&doc) {
            builder.add_category(subject, HUMAN_CATEGORY);
        }
        let Some(claims) = doc.get("claims").and_then(Value::as_object) else {
            continue;
        };
        for (pid, statements) in claims {
            let Some(statements) = statements.as_array() else {
                continue;
            };
            let predicate = labels.get(pid);
            for st in truthy(statements) {
                let (Some(predicate), Resolved::Label(object)) =
                    (predicate, resolve_value(&st["mainsnak"], &labels, language))
                else {
                    report.skipped_values += 1;
                    continue;
                };
                match Triple::new(subject, predicate, &object) {
                    Ok(t) => {
                        if builder.add_triple(t) {
                            report.loaded += 1;
                        } else {
                            report.duplicates += 1;
                        }
                    }
                    Err(_) => report.skipped_values += 1,
                }
            }
        }
    }
    Ok((builder.build(), report))
}
