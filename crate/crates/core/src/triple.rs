use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TripleError {
    #[error("empty {0} in triple")]
    EmptyField(&'static str),
}

/// An ordered `(subject, predicate, object)` fact.
///
/// Fields are stored trimmed and are never empty. On the wire a triple is a
/// three-element JSON array `["s", "p", "o"]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

impl Triple {
    pub fn new(
        subject: impl AsRef<str>,
        predicate: impl AsRef<str>,
        object: impl AsRef<str>,
    ) -> Result<Self, TripleError> {
        let field = |v: &str, name| {
            let v = v.trim();
            if v.is_empty() {
                Err(TripleError::EmptyField(name))
            } else {
                Ok(v.to_string())
            }
        };
        Ok(Self {
            subject: field(subject.as_ref(), "subject")?,
            predicate: field(predicate.as_ref(), "predicate")?,
            object: field(object.as_ref(), "object")?,
        })
    }

    pub fn fields(&self) -> [&str; 3] {
        [&self.subject, &self.predicate, &self.object]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}, {:?}]", self.subject, self.predicate, self.object)
    }
}

impl Serialize for Triple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.fields().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [s, p, o] = <[String; 3]>::deserialize(deserializer)?;
        Triple::new(s, p, o).map_err(serde::de::Error::custom)
    }
}

/// Serialises triples as `[["s", "p", "o"], ...]`, JSON-escaped.
pub fn format_triple_list(triples: &[Triple]) -> String {
    let items: Vec<String> = triples
        .iter()
        .map(|t| {
            let [s, p, o] = t.fields().map(|f| serde_json::to_string(f).expect("string serialises"));
            format!("[{s}, {p}, {o}]")
        })
        .collect();
    format!("[{}]", items.join(", "))
}

/// Inverse of [`format_triple_list`].
pub fn parse_triple_list(text: &str) -> Result<Vec<Triple>, serde_json::Error> {
    serde_json::from_str(text.trim())
}
