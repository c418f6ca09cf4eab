//! Binary snapshot of a built [`KnowledgeBase`].
//!
//! Layout (little endian): magic `KGF1`, `u16` format version, `u64` triple
//! count followed by the triples, `u64` entity count followed by
//! `(label, external id)` records, then `u64` category count followed by each
//! category name and its `u32`-counted member list in index order. Strings
//! are `u32` byte length + UTF-8. Indexes are rebuilt on load.

use std::io::{self, Read, Write};

use super::{KbError, KnowledgeBase};
use crate::Triple;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"KGF1";
pub const SNAPSHOT_VERSION: u16 = 1;

fn put_str<W: Write>(w: &mut W, s: &str) -> io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn get_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn get_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn get_str<R: Read>(r: &mut R) -> Result<String, KbError> {
    let len = get_u32(r).map_err(truncated)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf).map_err(truncated)?;
    String::from_utf8(buf).map_err(|e| KbError::Snapshot(e.to_string()))
}

fn truncated(e: io::Error) -> KbError {
    KbError::Snapshot(format!("truncated snapshot ({e})"))
}

pub fn write_snapshot<W: Write>(kb: &KnowledgeBase, mut w: W) -> io::Result<()> {
    w.write_all(SNAPSHOT_MAGIC)?;
    w.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
    w.write_all(&(kb.triples.len() as u64).to_le_bytes())?;
    for t in &kb.triples {
        for f in t.fields() {
            put_str(&mut w, f)?;
        }
    }
    // Entities in label order keeps snapshots byte-stable across runs.
    let mut entities: Vec<_> = kb.entity_table.values().collect();
    entities.sort_by(|a, b| a.label.cmp(&b.label));
    w.write_all(&(entities.len() as u64).to_le_bytes())?;
    for e in entities {
        put_str(&mut w, &e.label)?;
        put_str(&mut w, e.external_id.as_deref().unwrap_or(""))?;
    }
    // member order drives seed sampling, so it is stored as is
    let mut categories: Vec<_> = kb.category_index.iter().collect();
    categories.sort_by(|a, b| a.0.cmp(b.0));
    w.write_all(&(categories.len() as u64).to_le_bytes())?;
    for (name, members) in categories {
        put_str(&mut w, name)?;
        w.write_all(&(members.len() as u32).to_le_bytes())?;
        for m in members {
            put_str(&mut w, m)?;
        }
    }
    w.flush()
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<KnowledgeBase, KbError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(truncated)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(KbError::Snapshot("bad magic bytes".into()));
    }
    let mut v = [0u8; 2];
    r.read_exact(&mut v).map_err(truncated)?;
    let version = u16::from_le_bytes(v);
    if version != SNAPSHOT_VERSION {
        return Err(KbError::Snapshot(format!(
            "unsupported snapshot version {version} (expected {SNAPSHOT_VERSION})"
        )));
    }
    let mut b = KnowledgeBase::builder();
    let n = get_u64(&mut r).map_err(truncated)?;
    for _ in 0..n {
        let (s, p, o) = (get_str(&mut r)?, get_str(&mut r)?, get_str(&mut r)?);
        let t = Triple::new(s, p, o).map_err(|e| KbError::Snapshot(e.to_string()))?;
        b.add_triple(t);
    }
    let n = get_u64(&mut r).map_err(truncated)?;
    for _ in 0..n {
        let label = get_str(&mut r)?;
        let id = get_str(&mut r)?;
        b.add_entity(&label, (!id.is_empty()).then_some(id.as_str()));
    }
    let n = get_u64(&mut r).map_err(truncated)?;
    for _ in 0..n {
        let name = get_str(&mut r)?;
        let members = get_u32(&mut r).map_err(truncated)?;
        for _ in 0..members {
            b.add_category(&get_str(&mut r)?, &name);
        }
    }
    Ok(b.build())
}
