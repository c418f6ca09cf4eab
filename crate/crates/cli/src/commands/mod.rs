pub mod assemble;
pub mod check;
pub mod compare;
pub mod curate;
pub mod evaluate;
pub mod extract;
pub mod generate;
pub mod ingest;
pub mod stats;

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kgforge::filter::Blacklist;
use kgforge::kb::{self, KnowledgeBase, SNAPSHOT_MAGIC};

use crate::manifest::{default_manifest_path, write_manifest, RunManifest};
use crate::settings::Settings;

pub struct Ctx {
    pub settings: Settings,
    pub jobs: usize,
    pub manifest: Option<PathBuf>,
}

impl Ctx {
    pub fn start(&self, subcommand: &str) -> RunManifest {
        let mut m = RunManifest::new(subcommand);
        m.config.insert("jobs".into(), self.jobs.to_string());
        m
    }

    pub fn finish(&self, mut m: RunManifest, output: &Path, is_dir: bool) -> Result<()> {
        m.config.extend(self.settings.resolved());
        let path = self
            .manifest
            .clone()
            .unwrap_or_else(|| default_manifest_path(output, is_dir));
        write_manifest(&path, &mut m)
    }
}

/// Errors that map to a specific process exit code.
#[derive(Debug)]
pub enum Exit {
    Usage(String),
    Partial { what: String, report: PathBuf },
    BackendUnavailable(String),
}

impl Exit {
    pub fn code(&self) -> u8 {
        match self {
            Exit::Usage(_) => 2,
            Exit::Partial { .. } => 3,
            Exit::BackendUnavailable(_) => 4,
        }
    }
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exit::Usage(msg) => write!(f, "{msg}"),
            Exit::Partial { what, report } => write!(f, "{what}; see {}", report.display()),
            Exit::BackendUnavailable(msg) => write!(f, "backend unavailable: {msg}"),
        }
    }
}

impl std::error::Error for Exit {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Exit::Usage(msg.into()).into()
}

/// Reads a snapshot, or a TSV triple file if the magic bytes are absent.
pub fn load_kb(path: &Path) -> Result<KnowledgeBase> {
    let mut f = File::open(path).with_context(|| format!("opening knowledge base {}", path.display()))?;
    let mut magic = [0u8; 4];
    let is_snapshot = f.read_exact(&mut magic).is_ok() && &magic == SNAPSHOT_MAGIC;
    if is_snapshot {
        let f = File::open(path)?;
        Ok(kb::read_snapshot(BufReader::new(f))?)
    } else {
        Ok(kb::ingest_tsv(path, None)?.0)
    }
}

/// The given blacklist file, or the shipped seed list.
pub fn load_blacklist(path: Option<&Path>) -> Result<Blacklist> {
    match path {
        Some(p) => Blacklist::load(p).with_context(|| format!("reading blacklist {}", p.display())),
        None => Ok(Blacklist::shipped()),
    }
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
