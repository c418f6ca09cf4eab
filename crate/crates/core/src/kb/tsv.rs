use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use super::{IngestReport, KbBuilder, KbError, KnowledgeBase};
use crate::Triple;

fn io_error(path: &Path) -> impl Fn(io::Error) -> KbError + '_ {
    move |source| KbError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_line(line: &str) -> Option<Triple> {
    let mut parts = line.split('\t');
    let (s, p, o) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() {
        return None;
    }
    Triple::new(s, p, o).ok()
}

fn is_skippable(line: &str) -> bool {
    line.trim().is_empty() || line.starts_with('#')
}

/// Loads `subject<TAB>predicate<TAB>object` lines, plus an optional
/// `entity<TAB>category` file.
pub fn ingest_tsv(path: &Path, category_path: Option<&Path>) -> Result<(KnowledgeBase, IngestReport), KbError> {
    let triples = BufReader::new(File::open(path).map_err(io_error(path))?);
    let categories = match category_path {
        Some(cp) => Some((BufReader::new(File::open(cp).map_err(io_error(cp))?), cp)),
        None => None,
    };
    let (builder, report) = read_triples(triples, path)?;
    let mut builder = builder;
    if let Some((reader, cp)) = categories {
        read_categories(&mut builder, reader, cp)?;
    }
    Ok((builder.build(), report))
}

/// Reader-based variant of [`ingest_tsv`]; `name` is only used in errors.
pub fn ingest_tsv_reader<R: BufRead>(reader: R, name: &Path) -> Result<(KnowledgeBase, IngestReport), KbError> {
    let (b, report) = read_triples(reader, name)?;
    Ok((b.build(), report))
}

fn read_triples<R: BufRead>(reader: R, path: &Path) -> Result<(KbBuilder, IngestReport), KbError> {
    let mut builder = KnowledgeBase::builder();
    let mut report = IngestReport::default();
    for line in reader.lines() {
        let line = line.map_err(io_error(path))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if is_skippable(line) {
            continue;
        }
        report.lines += 1;
        match parse_line(line) {
            Some(t) => {
                if builder.add_triple(t) {
                    report.loaded += 1;
                } else {
                    report.duplicates += 1;
                }
            }
            None => report.malformed += 1,
        }
    }
    if report.malformed * 2 > report.lines {
        return Err(KbError::Format {
            path: path.display().to_string(),
            format: "TSV triple",
            reason: format!("{} of {} lines are malformed", report.malformed, report.lines),
        });
    }
    if report.malformed > 0 {
        log::warn!("{}: skipped {} malformed lines", path.display(), report.malformed);
    }
    Ok((builder, report))
}

fn read_categories<R: BufRead>(builder: &mut KbBuilder, reader: R, path: &Path) -> Result<(), KbError> {
    let mut malformed = 0usize;
    for line in reader.lines() {
        let line = line.map_err(io_error(path))?;
        if is_skippable(&line) {
            continue;
        }
        match line.trim_end_matches('\r').split_once('\t') {
            Some((e, c)) if !e.trim().is_empty() && !c.trim().is_empty() && !c.contains('\t') => {
                builder.add_category(e.trim(), c.trim());
            }
            _ => malformed += 1,
        }
    }
    if malformed > 0 {
        log::warn!("{}: skipped {malformed} malformed category lines", path.display());
    }
    Ok(())
}

/// Writes the triple set in ingestion order. Re-ingesting the output yields
/// the same triples.
pub fn export_tsv<W: Write>(kb: &KnowledgeBase, mut w: W) -> io::Result<()> {
    for t in kb.triples() {
        writeln!(w, "{}\t{}\t{}", t.subject, t.predicate, t.object)?;
    }
    w.flush()
}
