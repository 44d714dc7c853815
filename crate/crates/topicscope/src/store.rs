//! On-disk corpus store: `records.jsonl`, `stats.json`, `errors.log`.

use std::fs;
use std::path::{Path, PathBuf};

use topicscope_core::corpus::{first_duplicate_id, parse_record, serialize_record, CorpusStats, PaperRecord};
use topicscope_core::Error;

use crate::error::{AppError, Result};
use crate::fsutil::{read_text, write_file, write_json};

pub const RECORDS_FILE: &str = "records.jsonl";
pub const STATS_FILE: &str = "stats.json";
pub const ERRORS_FILE: &str = "errors.log";

/// An input line that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineFailure {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct CorpusStore {
    dir: PathBuf,
    records: Vec<PaperRecord>,
    stats: CorpusStats,
}

impl CorpusStore {
    pub fn new(dir: impl Into<PathBuf>, records: Vec<PaperRecord>) -> Self {
        let stats = CorpusStats::compute(&records);
        CorpusStore {
            dir: dir.into(),
            records,
            stats,
        }
    }

    /// Loads the records of an ingested store.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let path = dir.join(RECORDS_FILE);
        if !path.exists() {
            return Err(AppError::MissingStage {
                what: "records",
                stage: "ingest",
            });
        }
        let text = read_text(&path)?;
        let (records, failures) = parse_lines(&text);
        if let Some(f) = failures.first() {
            return Err(AppError::Core(Error::Parse {
                offset: 0,
                message: format!("{} line {}: {}", path.display(), f.line, f.message),
            }));
        }
        Ok(CorpusStore::new(dir, records))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn records(&self) -> &[PaperRecord] {
        &self.records
    }

    pub fn records_mut(&mut self) -> &mut [PaperRecord] {
        &mut self.records
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn ids(&self) -> Vec<String> {
        self.records.iter().map(|r| r.record_id.clone()).collect()
    }

    /// Writes `records.jsonl` and `stats.json`.
    pub fn save(&mut self) -> Result<()> {
        self.stats = CorpusStats::compute(&self.records);
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serialize_record(r));
            out.push('\n');
        }
        write_file(&self.dir.join(RECORDS_FILE), out.as_bytes())?;
        write_json(&self.dir.join(STATS_FILE), &self.stats)
    }
}

/// Parses line-delimited records. Blank lines are skipped and are not
/// counted as records or failures.
pub fn parse_lines(text: &str) -> (Vec<PaperRecord>, Vec<LineFailure>) {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line) {
            Ok(r) => records.push(r),
            Err(e) => failures.push(LineFailure {
                line: i + 1,
                message: e.to_string(),
            }),
        }
    }
    (records, failures)
}

#[derive(Debug)]
pub struct IngestReport {
    pub store: CorpusStore,
    pub failures: Vec<LineFailure>,
}

/// Reads a record file into a fresh store at `store_dir`, replacing any
/// records already there. Bad lines are reported in `errors.log`; a
/// repeated record id rejects the whole file.
pub fn ingest_corpus(input: &Path, store_dir: &Path) -> Result<IngestReport> {
    let text = read_text(input)?;
    let (records, failures) = parse_lines(&text);
    if let Some(id) = first_duplicate_id(&records) {
        return Err(AppError::Core(Error::Validation {
            field: "record_id".into(),
            message: format!("duplicate record id {id}"),
        }));
    }
    fs::create_dir_all(store_dir).map_err(|e| AppError::io(store_dir, e))?;
    let mut log = String::new();
    for f in &failures {
        log.push_str(&format!("line {}: {}\n", f.line, f.message));
    }
    write_file(&store_dir.join(ERRORS_FILE), log.as_bytes())?;
    let mut store = CorpusStore::new(store_dir, records);
    store.save()?;
    Ok(IngestReport { store, failures })
}
