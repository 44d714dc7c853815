//! Paper-record data model, record parsing and metadata filtering.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{Map, Value};

use crate::{Error, Result};

/// `topic_id` of records that belong to no topic.
pub const NOISE_TOPIC: i64 = -1;

/// `field_positioning` label that marks a benchmark or dataset paper.
pub const BENCHMARK_POSITIONING: &str = "Benchmark / Dataset Contribution";
/// `novelty_type` label that marks a benchmark or dataset paper.
pub const BENCHMARK_NOVELTY: &str = "Benchmark / Dataset";

/// One paper's structured profile.
///
/// Field names and their serialized order follow the record schema; fields
/// not known to this crate are kept in `extra` and written back after the
/// known ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperRecord {
    pub record_id: String,
    pub paper_name: String,
    pub authors: Vec<String>,
    pub conference: String,
    pub year: i32,
    pub citations: u64,
    pub keywords: Vec<String>,
    pub keywords_description: BTreeMap<String, String>,
    pub abstract_ori: String,
    pub abstract_summary: String,
    pub problem_statement: String,
    pub contributions: Vec<String>,
    pub methods: String,
    pub architecture: String,
    pub loss_function: String,
    pub training_setup: String,
    pub datasets: Vec<String>,
    pub metrics: Vec<String>,
    pub gpu_info: String,
    pub limitations: Vec<String>,
    pub field_positioning: String,
    pub novelty_type: String,
    pub institution: Vec<String>,
    pub topic_id: i64,
    pub topic_name: String,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl PaperRecord {
    /// A record with only the required fields set; everything else empty.
    pub fn new(paper_name: impl Into<String>, year: i32) -> Self {
        let paper_name = paper_name.into();
        let mut record = PaperRecord {
            record_id: String::new(),
            paper_name,
            authors: Vec::new(),
            conference: String::new(),
            year,
            citations: 0,
            keywords: Vec::new(),
            keywords_description: BTreeMap::new(),
            abstract_ori: String::new(),
            abstract_summary: String::new(),
            problem_statement: String::new(),
            contributions: Vec::new(),
            methods: String::new(),
            architecture: String::new(),
            loss_function: String::new(),
            training_setup: String::new(),
            datasets: Vec::new(),
            metrics: Vec::new(),
            gpu_info: String::new(),
            limitations: Vec::new(),
            field_positioning: String::new(),
            novelty_type: String::new(),
            institution: Vec::new(),
            topic_id: NOISE_TOPIC,
            topic_name: String::new(),
            extra: Map::new(),
        };
        record.record_id = derived_record_id(&record.conference, record.year, &record.paper_name);
        record
    }

    /// Text used for document embeddings and topic vocabularies: the
    /// summary abstract, or the original abstract when no summary exists.
    pub fn embedding_abstract(&self) -> &str {
        if self.abstract_summary.trim().is_empty() {
            &self.abstract_ori
        } else {
            &self.abstract_summary
        }
    }

    /// `title + ". " + abstract`, the text behind document embeddings and
    /// topic vocabularies.
    pub fn document_text(&self) -> String {
        format!("{}. {}", self.paper_name, self.embedding_abstract())
    }

    /// True when either parsed label marks the paper as a benchmark or
    /// dataset contribution.
    pub fn is_benchmark(&self) -> bool {
        self.field_positioning.trim() == BENCHMARK_POSITIONING || self.novelty_type.trim() == BENCHMARK_NOVELTY
    }

    /// Builds a record from a decoded JSON object, validating and
    /// defaulting each schema field.
    pub fn from_map(mut map: Map<String, Value>) -> Result<Self> {
        let paper_name = match map.remove("paper_name") {
            Some(Value::String(s)) if !s.trim().is_empty() => s,
            Some(Value::String(_)) | Some(Value::Null) | None => {
                return Err(Error::validation("paper_name", "missing or empty"))
            }
            Some(_) => return Err(Error::validation("paper_name", "expected a string")),
        };
        let year = match map.remove("year") {
            None | Some(Value::Null) => return Err(Error::validation("year", "missing")),
            Some(v) => integer(&v, "year")?,
        };
        let year = i32::try_from(year).map_err(|_| Error::validation("year", "out of range"))?;

        let citations = match map.remove("citations") {
            None | Some(Value::Null) => 0,
            Some(v) => {
                let c = integer(&v, "citations")?;
                u64::try_from(c).map_err(|_| Error::validation("citations", "negative"))?
            }
        };
        let topic_id = match map.remove("topic_id") {
            None | Some(Value::Null) => NOISE_TOPIC,
            Some(v) => integer(&v, "topic_id")?,
        };
        if topic_id < NOISE_TOPIC {
            return Err(Error::validation("topic_id", "below the noise sentinel"));
        }

        let conference = text(&mut map, "conference")?;
        let keywords = list(&mut map, "keywords")?;
        let description = match map.remove("keywords_description") {
            Some(v) => Some(v),
            None => map.remove("keywords_explanation"),
        };
        let keywords_description = description_map(description, &keywords)?;

        let record_id = match map.remove("record_id") {
            None | Some(Value::Null) => derived_record_id(&conference, year, &paper_name),
            Some(Value::String(s)) if !s.is_empty() => s,
            Some(Value::Number(n)) => n.to_string(),
            Some(_) => return Err(Error::validation("record_id", "expected a non-empty string")),
        };

        Ok(PaperRecord {
            record_id,
            paper_name,
            authors: list(&mut map, "authors")?,
            conference,
            year,
            citations,
            keywords,
            keywords_description,
            abstract_ori: text(&mut map, "abstract_ori")?,
            abstract_summary: text(&mut map, "abstract_summary")?,
            problem_statement: text(&mut map, "problem_statement")?,
            contributions: list(&mut map, "contributions")?,
            methods: text(&mut map, "methods")?,
            architecture: text(&mut map, "architecture")?,
            loss_function: text(&mut map, "loss_function")?,
            training_setup: text(&mut map, "training_setup")?,
            datasets: list(&mut map, "datasets")?,
            metrics: list(&mut map, "metrics")?,
            gpu_info: text(&mut map, "gpu_info")?,
            limitations: list(&mut map, "limitations")?,
            field_positioning: text(&mut map, "field_positioning")?,
            novelty_type: text(&mut map, "novelty_type")?,
            institution: list(&mut map, "institution")?,
            topic_id,
            topic_name: text(&mut map, "topic_name")?,
            extra: map,
        })
    }
}

impl<'de> Deserialize<'de> for PaperRecord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let map = Map::<String, Value>::deserialize(deserializer)?;
        PaperRecord::from_map(map).map_err(serde::de::Error::custom)
    }
}

/// Stable identifier for records that arrive without one: FNV-1a over
/// venue, year and title.
pub fn derived_record_id(conference: &str, year: i32, paper_name: &str) -> String {
    let key = format!("{}|{}|{}", conference.trim(), year, paper_name.trim());
    format!("r{:016x}", crate::text::fnv1a64(key.as_bytes()))
}

fn integer(v: &Value, field: &str) -> Result<i64> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .or_else(|| n.as_f64().filter(|f| libm::trunc(*f) == *f).map(|f| f as i64))
            .ok_or_else(|| Error::validation(field, "expected an integer")),
        Value::String(s) => s
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::validation(field, "expected an integer")),
        _ => Err(Error::validation(field, "expected an integer")),
    }
}

fn text(map: &mut Map<String, Value>, field: &str) -> Result<String> {
    match map.remove(field) {
        None | Some(Value::Null) => Ok(String::new()),
        Some(Value::String(s)) => Ok(s),
        Some(Value::Number(n)) => Ok(n.to_string()),
        Some(Value::Array(items)) => {
            let parts = items
                .into_iter()
                .map(|item| match item {
                    Value::String(s) => Ok(s),
                    _ => Err(Error::validation(field, "expected text")),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(parts.join("; "))
        }
        Some(_) => Err(Error::validation(field, "expected text")),
    }
}

fn list(map: &mut Map<String, Value>, field: &str) -> Result<Vec<String>> {
    match map.remove(field) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::String(s)) if s.trim().is_empty() => Ok(Vec::new()),
        Some(Value::String(s)) => Ok(alloc::vec![s]),
        Some(Value::Array(items)) => items
            .into_iter()
            .map(|item| match item {
                Value::String(s) => Ok(s),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(Error::validation(field, "expected a list of strings")),
            })
            .collect(),
        Some(_) => Err(Error::validation(field, "expected a list of strings")),
    }
}

fn description_map(v: Option<Value>, keywords: &[String]) -> Result<BTreeMap<String, String>> {
    const FIELD: &str = "keywords_description";
    match v {
        None | Some(Value::Null) => Ok(BTreeMap::new()),
        Some(Value::Object(obj)) => obj
            .into_iter()
            .map(|(k, v)| match v {
                Value::String(s) => Ok((k, s)),
                Value::Null => Ok((k, String::new())),
                _ => Err(Error::validation(FIELD, "expected string descriptions")),
            })
            .collect(),
        // Positional descriptions are keyed by the keyword at the same index.
        Some(Value::Array(items)) => items
            .into_iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::String(s) => {
                    let key = keywords.get(i).cloned().unwrap_or_else(|| i.to_string());
                    Ok((key, s))
                }
                _ => Err(Error::validation(FIELD, "expected string descriptions")),
            })
            .collect(),
        Some(_) => Err(Error::validation(FIELD, "expected an object")),
    }
}

/// Parses one JSON object into a validated record.
pub fn parse_record(json_text: &str) -> Result<PaperRecord> {
    let value: Value = serde_json::from_str(json_text).map_err(|e| json_error(json_text, &e))?;
    match value {
        Value::Object(map) => PaperRecord::from_map(map),
        _ => Err(Error::Parse {
            offset: json_text.len() - json_text.trim_start().len(),
            message: "expected a JSON object".to_owned(),
        }),
    }
}

/// Canonical single-line JSON form of a record.
pub fn serialize_record(record: &PaperRecord) -> String {
    serde_json::to_string(record).expect("records always serialize")
}

/// Converts a serde_json error position (1-based line/column) into a byte
/// offset within `text`.
pub(crate) fn json_error(text: &str, err: &serde_json::Error) -> Error {
    let mut offset = 0usize;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        if i + 1 == err.line() {
            offset += err.column().saturating_sub(1).min(line.len());
            break;
        }
        offset += line.len();
    }
    Error::Parse {
        offset,
        message: err.to_string(),
    }
}

/// The fixed set of accepted venue codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Venue {
    Aaai,
    Acl,
    Colm,
    Colt,
    CoRL,
    Cvpr,
    Eccv,
    Emnlp,
    Iccv,
    Iclr,
    Icml,
    Ijcai,
    Interspeech,
    Iwslt,
    Mlsys,
    Naacl,
    Ndss,
    NeurIps,
    Osdi,
    Uai,
    UsenixFast,
    UsenixSec,
}

impl Venue {
    pub const ALL: [Venue; 22] = [
        Venue::Aaai,
        Venue::Acl,
        Venue::Colm,
        Venue::Colt,
        Venue::CoRL,
        Venue::Cvpr,
        Venue::Eccv,
        Venue::Emnlp,
        Venue::Iccv,
        Venue::Iclr,
        Venue::Icml,
        Venue::Ijcai,
        Venue::Interspeech,
        Venue::Iwslt,
        Venue::Mlsys,
        Venue::Naacl,
        Venue::Ndss,
        Venue::NeurIps,
        Venue::Osdi,
        Venue::Uai,
        Venue::UsenixFast,
        Venue::UsenixSec,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Venue::Aaai => "AAAI",
            Venue::Acl => "ACL",
            Venue::Colm => "COLM",
            Venue::Colt => "COLT",
            Venue::CoRL => "CoRL",
            Venue::Cvpr => "CVPR",
            Venue::Eccv => "ECCV",
            Venue::Emnlp => "EMNLP",
            Venue::Iccv => "ICCV",
            Venue::Iclr => "ICLR",
            Venue::Icml => "ICML",
            Venue::Ijcai => "IJCAI",
            Venue::Interspeech => "INTERSPEECH",
            Venue::Iwslt => "IWSLT",
            Venue::Mlsys => "MLSYS",
            Venue::Naacl => "NAACL",
            Venue::Ndss => "NDSS",
            Venue::NeurIps => "NeurIPS",
            Venue::Osdi => "OSDI",
            Venue::Uai => "UAI",
            Venue::UsenixFast => "USENIX-Fast",
            Venue::UsenixSec => "USENIX-Sec",
        }
    }
}

impl fmt::Display for Venue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Venue {
    type Err = Error;

    /// Case-insensitive match against the venue codes.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Venue::ALL
            .iter()
            .copied()
            .find(|v| v.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::validation("conference", format!("unknown venue code {s:?}")))
    }
}

/// Year constraint of a metadata filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YearSpec {
    /// Inclusive range.
    Range {
        from: i32,
        to: i32,
    },
    Set(BTreeSet<i32>),
}

impl YearSpec {
    pub fn contains(&self, year: i32) -> bool {
        match self {
            YearSpec::Range { from, to } => (*from..=*to).contains(&year),
            YearSpec::Set(years) => years.contains(&year),
        }
    }
}

/// How keyword constraints compare against record keywords.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeywordMatch {
    /// Whole-term equality, ignoring case and surrounding whitespace.
    #[default]
    Exact,
    /// Case-insensitive substring, like author and title constraints.
    Substring,
}

/// Metadata constraints. Empty lists and `None` mean "unconstrained"; the
/// present constraints are combined by conjunction, and each list matches
/// when any of its entries matches.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetadataFilter {
    pub conferences: Vec<String>,
    pub years: Option<YearSpec>,
    pub authors: Vec<String>,
    pub paper_names: Vec<String>,
    pub keywords: Vec<String>,
    pub keyword_match: KeywordMatch,
}

impl MetadataFilter {
    pub fn is_empty(&self) -> bool {
        self.conferences.is_empty()
            && self.years.is_none()
            && self.authors.is_empty()
            && self.paper_names.is_empty()
            && self.keywords.is_empty()
    }

    /// Rejects venue codes outside the fixed list.
    pub fn validate(&self) -> Result<()> {
        for c in &self.conferences {
            c.parse::<Venue>()?;
        }
        Ok(())
    }

    fn compiled(&self) -> Result<CompiledFilter<'_>> {
        let venues = self
            .conferences
            .iter()
            .map(|c| c.parse::<Venue>())
            .collect::<Result<BTreeSet<_>>>()?;
        let lower = |xs: &[String]| -> Vec<String> {
            xs.iter()
                .map(|x| x.trim().to_lowercase())
                .filter(|x| !x.is_empty())
                .collect()
        };
        Ok(CompiledFilter {
            venues,
            years: self.years.as_ref(),
            authors: lower(&self.authors),
            paper_names: lower(&self.paper_names),
            keywords: lower(&self.keywords),
            keyword_match: self.keyword_match,
        })
    }
}

struct CompiledFilter<'a> {
    venues: BTreeSet<Venue>,
    years: Option<&'a YearSpec>,
    authors: Vec<String>,
    paper_names: Vec<String>,
    keywords: Vec<String>,
    keyword_match: KeywordMatch,
}

impl CompiledFilter<'_> {
    fn matches(&self, r: &PaperRecord) -> bool {
        if !self.venues.is_empty() {
            match r.conference.parse::<Venue>() {
                Ok(v) if self.venues.contains(&v) => {}
                _ => return false,
            }
        }
        if let Some(years) = self.years {
            if !years.contains(r.year) {
                return false;
            }
        }
        if !self.authors.is_empty() {
            let authors: Vec<String> = r.authors.iter().map(|a| a.to_lowercase()).collect();
            if !self
                .authors
                .iter()
                .any(|q| authors.iter().any(|a| a.contains(q.as_str())))
            {
                return false;
            }
        }
        if !self.paper_names.is_empty() {
            let title = r.paper_name.to_lowercase();
            if !self.paper_names.iter().any(|q| title.contains(q.as_str())) {
                return false;
            }
        }
        if !self.keywords.is_empty() {
            let kws: Vec<String> = r.keywords.iter().map(|k| k.trim().to_lowercase()).collect();
            let hit = self.keywords.iter().any(|q| {
                kws.iter().any(|k| match self.keyword_match {
                    KeywordMatch::Exact => k == q,
                    KeywordMatch::Substring => k.contains(q.as_str()),
                })
            });
            if !hit {
                return false;
            }
        }
        true
    }
}

/// Indices of the records matching `filter`, in input order.
pub fn filter_indices(records: &[PaperRecord], filter: &MetadataFilter) -> Result<Vec<usize>> {
    let compiled = filter.compiled()?;
    Ok(records
        .iter()
        .enumerate()
        .filter(|(_, r)| compiled.matches(r))
        .map(|(i, _)| i)
        .collect())
}

/// Records matching `filter`, in input order.
pub fn filter_metadata<'a>(records: &'a [PaperRecord], filter: &MetadataFilter) -> Result<Vec<&'a PaperRecord>> {
    Ok(filter_indices(records, filter)?
        .into_iter()
        .map(|i| &records[i])
        .collect())
}

/// Per-year and per-venue record counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub total: usize,
    pub per_year: BTreeMap<i32, usize>,
    pub per_venue: BTreeMap<String, usize>,
}

impl CorpusStats {
    pub fn compute(records: &[PaperRecord]) -> Self {
        let mut stats = CorpusStats {
            total: records.len(),
            ..CorpusStats::default()
        };
        for r in records {
            *stats.per_year.entry(r.year).or_insert(0) += 1;
            *stats.per_venue.entry(r.conference.clone()).or_insert(0) += 1;
        }
        stats
    }

    /// Smallest and largest year present.
    pub fn year_range(&self) -> Option<(i32, i32)> {
        let min = *self.per_year.keys().next()?;
        let max = *self.per_year.keys().next_back()?;
        Some((min, max))
    }
}

/// Finds the first record id that occurs more than once.
pub fn first_duplicate_id(records: &[PaperRecord]) -> Option<&str> {
    let mut seen = BTreeSet::new();
    records
        .iter()
        .find(|r| !seen.insert(r.record_id.as_str()))
        .map(|r| r.record_id.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rec(name: &str, year: i32, venue: &str) -> PaperRecord {
        let mut r = PaperRecord::new(name, year);
        r.conference = venue.into();
        r.record_id = format!("{venue}-{year}-{name}");
        r
    }

    #[test]
    fn defaults_citations_and_topic() {
        let r = parse_record(r#"{"paper_name":"X","year":2023,"conference":"CVPR"}"#).unwrap();
        assert_eq!(r.citations, 0);
        assert_eq!(r.topic_id, NOISE_TOPIC);
        assert!(r.authors.is_empty());
        assert!(r.record_id.starts_with('r'));
    }

    #[test]
    fn missing_required_fields_are_named() {
        let e = parse_record(r#"{"year":2023}"#).unwrap_err();
        assert_eq!(e.field(), Some("paper_name"));
        let e = parse_record(r#"{"paper_name":"X"}"#).unwrap_err();
        assert_eq!(e.field(), Some("year"));
        let e = parse_record(r#"{"paper_name":"X","year":2023,"citations":-3}"#).unwrap_err();
        assert_eq!(e.field(), Some("citations"));
    }

    #[test]
    fn malformed_json_reports_offset() {
        let text = r#"{"paper_name": "X", "year": 20x3}"#;
        match parse_record(text).unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(&text[offset..offset + 1], "x"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn extra_fields_survive_reserialization() {
        let text = r#"{"paper_name":"X","year":2023,"review_score":{"mean":4.5,"n":[1,2]},"conference":"ICLR"}"#;
        let once = serialize_record(&parse_record(text).unwrap());
        let twice = serialize_record(&parse_record(&once).unwrap());
        assert_eq!(once, twice);
        assert!(once.contains(r#""review_score":{"mean":4.5,"n":[1,2]}"#));
    }

    #[test]
    fn keyword_explanation_alias_and_positional_descriptions() {
        let r = parse_record(
            r#"{"paper_name":"X","year":2021,"keywords":["gnn","rl"],"keywords_explanation":{"gnn":"graphs"}}"#,
        )
        .unwrap();
        assert_eq!(r.keywords_description.get("gnn").unwrap(), "graphs");
        let r = parse_record(
            r#"{"paper_name":"X","year":2021,"keywords":["gnn","rl"],"keywords_description":["graphs","agents"]}"#,
        )
        .unwrap();
        assert_eq!(r.keywords_description.get("rl").unwrap(), "agents");
    }

    #[test]
    fn venue_codes_parse_case_insensitively() {
        assert_eq!("neurips".parse::<Venue>().unwrap(), Venue::NeurIps);
        assert_eq!("USENIX-Sec".parse::<Venue>().unwrap().code(), "USENIX-Sec");
        assert!("SIGGRAPH".parse::<Venue>().is_err());
        assert_eq!(Venue::ALL.len(), 22);
    }

    #[test]
    fn empty_filter_is_identity() {
        let records = vec![rec("a", 2020, "CVPR"), rec("b", 2021, "ACL")];
        let out = filter_metadata(&records, &MetadataFilter::default()).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn year_filter_selects_year() {
        let records = vec![rec("a", 2022, "CVPR"), rec("b", 2023, "ACL"), rec("c", 2023, "ICML")];
        let f = MetadataFilter {
            years: Some(YearSpec::Set([2023].into_iter().collect())),
            ..Default::default()
        };
        let names: Vec<_> = filter_metadata(&records, &f)
            .unwrap()
            .iter()
            .map(|r| r.paper_name.as_str())
            .collect();
        assert_eq!(names, ["b", "c"]);
    }

    #[test]
    fn unknown_venue_in_filter_is_rejected() {
        let f = MetadataFilter {
            conferences: vec!["SIGGRAPH".into()],
            ..Default::default()
        };
        assert_eq!(filter_metadata(&[], &f).unwrap_err().field(), Some("conference"));
    }

    #[test]
    fn author_and_title_match_substrings() {
        let mut r = rec("Denoising Diffusion Models", 2022, "NeurIPS");
        r.authors = vec!["Jonathan Ho".into()];
        r.keywords = vec!["Diffusion".into()];
        let records = vec![r];
        let f = MetadataFilter {
            authors: vec!["ho".into()],
            paper_names: vec!["DIFFUSION".into()],
            keywords: vec!["diffusion".into()],
            ..Default::default()
        };
        assert_eq!(filter_metadata(&records, &f).unwrap().len(), 1);
        let f = MetadataFilter {
            keywords: vec!["diff".into()],
            ..Default::default()
        };
        assert!(filter_metadata(&records, &f).unwrap().is_empty());
        let f = MetadataFilter {
            keywords: vec!["diff".into()],
            keyword_match: KeywordMatch::Substring,
            ..Default::default()
        };
        assert_eq!(filter_metadata(&records, &f).unwrap().len(), 1);
    }

    #[test]
    fn stats_sum_to_total() {
        let records = vec![rec("a", 2020, "CVPR"), rec("b", 2020, "ACL"), rec("c", 2024, "ACL")];
        let s = CorpusStats::compute(&records);
        assert_eq!(s.per_year.values().sum::<usize>(), s.total);
        assert_eq!(s.year_range(), Some((2020, 2024)));
        assert_eq!(s.per_venue["ACL"], 2);
    }
}
