use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::corpus::{MetadataFilter, PaperRecord, Venue, YearSpec};
use crate::llm::{extract_json, render_prompt, LanguageModel, TemplateName, INTENT_PLAN};
use crate::text::tokenize;
use crate::{Error, Result};

/// Results per sub-query unless the plan says otherwise.
pub const DEFAULT_K: usize = 10;
/// Largest accepted deviation of the declared weight sum from 1.
pub const WEIGHT_TOLERANCE: f64 = 0.05;

/// A record field that carries its own vector in the retrieval index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchField {
    AbstractSummary,
    Methods,
    Keywords,
    Datasets,
    Metrics,
    Architecture,
    LossFunction,
    Limitations,
}

impl SearchField {
    pub const ALL: [SearchField; 8] = [
        SearchField::AbstractSummary,
        SearchField::Methods,
        SearchField::Keywords,
        SearchField::Datasets,
        SearchField::Metrics,
        SearchField::Architecture,
        SearchField::LossFunction,
        SearchField::Limitations,
    ];

    pub fn key(self) -> &'static str {
        match self {
            SearchField::AbstractSummary => "abstract_summary",
            SearchField::Methods => "methods",
            SearchField::Keywords => "keywords",
            SearchField::Datasets => "datasets",
            SearchField::Metrics => "metrics",
            SearchField::Architecture => "architecture",
            SearchField::LossFunction => "loss_function",
            SearchField::Limitations => "limitations",
        }
    }

    /// The record's text for this field. The summary falls back to the
    /// original abstract; lists are joined with "; ".
    pub fn record_text(self, r: &PaperRecord) -> String {
        match self {
            SearchField::AbstractSummary => r.embedding_abstract().to_string(),
            SearchField::Methods => r.methods.clone(),
            SearchField::Keywords => r.keywords.join("; "),
            SearchField::Datasets => r.datasets.join("; "),
            SearchField::Metrics => r.metrics.join("; "),
            SearchField::Architecture => r.architecture.clone(),
            SearchField::LossFunction => r.loss_function.clone(),
            SearchField::Limitations => r.limitations.join("; "),
        }
    }
}

impl fmt::Display for SearchField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for SearchField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        SearchField::ALL
            .iter()
            .copied()
            .find(|f| f.key() == s)
            .ok_or_else(|| Error::validation("vector_search_plan", format!("unknown field {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub field: SearchField,
    pub weight: f64,
}

/// A validated search plan: metadata constraints, per-field query text and
/// field weights summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryPlan {
    pub metadata: MetadataFilter,
    pub field_texts: BTreeMap<SearchField, String>,
    pub vector_search_plan: Vec<PlanEntry>,
    pub k: usize,
}

impl QueryPlan {
    /// The plan in the intent-schema JSON shape accepted by
    /// [`parse_query_plan`].
    pub fn to_intent_json(&self) -> Value {
        let text = |f: SearchField| self.field_texts.get(&f).cloned().unwrap_or_default();
        let list = |f: SearchField| -> Vec<String> {
            self.field_texts
                .get(&f)
                .map(|t| t.split("; ").filter(|s| !s.is_empty()).map(String::from).collect())
                .unwrap_or_default()
        };
        let year: Vec<Value> = match &self.metadata.years {
            None => Vec::new(),
            Some(YearSpec::Range { from, to }) => vec![Value::String(format!("{from}-{to}"))],
            Some(YearSpec::Set(ys)) => ys.iter().map(|y| json!(y)).collect(),
        };
        let plan: Vec<Value> = self
            .vector_search_plan
            .iter()
            .map(|e| json!({"field": e.field.key(), "weight": e.weight}))
            .collect();
        json!({
            "conference": self.metadata.conferences,
            "year": year,
            "paper_name": self.metadata.paper_names,
            "authors": self.metadata.authors,
            "keywords": list(SearchField::Keywords),
            "keywords_explanation": {},
            "abstract_summary": text(SearchField::AbstractSummary),
            "methods": text(SearchField::Methods),
            "architecture": text(SearchField::Architecture),
            "loss_function": text(SearchField::LossFunction),
            "datasets": list(SearchField::Datasets),
            "metrics": list(SearchField::Metrics),
            "limitations": list(SearchField::Limitations),
            "vector_search_plan": plan,
            "k": self.k,
        })
    }
}

/// A plan together with the adjustments made while validating it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedPlan {
    pub plan: QueryPlan,
    pub warnings: Vec<String>,
}

/// Parses and validates an intent-schema JSON object.
pub fn parse_query_plan(json_text: &str) -> Result<ParsedPlan> {
    let value: Value = serde_json::from_str(json_text).map_err(|e| crate::corpus::json_error(json_text, &e))?;
    plan_from_value(&value)
}

fn strings(v: Option<&Value>, field: &str) -> Result<Vec<String>> {
    match v {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::String(s)) => Ok(if s.trim().is_empty() {
            Vec::new()
        } else {
            vec![s.trim().to_string()]
        }),
        Some(Value::Array(items)) => items
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.trim().to_string()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(Error::validation(field, "expected a list of strings")),
            })
            .filter(|s| !matches!(s, Ok(s) if s.is_empty()))
            .collect(),
        Some(_) => Err(Error::validation(field, "expected a string or a list of strings")),
    }
}

fn parse_year(s: &str) -> Result<i32> {
    s.trim()
        .parse::<i32>()
        .map_err(|_| Error::validation("year", format!("cannot read year {s:?}")))
}

/// Integers form a set; a single "YYYY-YYYY" string is a range.
fn years(v: Option<&Value>) -> Result<Option<YearSpec>> {
    let items: Vec<Value> = match v {
        None | Some(Value::Null) => return Ok(None),
        Some(Value::Array(a)) => a.clone(),
        Some(other) => vec![other.clone()],
    };
    let mut set = BTreeSet::new();
    let mut ranges = Vec::new();
    for item in &items {
        match item {
            Value::Number(n) => {
                let y = n
                    .as_i64()
                    .and_then(|y| i32::try_from(y).ok())
                    .ok_or_else(|| Error::validation("year", format!("bad year {n}")))?;
                set.insert(y);
            }
            Value::String(s) if s.trim().is_empty() => {}
            Value::String(s) => match s.trim().split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (parse_year(a)?, parse_year(b)?);
                    if a > b {
                        return Err(Error::validation("year", format!("empty range {s:?}")));
                    }
                    ranges.push((a, b));
                }
                None => {
                    set.insert(parse_year(s)?);
                }
            },
            _ => return Err(Error::validation("year", "expected years or \"YYYY-YYYY\" ranges")),
        }
    }
    Ok(match (ranges.len(), set.is_empty()) {
        (0, true) => None,
        (0, false) => Some(YearSpec::Set(set)),
        (1, true) => Some(YearSpec::Range {
            from: ranges[0].0,
            to: ranges[0].1,
        }),
        _ => {
            for (a, b) in ranges {
                set.extend(a..=b);
            }
            Some(YearSpec::Set(set))
        }
    })
}

fn weight_entries(v: Option<&Value>, warnings: &mut Vec<String>) -> Result<Vec<(SearchField, f64)>> {
    let bad = |m: &str| Error::validation("vector_search_plan", m.to_string());
    let pairs: Vec<(String, &Value)> = match v {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Object(m)) => m.iter().map(|(k, w)| (k.clone(), w)).collect(),
        Some(Value::Array(items)) => items
            .iter()
            .map(|item| {
                let field = item
                    .get("field")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("each entry needs a \"field\" string"))?;
                let w = item.get("weight").ok_or_else(|| bad("each entry needs a \"weight\""))?;
                Ok((field.to_string(), w))
            })
            .collect::<Result<_>>()?,
        Some(_) => return Err(bad("expected a list of {field, weight} entries")),
    };
    let mut out: Vec<(SearchField, f64)> = Vec::new();
    for (name, w) in pairs {
        let w = w.as_f64().ok_or_else(|| bad("weights must be numbers"))?;
        if !(0.0..=1.0).contains(&w) {
            return Err(bad(&format!("weight {w} of {name} is outside [0, 1]")));
        }
        let Ok(field) = name.parse::<SearchField>() else {
            warnings.push(format!("dropped unknown search field {name:?}"));
            continue;
        };
        match out.iter_mut().find(|(f, _)| *f == field) {
            Some(e) => {
                e.1 += w;
                warnings.push(format!("merged repeated search field {field}"));
            }
            None => out.push((field, w)),
        }
    }
    Ok(out)
}

/// Validates an intent-schema object into a plan.
///
/// The declared weights must sum to 1 within [`WEIGHT_TOLERANCE`]; planned
/// fields without query text are then dropped and the rest renormalized.
pub fn plan_from_value(value: &Value) -> Result<ParsedPlan> {
    let obj: &Map<String, Value> = value
        .as_object()
        .ok_or_else(|| Error::validation("plan", "expected a JSON object"))?;
    let mut warnings = Vec::new();

    let mut conferences = Vec::new();
    for c in strings(obj.get("conference"), "conference")? {
        conferences.push(c.parse::<Venue>()?.code().to_string());
    }
    let metadata = MetadataFilter {
        conferences,
        years: years(obj.get("year"))?,
        authors: strings(obj.get("authors"), "authors")?,
        paper_names: strings(obj.get("paper_name"), "paper_name")?,
        ..MetadataFilter::default()
    };

    let mut field_texts = BTreeMap::new();
    for f in SearchField::ALL {
        let text = strings(obj.get(f.key()), f.key())?.join("; ");
        if !text.trim().is_empty() {
            field_texts.insert(f, text);
        }
    }

    let declared = weight_entries(obj.get("vector_search_plan"), &mut warnings)?;
    let sum: f64 = declared.iter().map(|(_, w)| w).sum();
    if libm::fabs(sum - 1.0) > WEIGHT_TOLERANCE {
        return Err(Error::validation(
            "vector_search_plan",
            format!("weights sum to {sum}, expected 1 within {WEIGHT_TOLERANCE}"),
        ));
    }
    let mut entries = Vec::new();
    for (field, weight) in declared {
        if !field_texts.contains_key(&field) {
            warnings.push(format!("dropped search field {field} with no query text"));
        } else if weight > 0.0 {
            entries.push(PlanEntry { field, weight });
        }
    }
    let kept: f64 = entries.iter().map(|e| e.weight).sum();
    if entries.is_empty() || kept <= 0.0 {
        return Err(Error::validation("vector_search_plan", "no searchable fields"));
    }
    if libm::fabs(kept - 1.0) > 1e-12 {
        warnings.push(format!("renormalized search weights from sum {kept}"));
        for e in &mut entries {
            e.weight /= kept;
        }
    }

    let k = match obj.get("k") {
        None | Some(Value::Null) => DEFAULT_K,
        Some(v) => v
            .as_u64()
            .filter(|&k| k > 0)
            .ok_or_else(|| Error::validation("k", "expected a positive integer"))? as usize,
    };
    Ok(ParsedPlan {
        plan: QueryPlan {
            metadata,
            field_texts,
            vector_search_plan: entries,
            k,
        },
        warnings,
    })
}

/// One sub-question with its plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubQuery {
    pub index: usize,
    pub text: String,
    pub plan: QueryPlan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub sub_queries: Vec<SubQuery>,
    pub warnings: Vec<String>,
}

/// Plan used without a model: the question searched against the summary
/// and methods fields with equal weight, its tokens as keyword text.
pub fn fallback_plan(question: &str, k: usize) -> QueryPlan {
    let q = question.trim().to_string();
    let mut field_texts = BTreeMap::new();
    field_texts.insert(SearchField::AbstractSummary, q.clone());
    field_texts.insert(SearchField::Methods, q);
    let tokens = tokenize(question);
    if !tokens.is_empty() {
        field_texts.insert(SearchField::Keywords, tokens.join("; "));
    }
    QueryPlan {
        metadata: MetadataFilter::default(),
        field_texts,
        vector_search_plan: vec![
            PlanEntry {
                field: SearchField::AbstractSummary,
                weight: 0.5,
            },
            PlanEntry {
                field: SearchField::Methods,
                weight: 0.5,
            },
        ],
        k,
    }
}

/// Splits `question` into planned sub-queries through `model`, or returns
/// the single fallback sub-query when there is no model or its answer is
/// unusable. Only an empty question is an error.
pub fn decompose_query(model: Option<&dyn LanguageModel>, question: &str, k: usize) -> Result<Decomposition> {
    if question.trim().is_empty() {
        return Err(Error::validation("question", "empty question"));
    }
    let fallback = |warnings: Vec<String>| Decomposition {
        sub_queries: vec![SubQuery {
            index: 0,
            text: question.trim().to_string(),
            plan: fallback_plan(question, k),
        }],
        warnings,
    };
    let Some(model) = model else {
        return Ok(fallback(Vec::new()));
    };
    let prompt = render_prompt(&INTENT_PLAN, &[("question", question)])?;
    let reply = match model.complete(TemplateName::IntentPlan, &prompt) {
        Ok(r) => r,
        Err(e) => return Ok(fallback(vec![format!("query planning failed: {e}")])),
    };
    let items = match extract_json(&reply) {
        Some(Value::Array(items)) => items,
        Some(obj @ Value::Object(_)) => vec![obj],
        _ => {
            return Ok(fallback(vec![
                "query planner returned no JSON; using keyword plan".into()
            ]))
        }
    };
    let mut warnings = Vec::new();
    let mut sub_queries = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let mut item = item.clone();
        if let Some(o) = item.as_object_mut() {
            o.entry("k").or_insert(json!(k));
        }
        match plan_from_value(&item) {
            Ok(parsed) => {
                let text = item
                    .get("sub_question")
                    .and_then(Value::as_str)
                    .filter(|s| !s.trim().is_empty())
                    .unwrap_or(question)
                    .trim()
                    .to_string();
                warnings.extend(parsed.warnings.into_iter().map(|w| format!("sub-query {i}: {w}")));
                sub_queries.push(SubQuery {
                    index: sub_queries.len(),
                    text,
                    plan: parsed.plan,
                });
            }
            Err(e) => warnings.push(format!("sub-query {i} rejected: {e}")),
        }
    }
    if sub_queries.is_empty() {
        warnings.push("no usable sub-query plans; using keyword plan".into());
        let mut d = fallback(Vec::new());
        d.warnings = warnings;
        return Ok(d);
    }
    Ok(Decomposition { sub_queries, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::GatewayFailure;

    fn plan(text: &str) -> Result<ParsedPlan> {
        parse_query_plan(text)
    }

    #[test]
    fn accepted_verbatim() {
        let p = plan(
            r#"{"abstract_summary":"gesture synthesis","methods":"diffusion for gestures",
                "vector_search_plan":[{"field":"abstract_summary","weight":0.6},{"field":"methods","weight":0.4}]}"#,
        )
        .unwrap();
        assert!(p.warnings.is_empty());
        assert_eq!(
            p.plan.vector_search_plan,
            vec![
                PlanEntry {
                    field: SearchField::AbstractSummary,
                    weight: 0.6
                },
                PlanEntry {
                    field: SearchField::Methods,
                    weight: 0.4
                },
            ]
        );
        assert_eq!(p.plan.k, DEFAULT_K);
    }

    #[test]
    fn overweight_rejected() {
        let e = plan(
            r#"{"abstract_summary":"a","methods":"b",
                "vector_search_plan":[{"field":"abstract_summary","weight":0.6},{"field":"methods","weight":0.6}]}"#,
        )
        .unwrap_err();
        assert_eq!(e.field(), Some("vector_search_plan"));
    }

    #[test]
    fn small_drift_renormalized() {
        let p = plan(
            r#"{"abstract_summary":"a","methods":"b",
                "vector_search_plan":[{"field":"abstract_summary","weight":0.5},{"field":"methods","weight":0.53}]}"#,
        )
        .unwrap();
        let sum: f64 = p.plan.vector_search_plan.iter().map(|e| e.weight).sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn unknown_venue() {
        let e = plan(r#"{"conference":["SIGGRAPH"],"abstract_summary":"a","vector_search_plan":[{"field":"abstract_summary","weight":1}]}"#)
            .unwrap_err();
        assert_eq!(e.field(), Some("conference"));
    }

    #[test]
    fn empty_fields_dropped() {
        let p = plan(
            r#"{"abstract_summary":"a","datasets":[],
                "vector_search_plan":[{"field":"abstract_summary","weight":0.7},{"field":"datasets","weight":0.3}]}"#,
        )
        .unwrap();
        assert_eq!(
            p.plan.vector_search_plan,
            vec![PlanEntry {
                field: SearchField::AbstractSummary,
                weight: 1.0
            }]
        );
        let e = plan(r#"{"vector_search_plan":[{"field":"methods","weight":1}]}"#).unwrap_err();
        assert!(format!("{e}").contains("no searchable fields"));
    }

    #[test]
    fn years_and_metadata() {
        let p = plan(
            r#"{"conference":["neurips","ICLR"],"year":["2021-2023"],"authors":["Ng"],
                "abstract_summary":"a","vector_search_plan":[{"field":"abstract_summary","weight":1}]}"#,
        )
        .unwrap();
        assert_eq!(p.plan.metadata.conferences, vec!["NeurIPS", "ICLR"]);
        assert_eq!(p.plan.metadata.years, Some(YearSpec::Range { from: 2021, to: 2023 }));
        let p = plan(r#"{"year":[2020, 2022],"abstract_summary":"a","vector_search_plan":[{"field":"abstract_summary","weight":1}]}"#)
            .unwrap();
        assert_eq!(
            p.plan.metadata.years,
            Some(YearSpec::Set([2020, 2022].into_iter().collect()))
        );
    }

    #[test]
    fn intent_json_round_trip() {
        let p = plan(
            r#"{"conference":["CVPR"],"year":["2020-2024"],"keywords":["diffusion","gesture"],
                "abstract_summary":"a","datasets":["BEAT","TED"],"limitations":"slow",
                "vector_search_plan":[{"field":"abstract_summary","weight":0.25},{"field":"datasets","weight":0.5},{"field":"keywords","weight":0.25}],"k":3}"#,
        )
        .unwrap()
        .plan;
        let again = plan_from_value(&p.to_intent_json()).unwrap().plan;
        assert_eq!(p, again);
    }

    struct Reply(&'static str);

    impl LanguageModel for Reply {
        fn complete(&self, _: TemplateName, _: &str) -> core::result::Result<String, GatewayFailure> {
            Ok(self.0.to_string())
        }
    }

    #[test]
    fn fallback_without_model() {
        let d = decompose_query(None, "diffusion gesture generation", 10).unwrap();
        assert_eq!(d.sub_queries.len(), 1);
        let e = &d.sub_queries[0].plan.vector_search_plan;
        assert_eq!(e.iter().map(|e| e.weight).collect::<Vec<_>>(), vec![0.5, 0.5]);
        assert_eq!(
            d.sub_queries[0].plan.field_texts[&SearchField::Keywords],
            "diffusion; gesture; generation"
        );
        assert!(decompose_query(None, "  ", 10).is_err());
    }

    #[test]
    fn two_plans_in_order() {
        let m = Reply(
            r#"Plans: [{"sub_question":"first","methods":"x","vector_search_plan":[{"field":"methods","weight":1}]},
                       {"sub_question":"second","datasets":["y"],"vector_search_plan":[{"field":"datasets","weight":1}]}]"#,
        );
        let d = decompose_query(Some(&m), "q", 5).unwrap();
        assert_eq!(d.sub_queries.len(), 2);
        assert_eq!((d.sub_queries[0].index, d.sub_queries[0].text.as_str()), (0, "first"));
        assert_eq!((d.sub_queries[1].index, d.sub_queries[1].text.as_str()), (1, "second"));
        assert_eq!(d.sub_queries[1].plan.k, 5);
    }

    #[test]
    fn invalid_reply_falls_back() {
        let d = decompose_query(Some(&Reply("not json")), "graph pooling", 10).unwrap();
        assert_eq!(d.sub_queries.len(), 1);
        assert_eq!(d.warnings.len(), 1);
        assert_eq!(d.sub_queries[0].plan, fallback_plan("graph pooling", 10));
    }
}
