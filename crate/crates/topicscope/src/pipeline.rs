//! Pipeline stages over a store directory. Each mutating stage holds the
//! store lock and appends one manifest entry.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use topicscope_core::analytics::AnalyticsConfig;
use topicscope_core::cluster::{run_hdbscan, ClusterParams};
use topicscope_core::corpus::{PaperRecord, Venue};
use topicscope_core::llm::{parse_structured_response, render_prompt, LanguageModel, TemplateName, PAPER_PARSE};
use topicscope_core::retrieval::{
    assemble_evidence, build_field_index, decompose_query, parse_query_plan, retrieve, EvidenceBundle, SearchField,
    SubQuery, DEFAULT_K,
};
use topicscope_core::topics::{
    assign_topics, build_topic_tree, build_vocabulary, ctfidf_weights, name_topic, sample_abstracts, top_terms,
    TopicSignature, VocabularyFilters,
};
use topicscope_core::vectorize::{
    embed_corpus, reduce_dims, ReductionConfig, ReductionMethod, Space, VectorSet, DEFAULT_EMBED_DIM,
};

use crate::artifacts::*;
use crate::error::{AppError, Result};
use crate::fsutil::{read_json, read_text, write_file, write_json};
use crate::manifest::{RunManifest, StoreLock};
use crate::store::{ingest_corpus, CorpusStore, RECORDS_FILE};
use crate::tables::AnalyticsTables;
use crate::vectors::{import_vectors, load_vectors, write_vectors};

/// A model usable from several naming threads at once.
pub type SharedModel<'a> = &'a (dyn LanguageModel + Sync);

/// What a stage did, for the caller to print.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageReport {
    pub summary: String,
    pub warnings: Vec<String>,
}

pub fn ingest(input: &Path, store: &Path) -> Result<StageReport> {
    let _lock = StoreLock::acquire(store)?;
    let mut manifest = RunManifest::start("ingest", json!({"input": input.display().to_string()}));
    manifest.hash_input(input)?;
    let report = ingest_corpus(input, store)?;
    let warnings: Vec<String> = report
        .failures
        .iter()
        .map(|f| format!("line {}: {}", f.line, f.message))
        .collect();
    manifest.warnings = warnings.len();
    manifest.append(store)?;
    Ok(StageReport {
        summary: format!(
            "ingested {} records, {} failed lines",
            report.store.records().len(),
            warnings.len()
        ),
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorizeOptions {
    pub dims: usize,
    /// Embeddings to import instead of hashing the text.
    pub import: Option<PathBuf>,
    pub reduce: ReductionMethod,
    pub n_components: usize,
    pub seed: u64,
}

impl Default for VectorizeOptions {
    fn default() -> Self {
        VectorizeOptions {
            dims: DEFAULT_EMBED_DIM,
            import: None,
            reduce: ReductionMethod::Pca,
            n_components: 40,
            seed: 42,
        }
    }
}

pub fn vectorize(store_dir: &Path, opts: &VectorizeOptions) -> Result<StageReport> {
    let _lock = StoreLock::acquire(store_dir)?;
    let store = CorpusStore::open(store_dir)?;
    let mut manifest = RunManifest::start("vectorize", serde_json::to_value(opts).expect("options"));
    manifest.hash_input(&store_dir.join(RECORDS_FILE))?;
    let ids = store.ids();

    let embedded = match &opts.import {
        Some(path) => {
            manifest.hash_input(path)?;
            import_vectors(path, &ids)?
        }
        None => embed_corpus(
            store
                .records()
                .iter()
                .map(|r| (r.record_id.as_str(), r.paper_name.as_str(), r.embedding_abstract())),
            opts.dims,
        )?,
    };
    let (reduced, eigenvalues) = match &opts.reduce {
        ReductionMethod::Pca => {
            let cfg = ReductionConfig {
                method: ReductionMethod::Pca,
                n_components: opts.n_components,
                seed: opts.seed,
            };
            let r = reduce_dims(&embedded, &cfg)?;
            (r.vectors, r.model.eigenvalues.clone())
        }
        ReductionMethod::Import(path) => {
            let path = PathBuf::from(path);
            manifest.hash_input(&path)?;
            let loaded = load_vectors(&path, &ids, Space::Reduced)?;
            (merge_zero_text(loaded, &embedded)?, Vec::new())
        }
    };
    write_vectors(&store_dir.join(VECTORS_FILE), &embedded)?;
    write_vectors(&store_dir.join(REDUCED_FILE), &reduced)?;
    let zero_text = embedded.zero_text_flags().iter().filter(|&&z| z).count();
    let info = VectorizeInfo {
        dims: embedded.dim(),
        imported: opts.import.as_ref().map(|p| p.display().to_string()),
        reduce: opts.reduce.clone(),
        n_components: reduced.dim(),
        seed: opts.seed,
        reduced_dim: reduced.dim(),
        zero_text,
        eigenvalues,
    };
    write_json(&store_dir.join(VECTORIZE_FILE), &info)?;
    let warnings: Vec<String> = embedded
        .ids()
        .iter()
        .zip(embedded.zero_text_flags())
        .filter(|(_, &z)| z)
        .map(|(id, _)| format!("{id}: no text to embed; left out of clustering"))
        .collect();
    manifest.warnings = warnings.len();
    manifest.append(store_dir)?;
    Ok(StageReport {
        summary: format!(
            "embedded {} records in {} dims, reduced to {}",
            embedded.len(),
            embedded.dim(),
            reduced.dim()
        ),
        warnings,
    })
}

/// Carries zero-text flags of the embeddings over to imported reduced rows.
fn merge_zero_text(reduced: VectorSet, embedded: &VectorSet) -> Result<VectorSet> {
    let flags: Vec<bool> = reduced
        .zero_text_flags()
        .iter()
        .zip(embedded.zero_text_flags())
        .map(|(a, b)| *a || *b)
        .collect();
    let rows = reduced.rows().map(<[f64]>::to_vec).collect();
    Ok(VectorSet::new(
        reduced.ids().to_vec(),
        reduced.dim(),
        rows,
        flags,
        Space::Reduced,
    )?)
}

pub fn cluster(store_dir: &Path, params: &ClusterParams) -> Result<StageReport> {
    params.validate()?;
    let _lock = StoreLock::acquire(store_dir)?;
    let store = CorpusStore::open(store_dir)?;
    load_vectorize_info(store_dir)?;
    let path = store_dir.join(REDUCED_FILE);
    if !path.exists() {
        return Err(AppError::MissingStage {
            what: "vectors",
            stage: "vectorize",
        });
    }
    let mut manifest = RunManifest::start("cluster", serde_json::to_value(params).expect("params"));
    manifest.hash_input(&path)?;
    let reduced = load_vectors(&path, &store.ids(), Space::Reduced)?;
    let out = run_hdbscan(&reduced, params)?;
    write_json(
        &store_dir.join(CLUSTERING_FILE),
        &ClusteringFile::new(&out.clustering, &out.tree),
    )?;
    manifest.append(store_dir)?;
    Ok(StageReport {
        summary: format!(
            "{} clusters, {} noise points of {}",
            out.clustering.n_clusters(),
            out.clustering.noise_count(),
            out.clustering.labels.len()
        ),
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicsOptions {
    pub filters: VocabularyFilters,
    pub top_k: usize,
    pub use_llm: bool,
    /// Naming calls in flight at once.
    pub concurrency: usize,
    /// Description of the naming endpoint, kept in the run manifest.
    pub endpoint: Option<Value>,
}

impl Default for TopicsOptions {
    fn default() -> Self {
        TopicsOptions {
            filters: VocabularyFilters::default(),
            top_k: 10,
            use_llm: false,
            concurrency: 4,
            endpoint: None,
        }
    }
}

/// Names signatures on up to `concurrency` threads. Warnings come back in
/// topic order.
fn name_all(
    model: Option<SharedModel<'_>>,
    sigs: &mut [TopicSignature],
    samples: &[Vec<String>],
    concurrency: usize,
) -> Vec<String> {
    let slots: Vec<Mutex<(&mut TopicSignature, Option<String>)>> =
        sigs.iter_mut().map(|s| Mutex::new((s, None))).collect();
    let next = Mutex::new(0usize);
    std::thread::scope(|scope| {
        for _ in 0..concurrency.max(1).min(slots.len().max(1)) {
            scope.spawn(|| loop {
                let i = {
                    let mut n = next.lock().expect("counter");
                    let i = *n;
                    *n += 1;
                    i
                };
                let Some(slot) = slots.get(i) else { break };
                let mut slot = slot.lock().expect("slot");
                let s = samples.get(i).map(Vec::as_slice).unwrap_or(&[]);
                let m: Option<&dyn LanguageModel> = model.map(|m| m as &dyn LanguageModel);
                slot.1 = name_topic(m, slot.0, s);
            });
        }
    });
    slots
        .into_iter()
        .filter_map(|m| m.into_inner().expect("slot").1)
        .collect()
}

pub fn topics(store_dir: &Path, opts: &TopicsOptions, model: Option<SharedModel<'_>>) -> Result<StageReport> {
    let _lock = StoreLock::acquire(store_dir)?;
    let mut store = CorpusStore::open(store_dir)?;
    let cfile = load_clustering(store_dir)?;
    let mut manifest = RunManifest::start("topics", serde_json::to_value(opts).expect("options"));
    manifest.hash_input(&store_dir.join(CLUSTERING_FILE))?;
    manifest.hash_input(&store_dir.join(RECORDS_FILE))?;
    let clustering = cfile.clustering(&store.ids())?;
    let mut warnings = Vec::new();

    let docs: Vec<String> = store.records().iter().map(PaperRecord::document_text).collect();
    let vocab = build_vocabulary(&docs, &opts.filters)?;
    let mut sigs = ctfidf_weights(&clustering, &vocab, &docs)?;
    for s in &mut sigs {
        s.top_terms = top_terms(s, opts.top_k);
    }
    let abstracts: Vec<&str> = store.records().iter().map(PaperRecord::embedding_abstract).collect();
    let samples = sample_abstracts(&clustering, &abstracts);
    let model = match (opts.use_llm, model) {
        (true, None) => {
            warnings.push("no LLM endpoint configured; topics get keyword names".to_string());
            None
        }
        (true, m) => m,
        (false, _) => None,
    };
    warnings.extend(name_all(model, &mut sigs, &samples, opts.concurrency));

    let tree = build_topic_tree(&cfile.tree, &clustering, &sigs)?;
    tree.check_counts()?;
    assign_topics(store.records_mut(), &clustering, &tree)?;
    store.save()?;
    let file = TopicsFile {
        filters: opts.filters,
        vocabulary_size: vocab.len(),
        min_df: vocab.min_df,
        topics: TopicsFile::entries(&sigs, &clustering.sizes()),
    };
    write_json(&store_dir.join(TOPICS_FILE), &file)?;
    write_json(&store_dir.join(TOPIC_TREE_FILE), &tree)?;
    manifest.warnings = warnings.len();
    manifest.append(store_dir)?;
    Ok(StageReport {
        summary: format!("{} topics over {} terms", sigs.len(), vocab.len()),
        warnings,
    })
}

fn topic_names(store_dir: &Path) -> Result<BTreeMap<i64, String>> {
    Ok(load_topics(store_dir)?
        .topics
        .into_iter()
        .map(|t| (t.id, t.name))
        .collect())
}

/// Analytics config stored by the last `analyze`, or the defaults.
pub fn stored_analytics_config(store_dir: &Path) -> Result<AnalyticsConfig> {
    let path = store_dir.join(ANALYTICS_CONFIG_FILE);
    if path.exists() {
        read_json(&path)
    } else {
        Ok(AnalyticsConfig::default())
    }
}

pub fn analyze(store_dir: &Path, config: &AnalyticsConfig) -> Result<StageReport> {
    config.validate()?;
    let _lock = StoreLock::acquire(store_dir)?;
    let store = CorpusStore::open(store_dir)?;
    let names = topic_names(store_dir)?;
    let mut manifest = RunManifest::start("analyze", serde_json::to_value(config).expect("config"));
    manifest.hash_input(&store_dir.join(RECORDS_FILE))?;
    let tables = AnalyticsTables::compute(store.records(), &names, config)?;
    let dir = store_dir.join(ANALYTICS_DIR);
    for (name, bytes) in tables.csv_files() {
        write_file(&dir.join(name), &bytes)?;
    }
    write_json(&store_dir.join(ANALYTICS_CONFIG_FILE), config)?;
    let mut warnings = tables.compute.warnings.clone();
    if tables.compute.unresolved > 0 {
        warnings.push(format!(
            "{} compute records use GPU models without a conversion factor and were left out of totals",
            tables.compute.unresolved
        ));
    }
    manifest.warnings = warnings.len();
    manifest.append(store_dir)?;
    Ok(StageReport {
        summary: format!(
            "analyzed {} topics; tables in {}",
            tables.lifecycle.len(),
            dir.display()
        ),
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExportWhat {
    Lifecycle,
    Compute,
    Datasets,
    Institutions,
    Topics,
    Benchmark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    Csv,
    Json,
}

fn pretty(v: &impl Serialize) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

/// Renders one table from the store's current state.
pub fn export(store_dir: &Path, what: ExportWhat, format: ExportFormat) -> Result<Vec<u8>> {
    let _lock = StoreLock::acquire(store_dir)?;
    let store = CorpusStore::open(store_dir)?;
    let topics = load_topics(store_dir)?;
    if what == ExportWhat::Topics {
        return Ok(match format {
            ExportFormat::Csv => crate::tables::topics_csv(&topics.topics),
            ExportFormat::Json => pretty(&topics.topics),
        });
    }
    let names = topics.topics.iter().map(|t| (t.id, t.name.clone())).collect();
    let config = stored_analytics_config(store_dir)?;
    let t = AnalyticsTables::compute(store.records(), &names, &config)?;
    use crate::tables::*;
    Ok(match (what, format) {
        (ExportWhat::Lifecycle, ExportFormat::Csv) => lifecycle_csv(&t.lifecycle),
        (ExportWhat::Lifecycle, ExportFormat::Json) => pretty(&t.lifecycle),
        (ExportWhat::Compute, ExportFormat::Csv) => compute_csv(&t.compute),
        (ExportWhat::Compute, ExportFormat::Json) => pretty(&t.compute),
        (ExportWhat::Datasets, ExportFormat::Csv) => datasets_csv(&t.dataset_usage),
        (ExportWhat::Datasets, ExportFormat::Json) => pretty(&t.dataset_usage),
        (ExportWhat::Institutions, ExportFormat::Csv) => institutions_csv(&t.institutions),
        (ExportWhat::Institutions, ExportFormat::Json) => pretty(&t.institutions),
        (ExportWhat::Benchmark, ExportFormat::Csv) => benchmark_csv(&t.benchmark_share),
        (ExportWhat::Benchmark, ExportFormat::Json) => pretty(&t.benchmark_share),
        (ExportWhat::Topics, _) => unreachable!(),
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryOptions {
    pub plan: Option<PathBuf>,
    pub question: Option<String>,
    pub k: Option<usize>,
    pub use_llm: bool,
}

/// Answers a plan file or a free-text question with an evidence bundle.
pub fn query(
    store_dir: &Path,
    opts: &QueryOptions,
    model: Option<&dyn LanguageModel>,
) -> Result<(EvidenceBundle, Vec<String>)> {
    let _lock = StoreLock::acquire(store_dir)?;
    let store = CorpusStore::open(store_dir)?;
    let mut warnings = Vec::new();
    let (question, subs) = match (&opts.plan, &opts.question) {
        (Some(path), q) => {
            let parsed = parse_query_plan(&read_text(path)?)?;
            warnings.extend(parsed.warnings);
            let mut plan = parsed.plan;
            if let Some(k) = opts.k {
                plan.k = k;
            }
            let q = q.clone().unwrap_or_default();
            (
                q.clone(),
                vec![SubQuery {
                    index: 0,
                    text: q,
                    plan,
                }],
            )
        }
        (None, Some(q)) => {
            let model = match (opts.use_llm, model) {
                (true, None) => {
                    warnings.push("no LLM endpoint configured; using keyword plan".to_string());
                    None
                }
                (true, m) => m,
                (false, _) => None,
            };
            let d = decompose_query(model, q, opts.k.unwrap_or(DEFAULT_K))?;
            warnings.extend(d.warnings);
            (q.clone(), d.sub_queries)
        }
        (None, None) => return Err(AppError::Usage("query needs --plan or --question".into())),
    };
    let dims = load_vectorize_info(store_dir)
        .map(|i| i.dims)
        .unwrap_or(DEFAULT_EMBED_DIM);
    let mut fields: Vec<SearchField> = subs
        .iter()
        .flat_map(|s| s.plan.vector_search_plan.iter().map(|e| e.field))
        .collect();
    fields.sort();
    fields.dedup();
    let index = build_field_index(store.records(), &fields, dims)?;
    let results = subs
        .iter()
        .map(|s| retrieve(store.records(), &index, s))
        .collect::<topicscope_core::Result<Vec<_>>>()?;
    Ok((
        assemble_evidence(store.records(), &subs, &results, &question)?,
        warnings,
    ))
}

/// Plain-text top-k listing of a bundle.
pub fn format_table(bundle: &EvidenceBundle) -> String {
    let mut out = String::new();
    for s in &bundle.sub_queries {
        out.push_str(&format!("# sub-query {}: {}\n", s.index, s.text));
        out.push_str("rank\tscore\trecord_id\tconference\tyear\ttitle\n");
        for (i, g) in s.evidence.iter().enumerate() {
            out.push_str(&format!(
                "{}\t{:.6}\t{}\t{}\t{}\t{}\n",
                i + 1,
                g.score,
                g.record_id,
                g.conference,
                g.year,
                g.paper_name
            ));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseOptions {
    pub inputs: Vec<PathBuf>,
    pub output: PathBuf,
    pub conference: String,
    pub year: i32,
}

fn markdown_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| AppError::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "md"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Title from the first `# ` heading, else the file stem.
fn markdown_title(path: &Path, text: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix("# ").map(str::trim).filter(|t| !t.is_empty()))
        .map(str::to_string)
        .unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        })
}

/// Turns Markdown papers into records through the paper-parsing prompt.
/// Files the model cannot parse are skipped with a warning.
pub fn parse_papers(opts: &ParseOptions, model: &dyn LanguageModel) -> Result<StageReport> {
    let venue: Venue = opts.conference.parse()?;
    let mut lines = String::new();
    let mut warnings = Vec::new();
    let files = markdown_files(&opts.inputs)?;
    let mut parsed = 0;
    for path in &files {
        let text = read_text(path)?;
        let prompt = render_prompt(&PAPER_PARSE, &[("document", &text)])?;
        let reply = match model.complete(TemplateName::PaperParse, &prompt) {
            Ok(r) => r,
            Err(e) => {
                warnings.push(format!("{}: {e}", path.display()));
                continue;
            }
        };
        let mut map: Map<String, Value> = match parse_structured_response(&reply, &PAPER_PARSE.schema) {
            Ok(m) => m,
            Err(e) => {
                warnings.push(format!("{}: {e}", path.display()));
                continue;
            }
        };
        map.insert("paper_name".into(), Value::String(markdown_title(path, &text)));
        map.insert("conference".into(), Value::String(venue.code().into()));
        map.insert("year".into(), json!(opts.year));
        match PaperRecord::from_map(map) {
            Ok(r) => {
                lines.push_str(&topicscope_core::corpus::serialize_record(&r));
                lines.push('\n');
                parsed += 1;
            }
            Err(e) => warnings.push(format!("{}: {e}", path.display())),
        }
    }
    write_file(&opts.output, lines.as_bytes())?;
    Ok(StageReport {
        summary: format!(
            "parsed {parsed} of {} papers into {}",
            files.len(),
            opts.output.display()
        ),
        warnings,
    })
}
