//! Command-line surface.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use topicscope_core::analytics::AnalyticsConfig;
use topicscope_core::cluster::{ClusterParams, Metric, Selection};
use topicscope_core::text::NgramRange;
use topicscope_core::topics::VocabularyFilters;
use topicscope_core::vectorize::{ReductionMethod, DEFAULT_EMBED_DIM};

use crate::error::{AppError, Result};
use crate::fsutil::{read_json, write_file};
use crate::gateway::{Gateway, GatewayConfig, ENDPOINT_VAR};
use crate::pipeline::{self, ExportFormat, ExportWhat, StageReport};

#[derive(Debug, Parser)]
#[command(
    name = "topicscope",
    version,
    about = "Topic discovery, trend analytics and evidence retrieval over paper corpora"
)]
pub struct Cli {
    #[command(flatten)]
    pub llm: LlmArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct LlmArgs {
    /// Seconds to wait for one LLM attempt.
    #[arg(long, global = true, default_value_t = 60.0)]
    pub llm_timeout: f64,
    /// Retries after a failed LLM attempt.
    #[arg(long, global = true, default_value_t = 3)]
    pub llm_retries: u32,
    /// Delay before the first retry, doubled for each further one.
    #[arg(long, global = true, default_value_t = 1000)]
    pub llm_backoff_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectionArg {
    Eom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QueryFormat {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a JSONL corpus and create a store.
    Ingest {
        input: PathBuf,
        #[arg(long)]
        store: PathBuf,
    },
    /// Embed records and reduce the vectors.
    Vectorize {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EMBED_DIM)]
        dims: usize,
        /// `pca:<k>` or `import:<path>`.
        #[arg(long, default_value = "pca:40")]
        reduce: String,
        /// Precomputed embeddings in the vector exchange format.
        #[arg(long)]
        import: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Density-based hierarchical clustering of the reduced vectors.
    Cluster {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = 50)]
        min_cluster_size: usize,
        #[arg(long, default_value_t = 1)]
        min_samples: usize,
        #[arg(long, value_enum, default_value = "euclidean")]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "eom")]
        selection: SelectionArg,
    },
    /// Topic terms, names and the topic tree.
    Topics {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        max_df: f64,
        #[arg(long, default_value_t = 50)]
        min_df: usize,
        /// `min,max`, e.g. `1,2`.
        #[arg(long, default_value = "1,2")]
        ngrams: String,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        /// Name topics through the LLM endpoint.
        #[arg(long, overrides_with = "no_llm")]
        llm: bool,
        #[arg(long)]
        no_llm: bool,
        #[arg(long, default_value_t = 4)]
        concurrency: usize,
    },
    /// Lifecycle, compute, dataset and institution tables.
    Analyze {
        #[arg(long)]
        store: PathBuf,
        /// JSON analytics configuration; missing keys take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Retrieve evidence for a plan file or a question.
    Query {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, conflicts_with = "question")]
        plan: Option<PathBuf>,
        #[arg(long)]
        question: Option<String>,
        #[arg(short, long)]
        k: Option<usize>,
        /// Decompose the question through the LLM endpoint.
        #[arg(long)]
        llm: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: QueryFormat,
    },
    /// Convert Markdown papers to corpus records with the LLM endpoint.
    ParsePapers {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        conference: String,
        #[arg(long)]
        year: i32,
    },
    /// Write one analytics table.
    Export {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, value_enum)]
        what: ExportWhat,
        #[arg(long, value_enum, default_value = "csv")]
        format: ExportFormat,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `pca:<k>` or `import:<path>`.
pub fn parse_reduce(s: &str) -> Result<(ReductionMethod, usize)> {
    let bad = || AppError::Usage(format!("--reduce expects pca:<k> or import:<path>, got `{s}`"));
    match s.split_once(':') {
        Some(("pca", k)) => {
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            Ok((ReductionMethod::Pca, k))
        }
        Some(("import", p)) if !p.is_empty() => Ok((ReductionMethod::Import(p.to_string()), 0)),
        _ => Err(bad()),
    }
}

pub fn parse_ngrams(s: &str) -> Result<NgramRange> {
    let bad = || AppError::Usage(format!("--ngrams expects min,max, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let min = a.trim().parse().map_err(|_| bad())?;
    let max = b.trim().parse().map_err(|_| bad())?;
    Ok(NgramRange::new(min, max)?)
}

impl LlmArgs {
    fn gateway(&self) -> Result<Option<Gateway>> {
        let Some(mut cfg) = GatewayConfig::from_env() else {
            return Ok(None);
        };
        if !(self.llm_timeout.is_finite() && self.llm_timeout > 0.0) {
            return Err(AppError::Usage("--llm-timeout must be positive".into()));
        }
        cfg.timeout = Duration::from_secs_f64(self.llm_timeout);
        cfg.max_retries = self.llm_retries;
        cfg.backoff_base = Duration::from_millis(self.llm_backoff_ms);
        Gateway::new(cfg).map(Some)
    }
}

const MAX_PRINTED_WARNINGS: usize = 20;

/// Runs one parsed command. Output goes to `out`, warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let report = match cli.command {
        Command::Ingest { input, store } => pipeline::ingest(&input, &store)?,
        Command::Vectorize {
            store,
            dims,
            reduce,
            import,
            seed,
        } => {
            let (reduce, n_components) = parse_reduce(&reduce)?;
            let opts = pipeline::VectorizeOptions {
                dims,
                import,
                reduce,
                n_components,
                seed,
            };
            pipeline::vectorize(&store, &opts)?
        }
        Command::Cluster {
            store,
            min_cluster_size,
            min_samples,
            metric,
            selection,
        } => {
            let params = ClusterParams {
                min_cluster_size,
                min_samples,
                metric: match metric {
                    MetricArg::Euclidean => Metric::Euclidean,
                    MetricArg::Cosine => Metric::CosineDistance,
                },
                selection: match selection {
                    SelectionArg::Eom => Selection::Eom,
                },
            };
            pipeline::cluster(&store, &params)?
        }
        Command::Topics {
            store,
            max_df,
            min_df,
            ngrams,
            top_k,
            llm,
            no_llm,
            concurrency,
        } => {
            let mut opts = pipeline::TopicsOptions {
                filters: VocabularyFilters {
                    max_df_percent: max_df,
                    min_df_floor: min_df,
                    ngram_range: parse_ngrams(&ngrams)?,
                },
                top_k,
                use_llm: llm && !no_llm,
                concurrency,
                endpoint: None,
            };
            let gateway = if opts.use_llm { cli.llm.gateway()? } else { None };
            opts.endpoint = gateway.as_ref().map(|g| g.config().describe());
            pipeline::topics(&store, &opts, gateway.as_ref().map(|g| g as pipeline::SharedModel<'_>))?
        }
        Command::Analyze { store, config } => {
            let config: AnalyticsConfig = match config {
                Some(p) => read_json(&p)?,
                None => pipeline::stored_analytics_config(&store)?,
            };
            pipeline::analyze(&store, &config)?
        }
        Command::Query {
            store,
            plan,
            question,
            k,
            llm,
            format,
        } => {
            let gateway = if llm { cli.llm.gateway()? } else { None };
            let opts = pipeline::QueryOptions {
                plan,
                question,
                k,
                use_llm: llm,
            };
            let (bundle, warnings) = pipeline::query(&store, &opts, gateway.as_ref().map(|g| g as _))?;
            let text = match format {
                QueryFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&bundle).expect("bundle");
                    s.push('\n');
                    s
                }
                QueryFormat::Table => pipeline::format_table(&bundle),
            };
            write_out(out, text.as_bytes())?;
            StageReport {
                summary: String::new(),
                warnings,
            }
        }
        Command::ParsePapers {
            inputs,
            output,
            conference,
            year,
        } => {
            let gateway = cli
                .llm
                .gateway()?
                .ok_or_else(|| AppError::Transport(format!("parse-papers needs an LLM endpoint in {ENDPOINT_VAR}")))?;
            pipeline::parse_papers(
                &pipeline::ParseOptions {
                    inputs,
                    output,
                    conference,
                    year,
                },
                &gateway,
            )?
        }
        Command::Export {
            store,
            what,
            format,
            out: path,
        } => {
            let bytes = pipeline::export(&store, what, format)?;
            match path {
                Some(p) => write_file(&p, &bytes)?,
                None => write_out(out, &bytes)?,
            }
            StageReport::default()
        }
    };
    for w in report.warnings.iter().take(MAX_PRINTED_WARNINGS) {
        let _ = writeln!(err, "warning: {w}");
    }
    if report.warnings.len() > MAX_PRINTED_WARNINGS {
        let _ = writeln!(
            err,
            "warning: ... {} more",
            report.warnings.len() - MAX_PRINTED_WARNINGS
        );
    }
    if !report.summary.is_empty() {
        let _ = writeln!(err, "{}", report.summary);
    }
    Ok(())
}

fn write_out(out: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    out.write_all(bytes).map_err(|e| AppError::io("<stdout>", e))
}
