//! Seeded generator of synthetic paper corpora with planted topics.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topicscope_core::corpus::{PaperRecord, BENCHMARK_NOVELTY, BENCHMARK_POSITIONING};

/// A topic the generator writes papers about.
pub struct PlantedTopic {
    pub name: &'static str,
    pub vocabulary: &'static [&'static str],
    pub venues: &'static [&'static str],
    pub datasets: &'static [&'static str],
    pub methods: &'static [&'static str],
    /// Relative paper volume for 2020..=2025.
    pub year_weights: [u32; 6],
}

pub const PLANTED_TOPICS: [PlantedTopic; 6] = [
    PlantedTopic {
        name: "graph neural networks",
        vocabulary: &[
            "graph",
            "node",
            "edge",
            "message",
            "passing",
            "pooling",
            "spectral",
            "adjacency",
            "molecule",
            "link",
            "subgraph",
            "readout",
            "heterophily",
            "homophily",
            "gnn",
            "neighborhood",
            "aggregation",
            "laplacian",
            "vertex",
            "oversmoothing",
            "relational",
            "topology",
            "walk",
            "embedding",
            "community",
        ],
        venues: &["NeurIPS", "ICML", "ICLR", "AAAI"],
        datasets: &["Cora", "Citeseer", "OGB-Arxiv", "ZINC", "PubMed"],
        methods: &["message passing over node neighborhoods", "spectral graph convolution"],
        year_weights: [5, 6, 6, 5, 4, 4],
    },
    PlantedTopic {
        name: "diffusion image generation",
        vocabulary: &[
            "diffusion",
            "denoising",
            "score",
            "sampler",
            "image",
            "synthesis",
            "latent",
            "guidance",
            "pixel",
            "inpainting",
            "editing",
            "unet",
            "generation",
            "photorealistic",
            "classifier",
            "stochastic",
            "reverse",
            "forward",
            "schedule",
            "upsampling",
            "texture",
            "render",
            "style",
            "prompt",
            "visual",
        ],
        venues: &["CVPR", "ICCV", "ECCV", "NeurIPS"],
        datasets: &["ImageNet", "imagenet", "LAION-5B", "COCO", "FFHQ"],
        methods: &[
            "denoising diffusion in latent space",
            "classifier-free guidance sampling",
        ],
        year_weights: [1, 2, 4, 6, 8, 9],
    },
    PlantedTopic {
        name: "reinforcement learning",
        vocabulary: &[
            "policy",
            "reward",
            "agent",
            "value",
            "exploration",
            "actor",
            "critic",
            "offline",
            "environment",
            "trajectory",
            "return",
            "bellman",
            "markov",
            "episode",
            "bandit",
            "regret",
            "q",
            "learning",
            "control",
            "robot",
            "locomotion",
            "planning",
            "horizon",
            "sparse",
            "curiosity",
        ],
        venues: &["ICML", "NeurIPS", "CoRL", "ICLR"],
        datasets: &["MuJoCo", "Atari", "D4RL", "Meta-World"],
        methods: &["actor-critic policy optimization", "offline value learning"],
        year_weights: [7, 7, 6, 5, 4, 3],
    },
    PlantedTopic {
        name: "speech recognition",
        vocabulary: &[
            "speech",
            "acoustic",
            "phoneme",
            "asr",
            "waveform",
            "spectrogram",
            "speaker",
            "transcription",
            "ctc",
            "audio",
            "utterance",
            "prosody",
            "vocoder",
            "pronunciation",
            "dialect",
            "decoder",
            "streaming",
            "wer",
            "lexicon",
            "voice",
            "noise",
            "far",
            "field",
            "microphone",
            "accent",
        ],
        venues: &["INTERSPEECH", "ACL", "IWSLT", "NAACL"],
        datasets: &["LibriSpeech", "CommonVoice", "TIMIT", "Switchboard"],
        methods: &[
            "connectionist temporal classification on spectrograms",
            "streaming transducer decoding",
        ],
        year_weights: [4, 4, 4, 4, 4, 4],
    },
    PlantedTopic {
        name: "language model alignment",
        vocabulary: &[
            "language",
            "llm",
            "instruction",
            "alignment",
            "preference",
            "rlhf",
            "reasoning",
            "chain",
            "thought",
            "hallucination",
            "tuning",
            "finetuning",
            "human",
            "feedback",
            "harmless",
            "helpful",
            "jailbreak",
            "safety",
            "dialogue",
            "chat",
            "decoding",
            "context",
            "retrieval",
            "augmented",
            "tokenizer",
        ],
        venues: &["ACL", "EMNLP", "NAACL", "COLM", "ICLR"],
        datasets: &["MMLU", "GSM8K", "HumanEval", "TruthfulQA"],
        methods: &[
            "preference optimization from human feedback",
            "chain of thought prompting",
        ],
        year_weights: [1, 1, 3, 6, 9, 10],
    },
    PlantedTopic {
        name: "storage systems",
        vocabulary: &[
            "storage",
            "file",
            "ssd",
            "cache",
            "kernel",
            "filesystem",
            "latency",
            "throughput",
            "disk",
            "flash",
            "persistent",
            "memory",
            "nvme",
            "log",
            "structured",
            "merge",
            "tree",
            "crash",
            "consistency",
            "journaling",
            "block",
            "device",
            "io",
            "replication",
            "deduplication",
        ],
        venues: &["USENIX-Fast", "OSDI", "MLSYS", "USENIX-Sec"],
        datasets: &["YCSB", "Filebench", "fio traces"],
        methods: &["log-structured merge tree compaction", "crash-consistent journaling"],
        year_weights: [4, 4, 4, 4, 3, 3],
    },
];

const FILLER: &[&str] = &[
    "we",
    "propose",
    "novel",
    "method",
    "results",
    "experiments",
    "show",
    "performance",
    "approach",
    "state",
    "art",
    "evaluate",
    "framework",
    "paper",
    "present",
    "improves",
    "significantly",
    "existing",
    "methods",
    "task",
    "tasks",
    "data",
    "large",
    "scale",
    "efficient",
    "effective",
    "analysis",
    "study",
    "new",
    "based",
    "using",
    "demonstrate",
    "achieves",
    "compared",
    "baseline",
    "baselines",
    "extensive",
    "across",
    "several",
    "problem",
    "key",
    "challenge",
    "our",
    "this",
    "work",
    "both",
    "which",
    "also",
    "simple",
    "general",
    "robust",
    "training",
    "model",
    "models",
    "accuracy",
    "benchmark",
    "introduce",
];

const INSTITUTIONS: &[&str] = &[
    "Tsinghua University",
    "Stanford University",
    "MIT",
    "Carnegie Mellon University",
    "Google",
    "Microsoft",
    "Meta",
    "Peking University",
    "ETH Zurich",
    "University of Oxford",
    "UC Berkeley",
    "Shanghai AI Lab",
];

const GPU_MODELS: &[&str] = &["A100", "A100", "A100", "V100", "H100", "TPUv4"];

pub const FIRST_YEAR: i32 = 2020;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthConfig {
    pub n_records: usize,
    pub seed: u64,
    /// Share of records written from filler words only, in percent.
    pub noise_percent: u32,
    /// Share of words drawn from the topic vocabulary, in percent.
    pub topic_word_percent: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_records: 2000,
            seed: 42,
            noise_percent: 1,
            topic_word_percent: 65,
        }
    }
}

/// Generated records with the generator's own tallies.
pub struct SyntheticCorpus {
    pub records: Vec<PaperRecord>,
    /// Planted topic index per record, `None` for filler-only records.
    pub planted: Vec<Option<usize>>,
    pub per_year: BTreeMap<i32, usize>,
    pub benchmark_per_year: BTreeMap<i32, usize>,
}

fn words(rng: &mut ChaCha8Rng, vocab: &'static [&'static str], n: usize, topic_share: u32) -> Vec<&'static str> {
    (0..n)
        .map(|_| {
            let from = if rng.random_range(0..100) < topic_share {
                vocab
            } else {
                FILLER
            };
            *from.choose(rng).unwrap()
        })
        .collect()
}

fn pick_year(rng: &mut ChaCha8Rng, weights: &[u32; 6]) -> i32 {
    let total: u32 = weights.iter().sum();
    let mut x = rng.random_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return FIRST_YEAR + i as i32;
        }
        x -= w;
    }
    FIRST_YEAR + 5
}

/// Builds `cfg.n_records` records. Record `i` belongs to planted topic
/// `i mod 6` unless it was drawn as filler noise.
pub fn generate_corpus(cfg: &SynthConfig) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = SyntheticCorpus {
        records: Vec::with_capacity(cfg.n_records),
        planted: Vec::with_capacity(cfg.n_records),
        per_year: BTreeMap::new(),
        benchmark_per_year: BTreeMap::new(),
    };
    for i in 0..cfg.n_records {
        let noise = rng.random_range(0..100) < cfg.noise_percent;
        let t = &PLANTED_TOPICS[i % PLANTED_TOPICS.len()];
        let share = if noise { 0 } else { cfg.topic_word_percent };
        let year = pick_year(&mut rng, &t.year_weights);
        let title_words = words(&mut rng, t.vocabulary, 6, if noise { 0 } else { 80 });
        let abstract_words = words(&mut rng, t.vocabulary, 60, share);

        let mut r = PaperRecord::new(format!("{} {}", capitalize(&title_words.join(" ")), i), year);
        r.record_id = format!("syn{i:06}");
        r.conference = t.venues.choose(&mut rng).unwrap().to_string();
        r.authors = (0..rng.random_range(1..5))
            .map(|k| format!("Author {}-{k}", rng.random_range(0..500)))
            .collect();
        r.citations = rng.random_range(0..200) * (2026 - year as u64).max(1);
        r.abstract_summary = format!("{}.", abstract_words.join(" "));
        r.abstract_ori = r.abstract_summary.clone();
        r.keywords = title_words.iter().take(3).map(|w| w.to_string()).collect();
        r.methods = if noise {
            String::new()
        } else {
            t.methods.choose(&mut rng).unwrap().to_string()
        };
        r.datasets = t.datasets.choose_multiple(&mut rng, 2).map(|d| d.to_string()).collect();
        r.metrics = vec!["accuracy".into()];
        r.limitations = vec![format!("{} under distribution shift", title_words[0])];
        let n_inst = rng.random_range(1..4);
        r.institution = INSTITUTIONS
            .choose_multiple(&mut rng, n_inst)
            .map(|s| s.to_string())
            .collect();
        r.gpu_info = match rng.random_range(0..10) {
            0..=5 => format!(
                "{}*{}*{}",
                [1, 2, 4, 8][rng.random_range(0..4)],
                GPU_MODELS.choose(&mut rng).unwrap(),
                rng.random_range(1..100)
            ),
            6 => "A100 x8".into(),
            _ => String::new(),
        };
        let benchmark = rng.random_range(0..100) < 8 + 2 * (year - FIRST_YEAR) as u32;
        if benchmark {
            r.field_positioning = BENCHMARK_POSITIONING.into();
            r.novelty_type = BENCHMARK_NOVELTY.into();
            *out.benchmark_per_year.entry(year).or_insert(0) += 1;
        } else {
            r.field_positioning = "Methodological Innovation".into();
            r.novelty_type = "Algorithm / Model".into();
        }
        *out.per_year.entry(year).or_insert(0) += 1;
        out.records.push(r);
        out.planted
            .push(if noise { None } else { Some(i % PLANTED_TOPICS.len()) });
    }
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

impl SyntheticCorpus {
    /// Records in the corpus JSONL format, one per line.
    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&topicscope_core::corpus::serialize_record(r));
            s.push('\n');
        }
        s
    }
}
