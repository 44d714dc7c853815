//! Writes a synthetic corpus with six planted topics.
//!
//! cargo run --release --example generate -- <out.jsonl> [n_records] [seed]

use topicscope::synth::{generate_corpus, SynthConfig};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(out) = args.first() else {
        eprintln!("usage: generate <out.jsonl> [n_records] [seed]");
        std::process::exit(1);
    };
    let mut cfg = SynthConfig::default();
    if let Some(n) = args.get(1) {
        cfg.n_records = n.parse().expect("n_records");
    }
    if let Some(s) = args.get(2) {
        cfg.seed = s.parse().expect("seed");
    }
    let corpus = generate_corpus(&cfg);
    std::fs::write(out, corpus.to_jsonl()).expect("write corpus");
    eprintln!("{} records -> {out}", corpus.records.len());
}
