use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use topicscope::manifest::read_manifests;
use topicscope::synth::{generate_corpus, SynthConfig};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_topicscope"));
    c.env_remove("LLM_ENDPOINT")
        .env_remove("LLM_API_KEY")
        .env_remove("LLM_MODEL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with(env: &[(&str, &str)], args: &[&str]) -> Output {
    let mut c = bin();
    for (k, v) in env {
        c.env(k, v);
    }
    c.args(args).output().unwrap()
}

#[track_caller]
fn ok(out: &Output) -> String {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A store with 600 synthetic records run through ingest..analyze.
fn built_store(dir: &Path) -> PathBuf {
    let input = dir.join("corpus.jsonl");
    let corpus = generate_corpus(&SynthConfig {
        n_records: 600,
        ..SynthConfig::default()
    });
    std::fs::write(&input, corpus.to_jsonl()).unwrap();
    let store = dir.join("store");
    let s = store.to_str().unwrap();
    ok(&run(&["ingest", input.to_str().unwrap(), "--store", s]));
    ok(&run(&["vectorize", "--store", s, "--reduce", "pca:10"]));
    ok(&run(&["cluster", "--store", s, "--min-cluster-size", "20"]));
    ok(&run(&["topics", "--store", s, "--min-df", "3"]));
    ok(&run(&["analyze", "--store", s]));
    store
}

#[test]
fn pipeline_writes_artifacts_and_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let store = built_store(dir.path());
    let s = store.to_str().unwrap();

    let commands: Vec<String> = read_manifests(&store).unwrap().into_iter().map(|m| m.command).collect();
    assert_eq!(commands, ["ingest", "vectorize", "cluster", "topics", "analyze"]);
    for f in [
        "records.jsonl",
        "vectors.jsonl",
        "reduced.jsonl",
        "clustering.json",
        "topics.json",
        "topic_tree.json",
    ] {
        assert!(store.join(f).exists(), "{f}");
    }
    for f in [
        "lifecycle.csv",
        "compute.csv",
        "benchmark_share.csv",
        "dataset_usage.csv",
        "institutions.csv",
        "collab_pairs.csv",
    ] {
        assert!(store.join("analytics").join(f).exists(), "{f}");
    }

    let topics: Value = serde_json::from_str(&std::fs::read_to_string(store.join("topics.json")).unwrap()).unwrap();
    let n_topics = topics["topics"].as_array().unwrap().len();
    assert!(n_topics >= 2);
    let csv = ok(&run(&["export", "--store", s, "--what", "lifecycle"]));
    assert!(csv.starts_with("topic_id,name,cagr,"));
    assert_eq!(csv.lines().count(), n_topics + 1);

    let out = dir.path().join("datasets.json");
    ok(&run(&[
        "export",
        "--store",
        s,
        "--what",
        "datasets",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]));
    let _: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();

    // Exports do not count as runs.
    assert_eq!(read_manifests(&store).unwrap().len(), 5);
}

#[test]
fn query_with_plan_file() {
    let dir = tempfile::tempdir().unwrap();
    let store = built_store(dir.path());
    let plan = dir.path().join("plan.json");
    std::fs::write(
        &plan,
        r#"{"conference": [], "year": ["2023-2025"], "abstract_summary": "graph node message passing oversmoothing",
            "methods": "graph attention", "vector_search_plan": [{"field": "abstract_summary", "weight": 0.7},
            {"field": "methods", "weight": 0.3}], "k": 5}"#,
    )
    .unwrap();
    let text = ok(&run(&[
        "query",
        "--store",
        store.to_str().unwrap(),
        "--plan",
        plan.to_str().unwrap(),
    ]));
    let bundle: Value = serde_json::from_str(&text).unwrap();
    let evidence = bundle["sub_queries"][0]["evidence"].as_array().unwrap();
    assert_eq!(evidence.len(), 5);
    for g in evidence {
        assert!((2023..=2025).contains(&g["year"].as_i64().unwrap()));
    }
    let again = ok(&run(&[
        "query",
        "--store",
        store.to_str().unwrap(),
        "--plan",
        plan.to_str().unwrap(),
    ]));
    assert_eq!(text, again);
}

#[test]
fn stage_order_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.jsonl");
    std::fs::write(
        &input,
        generate_corpus(&SynthConfig {
            n_records: 50,
            ..SynthConfig::default()
        })
        .to_jsonl(),
    )
    .unwrap();
    let s = dir.path().join("store");
    let s = s.to_str().unwrap();
    ok(&run(&["ingest", input.to_str().unwrap(), "--store", s]));

    let out = run(&["cluster", "--store", s]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("run `vectorize` first"), "{}", stderr(&out));

    let out = run(&["vectorize", "--store", s, "--reduce", "tsne:2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    std::fs::write(dir.path().join("store/.lock"), "").unwrap();
    let out = run(&["vectorize", "--store", s]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn parse_papers_needs_an_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let md = dir.path().join("p.md");
    std::fs::write(&md, "# A Paper\n\nBody.\n").unwrap();
    let out = run(&[
        "parse-papers",
        md.to_str().unwrap(),
        "--output",
        "x.jsonl",
        "--conference",
        "ICLR",
        "--year",
        "2024",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_papers_through_a_scripted_model() {
    let dir = tempfile::tempdir().unwrap();
    let papers = dir.path().join("papers");
    std::fs::create_dir(&papers).unwrap();
    std::fs::write(
        papers.join("a.md"),
        "# Sparse Attention at Scale\n\nWe study attention.\n",
    )
    .unwrap();
    std::fs::write(papers.join("b.md"), "# Broken Reply\n\nNothing.\n").unwrap();
    let script = dir.path().join("mock.json");
    std::fs::write(
        &script,
        r#"{"paper_parse": [
            {"respond": {"abstract_summary": "Sparse attention cuts cost.", "keywords": ["attention"], "gpu_info": "8*A100*24"}},
            {"respond": "I cannot help with that."}
        ]}"#,
    )
    .unwrap();
    let endpoint = format!("mock:{}", script.display());
    let out_path = dir.path().join("parsed.jsonl");
    let out = run_with(
        &[("LLM_ENDPOINT", &endpoint)],
        &[
            "parse-papers",
            papers.to_str().unwrap(),
            "--output",
            out_path.to_str().unwrap(),
            "--conference",
            "iclr",
            "--year",
            "2024",
            "--llm-backoff-ms",
            "1",
        ],
    );
    ok(&out);
    assert!(stderr(&out).contains("b.md"), "{}", stderr(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 1);
    let rec: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(rec["paper_name"], "Sparse Attention at Scale");
    assert_eq!(rec["conference"], "ICLR");
    assert_eq!(rec["gpu_info"], "8*A100*24");
}

#[test]
fn topics_named_by_a_scripted_model() {
    let dir = tempfile::tempdir().unwrap();
    let store = built_store(dir.path());
    let script = dir.path().join("mock.json");
    std::fs::write(
        &script,
        r#"{"topic_name": [{"respond": "{\"name\": \"Scripted Topic\", \"summary\": \"s\"}"}]}"#,
    )
    .unwrap();
    let endpoint = format!("mock:{}", script.display());
    let s = store.to_str().unwrap();
    ok(&run_with(
        &[("LLM_ENDPOINT", &endpoint)],
        &["topics", "--store", s, "--min-df", "3", "--llm"],
    ));
    let topics: Value = serde_json::from_str(&std::fs::read_to_string(store.join("topics.json")).unwrap()).unwrap();
    for t in topics["topics"].as_array().unwrap() {
        assert_eq!(t["name"], "Scripted Topic");
    }
}
