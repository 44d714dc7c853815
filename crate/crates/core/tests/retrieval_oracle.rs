mod support;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::retrieval_oracle::{corpus, full_scan, random_plan, DIM, FIELDS};
use topicscope_core::corpus::{KeywordMatch, MetadataFilter, PaperRecord};
use topicscope_core::retrieval::{build_field_index, retrieve, QueryPlan, SubQuery};

#[test]
fn retrieve_equals_filtered_full_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let records = corpus(&mut rng);
    let index = build_field_index(&records, FIELDS, DIM).unwrap();
    let mut nonempty = 0;
    for case in 0..50 {
        let plan = random_plan(&mut rng);
        let sub = SubQuery {
            index: case,
            text: String::new(),
            plan: plan.clone(),
        };
        let got = retrieve(&records, &index, &sub).unwrap();
        let want = full_scan(&records, &plan);
        assert_eq!(got.entries.len(), want.len(), "plan {case}");
        for (g, (id, score)) in got.entries.iter().zip(&want) {
            assert_eq!(&g.record_id, id, "plan {case}");
            assert!((g.score - score).abs() < 1e-12, "plan {case}: {} vs {score}", g.score);
        }
        nonempty += usize::from(!want.is_empty());
    }
    assert!(nonempty >= 40, "only {nonempty} plans matched anything");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let records = corpus(&mut rng);
    let plans: Vec<QueryPlan> = (0..10).map(|_| random_plan(&mut rng)).collect();
    let run = || {
        let index = build_field_index(&records, FIELDS, DIM).unwrap();
        let all: Vec<_> = plans
            .iter()
            .enumerate()
            .map(|(i, p)| {
                retrieve(
                    &records,
                    &index,
                    &SubQuery {
                        index: i,
                        text: String::new(),
                        plan: p.clone(),
                    },
                )
                .unwrap()
            })
            .collect();
        serde_json::to_vec(&all).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn keyword_modes_differ_only_in_matching() {
    let mut r = PaperRecord::new("x", 2024);
    r.keywords = vec!["Graph Neural Networks".into()];
    let mut m = MetadataFilter {
        keywords: vec!["graph".into()],
        ..MetadataFilter::default()
    };
    let rs = [r];
    assert!(topicscope_core::corpus::filter_indices(&rs, &m).unwrap().is_empty());
    m.keyword_match = KeywordMatch::Substring;
    assert_eq!(topicscope_core::corpus::filter_indices(&rs, &m).unwrap(), vec![0]);
}
