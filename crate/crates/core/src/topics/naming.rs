use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::TopicSignature;
use crate::cluster::Clustering;
use crate::llm::{parse_structured_response, render_prompt, LanguageModel, TemplateName, TOPIC_NAME};
use crate::text::title_case;

/// Abstracts shown to the model per topic.
pub const MAX_SAMPLE_ABSTRACTS: usize = 10;

/// Signatures after naming, with one warning per topic that fell back.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NamingOutcome {
    pub signatures: Vec<TopicSignature>,
    pub warnings: Vec<String>,
}

/// Title-cased top three terms joined by spaces.
pub fn fallback_name(top_terms: &[String]) -> String {
    let joined: Vec<&str> = top_terms.iter().take(3).map(String::as_str).collect();
    title_case(&joined.join(" "))
}

/// Up to [`MAX_SAMPLE_ABSTRACTS`] member abstracts per cluster id, spread
/// evenly over the members in row order. Empty abstracts are skipped.
pub fn sample_abstracts<S: AsRef<str>>(clustering: &Clustering, abstracts: &[S]) -> Vec<Vec<String>> {
    let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); clustering.n_clusters()];
    for (i, &l) in clustering.labels.iter().enumerate() {
        if l >= 0 && i < abstracts.len() && !abstracts[i].as_ref().trim().is_empty() {
            members[l as usize].push(i);
        }
    }
    members
        .into_iter()
        .map(|m| {
            let take = m.len().min(MAX_SAMPLE_ABSTRACTS);
            (0..take)
                .map(|j| abstracts[m[j * m.len() / take]].as_ref().to_string())
                .collect()
        })
        .collect()
}

/// Names a single topic. Returns the warning when the fallback was used
/// although a model was available.
pub fn name_topic(model: Option<&dyn LanguageModel>, sig: &mut TopicSignature, samples: &[String]) -> Option<String> {
    let fallback = |sig: &mut TopicSignature| {
        sig.name = fallback_name(&sig.top_terms);
        sig.summary.clear();
    };
    let Some(model) = model else {
        fallback(sig);
        return None;
    };
    let terms = sig.top_terms.join(", ");
    let mut abstracts = String::new();
    for (i, a) in samples.iter().take(MAX_SAMPLE_ABSTRACTS).enumerate() {
        abstracts.push_str(&format!("{}. {}\n", i + 1, a.trim()));
    }
    let reply = render_prompt(&TOPIC_NAME, &[("top_terms", &terms), ("abstracts", &abstracts)])
        .map_err(|e| e.to_string())
        .and_then(|prompt| {
            model
                .complete(TemplateName::TopicName, &prompt)
                .map_err(|e| format!("naming failed: {e}"))
        });
    let result = reply.and_then(|text| parse_structured_response(&text, &TOPIC_NAME.schema).map_err(|e| e.to_string()));
    match result {
        Ok(map) => {
            let name = map["name"].as_str().unwrap_or_default().trim();
            if name.is_empty() {
                fallback(sig);
                return Some(format!("topic {}: model returned an empty name", sig.topic_id));
            }
            sig.name = name.to_string();
            sig.summary = map["summary"].as_str().unwrap_or_default().trim().to_string();
            None
        }
        Err(e) => {
            fallback(sig);
            Some(format!("topic {}: {e}", sig.topic_id))
        }
    }
}

/// Names every signature, through `model` when given. Never fails: any
/// model error leaves the fallback name and records a warning.
/// `samples[i]` belongs to `sigs[i]`.
pub fn name_topics(
    model: Option<&dyn LanguageModel>,
    sigs: Vec<TopicSignature>,
    samples: &[Vec<String>],
) -> NamingOutcome {
    let mut out = NamingOutcome {
        signatures: sigs,
        warnings: Vec::new(),
    };
    for (i, sig) in out.signatures.iter_mut().enumerate() {
        let s = samples.get(i).map(Vec::as_slice).unwrap_or(&[]);
        if let Some(w) = name_topic(model, sig, s) {
            out.warnings.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::GatewayFailure;
    use alloc::collections::BTreeMap;
    use core::cell::RefCell;

    fn sig(id: i64, terms: &[&str]) -> TopicSignature {
        TopicSignature {
            topic_id: id,
            weights: BTreeMap::new(),
            top_terms: terms.iter().map(|t| t.to_string()).collect(),
            name: String::new(),
            summary: String::new(),
            term_counts: BTreeMap::new(),
        }
    }

    struct Canned(&'static str, RefCell<Vec<String>>);

    impl LanguageModel for Canned {
        fn complete(&self, _: TemplateName, prompt: &str) -> Result<String, GatewayFailure> {
            self.1.borrow_mut().push(prompt.to_string());
            Ok(self.0.to_string())
        }
    }

    struct Down;

    impl LanguageModel for Down {
        fn complete(&self, _: TemplateName, _: &str) -> Result<String, GatewayFailure> {
            Err(GatewayFailure("connection refused".into()))
        }
    }

    #[test]
    fn fallback_without_model() {
        let out = name_topics(None, alloc::vec![sig(0, &["graph", "network", "model", "extra"])], &[]);
        assert_eq!(out.signatures[0].name, "Graph Network Model");
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn model_name_adopted() {
        let m = Canned(
            r#"{"name":"Graph Representation Learning","summary":"Learning on graphs."}"#,
            RefCell::default(),
        );
        let samples = alloc::vec![alloc::vec!["We study graphs.".to_string()]];
        let out = name_topics(Some(&m), alloc::vec![sig(0, &["graph"])], &samples);
        assert_eq!(out.signatures[0].name, "Graph Representation Learning");
        assert_eq!(out.signatures[0].summary, "Learning on graphs.");
        let prompts = m.1.borrow();
        assert!(prompts[0].contains("We study graphs."));
        assert!(prompts[0].contains("graph"));
    }

    #[test]
    fn malformed_reply_falls_back() {
        let m = Canned("I think this topic is about graphs", RefCell::default());
        let out = name_topics(Some(&m), alloc::vec![sig(3, &["graph", "network"])], &[]);
        assert_eq!(out.signatures[0].name, "Graph Network");
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].starts_with("topic 3"));
    }

    #[test]
    fn failure_keeps_cardinality() {
        let sigs = alloc::vec![sig(0, &["a"]), sig(1, &["b"]), sig(2, &[])];
        let out = name_topics(Some(&Down), sigs, &[]);
        assert_eq!(out.signatures.len(), 3);
        assert_eq!(out.warnings.len(), 3);
        assert_eq!(out.signatures[2].name, "");
    }

    #[test]
    fn sampling_caps_and_spreads() {
        let labels: Vec<i64> = (0..25).map(|i| if i % 5 == 0 { -1 } else { 0 }).collect();
        let c = Clustering {
            ids: (0..25).map(|i| format!("p{i}")).collect(),
            labels,
            selected: alloc::vec![1],
            params: crate::cluster::ClusterParams::new(2, 1),
        };
        let abstracts: Vec<String> = (0..25).map(|i| format!("abstract {i}")).collect();
        let s = sample_abstracts(&c, &abstracts);
        assert_eq!(s[0].len(), MAX_SAMPLE_ABSTRACTS);
        assert_eq!(s[0][0], "abstract 1");
        assert!(s[0].iter().all(|a| a != "abstract 0" && a != "abstract 5"));
    }
}
