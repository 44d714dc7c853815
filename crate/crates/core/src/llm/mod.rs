//! Prompt templates, response contracts, and the model interface used by
//! topic naming and query decomposition.

mod prompt;
mod response;

use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};

pub use prompt::{render_prompt, PromptTemplate, INTENT_PLAN, PAPER_PARSE, TOPIC_NAME};
pub use response::{extract_json, parse_structured_response, FieldKind, ResponseSchema, SchemaField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateName {
    PaperParse,
    IntentPlan,
    TopicName,
}

impl TemplateName {
    pub fn as_str(self) -> &'static str {
        match self {
            TemplateName::PaperParse => "paper_parse",
            TemplateName::IntentPlan => "intent_plan",
            TemplateName::TopicName => "topic_name",
        }
    }

    pub fn template(self) -> &'static PromptTemplate {
        match self {
            TemplateName::PaperParse => &PAPER_PARSE,
            TemplateName::IntentPlan => &INTENT_PLAN,
            TemplateName::TopicName => &TOPIC_NAME,
        }
    }
}

impl fmt::Display for TemplateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a model call produced no text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatewayFailure(pub String);

impl fmt::Display for GatewayFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A text-completion backend. Implementations own transport, retries and
/// timeouts; callers only see a final answer or a failure.
pub trait LanguageModel {
    fn complete(&self, template: TemplateName, prompt: &str) -> Result<String, GatewayFailure>;
}
