use alloc::string::String;

use super::response::{FieldKind, ResponseSchema, SchemaField};
use super::TemplateName;
use crate::Error;

/// A prompt with `{{placeholder}}` slots and the JSON contract its answer
/// must satisfy.
#[derive(Debug)]
pub struct PromptTemplate {
    pub name: TemplateName,
    pub text: &'static str,
    pub placeholders: &'static [&'static str],
    /// The JSON schema block embedded in `text`.
    pub schema_block: &'static str,
    pub schema: ResponseSchema,
}

const PAPER_SCHEMA_BLOCK: &str = r#"{
  "abstract_summary": "",
  "keywords": [],
  "keywords_explanation": {},
  "methods": "",
  "architecture": "",
  "loss_function": "",
  "training_setup": "",
  "gpu_info": "",
  "datasets": [],
  "metrics": [],
  "datasets_metrics_mapping": {},
  "problem_statement": "",
  "contributions": [],
  "novelty_type": "",
  "experiments": "",
  "results_summary": "",
  "limitations": [],
  "future_work": [],
  "trend_insight": "",
  "field_positioning": "",
  "institution": []
}"#;

pub static PAPER_PARSE: PromptTemplate = PromptTemplate {
    name: TemplateName::PaperParse,
    text: concat!(
        "You are a scientific paper analysis assistant.\n\n",
        "Your task is to read the input paper content (in Markdown format), and output a structured summary in JSON format according to the schema below. \n\n",
        "Output JSON schema:\n",
        r#"{
  "abstract_summary": "",
  "keywords": [],
  "keywords_explanation": {},
  "methods": "",
  "architecture": "",
  "loss_function": "",
  "training_setup": "",
  "gpu_info": "",
  "datasets": [],
  "metrics": [],
  "datasets_metrics_mapping": {},
  "problem_statement": "",
  "contributions": [],
  "novelty_type": "",
  "experiments": "",
  "results_summary": "",
  "limitations": [],
  "future_work": [],
  "trend_insight": "",
  "field_positioning": "",
  "institution": []
}"#,
        "\n\nInstructions:\n",
        "1. **Keywords**: Extract 3-10 keywords directly from the paper text. Generate a short explanation for each keyword using LLM summarization.\n",
        "2. **abstract_summary**: Provide a compressed version of the paper's abstract. Summarize, do not copy verbatim.\n",
        "3. **Methods / Architecture / Loss / Training**: Summarize core method(s), model architecture, loss function, and training setup.\n",
        "4. **Datasets / Metrics / Mapping**: List datasets, corresponding metrics, and mapping between datasets and metrics. Use empty lists/dictionaries if missing.\n",
        "5. **Problem Statement**: Summarize the research problem in 1-2 sentences.\n",
        "6. **Contributions**: Summarize the core contributions.\n",
        "7. **Novelty Type**: Infer innovation type:\n",
        "   - Algorithm / Model\n",
        "   - Theory / Analysis\n",
        "   - Benchmark / Dataset\n",
        "   - Application / System\n",
        "   - Methodological Improvement\n",
        "8. **Experiments / Results Summary**: Summarize experiments and main results. Include ablation studies if present.\n",
        "9. **Limitations / Future Work**: Summarize limitations and future research directions.\n",
        "10. **Trend Insight**: Provide trend level insights based on the paper.\n",
        "11. **Field Positioning**: Infer the paper's position in its research field:\n",
        "    - Foundational Work\n",
        "    - Methodological Innovation\n",
        "    - Benchmark / Dataset Contribution\n",
        "    - Application Validation\n",
        "    - Trend Extension\n",
        "12. **Institution**:Extract all author affiliations from the provided.\n",
        "13. **Gpu_info**:Obtain the gpu resources used in the article, <total_gpu>*<GPU_MODEL>*<training_time>.\n",
        "\nPaper content (Markdown):\n{{document}}\n",
    ),
    placeholders: &["document"],
    schema_block: PAPER_SCHEMA_BLOCK,
    schema: ResponseSchema {
        fields: &[
            SchemaField::required("abstract_summary", FieldKind::Text),
            SchemaField::required("keywords", FieldKind::TextList),
            SchemaField::optional("keywords_explanation", FieldKind::Object),
            SchemaField::optional("methods", FieldKind::Text),
            SchemaField::optional("architecture", FieldKind::Text),
            SchemaField::optional("loss_function", FieldKind::Text),
            SchemaField::optional("training_setup", FieldKind::Text),
            SchemaField::optional("gpu_info", FieldKind::Text),
            SchemaField::optional("datasets", FieldKind::TextList),
            SchemaField::optional("metrics", FieldKind::TextList),
            SchemaField::optional("datasets_metrics_mapping", FieldKind::Object),
            SchemaField::optional("problem_statement", FieldKind::Text),
            SchemaField::optional("contributions", FieldKind::TextList),
            SchemaField::optional("novelty_type", FieldKind::Text),
            SchemaField::optional("experiments", FieldKind::Text),
            SchemaField::optional("results_summary", FieldKind::Text),
            SchemaField::optional("limitations", FieldKind::TextList),
            SchemaField::optional("future_work", FieldKind::TextList),
            SchemaField::optional("trend_insight", FieldKind::Text),
            SchemaField::optional("field_positioning", FieldKind::Text),
            SchemaField::optional("institution", FieldKind::TextList),
        ],
    },
};

const INTENT_SCHEMA_BLOCK: &str = r#"{
  "conference": [],
  "year": [],
  "paper_name": [],
  "authors": [],
  "keywords": [],
  "keywords_explanation": {},
  "abstract_summary": "",
  "methods": "",
  "architecture": "",
  "loss_function": "",
  "datasets": [],
  "metrics": [],
  "vector_search_plan": []
}"#;

pub static INTENT_PLAN: PromptTemplate = PromptTemplate {
    name: TemplateName::IntentPlan,
    text: concat!(
        "You are a comprehensive query analysis and search planning assistant for a scientific literature knowledge base.\n\n",
        "Your primary task is to parse the user's natural language query into a single, structured JSON object that captures all metadata constraints, technical requirements, and generates an optimized plan for vector search.\n\n",
        "Output Schema:\n",
        r#"{
  "conference": [],
  "year": [],
  "paper_name": [],
  "authors": [],
  "keywords": [],
  "keywords_explanation": {},
  "abstract_summary": "",
  "methods": "",
  "architecture": "",
  "loss_function": "",
  "datasets": [],
  "metrics": [],
  "vector_search_plan": []
}"#,
        "\n\nParsing Rules:\n",
        "1. **Conference**: Must the range of the following fixed options: [AAAI, ACL, COLM, COLT, CoRL, CVPR, ECCV, EMNLP, ICCV, ICLR, ICML, IJCAI, INTERSPEECH, IWSLT, MLSYS, NAACL, NDSS, NeurIPS, OSDI, UAI, USENIX-Fast, USENIX-Sec]. If the query does not mention a conference, leave as []. \n",
        "2. **Year**: Extract the range of year contained in the query.\n",
        "3. **Authors**: If the query explicitly mentions author names, extract them into a list. Otherwise, leave empty. \n",
        "4. **Paper Name**: Extract all explicitly mentioned paper titles. Output as a list. Use partial matching if necessary.\n",
        "5. **Keywords**: Extract only technical terms explicitly mentioned in query. Use `keywords_explanation` to briefly explain each.\n",
        "6. **Abstract Summary**: One concise sentence describing technical focus from query.\n",
        "6. **methods**:  \n",
        "   - Output the **complete method or approach description**, including its application domain if present.  \n",
        "   - Must describe both the **technique** and its **application scope**, not just a keyword.  \n",
        "   - If multiple distinct methods are present, include all as a list.  \n",
        "   - Do NOT shorten into keywords.  \n",
        "7. ** Architecture / Loss Function / Datasets / Metrics**: Extract explicitly if mentioned; do not hallucinate.\n",
        "8. **Vector Search Plan**:  \n",
        "   - Decide which fields to include in the search (`abstract_summary`, `methods`, `keywords`, `datasets`, `metrics`, `architecture`, `loss_function`, etc.).  \n",
        "   - Only include fields that have non-empty content in the JSON output.  \n",
        "   - Assign a `weight` for each field between 0 and 1 based on **query emphasis**.  \n",
        "   - The weights **must be normalized such that their sum equals 1.0**.  \n",
        "   - Fields are **not mutually exclusive**; e.g., methods can also appear in keywords.  \n",
        "   - Weights should reflect relative importance of each field **according to the query intent**, not by default priority.\n",
        "\nEach `vector_search_plan` entry is an object {\"field\": <field name>, \"weight\": <number>}.\n",
        "If the query bundles several distinct information needs, output a JSON array with one such object per sub-question instead, and add a \"sub_question\" string to each object.\n",
        "\nUser query:\n{{question}}\n",
    ),
    placeholders: &["question"],
    schema_block: INTENT_SCHEMA_BLOCK,
    schema: ResponseSchema {
        fields: &[
            SchemaField::optional("conference", FieldKind::TextList),
            SchemaField::optional("year", FieldKind::List),
            SchemaField::optional("paper_name", FieldKind::TextList),
            SchemaField::optional("authors", FieldKind::TextList),
            SchemaField::optional("keywords", FieldKind::TextList),
            SchemaField::optional("keywords_explanation", FieldKind::Object),
            SchemaField::optional("abstract_summary", FieldKind::Text),
            SchemaField::optional("methods", FieldKind::TextOrList),
            SchemaField::optional("architecture", FieldKind::TextOrList),
            SchemaField::optional("loss_function", FieldKind::TextOrList),
            SchemaField::optional("datasets", FieldKind::TextList),
            SchemaField::optional("metrics", FieldKind::TextList),
            SchemaField::required("vector_search_plan", FieldKind::Any),
        ],
    },
};

const TOPIC_SCHEMA_BLOCK: &str = r#"{
  "name": "",
  "summary": ""
}"#;

pub static TOPIC_NAME: PromptTemplate = PromptTemplate {
    name: TemplateName::TopicName,
    text: concat!(
        "You name research topics discovered by clustering scientific papers.\n\n",
        "Representative keywords, most characteristic first:\n{{top_terms}}\n\n",
        "Sample abstracts from the cluster:\n{{abstracts}}\n\n",
        "Reply with one JSON object following this schema:\n",
        r#"{
  "name": "",
  "summary": ""
}"#,
        "\n\n`name` is a short descriptive title of at most eight words. ",
        "`summary` is one sentence describing the research the topic covers.\n",
    ),
    placeholders: &["top_terms", "abstracts"],
    schema_block: TOPIC_SCHEMA_BLOCK,
    schema: ResponseSchema {
        fields: &[
            SchemaField::required("name", FieldKind::Text),
            SchemaField::optional("summary", FieldKind::Text),
        ],
    },
};

/// Substitutes every `{{name}}` slot with its value from `inputs`.
pub fn render_prompt(template: &PromptTemplate, inputs: &[(&str, &str)]) -> crate::Result<String> {
    for p in template.placeholders {
        if !inputs.iter().any(|(k, _)| k == p) {
            return Err(Error::MissingPlaceholder(String::from(*p)));
        }
    }
    let mut out = String::with_capacity(template.text.len() + 256);
    let mut rest = template.text;
    while let Some(start) = rest.find("{{") {
        let Some(len) = rest[start + 2..].find("}}") else { break };
        let key = &rest[start + 2..start + 2 + len];
        match inputs.iter().find(|(k, _)| *k == key) {
            Some((_, value)) if template.placeholders.contains(&key) => {
                out.push_str(&rest[..start]);
                out.push_str(value);
            }
            _ => out.push_str(&rest[..start + 2 + len + 2]),
        }
        rest = &rest[start + 2 + len + 2..];
    }
    out.push_str(rest);
    Ok(out)
}
