use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde_json::{Map, Value};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Text,
    TextList,
    /// Any JSON array.
    List,
    Object,
    /// A string or a list of strings.
    TextOrList,
    Any,
}

impl FieldKind {
    fn default_value(self) -> Value {
        match self {
            FieldKind::Text | FieldKind::TextOrList => Value::String(String::new()),
            FieldKind::TextList | FieldKind::List => Value::Array(Vec::new()),
            FieldKind::Object => Value::Object(Map::new()),
            FieldKind::Any => Value::Null,
        }
    }

    fn accepts(self, v: &Value) -> bool {
        let text_list = |v: &Value| v.as_array().is_some_and(|a| a.iter().all(Value::is_string));
        match self {
            FieldKind::Text => v.is_string(),
            FieldKind::TextList => text_list(v),
            FieldKind::List => v.is_array(),
            FieldKind::Object => v.is_object(),
            FieldKind::TextOrList => v.is_string() || text_list(v),
            FieldKind::Any => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemaField {
    pub key: &'static str,
    pub kind: FieldKind,
    pub required: bool,
}

impl SchemaField {
    pub const fn required(key: &'static str, kind: FieldKind) -> Self {
        SchemaField {
            key,
            kind,
            required: true,
        }
    }

    pub const fn optional(key: &'static str, kind: FieldKind) -> Self {
        SchemaField {
            key,
            kind,
            required: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResponseSchema {
    pub fields: &'static [SchemaField],
}

impl ResponseSchema {
    pub fn field(&self, key: &str) -> Option<&SchemaField> {
        self.fields.iter().find(|f| f.key == key)
    }
}

/// Finds the first JSON object or array embedded in `text`, skipping
/// leading prose and code fences.
pub fn extract_json(text: &str) -> Option<Value> {
    for (i, c) in text.char_indices() {
        if c != '{' && c != '[' {
            continue;
        }
        let mut stream = serde_json::Deserializer::from_str(&text[i..]).into_iter::<Value>();
        if let Some(Ok(v)) = stream.next() {
            if v.is_object() || v.is_array() {
                return Some(v);
            }
        }
    }
    None
}

fn first_object(text: &str) -> Option<Map<String, Value>> {
    for (i, c) in text.char_indices() {
        if c != '{' {
            continue;
        }
        let mut stream = serde_json::Deserializer::from_str(&text[i..]).into_iter::<Value>();
        if let Some(Ok(Value::Object(m))) = stream.next() {
            return Some(m);
        }
    }
    None
}

fn contract(message: String, raw: &str) -> Error {
    Error::Contract {
        message,
        raw: raw.to_string(),
    }
}

/// Pulls the first JSON object out of a model reply and checks it against
/// `schema`. Missing optional keys get empty values; unknown keys are kept.
pub fn parse_structured_response(text: &str, schema: &ResponseSchema) -> crate::Result<Map<String, Value>> {
    let mut map = first_object(text).ok_or_else(|| contract("no JSON object found".into(), text))?;
    for f in schema.fields {
        match map.get(f.key) {
            None | Some(Value::Null) if f.required => {
                return Err(contract(format!("missing required key \"{}\"", f.key), text));
            }
            None | Some(Value::Null) => {
                map.insert(f.key.to_string(), f.kind.default_value());
            }
            Some(v) if !f.kind.accepts(v) => {
                return Err(contract(format!("key \"{}\" has the wrong type", f.key), text));
            }
            Some(_) => {}
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::{PAPER_PARSE, TOPIC_NAME};
    use serde_json::json;

    #[test]
    fn fenced_json() {
        let raw = "```json\n{\"name\": \"Graph Learning\", \"summary\": \"s\"}\n```";
        let m = parse_structured_response(raw, &TOPIC_NAME.schema).unwrap();
        assert_eq!(m["name"], "Graph Learning");
    }

    #[test]
    fn leading_prose() {
        let raw = "Sure! Here it is {oops} then {\"name\": \"X\"}";
        let m = parse_structured_response(raw, &TOPIC_NAME.schema).unwrap();
        assert_eq!(m["name"], "X");
        assert_eq!(m["summary"], "");
    }

    #[test]
    fn missing_required_key() {
        let raw = r#"{"abstract_summary": "a"}"#;
        match parse_structured_response(raw, &PAPER_PARSE.schema) {
            Err(Error::Contract { message, raw: r }) => {
                assert!(message.contains("keywords"));
                assert_eq!(r, raw);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn optional_defaults() {
        let raw = r#"{"abstract_summary": "a", "keywords": ["k"]}"#;
        let m = parse_structured_response(raw, &PAPER_PARSE.schema).unwrap();
        assert_eq!(m["datasets"], json!([]));
        assert_eq!(m["datasets_metrics_mapping"], json!({}));
        assert_eq!(m["methods"], "");
    }

    #[test]
    fn wrong_type() {
        let raw = r#"{"abstract_summary": "a", "keywords": "k"}"#;
        assert!(parse_structured_response(raw, &PAPER_PARSE.schema).is_err());
    }

    #[test]
    fn no_object() {
        assert!(matches!(
            parse_structured_response("no json here", &TOPIC_NAME.schema),
            Err(Error::Contract { .. })
        ));
    }

    #[test]
    fn braces_inside_strings() {
        let raw = r#"{"name": "a } b", "summary": "{"}"#;
        let m = parse_structured_response(raw, &TOPIC_NAME.schema).unwrap();
        assert_eq!(m["name"], "a } b");
    }

    #[test]
    fn extract_array() {
        assert_eq!(extract_json("x [1, 2]"), Some(json!([1, 2])));
        assert_eq!(extract_json("nothing"), None);
    }
}
