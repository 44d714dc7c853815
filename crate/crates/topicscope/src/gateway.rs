//! LLM endpoint client with retries, per-attempt timeouts and a scripted
//! mock backend.
//!
//! `LLM_ENDPOINT` selects the backend: an `http(s)://` chat-completions URL,
//! or `mock:<path>` for a script file. `LLM_API_KEY` and `LLM_MODEL` apply
//! to HTTP endpoints.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{mpsc, Arc, Mutex};
use std::thread;
use std::time::Duration;

use serde::Deserialize;
use serde_json::{json, Value};
use topicscope_core::llm::{GatewayFailure, LanguageModel, TemplateName};

use crate::error::{AppError, Result};
use crate::fsutil::read_text;

pub const ENDPOINT_VAR: &str = "LLM_ENDPOINT";
pub const API_KEY_VAR: &str = "LLM_API_KEY";
pub const MODEL_VAR: &str = "LLM_MODEL";
pub const DEFAULT_MODEL: &str = "default";

#[derive(Debug, Clone, PartialEq)]
pub struct GatewayConfig {
    pub endpoint: String,
    pub model: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
    pub max_retries: u32,
    /// Delay before the first retry; each further retry doubles it.
    pub backoff_base: Duration,
}

impl GatewayConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        GatewayConfig {
            endpoint: endpoint.into(),
            model: DEFAULT_MODEL.into(),
            api_key: None,
            timeout: Duration::from_secs(60),
            max_retries: 3,
            backoff_base: Duration::from_secs(1),
        }
    }

    /// Reads the endpoint, key and model from the environment; `None` when
    /// no endpoint is set.
    pub fn from_env() -> Option<Self> {
        let endpoint = std::env::var(ENDPOINT_VAR).ok().filter(|e| !e.trim().is_empty())?;
        let mut cfg = GatewayConfig::new(endpoint.trim());
        cfg.api_key = std::env::var(API_KEY_VAR).ok().filter(|k| !k.is_empty());
        if let Ok(m) = std::env::var(MODEL_VAR) {
            if !m.trim().is_empty() {
                cfg.model = m.trim().into();
            }
        }
        Some(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.timeout.is_zero() {
            return Err(AppError::Usage("LLM timeout must be positive".into()));
        }
        Ok(())
    }

    /// Kind of endpoint, safe to record (no URL credentials or keys).
    pub fn describe(&self) -> Value {
        let kind = if self.endpoint.starts_with("mock:") {
            "mock"
        } else {
            "http"
        };
        json!({
            "kind": kind,
            "model": self.model,
            "timeout_secs": self.timeout.as_secs_f64(),
            "max_retries": self.max_retries,
        })
    }
}

/// Sends one prompt and returns the reply text.
trait Backend: Send + Sync {
    fn send(&self, template: TemplateName, prompt: &str) -> std::result::Result<String, String>;
}

struct Http {
    url: String,
    model: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl Backend for Http {
    fn send(&self, _template: TemplateName, prompt: &str) -> std::result::Result<String, String> {
        let body = json!({"model": self.model, "messages": [{"role": "user", "content": prompt}]});
        let mut req = self.agent.post(&self.url);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send_json(&body).map_err(|e| e.to_string())?;
        let v: Value = resp.body_mut().read_json().map_err(|e| e.to_string())?;
        v.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| "response has no choices[0].message.content".to_string())
    }
}

/// One scripted reply.
#[derive(Debug, Clone, Deserialize)]
pub struct MockStep {
    /// Reply text; non-string JSON is sent serialized.
    #[serde(default)]
    pub respond: Option<Value>,
    /// Fail the attempt with this message.
    #[serde(default)]
    pub fail: Option<String>,
    /// Wait before answering.
    #[serde(default)]
    pub sleep_ms: u64,
}

/// Canned replies per template name (`paper_parse`, `intent_plan`,
/// `topic_name`, or `*` for any). Steps are used in order; the last one
/// repeats once the list runs out.
#[derive(Debug, Clone, Default)]
pub struct MockScript {
    steps: BTreeMap<String, Vec<MockStep>>,
    cursor: Arc<Mutex<BTreeMap<String, usize>>>,
}

impl MockScript {
    pub fn parse(text: &str) -> Result<Self> {
        let steps: BTreeMap<String, Vec<MockStep>> =
            serde_json::from_str(text).map_err(|e| AppError::Usage(format!("mock script: {e}")))?;
        Ok(MockScript {
            steps,
            cursor: Arc::default(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        MockScript::parse(&read_text(path)?)
    }

    fn next(&self, template: TemplateName) -> Option<MockStep> {
        let key = if self.steps.contains_key(template.as_str()) {
            template.as_str()
        } else {
            "*"
        };
        let steps = self.steps.get(key).filter(|s| !s.is_empty())?;
        let mut cursor = self.cursor.lock().expect("mock cursor");
        let i = cursor.entry(key.to_string()).or_insert(0);
        let step = steps[(*i).min(steps.len() - 1)].clone();
        *i += 1;
        Some(step)
    }
}

impl Backend for MockScript {
    fn send(&self, template: TemplateName, _prompt: &str) -> std::result::Result<String, String> {
        let step = self
            .next(template)
            .ok_or_else(|| format!("mock script has no reply for {template}"))?;
        if step.sleep_ms > 0 {
            thread::sleep(Duration::from_millis(step.sleep_ms));
        }
        if let Some(msg) = step.fail {
            return Err(msg);
        }
        match step.respond {
            Some(Value::String(s)) => Ok(s),
            Some(v) => Ok(v.to_string()),
            None => Err("mock step has neither respond nor fail".into()),
        }
    }
}

/// Every failed attempt of a call, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttemptLog(pub Vec<String>);

impl std::fmt::Display for AttemptLog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} attempts failed", self.0.len())?;
        for (i, a) in self.0.iter().enumerate() {
            write!(f, "; #{}: {a}", i + 1)?;
        }
        Ok(())
    }
}

pub struct Gateway {
    config: GatewayConfig,
    backend: Arc<dyn Backend>,
    calls: AtomicU64,
    attempts: AtomicU64,
}

impl Gateway {
    pub fn new(config: GatewayConfig) -> Result<Self> {
        config.validate()?;
        let backend: Arc<dyn Backend> = match config.endpoint.strip_prefix("mock:") {
            Some(path) => Arc::new(MockScript::load(&PathBuf::from(path))?),
            None if config.endpoint.starts_with("http://") || config.endpoint.starts_with("https://") => {
                let agent: ureq::Agent = ureq::Agent::config_builder()
                    .timeout_global(Some(config.timeout))
                    .build()
                    .into();
                Arc::new(Http {
                    url: config.endpoint.clone(),
                    model: config.model.clone(),
                    api_key: config.api_key.clone(),
                    agent,
                })
            }
            None => {
                return Err(AppError::Usage(format!(
                    "{ENDPOINT_VAR} must be an http(s) URL or mock:<path>"
                )))
            }
        };
        Ok(Gateway {
            config,
            backend,
            calls: AtomicU64::new(0),
            attempts: AtomicU64::new(0),
        })
    }

    pub fn with_mock(config: GatewayConfig, script: MockScript) -> Result<Self> {
        config.validate()?;
        Ok(Gateway {
            config,
            backend: Arc::new(script),
            calls: AtomicU64::new(0),
            attempts: AtomicU64::new(0),
        })
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.config
    }

    /// Calls and attempts made so far.
    pub fn counters(&self) -> (u64, u64) {
        (
            self.calls.load(Ordering::Relaxed),
            self.attempts.load(Ordering::Relaxed),
        )
    }

    fn attempt(&self, template: TemplateName, prompt: &str) -> std::result::Result<String, String> {
        let (tx, rx) = mpsc::channel();
        let backend = Arc::clone(&self.backend);
        let prompt = prompt.to_string();
        thread::spawn(move || {
            let _ = tx.send(backend.send(template, &prompt));
        });
        match rx.recv_timeout(self.config.timeout) {
            Ok(r) => r,
            Err(mpsc::RecvTimeoutError::Timeout) => {
                Err(format!("timed out after {:.3}s", self.config.timeout.as_secs_f64()))
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => Err("backend thread panicked".into()),
        }
    }

    /// Up to `1 + max_retries` attempts with exponential backoff; the first
    /// success wins.
    pub fn call_with_retry(&self, template: TemplateName, prompt: &str) -> std::result::Result<String, AttemptLog> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let mut log = Vec::new();
        let mut delay = self.config.backoff_base;
        for attempt in 0..=self.config.max_retries {
            if attempt > 0 {
                thread::sleep(delay);
                delay = delay.saturating_mul(2);
            }
            self.attempts.fetch_add(1, Ordering::Relaxed);
            match self.attempt(template, prompt) {
                Ok(text) => return Ok(text),
                Err(e) => log.push(e),
            }
        }
        Err(AttemptLog(log))
    }
}

impl LanguageModel for Gateway {
    fn complete(&self, template: TemplateName, prompt: &str) -> std::result::Result<String, GatewayFailure> {
        self.call_with_retry(template, prompt)
            .map_err(|log| GatewayFailure(log.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gw(script: &str, retries: u32, timeout_ms: u64) -> Gateway {
        let mut cfg = GatewayConfig::new("mock:inline");
        cfg.max_retries = retries;
        cfg.timeout = Duration::from_millis(timeout_ms);
        cfg.backoff_base = Duration::from_millis(1);
        Gateway::with_mock(cfg, MockScript::parse(script).unwrap()).unwrap()
    }

    #[test]
    fn succeeds_on_third_attempt() {
        let g = gw(r#"{"*":[{"fail":"503"},{"fail":"503"},{"respond":"ok"}]}"#, 3, 1000);
        assert_eq!(g.call_with_retry(TemplateName::TopicName, "p").unwrap(), "ok");
        assert_eq!(g.counters(), (1, 3));
    }

    #[test]
    fn gives_up_after_retries() {
        let g = gw(r#"{"*":[{"fail":"down"}]}"#, 2, 1000);
        let log = g.call_with_retry(TemplateName::IntentPlan, "p").unwrap_err();
        assert_eq!(log.0.len(), 3);
        assert!(log.to_string().starts_with("3 attempts failed"));
    }

    #[test]
    fn slow_attempt_counts_as_failure() {
        let g = gw(
            r#"{"topic_name":[{"sleep_ms":400,"respond":"late"},{"respond":"fast"}]}"#,
            1,
            50,
        );
        assert_eq!(g.call_with_retry(TemplateName::TopicName, "p").unwrap(), "fast");
        assert_eq!(g.counters().1, 2);
    }

    #[test]
    fn json_replies_are_serialized() {
        let g = gw(r#"{"topic_name":[{"respond":{"name":"X","summary":""}}]}"#, 0, 1000);
        let text = g.call_with_retry(TemplateName::TopicName, "p").unwrap();
        assert_eq!(serde_json::from_str::<Value>(&text).unwrap()["name"], "X");
        assert!(g.call_with_retry(TemplateName::PaperParse, "p").is_err());
    }

    #[test]
    fn backoff_doubles() {
        let mut cfg = GatewayConfig::new("mock:inline");
        cfg.max_retries = 2;
        cfg.backoff_base = Duration::from_millis(40);
        let g = Gateway::with_mock(cfg, MockScript::parse(r#"{"*":[{"fail":"x"}]}"#).unwrap()).unwrap();
        let t = std::time::Instant::now();
        let _ = g.call_with_retry(TemplateName::TopicName, "p");
        assert!(t.elapsed() >= Duration::from_millis(120));
    }
}
