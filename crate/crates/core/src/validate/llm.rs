//! Validation by a chat-completion model over HTTP.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::prompt::{build_prompt, FORMAT_REMINDER};
use super::{Deferral, PairView, Validator, Verdict, VerdictDecision};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransportError {
    #[error("request failed after {attempts} attempt(s): {message}")]
    Failed { attempts: u32, message: String },
    #[error("unexpected response body: {0}")]
    Protocol(String),
}

/// Sends one prompt, returns the model's text.
pub trait ChatTransport {
    fn model(&self) -> &str;
    fn complete(&self, prompt: &str) -> Result<String, TransportError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmConfig {
    /// Base URL; requests go to `{base_url}/chat/completions`.
    pub base_url: String,
    pub model: String,
    /// Environment variable holding the API key, if any.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    #[serde(default = "default_retries")]
    pub retries: u32,
    /// JSON-lines log of every request and response, credentials removed.
    #[serde(default)]
    pub audit_log: Option<PathBuf>,
}

fn default_timeout() -> u64 {
    120
}
fn default_retries() -> u32 {
    2
}

pub const SYSTEM_MESSAGE: &str = "You align catalogs of observation facilities. Follow the answer format exactly.";

pub struct HttpChatTransport {
    config: LlmConfig,
    api_key: Option<String>,
    agent: ureq::Agent,
    audit: Option<Mutex<File>>,
}

impl HttpChatTransport {
    pub fn new(config: LlmConfig) -> std::io::Result<Self> {
        let api_key = config
            .api_key_env
            .as_deref()
            .and_then(|var| std::env::var(var).ok())
            .filter(|k| !k.is_empty());
        let audit = match &config.audit_log {
            Some(path) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(path)?)),
            None => None,
        };
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .build()
            .into();
        Ok(Self {
            config,
            api_key,
            agent,
            audit,
        })
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'))
    }

    fn redact(&self, text: &str) -> String {
        match &self.api_key {
            Some(key) => text.replace(key.as_str(), "[REDACTED]"),
            None => text.to_owned(),
        }
    }

    fn audit(&self, attempt: u32, request: &Value, outcome: &Result<String, String>) {
        let Some(file) = &self.audit else { return };
        let entry = json!({
            "endpoint": self.endpoint(),
            "attempt": attempt,
            "authorization": self.api_key.as_ref().map(|_| "[REDACTED]"),
            "request": request,
            "response": outcome.as_ref().ok(),
            "error": outcome.as_ref().err(),
        });
        let line = self.redact(&entry.to_string());
        let mut file = file.lock().unwrap_or_else(|p| p.into_inner());
        if let Err(e) = writeln!(file, "{line}") {
            log::warn!("audit log write failed: {e}");
        }
    }
}

impl ChatTransport for HttpChatTransport {
    fn model(&self) -> &str {
        &self.config.model
    }

    fn complete(&self, prompt: &str) -> Result<String, TransportError> {
        let body = json!({
            "model": self.config.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": SYSTEM_MESSAGE},
                {"role": "user", "content": prompt},
            ],
        });
        let attempts = self.config.retries + 1;
        let mut last = String::new();
        for attempt in 1..=attempts {
            let mut request = self.agent.post(&self.endpoint());
            if let Some(key) = &self.api_key {
                request = request.header("Authorization", &format!("Bearer {key}"));
            }
            let outcome = request
                .send_json(&body)
                .map_err(|e| e.to_string())
                .and_then(|mut r| r.body_mut().read_to_string().map_err(|e| e.to_string()));
            self.audit(attempt, &body, &outcome);
            match outcome {
                Ok(text) => {
                    let value: Value = serde_json::from_str(&text).map_err(|e| TransportError::Protocol(e.to_string()))?;
                    return value
                        .pointer("/choices/0/message/content")
                        .and_then(Value::as_str)
                        .map(str::to_owned)
                        .ok_or_else(|| TransportError::Protocol("missing choices[0].message.content".into()));
                }
                Err(e) => {
                    log::warn!("chat request attempt {attempt}/{attempts} failed: {}", self.redact(&e));
                    last = self.redact(&e);
                }
            }
        }
        Err(TransportError::Failed { attempts, message: last })
    }
}

/// Reads the first SAME/DISTINCT token; the rest becomes the justification.
pub fn parse_reply(text: &str) -> Option<(VerdictDecision, String)> {
    let body = text.trim_start_matches(|c: char| c.is_whitespace() || "*#`\"'>_".contains(c));
    let word_end = body.find(|c: char| !c.is_alphabetic()).unwrap_or(body.len());
    let decision = match body[..word_end].to_uppercase().as_str() {
        "SAME" => VerdictDecision::Same,
        "DISTINCT" => VerdictDecision::Distinct,
        _ => return None,
    };
    let rest = body[word_end..]
        .trim_start_matches(|c: char| c.is_whitespace() || c.is_ascii_punctuation() || "\u{2014}\u{2013}".contains(c))
        .trim();
    let justification = if rest.is_empty() { "no justification given".to_owned() } else { rest.to_owned() };
    Some((decision, justification))
}

/// Prompts a [`ChatTransport`] once per pair, with one reprompt when the
/// reply cannot be read.
pub struct LlmValidator<T: ChatTransport> {
    transport: T,
    reviewer_label: String,
}

impl<T: ChatTransport> LlmValidator<T> {
    pub fn new(transport: T) -> Self {
        let reviewer_label = transport.model().to_owned();
        Self {
            transport,
            reviewer_label,
        }
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }
}

impl<T: ChatTransport> Validator for LlmValidator<T> {
    fn reviewer_label(&self) -> &str {
        &self.reviewer_label
    }

    fn validate(&mut self, view: PairView<'_>) -> Result<Verdict, Deferral> {
        let prompt = build_prompt(view.left, view.right);
        let mut reply = self.transport.complete(&prompt).map_err(Deferral::transport)?;
        if parse_reply(&reply).is_none() {
            let again = format!("{prompt}\n{FORMAT_REMINDER}\n");
            reply = self.transport.complete(&again).map_err(Deferral::transport)?;
        }
        let (decision, justification) = parse_reply(&reply).ok_or_else(|| Deferral {
            reason: format!("unreadable reply: {:?}", reply.chars().take(80).collect::<String>()),
            transport: false,
        })?;
        Ok(Verdict {
            decision,
            justification,
            reviewer_label: self.reviewer_label.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::CandidatePair;
    use crate::model::{Entity, EntityRef};
    use crate::testutil::OneShotServer;
    use std::cell::RefCell;

    #[test]
    fn reply_parsing() {
        let (d, j) = parse_reply("SAME \u{2014} both refer to the 1.52m telescope at La Silla").unwrap();
        assert_eq!(d, VerdictDecision::Same);
        assert_eq!(j, "both refer to the 1.52m telescope at La Silla");
        assert_eq!(parse_reply("distinct: different launch years").unwrap().0, VerdictDecision::Distinct);
        assert_eq!(parse_reply("**Same**\nthey match").unwrap().1, "they match");
        assert!(parse_reply("Sameness is unclear").is_none());
        assert!(parse_reply("I think SAME").is_none());
        assert!(parse_reply("").is_none());
    }

    struct Canned(RefCell<Vec<Result<String, TransportError>>>, RefCell<usize>);

    impl ChatTransport for Canned {
        fn model(&self) -> &str {
            "canned-model"
        }
        fn complete(&self, _: &str) -> Result<String, TransportError> {
            *self.1.borrow_mut() += 1;
            self.0.borrow_mut().remove(0)
        }
    }

    fn run(replies: Vec<Result<String, TransportError>>) -> (Result<Verdict, Deferral>, usize) {
        let a = Entity::new("pds:a".parse().unwrap(), "A");
        let b = Entity::new("aas:b".parse().unwrap(), "B");
        let pair = CandidatePair::new(EntityRef(0), EntityRef(1));
        let mut v = LlmValidator::new(Canned(RefCell::new(replies), RefCell::new(0)));
        let out = v.validate(PairView { left: &a, right: &b, pair: &pair });
        let calls = *v.transport().1.borrow();
        (out, calls)
    }

    #[test]
    fn reprompts_once_then_defers() {
        let (out, calls) = run(vec![Ok("hmm".into()), Ok("SAME. ok".into())]);
        assert_eq!(out.unwrap().reviewer_label, "canned-model");
        assert_eq!(calls, 2);
        let (out, calls) = run(vec![Ok("hmm".into()), Ok("still no".into())]);
        assert!(!out.unwrap_err().transport);
        assert_eq!(calls, 2);
        let (out, _) = run(vec![Err(TransportError::Protocol("x".into()))]);
        assert!(out.unwrap_err().transport);
    }

    #[test]
    fn http_transport_and_audit() {
        let server = OneShotServer::reply(200, r#"{"choices":[{"message":{"role":"assistant","content":"SAME - same telescope"}}]}"#);
        let dir = tempfile::tempdir().unwrap();
        let audit = dir.path().join("audit.jsonl");
        // SAFETY: test-local variable name, no concurrent readers of it.
        unsafe { std::env::set_var("FACMATCH_TEST_KEY_7", "sk-secret-123") };
        let t = HttpChatTransport::new(LlmConfig {
            base_url: server.url("/v1/"),
            model: "deepseek-v3:671b-q4_K_M".into(),
            api_key_env: Some("FACMATCH_TEST_KEY_7".into()),
            timeout_secs: 5,
            retries: 0,
            audit_log: Some(audit.clone()),
        })
        .unwrap();
        assert_eq!(t.complete("hello").unwrap(), "SAME - same telescope");
        let request = server.request();
        assert!(request.starts_with("POST /v1/chat/completions"), "{request}");
        assert!(request.to_ascii_lowercase().contains("authorization: bearer sk-secret-123"));
        let log = std::fs::read_to_string(audit).unwrap();
        assert!(log.contains("same telescope"));
        assert!(!log.contains("sk-secret-123"));
    }

    #[test]
    fn transport_failure_is_reported() {
        let t = HttpChatTransport::new(LlmConfig {
            base_url: "http://127.0.0.1:9".into(),
            model: "m".into(),
            api_key_env: None,
            timeout_secs: 1,
            retries: 1,
            audit_log: None,
        })
        .unwrap();
        assert!(matches!(t.complete("x"), Err(TransportError::Failed { attempts: 2, .. })));
    }
}
