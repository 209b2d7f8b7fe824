//! HTTP client for a CoreNLP-compatible parse server.
//!
//! Requests POST the raw UTF-8 text to `<endpoint>/?properties=<urlencoded
//! JSON>` where the properties object carries the annotator list and
//! `outputFormat: json`. Responses are mapped into [`Sentence`] values:
//! `tokens[*]` → [`Token`] (word→form, pos→xpos, upos derived from a fixed
//! Penn→universal table), `basicDependencies` → basic edges, and
//! `enhancedPlusPlusDependencies` → enhanced edges.
//!
//! Responses are cached on disk as `<cache>/<sha256(text, annotators)>.json`
//! so corpus runs replay offline and byte-identically.

use std::path::PathBuf;
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use percent_encoding::{utf8_percent_encode, NON_ALPHANUMERIC};
use sha2::{Digest, Sha256};

use crate::corpus::{DepEdge, Sentence, Token};
use crate::error::{Error, Result};

pub const DEFAULT_ANNOTATORS: [&str; 5] = ["tokenize", "ssplit", "pos", "lemma", "depparse"];

/// One parse request: the text plus the annotator list, endpoint and timeout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRequest {
    pub text: String,
    pub annotators: Vec<String>,
    pub endpoint: String,
    pub timeout: Duration,
}

impl ParseRequest {
    pub fn new(text: impl Into<String>, endpoint: impl Into<String>) -> Self {
        ParseRequest {
            text: text.into(),
            annotators: DEFAULT_ANNOTATORS.iter().map(|a| a.to_string()).collect(),
            endpoint: endpoint.into(),
            timeout: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseResponse {
    pub sentences: Vec<Sentence>,
}

/// Bounds the number of concurrent in-flight requests.
#[derive(Debug)]
struct Gate {
    capacity: usize,
    in_flight: Mutex<usize>,
    freed: Condvar,
}

impl Gate {
    fn new(capacity: usize) -> Self {
        Gate {
            capacity: capacity.max(1),
            in_flight: Mutex::new(0),
            freed: Condvar::new(),
        }
    }

    fn acquire(&self) -> GateGuard<'_> {
        let mut count = self.in_flight.lock().expect("gate lock");
        while *count >= self.capacity {
            count = self.freed.wait(count).expect("gate wait");
        }
        *count += 1;
        GateGuard { gate: self }
    }
}

struct GateGuard<'a> {
    gate: &'a Gate,
}

impl Drop for GateGuard<'_> {
    fn drop(&mut self) {
        let mut count = self.gate.in_flight.lock().expect("gate lock");
        *count -= 1;
        self.gate.freed.notify_one();
    }
}

/// Shareable parse client with an optional response cache.
#[derive(Debug)]
pub struct ParserClient {
    cache_dir: Option<PathBuf>,
    gate: Gate,
}

impl Default for ParserClient {
    fn default() -> Self {
        ParserClient::new()
    }
}

impl ParserClient {
    pub fn new() -> Self {
        ParserClient {
            cache_dir: None,
            gate: Gate::new(4),
        }
    }

    /// Cache responses under `dir` (created on first write).
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    /// Allow at most `limit` concurrent in-flight requests.
    pub fn with_max_in_flight(mut self, limit: usize) -> Self {
        self.gate = Gate::new(limit);
        self
    }

    /// Content hash of (text, annotators), the cache key.
    pub fn cache_key(text: &str, annotators: &[String]) -> String {
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        hasher.update([0u8]);
        hasher.update(annotators.join(",").as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn cache_path(&self, request: &ParseRequest) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|dir| {
            dir.join(format!(
                "{}.json",
                Self::cache_key(&request.text, &request.annotators)
            ))
        })
    }

    /// Parse text on the remote server (or replay the cached response).
    pub fn parse_remote(&self, request: &ParseRequest) -> Result<ParseResponse> {
        if request.text.is_empty() {
            return Err(Error::validation("parse request text must be non-empty"));
        }
        if request.timeout.is_zero() {
            return Err(Error::validation("parse request timeout must be positive"));
        }

        let cache_path = self.cache_path(request);
        if let Some(path) = &cache_path {
            if path.exists() {
                let raw = crate::error::read_to_string(path)?;
                let json: serde_json::Value = serde_json::from_str(&raw)?;
                return Ok(ParseResponse {
                    sentences: map_response(&json)?,
                });
            }
        }

        let _slot = self.gate.acquire();
        let raw = self.send(request)?;
        if let Some(path) = &cache_path {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            crate::error::write_atomic(path, &raw)?;
        }
        let json: serde_json::Value = serde_json::from_str(&raw)?;
        Ok(ParseResponse {
            sentences: map_response(&json)?,
        })
    }

    fn send(&self, request: &ParseRequest) -> Result<String> {
        let properties = serde_json::json!({
            "annotators": request.annotators.join(","),
            "outputFormat": "json",
        })
        .to_string();
        let url = format!(
            "{}/?properties={}",
            request.endpoint.trim_end_matches('/'),
            utf8_percent_encode(&properties, NON_ALPHANUMERIC)
        );

        let config = ureq::Agent::config_builder()
            .timeout_global(Some(request.timeout))
            .http_status_as_error(false)
            .build();
        let agent = config.new_agent();
        let mut response = agent
            .post(&url)
            .content_type("text/plain; charset=utf-8")
            .send(request.text.as_str())
            .map_err(|e| Error::Transport(e.to_string()))?;
        let status = response.status().as_u16();
        if !(200..300).contains(&status) {
            return Err(Error::Server(status));
        }
        response
            .body_mut()
            .with_config()
            .limit(64 * 1024 * 1024)
            .read_to_string()
            .map_err(|e| Error::Transport(e.to_string()))
    }
}

/// Map a CoreNLP-server JSON document into sentences.
pub fn map_response(json: &serde_json::Value) -> Result<Vec<Sentence>> {
    let sentences = json
        .get("sentences")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Protocol("sentences".to_string()))?;
    sentences.iter().map(map_sentence).collect()
}

fn map_sentence(json: &serde_json::Value) -> Result<Sentence> {
    let tokens_json = json
        .get("tokens")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Protocol("tokens".to_string()))?;
    let mut tokens = Vec::with_capacity(tokens_json.len());
    for token in tokens_json {
        let index = token
            .get("index")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Protocol("tokens[].index".to_string()))?;
        let form = token
            .get("word")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Protocol("tokens[].word".to_string()))?;
        let lemma = token.get("lemma").and_then(|v| v.as_str()).unwrap_or(form);
        let xpos = token.get("pos").and_then(|v| v.as_str()).unwrap_or("");
        tokens.push(Token {
            index: index as usize,
            form: form.to_string(),
            lemma: lemma.to_string(),
            upos: penn_to_upos(xpos).to_string(),
            xpos: xpos.to_string(),
        });
    }

    let enhanced = json
        .get("enhancedPlusPlusDependencies")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Protocol("enhancedPlusPlusDependencies".to_string()))?;
    let basic = json
        .get("basicDependencies")
        .and_then(|v| v.as_array())
        .map(Vec::as_slice)
        .unwrap_or(&[]);

    let text = tokens
        .iter()
        .map(|t| t.form.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    let sentence = Sentence {
        tokens,
        basic_edges: basic.iter().map(map_edge).collect::<Result<_>>()?,
        enhanced_edges: enhanced.iter().map(map_edge).collect::<Result<_>>()?,
        text,
    };
    sentence.validate()?;
    Ok(sentence)
}

fn map_edge(json: &serde_json::Value) -> Result<DepEdge> {
    let governor = json
        .get("governor")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Protocol("dependencies[].governor".to_string()))?;
    let dependent = json
        .get("dependent")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Protocol("dependencies[].dependent".to_string()))?;
    let relation = json
        .get("dep")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Protocol("dependencies[].dep".to_string()))?;
    // CoreNLP spells the root relation "ROOT"; normalize to the CoNLL-U form.
    let relation = if relation == "ROOT" { "root" } else { relation };
    Ok(DepEdge::new(
        governor as usize,
        dependent as usize,
        relation,
    ))
}

/// Coarse universal POS tag for a Penn Treebank tag.
fn penn_to_upos(xpos: &str) -> &'static str {
    match xpos {
        "NNP" | "NNPS" => "PROPN",
        "MD" => "AUX",
        "PRP" | "PRP$" | "WP" | "WP$" | "EX" => "PRON",
        "DT" | "PDT" | "WDT" => "DET",
        "IN" => "ADP",
        "CC" => "CCONJ",
        "CD" => "NUM",
        "UH" => "INTJ",
        "TO" | "POS" | "RP" => "PART",
        "." | "," | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "HYPH" => "PUNCT",
        "SYM" | "$" | "#" => "SYM",
        "FW" | "LS" | "XX" => "X",
        _ if xpos.starts_with("NN") => "NOUN",
        _ if xpos.starts_with("VB") => "VERB",
        _ if xpos.starts_with("JJ") => "ADJ",
        _ if xpos.starts_with("RB") || xpos == "WRB" => "ADV",
        _ => "X",
    }
}
