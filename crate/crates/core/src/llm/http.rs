//! OpenAI-compatible chat-completion client.

use std::time::Duration;

use serde_json::{json, Value};

use super::provider::{CompletionProvider, CompletionRequest, ProviderResponse};
use crate::error::{Error, Result};

pub const API_KEY_VAR: &str = "OPENAI_API_KEY";
pub const BASE_URL_VAR: &str = "OPENAI_BASE_URL";
pub const DEFAULT_BASE_URL: &str = "https://api.openai.com/v1";

pub struct HttpProvider {
    client: reqwest::blocking::Client,
    base_url: String,
    api_key: String,
}

impl std::fmt::Debug for HttpProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpProvider")
            .field("base_url", &self.base_url)
            .finish_non_exhaustive()
    }
}

impl HttpProvider {
    pub fn new(base_url: impl Into<String>, api_key: impl Into<String>) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(300))
            .build()
            .map_err(|e| Error::Provider(format!("building HTTP client: {e}")))?;
        Ok(HttpProvider {
            client,
            base_url: base_url.into().trim_end_matches('/').to_string(),
            api_key: api_key.into(),
        })
    }

    /// Reads the key from `OPENAI_API_KEY`. The base URL is `base_url` if
    /// given, else `OPENAI_BASE_URL`, else the public endpoint.
    pub fn from_env(base_url: Option<&str>) -> Result<Self> {
        let api_key = std::env::var(API_KEY_VAR)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or_else(|| Error::Provider(format!("{API_KEY_VAR} is not set")))?;
        let base = match base_url {
            Some(b) => b.to_string(),
            None => std::env::var(BASE_URL_VAR).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string()),
        };
        HttpProvider::new(base, api_key)
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }
}

pub(crate) fn request_body(request: &CompletionRequest) -> Value {
    let mut body = json!({
        "model": request.model,
        "messages": [{"role": "user", "content": request.prompt}],
    });
    let obj = body.as_object_mut().expect("object literal");
    for (k, v) in &request.options {
        obj.insert(k.clone(), v.clone());
    }
    body
}

pub(crate) fn response_text(body: &Value) -> Result<String> {
    let text = body
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Provider("response has no choices[0].message.content".into()))?;
    if text.trim().is_empty() {
        return Err(Error::Provider("empty completion".into()));
    }
    Ok(text.to_string())
}

impl CompletionProvider for HttpProvider {
    fn complete(&self, request: &CompletionRequest) -> Result<ProviderResponse> {
        let url = format!("{}/chat/completions", self.base_url);
        log::debug!(
            "POST {url} model={} sample={} attempt={}\n{}",
            request.model,
            request.sample_index,
            request.attempt,
            request.prompt
        );
        let resp = self
            .client
            .post(&url)
            .bearer_auth(&self.api_key)
            .json(&request_body(request))
            .send()
            .map_err(|e| Error::Provider(format!("{url}: {e}")))?;
        let status = resp.status();
        let text = resp
            .text()
            .map_err(|e| Error::Provider(format!("{url}: reading body: {e}")))?;
        if !status.is_success() {
            return Err(Error::Provider(format!("{url}: HTTP {status}: {text}")));
        }
        let body: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Provider(format!("{url}: response is not JSON: {e}")))?;
        let raw_text = response_text(&body)?;
        log::debug!("response for sample {}:\n{raw_text}", request.sample_index);
        let model = body
            .get("model")
            .and_then(Value::as_str)
            .unwrap_or(&request.model)
            .to_string();
        Ok(ProviderResponse {
            raw_text,
            model,
            request_digest: request.digest(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_carries_options() {
        let mut req = CompletionRequest::new("hi", "o3-mini");
        req.options.insert("temperature".into(), json!(0.2));
        let body = request_body(&req);
        assert_eq!(body["model"], "o3-mini");
        assert_eq!(body["messages"][0]["content"], "hi");
        assert_eq!(body["temperature"], 0.2);
    }

    #[test]
    fn extracts_content() {
        let body = json!({"choices": [{"message": {"role": "assistant", "content": "[]"}}]});
        assert_eq!(response_text(&body).unwrap(), "[]");
        assert!(response_text(&json!({"choices": []})).is_err());
        let empty = json!({"choices": [{"message": {"content": "  "}}]});
        assert!(response_text(&empty).is_err());
    }
}
