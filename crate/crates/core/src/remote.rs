//! Blocking JSON-over-HTTP client shared by the remote scorer and the remote
//! paraphrase provider.

use std::fmt;
use std::thread;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use ureq::Agent;

/// Environment variable forwarded as a bearer token.
pub const TOKEN_ENV: &str = "PLUM_REMOTE_TOKEN";

#[derive(Debug, Clone, PartialEq)]
pub struct HttpFailure {
    pub attempts: u32,
    pub message: String,
}

impl fmt::Display for HttpFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (after {} attempt(s))", self.message, self.attempts)
    }
}

#[derive(Clone)]
pub struct HttpClient {
    agent: Agent,
    token: Option<String>,
    max_attempts: u32,
    backoff: Duration,
}

impl fmt::Debug for HttpClient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpClient")
            .field("token", &self.token.as_ref().map(|_| "<redacted>"))
            .field("max_attempts", &self.max_attempts)
            .field("backoff", &self.backoff)
            .finish()
    }
}

impl HttpClient {
    pub fn new(timeout: Duration) -> Self {
        let agent: Agent = Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            agent,
            token: None,
            max_attempts: 3,
            backoff: Duration::from_millis(200),
        }
    }

    /// Client with the token taken from `PLUM_REMOTE_TOKEN`, if set.
    pub fn from_env(timeout: Duration) -> Self {
        Self::new(timeout).with_token(std::env::var(TOKEN_ENV).ok())
    }

    pub fn with_token(mut self, token: Option<String>) -> Self {
        self.token = token.filter(|t| !t.is_empty());
        self
    }

    /// Total attempts per request (first try included) and the initial
    /// backoff, doubled after every failed attempt.
    pub fn with_retries(mut self, max_attempts: u32, backoff: Duration) -> Self {
        self.max_attempts = max_attempts.max(1);
        self.backoff = backoff;
        self
    }

    /// POSTs `body` and parses a JSON reply. Transport errors, 429 and 5xx are
    /// retried; any other non-2xx fails at once.
    pub fn post_json<B: Serialize>(&self, url: &str, body: &B) -> Result<Value, HttpFailure> {
        let mut delay = self.backoff;
        let mut last = String::new();
        for attempt in 1..=self.max_attempts {
            if attempt > 1 {
                thread::sleep(delay);
                delay *= 2;
            }
            let mut req = self.agent.post(url);
            if let Some(token) = &self.token {
                req = req.header("Authorization", format!("Bearer {token}"));
            }
            match req.send_json(body) {
                Ok(mut resp) => {
                    let status = resp.status().as_u16();
                    if (200..300).contains(&status) {
                        return resp.body_mut().read_json::<Value>().map_err(|e| HttpFailure {
                            attempts: attempt,
                            message: format!("malformed response body: {e}"),
                        });
                    }
                    last = format!("HTTP {status} from {url}");
                    if status != 429 && status < 500 {
                        return Err(HttpFailure {
                            attempts: attempt,
                            message: last,
                        });
                    }
                }
                Err(e) => last = format!("request to {url} failed: {e}"),
            }
            log::warn!("attempt {attempt}/{}: {last}", self.max_attempts);
        }
        Err(HttpFailure {
            attempts: self.max_attempts,
            message: last,
        })
    }
}
