use serde::Deserialize;
use serde_json::{json, Value};

use super::{Evaluation, Objective};
use crate::error::ScoreError;
use crate::prompt::Prompt;
use crate::remote::HttpClient;

#[derive(Deserialize)]
struct ScoreResponse {
    score: f64,
    #[serde(default = "one")]
    calls_consumed: u64,
}

fn one() -> u64 {
    1
}

/// Black-box objective behind `POST /v1/score`.
#[derive(Debug, Clone)]
pub struct RemoteObjective {
    client: HttpClient,
    url: String,
    meta: Value,
    max_in_flight: usize,
}

impl RemoteObjective {
    pub fn new(client: HttpClient, endpoint: &str, meta: Value) -> Self {
        Self {
            client,
            url: format!("{}/v1/score", endpoint.trim_end_matches('/')),
            meta,
            max_in_flight: 1,
        }
    }

    pub fn with_max_in_flight(mut self, n: usize) -> Self {
        self.max_in_flight = n.max(1);
        self
    }
}

/// Validates a decoded `/v1/score` reply.
pub fn parse_score_response(value: Value) -> Result<Evaluation, ScoreError> {
    let resp: ScoreResponse =
        serde_json::from_value(value).map_err(|e| ScoreError::Protocol(format!("malformed score response: {e}")))?;
    if !(0.0..=1.0).contains(&resp.score) {
        return Err(ScoreError::Protocol(format!("score {} outside [0, 1]", resp.score)));
    }
    Ok(Evaluation {
        score: resp.score,
        calls: resp.calls_consumed,
    })
}

/// Scores one prompt over the wire; retries are handled by the client.
pub fn score_remote(client: &HttpClient, url: &str, prompt: &Prompt, meta: &Value) -> Result<Evaluation, ScoreError> {
    let body = json!({ "prompt": prompt.render(), "meta": meta });
    let value = client.post_json(url, &body).map_err(|f| ScoreError::Remote {
        attempts: f.attempts,
        message: f.message,
    })?;
    parse_score_response(value)
}

impl Objective for RemoteObjective {
    fn evaluate(&mut self, p: &Prompt) -> Result<Evaluation, ScoreError> {
        score_remote(&self.client, &self.url, p, &self.meta)
    }

    fn is_local(&self) -> bool {
        false
    }

    fn max_in_flight(&self) -> usize {
        self.max_in_flight
    }

    fn evaluate_many(&mut self, prompts: &[Prompt]) -> Vec<Result<Evaluation, ScoreError>> {
        if prompts.len() <= 1 || self.max_in_flight <= 1 {
            return prompts.iter().map(|p| self.evaluate(p)).collect();
        }
        let (client, url, meta) = (&self.client, self.url.as_str(), &self.meta);
        std::thread::scope(|s| {
            let handles: Vec<_> = prompts
                .iter()
                .map(|p| s.spawn(move || score_remote(client, url, p, meta)))
                .collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(ScoreError::Protocol("scoring thread panicked".into())))
                })
                .collect()
        })
    }
}
