use std::time::{Duration, Instant};

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeOutcome {
    Reachable,
    Unreachable,
    AuthRequired,
    SkippedOffline,
    UnsupportedScheme,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    pub uri: String,
    pub outcome: ProbeOutcome,
    pub status_code: Option<u16>,
    pub elapsed_ms: u64,
}

impl ProbeResult {
    fn without_request(uri: &str, outcome: ProbeOutcome) -> Self {
        Self {
            uri: uri.to_string(),
            outcome,
            status_code: None,
            elapsed_ms: 0,
        }
    }
}

/// Anything that can check a URI. Implementations must never panic on
/// network failure.
pub trait UriProber: Sync {
    fn probe(&self, uri: &str) -> ProbeResult;
}

/// Never touches the network.
#[derive(Debug, Clone, Copy, Default)]
pub struct OfflineProber;

impl UriProber for OfflineProber {
    fn probe(&self, uri: &str) -> ProbeResult {
        ProbeResult::without_request(uri, ProbeOutcome::SkippedOffline)
    }
}

/// HEAD request, with a one-byte ranged GET when HEAD is refused.
#[derive(Debug, Clone)]
pub struct HttpProber {
    client: Option<Client>,
}

impl HttpProber {
    pub fn new(timeout: Duration) -> Self {
        let client = Client::builder()
            .timeout(timeout)
            .connect_timeout(timeout)
            .user_agent(concat!("primad-bco/", env!("CARGO_PKG_VERSION")))
            .build()
            .ok();
        Self { client }
    }
}

fn classify_status(status: StatusCode) -> ProbeOutcome {
    match status.as_u16() {
        200..=399 => ProbeOutcome::Reachable,
        401 | 403 => ProbeOutcome::AuthRequired,
        _ => ProbeOutcome::Unreachable,
    }
}

impl UriProber for HttpProber {
    fn probe(&self, uri: &str) -> ProbeResult {
        let scheme_ok = url::Url::parse(uri.trim())
            .map(|u| matches!(u.scheme(), "http" | "https"))
            .unwrap_or(false);
        if !scheme_ok {
            return ProbeResult::without_request(uri, ProbeOutcome::UnsupportedScheme);
        }
        let start = Instant::now();
        let Some(client) = &self.client else {
            return ProbeResult::without_request(uri, ProbeOutcome::Unreachable);
        };
        let response = client.head(uri.trim()).send().and_then(|r| {
            if matches!(r.status(), StatusCode::METHOD_NOT_ALLOWED | StatusCode::NOT_IMPLEMENTED) {
                client.get(uri.trim()).header(reqwest::header::RANGE, "bytes=0-0").send()
            } else {
                Ok(r)
            }
        });
        let elapsed_ms = start.elapsed().as_millis() as u64;
        match response {
            Ok(r) => ProbeResult {
                uri: uri.to_string(),
                outcome: classify_status(r.status()),
                status_code: Some(r.status().as_u16()),
                elapsed_ms,
            },
            Err(e) => ProbeResult {
                uri: uri.to_string(),
                outcome: ProbeOutcome::Unreachable,
                status_code: e.status().map(|s| s.as_u16()),
                elapsed_ms,
            },
        }
    }
}

/// Probes one URI; offline mode never issues a request.
pub fn probe_uri(uri: &str, timeout_ms: u64, offline: bool) -> ProbeResult {
    if offline {
        OfflineProber.probe(uri)
    } else {
        HttpProber::new(Duration::from_millis(timeout_ms)).probe(uri)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offline_skips() {
        let r = probe_uri("https://example.org/x", 1000, true);
        assert_eq!(r.outcome, ProbeOutcome::SkippedOffline);
        assert_eq!(r.status_code, None);
    }

    #[test]
    fn closed_port_is_unreachable() {
        let r = probe_uri("https://127.0.0.1:1/", 2000, false);
        assert_eq!(r.outcome, ProbeOutcome::Unreachable);
    }

    #[test]
    fn non_http_scheme_is_not_probed() {
        let r = probe_uri("ftp://example.org/file", 1000, false);
        assert_eq!(r.outcome, ProbeOutcome::UnsupportedScheme);
    }

    #[test]
    fn status_classes() {
        assert_eq!(classify_status(StatusCode::OK), ProbeOutcome::Reachable);
        assert_eq!(classify_status(StatusCode::FOUND), ProbeOutcome::Reachable);
        assert_eq!(classify_status(StatusCode::UNAUTHORIZED), ProbeOutcome::AuthRequired);
        assert_eq!(classify_status(StatusCode::FORBIDDEN), ProbeOutcome::AuthRequired);
        assert_eq!(classify_status(StatusCode::NOT_FOUND), ProbeOutcome::Unreachable);
        assert_eq!(classify_status(StatusCode::BAD_GATEWAY), ProbeOutcome::Unreachable);
    }

    #[test]
    #[ignore = "needs network access"]
    fn schema_url_is_reachable() {
        let r = probe_uri("https://w3id.org/ieee/ieee-2791-schema/2791object.json", 10_000, false);
        assert_eq!(r.outcome, ProbeOutcome::Reachable);
    }
}
