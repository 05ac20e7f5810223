//! Lint rules over a parsed document, with optional URI probing.

mod probe;
mod rules;

use std::time::Duration;

use serde::Serialize;

use crate::bco::BcoDocument;
use crate::path;
use crate::Severity;

pub use probe::{probe_uri, HttpProber, OfflineProber, ProbeOutcome, ProbeResult, UriProber};
pub use rules::{is_obfuscated_filename, is_template_license};

pub mod codes {
    pub const LICENSE_TEMPLATE_ONLY: &str = "BCO-L001";
    pub const OBFUSCATED_FILENAME: &str = "BCO-L002";
    pub const UNREACHABLE_RESOURCE: &str = "BCO-L003";
    pub const PLATFORM_LOCK_IN: &str = "BCO-L004";
    pub const USABILITY_DESCRIPTION_DISCONNECT: &str = "BCO-L005";
    pub const MISSING_PERMISSION_DECLARATION: &str = "BCO-L006";
    pub const WEAK_KEYWORDS: &str = "BCO-L007";
    pub const LONGEVITY_GAPS: &str = "BCO-L008";

    pub const ALL: [&str; 8] = [
        LICENSE_TEMPLATE_ONLY,
        OBFUSCATED_FILENAME,
        UNREACHABLE_RESOURCE,
        PLATFORM_LOCK_IN,
        USABILITY_DESCRIPTION_DISCONNECT,
        MISSING_PERMISSION_DECLARATION,
        WEAK_KEYWORDS,
        LONGEVITY_GAPS,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub severity: Severity,
    pub path: String,
    pub message: String,
    pub basis: &'static str,
}

impl Diagnostic {
    /// `CODE severity path: message`
    pub fn to_line(&self) -> String {
        format!("{} {} {}: {}", self.code, self.severity, self.path, self.message)
    }
}

pub const DEFAULT_TIMEOUT_MS: u64 = 5_000;
pub const DEFAULT_FILENAME_THRESHOLD: usize = 3;
pub const MAX_PARALLEL_PROBES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintOptions {
    pub offline: bool,
    pub timeout_ms: u64,
    /// Minimum number of underscore-separated segments before a filename
    /// is considered for the obfuscation heuristic.
    pub filename_threshold: usize,
    pub disabled: Vec<String>,
}

impl Default for LintOptions {
    fn default() -> Self {
        Self {
            offline: true,
            timeout_ms: DEFAULT_TIMEOUT_MS,
            filename_threshold: DEFAULT_FILENAME_THRESHOLD,
            disabled: Vec::new(),
        }
    }
}

impl LintOptions {
    fn enabled(&self, code: &str) -> bool {
        !self.disabled.iter().any(|d| d.eq_ignore_ascii_case(code))
    }
}

/// Runs every enabled rule. Online mode probes over HTTP.
pub fn run_lints(doc: &BcoDocument, options: &LintOptions) -> Vec<Diagnostic> {
    if options.offline {
        run_lints_with(doc, options, &OfflineProber)
    } else {
        let prober = HttpProber::new(Duration::from_millis(options.timeout_ms));
        run_lints_with(doc, options, &prober)
    }
}

/// Runs every enabled rule with a caller-supplied prober. The prober is
/// ignored in offline mode.
pub fn run_lints_with(doc: &BcoDocument, options: &LintOptions, prober: &dyn UriProber) -> Vec<Diagnostic> {
    let root = doc.to_value();
    let mut out = Vec::new();
    let enabled = |code: &str| options.enabled(code);

    if enabled(codes::LICENSE_TEMPLATE_ONLY) {
        out.extend(rules::license_template_only(&root));
    }
    if enabled(codes::OBFUSCATED_FILENAME) {
        out.extend(rules::obfuscated_filenames(&root, options.filename_threshold));
    }
    if enabled(codes::UNREACHABLE_RESOURCE) {
        out.extend(rules::unreachable_resources(&root, options.offline, prober));
    }
    if enabled(codes::PLATFORM_LOCK_IN) {
        out.extend(rules::platform_lock_in(&root));
    }
    if enabled(codes::USABILITY_DESCRIPTION_DISCONNECT) {
        out.extend(rules::usability_disconnect(doc));
    }
    if enabled(codes::MISSING_PERMISSION_DECLARATION) {
        out.extend(rules::missing_permissions(doc, &root));
    }
    if enabled(codes::WEAK_KEYWORDS) {
        out.extend(rules::weak_keywords(doc));
    }
    if enabled(codes::LONGEVITY_GAPS) {
        out.extend(rules::longevity_gaps(&root));
    }

    out.sort_by(|a, b| {
        path::compare(&a.path, &b.path)
            .then_with(|| a.code.cmp(b.code))
            .then_with(|| a.message.cmp(&b.message))
    });
    out
}

/// URI-bearing resource locations: script entries and file references.
pub fn resource_uris(root: &serde_json::Value) -> Vec<(String, String)> {
    rules::resource_uris(root)
}
