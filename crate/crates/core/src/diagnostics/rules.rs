use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;
use serde_json::Value;

use super::probe::{ProbeOutcome, UriProber};
use super::{codes, Diagnostic, MAX_PARALLEL_PROBES};
use crate::aspects::Aspect;
use crate::bco::BcoDocument;
use crate::path;
use crate::reconfigure::declared_permissions;
use crate::Severity;

const LICENSE_TEMPLATES: [(&str, &str); 3] = [
    ("opensource.org", "/licenses/"),
    ("spdx.org", "/licenses/"),
    ("choosealicense.com", "/"),
];

const TIMESTAMP_KEYS: [&str; 6] = ["created", "modified", "obsolete_after", "start_time", "end_time", "date"];

const RESOURCE_PATTERNS: [&str; 6] = [
    "/io/input_subdomain/*/uri",
    "/io/output_subdomain/*/uri",
    "/description/pipeline_steps/*/prerequisite/*/uri",
    "/description/pipeline_steps/*/input_list/*/uri",
    "/description/pipeline_steps/*/output_list/*/uri",
    "/execution/script/*",
];

const FILENAME_PATTERNS: [&str; 5] = [
    "/io/input_subdomain/*/filename",
    "/io/output_subdomain/*/filename",
    "/description/pipeline_steps/*/prerequisite/*/filename",
    "/description/pipeline_steps/*/input_list/*/filename",
    "/description/pipeline_steps/*/output_list/*/filename",
];

const STOP_WORDS: [&str; 24] = [
    "about", "after", "also", "analysis", "based", "been", "from", "have", "into", "more", "only", "other",
    "over", "pipeline", "step", "such", "than", "that", "their", "them", "then", "this", "using", "with",
];

fn diag(code: &'static str, severity: Severity, at: &str, message: String, basis: &'static str) -> Diagnostic {
    Diagnostic {
        code,
        severity,
        path: at.to_string(),
        message,
        basis,
    }
}

fn text(v: &Value) -> Option<&str> {
    v.as_str().map(str::trim).filter(|s| !s.is_empty())
}

/// Whether a license value is a bare link to a generic license template.
pub fn is_template_license(license: &str) -> bool {
    let Ok(url) = url::Url::parse(license.trim()) else {
        return false;
    };
    let host = url.host_str().unwrap_or_default().to_ascii_lowercase();
    let host = host.strip_prefix("www.").unwrap_or(&host);
    LICENSE_TEMPLATES
        .iter()
        .any(|(h, prefix)| host == *h && url.path().starts_with(prefix))
}

fn copyright_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)copyright|©|\(c\)").expect("valid regex"))
}

fn collect_strings<'a>(value: &'a Value, key: Option<&str>, out: &mut Vec<&'a str>) {
    match value {
        Value::String(s) if !key.is_some_and(|k| TIMESTAMP_KEYS.contains(&k) || k == "license") => out.push(s),
        Value::Array(items) => items.iter().for_each(|v| collect_strings(v, key, out)),
        Value::Object(map) => map.iter().for_each(|(k, v)| collect_strings(v, Some(k), out)),
        _ => {}
    }
}

pub(super) fn license_template_only(root: &Value) -> Vec<Diagnostic> {
    let Some(license) = path::resolve(root, "/provenance/license").and_then(text) else {
        return Vec::new();
    };
    if !is_template_license(license) {
        return Vec::new();
    }
    let mut strings = Vec::new();
    if let Some(prov) = path::resolve(root, "/provenance") {
        collect_strings(prov, None, &mut strings);
    }
    if strings.iter().any(|s| copyright_regex().is_match(s)) {
        return Vec::new();
    }
    vec![diag(
        codes::LICENSE_TEMPLATE_ONLY,
        Severity::Warning,
        "/provenance/license",
        format!("license `{license}` links to a generic template and no copyright holder is stated"),
        "a license template alone does not say who grants the rights",
    )]
}

fn coded_segment() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[A-Za-z]{0,2}[0-9]+[A-Za-z0-9]*$").expect("valid regex"))
}

fn word_segment() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[a-z]{5,}$").expect("valid regex"))
}

/// Heuristic for sample-sheet style names such as `P0641M00002_S2_L001_R2_001`.
pub fn is_obfuscated_filename(filename: &str, threshold: usize) -> bool {
    let name = filename.rsplit(['/', '\\']).next().unwrap_or(filename);
    let stem = name.split('.').next().unwrap_or(name);
    let segments: Vec<&str> = stem.split('_').collect();
    if stem.is_empty() || segments.len() < threshold {
        return false;
    }
    let all_coded = segments
        .iter()
        .all(|s| s.chars().count() <= 4 || coded_segment().is_match(s));
    let has_word = segments.iter().any(|s| word_segment().is_match(s));
    all_coded && !has_word
}

pub(super) fn obfuscated_filenames(root: &Value, threshold: usize) -> Vec<Diagnostic> {
    FILENAME_PATTERNS
        .iter()
        .flat_map(|p| path::instances(root, p))
        .filter_map(|(at, v)| text(v).map(|name| (at, name.to_string())))
        .filter(|(_, name)| is_obfuscated_filename(name, threshold))
        .map(|(at, name)| {
            diag(
                codes::OBFUSCATED_FILENAME,
                Severity::Warning,
                &at,
                format!("filename `{name}` does not describe its content"),
                "descriptive file names let others tell files apart without the platform",
            )
        })
        .collect()
}

/// (path, uri) for every script entry and file reference, in document order.
pub(super) fn resource_uris(root: &Value) -> Vec<(String, String)> {
    RESOURCE_PATTERNS
        .iter()
        .flat_map(|p| path::instances(root, p))
        .filter_map(|(at, v)| text(v).map(|u| (at, u.to_string())))
        .collect()
}

fn distinct_uris(root: &Value) -> Vec<(String, String)> {
    let mut seen = BTreeSet::new();
    resource_uris(root)
        .into_iter()
        .filter(|(_, uri)| seen.insert(uri.clone()))
        .collect()
}

pub(super) fn unreachable_resources(root: &Value, offline: bool, prober: &dyn UriProber) -> Vec<Diagnostic> {
    let targets = distinct_uris(root);
    if offline {
        return targets
            .into_iter()
            .map(|(at, uri)| {
                diag(
                    codes::UNREACHABLE_RESOURCE,
                    Severity::Info,
                    &at,
                    format!("unverified: `{uri}` was not probed (offline)"),
                    "referenced files and scripts should be retrievable",
                )
            })
            .collect();
    }

    let probe_all = || -> Vec<_> { targets.par_iter().map(|(_, uri)| prober.probe(uri)).collect() };
    let results = match rayon::ThreadPoolBuilder::new().num_threads(MAX_PARALLEL_PROBES).build() {
        Ok(pool) => pool.install(probe_all),
        Err(_) => targets.iter().map(|(_, uri)| prober.probe(uri)).collect(),
    };

    targets
        .iter()
        .zip(results)
        .filter_map(|((at, uri), r)| {
            let (severity, what) = match r.outcome {
                ProbeOutcome::Reachable => return None,
                ProbeOutcome::Unreachable => (Severity::Warning, "is unreachable".to_string()),
                ProbeOutcome::AuthRequired => (Severity::Warning, "requires authorization".to_string()),
                ProbeOutcome::UnsupportedScheme => (Severity::Info, "has a scheme that is not probed".to_string()),
                ProbeOutcome::SkippedOffline => (Severity::Info, "was not probed (offline)".to_string()),
            };
            let status = r.status_code.map(|s| format!(" (HTTP {s})")).unwrap_or_default();
            Some(diag(
                codes::UNREACHABLE_RESOURCE,
                severity,
                at,
                format!("`{uri}` {what}{status}"),
                "referenced files and scripts should be retrievable",
            ))
        })
        .collect()
}

fn host_of(uri: &str) -> Option<String> {
    url::Url::parse(uri)
        .ok()
        .and_then(|u| u.host_str().map(str::to_ascii_lowercase))
}

pub(super) fn platform_lock_in(root: &Value) -> Vec<Diagnostic> {
    let uris = resource_uris(root);
    if uris.is_empty() {
        return Vec::new();
    }
    let hosts: Option<BTreeSet<String>> = uris.iter().map(|(_, u)| host_of(u)).collect();
    let Some(host) = hosts.filter(|h| h.len() == 1).and_then(|h| h.into_iter().next()) else {
        return Vec::new();
    };
    let platforms: Vec<&str> = path::instances(root, "/description/platform/*")
        .into_iter()
        .filter_map(|(_, v)| text(v))
        .collect();
    let Some(platform) = platforms
        .iter()
        .find(|p| host.contains(&p.to_ascii_lowercase()))
    else {
        return Vec::new();
    };
    vec![diag(
        codes::PLATFORM_LOCK_IN,
        Severity::Warning,
        "/description/platform",
        format!("all {} file and script URIs are served by `{host}`, the host of platform `{platform}`", uris.len()),
        "a workflow whose files live only on its platform cannot be rerun elsewhere",
    )]
}

fn tokens(s: &str) -> BTreeSet<String> {
    s.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 4 && !STOP_WORDS.contains(t))
        .map(str::to_string)
        .collect()
}

pub(super) fn usability_disconnect(doc: &BcoDocument) -> Vec<Diagnostic> {
    let Some(usability) = doc.usability.as_deref().filter(|u| !u.trim().is_empty()) else {
        return Vec::new();
    };
    let names: Vec<&str> = doc
        .pipeline_steps()
        .iter()
        .filter_map(|s| s.name.as_deref())
        .filter(|n| !n.trim().is_empty())
        .collect();
    if names.is_empty() {
        return Vec::new();
    }
    let usability_tokens = tokens(usability);
    if names.iter().any(|n| !tokens(n).is_disjoint(&usability_tokens)) {
        return Vec::new();
    }
    vec![diag(
        codes::USABILITY_DESCRIPTION_DISCONNECT,
        Severity::Warning,
        "/usability",
        "no pipeline step name shares a term with the usability text".to_string(),
        "method outline and pipeline steps should be traceable to each other",
    )]
}

pub(super) fn missing_permissions(doc: &BcoDocument, root: &Value) -> Vec<Diagnostic> {
    let declared: Vec<String> = declared_permissions(doc).into_iter().map(|p| p.resource_path).collect();
    let covered = |at: &str| {
        declared
            .iter()
            .any(|d| at == d || at.strip_prefix(d.as_str()).is_some_and(|rest| rest.starts_with('/')))
    };
    resource_uris(root)
        .into_iter()
        .filter(|(at, _)| !covered(at))
        .map(|(at, uri)| {
            diag(
                codes::MISSING_PERMISSION_DECLARATION,
                Severity::Info,
                &at,
                format!("no access declaration (open, authorization_required, not_authorized) for `{uri}`"),
                "readers need to know whether a resource is open before trying to obtain it",
            )
        })
        .collect()
}

pub(super) fn weak_keywords(doc: &BcoDocument) -> Vec<Diagnostic> {
    let keywords: Vec<&str> = doc.keywords().iter().map(|k| k.trim()).filter(|k| !k.is_empty()).collect();
    if keywords.is_empty() {
        return vec![diag(
            codes::WEAK_KEYWORDS,
            Severity::Info,
            "/description/keywords",
            "keyword list is empty".to_string(),
            "keywords should capture the core content",
        )];
    }
    let mut context = tokens(doc.usability.as_deref().unwrap_or_default());
    for s in doc.pipeline_steps() {
        context.extend(tokens(s.name.as_deref().unwrap_or_default()));
    }
    for p in doc.platforms() {
        context.extend(tokens(p));
    }
    let weak = |k: &&str| {
        let parts: Vec<&str> = k.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).collect();
        parts.len() == 1 && !context.contains(&parts[0].to_lowercase())
    };
    if !keywords.iter().all(weak) {
        return Vec::new();
    }
    vec![diag(
        codes::WEAK_KEYWORDS,
        Severity::Info,
        "/description/keywords",
        format!("every keyword ({}) is a single term found nowhere else in the document", keywords.join(", ")),
        "keywords should capture the core content",
    )]
}

pub(super) fn longevity_gaps(root: &Value) -> Vec<Diagnostic> {
    let anchors = ["/provenance/created", "/provenance/modified"];
    if anchors.iter().all(|p| path::populated_instances(root, p).is_empty()) {
        return Vec::new();
    }
    let optional_present = Aspect::Time
        .fields()
        .iter()
        .filter(|p| !anchors.contains(p))
        .any(|p| !path::populated_instances(root, p).is_empty());
    if optional_present {
        return Vec::new();
    }
    vec![diag(
        codes::LONGEVITY_GAPS,
        Severity::Info,
        "/provenance",
        "only creation and modification times are recorded; no expiry, embargo or access times".to_string(),
        "access and validity times show how long a result can be reproduced",
    )]
}
