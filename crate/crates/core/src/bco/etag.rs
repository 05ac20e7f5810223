//! Integrity digest over the eight domains.
//!
//! The digest is SHA-256 over the canonical JSON of an object holding only
//! the domain keys present in the document; `object_id`, `spec_version`,
//! `etag` and any unrecognised top-level keys are left out. Canonical JSON
//! here means UTF-8, object keys sorted by code point, and no whitespace
//! between tokens.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::model::{BcoDocument, DOMAIN_KEYS};

pub const ETAG_CONVENTION: &str = "sha256 over canonical JSON (UTF-8, sorted keys, no insignificant whitespace) \
of the eight domains; object_id, spec_version, etag and unrecognised top-level keys excluded";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EtagResult {
    Match,
    Mismatch { expected: String, computed: String },
    Absent,
}

/// Canonical serialization: sorted keys, compact separators.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_canonical(value, &mut out);
    out
}

fn write_canonical(value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(key.clone()).to_string());
                out.push(':');
                write_canonical(&map[key], out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// The payload the digest covers.
pub fn etag_payload(doc: &BcoDocument) -> Value {
    let full = doc.to_value();
    let mut domains = Map::new();
    if let Value::Object(map) = full {
        for key in DOMAIN_KEYS {
            if let Some(v) = map.get(key) {
                domains.insert(key.to_string(), v.clone());
            }
        }
    }
    Value::Object(domains)
}

pub fn compute_etag(doc: &BcoDocument) -> String {
    let canonical = canonical_json(&etag_payload(doc));
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn verify_etag(doc: &BcoDocument) -> EtagResult {
    let expected = match doc.etag.as_deref().map(str::trim) {
        None | Some("") => return EtagResult::Absent,
        Some(e) => e.to_string(),
    };
    let computed = compute_etag(doc);
    if expected.eq_ignore_ascii_case(&computed) {
        EtagResult::Match
    } else {
        EtagResult::Mismatch { expected, computed }
    }
}

/// Returns the document with its etag replaced by the computed digest.
pub fn with_fresh_etag(mut doc: BcoDocument) -> BcoDocument {
    doc.etag = Some(compute_etag(&doc));
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bco::model::ParameterEntry;
    use serde_json::json;

    fn sample() -> BcoDocument {
        BcoDocument {
            object_id: Some("https://example.org/BCO_1/1.0".into()),
            usability: Some("Align reads".into()),
            parametric: Some(vec![ParameterEntry {
                param: Some("seed".into()),
                value: Some(json!("11")),
                ..Default::default()
            }]),
            ..Default::default()
        }
    }

    #[test]
    fn canonical_form_sorts_and_compacts() {
        let v = json!({"b": [1, {"d": "x", "c": null}], "a": "é"});
        assert_eq!(canonical_json(&v), r#"{"a":"é","b":[1,{"c":null,"d":"x"}]}"#);
    }

    #[test]
    fn digest_is_sha256_of_the_domain_payload() {
        let doc = sample();
        let expected = hex::encode(Sha256::digest(
            br#"{"parametric":[{"param":"seed","value":"11"}],"usability":"Align reads"}"#,
        ));
        assert_eq!(compute_etag(&doc), expected);
        assert_eq!(expected.len(), 64);
    }

    #[test]
    fn self_consistent_document_matches() {
        let doc = with_fresh_etag(sample());
        assert_eq!(verify_etag(&doc), EtagResult::Match);
        let mut upper = doc.clone();
        upper.etag = upper.etag.map(|e| e.to_uppercase());
        assert_eq!(verify_etag(&upper), EtagResult::Match);
    }

    #[test]
    fn altered_parameter_mismatches() {
        let mut doc = with_fresh_etag(sample());
        doc.parametric.as_mut().unwrap()[0].value = Some(json!("12"));
        assert!(matches!(verify_etag(&doc), EtagResult::Mismatch { .. }));
    }

    #[test]
    fn top_level_fields_do_not_affect_digest() {
        let a = sample();
        let mut b = sample();
        b.object_id = Some("https://example.org/other".into());
        b.spec_version = Some("https://example.org/schema".into());
        assert_eq!(compute_etag(&a), compute_etag(&b));
    }

    #[test]
    fn empty_etag_is_absent() {
        let mut doc = sample();
        doc.etag = Some(String::new());
        assert_eq!(verify_etag(&doc), EtagResult::Absent);
        doc.etag = None;
        assert_eq!(verify_etag(&doc), EtagResult::Absent);
    }
}
