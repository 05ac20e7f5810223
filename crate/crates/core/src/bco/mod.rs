//! BioCompute Object documents: typed model, parsing, structural
//! validation and the integrity digest.

mod etag;
mod model;
mod parse;
mod validate;

pub use etag::{canonical_json, compute_etag, etag_payload, verify_etag, with_fresh_etag, EtagResult, ETAG_CONVENTION};
pub use model::*;
pub use parse::{from_value, parse_bco, ParseError};
pub use validate::{codes, validate_structure, StructureFinding};

/// Serializes the document back to JSON text.
pub fn to_json_pretty(doc: &BcoDocument) -> String {
    serde_json::to_string_pretty(&doc.to_value()).expect("model serializes to JSON")
}
