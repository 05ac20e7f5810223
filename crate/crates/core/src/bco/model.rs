//! Typed BioCompute Object model.
//!
//! Every field is optional at the type level so that incomplete documents
//! still parse; `validate_structure` reports what is missing. Keys the
//! model does not know are kept in an `extra` map on each record and
//! written back unchanged.

use std::collections::BTreeMap;

use chrono::{DateTime, FixedOffset};
use serde::Serialize;
use serde_json::{Map, Value};

pub type Extra = Map<String, Value>;

/// The three top-level fields plus the eight domains.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BcoDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub object_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub etag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDomain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub usability: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<DescriptionDomain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub execution: Option<ExecutionDomain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub io: Option<IoDomain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parametric: Option<Vec<ParameterEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDomain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<Vec<Value>>,
    #[serde(flatten)]
    pub extra: Extra,
}

/// Key names of the eight domains as they appear in the document.
pub const DOMAIN_KEYS: [&str; 8] = [
    "usability",
    "provenance",
    "description",
    "execution",
    "io",
    "parametric",
    "error",
    "extension",
];

pub const TOP_LEVEL_KEYS: [&str; 3] = ["object_id", "spec_version", "etag"];

/// Contribution roles accepted for contributors (PAV-derived).
pub const CONTRIBUTION_ROLES: [&str; 13] = [
    "authoredBy",
    "contributedBy",
    "createdAt",
    "createdBy",
    "createdWith",
    "curatedBy",
    "derivedFrom",
    "importedBy",
    "importedFrom",
    "providedBy",
    "retrievedBy",
    "retrievedFrom",
    "sourceAccessedBy",
];

/// A timestamp as written in the document. RFC 3339 text is interpreted;
/// anything else is carried as opaque text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Timestamp(pub String);

impl Timestamp {
    pub fn parsed(&self) -> Option<DateTime<FixedOffset>> {
        DateTime::parse_from_rfc3339(self.0.trim()).ok()
    }

    pub fn is_rfc3339(&self) -> bool {
        self.parsed().is_some()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ProvenanceDomain {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub license: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modified: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contributors: Option<Vec<Contributor>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub review: Option<Vec<ReviewRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_from: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obsolete_after: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embargo: Option<EmbargoPeriod>,
    #[serde(flatten)]
    pub extra: Extra,
}

/// Unrecognised contributor keys (the free-form "other details") stay in
/// `extra`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Contributor {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contribution: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affiliation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orcid: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReviewRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reviewer_comment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub date: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reviewer: Option<Contributor>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EmbargoPeriod {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_time: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_time: Option<Timestamp>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DescriptionDomain {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keywords: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xref: Option<Vec<ExternalReference>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub platform: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline_steps: Option<Vec<PipelineStep>>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExternalReference {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub namespace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ids: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access_time: Option<Timestamp>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PipelineStep {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_number: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prerequisite: Option<Vec<FileRef>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_list: Option<Vec<FileRef>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_list: Option<Vec<FileRef>>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FileRef {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filename: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uri: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access_time: Option<Timestamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha1_checksum: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

/// An output-subdomain entry: a file reference plus its media type.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct OutputRef {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub media_type: Option<String>,
    #[serde(flatten)]
    pub file: FileRef,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExecutionDomain {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub script: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub script_driver: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub software_prerequisites: Option<Vec<SoftwarePrerequisite>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub external_data_endpoints: Option<Vec<DataEndpoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environment_variables: Option<BTreeMap<String, String>>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SoftwarePrerequisite {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uri: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access_time: Option<Timestamp>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DataEndpoint {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uri: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IoDomain {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_subdomain: Option<Vec<FileRef>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_subdomain: Option<Vec<OutputRef>>,
    #[serde(flatten)]
    pub extra: Extra,
}

/// Step references are written either as integers or as numeric strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum StepRef {
    Number(i64),
    Text(String),
}

impl StepRef {
    pub fn number(&self) -> Option<i64> {
        match self {
            StepRef::Number(n) => Some(*n),
            StepRef::Text(s) => s.trim().parse().ok(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ParameterEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    /// A scalar (string, number or boolean), kept as written.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<StepRef>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ErrorDomain {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_error: Option<BTreeMap<String, ErrorEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithmic_error: Option<BTreeMap<String, ErrorEntry>>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl ErrorDomain {
    pub fn entry_count(&self) -> usize {
        self.empirical_error.as_ref().map_or(0, BTreeMap::len)
            + self.algorithmic_error.as_ref().map_or(0, BTreeMap::len)
    }
}

/// One accepted-error rule: either bare rule text or a structured record.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ErrorEntry {
    Rule(String),
    Detailed(ErrorRule),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ErrorRule {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inclusion_rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

impl ErrorEntry {
    pub fn rule_text(&self) -> Option<&str> {
        match self {
            ErrorEntry::Rule(text) => Some(text),
            ErrorEntry::Detailed(rule) => rule.inclusion_rule.as_deref(),
        }
    }
}

impl BcoDocument {
    /// The document as a JSON value (keys sorted).
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("model serializes to JSON")
    }

    pub fn pipeline_steps(&self) -> &[PipelineStep] {
        self.description
            .as_ref()
            .and_then(|d| d.pipeline_steps.as_deref())
            .unwrap_or_default()
    }

    pub fn platforms(&self) -> &[String] {
        self.description
            .as_ref()
            .and_then(|d| d.platform.as_deref())
            .unwrap_or_default()
    }

    pub fn keywords(&self) -> &[String] {
        self.description
            .as_ref()
            .and_then(|d| d.keywords.as_deref())
            .unwrap_or_default()
    }

    pub fn parameters(&self) -> &[ParameterEntry] {
        self.parametric.as_deref().unwrap_or_default()
    }

    pub fn extensions(&self) -> &[Value] {
        self.extension.as_deref().unwrap_or_default()
    }
}

/// Model field patterns, used to check that the mapping and aspect tables
/// only name fields the model knows.
pub const MODEL_FIELDS: &[&str] = &[
    "/object_id",
    "/spec_version",
    "/etag",
    "/usability",
    "/provenance",
    "/provenance/name",
    "/provenance/version",
    "/provenance/license",
    "/provenance/created",
    "/provenance/modified",
    "/provenance/contributors",
    "/provenance/contributors/*",
    "/provenance/contributors/*/name",
    "/provenance/contributors/*/contribution",
    "/provenance/contributors/*/affiliation",
    "/provenance/contributors/*/email",
    "/provenance/contributors/*/orcid",
    "/provenance/review",
    "/provenance/review/*",
    "/provenance/review/*/status",
    "/provenance/review/*/reviewer_comment",
    "/provenance/review/*/date",
    "/provenance/review/*/reviewer",
    "/provenance/derived_from",
    "/provenance/obsolete_after",
    "/provenance/embargo",
    "/provenance/embargo/start_time",
    "/provenance/embargo/end_time",
    "/description",
    "/description/keywords",
    "/description/xref",
    "/description/xref/*",
    "/description/xref/*/namespace",
    "/description/xref/*/name",
    "/description/xref/*/ids",
    "/description/xref/*/access_time",
    "/description/platform",
    "/description/pipeline_steps",
    "/description/pipeline_steps/*",
    "/description/pipeline_steps/*/step_number",
    "/description/pipeline_steps/*/name",
    "/description/pipeline_steps/*/description",
    "/description/pipeline_steps/*/version",
    "/description/pipeline_steps/*/prerequisite",
    "/description/pipeline_steps/*/prerequisite/*/uri",
    "/description/pipeline_steps/*/input_list",
    "/description/pipeline_steps/*/input_list/*/filename",
    "/description/pipeline_steps/*/input_list/*/uri",
    "/description/pipeline_steps/*/input_list/*/access_time",
    "/description/pipeline_steps/*/input_list/*/sha1_checksum",
    "/description/pipeline_steps/*/output_list",
    "/description/pipeline_steps/*/output_list/*/filename",
    "/description/pipeline_steps/*/output_list/*/uri",
    "/description/pipeline_steps/*/output_list/*/access_time",
    "/description/pipeline_steps/*/output_list/*/sha1_checksum",
    "/execution",
    "/execution/script",
    "/execution/script_driver",
    "/execution/software_prerequisites",
    "/execution/software_prerequisites/*/name",
    "/execution/software_prerequisites/*/version",
    "/execution/software_prerequisites/*/uri",
    "/execution/software_prerequisites/*/access_time",
    "/execution/external_data_endpoints",
    "/execution/external_data_endpoints/*/name",
    "/execution/external_data_endpoints/*/uri",
    "/execution/environment_variables",
    "/io",
    "/io/input_subdomain",
    "/io/input_subdomain/*",
    "/io/input_subdomain/*/filename",
    "/io/input_subdomain/*/uri",
    "/io/input_subdomain/*/access_time",
    "/io/input_subdomain/*/sha1_checksum",
    "/io/output_subdomain",
    "/io/output_subdomain/*",
    "/io/output_subdomain/*/filename",
    "/io/output_subdomain/*/media_type",
    "/io/output_subdomain/*/uri",
    "/io/output_subdomain/*/access_time",
    "/io/output_subdomain/*/sha1_checksum",
    "/parametric",
    "/parametric/*",
    "/parametric/*/param",
    "/parametric/*/value",
    "/parametric/*/step",
    "/error",
    "/error/empirical_error",
    "/error/empirical_error/*",
    "/error/algorithmic_error",
    "/error/algorithmic_error/*",
    "/extension",
    "/extension/*",
    "/extension/*/extension_schema",
];

/// Compulsory leaf fields. Compulsory lists that only hold records
/// (contributors, xref, pipeline steps, ...) are represented by the
/// compulsory fields inside them.
pub const MANDATORY_FIELDS: [&str; 32] = [
    "/object_id",
    "/spec_version",
    "/etag",
    "/usability",
    "/provenance/name",
    "/provenance/version",
    "/provenance/license",
    "/provenance/created",
    "/provenance/modified",
    "/provenance/contributors/*/name",
    "/provenance/contributors/*/contribution",
    "/description/keywords",
    "/description/xref/*/namespace",
    "/description/xref/*/name",
    "/description/xref/*/ids",
    "/description/platform",
    "/description/pipeline_steps/*/step_number",
    "/description/pipeline_steps/*/name",
    "/description/pipeline_steps/*/description",
    "/description/pipeline_steps/*/input_list",
    "/description/pipeline_steps/*/output_list",
    "/execution/script",
    "/execution/script_driver",
    "/execution/software_prerequisites/*/name",
    "/execution/software_prerequisites/*/version",
    "/execution/software_prerequisites/*/uri",
    "/execution/external_data_endpoints/*/name",
    "/execution/external_data_endpoints/*/uri",
    "/execution/environment_variables",
    "/io/input_subdomain/*/uri",
    "/io/output_subdomain/*/uri",
    "/io/output_subdomain/*/media_type",
];

/// Whether a pattern names a field of the model (wildcards match wildcards).
pub fn is_model_field(pattern: &str) -> bool {
    MODEL_FIELDS.contains(&pattern)
}
