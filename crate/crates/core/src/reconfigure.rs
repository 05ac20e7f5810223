//! Document transforms that add reproducibility records in the Extension
//! domain, and a preview of the merged conceptual layout.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bco::{with_fresh_etag, BcoDocument, FileRef};
use crate::path;
use crate::Severity;

/// Schema identifier of the extension record this tool owns.
pub const EXTENSION_SCHEMA: &str = "urn:primad-bco:extension:reproducibility:v1";
const EXTENSION_KEY: &str = "reproducibility_extension";
pub const DEFAULT_CONCEPTUAL_NAME: &str = "Conceptual Domain";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("required domain `{0}` is missing")]
    MissingDomain(&'static str),
    #[error("`{0}` does not resolve to a URI-bearing field")]
    UnresolvedPath(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionRecord {
    pub date: String,
    pub result: String,
    #[serde(default)]
    pub obstacles: Vec<String>,
    pub coverage: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_bco_ref: Option<String>,
}

impl ReproductionRecord {
    pub fn validate(&self) -> Result<(), TransformError> {
        if !(0.0..=1.0).contains(&self.coverage) {
            return Err(TransformError::InvalidRecord(format!(
                "coverage {} is outside [0, 1]",
                self.coverage
            )));
        }
        if chrono::DateTime::parse_from_rfc3339(self.date.trim()).is_err() {
            return Err(TransformError::InvalidRecord(format!("date `{}` is not RFC 3339", self.date)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisseminationKind {
    Publication,
    Talk,
    Presentation,
    Poster,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisseminationRecord {
    pub identifier: String,
    pub kind: DisseminationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub medium: Option<String>,
}

impl DisseminationRecord {
    pub fn validate(&self) -> Result<(), TransformError> {
        if self.identifier.trim().is_empty() {
            return Err(TransformError::InvalidRecord("identifier is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Access {
    Open,
    AuthorizationRequired,
    NotAuthorized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourcePermission {
    pub resource_path: String,
    pub access: Access,
    pub justification: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub how_to_obtain: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Notice {
    pub severity: Severity,
    pub message: String,
}

impl Notice {
    fn new(severity: Severity, message: impl Into<String>) -> Self {
        Self {
            severity,
            message: message.into(),
        }
    }
}

/// A transformed document plus anything worth telling the user.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformed {
    pub document: BcoDocument,
    pub notices: Vec<Notice>,
}

fn is_own_record(entry: &Value) -> bool {
    entry.get("extension_schema").and_then(Value::as_str) == Some(EXTENSION_SCHEMA)
}

fn own_record(doc: &BcoDocument) -> Option<&Map<String, Value>> {
    doc.extensions()
        .iter()
        .find(|e| is_own_record(e))
        .and_then(|e| e.get(EXTENSION_KEY))
        .and_then(Value::as_object)
}

fn list<T: for<'de> Deserialize<'de>>(doc: &BcoDocument, key: &str) -> Vec<T> {
    own_record(doc)
        .and_then(|r| r.get(key))
        .and_then(Value::as_array)
        .map(|items| {
            items
                .iter()
                .filter_map(|v| serde_json::from_value(v.clone()).ok())
                .collect()
        })
        .unwrap_or_default()
}

pub fn reproduction_records(doc: &BcoDocument) -> Vec<ReproductionRecord> {
    list(doc, "reproductions")
}

pub fn dissemination_records(doc: &BcoDocument) -> Vec<DisseminationRecord> {
    list(doc, "disseminations")
}

pub fn declared_permissions(doc: &BcoDocument) -> Vec<ResourcePermission> {
    list(doc, "resource_permissions")
}

/// The item list under `key` of this tool's extension record, created on demand.
fn own_list<'a>(doc: &'a mut BcoDocument, key: &str) -> &'a mut Vec<Value> {
    let extensions = doc.extension.get_or_insert_with(Vec::new);
    let index = match extensions.iter().position(is_own_record) {
        Some(i) => i,
        None => {
            extensions.push(json!({
                "extension_schema": EXTENSION_SCHEMA,
                EXTENSION_KEY: {}
            }));
            extensions.len() - 1
        }
    };
    let entry = extensions[index].as_object_mut().expect("own record is an object");
    let body = entry
        .entry(EXTENSION_KEY)
        .or_insert_with(|| Value::Object(Map::new()));
    if !body.is_object() {
        *body = Value::Object(Map::new());
    }
    let slot = body
        .as_object_mut()
        .expect("checked above")
        .entry(key)
        .or_insert_with(|| Value::Array(Vec::new()));
    if !slot.is_array() {
        *slot = Value::Array(Vec::new());
    }
    slot.as_array_mut().expect("checked above")
}

fn append_unique(doc: &BcoDocument, key: &str, record: Value, what: &str) -> Transformed {
    let mut document = doc.clone();
    let items = own_list(&mut document, key);
    let mut notices = Vec::new();
    if items.contains(&record) {
        notices.push(Notice::new(Severity::Info, format!("identical {what} already present; not added again")));
    } else {
        items.push(record);
    }
    Transformed {
        document: with_fresh_etag(document),
        notices,
    }
}

pub fn add_reproduction_record(doc: &BcoDocument, rec: &ReproductionRecord) -> Result<Transformed, TransformError> {
    rec.validate()?;
    let value = serde_json::to_value(rec).map_err(|e| TransformError::InvalidRecord(e.to_string()))?;
    Ok(append_unique(doc, "reproductions", value, "reproduction record"))
}

pub fn add_dissemination(doc: &BcoDocument, rec: &DisseminationRecord) -> Result<Transformed, TransformError> {
    rec.validate()?;
    let value = serde_json::to_value(rec).map_err(|e| TransformError::InvalidRecord(e.to_string()))?;
    Ok(append_unique(doc, "disseminations", value, "dissemination record"))
}

/// Whether `pointer` names a URI string or a record holding one.
fn is_uri_bearing(root: &Value, pointer: &str) -> bool {
    let is_uri = |v: &Value| v.as_str().is_some_and(|s| url::Url::parse(s.trim()).is_ok());
    match path::resolve(root, pointer) {
        Some(v) if is_uri(v) => true,
        Some(Value::Object(map)) => map.get("uri").is_some_and(is_uri),
        _ => false,
    }
}

/// Stores an access declaration, replacing any earlier one for the same path.
pub fn annotate_resource_permission(
    doc: &BcoDocument,
    perm: &ResourcePermission,
) -> Result<Transformed, TransformError> {
    if !is_uri_bearing(&doc.to_value(), &perm.resource_path) {
        return Err(TransformError::UnresolvedPath(perm.resource_path.clone()));
    }
    let value = serde_json::to_value(perm).map_err(|e| TransformError::InvalidRecord(e.to_string()))?;
    let mut document = doc.clone();
    let items = own_list(&mut document, "resource_permissions");
    let mut notices = Vec::new();
    let same_path = |v: &Value| v.get("resource_path").and_then(Value::as_str) == Some(perm.resource_path.as_str());
    match items.iter().position(same_path) {
        Some(i) if items[i] == value => {
            notices.push(Notice::new(Severity::Info, "identical permission already present; not added again"));
        }
        Some(i) => {
            items[i] = value;
            notices.push(Notice::new(
                Severity::Info,
                format!("replaced earlier permission for {}", perm.resource_path),
            ));
        }
        None => items.push(value),
    }
    Ok(Transformed {
        document: with_fresh_etag(document),
        notices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Database,
    Ontology,
    TheoreticalMethodPublication,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedReference {
    #[serde(rename = "type")]
    pub kind: ReferenceKind,
    pub identifier: String,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodStepLink {
    pub method_outline_index: usize,
    pub step_number: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConceptualDomain {
    pub objectives: String,
    pub method_outline: Vec<String>,
    pub results: String,
    pub interpretation: String,
    pub method_step_links: Vec<MethodStepLink>,
    pub input_list: Vec<FileRef>,
    pub output_list: Vec<FileRef>,
    pub platform: Vec<String>,
    pub keywords: Vec<String>,
    pub xref: Vec<TypedReference>,
}

/// Preview produced by `to_conceptual`; the source document is unchanged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConceptualPreview {
    pub domain_name: String,
    pub conceptual: ConceptualDomain,
    /// The execution domain with the pipeline steps moved in.
    pub execution: Value,
    pub warnings: Vec<Notice>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Objectives,
    Method,
    Results,
    Interpretation,
}

fn heading_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)^\s*(needs?|objectives?|purpose|aims?|methods?|results?|interpretation|usage|use)\s*:\s*(.*)$")
            .expect("valid regex")
    })
}

fn section_of(word: &str) -> Section {
    match word.to_ascii_lowercase().trim_end_matches('s') {
        "method" => Section::Method,
        "result" => Section::Results,
        "interpretation" | "usage" | "use" => Section::Interpretation,
        _ => Section::Objectives,
    }
}

struct UsabilitySections {
    objectives: Vec<String>,
    method: Vec<String>,
    results: Vec<String>,
    interpretation: Vec<String>,
}

/// Splits usability text at heading lines such as `Method:`. Returns
/// `None` when no heading is found.
fn split_usability(text: &str) -> Option<UsabilitySections> {
    let mut s = UsabilitySections {
        objectives: Vec::new(),
        method: Vec::new(),
        results: Vec::new(),
        interpretation: Vec::new(),
    };
    let mut current = Section::Objectives;
    let mut found = false;
    for line in text.lines() {
        let body = if let Some(c) = heading_regex().captures(line) {
            found = true;
            current = section_of(&c[1]);
            c[2].trim().to_string()
        } else if line.trim_end().ends_with(':') && line.trim().len() > 1 {
            found = true;
            let word = line.trim().trim_end_matches(':');
            current = section_of(word.split_whitespace().next().unwrap_or(word));
            String::new()
        } else {
            line.trim().to_string()
        };
        if body.is_empty() {
            continue;
        }
        let target = match current {
            Section::Objectives => &mut s.objectives,
            Section::Method => &mut s.method,
            Section::Results => &mut s.results,
            Section::Interpretation => &mut s.interpretation,
        };
        target.push(body);
    }
    found.then_some(s)
}

fn reference_kind(namespace: &str, name: &str) -> ReferenceKind {
    const ONTOLOGIES: [&str; 9] = ["so", "go", "obo", "edam", "ncit", "efo", "uberon", "chebi", "mondo"];
    const PUBLICATIONS: [&str; 5] = ["doi", "pubmed", "pmid", "pmc", "arxiv"];
    let ns = namespace.trim().to_ascii_lowercase();
    let name = name.to_ascii_lowercase();
    if ONTOLOGIES.contains(&ns.as_str()) || name.contains("ontology") {
        ReferenceKind::Ontology
    } else if PUBLICATIONS.contains(&ns.as_str()) || name.contains("publication") {
        ReferenceKind::TheoreticalMethodPublication
    } else {
        ReferenceKind::Database
    }
}

/// Builds the merged conceptual preview and the execution domain with the
/// pipeline steps relocated into it.
pub fn to_conceptual(doc: &BcoDocument, domain_name: Option<&str>) -> Result<ConceptualPreview, TransformError> {
    let usability = doc
        .usability
        .as_deref()
        .filter(|u| !u.trim().is_empty())
        .ok_or(TransformError::MissingDomain("usability"))?;
    let description = doc.description.as_ref().ok_or(TransformError::MissingDomain("description"))?;

    let mut warnings = Vec::new();
    let mut conceptual = ConceptualDomain::default();
    match split_usability(usability) {
        Some(s) => {
            conceptual.objectives = s.objectives.join("\n");
            conceptual.method_outline = s.method;
            conceptual.results = s.results.join("\n");
            conceptual.interpretation = s.interpretation.join("\n");
        }
        None => {
            conceptual.objectives = usability.trim().to_string();
            warnings.push(Notice::new(
                Severity::Warning,
                "usability has no section headings; all text placed under objectives",
            ));
        }
    }

    let steps = description.pipeline_steps.as_deref().unwrap_or_default();
    for step in steps {
        conceptual.input_list.extend(step.input_list.iter().flatten().cloned());
        conceptual.output_list.extend(step.output_list.iter().flatten().cloned());
    }
    conceptual.platform = description.platform.clone().unwrap_or_default();
    conceptual.keywords = description.keywords.clone().unwrap_or_default();
    if conceptual.keywords.is_empty() {
        warnings.push(Notice::new(Severity::Warning, "description has no keywords"));
    }
    for x in description.xref.iter().flatten() {
        let namespace = x.namespace.as_deref().unwrap_or_default();
        let role = x.name.clone().unwrap_or_default();
        let kind = reference_kind(namespace, &role);
        for id in x.ids.iter().flatten() {
            let identifier = if namespace.is_empty() { id.clone() } else { format!("{namespace}:{id}") };
            conceptual.xref.push(TypedReference {
                kind,
                identifier,
                role: role.clone(),
            });
        }
    }

    let relocated: Vec<Value> = steps
        .iter()
        .map(|step| {
            let mut v = serde_json::to_value(step).expect("model serializes to JSON");
            if let Some(map) = v.as_object_mut() {
                map.remove("input_list");
                map.remove("output_list");
            }
            v
        })
        .collect();
    let mut execution = match &doc.execution {
        Some(e) => serde_json::to_value(e).expect("model serializes to JSON"),
        None => Value::Object(Map::new()),
    };
    if let Some(map) = execution.as_object_mut() {
        map.insert("pipeline_steps".into(), Value::Array(relocated));
    }

    Ok(ConceptualPreview {
        domain_name: domain_name.unwrap_or(DEFAULT_CONCEPTUAL_NAME).to_string(),
        conceptual,
        execution,
        warnings,
    })
}
