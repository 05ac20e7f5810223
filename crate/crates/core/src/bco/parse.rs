use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::model::*;
use crate::path;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    TypeMismatch {
        path: String,
        expected: &'static str,
        found: &'static str,
    },
}

impl ParseError {
    pub fn path(&self) -> &str {
        match self {
            ParseError::Syntax { .. } => path::ROOT,
            ParseError::TypeMismatch { path, .. } => path,
        }
    }
}

type Result<T> = std::result::Result<T, ParseError>;

fn kind(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn mismatch(path: &str, expected: &'static str, found: &Value) -> ParseError {
    ParseError::TypeMismatch {
        path: if path.is_empty() { path::ROOT.to_string() } else { path.to_string() },
        expected,
        found: kind(found),
    }
}

/// Parses one BioCompute Object from JSON text.
pub fn parse_bco(text: &str) -> Result<BcoDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_value(value)
}

/// Builds the typed model from an already-decoded JSON value.
pub fn from_value(value: Value) -> Result<BcoDocument> {
    let mut f = Fields::new(value, "")?;
    Ok(BcoDocument {
        object_id: f.string("object_id")?,
        spec_version: f.string("spec_version")?,
        etag: f.string("etag")?,
        provenance: f.object("provenance", provenance)?,
        usability: f.string("usability")?,
        description: f.object("description", description)?,
        execution: f.object("execution", execution)?,
        io: f.object("io", io)?,
        parametric: f.list("parametric", parameter)?,
        error: f.object("error", error_domain)?,
        extension: f.list("extension", |v, _| Ok(v))?,
        extra: f.finish(),
    })
}

/// Object fields being consumed; whatever is left over becomes `extra`.
struct Fields {
    map: Map<String, Value>,
    path: String,
}

impl Fields {
    fn new(value: Value, at: &str) -> Result<Self> {
        match value {
            Value::Object(map) => Ok(Self {
                map,
                path: at.to_string(),
            }),
            other => Err(mismatch(at, "object", &other)),
        }
    }

    fn child(&self, key: &str) -> String {
        path::join(&self.path, key)
    }

    fn take(&mut self, key: &str) -> Option<(Value, String)> {
        let at = self.child(key);
        self.map.remove(key).map(|v| (v, at))
    }

    fn string(&mut self, key: &str) -> Result<Option<String>> {
        self.take(key).map(|(v, at)| string(v, &at)).transpose()
    }

    fn timestamp(&mut self, key: &str) -> Result<Option<Timestamp>> {
        Ok(self.string(key)?.map(Timestamp))
    }

    fn integer(&mut self, key: &str) -> Result<Option<i64>> {
        self.take(key)
            .map(|(v, at)| v.as_i64().ok_or_else(|| mismatch(&at, "integer", &v)))
            .transpose()
    }

    fn strings(&mut self, key: &str) -> Result<Option<Vec<String>>> {
        self.list(key, string)
    }

    fn list<T>(&mut self, key: &str, item: impl Fn(Value, &str) -> Result<T>) -> Result<Option<Vec<T>>> {
        let Some((value, at)) = self.take(key) else {
            return Ok(None);
        };
        match value {
            Value::Array(items) => items
                .into_iter()
                .enumerate()
                .map(|(i, v)| item(v, &path::join_index(&at, i)))
                .collect::<Result<Vec<_>>>()
                .map(Some),
            other => Err(mismatch(&at, "array", &other)),
        }
    }

    fn object<T>(&mut self, key: &str, build: impl Fn(Value, &str) -> Result<T>) -> Result<Option<T>> {
        self.take(key).map(|(v, at)| build(v, &at)).transpose()
    }

    fn finish(self) -> Extra {
        self.map
    }
}

fn string(value: Value, at: &str) -> Result<String> {
    match value {
        Value::String(s) => Ok(s),
        other => Err(mismatch(at, "string", &other)),
    }
}

fn provenance(value: Value, at: &str) -> Result<ProvenanceDomain> {
    let mut f = Fields::new(value, at)?;
    Ok(ProvenanceDomain {
        name: f.string("name")?,
        version: f.string("version")?,
        license: f.string("license")?,
        created: f.timestamp("created")?,
        modified: f.timestamp("modified")?,
        contributors: f.list("contributors", contributor)?,
        review: f.list("review", review)?,
        derived_from: f.string("derived_from")?,
        obsolete_after: f.timestamp("obsolete_after")?,
        embargo: f.object("embargo", embargo)?,
        extra: f.finish(),
    })
}

fn contributor(value: Value, at: &str) -> Result<Contributor> {
    let mut f = Fields::new(value, at)?;
    Ok(Contributor {
        name: f.string("name")?,
        contribution: f.strings("contribution")?,
        affiliation: f.string("affiliation")?,
        email: f.string("email")?,
        orcid: f.string("orcid")?,
        extra: f.finish(),
    })
}

fn review(value: Value, at: &str) -> Result<ReviewRecord> {
    let mut f = Fields::new(value, at)?;
    Ok(ReviewRecord {
        status: f.string("status")?,
        reviewer_comment: f.string("reviewer_comment")?,
        date: f.timestamp("date")?,
        reviewer: f.object("reviewer", contributor)?,
        extra: f.finish(),
    })
}

fn embargo(value: Value, at: &str) -> Result<EmbargoPeriod> {
    let mut f = Fields::new(value, at)?;
    Ok(EmbargoPeriod {
        start_time: f.timestamp("start_time")?,
        end_time: f.timestamp("end_time")?,
        extra: f.finish(),
    })
}

fn description(value: Value, at: &str) -> Result<DescriptionDomain> {
    let mut f = Fields::new(value, at)?;
    Ok(DescriptionDomain {
        keywords: f.strings("keywords")?,
        xref: f.list("xref", xref)?,
        platform: f.strings("platform")?,
        pipeline_steps: f.list("pipeline_steps", step)?,
        extra: f.finish(),
    })
}

fn xref(value: Value, at: &str) -> Result<ExternalReference> {
    let mut f = Fields::new(value, at)?;
    Ok(ExternalReference {
        namespace: f.string("namespace")?,
        name: f.string("name")?,
        ids: f.strings("ids")?,
        access_time: f.timestamp("access_time")?,
        extra: f.finish(),
    })
}

fn step(value: Value, at: &str) -> Result<PipelineStep> {
    let mut f = Fields::new(value, at)?;
    Ok(PipelineStep {
        step_number: f.integer("step_number")?,
        name: f.string("name")?,
        description: f.string("description")?,
        version: f.string("version")?,
        prerequisite: f.list("prerequisite", file_ref)?,
        input_list: f.list("input_list", file_ref)?,
        output_list: f.list("output_list", file_ref)?,
        extra: f.finish(),
    })
}

fn file_ref(value: Value, at: &str) -> Result<FileRef> {
    file_ref_fields(Fields::new(value, at)?)
}

fn file_ref_fields(mut f: Fields) -> Result<FileRef> {
    Ok(FileRef {
        filename: f.string("filename")?,
        uri: f.string("uri")?,
        access_time: f.timestamp("access_time")?,
        sha1_checksum: f.string("sha1_checksum")?,
        extra: f.finish(),
    })
}

fn output_ref(value: Value, at: &str) -> Result<OutputRef> {
    let mut f = Fields::new(value, at)?;
    let media_type = f.string("media_type")?;
    Ok(OutputRef {
        media_type,
        file: file_ref_fields(f)?,
    })
}

fn execution(value: Value, at: &str) -> Result<ExecutionDomain> {
    let mut f = Fields::new(value, at)?;
    Ok(ExecutionDomain {
        script: f.strings("script")?,
        script_driver: f.string("script_driver")?,
        software_prerequisites: f.list("software_prerequisites", software)?,
        external_data_endpoints: f.list("external_data_endpoints", endpoint)?,
        environment_variables: f.object("environment_variables", string_map)?,
        extra: f.finish(),
    })
}

fn software(value: Value, at: &str) -> Result<SoftwarePrerequisite> {
    let mut f = Fields::new(value, at)?;
    Ok(SoftwarePrerequisite {
        name: f.string("name")?,
        version: f.string("version")?,
        uri: f.string("uri")?,
        access_time: f.timestamp("access_time")?,
        extra: f.finish(),
    })
}

fn endpoint(value: Value, at: &str) -> Result<DataEndpoint> {
    let mut f = Fields::new(value, at)?;
    Ok(DataEndpoint {
        name: f.string("name")?,
        uri: f.string("uri")?,
        extra: f.finish(),
    })
}

fn string_map(value: Value, at: &str) -> Result<BTreeMap<String, String>> {
    let f = Fields::new(value, at)?;
    let base = f.path.clone();
    f.map
        .into_iter()
        .map(|(k, v)| {
            let here = path::join(&base, &k);
            string(v, &here).map(|s| (k, s))
        })
        .collect()
}

fn io(value: Value, at: &str) -> Result<IoDomain> {
    let mut f = Fields::new(value, at)?;
    Ok(IoDomain {
        input_subdomain: f.list("input_subdomain", file_ref)?,
        output_subdomain: f.list("output_subdomain", output_ref)?,
        extra: f.finish(),
    })
}

fn parameter(value: Value, at: &str) -> Result<ParameterEntry> {
    let mut f = Fields::new(value, at)?;
    let param = f.string("param")?;
    let value = match f.take("value") {
        None => None,
        Some((v @ (Value::String(_) | Value::Number(_) | Value::Bool(_)), _)) => Some(v),
        Some((other, here)) => return Err(mismatch(&here, "scalar", &other)),
    };
    let step = match f.take("step") {
        None => None,
        Some((Value::String(s), _)) => Some(StepRef::Text(s)),
        Some((v, here)) => Some(StepRef::Number(
            v.as_i64().ok_or_else(|| mismatch(&here, "integer or string", &v))?,
        )),
    };
    Ok(ParameterEntry {
        param,
        value,
        step,
        extra: f.finish(),
    })
}

fn error_domain(value: Value, at: &str) -> Result<ErrorDomain> {
    let mut f = Fields::new(value, at)?;
    Ok(ErrorDomain {
        empirical_error: f.object("empirical_error", error_entries)?,
        algorithmic_error: f.object("algorithmic_error", error_entries)?,
        extra: f.finish(),
    })
}

fn error_entries(value: Value, at: &str) -> Result<BTreeMap<String, ErrorEntry>> {
    let f = Fields::new(value, at)?;
    let base = f.path.clone();
    f.map
        .into_iter()
        .map(|(k, v)| {
            let here = path::join(&base, &k);
            let entry = match v {
                Value::String(s) => ErrorEntry::Rule(s),
                other => {
                    let mut g = Fields::new(other, &here)?;
                    ErrorEntry::Detailed(ErrorRule {
                        inclusion_rule: g.string("inclusion_rule")?,
                        reference: g.string("reference")?,
                        extra: g.finish(),
                    })
                }
            };
            Ok((k, entry))
        })
        .collect()
}
