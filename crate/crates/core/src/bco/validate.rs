//! Structural validation of the typed model.
//!
//! ERROR findings are raised for the compulsory domains and their
//! compulsory fields and for broken value formats; WARNING findings for
//! recommended fields that are optional. Findings are data: validation
//! never fails.

use std::collections::BTreeSet;

use serde::Serialize;

use super::model::*;
use crate::path;
use crate::severity::Severity;

/// Stable structure codes.
pub mod codes {
    /// A compulsory domain is absent.
    pub const MISSING_DOMAIN: &str = "BCO-S001";
    /// A compulsory field is absent or blank.
    pub const MISSING_FIELD: &str = "BCO-S002";
    /// A recommended optional field is absent.
    pub const MISSING_RECOMMENDED: &str = "BCO-S003";
    /// `object_id` or `spec_version` is not a URI.
    pub const INVALID_URI: &str = "BCO-S004";
    /// `etag` is not a 64-character hex digest.
    pub const ETAG_FORMAT: &str = "BCO-S005";
    /// A contribution role outside the accepted vocabulary.
    pub const UNKNOWN_ROLE: &str = "BCO-S006";
    /// A SHA-1 checksum that is not 40 hex characters.
    pub const CHECKSUM_FORMAT: &str = "BCO-S007";
    /// A timestamp that is not RFC 3339; kept as opaque text.
    pub const TIMESTAMP_FORMAT: &str = "BCO-S008";
    /// Step numbers are duplicated or do not run 1..N.
    pub const STEP_NUMBERING: &str = "BCO-S009";
    /// A step number that is not a positive integer.
    pub const INVALID_STEP_NUMBER: &str = "BCO-S010";
    /// A parameter whose step reference does not resolve.
    pub const DANGLING_STEP_REF: &str = "BCO-S011";
    /// An error-domain entry without rule text.
    pub const EMPTY_ERROR_RULE: &str = "BCO-S012";
    /// A record inside an optional part is missing one of its own fields.
    pub const INCOMPLETE_RECORD: &str = "BCO-S013";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureFinding {
    pub code: String,
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

fn blank(value: Option<&str>) -> bool {
    value.is_none_or(|s| s.trim().is_empty())
}

fn is_hex(s: &str, len: usize) -> bool {
    s.len() == len && s.bytes().all(|b| b.is_ascii_hexdigit())
}

fn is_uri(s: &str) -> bool {
    url::Url::parse(s.trim()).is_ok()
}

struct Collector {
    findings: Vec<StructureFinding>,
}

impl Collector {
    fn push(&mut self, code: &str, severity: Severity, at: &str, message: impl Into<String>) {
        self.findings.push(StructureFinding {
            code: code.to_string(),
            severity,
            path: at.to_string(),
            message: message.into(),
        });
    }

    fn missing(&mut self, at: &str, what: &str) {
        self.push(
            codes::MISSING_FIELD,
            Severity::Error,
            at,
            format!("compulsory field `{what}` is missing or blank"),
        );
    }

    fn recommend(&mut self, at: &str, what: &str) {
        self.push(
            codes::MISSING_RECOMMENDED,
            Severity::Warning,
            at,
            format!("optional field `{what}` is not documented"),
        );
    }

    fn incomplete(&mut self, at: &str, what: &str) {
        self.push(
            codes::INCOMPLETE_RECORD,
            Severity::Error,
            at,
            format!("record field `{what}` is missing or blank"),
        );
    }

    fn required_text(&mut self, base: &str, key: &str, value: Option<&str>) {
        if blank(value) {
            self.missing(&path::join(base, key), key);
        }
    }

    fn required_list<T>(&mut self, base: &str, key: &str, list: Option<&Vec<T>>) -> bool {
        if list.is_none_or(Vec::is_empty) {
            self.missing(&path::join(base, key), key);
            false
        } else {
            true
        }
    }

    fn timestamp_format(&mut self, at: &str, ts: &Timestamp) {
        if !ts.is_rfc3339() {
            self.push(
                codes::TIMESTAMP_FORMAT,
                Severity::Warning,
                at,
                format!("timestamp `{}` is not RFC 3339; kept as opaque text", ts.as_str()),
            );
        }
    }

    fn required_time(&mut self, base: &str, key: &str, ts: Option<&Timestamp>) {
        let at = path::join(base, key);
        match ts {
            Some(ts) if !ts.as_str().trim().is_empty() => self.timestamp_format(&at, ts),
            _ => self.missing(&at, key),
        }
    }

    fn optional_time(&mut self, base: &str, key: &str, ts: Option<&Timestamp>) {
        let at = path::join(base, key);
        match ts {
            Some(ts) if !ts.as_str().trim().is_empty() => self.timestamp_format(&at, ts),
            _ => self.recommend(&at, key),
        }
    }
}

/// How strictly a file reference is checked.
#[derive(Clone, Copy)]
enum FileContext {
    /// IO subdomain entries: `uri` is a compulsory field.
    Io,
    /// Pipeline step input/output lists.
    StepList,
    /// Step prerequisites: only the reference itself and value formats.
    Prerequisite,
}

/// Validates a parsed document. Findings are sorted by path, then code.
pub fn validate_structure(doc: &BcoDocument) -> Vec<StructureFinding> {
    let mut c = Collector { findings: Vec::new() };
    let root = path::ROOT;

    for (key, value) in [("object_id", &doc.object_id), ("spec_version", &doc.spec_version)] {
        let at = path::join(root, key);
        match value.as_deref() {
            v if blank(v) => c.missing(&at, key),
            Some(v) if !is_uri(v) => c.push(
                codes::INVALID_URI,
                Severity::Error,
                &at,
                format!("`{key}` is not a syntactically valid URI"),
            ),
            _ => {}
        }
    }
    match doc.etag.as_deref() {
        e if blank(e) => c.missing("/etag", "etag"),
        Some(e) if !is_hex(e.trim(), 64) => c.push(
            codes::ETAG_FORMAT,
            Severity::Warning,
            "/etag",
            "etag is not a 64-character hex SHA-256 digest",
        ),
        _ => {}
    }

    match &doc.usability {
        None => missing_domain(&mut c, "usability"),
        Some(text) if text.trim().is_empty() => c.missing("/usability", "usability"),
        Some(_) => {}
    }
    match &doc.provenance {
        None => missing_domain(&mut c, "provenance"),
        Some(p) => provenance(&mut c, p),
    }
    match &doc.description {
        None => missing_domain(&mut c, "description"),
        Some(d) => description(&mut c, d),
    }
    match &doc.execution {
        None => missing_domain(&mut c, "execution"),
        Some(e) => execution(&mut c, e),
    }
    match &doc.io {
        None => missing_domain(&mut c, "io"),
        Some(io) => io_domain(&mut c, io),
    }
    if let Some(params) = &doc.parametric {
        parametric(&mut c, params, doc.description.as_ref());
    }
    if let Some(err) = &doc.error {
        error_domain(&mut c, err);
    }

    let mut findings = c.findings;
    findings.sort_by(|a, b| path::compare(&a.path, &b.path).then_with(|| a.code.cmp(&b.code)));
    findings
}

fn missing_domain(c: &mut Collector, key: &str) {
    c.push(
        codes::MISSING_DOMAIN,
        Severity::Error,
        &path::join(path::ROOT, key),
        format!("compulsory domain `{key}` is missing"),
    );
}

fn provenance(c: &mut Collector, p: &ProvenanceDomain) {
    let base = "/provenance";
    c.required_text(base, "name", p.name.as_deref());
    c.required_text(base, "version", p.version.as_deref());
    c.required_text(base, "license", p.license.as_deref());
    c.required_time(base, "created", p.created.as_ref());
    c.required_time(base, "modified", p.modified.as_ref());

    if c.required_list(base, "contributors", p.contributors.as_ref()) {
        let list = path::join(base, "contributors");
        for (i, person) in p.contributors.iter().flatten().enumerate() {
            let at = path::join_index(&list, i);
            c.required_text(&at, "name", person.name.as_deref());
            if c.required_list(&at, "contribution", person.contribution.as_ref()) {
                roles(c, &path::join(&at, "contribution"), person.contribution.as_deref().unwrap_or_default());
            }
        }
    }

    match p.review.as_deref() {
        None | Some([]) => c.recommend("/provenance/review", "review"),
        Some(reviews) => {
            for (i, r) in reviews.iter().enumerate() {
                let at = path::join_index("/provenance/review", i);
                if blank(r.status.as_deref()) {
                    c.incomplete(&path::join(&at, "status"), "status");
                }
                if blank(r.reviewer_comment.as_deref()) {
                    c.incomplete(&path::join(&at, "reviewer_comment"), "reviewer_comment");
                }
                match &r.date {
                    Some(ts) if !ts.as_str().trim().is_empty() => c.timestamp_format(&path::join(&at, "date"), ts),
                    _ => c.incomplete(&path::join(&at, "date"), "date"),
                }
                match &r.reviewer {
                    Some(who) if !blank(who.name.as_deref()) => {
                        if let Some(list) = &who.contribution {
                            roles(c, &path::join(&at, "reviewer/contribution"), list);
                        }
                    }
                    _ => c.incomplete(&path::join(&at, "reviewer"), "reviewer"),
                }
            }
        }
    }

    if blank(p.derived_from.as_deref()) {
        c.recommend("/provenance/derived_from", "derived_from");
    }
    c.optional_time(base, "obsolete_after", p.obsolete_after.as_ref());
    match &p.embargo {
        None => c.recommend("/provenance/embargo", "embargo"),
        Some(period) => {
            for (key, ts) in [("start_time", &period.start_time), ("end_time", &period.end_time)] {
                let at = path::join("/provenance/embargo", key);
                match ts {
                    Some(ts) if !ts.as_str().trim().is_empty() => c.timestamp_format(&at, ts),
                    _ => c.incomplete(&at, key),
                }
            }
        }
    }
}

fn roles(c: &mut Collector, base: &str, roles: &[String]) {
    for (j, role) in roles.iter().enumerate() {
        if !CONTRIBUTION_ROLES.contains(&role.as_str()) {
            c.push(
                codes::UNKNOWN_ROLE,
                Severity::Error,
                &path::join_index(base, j),
                format!("contribution role `{role}` is not in the PAV-derived vocabulary"),
            );
        }
    }
}

fn description(c: &mut Collector, d: &DescriptionDomain) {
    let base = "/description";
    c.required_list(base, "keywords", d.keywords.as_ref());

    if c.required_list(base, "xref", d.xref.as_ref()) {
        for (i, x) in d.xref.iter().flatten().enumerate() {
            let at = path::join_index("/description/xref", i);
            c.required_text(&at, "namespace", x.namespace.as_deref());
            c.required_text(&at, "name", x.name.as_deref());
            c.required_list(&at, "ids", x.ids.as_ref());
            c.optional_time(&at, "access_time", x.access_time.as_ref());
        }
    }

    c.required_list(base, "platform", d.platform.as_ref());

    if !c.required_list(base, "pipeline_steps", d.pipeline_steps.as_ref()) {
        return;
    }
    let steps = d.pipeline_steps.as_deref().unwrap_or_default();
    let mut numbers = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let at = path::join_index("/description/pipeline_steps", i);
        match step.step_number {
            None => c.missing(&path::join(&at, "step_number"), "step_number"),
            Some(n) if n < 1 => c.push(
                codes::INVALID_STEP_NUMBER,
                Severity::Error,
                &path::join(&at, "step_number"),
                format!("step number {n} is not a positive integer"),
            ),
            Some(n) => numbers.push(n),
        }
        c.required_text(&at, "name", step.name.as_deref());
        c.required_text(&at, "description", step.description.as_deref());
        if blank(step.version.as_deref()) {
            c.recommend(&path::join(&at, "version"), "version");
        }
        match step.prerequisite.as_deref() {
            None | Some([]) => c.recommend(&path::join(&at, "prerequisite"), "prerequisite"),
            Some(list) => file_list(c, &path::join(&at, "prerequisite"), list, FileContext::Prerequisite),
        }
        for (key, list) in [("input_list", &step.input_list), ("output_list", &step.output_list)] {
            if c.required_list(&at, key, list.as_ref()) {
                file_list(c, &path::join(&at, key), list.as_deref().unwrap_or_default(), FileContext::StepList);
            }
        }
    }

    let distinct: BTreeSet<i64> = numbers.iter().copied().collect();
    let contiguous = distinct.len() == numbers.len()
        && distinct.iter().copied().eq(1..=numbers.len() as i64);
    if !numbers.is_empty() && !contiguous {
        c.push(
            codes::STEP_NUMBERING,
            Severity::Warning,
            "/description/pipeline_steps",
            format!("step numbers {numbers:?} are not a unique contiguous 1..N sequence"),
        );
    }
}

fn file_list(c: &mut Collector, base: &str, files: &[FileRef], context: FileContext) {
    for (i, file) in files.iter().enumerate() {
        file_ref(c, &path::join_index(base, i), file, context);
    }
}

fn file_ref(c: &mut Collector, at: &str, file: &FileRef, context: FileContext) {
    match context {
        FileContext::Io => c.required_text(at, "uri", file.uri.as_deref()),
        _ => {
            if blank(file.uri.as_deref()) {
                c.incomplete(&path::join(at, "uri"), "uri");
            }
        }
    }
    let recommended = !matches!(context, FileContext::Prerequisite);
    if recommended && blank(file.filename.as_deref()) {
        c.recommend(&path::join(at, "filename"), "filename");
    }
    match &file.access_time {
        Some(ts) if !ts.as_str().trim().is_empty() => c.timestamp_format(&path::join(at, "access_time"), ts),
        _ if recommended => c.recommend(&path::join(at, "access_time"), "access_time"),
        _ => {}
    }
    match file.sha1_checksum.as_deref() {
        Some(sum) if !sum.trim().is_empty() => {
            if !is_hex(sum.trim(), 40) {
                c.push(
                    codes::CHECKSUM_FORMAT,
                    Severity::Error,
                    &path::join(at, "sha1_checksum"),
                    "sha1_checksum is not 40 hex characters",
                );
            }
        }
        _ if recommended => c.recommend(&path::join(at, "sha1_checksum"), "sha1_checksum"),
        _ => {}
    }
}

fn execution(c: &mut Collector, e: &ExecutionDomain) {
    let base = "/execution";
    if c.required_list(base, "script", e.script.as_ref()) {
        for (i, s) in e.script.iter().flatten().enumerate() {
            if s.trim().is_empty() {
                c.incomplete(&path::join_index("/execution/script", i), "script");
            }
        }
    }
    c.required_text(base, "script_driver", e.script_driver.as_deref());

    if c.required_list(base, "software_prerequisites", e.software_prerequisites.as_ref()) {
        for (i, sw) in e.software_prerequisites.iter().flatten().enumerate() {
            let at = path::join_index("/execution/software_prerequisites", i);
            c.required_text(&at, "name", sw.name.as_deref());
            c.required_text(&at, "version", sw.version.as_deref());
            c.required_text(&at, "uri", sw.uri.as_deref());
            c.optional_time(&at, "access_time", sw.access_time.as_ref());
        }
    }
    if c.required_list(base, "external_data_endpoints", e.external_data_endpoints.as_ref()) {
        for (i, ep) in e.external_data_endpoints.iter().flatten().enumerate() {
            let at = path::join_index("/execution/external_data_endpoints", i);
            c.required_text(&at, "name", ep.name.as_deref());
            c.required_text(&at, "uri", ep.uri.as_deref());
        }
    }
    if e.environment_variables.as_ref().is_none_or(|m| m.is_empty()) {
        c.missing("/execution/environment_variables", "environment_variables");
    }
}

fn io_domain(c: &mut Collector, io: &IoDomain) {
    if c.required_list("/io", "input_subdomain", io.input_subdomain.as_ref()) {
        file_list(c, "/io/input_subdomain", io.input_subdomain.as_deref().unwrap_or_default(), FileContext::Io);
    }
    if c.required_list("/io", "output_subdomain", io.output_subdomain.as_ref()) {
        for (i, out) in io.output_subdomain.iter().flatten().enumerate() {
            let at = path::join_index("/io/output_subdomain", i);
            c.required_text(&at, "media_type", out.media_type.as_deref());
            file_ref(c, &at, &out.file, FileContext::Io);
        }
    }
}

fn parametric(c: &mut Collector, params: &[ParameterEntry], description: Option<&DescriptionDomain>) {
    let known: Option<BTreeSet<i64>> = description.map(|d| {
        d.pipeline_steps
            .iter()
            .flatten()
            .filter_map(|s| s.step_number)
            .collect()
    });
    for (i, p) in params.iter().enumerate() {
        let at = path::join_index("/parametric", i);
        if blank(p.param.as_deref()) {
            c.incomplete(&path::join(&at, "param"), "param");
        }
        if p.value.is_none() {
            c.incomplete(&path::join(&at, "value"), "value");
        }
        match &p.step {
            None => c.incomplete(&path::join(&at, "step"), "step"),
            Some(step) => {
                let resolved = match (step.number(), &known) {
                    (Some(n), Some(known)) => known.contains(&n),
                    (Some(_), None) => true,
                    (None, _) => false,
                };
                if !resolved {
                    c.push(
                        codes::DANGLING_STEP_REF,
                        Severity::Warning,
                        &path::join(&at, "step"),
                        "parameter step does not reference a declared pipeline step",
                    );
                }
            }
        }
    }
}

fn error_domain(c: &mut Collector, err: &ErrorDomain) {
    for (key, entries) in [("empirical_error", &err.empirical_error), ("algorithmic_error", &err.algorithmic_error)] {
        let base = path::join("/error", key);
        for (name, entry) in entries.iter().flatten() {
            if blank(entry.rule_text()) {
                c.push(
                    codes::EMPTY_ERROR_RULE,
                    Severity::Error,
                    &path::join(&base, name),
                    format!("error rule `{name}` has no rule text"),
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bco::parse_bco;
    use serde_json::{json, Value};

    fn base() -> Value {
        json!({
            "object_id": "https://example.org/BCO_1/1.0",
            "spec_version": "https://w3id.org/ieee/ieee-2791-schema/2791object.json",
            "etag": "0000000000000000000000000000000000000000000000000000000000000000",
            "usability": "Identify resistance mutations.",
            "provenance": {
                "name": "Example", "version": "1.0", "license": "CC-BY-4.0",
                "created": "2022-01-01T00:00:00Z", "modified": "2022-01-02T00:00:00Z",
                "contributors": [{"name": "A", "contribution": ["createdBy"]}],
                "review": [{"status": "approved", "reviewer_comment": "ok", "date": "2022-02-01T00:00:00Z",
                            "reviewer": {"name": "R", "contribution": ["curatedBy"]}}],
                "derived_from": "https://example.org/BCO_0/1.0",
                "obsolete_after": "2030-01-01T00:00:00Z",
                "embargo": {"start_time": "2022-01-01T00:00:00Z", "end_time": "2022-01-02T00:00:00Z"}
            },
            "description": {
                "keywords": ["hcv"],
                "xref": [{"namespace": "pubchem", "name": "PubChem", "ids": ["1"], "access_time": "2022-01-01T00:00:00Z"}],
                "platform": ["hive"],
                "pipeline_steps": [{
                    "step_number": 1, "name": "align", "description": "align reads", "version": "1",
                    "prerequisite": [{"uri": "https://example.org/ref.fa"}],
                    "input_list": [{"filename": "reads.fastq", "uri": "https://example.org/reads.fastq",
                                    "access_time": "2022-01-01T00:00:00Z",
                                    "sha1_checksum": "da39a3ee5e6b4b0d3255bfef95601890afd80709"}],
                    "output_list": [{"filename": "aligned.bam", "uri": "https://example.org/aligned.bam",
                                     "access_time": "2022-01-01T00:00:00Z",
                                     "sha1_checksum": "da39a3ee5e6b4b0d3255bfef95601890afd80709"}]
                }]
            },
            "execution": {
                "script": ["https://example.org/run.sh"], "script_driver": "shell",
                "software_prerequisites": [{"name": "hexagon", "version": "1", "uri": "https://example.org/h",
                                            "access_time": "2022-01-01T00:00:00Z"}],
                "external_data_endpoints": [{"name": "hive", "uri": "https://example.org/hive"}],
                "environment_variables": {"HOME": "/home"}
            },
            "io": {
                "input_subdomain": [{"filename": "reads.fastq", "uri": "https://example.org/reads.fastq",
                                     "access_time": "2022-01-01T00:00:00Z",
                                     "sha1_checksum": "da39a3ee5e6b4b0d3255bfef95601890afd80709"}],
                "output_subdomain": [{"filename": "report.csv", "media_type": "text/csv",
                                      "uri": "https://example.org/report.csv",
                                      "access_time": "2022-01-01T00:00:00Z",
                                      "sha1_checksum": "da39a3ee5e6b4b0d3255bfef95601890afd80709"}]
            },
            "parametric": [{"param": "seed", "value": "1", "step": "1"}],
            "error": {"empirical_error": {"fn_rate": "< 0.01"}}
        })
    }

    fn findings(v: &Value) -> Vec<StructureFinding> {
        validate_structure(&parse_bco(&v.to_string()).unwrap())
    }

    #[test]
    fn complete_document_is_clean() {
        assert_eq!(findings(&base()), vec![]);
    }

    #[test]
    fn missing_io_is_one_error() {
        let mut v = base();
        v.as_object_mut().unwrap().remove("io");
        let f = findings(&v);
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].code.as_str(), f[0].severity, f[0].path.as_str()), (codes::MISSING_DOMAIN, Severity::Error, "/io"));
    }

    #[test]
    fn missing_filenames_warn_per_entry() {
        let mut v = base();
        let file = v["io"]["input_subdomain"][0].clone();
        v["io"]["input_subdomain"] = json!([file.clone(), file]);
        for i in 0..2 {
            v["io"]["input_subdomain"][i].as_object_mut().unwrap().remove("filename");
        }
        let f = findings(&v);
        let paths: Vec<&str> = f.iter().map(|x| x.path.as_str()).collect();
        assert_eq!(paths, vec!["/io/input_subdomain/0/filename", "/io/input_subdomain/1/filename"]);
        assert!(f.iter().all(|x| x.severity == Severity::Warning));
    }

    #[test]
    fn step_gaps_warn_and_bad_roles_error() {
        let mut v = base();
        v["description"]["pipeline_steps"][0]["step_number"] = json!(2);
        v["parametric"][0]["step"] = json!(2);
        v["provenance"]["contributors"][0]["contribution"] = json!(["wroteIt"]);
        let f = findings(&v);
        let got: Vec<(&str, Severity)> = f.iter().map(|x| (x.code.as_str(), x.severity)).collect();
        assert_eq!(got, vec![(codes::STEP_NUMBERING, Severity::Warning), (codes::UNKNOWN_ROLE, Severity::Error)]);
    }

    #[test]
    fn format_checks() {
        let mut v = base();
        v["spec_version"] = json!("not a uri");
        v["etag"] = json!("abc");
        v["provenance"]["created"] = json!("last tuesday");
        v["io"]["input_subdomain"][0]["sha1_checksum"] = json!("xyz");
        v["error"]["empirical_error"]["fn_rate"] = json!({"reference": "x"});
        v["parametric"][0]["step"] = json!("7");
        let codes_seen: Vec<String> = findings(&v).into_iter().map(|f| f.code).collect();
        assert_eq!(
            codes_seen,
            vec![
                codes::EMPTY_ERROR_RULE,
                codes::ETAG_FORMAT,
                codes::CHECKSUM_FORMAT,
                codes::DANGLING_STEP_REF,
                codes::TIMESTAMP_FORMAT,
                codes::INVALID_URI,
            ]
        );
    }

    #[test]
    fn findings_are_path_ordered() {
        let mut v = base();
        v["provenance"].as_object_mut().unwrap().remove("review");
        v.as_object_mut().unwrap().remove("etag");
        v["io"]["output_subdomain"][0].as_object_mut().unwrap().remove("media_type");
        let f = findings(&v);
        let paths: Vec<&str> = f.iter().map(|x| x.path.as_str()).collect();
        let mut sorted = paths.clone();
        sorted.sort_by(|a, b| path::compare(a, b));
        assert_eq!(paths, sorted);
        assert_eq!(paths.len(), 3);
    }
}
