//! One analysis run over a document, rendered as JSON or text.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::aspects::{aspect_checklist, AspectMatrix};
use crate::bco::{parse_bco, validate_structure, verify_etag, EtagResult, ParseError, StructureFinding, ETAG_CONVENTION};
use crate::diagnostics::{run_lints_with, Diagnostic, HttpProber, LintOptions, OfflineProber, UriProber};
use crate::mapping::{coverage_profile, data_inventory, documentation_supported_labels, CoverageProfile, DataInventory, LabelSupport};
use crate::primad::Dimension;
use crate::Severity;

pub const REPORT_SCHEMA_VERSION: &str = "1.0";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const ERRORS: i32 = 1;
    pub const UNPARSEABLE: i32 = 2;
    pub const USAGE: i32 = 3;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseFailure {
    pub kind: &'static str,
    pub path: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl From<&ParseError> for ParseFailure {
    fn from(e: &ParseError) -> Self {
        let (kind, line, column) = match e {
            ParseError::Syntax { line, column, .. } => ("SyntaxError", Some(*line), Some(*column)),
            ParseError::TypeMismatch { .. } => ("TypeMismatch", None, None),
        };
        Self {
            kind,
            path: e.path().to_string(),
            message: e.to_string(),
            line,
            column,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SeverityCounts {
    pub error: usize,
    pub warning: usize,
    pub info: usize,
}

impl SeverityCounts {
    fn add(&mut self, s: Severity) {
        match s {
            Severity::Error => self.error += 1,
            Severity::Warning => self.warning += 1,
            Severity::Info => self.info += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub counts: SeverityCounts,
    pub transparency: f64,
    pub consistency: f64,
    pub longevity: f64,
    pub coverage: f64,
    pub supported_labels: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtagReport {
    pub convention: &'static str,
    #[serde(flatten)]
    pub result: EtagResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub report_schema_version: &'static str,
    pub tool_version: String,
    pub input_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parse_error: Option<ParseFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_findings: Option<Vec<StructureFinding>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub etag: Option<EtagReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage_profile: Option<CoverageProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_inventory: Option<DataInventory>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label_support: Option<Vec<LabelSupport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aspect_matrix: Option<AspectMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Vec<Diagnostic>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

impl AnalysisReport {
    pub fn exit_code(&self) -> i32 {
        match &self.summary {
            _ if self.parse_error.is_some() => exit::UNPARSEABLE,
            Some(s) if s.counts.error > 0 => exit::ERRORS,
            _ => exit::OK,
        }
    }
}

pub fn analyze(document_text: &str, options: &LintOptions) -> AnalysisReport {
    if options.offline {
        analyze_with(document_text, options, &OfflineProber)
    } else {
        let prober = HttpProber::new(std::time::Duration::from_millis(options.timeout_ms));
        analyze_with(document_text, options, &prober)
    }
}

pub fn analyze_with(document_text: &str, options: &LintOptions, prober: &dyn UriProber) -> AnalysisReport {
    let mut report = AnalysisReport {
        report_schema_version: REPORT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        input_sha256: hex::encode(Sha256::digest(document_text.as_bytes())),
        parse_error: None,
        structure_findings: None,
        etag: None,
        coverage_profile: None,
        data_inventory: None,
        label_support: None,
        aspect_matrix: None,
        diagnostics: None,
        summary: None,
    };
    let doc = match parse_bco(document_text) {
        Ok(doc) => doc,
        Err(e) => {
            report.parse_error = Some(ParseFailure::from(&e));
            return report;
        }
    };

    let findings = validate_structure(&doc);
    let etag = verify_etag(&doc);
    let profile = coverage_profile(&doc);
    let inventory = data_inventory(&doc);
    let support = documentation_supported_labels(&profile);
    let aspects = aspect_checklist(&doc);
    let diagnostics = run_lints_with(&doc, options, prober);

    let mut counts = SeverityCounts::default();
    findings.iter().for_each(|f| counts.add(f.severity));
    diagnostics.iter().for_each(|d| counts.add(d.severity));
    let metric = |d| profile.metric(d).unwrap_or(0.0);
    report.summary = Some(Summary {
        counts,
        transparency: metric(Dimension::Transparency),
        consistency: metric(Dimension::Consistency),
        longevity: metric(Dimension::Longevity),
        coverage: metric(Dimension::Coverage),
        supported_labels: support.iter().filter(|s| s.supported).count(),
    });
    report.structure_findings = Some(findings);
    report.etag = Some(EtagReport {
        convention: ETAG_CONVENTION,
        result: etag,
    });
    report.coverage_profile = Some(profile);
    report.data_inventory = Some(inventory);
    report.label_support = Some(support);
    report.aspect_matrix = Some(aspects);
    report.diagnostics = Some(diagnostics);
    report
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report serializes to JSON");
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes to JSON");
    s.push('\n');
    s
}

fn pct(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

pub fn render_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("primad-bco {} (report schema {})", report.tool_version, report.report_schema_version));
    line(format!("input sha256 {}", report.input_sha256));

    if let Some(e) = &report.parse_error {
        line(format!("\n{} at {}: {}", e.kind, e.path, e.message));
        return out;
    }

    if let Some(s) = &report.summary {
        line(String::new());
        line("== summary".into());
        line(format!(
            "errors {}  warnings {}  info {}",
            s.counts.error, s.counts.warning, s.counts.info
        ));
        line(format!(
            "transparency {}  consistency {}  longevity {}  coverage {}  supported labels {}/8",
            pct(s.transparency),
            pct(s.consistency),
            pct(s.longevity),
            pct(s.coverage),
            s.supported_labels
        ));
    }

    if let Some(findings) = &report.structure_findings {
        line(String::new());
        line(format!("== structure ({} findings)", findings.len()));
        for f in findings {
            line(format!("{} {} {}: {}", f.code, f.severity, f.path, f.message));
        }
    }

    if let Some(etag) = &report.etag {
        line(String::new());
        let status = match &etag.result {
            EtagResult::Match => "match".to_string(),
            EtagResult::Absent => "absent".to_string(),
            EtagResult::Mismatch { expected, computed } => format!("mismatch (declared {expected}, computed {computed})"),
        };
        line(format!("== etag: {status}"));
    }

    if let Some(p) = &report.coverage_profile {
        line(String::new());
        line("== dimensions".into());
        for d in &p.direct {
            line(format!(
                "{:<18} {:>3}/{:<3} fields populated",
                d.dimension.as_str(),
                d.populated_field_count,
                d.mapped_field_count
            ));
        }
        for m in &p.non_direct {
            line(format!("{:<18} {}", m.dimension.as_str(), pct(m.value)));
        }
    }

    if let Some(inv) = &report.data_inventory {
        line(String::new());
        line("== data inventory".into());
        line(format!("io inputs {}  io outputs {}  error entries {}", inv.io_inputs, inv.io_outputs, inv.error_entries));
        line(format!("step inputs {:?}  step outputs {:?}  step parameters {:?}", inv.description_inputs_per_step, inv.description_outputs_per_step, inv.parameters_per_step));
    }

    if let Some(support) = &report.label_support {
        line(String::new());
        line("== label support".into());
        for s in support {
            if s.supported {
                line(format!("{:<15} supported", s.label.to_string()));
            } else {
                let missing: Vec<&str> = s.missing.iter().map(|d| d.as_str()).collect();
                line(format!("{:<15} missing {}", s.label.to_string(), missing.join(", ")));
            }
        }
    }

    if let Some(m) = &report.aspect_matrix {
        line(String::new());
        line("== aspects".into());
        for a in &m.aspects {
            let note = if a.informational { " (informational)" } else { "" };
            line(format!("{:<20} {}{}", a.aspect.as_str(), pct(a.coverage), note));
        }
    }

    if let Some(diags) = &report.diagnostics {
        line(String::new());
        line(format!("== lints ({} diagnostics)", diags.len()));
        for d in diags {
            line(d.to_line());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_json_reports_only_the_syntax_error() {
        let r = analyze("{\"usability\": ", &LintOptions::default());
        assert_eq!(r.exit_code(), exit::UNPARSEABLE);
        assert_eq!(r.parse_error.as_ref().unwrap().kind, "SyntaxError");
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["input_sha256", "parse_error", "report_schema_version", "tool_version"]);
    }

    #[test]
    fn empty_object_has_errors() {
        let r = analyze("{}", &LintOptions::default());
        assert_eq!(r.exit_code(), exit::ERRORS);
        let s = r.summary.as_ref().unwrap();
        let total = r.structure_findings.as_ref().unwrap().len() + r.diagnostics.as_ref().unwrap().len();
        assert_eq!(s.counts.error + s.counts.warning + s.counts.info, total);
    }
}
