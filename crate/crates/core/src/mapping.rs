//! Field-to-dimension mapping, coverage evidence and the data inventory.

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::Value;

use crate::aspects::Aspect;
use crate::bco::{BcoDocument, MANDATORY_FIELDS};
use crate::path;
use crate::primad::{label_matrix, Dimension, Label, SlotRule};

const TABLE_TSV: &str = include_str!("../data/mapping.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldMapping {
    pub field_path: String,
    pub dimensions: Vec<Dimension>,
    pub mandatory: bool,
    pub source_row: String,
    pub notes: String,
}

fn load() -> Vec<FieldMapping> {
    let mut rows: Vec<FieldMapping> = TABLE_TSV
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            assert!(cols.len() >= 4, "malformed mapping row: {line}");
            FieldMapping {
                field_path: cols[0].to_string(),
                dimensions: cols[1]
                    .split(',')
                    .filter(|d| !d.is_empty())
                    .map(|d| d.parse().unwrap_or_else(|e| panic!("{e} in mapping row {line}")))
                    .collect(),
                mandatory: cols[2] == "true",
                source_row: cols[3].to_string(),
                notes: cols.get(4).unwrap_or(&"").to_string(),
            }
        })
        .collect();
    rows.sort_by(|a, b| path::compare(&a.field_path, &b.field_path));
    rows
}

/// The embedded table, sorted by path.
pub fn mapping_table() -> &'static [FieldMapping] {
    static TABLE: OnceLock<Vec<FieldMapping>> = OnceLock::new();
    TABLE.get_or_init(load)
}

/// Entries whose path covers `query`, from the outermost to the most specific.
pub fn lookup(query: &str) -> Vec<&'static FieldMapping> {
    mapping_table()
        .iter()
        .filter(|m| path::covers(&m.field_path, query))
        .collect()
}

/// Union of the dimensions of the most specific entries matching `query`.
pub fn dimensions_for(query: &str) -> Vec<Dimension> {
    let hits = lookup(query);
    let depth = |p: &str| p.split('/').count();
    let Some(deepest) = hits.iter().map(|m| depth(&m.field_path)).max() else {
        return Vec::new();
    };
    let mut dims: Vec<Dimension> = hits
        .iter()
        .filter(|m| depth(&m.field_path) == deepest)
        .flat_map(|m| m.dimensions.iter().copied())
        .collect();
    dims.sort();
    dims.dedup();
    dims
}

/// `path<TAB>dimensions<TAB>mandatory<TAB>row`, one line per entry.
pub fn export_tsv() -> String {
    let mut out = String::new();
    for m in mapping_table() {
        let dims: Vec<&str> = m.dimensions.iter().map(|d| d.as_str()).collect();
        out.push_str(&format!("{}\t{}\t{}\t{}\n", m.field_path, dims.join(","), m.mandatory, m.source_row));
    }
    out
}

pub fn mandatory_patterns() -> Vec<&'static str> {
    mapping_table()
        .iter()
        .filter(|m| m.mandatory)
        .map(|m| m.field_path.as_str())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEvidence {
    pub dimension: Dimension,
    pub mapped_field_count: usize,
    pub populated_field_count: usize,
    pub evidence_paths: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricEvidence {
    pub dimension: Dimension,
    pub value: f64,
    pub evidence_paths: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageProfile {
    pub direct: Vec<DimensionEvidence>,
    pub non_direct: Vec<MetricEvidence>,
}

impl CoverageProfile {
    pub fn direct(&self, dim: Dimension) -> Option<&DimensionEvidence> {
        self.direct.iter().find(|d| d.dimension == dim)
    }

    pub fn metric(&self, dim: Dimension) -> Option<f64> {
        self.non_direct.iter().find(|m| m.dimension == dim).map(|m| m.value)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn first_populated(root: &Value, pattern: &str) -> Option<String> {
    path::populated_instances(root, pattern).into_iter().next()
}

pub fn coverage_profile(doc: &BcoDocument) -> CoverageProfile {
    let root = doc.to_value();
    let table = mapping_table();

    let direct = Dimension::DIRECT
        .into_iter()
        .map(|dim| {
            let mapped: Vec<&FieldMapping> = table.iter().filter(|m| m.dimensions.contains(&dim)).collect();
            let evidence_paths: Vec<String> = mapped
                .iter()
                .filter_map(|m| first_populated(&root, &m.field_path))
                .collect();
            DimensionEvidence {
                dimension: dim,
                mapped_field_count: mapped.len(),
                populated_field_count: evidence_paths.len(),
                evidence_paths,
            }
        })
        .collect();

    CoverageProfile {
        direct,
        non_direct: vec![
            consistency(&root),
            transparency(&root),
            step_coverage(&root),
            longevity(&root),
        ],
    }
}

fn consistency(root: &Value) -> MetricEvidence {
    let items = [
        "/io/output_subdomain",
        "/description/pipeline_steps/*/output_list",
        "/error/*/*",
    ];
    let evidence_paths: Vec<String> = items.iter().filter_map(|p| first_populated(root, p)).collect();
    MetricEvidence {
        dimension: Dimension::Consistency,
        value: ratio(evidence_paths.len(), items.len()),
        evidence_paths,
    }
}

fn transparency(root: &Value) -> MetricEvidence {
    let patterns = mandatory_patterns();
    let evidence_paths: Vec<String> = patterns
        .iter()
        .filter(|p| path::fully_populated(root, p))
        .filter_map(|p| first_populated(root, p))
        .collect();
    MetricEvidence {
        dimension: Dimension::Transparency,
        value: ratio(evidence_paths.len(), patterns.len()),
        evidence_paths,
    }
}

fn step_coverage(root: &Value) -> MetricEvidence {
    let steps = path::instances(root, "/description/pipeline_steps/*");
    let evidence_paths: Vec<String> = steps
        .iter()
        .filter(|(_, step)| {
            ["name", "description", "input_list", "output_list"]
                .iter()
                .all(|k| step.get(k).is_some_and(path::is_populated))
        })
        .map(|(at, _)| at.clone())
        .collect();
    MetricEvidence {
        dimension: Dimension::Coverage,
        value: ratio(evidence_paths.len(), steps.len()),
        evidence_paths,
    }
}

fn longevity(root: &Value) -> MetricEvidence {
    let fields = Aspect::Time.fields();
    let evidence_paths: Vec<String> = fields.iter().filter_map(|p| first_populated(root, p)).collect();
    MetricEvidence {
        dimension: Dimension::Longevity,
        value: ratio(evidence_paths.len(), fields.len()),
        evidence_paths,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DataInventory {
    pub io_inputs: usize,
    pub io_outputs: usize,
    pub description_inputs_per_step: Vec<usize>,
    pub description_outputs_per_step: Vec<usize>,
    pub parameters_per_step: Vec<usize>,
    pub error_entries: usize,
}

pub fn data_inventory(doc: &BcoDocument) -> DataInventory {
    let io = doc.io.as_ref();
    let steps = doc.pipeline_steps();
    let params = doc.parameters();
    DataInventory {
        io_inputs: io.and_then(|io| io.input_subdomain.as_ref()).map_or(0, Vec::len),
        io_outputs: io.and_then(|io| io.output_subdomain.as_ref()).map_or(0, Vec::len),
        description_inputs_per_step: steps.iter().map(|s| s.input_list.as_ref().map_or(0, Vec::len)).collect(),
        description_outputs_per_step: steps.iter().map(|s| s.output_list.as_ref().map_or(0, Vec::len)).collect(),
        parameters_per_step: steps
            .iter()
            .map(|s| {
                params
                    .iter()
                    .filter(|p| s.step_number.is_some() && p.step.as_ref().and_then(|r| r.number()) == s.step_number)
                    .count()
            })
            .collect(),
        error_entries: doc.error.as_ref().map_or(0, |e| e.entry_count()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelSupport {
    pub label: Label,
    pub supported: bool,
    pub missing: Vec<Dimension>,
}

/// A label is supported when every dimension it holds fixed or changes has
/// at least one populated field.
pub fn documentation_supported_labels(profile: &CoverageProfile) -> Vec<LabelSupport> {
    label_matrix()
        .iter()
        .map(|rule| {
            let missing: Vec<Dimension> = Dimension::DIRECT
                .into_iter()
                .filter(|d| rule.slot(*d) != SlotRule::MayChange)
                .filter(|d| profile.direct(*d).is_none_or(|e| e.populated_field_count == 0))
                .collect();
            LabelSupport {
                label: rule.label,
                supported: missing.is_empty(),
                missing,
            }
        })
        .collect()
}

/// Mandatory patterns that are not fully populated.
pub fn missing_mandatory(doc: &BcoDocument) -> Vec<&'static str> {
    let root = doc.to_value();
    MANDATORY_FIELDS
        .iter()
        .copied()
        .filter(|p| !path::fully_populated(&root, p))
        .collect()
}
