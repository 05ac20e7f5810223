//! Cross-cutting documentation aspects and their crosswalk onto the
//! PRIMAD dimensions.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::bco::BcoDocument;
use crate::path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Aspect {
    DataCategorizations,
    Versions,
    Time,
    AdditionalResources,
    FaultTolerance,
    Licences,
    Functionality,
    HumanRoles,
    Reviews,
    MetadataSchemas,
}

const TIME: &[&str] = &[
    "/provenance/obsolete_after",
    "/provenance/embargo",
    "/provenance/created",
    "/provenance/modified",
    "/provenance/review/*/date",
    "/io/input_subdomain/*/access_time",
    "/io/output_subdomain/*/access_time",
    "/description/pipeline_steps/*/input_list/*/access_time",
    "/description/pipeline_steps/*/output_list/*/access_time",
    "/description/xref/*/access_time",
];

const ADDITIONAL_RESOURCES: &[&str] = &["/description/xref"];

const DATA_CATEGORIZATIONS: &[&str] = &[
    "/io/input_subdomain",
    "/io/output_subdomain",
    "/description/pipeline_steps/*/input_list",
    "/description/pipeline_steps/*/output_list",
    "/parametric",
];

const FUNCTIONALITY: &[&str] = &[
    "/description/platform",
    "/description/pipeline_steps/*/prerequisite",
    "/io/input_subdomain/*/sha1_checksum",
    "/io/output_subdomain/*/sha1_checksum",
    "/execution/environment_variables",
    "/execution/external_data_endpoints",
    "/execution/software_prerequisites",
    "/provenance/modified",
    "/provenance/version",
    "/provenance/obsolete_after",
    "/provenance/embargo",
    "/provenance/license",
    "/etag",
];

const VERSIONS: &[&str] = &[
    "/provenance/version",
    "/execution/software_prerequisites/*/version",
    "/description/pipeline_steps/*/version",
];

const HUMAN_ROLES: &[&str] = &["/provenance/contributors", "/provenance/review/*/reviewer"];

const LICENCES: &[&str] = &["/provenance/license"];

const FAULT_TOLERANCE: &[&str] = &["/error/empirical_error", "/error/algorithmic_error"];

const REVIEWS: &[&str] = &[
    "/provenance/review/*/status",
    "/provenance/review/*/reviewer_comment",
    "/provenance/review/*/date",
    "/provenance/review/*/reviewer",
];

const METADATA_SCHEMAS: &[&str] = &["/spec_version", "/extension/*/extension_schema"];

impl Aspect {
    pub const ALL: [Aspect; 10] = [
        Aspect::DataCategorizations,
        Aspect::Versions,
        Aspect::Time,
        Aspect::AdditionalResources,
        Aspect::FaultTolerance,
        Aspect::Licences,
        Aspect::Functionality,
        Aspect::HumanRoles,
        Aspect::Reviews,
        Aspect::MetadataSchemas,
    ];

    pub fn fields(self) -> &'static [&'static str] {
        match self {
            Aspect::Time => TIME,
            Aspect::AdditionalResources => ADDITIONAL_RESOURCES,
            Aspect::DataCategorizations => DATA_CATEGORIZATIONS,
            Aspect::Functionality => FUNCTIONALITY,
            Aspect::Versions => VERSIONS,
            Aspect::HumanRoles => HUMAN_ROLES,
            Aspect::Licences => LICENCES,
            Aspect::FaultTolerance => FAULT_TOLERANCE,
            Aspect::Reviews => REVIEWS,
            Aspect::MetadataSchemas => METADATA_SCHEMAS,
        }
    }

    pub fn alias(self) -> Option<&'static str> {
        match self {
            Aspect::Functionality => Some("Operationality"),
            _ => None,
        }
    }

    /// Reviews are reported but never counted as a gap.
    pub fn informational(self) -> bool {
        self == Aspect::Reviews
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Aspect::DataCategorizations => "DataCategorizations",
            Aspect::Versions => "Versions",
            Aspect::Time => "Time",
            Aspect::AdditionalResources => "AdditionalResources",
            Aspect::FaultTolerance => "FaultTolerance",
            Aspect::Licences => "Licences",
            Aspect::Functionality => "Functionality",
            Aspect::HumanRoles => "HumanRoles",
            Aspect::Reviews => "Reviews",
            Aspect::MetadataSchemas => "MetadataSchemas",
        }
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rows of the crosswalk. Data stands for both raw data and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CrosswalkRow {
    ResearchObjective,
    Method,
    Platform,
    Implementation,
    Actor,
    Data,
}

impl CrosswalkRow {
    pub const ALL: [CrosswalkRow; 6] = [
        CrosswalkRow::ResearchObjective,
        CrosswalkRow::Method,
        CrosswalkRow::Platform,
        CrosswalkRow::Implementation,
        CrosswalkRow::Actor,
        CrosswalkRow::Data,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CrosswalkRow::ResearchObjective => "ResearchObjective",
            CrosswalkRow::Method => "Method",
            CrosswalkRow::Platform => "Platform",
            CrosswalkRow::Implementation => "Implementation",
            CrosswalkRow::Actor => "Actor",
            CrosswalkRow::Data => "Data",
        }
    }

    fn aspects(self) -> &'static [Aspect] {
        use Aspect::*;
        match self {
            CrosswalkRow::ResearchObjective => &[Versions, Reviews, MetadataSchemas],
            CrosswalkRow::Method => &[],
            CrosswalkRow::Platform => &[
                Versions,
                Time,
                AdditionalResources,
                FaultTolerance,
                Functionality,
                MetadataSchemas,
            ],
            CrosswalkRow::Implementation => &[
                Versions,
                Time,
                AdditionalResources,
                FaultTolerance,
                Licences,
                Functionality,
                MetadataSchemas,
            ],
            CrosswalkRow::Actor => &[HumanRoles, MetadataSchemas],
            CrosswalkRow::Data => &[
                DataCategorizations,
                Versions,
                Time,
                AdditionalResources,
                FaultTolerance,
                Licences,
                Functionality,
                MetadataSchemas,
            ],
        }
    }
}

/// Rows in `CrosswalkRow::ALL` order, columns in `Aspect::ALL` order.
pub fn dimension_aspect_crosswalk() -> [[bool; 10]; 6] {
    let mut grid = [[false; 10]; 6];
    for (r, row) in CrosswalkRow::ALL.into_iter().enumerate() {
        for (c, aspect) in Aspect::ALL.into_iter().enumerate() {
            grid[r][c] = row.aspects().contains(&aspect);
        }
    }
    grid
}

pub fn crosswalk(row: CrosswalkRow, aspect: Aspect) -> bool {
    row.aspects().contains(&aspect)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AspectCoverage {
    pub aspect: Aspect,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alias: Option<&'static str>,
    pub informational: bool,
    pub populated_paths: Vec<&'static str>,
    pub missing_paths: Vec<&'static str>,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosswalkEntry {
    pub dimension: CrosswalkRow,
    pub aspects: Vec<Aspect>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AspectMatrix {
    pub aspects: Vec<AspectCoverage>,
    pub crosswalk: Vec<CrosswalkEntry>,
}

impl AspectMatrix {
    pub fn get(&self, aspect: Aspect) -> &AspectCoverage {
        self.aspects
            .iter()
            .find(|a| a.aspect == aspect)
            .expect("every aspect is evaluated")
    }
}

fn evaluate(root: &Value, aspect: Aspect) -> AspectCoverage {
    let (populated_paths, missing_paths): (Vec<&'static str>, Vec<&'static str>) = aspect
        .fields()
        .iter()
        .copied()
        .partition(|p| !path::populated_instances(root, p).is_empty());
    let coverage = populated_paths.len() as f64 / aspect.fields().len() as f64;
    AspectCoverage {
        aspect,
        alias: aspect.alias(),
        informational: aspect.informational(),
        populated_paths,
        missing_paths,
        coverage,
    }
}

pub fn aspect_checklist(doc: &BcoDocument) -> AspectMatrix {
    let root = doc.to_value();
    AspectMatrix {
        aspects: Aspect::ALL.into_iter().map(|a| evaluate(&root, a)).collect(),
        crosswalk: CrosswalkRow::ALL
            .into_iter()
            .map(|row| CrosswalkEntry {
                dimension: row,
                aspects: row.aspects().to_vec(),
            })
            .collect(),
    }
}

/// Aligned text grid of the crosswalk followed by per-aspect coverage.
pub fn render_text(matrix: &AspectMatrix) -> String {
    let first = CrosswalkRow::ALL.iter().map(|r| r.as_str().len()).max().unwrap_or(0);
    let mut out = format!("{:first$}", "");
    for a in Aspect::ALL {
        out.push_str(&format!("  {}", a.as_str()));
    }
    out.push('\n');
    for row in CrosswalkRow::ALL {
        out.push_str(&format!("{:first$}", row.as_str()));
        for a in Aspect::ALL {
            let mark = if crosswalk(row, a) { "x" } else { "." };
            out.push_str(&format!("  {:^w$}", mark, w = a.as_str().len()));
        }
        out.push('\n');
    }
    out.push('\n');
    let width = Aspect::ALL.iter().map(|a| a.as_str().len()).max().unwrap_or(0);
    for c in &matrix.aspects {
        let note = if c.informational { " (informational)" } else { "" };
        out.push_str(&format!(
            "{:width$}  {:>5.1}%  {}/{}{}\n",
            c.aspect.as_str(),
            c.coverage * 100.0,
            c.populated_paths.len(),
            c.populated_paths.len() + c.missing_paths.len(),
            note
        ));
        for m in &c.missing_paths {
            out.push_str(&format!("{:width$}    missing {m}\n", ""));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bco::is_model_field;

    #[test]
    fn ten_aspects() {
        assert_eq!(Aspect::ALL.len(), 10);
    }

    #[test]
    fn every_aspect_field_is_a_model_field() {
        for a in Aspect::ALL {
            for f in a.fields() {
                assert!(is_model_field(f), "{a}: {f}");
            }
        }
    }

    #[test]
    fn functionality_overlaps_other_aspects() {
        let total: usize = Aspect::ALL.iter().map(|a| a.fields().len()).sum();
        let mut distinct: Vec<&str> = Aspect::ALL.iter().flat_map(|a| a.fields().iter().copied()).collect();
        distinct.sort();
        distinct.dedup();
        assert!(total > distinct.len());
    }

    #[test]
    fn method_row_is_empty_and_data_categorizations_is_data_only() {
        let grid = dimension_aspect_crosswalk();
        assert!(grid[1].iter().all(|c| !c));
        let col = Aspect::ALL.iter().position(|a| *a == Aspect::DataCategorizations).unwrap();
        let rows: Vec<CrosswalkRow> = CrosswalkRow::ALL
            .into_iter()
            .enumerate()
            .filter(|(r, _)| grid[*r][col])
            .map(|(_, row)| row)
            .collect();
        assert_eq!(rows, vec![CrosswalkRow::Data]);
        assert!(crosswalk(CrosswalkRow::Actor, Aspect::HumanRoles));
    }

    #[test]
    fn empty_document_has_no_reviews() {
        let m = aspect_checklist(&BcoDocument::default());
        let reviews = m.get(Aspect::Reviews);
        assert_eq!(reviews.coverage, 0.0);
        assert_eq!(reviews.missing_paths.len(), 4);
        assert!(reviews.informational);
    }

    #[test]
    fn grid_renders_all_rows() {
        let text = render_text(&aspect_checklist(&BcoDocument::default()));
        for row in CrosswalkRow::ALL {
            assert!(text.contains(row.as_str()));
        }
        assert!(text.contains("(informational)"));
    }
}
