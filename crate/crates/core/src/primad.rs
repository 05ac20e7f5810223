//! PRIMAD dimensions, the reproducibility-label matrix, and classification
//! of planned reproductions.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// PRIMAD dimensions. The first seven are the direct change slots; the
/// rest are non-direct qualities that never appear in a change vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Dimension {
    Platform,
    ResearchObjective,
    Implementation,
    Method,
    Actor,
    DataRaw,
    DataParameters,
    Consistency,
    Transparency,
    Coverage,
    Longevity,
}

impl Dimension {
    pub const DIRECT: [Dimension; 7] = [
        Dimension::Platform,
        Dimension::ResearchObjective,
        Dimension::Implementation,
        Dimension::Method,
        Dimension::Actor,
        Dimension::DataRaw,
        Dimension::DataParameters,
    ];

    pub const NON_DIRECT: [Dimension; 4] = [
        Dimension::Consistency,
        Dimension::Transparency,
        Dimension::Coverage,
        Dimension::Longevity,
    ];

    pub fn is_direct(self) -> bool {
        self.slot().is_some()
    }

    /// Position in a change vector, for direct dimensions.
    pub fn slot(self) -> Option<usize> {
        Self::DIRECT.iter().position(|d| *d == self)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Platform => "Platform",
            Dimension::ResearchObjective => "ResearchObjective",
            Dimension::Implementation => "Implementation",
            Dimension::Method => "Method",
            Dimension::Actor => "Actor",
            Dimension::DataRaw => "DataRaw",
            Dimension::DataParameters => "DataParameters",
            Dimension::Consistency => "Consistency",
            Dimension::Transparency => "Transparency",
            Dimension::Coverage => "Coverage",
            Dimension::Longevity => "Longevity",
        }
    }

    pub fn snake_name(self) -> &'static str {
        match self {
            Dimension::Platform => "platform",
            Dimension::ResearchObjective => "research_objective",
            Dimension::Implementation => "implementation",
            Dimension::Method => "method",
            Dimension::Actor => "actor",
            Dimension::DataRaw => "data_raw",
            Dimension::DataParameters => "data_parameters",
            Dimension::Consistency => "consistency",
            Dimension::Transparency => "transparency",
            Dimension::Coverage => "coverage",
            Dimension::Longevity => "longevity",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown dimension `{0}`")]
pub struct UnknownDimension(pub String);

impl FromStr for Dimension {
    type Err = UnknownDimension;

    /// Accepts `data_parameters`, `DataParameters`, `data-parameters`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Dimension::DIRECT
            .into_iter()
            .chain(Dimension::NON_DIRECT)
            .find(|d| d.as_str().to_ascii_lowercase() == folded)
            .ok_or_else(|| UnknownDimension(s.to_string()))
    }
}

/// Parses the comma-separated changed-dimension syntax used by the CLI.
/// An empty string means nothing changes.
pub fn parse_changed(list: &str) -> Result<ChangeVector, UnknownDimension> {
    let mut dims = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let dim: Dimension = part.parse()?;
        if !dim.is_direct() {
            return Err(UnknownDimension(part.to_string()));
        }
        dims.push(dim);
    }
    Ok(ChangeVector::from_changed(dims))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Change {
    Fixed,
    Changed,
}

/// One declared value per direct dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ChangeVector {
    changed: [bool; 7],
}

impl ChangeVector {
    pub fn all_fixed() -> Self {
        Self::default()
    }

    pub fn from_changed(dims: impl IntoIterator<Item = Dimension>) -> Self {
        let mut v = Self::default();
        for d in dims {
            v = v.with(d, Change::Changed);
        }
        v
    }

    /// Vector whose bit `i` (of 7) marks `Dimension::DIRECT[i]` as changed.
    pub fn from_bits(bits: u8) -> Self {
        let mut changed = [false; 7];
        for (i, c) in changed.iter_mut().enumerate() {
            *c = bits & (1 << i) != 0;
        }
        Self { changed }
    }

    /// All 128 vectors.
    pub fn enumerate() -> impl Iterator<Item = ChangeVector> {
        (0u8..128).map(Self::from_bits)
    }

    /// Panics for non-direct dimensions.
    pub fn get(&self, dim: Dimension) -> Change {
        let slot = dim.slot().expect("non-direct dimensions have no change slot");
        if self.changed[slot] {
            Change::Changed
        } else {
            Change::Fixed
        }
    }

    pub fn with(mut self, dim: Dimension, change: Change) -> Self {
        let slot = dim.slot().expect("non-direct dimensions have no change slot");
        self.changed[slot] = change == Change::Changed;
        self
    }

    pub fn changed(&self) -> Vec<Dimension> {
        Dimension::DIRECT
            .into_iter()
            .filter(|d| self.get(*d) == Change::Changed)
            .collect()
    }
}

impl Serialize for ChangeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.changed().serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    Repeat,
    Port,
    Reuse,
    Recode,
    Ratify,
    Review,
    Resample,
    Reparameterize,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// What a label requires of one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SlotRule {
    /// `-`: must not change.
    MustFix,
    /// `x`: must change.
    MustChange,
    /// `(x)`: may change accordingly.
    MayChange,
}

impl SlotRule {
    pub fn symbol(self) -> &'static str {
        match self {
            SlotRule::MustFix => "-",
            SlotRule::MustChange => "x",
            SlotRule::MayChange => "(x)",
        }
    }

    fn admits(self, change: Change) -> bool {
        match self {
            SlotRule::MustFix => change == Change::Fixed,
            SlotRule::MustChange => change == Change::Changed,
            SlotRule::MayChange => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelRule {
    pub label: Label,
    pub aliases: &'static [&'static str],
    /// Indexed like `Dimension::DIRECT`.
    pub slots: [SlotRule; 7],
    pub gains: &'static [&'static str],
    pub orthogonal: bool,
}

impl LabelRule {
    pub fn slot(&self, dim: Dimension) -> SlotRule {
        self.slots[dim.slot().expect("direct dimension")]
    }

    pub fn dimensions_with(&self, rule: SlotRule) -> Vec<Dimension> {
        Dimension::DIRECT
            .into_iter()
            .filter(|d| self.slot(*d) == rule)
            .collect()
    }

    pub fn admits(&self, v: &ChangeVector) -> bool {
        Dimension::DIRECT
            .into_iter()
            .all(|d| self.slot(d).admits(v.get(d)))
    }

    /// The vector changing exactly this rule's must-change slots.
    pub fn canonical_vector(&self) -> ChangeVector {
        ChangeVector::from_changed(self.dimensions_with(SlotRule::MustChange))
    }
}

use SlotRule::{MayChange as M_, MustChange as X_, MustFix as F_};

//                                 P    R    I    M    A    Raw  Param
static LABEL_MATRIX: [LabelRule; 8] = [
    LabelRule {
        label: Label::Repeat,
        aliases: &[],
        slots: [F_, F_, F_, F_, F_, F_, F_],
        gains: &["Consistency Across Trials", "Determinism"],
        orthogonal: false,
    },
    LabelRule {
        label: Label::Port,
        aliases: &["Relocate"],
        slots: [X_, F_, F_, F_, F_, F_, F_],
        gains: &["Cross-Platform Compatibility (Portability)", "Minimal Dependency (Flexibility)"],
        orthogonal: false,
    },
    LabelRule {
        label: Label::Reuse,
        aliases: &["Re-use", "Re-purpose"],
        slots: [F_, X_, F_, F_, F_, F_, F_],
        gains: &[
            "Cross-Disciplinary Application (Apply code in different sitting)",
            "Resource Efficiency",
        ],
        orthogonal: true,
    },
    LabelRule {
        label: Label::Recode,
        aliases: &["Re-code", "Reinterpret"],
        slots: [M_, F_, X_, F_, F_, F_, F_],
        gains: &[
            "Improved Code Quality",
            "Correctness of Implementation",
            "Expand Adoption",
            "Enhanced Efficiency",
            "flexibility",
        ],
        orthogonal: false,
    },
    LabelRule {
        label: Label::Ratify,
        aliases: &["Validate"],
        slots: [M_, F_, M_, X_, F_, M_, M_],
        gains: &[
            "Hypothesis Correctness",
            "Validation via a Different Approach",
            "Findings Robustness",
        ],
        orthogonal: false,
    },
    LabelRule {
        label: Label::Review,
        aliases: &["Independent Verify"],
        slots: [F_, F_, F_, F_, X_, F_, F_],
        gains: &["Enhanced Transparency (Sufficiency information)", "Independent Verification"],
        orthogonal: true,
    },
    LabelRule {
        label: Label::Resample,
        aliases: &["Generalize"],
        slots: [F_, F_, F_, F_, F_, X_, M_],
        gains: &["Applicability across Different Settings"],
        orthogonal: false,
    },
    LabelRule {
        label: Label::Reparameterize,
        aliases: &["Reparameterization", "Recalibration", "Parameter Sweep"],
        slots: [F_, F_, F_, F_, F_, F_, X_],
        gains: &[
            "Robustness",
            "Adaptation to other Conditions (Sensitivity)",
            "Parameters Optimization",
        ],
        orthogonal: false,
    },
];

/// The eight label rules in table order.
pub fn label_matrix() -> &'static [LabelRule] {
    &LABEL_MATRIX
}

pub fn rule(label: Label) -> &'static LabelRule {
    LABEL_MATRIX
        .iter()
        .find(|r| r.label == label)
        .expect("every label has a rule")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotEdit {
    pub dimension: Dimension,
    pub to: Change,
}

/// Edits that would turn a non-matching vector into a match for `label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    pub label: Label,
    pub edits: Vec<SlotEdit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub changed: ChangeVector,
    #[serde(serialize_with = "core_label_name")]
    pub core_label: Option<Label>,
    pub orthogonal_labels: Vec<Label>,
    pub aliases: Vec<&'static str>,
    pub gains: Vec<&'static str>,
    /// Only filled when nothing matched; sorted by number of edits.
    pub unmatched_explanation: Vec<Suggestion>,
}

fn core_label_name<S: Serializer>(label: &Option<Label>, s: S) -> Result<S::Ok, S::Error> {
    match label {
        Some(l) => l.serialize(s),
        None => s.serialize_str("NoMatch"),
    }
}

/// Classifies a declared change vector.
///
/// Research-objective and actor changes are orthogonal: they add Reuse and
/// Review and are then held fixed while the remaining slots are matched
/// against the non-orthogonal rules.
pub fn classify(v: &ChangeVector) -> ClassificationResult {
    let mut orthogonal = Vec::new();
    let mut core = *v;
    for (dim, label) in [(Dimension::ResearchObjective, Label::Reuse), (Dimension::Actor, Label::Review)] {
        if v.get(dim) == Change::Changed {
            orthogonal.push(label);
            core = core.with(dim, Change::Fixed);
        }
    }

    let matched: Vec<&LabelRule> = LABEL_MATRIX
        .iter()
        .filter(|r| !r.orthogonal && r.admits(&core))
        .collect();
    // The table admits at most one core rule per vector; prefer the most
    // specific one if that ever changes.
    let best = matched
        .iter()
        .max_by_key(|r| r.dimensions_with(SlotRule::MustChange).len())
        .map(|r| r.label);

    let core_label = match best {
        Some(Label::Repeat) if !orthogonal.is_empty() => Some(orthogonal[0]),
        other => other,
    };

    let unmatched_explanation = if core_label.is_none() {
        suggestions(&core)
    } else {
        Vec::new()
    };

    let mut labels: Vec<Label> = core_label.into_iter().collect();
    labels.extend(orthogonal.iter().copied().filter(|l| Some(*l) != core_label));
    let mut gains = Vec::new();
    let mut aliases = Vec::new();
    for label in labels {
        let r = rule(label);
        for g in r.gains {
            if !gains.contains(g) {
                gains.push(*g);
            }
        }
        aliases.extend(r.aliases.iter().copied());
    }

    ClassificationResult {
        changed: *v,
        core_label,
        orthogonal_labels: orthogonal,
        aliases,
        gains,
        unmatched_explanation,
    }
}

fn suggestions(core: &ChangeVector) -> Vec<Suggestion> {
    let mut out: Vec<Suggestion> = LABEL_MATRIX
        .iter()
        .filter(|r| !r.orthogonal)
        .map(|r| Suggestion {
            label: r.label,
            edits: Dimension::DIRECT
                .into_iter()
                .filter_map(|d| match (r.slot(d), core.get(d)) {
                    (SlotRule::MustChange, Change::Fixed) => Some(SlotEdit { dimension: d, to: Change::Changed }),
                    (SlotRule::MustFix, Change::Changed) => Some(SlotEdit { dimension: d, to: Change::Fixed }),
                    _ => None,
                })
                .collect(),
        })
        .collect();
    out.sort_by_key(|s| s.edits.len());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NasemTerm {
    Reproducibility,
    Replicability,
    Generalizability,
}

impl FromStr for NasemTerm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "reproducibility" => Ok(NasemTerm::Reproducibility),
            "replicability" => Ok(NasemTerm::Replicability),
            "generalizability" | "generalisability" => Ok(NasemTerm::Generalizability),
            other => Err(format!("unknown NASEM term `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Crosswalk {
    pub term: NasemTerm,
    pub label: Label,
    pub gain: &'static str,
}

pub fn nasem_crosswalk(term: NasemTerm) -> Crosswalk {
    let (label, gain) = match term {
        NasemTerm::Reproducibility => (Label::Repeat, "Result Consistency"),
        NasemTerm::Replicability => (Label::Ratify, "Findings Robustness"),
        NasemTerm::Generalizability => (Label::Reuse, "Cross-Disciplinary Application"),
    };
    Crosswalk { term, label, gain }
}
