mod common;

use proptest::prelude::*;
use proptest::sample::subsequence;

use primad_bco::aspects::aspect_checklist;
use primad_bco::bco::{validate_structure, verify_etag, EtagResult};
use primad_bco::diagnostics::{codes, is_obfuscated_filename, run_lints, LintOptions};
use primad_bco::mapping::{coverage_profile, data_inventory, CoverageProfile, DataInventory};
use primad_bco::primad::{classify, label_matrix, rule, ChangeVector, Dimension};
use primad_bco::reconfigure::{add_reproduction_record, reproduction_records, ReproductionRecord};
use primad_bco::Severity;
use serde_json::Value;

use common::*;

fn len_at(v: &Value, pointer: &str) -> usize {
    v.pointer(pointer).and_then(Value::as_array).map_or(0, Vec::len)
}

/// Inventory counted straight from the untyped JSON.
fn inventory_oracle(v: &Value) -> DataInventory {
    let steps: Vec<Value> = v
        .pointer("/description/pipeline_steps")
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    let params: Vec<Value> = v.pointer("/parametric").and_then(Value::as_array).cloned().unwrap_or_default();
    let step_of = |p: &Value| match p.get("step") {
        Some(Value::Number(n)) => n.as_i64(),
        Some(Value::String(s)) => s.trim().parse().ok(),
        _ => None,
    };
    let errors = ["/error/empirical_error", "/error/algorithmic_error"]
        .iter()
        .map(|p| v.pointer(p).and_then(Value::as_object).map_or(0, |m| m.len()))
        .sum();
    DataInventory {
        io_inputs: len_at(v, "/io/input_subdomain"),
        io_outputs: len_at(v, "/io/output_subdomain"),
        description_inputs_per_step: steps.iter().map(|s| len_at(s, "/input_list")).collect(),
        description_outputs_per_step: steps.iter().map(|s| len_at(s, "/output_list")).collect(),
        parameters_per_step: steps
            .iter()
            .map(|s| match s.get("step_number").and_then(Value::as_i64) {
                Some(n) => params.iter().filter(|p| step_of(p) == Some(n)).count(),
                None => 0,
            })
            .collect(),
        error_entries: errors,
    }
}

fn assert_not_increased(before: &CoverageProfile, after: &CoverageProfile, what: &str) {
    for (b, a) in before.direct.iter().zip(&after.direct) {
        assert!(a.populated_field_count <= b.populated_field_count, "{:?} grew after {what}", a.dimension);
        assert!(a.populated_field_count <= a.mapped_field_count);
    }
    for (b, a) in before.non_direct.iter().zip(&after.non_direct) {
        assert!(a.value <= b.value, "{:?} grew after {what}", a.dimension);
        assert!((0.0..=1.0).contains(&a.value));
    }
}

fn conformant_members() -> Vec<String> {
    member_pointers(&raw(CONFORMANT))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deletions_never_raise_coverage(picks in subsequence(conformant_members(), 1..12)) {
        let mut value = raw(CONFORMANT);
        let mut profile = coverage_profile(&doc(&value));
        let mut aspects = aspect_checklist(&doc(&value));
        for pointer in &picks {
            if !remove(&mut value, pointer) {
                continue;
            }
            let d = doc(&value);
            let next = coverage_profile(&d);
            assert_not_increased(&profile, &next, pointer);
            let next_aspects = aspect_checklist(&d);
            for (b, a) in aspects.aspects.iter().zip(&next_aspects.aspects) {
                prop_assert!(a.coverage <= b.coverage, "{:?} grew after {}", a.aspect, pointer);
            }
            for e in next.direct.iter().flat_map(|e| &e.evidence_paths) {
                prop_assert!(value.pointer(e).is_some(), "evidence {} missing", e);
            }
            profile = next;
            aspects = next_aspects;
        }
    }

    #[test]
    fn inventory_matches_raw_count(picks in subsequence(conformant_members(), 0..8)) {
        let mut value = raw(CONFORMANT);
        for pointer in &picks {
            remove(&mut value, pointer);
        }
        prop_assert_eq!(data_inventory(&doc(&value)), inventory_oracle(&value));
    }

    #[test]
    fn classification_is_consistent(bits in 0u8..128) {
        let v = ChangeVector::from_bits(bits);
        let r = classify(&v);
        prop_assert_eq!(r.core_label.is_some() || !r.orthogonal_labels.is_empty(), !r.gains.is_empty());
        prop_assert_eq!(r.core_label.is_none(), !r.unmatched_explanation.is_empty());
        let mut core = v;
        for d in [Dimension::ResearchObjective, Dimension::Actor] {
            core = core.with(d, primad_bco::primad::Change::Fixed);
        }
        if let Some(label) = r.core_label {
            let rl = rule(label);
            prop_assert!(rl.admits(&core) || (rl.orthogonal && core == ChangeVector::all_fixed()));
        }
        for s in &r.unmatched_explanation {
            let mut fixed = core;
            for e in &s.edits {
                fixed = fixed.with(e.dimension, e.to);
            }
            prop_assert!(rule(s.label).admits(&fixed));
        }
        prop_assert_eq!(classify(&v), r);
    }

    #[test]
    fn disabling_a_rule_removes_only_its_output(mask in proptest::collection::vec(any::<bool>(), 8)) {
        let d = use_case();
        let full = run_lints(&d, &LintOptions::default());
        let disabled: Vec<String> = codes::ALL
            .iter()
            .zip(&mask)
            .filter(|(_, off)| **off)
            .map(|(c, _)| c.to_string())
            .collect();
        let options = LintOptions { disabled: disabled.clone(), ..LintOptions::default() };
        let partial = run_lints(&d, &options);
        let expected: Vec<_> = full.into_iter().filter(|x| !disabled.iter().any(|c| c == x.code)).collect();
        prop_assert_eq!(partial, expected);
    }

    #[test]
    fn dictionary_word_names_are_not_flagged(words in proptest::collection::vec("[a-z]{5,10}", 1..6), ext in "(csv|fasta|txt)") {
        let name = format!("{}.{ext}", words.join("_"));
        prop_assert!(!is_obfuscated_filename(&name, 3));
    }

    #[test]
    fn reproduction_records_keep_documents_valid(coverage in 0.0f64..=1.0, result in "[a-z ]{1,30}") {
        let d = conformant();
        let errors = |x: &primad_bco::bco::BcoDocument| {
            validate_structure(x).iter().filter(|f| f.severity == Severity::Error).count()
        };
        let rec = ReproductionRecord {
            date: "2024-05-01T08:00:00+02:00".into(),
            result,
            obstacles: vec![],
            coverage,
            new_bco_ref: None,
        };
        let once = add_reproduction_record(&d, &rec).unwrap();
        prop_assert_eq!(verify_etag(&once.document), EtagResult::Match);
        prop_assert!(errors(&once.document) <= errors(&d));
        let twice = add_reproduction_record(&once.document, &rec).unwrap();
        prop_assert_eq!(reproduction_records(&twice.document), vec![rec]);
        prop_assert_eq!(twice.notices.len(), 1);
    }
}

#[test]
fn fixture_inventories_match_raw_count() {
    for text in [CONFORMANT, USE_CASE] {
        let v = raw(text);
        assert_eq!(data_inventory(&doc(&v)), inventory_oracle(&v));
    }
}

#[test]
fn canonical_vectors_round_trip() {
    for r in label_matrix() {
        assert_eq!(classify(&r.canonical_vector()).core_label, Some(r.label));
    }
}

#[test]
fn offline_lints_are_deterministic() {
    let d = conformant();
    assert_eq!(run_lints(&d, &LintOptions::default()), run_lints(&d, &LintOptions::default()));
}
