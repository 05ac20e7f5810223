mod common;

use primad_bco::bco::{canonical_json, parse_bco, to_json_pretty, verify_etag, EtagResult};
use primad_bco::reconfigure::{
    add_dissemination, add_reproduction_record, annotate_resource_permission, declared_permissions,
    dissemination_records, reproduction_records, to_conceptual, Access, DisseminationKind, DisseminationRecord,
    ReferenceKind, ReproductionRecord, ResourcePermission, TransformError, EXTENSION_SCHEMA,
};
use primad_bco::Severity;
use serde_json::json;

use common::*;

fn repro() -> ReproductionRecord {
    ReproductionRecord {
        date: "2024-03-01T12:00:00Z".into(),
        result: "partial".into(),
        obstacles: vec!["input files need a platform account".into()],
        coverage: 0.28,
        new_bco_ref: Some("https://biocomputeobject.org/BCO_000003/1.0".into()),
    }
}

#[test]
fn conceptual_preview_relocates_fields() {
    let preview = to_conceptual(&conformant(), None).unwrap();
    let c = &preview.conceptual;
    assert_eq!(preview.domain_name, "Conceptual Domain");
    assert_eq!(
        c.objectives,
        "Identify ledipasvir resistance mutations in hepatitis C virus genotype 1a samples."
    );
    assert_eq!(
        c.method_outline,
        vec![
            "Align patient reads to reference genomes with HIVE-Hexagon.",
            "Call variants per position with the sequence profiling engine.",
        ]
    );
    assert_eq!(c.results, "A table of mutation frequencies and coverage per genome position.");
    assert!(c.interpretation.starts_with("Frequencies above"));
    assert!(c.method_step_links.is_empty());
    assert_eq!(c.input_list.len(), 4);
    assert_eq!(c.output_list.len(), 16);
    assert_eq!(c.platform, vec!["HIVE"]);
    assert_eq!(c.keywords.len(), 3);
    let kinds: Vec<(ReferenceKind, &str)> = c.xref.iter().map(|x| (x.kind, x.identifier.as_str())).collect();
    assert_eq!(
        kinds,
        vec![
            (ReferenceKind::Database, "pubchem.compound:67505836"),
            (ReferenceKind::Ontology, "SO:SO:0000694"),
        ]
    );
    assert!(preview.warnings.is_empty());

    let expected_steps = json!([
        {
            "step_number": 1,
            "name": "HIVE-Hexagon",
            "description": "Alignment of reads to a set of references",
            "version": "1.3",
            "prerequisite": [{"filename": "hexagon_aligner_binary", "uri": "https://github.com/example-lab/hexagon"}]
        },
        {
            "step_number": 2,
            "name": "Sequence Profiling Engine",
            "description": "Variant calling and mutation frequency profiling",
            "version": "2.0",
            "prerequisite": [{"filename": "profiler_database", "uri": "https://github.com/example-lab/profiler"}]
        }
    ]);
    assert_eq!(
        canonical_json(&preview.execution["pipeline_steps"]),
        canonical_json(&expected_steps)
    );
    assert_eq!(preview.execution["script_driver"], json!("hive"));
}

#[test]
fn conceptual_preview_warns_on_missing_structure() {
    let mut v = raw(CONFORMANT);
    v["description"]["keywords"] = json!([]);
    v["usability"] = json!("Detect resistance mutations from patient reads.");
    let preview = to_conceptual(&doc(&v), Some("Study Concept")).unwrap();
    assert_eq!(preview.domain_name, "Study Concept");
    assert!(preview.conceptual.keywords.is_empty());
    assert_eq!(preview.conceptual.objectives, "Detect resistance mutations from patient reads.");
    assert_eq!(preview.warnings.len(), 2);
    assert!(preview.warnings.iter().all(|w| w.severity == Severity::Warning));
}

#[test]
fn conceptual_preview_needs_description() {
    let mut v = raw(CONFORMANT);
    v.as_object_mut().unwrap().remove("description");
    assert_eq!(to_conceptual(&doc(&v), None), Err(TransformError::MissingDomain("description")));
}

#[test]
fn reproduction_records_are_idempotent() {
    let once = add_reproduction_record(&conformant(), &repro()).unwrap();
    assert!(once.notices.is_empty());
    let twice = add_reproduction_record(&once.document, &repro()).unwrap();
    assert_eq!(reproduction_records(&twice.document), vec![repro()]);
    assert_eq!(twice.notices[0].severity, Severity::Info);
    assert_eq!(reproduction_records(&twice.document)[0].coverage, 0.28);

    let own: Vec<_> = twice
        .document
        .extensions()
        .iter()
        .filter(|e| e["extension_schema"] == json!(EXTENSION_SCHEMA))
        .collect();
    assert_eq!(own.len(), 1);
    assert_eq!(twice.document.extensions().len(), conformant().extensions().len() + 1);
}

#[test]
fn disseminations_keep_kinds_and_survive_round_trip() {
    let talk = DisseminationRecord {
        identifier: "https://example.org/talks/hcv-2020".into(),
        kind: DisseminationKind::Talk,
        medium: Some("conference".into()),
    };
    let poster = DisseminationRecord {
        identifier: "https://doi.org/10.1000/poster.42".into(),
        kind: DisseminationKind::Poster,
        medium: None,
    };
    let a = add_dissemination(&conformant(), &talk).unwrap().document;
    let b = add_dissemination(&a, &poster).unwrap().document;
    assert_eq!(dissemination_records(&b), vec![talk.clone(), poster.clone()]);

    let reparsed = parse_bco(&to_json_pretty(&b)).unwrap();
    assert_eq!(canonical_json(&reparsed.to_value()), canonical_json(&b.to_value()));
    assert_eq!(dissemination_records(&reparsed), vec![talk, poster]);
    assert_eq!(verify_etag(&reparsed), EtagResult::Match);
}

#[test]
fn invalid_records_are_rejected() {
    let mut bad = repro();
    bad.coverage = -0.1;
    assert!(matches!(
        add_reproduction_record(&conformant(), &bad),
        Err(TransformError::InvalidRecord(_))
    ));
    let empty = DisseminationRecord {
        identifier: "  ".into(),
        kind: DisseminationKind::Other,
        medium: None,
    };
    assert!(matches!(add_dissemination(&conformant(), &empty), Err(TransformError::InvalidRecord(_))));
}

#[test]
fn permissions_must_point_at_resources() {
    let perm = |p: &str| ResourcePermission {
        resource_path: p.into(),
        access: Access::Open,
        justification: "public".into(),
        how_to_obtain: None,
    };
    for missing in ["/execution/script/7", "/provenance/name", "/nothing/here"] {
        assert_eq!(
            annotate_resource_permission(&conformant(), &perm(missing)),
            Err(TransformError::UnresolvedPath(missing.into()))
        );
    }
    let stored = annotate_resource_permission(&conformant(), &perm("/io/output_subdomain/0/uri")).unwrap();
    assert_eq!(declared_permissions(&stored.document), vec![perm("/io/output_subdomain/0/uri")]);

    let mut stricter = perm("/io/output_subdomain/0/uri");
    stricter.access = Access::NotAuthorized;
    let replaced = annotate_resource_permission(&stored.document, &stricter).unwrap();
    assert_eq!(declared_permissions(&replaced.document), vec![stricter]);
    assert_eq!(replaced.notices.len(), 1);
}

#[test]
fn record_json_matches_the_documented_shape() {
    let rec: ReproductionRecord = serde_json::from_value(json!({
        "date": "2024-01-01T00:00:00Z",
        "result": "failed",
        "obstacles": ["no access"],
        "coverage": 0.0
    }))
    .unwrap();
    assert_eq!(rec.new_bco_ref, None);
    let perm: ResourcePermission = serde_json::from_value(json!({
        "resource_path": "/execution/script/0",
        "access": "authorization_required",
        "justification": "login"
    }))
    .unwrap();
    assert_eq!(perm.access, Access::AuthorizationRequired);
}
