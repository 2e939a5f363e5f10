mod common;

use common::*;
use ecore_quality::compare::diff;
use ecore_quality::layout::parse_layout;
use ecore_quality::metamodel::EClassifier;
use ecore_quality::serialization::{
    element_ages, export_docs, export_json, export_svg, parse_json, provenance_log_append,
};
use ecore_quality::{parse_xmi, serialize_xmi, XmiError};
use proptest::prelude::*;

fn classifier_names(m: &ecore_quality::EcoreModel) -> Vec<String> {
    m.root().classifiers.iter().map(|c| c.name().to_string()).collect()
}

#[test]
fn classifier_order_is_preserved() {
    for f in files("canonical", "ecore") {
        let text = std::fs::read_to_string(&f).unwrap();
        let m = parse_xmi(&text, "x").unwrap().model;
        let again = parse_xmi(&serialize_xmi(&m), "x").unwrap().model;
        assert_eq!(classifier_names(&m), classifier_names(&again), "{}", f.display());
    }
}

#[test]
fn non_canonical_input_canonicalizes_once() {
    let text = "<?xml version='1.0'?>\n<ecore:EPackage name=\"p\" nsPrefix=\"p\" xmlns:ecore=\"http://www.eclipse.org/emf/2002/Ecore\" \
                xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" xmlns:xmi=\"http://www.omg.org/XMI\" nsURI=\"http://p\" xmi:version=\"2.0\">\n\
                <eClassifiers abstract=\"true\" name=\"A\" xsi:type=\"ecore:EClass\"/></ecore:EPackage>";
    let first = serialize_xmi(&parse_xmi(text, "x").unwrap().model);
    assert_ne!(first, text);
    let second = serialize_xmi(&parse_xmi(&first, "x").unwrap().model);
    assert_eq!(first, second);
    assert!(first.contains("<eClassifiers xsi:type=\"ecore:EClass\" name=\"A\" abstract=\"true\"/>"));
}

#[test]
fn unknown_content_survives_round_trip() {
    let text = read("canonical/unknown_content.ecore");
    let m = parse_xmi(&text, "x").unwrap().model;
    assert_eq!(serialize_xmi(&m), text);
    let back = parse_json(&export_json(&m), "x").unwrap();
    assert_eq!(serialize_xmi(&back), text);
}

#[test]
fn json_round_trip_keeps_paths() {
    for f in files("canonical", "ecore") {
        let m = parse_xmi(&std::fs::read_to_string(&f).unwrap(), "x").unwrap().model;
        let back = parse_json(&export_json(&m), "x").unwrap();
        let a: Vec<_> = m.paths().collect();
        let b: Vec<_> = back.paths().collect();
        assert_eq!(a, b, "{}", f.display());
    }
}

#[test]
fn malformed_xml_reports_position() {
    let err = parse_xmi("<ecore:EPackage name=\"p\">\n  <eClassifiers name=\"A\">\n</ecore:EPackage>", "x").unwrap_err();
    match err {
        XmiError::Syntax { line, .. } | XmiError::Format { line, .. } => assert!(line >= 1),
    }
    assert!(parse_json("{\"name\": 3}", "x").is_err());
}

#[test]
fn svg_and_docs_are_pure() {
    let m = load("canonical/library.ecore").model;
    let layout = parse_layout(&read("layouts/library.layout.json")).unwrap();
    let svg = export_svg(&m, &layout);
    assert_eq!(svg, export_svg(&m, &layout));
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("Library"));
    let docs = export_docs(&m);
    assert_eq!(docs, export_docs(&m));
    assert!(docs.starts_with("# library"));
}

#[test]
fn docs_list_undocumented_elements() {
    let docs = export_docs(&load("canonical/annotations.ecore").model);
    assert!(docs.contains("## Undocumented elements"));
}

#[test]
fn provenance_log_tracks_ages() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("history.log");
    let a = load("canonical/library.ecore").model;
    let mut b = a.clone();
    b.edit(|r| r.classifiers.push(EClassifier::Class(ecore_quality::metamodel::EClass::new("Shelf"))));
    let b = resolved(b.into_root());
    let written = provenance_log_append(&log, &diff(&a, &b), 1000).unwrap();
    assert_eq!(written, 1);
    let report = element_ages(&log, &b, 1600).unwrap();
    let shelf = b.path_from_str("/library/Shelf").unwrap();
    assert_eq!(report.ages[&shelf].age, Some(600));
    assert!(report.warnings.is_empty());
    let missing = element_ages(&dir.path().join("none.log"), &b, 0).unwrap();
    assert!(missing.ages.values().all(|a| a.age.is_none()));
}

proptest! {
    #[test]
    fn random_models_round_trip(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, 30);
        let text = serialize_xmi(&m);
        let back = parse_xmi(&text, "x").unwrap().model;
        prop_assert_eq!(serialize_xmi(&back), text.clone());
        let via_json = parse_json(&export_json(&m), "x").unwrap();
        prop_assert_eq!(serialize_xmi(&via_json), text);
    }
}
