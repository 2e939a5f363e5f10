mod common;

use std::collections::BTreeSet;

use common::*;
use ecore_quality::compare::{
    copy_elements, diff, import_package, match_elements, render_changelog, search_replace,
    ChangelogFormat, CopyError, ReplaceOptions, ReplaceScope,
};
use ecore_quality::serialize_xmi;
use ecore_quality::ElementKind;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64) -> (ecore_quality::EcoreModel, ecore_quality::EcoreModel) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_model(&mut rng, 30);
    let k = rng.gen_range(1..=5);
    let b = mutate(&mut rng, &a, k);
    (a, b)
}

fn path_set(paths: &[ecore_quality::ElementPath]) -> BTreeSet<String> {
    paths.iter().map(|p| p.to_string()).collect()
}

#[test]
fn diff_of_identical_fixtures_is_empty() {
    for f in all_models() {
        let Ok(m) = ecore_quality::load_model(&std::fs::read_to_string(&f).unwrap(), "x") else { continue };
        assert!(diff(&m.model, &m.model).is_empty(), "{}", f.display());
        assert_eq!(render_changelog(&diff(&m.model, &m.model), ChangelogFormat::Text), "no changes\n");
    }
}

#[test]
fn changelog_lists_sections() {
    let (a, b) = pair(11);
    let text = render_changelog(&diff(&a, &b), ChangelogFormat::Text);
    assert!(text.contains("Added") || text.contains("Removed") || text.contains("Changed"));
    let json: serde_json::Value = serde_json::from_str(&render_changelog(&diff(&a, &b), ChangelogFormat::Json)).unwrap();
    for key in ["added", "removed", "changed"] {
        assert!(json[key].is_array(), "{key}");
    }
}

#[test]
fn conflicted_import_and_copy_leave_target_untouched() {
    let target = load("canonical/shop.ecore").model;
    let before = serialize_xmi(&target);
    assert!(import_package(&target, &target).is_err());
    assert_eq!(serialize_xmi(&target), before);
    let order = target.path_from_str("/shop/Order").unwrap();
    let err = copy_elements(&target, &BTreeSet::from([order]), &target, None).unwrap_err();
    assert!(matches!(err, CopyError::Conflicts(_)));
    assert_eq!(serialize_xmi(&target), before);
}

#[test]
fn disjoint_import_adds_every_classifier() {
    let target = load("canonical/shop.ecore").model;
    let source = load("canonical/library.ecore").model;
    let merged = import_package(&target, &source).unwrap();
    assert_eq!(
        merged.root().classifiers.len(),
        target.root().classifiers.len() + source.root().classifiers.len()
    );
    assert!(merged.path_from_str("/shop/Book/authors").is_some());
}

#[test]
fn replace_renames_and_keeps_references() {
    let m = load("canonical/library.ecore").model;
    let scope = ReplaceScope::names_of([ElementKind::Class]);
    let (out, changes) = search_replace(&m, "Writer", "Author", &scope, &ReplaceOptions::default()).unwrap();
    assert_eq!(changes.renames.len(), 1);
    let authors = out.feature(&out.path_from_str("/library/Book/authors").unwrap()).unwrap();
    assert_eq!(authors.e_type.as_ref().unwrap().raw, "#//Author");
    let opposite = out.feature(&out.path_from_str("/library/Author/books").unwrap()).unwrap();
    assert_eq!(opposite.opposite.as_ref().unwrap().raw, "#//Book/authors");
}

proptest! {
    #[test]
    fn diff_is_antisymmetric(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let ab = diff(&a, &b);
        let ba = diff(&b, &a);
        prop_assert_eq!(path_set(&ab.additions), path_set(&ba.deletions));
        prop_assert_eq!(path_set(&ab.deletions), path_set(&ba.additions));
        let fwd: BTreeSet<_> = ab.changes.iter().map(|c| (c.path.to_string(), c.field.clone(), c.old.clone(), c.new.clone())).collect();
        let back: BTreeSet<_> = ba.changes.iter().map(|c| (c.path.to_string(), c.field.clone(), c.new.clone(), c.old.clone())).collect();
        prop_assert_eq!(fwd, back);
    }

    #[test]
    fn matching_is_deterministic_and_kind_preserving(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let m = match_elements(&a, &b);
        prop_assert_eq!(&m, &match_elements(&a, &b));
        let mut seen_a = BTreeSet::new();
        let mut seen_b = BTreeSet::new();
        for (pa, pb) in &m.pairs {
            prop_assert_eq!(pa.kind(), pb.kind());
            prop_assert!(seen_a.insert(pa.clone()) && seen_b.insert(pb.clone()));
        }
        prop_assert!(m.unmatched_a.iter().all(|p| !seen_a.contains(p)));
        prop_assert!(m.unmatched_b.iter().all(|p| !seen_b.contains(p)));
        prop_assert_eq!(seen_a.len() + m.unmatched_a.len(), a.len());
        prop_assert_eq!(seen_b.len() + m.unmatched_b.len(), b.len());
    }

    #[test]
    fn dry_run_never_mutates(seed in any::<u64>(), pattern in "[A-Za-z0-9]{1,3}") {
        let (a, _) = pair(seed);
        let before = serialize_xmi(&a);
        let opts = ReplaceOptions { dry_run: true, ..ReplaceOptions::default() };
        let (out, changes) = search_replace(&a, &pattern, "Zz", &ReplaceScope::default(), &opts).unwrap();
        prop_assert_eq!(serialize_xmi(&out), before.clone());
        prop_assert_eq!(serialize_xmi(&a), before);
        let (real, real_changes) = search_replace(&a, &pattern, "Zz", &ReplaceScope::default(), &ReplaceOptions::default()).unwrap();
        prop_assert_eq!(changes, real_changes.clone());
        prop_assert_eq!(real_changes.is_empty(), real == a);
    }
}
