// Rename elements by pattern; references follow the renamed classes.

use std::error::Error;

use ecore_quality::compare::{search_replace, ReplaceOptions, ReplaceScope};
use ecore_quality::{load_model, serialize_xmi, ElementKind};

const LIBRARY: &str = include_str!("../tests/fixtures/canonical/library.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let model = load_model(LIBRARY, "library.ecore")?.model;

    let preview = ReplaceOptions { dry_run: true, ..ReplaceOptions::default() };
    let (unchanged, planned) = search_replace(&model, "Writer", "Author", &ReplaceScope::default(), &preview)?;
    assert_eq!(unchanged, model);
    for r in &planned.renames {
        println!("would rename {} {}: {} -> {}", r.path, r.field, r.old, r.new);
    }

    let classes = ReplaceScope::names_of([ElementKind::Class]);
    let (renamed, _) = search_replace(&model, "Writer", "Author", &classes, &ReplaceOptions::default())?;
    let text = serialize_xmi(&renamed);
    assert!(text.contains("eType=\"#//Author\""));

    let regex = ReplaceOptions { regex: true, ..ReplaceOptions::default() };
    let (_, changes) = search_replace(&model, "^(.*)s$", "${1}List", &ReplaceScope::default(), &regex)?;
    for r in &changes.renames {
        println!("{}: {} -> {}", r.path, r.old, r.new);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
