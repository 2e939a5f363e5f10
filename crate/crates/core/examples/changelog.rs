// Compare two versions of a metamodel and print a changelog.

use std::error::Error;

use ecore_quality::compare::{diff, render_changelog, ChangelogFormat};
use ecore_quality::load_model;
use ecore_quality::serialization::provenance_records;

const BEFORE: &str = include_str!("../tests/fixtures/canonical/library.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let after = BEFORE
        .replace("name=\"pages\"", "name=\"pageCount\"")
        .replace("name=\"title\" eType=\"ecore:EDataType http://www.eclipse.org/emf/2002/Ecore#//EString\" lowerBound=\"1\"",
                 "name=\"title\" eType=\"ecore:EDataType http://www.eclipse.org/emf/2002/Ecore#//EString\" lowerBound=\"0\"");
    let a = load_model(BEFORE, "v1.ecore")?.model;
    let b = load_model(&after, "v2.ecore")?.model;

    let delta = diff(&a, &b);
    print!("{}", render_changelog(&delta, ChangelogFormat::Text));
    print!("{}", render_changelog(&delta, ChangelogFormat::Json));

    for r in provenance_records(&delta, 1_700_000_000) {
        println!("{:?} {} at {}", r.kind, r.path, r.t);
    }
    assert!(diff(&a, &a).is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
