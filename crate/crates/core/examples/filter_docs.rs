// Select parts of a model by query and export documentation.

use std::error::Error;

use ecore_quality::load_model;
use ecore_quality::metamodel::{filter_selection, FilterQuery};
use ecore_quality::serialization::export_docs;

const ZOO: &str = include_str!("../tests/fixtures/canonical/multi_inheritance.ecore");
const ANNOTATED: &str = include_str!("../tests/fixtures/canonical/annotations.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let zoo = load_model(ZOO, "zoo.ecore")?.model;
    for q in ["supertypes-of:/zoo/Duck", "subtypes-of:/zoo/Swimmer", "name:^[FS]"] {
        let query: FilterQuery = q.parse()?;
        let hits: Vec<String> = filter_selection(&zoo, &query)?.iter().map(|p| p.to_string()).collect();
        println!("{q}: {}", hits.join(", "));
    }

    let docs = export_docs(&load_model(ANNOTATED, "annotations.ecore")?.model);
    print!("{docs}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
