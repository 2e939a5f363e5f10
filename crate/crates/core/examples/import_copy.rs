// Merge one package into another and copy selected classes between models.

use std::collections::BTreeSet;
use std::error::Error;

use ecore_quality::compare::{copy_elements, import_package};
use ecore_quality::{load_model, serialize_xmi};

const SHOP: &str = include_str!("../tests/fixtures/canonical/shop.ecore");
const LIBRARY: &str = include_str!("../tests/fixtures/canonical/library.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let shop = load_model(SHOP, "shop.ecore")?.model;
    let library = load_model(LIBRARY, "library.ecore")?.model;

    let merged = import_package(&shop, &library)?;
    println!("merged: {} classifiers", merged.root().classifiers.len());

    match import_package(&shop, &shop) {
        Err(conflicts) => println!("rejected: {conflicts}"),
        Ok(_) => unreachable!("a package always clashes with itself"),
    }

    let selection: BTreeSet<_> = ["/library/Book", "/library/BookCategory"]
        .iter()
        .filter_map(|p| library.path_from_str(p))
        .collect();
    let copied = copy_elements(&library, &selection, &shop, None)?;
    let text = serialize_xmi(&copied);
    assert!(text.contains("eType=\"#//BookCategory\""));
    println!("{text}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
