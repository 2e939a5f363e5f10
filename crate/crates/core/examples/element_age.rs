// Keep a provenance log of model edits and report element ages.

use std::error::Error;

use ecore_quality::compare::diff;
use ecore_quality::load_model;
use ecore_quality::serialization::{element_ages, provenance_log_append};

const V1: &str = include_str!("../tests/fixtures/canonical/shop.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let log = dir.path().join("shop.history");

    let v1 = load_model(V1, "v1.ecore")?.model;
    let v2 = load_model(&V1.replace("name=\"price\"", "name=\"unitPrice\""), "v2.ecore")?.model;

    let mut empty = v1.clone();
    empty.edit(|root| root.classifiers.clear());
    provenance_log_append(&log, &diff(&empty, &v1), 1_000)?;
    provenance_log_append(&log, &diff(&v1, &v2), 5_000)?;

    let report = element_ages(&log, &v2, 9_000)?;
    for (path, age) in report.ages.iter().take(8) {
        println!("{path}: age {:?}, last modified {:?}", age.age, age.last_modified);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
