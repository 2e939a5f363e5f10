// Supertype closure, inherited features and circular inheritance.

use std::error::Error;

use ecore_quality::load_model;
use ecore_quality::metamodel::{all_features, super_closure};
use ecore_quality::rules::check_circular_inheritance;

const ZOO: &str = include_str!("../tests/fixtures/canonical/multi_inheritance.ecore");
const CYCLE: &str = include_str!("../tests/fixtures/vehicle_cycle.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let zoo = load_model(ZOO, "zoo.ecore")?.model;
    let duck = zoo.path_from_str("/zoo/Duck").expect("class exists");
    let closure = super_closure(&zoo, &duck);
    let names: Vec<&str> = closure.ancestors.iter().map(|p| p.name()).collect();
    println!("Duck inherits from {}", names.join(", "));
    for f in all_features(&zoo, &duck) {
        println!("  {} from {}", f.feature.name, f.owner.name());
    }

    let cyclic = load_model(CYCLE, "vehicles.ecore")?.model;
    for d in check_circular_inheritance(&cyclic) {
        println!("{} {} {}", d.rule_id, d.path, d.message);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
