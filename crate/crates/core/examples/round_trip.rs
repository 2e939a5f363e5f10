// Parse a metamodel, save it unchanged and move it through JSON.

use std::error::Error;

use ecore_quality::serialization::{export_json, parse_json};
use ecore_quality::{parse_xmi, serialize_xmi};

const LIBRARY: &str = include_str!("../tests/fixtures/canonical/library.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let parsed = parse_xmi(LIBRARY, "library.ecore")?;
    let saved = serialize_xmi(&parsed.model);
    assert_eq!(saved, LIBRARY);

    for path in parsed.model.paths().take(5) {
        let loc = parsed.source_map.get(path).expect("every element has a location");
        println!("{path} at {}:{}", loc.line, loc.column);
    }

    let json = export_json(&parsed.model);
    let back = parse_json(&json, "library.json")?;
    assert_eq!(serialize_xmi(&back), LIBRARY);
    println!("{} bytes of XMI, {} bytes of JSON", saved.len(), json.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
