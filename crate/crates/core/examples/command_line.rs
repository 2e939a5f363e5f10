// Drive the command-line frontend in-process and inspect exit codes.

use std::error::Error;

use ecore_quality::cli::{run, EXIT_ERRORS};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let model = format!("{fixtures}/vehicle_cycle.ecore");

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["ecoreq", "lint", model.as_str(), "--format", "json"], &mut out, &mut err);
    print!("{}", String::from_utf8(out)?);
    assert_eq!(code, EXIT_ERRORS);

    let mut out = Vec::new();
    let code = run(["ecoreq", "rules"], &mut out, &mut err);
    print!("{}", String::from_utf8(out)?);
    println!("exit {code}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
