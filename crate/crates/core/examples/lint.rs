// Lint a metamodel and print the findings as text and as JSON.

use std::error::Error;

use ecore_quality::rules::{run_rules, RuleConfig, RuleInputs, RuleSetting};
use ecore_quality::{load_model, Severity};

const SHOP: &str = include_str!("../tests/fixtures/rules/SYN-004/positive.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let loaded = load_model(SHOP, "shop.ecore")?;
    let inputs = RuleInputs::new(&loaded.builtins).with_source_map(&loaded.source_map);

    let report = run_rules(&loaded.model, &inputs, &RuleConfig::default())?;
    for d in &report.diagnostics {
        let (line, col) = d.location.unwrap_or((0, 0));
        println!("{line}:{col} {} {} {}", d.rule_id, d.path, d.message);
    }
    println!("errors: {}", report.count(Severity::Error));
    print!("{}", report.to_json());

    // demote the uniqueness rule to a warning
    let relaxed = RuleConfig::default().with("SYN-004", RuleSetting::Severity(Severity::Warning))?;
    let report = run_rules(&loaded.model, &inputs, &relaxed)?;
    assert!(!report.has_errors());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
