// Naming conventions and dictionary spell checking.

use std::error::Error;

use ecore_quality::load_model;
use ecore_quality::rules::{
    check_identifier, parse_dictionary, spellcheck_model, split_identifier, Conventions,
};
use ecore_quality::{ElementKind, ElementPath};

const MODEL: &str = include_str!("../tests/fixtures/rules/EMP-002/positive.ecore");
const DICTIONARY: &str = include_str!("../tests/fixtures/rules/EMP-002/dictionary.txt");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for name in ["myBadSpelling", "URLParser2", "order_line"] {
        println!("{name} -> {:?}", split_identifier(name));
    }

    let at = ElementPath::root("p").child(ElementKind::Class, "person", 0);
    for (name, kind) in [("person", ElementKind::Class), ("my class", ElementKind::Class), ("orderLine", ElementKind::Reference)] {
        let found: Vec<String> = check_identifier(name, kind, &at, &Conventions::default())
            .into_iter()
            .map(|d| d.rule_id)
            .collect();
        println!("{name:?} as {}: {found:?}", kind.metaclass());
    }

    let model = load_model(MODEL, "shop.ecore")?.model;
    for d in spellcheck_model(&model, &parse_dictionary(DICTIONARY)) {
        println!("{} {} {}", d.rule_id, d.path, d.message);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
