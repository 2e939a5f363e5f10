// Build the smallest valid instance of a class, save it and validate it.

use std::error::Error;

use ecore_quality::instances::{
    parse_instance, serialize_instance, synthesize_minimal_instance, validate_instance,
};
use ecore_quality::load_model;

const SHOP: &str = include_str!("../tests/fixtures/canonical/shop.ecore");
const FROZEN: &str = include_str!("../tests/fixtures/unsat/frozen_required.ecore");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let shop = load_model(SHOP, "shop.ecore")?.model;
    let root = shop.path_from_str("/shop/Shop").expect("class exists");

    let mut instance = synthesize_minimal_instance(&shop, &root)?;
    let mut product = ecore_quality::instances::InstanceObject::new(shop.path_from_str("/shop/Product").unwrap());
    product.push_attribute("sku", "A-1");
    product.push_attribute("price", "9.5");
    instance.children.push(("products".into(), product));

    let text = serialize_instance(&instance, &shop);
    println!("{text}");
    let back = parse_instance(&text, &shop)?;
    assert!(validate_instance(&back, &shop).is_empty());

    let mut broken = back.clone();
    broken.children[0].1.push_attribute("price", "cheap");
    for d in validate_instance(&broken, &shop) {
        println!("{} {}", d.rule_id, d.message);
    }

    let frozen = load_model(FROZEN, "frozen.ecore")?.model;
    let car = frozen.path_from_str("/p/Car").unwrap();
    match synthesize_minimal_instance(&frozen, &car) {
        Err(why) => println!("no instance: {why}"),
        Ok(_) => unreachable!("engine is frozen and required"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
