// Measure a diagram layout, check it against thresholds and render SVG.

use std::error::Error;

use ecore_quality::layout::{compute_metrics, layout_report, parse_layout, LayoutThresholds};
use ecore_quality::load_model;
use ecore_quality::serialization::export_svg;

const LIBRARY: &str = include_str!("../tests/fixtures/canonical/library.ecore");
const LAYOUT: &str = include_str!("../tests/fixtures/layouts/library.layout.json");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let model = load_model(LIBRARY, "library.ecore")?.model;
    let layout = parse_layout(LAYOUT)?;

    let m = compute_metrics(&layout);
    println!("{}", serde_json::to_string_pretty(&m)?);

    let strict = LayoutThresholds { min_angle_deg: 45.0, max_label_overlaps: 0 };
    for d in layout_report(&model, &layout, &strict) {
        println!("{} {} {}", d.rule_id, d.path, d.message);
    }

    let svg = export_svg(&model, &layout);
    println!("svg: {} bytes", svg.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
