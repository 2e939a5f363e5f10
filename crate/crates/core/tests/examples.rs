mod changelog {
    include!("../examples/changelog.rs");
}
mod command_line {
    include!("../examples/command_line.rs");
}
mod element_age {
    include!("../examples/element_age.rs");
}
mod filter_docs {
    include!("../examples/filter_docs.rs");
}
mod identifiers {
    include!("../examples/identifiers.rs");
}
mod import_copy {
    include!("../examples/import_copy.rs");
}
mod inheritance {
    include!("../examples/inheritance.rs");
}
mod instances {
    include!("../examples/instances.rs");
}
mod layout_metrics {
    include!("../examples/layout_metrics.rs");
}
mod lint {
    include!("../examples/lint.rs");
}
mod round_trip {
    include!("../examples/round_trip.rs");
}
mod search_replace {
    include!("../examples/search_replace.rs");
}

#[test]
fn changelog_example_runs() {
    changelog::run_example().expect("changelog example should run");
}

#[test]
fn command_line_example_runs() {
    command_line::run_example().expect("command_line example should run");
}

#[test]
fn element_age_example_runs() {
    element_age::run_example().expect("element_age example should run");
}

#[test]
fn filter_docs_example_runs() {
    filter_docs::run_example().expect("filter_docs example should run");
}

#[test]
fn identifiers_example_runs() {
    identifiers::run_example().expect("identifiers example should run");
}

#[test]
fn import_copy_example_runs() {
    import_copy::run_example().expect("import_copy example should run");
}

#[test]
fn inheritance_example_runs() {
    inheritance::run_example().expect("inheritance example should run");
}

#[test]
fn instances_example_runs() {
    instances::run_example().expect("instances example should run");
}

#[test]
fn layout_metrics_example_runs() {
    layout_metrics::run_example().expect("layout_metrics example should run");
}

#[test]
fn lint_example_runs() {
    lint::run_example().expect("lint example should run");
}

#[test]
fn round_trip_example_runs() {
    round_trip::run_example().expect("round_trip example should run");
}

#[test]
fn search_replace_example_runs() {
    search_replace::run_example().expect("search_replace example should run");
}
