//! Quality analysis for Ecore metamodels.
//!
//! The crate loads `.ecore` XMI documents into an order-preserving in-memory
//! model, checks them against a catalog of quality rules grouped by quality
//! level (physical, empirical, syntactic, semantic, pragmatic, social,
//! deontic), and offers the supporting machinery around that:
//!
//! - [`serialization`]: byte-stable XMI reading and writing, JSON, SVG and
//!   markdown exports, the layout sidecar format and the provenance log.
//! - [`rules`]: the rule catalog and engine producing a [`DiagnosticReport`].
//! - [`layout`]: geometric aesthetics metrics over diagram layouts.
//! - [`compare`]: matching, diffing, changelogs, import/copy and
//!   search-and-replace across models.
//! - [`instances`]: dynamic instance documents, their validation and
//!   minimal-instance synthesis.
//! - [`cli`]: the `ecoreq` command-line frontend.
//!
//! ```no_run
//! use ecore_quality::{load_model, rules::{run_rules, RuleConfig, RuleInputs}};
//!
//! let text = std::fs::read_to_string("library.ecore").unwrap();
//! let loaded = load_model(&text, "library.ecore").unwrap();
//! let inputs = RuleInputs::new(&loaded.builtins).with_source_map(&loaded.source_map);
//! let report = run_rules(&loaded.model, &inputs, &RuleConfig::default()).unwrap();
//! for d in &report.diagnostics {
//!     println!("{} {} {}", d.rule_id, d.path, d.message);
//! }
//! ```

pub mod cli;
pub mod compare;
pub mod diagnostic;
pub mod instances;
pub mod layout;
pub mod metamodel;
pub mod rules;
pub mod serialization;

pub use diagnostic::{Diagnostic, DiagnosticReport, QualityLevel, Severity};
pub use metamodel::{BuiltinRegistry, EcoreModel, ElementKind, ElementPath};
pub use serialization::{parse_xmi, serialize_xmi, ParsedXmi, SourceMap, XmiError};

/// A parsed and type-resolved model together with the data needed to report on it.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub model: EcoreModel,
    pub source_map: SourceMap,
    pub builtins: BuiltinRegistry,
    /// Findings of type resolution (unresolved references).
    pub resolution: Vec<Diagnostic>,
}

/// Parses an XMI document and resolves its type references against the
/// standard builtin registry.
pub fn load_model(text: &str, source_uri: &str) -> Result<LoadedModel, XmiError> {
    load_model_with(text, source_uri, BuiltinRegistry::standard())
}

pub fn load_model_with(
    text: &str,
    source_uri: &str,
    builtins: BuiltinRegistry,
) -> Result<LoadedModel, XmiError> {
    let ParsedXmi {
        mut model,
        source_map,
    } = parse_xmi(text, source_uri)?;
    let resolution = metamodel::resolve_types(&mut model, &builtins);
    Ok(LoadedModel {
        model,
        source_map,
        builtins,
        resolution,
    })
}
