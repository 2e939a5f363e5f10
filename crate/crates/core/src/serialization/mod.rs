//! Reading and writing models and their derived artefacts: canonical XMI,
//! JSON, SVG, markdown documentation, layout sidecars and the provenance log.

mod docs;
mod json;
mod provenance;
mod svg;
mod xmi;
pub(crate) mod xml;

pub use crate::layout::{parse_layout, LayoutError};
pub use docs::export_docs;
pub use json::{export_json, parse_json, JsonError};
pub use provenance::{
    element_ages, element_ages_from_str, provenance_log_append, provenance_records, AgeReport,
    ChangeKind, ElementAge, ProvenanceRecord,
};
pub use svg::export_svg;
pub use xmi::{
    parse_xmi, serialize_xmi, ParsedXmi, SourceLocation, SourceMap, XmiError, XMI_NS_URI,
    XSI_NS_URI,
};
