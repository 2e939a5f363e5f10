//! Self-defined JSON form of a model: one object per element with a `kind`
//! tag, containment as nested arrays, references as their serialized text and
//! unrecognized XMI content under `extras`.

use thiserror::Error;

use crate::metamodel::{EPackage, EcoreModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("JSON model at `{field}`: {message}")]
pub struct JsonError {
    pub field: String,
    pub message: String,
}

/// Pretty-printed JSON with a fixed key order and a trailing newline.
pub fn export_json(model: &EcoreModel) -> String {
    let mut s = serde_json::to_string_pretty(model.root()).expect("model serializes");
    s.push('\n');
    s
}

/// Reads [`export_json`] output back. References come back unresolved.
pub fn parse_json(text: &str, source_uri: &str) -> Result<EcoreModel, JsonError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let root: EPackage = serde_path_to_error::deserialize(de).map_err(|e| JsonError {
        field: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    Ok(EcoreModel::new(root, source_uri))
}
