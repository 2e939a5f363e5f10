use std::collections::BTreeSet;

use serde::Deserialize;

pub const ECORE_NS_URI: &str = "http://www.eclipse.org/emf/2002/Ecore";

const BUNDLED: &str = include_str!("../../data/builtins.json");

/// How literal values of a data type are checked in instance documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Integer,
    Real,
    Boolean,
    Char,
    Text,
}

impl ValueKind {
    /// Whether `literal` is a valid value of this kind.
    pub fn accepts(self, literal: &str) -> bool {
        match self {
            ValueKind::Integer => literal.trim().parse::<i128>().is_ok(),
            ValueKind::Real => {
                let t = literal.trim();
                !t.is_empty() && t.parse::<f64>().is_ok()
            }
            ValueKind::Boolean => matches!(literal, "true" | "false"),
            ValueKind::Char => literal.chars().count() == 1,
            ValueKind::Text => true,
        }
    }

    /// The smallest well-formed literal, used when synthesizing instances.
    pub fn default_literal(self) -> &'static str {
        match self {
            ValueKind::Integer => "0",
            ValueKind::Real => "0.0",
            ValueKind::Boolean => "false",
            ValueKind::Char => "a",
            ValueKind::Text => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BuiltinType {
    pub name: String,
    pub instance_class_name: String,
    pub value_kind: ValueKind,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct Table {
    data_types: Vec<BuiltinType>,
    classes: Vec<String>,
    known_instance_types: Vec<String>,
}

/// Ecore's standard data types and metaclasses plus the set of instance type
/// names accepted for user data types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinRegistry {
    data_types: Vec<BuiltinType>,
    classes: Vec<String>,
    known_instance_types: BTreeSet<String>,
}

impl BuiltinRegistry {
    /// The table bundled with the crate.
    pub fn standard() -> Self {
        let table: Table = serde_json::from_str(BUNDLED).expect("bundled builtin table is valid");
        let mut known: BTreeSet<String> = table.known_instance_types.into_iter().collect();
        known.extend(table.data_types.iter().map(|t| t.instance_class_name.clone()));
        BuiltinRegistry {
            data_types: table.data_types,
            classes: table.classes,
            known_instance_types: known,
        }
    }

    /// Adds user-supplied instance type names (e.g. project classes).
    pub fn extend_instance_types<I, S>(&mut self, names: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.known_instance_types
            .extend(names.into_iter().map(Into::into));
    }

    pub fn data_type(&self, name: &str) -> Option<&BuiltinType> {
        self.data_types.iter().find(|t| t.name == name)
    }

    pub fn data_types(&self) -> &[BuiltinType] {
        &self.data_types
    }

    pub fn is_class(&self, name: &str) -> bool {
        self.classes.iter().any(|c| c == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.data_type(name).is_some() || self.is_class(name)
    }

    pub fn is_known_instance_type(&self, name: &str) -> bool {
        self.known_instance_types.contains(name)
    }

    /// Value kind implied by a Java instance type name; unknown types are text.
    pub fn value_kind_for_instance_type(&self, name: &str) -> ValueKind {
        self.data_types
            .iter()
            .find(|t| t.instance_class_name == name)
            .map(|t| t.value_kind)
            .unwrap_or(ValueKind::Text)
    }
}

impl Default for BuiltinRegistry {
    fn default() -> Self {
        BuiltinRegistry::standard()
    }
}
