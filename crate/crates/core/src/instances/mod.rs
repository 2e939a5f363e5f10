//! Dynamic instances: documents conforming to a user metamodel, their
//! structural validation and minimal-instance synthesis.
//!
//! Instance XMI grammar: the root element is `prefix:ClassName` in the
//! namespace of the class's package. Single values are XML attributes;
//! attributes with several values are repeated child elements holding text;
//! contained objects are child elements named by the containment feature,
//! with `xsi:type="prefix:SubClass"` when the object's class differs from the
//! feature type. Cross-references are space-separated instance paths such as
//! `/` (the root) or `//@books.0/@chapters.1`.

mod synth;
mod validate;

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::metamodel::{
    all_features, resolve_types, BuiltinRegistry, EClassifier, EEnum, EStructuralFeature,
    ElementPath, ElementRef, EcoreModel, RefTarget, ValueKind,
};
use crate::serialization::xml::{escape_attr, parse_document, LineIndex, XmlElement};
use crate::serialization::{XMI_NS_URI, XSI_NS_URI};

pub use synth::{
    synthesize_minimal_instance, synthesize_minimal_instance_with, SynthesisOptions, Unsatisfiable,
};
pub use validate::validate_instance;

/// One object of an instance tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceObject {
    /// Path of the object's class in the metamodel.
    pub eclass: ElementPath,
    /// Attribute values by feature name, in document order. Names that are
    /// not features of the class are kept for validation to report.
    pub attribute_values: Vec<(String, Vec<String>)>,
    /// Contained objects with the containment feature holding them.
    pub children: Vec<(String, InstanceObject)>,
    /// Non-containment reference values as instance paths.
    pub cross_refs: Vec<(String, Vec<String>)>,
}

impl InstanceObject {
    pub fn new(eclass: ElementPath) -> Self {
        InstanceObject {
            eclass,
            attribute_values: Vec::new(),
            children: Vec::new(),
            cross_refs: Vec::new(),
        }
    }

    /// Appends `value` to the entry for `feature`, creating it if needed.
    pub fn push_attribute(&mut self, feature: &str, value: impl Into<String>) {
        push_value(&mut self.attribute_values, feature, value.into());
    }

    pub fn push_cross_ref(&mut self, feature: &str, target: impl Into<String>) {
        push_value(&mut self.cross_refs, feature, target.into());
    }

    pub fn attribute(&self, feature: &str) -> Option<&[String]> {
        lookup(&self.attribute_values, feature)
    }

    pub fn children_of<'a>(&'a self, feature: &'a str) -> impl Iterator<Item = &'a InstanceObject> {
        self.children
            .iter()
            .filter(move |(f, _)| f == feature)
            .map(|(_, c)| c)
    }

    /// Number of values given for `feature` in any form.
    pub fn value_count(&self, feature: &str) -> usize {
        lookup(&self.attribute_values, feature).map_or(0, <[String]>::len)
            + lookup(&self.cross_refs, feature).map_or(0, <[String]>::len)
            + self.children.iter().filter(|(f, _)| f == feature).count()
    }

    /// Every object of the tree in preorder with its instance path.
    pub fn objects(&self) -> Vec<(String, &InstanceObject)> {
        let mut out = Vec::new();
        self.collect_objects("/".to_string(), &mut out);
        out
    }

    fn collect_objects<'a>(&'a self, path: String, out: &mut Vec<(String, &'a InstanceObject)>) {
        out.push((path.clone(), self));
        let mut counters: BTreeMap<&str, usize> = BTreeMap::new();
        for (feature, child) in &self.children {
            let n = counters.entry(feature.as_str()).or_default();
            child.collect_objects(child_path(&path, feature, *n), out);
            *n += 1;
        }
    }

    /// Orders single-valued attribute entries before multi-valued ones and
    /// drops empty entries, recursively. This is the order in which
    /// [`parse_instance`] reports them.
    pub fn canonicalize(&mut self) {
        self.attribute_values.retain(|(_, v)| !v.is_empty());
        self.attribute_values.sort_by_key(|(_, v)| v.len() != 1);
        self.cross_refs.retain(|(_, v)| !v.is_empty());
        for (_, c) in &mut self.children {
            c.canonicalize();
        }
    }
}

fn push_value(list: &mut Vec<(String, Vec<String>)>, feature: &str, value: String) {
    match list.iter_mut().find(|(f, _)| f == feature) {
        Some((_, values)) => values.push(value),
        None => list.push((feature.to_string(), vec![value])),
    }
}

fn lookup<'a>(list: &'a [(String, Vec<String>)], feature: &str) -> Option<&'a [String]> {
    list.iter()
        .find(|(f, _)| f == feature)
        .map(|(_, v)| v.as_slice())
}

/// Instance path of the `index`-th child held by `feature` under `parent`.
pub fn child_path(parent: &str, feature: &str, index: usize) -> String {
    format!("{}/@{feature}.{index}", if parent == "/" { "/" } else { parent })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("{line}:{column}: malformed XML: {message}")]
    Syntax { line: u32, column: u32, message: String },
    #[error("namespace `{found}` is not the nsURI of any package in the metamodel")]
    NamespaceMismatch { found: String },
    #[error("no class `{name}` in package `{package}`")]
    UnknownClass { package: String, name: String },
    #[error("cannot determine the class of `{element}`: {reason}")]
    UnknownType { element: String, reason: String },
}

/// What a feature's values must look like.
#[derive(Debug, Clone)]
pub(crate) enum ValueType<'a> {
    Data(ValueKind),
    Enum(&'a EEnum),
    /// Objects of this class or a subclass.
    Class(ElementPath),
    /// Objects of any class (`EObject`).
    AnyObject,
    /// Missing or unresolved type; values are not checked.
    Unknown,
}

pub(crate) fn value_type<'a>(
    model: &'a EcoreModel,
    builtins: &BuiltinRegistry,
    feature: &EStructuralFeature,
) -> ValueType<'a> {
    let Some(target) = feature.e_type.as_ref().and_then(|t| t.resolved.as_ref()) else {
        return ValueType::Unknown;
    };
    match target {
        RefTarget::Local(path) => match model.classifier(path) {
            Some(EClassifier::Class(_)) => ValueType::Class(path.clone()),
            Some(EClassifier::Enum(e)) => ValueType::Enum(e),
            Some(EClassifier::DataType(d)) => ValueType::Data(
                d.effective_instance_type()
                    .map_or(ValueKind::Text, |t| builtins.value_kind_for_instance_type(t)),
            ),
            None => ValueType::Unknown,
        },
        RefTarget::Builtin(name) => match builtins.data_type(name) {
            Some(t) => ValueType::Data(t.value_kind),
            None if name == "EObject" => ValueType::AnyObject,
            None => ValueType::Unknown,
        },
    }
}

/// Features visible on a class; the nearest declaration wins on name clashes.
pub(crate) fn features_by_name<'a>(
    model: &'a EcoreModel,
    class: &ElementPath,
) -> Vec<(&'a EStructuralFeature, ElementPath)> {
    let mut seen = std::collections::HashSet::new();
    all_features(model, class)
        .into_iter()
        .filter(|f| seen.insert(f.feature.name.clone()))
        .map(|f| (f.feature, f.path))
        .collect()
}

pub(crate) fn conforms(model: &EcoreModel, class: &ElementPath, target: &ValueType<'_>) -> bool {
    match target {
        ValueType::Class(t) => {
            t == class || crate::metamodel::super_closure(model, class).ancestors.contains(t)
        }
        ValueType::AnyObject | ValueType::Unknown => true,
        _ => false,
    }
}

/// A resolved private copy, so callers may pass models straight from the parser.
pub(crate) fn resolved(model: &EcoreModel) -> EcoreModel {
    let mut m = model.clone();
    resolve_types(&mut m, &BuiltinRegistry::standard());
    m
}

fn packages_by_uri(model: &EcoreModel) -> BTreeMap<&str, ElementPath> {
    let mut out = BTreeMap::new();
    for (path, element) in model.elements() {
        if let ElementRef::Package(p) = element {
            out.entry(p.ns_uri.as_str()).or_insert_with(|| path.clone());
        }
    }
    out
}

fn class_in(model: &EcoreModel, package: &ElementPath, name: &str) -> Option<ElementPath> {
    model
        .classes()
        .find(|(p, _)| p.name() == name && p.parent().as_ref() == Some(package))
        .map(|(p, _)| p.clone())
}

struct Reader<'m> {
    model: &'m EcoreModel,
    builtins: BuiltinRegistry,
    /// Namespace prefixes declared on the root element.
    prefixes: BTreeMap<String, String>,
    packages: BTreeMap<&'m str, ElementPath>,
}

impl Reader<'_> {
    fn qualified_class(&self, qname: &str, element: &str) -> Result<ElementPath, InstanceError> {
        let (prefix, name) = qname.split_once(':').unwrap_or(("", qname));
        let uri = self.prefixes.get(prefix).ok_or_else(|| InstanceError::UnknownType {
            element: element.to_string(),
            reason: format!("namespace prefix `{prefix}` is not declared"),
        })?;
        let package = self
            .packages
            .get(uri.as_str())
            .ok_or_else(|| InstanceError::NamespaceMismatch { found: uri.clone() })?;
        class_in(self.model, package, name).ok_or_else(|| InstanceError::UnknownClass {
            package: package.name().to_string(),
            name: name.to_string(),
        })
    }

    fn object(&self, el: &XmlElement, class: ElementPath) -> Result<InstanceObject, InstanceError> {
        let features = features_by_name(self.model, &class);
        let find = |name: &str| features.iter().find(|(f, _)| f.name == name).map(|(f, _)| *f);
        let mut obj = InstanceObject::new(class);
        for attr in &el.attrs {
            let name = attr.name.as_str();
            if name == "xmlns" || name.starts_with("xmlns:") || name.starts_with("xmi:") || name.starts_with("xsi:") {
                continue;
            }
            match find(name) {
                Some(f) if f.is_reference() => {
                    for target in attr.value.split_whitespace() {
                        obj.push_cross_ref(name, target);
                    }
                }
                _ => obj.push_attribute(name, attr.value.clone()),
            }
        }
        for child in el.elements() {
            let name = child.local_name();
            match find(name) {
                Some(f) if f.is_containment() => {
                    let class = match child.attr("xsi:type") {
                        Some(t) => self.qualified_class(t, name)?,
                        None => match value_type(self.model, &self.builtins, f) {
                            ValueType::Class(p) => p,
                            _ => {
                                return Err(InstanceError::UnknownType {
                                    element: name.to_string(),
                                    reason: "the feature type is not a class and no xsi:type is given".into(),
                                })
                            }
                        },
                    };
                    obj.children.push((name.to_string(), self.object(child, class)?));
                }
                Some(f) if f.is_reference() => {
                    let target = child.attr("href").map(str::to_string).unwrap_or_else(|| child.text());
                    for t in target.split_whitespace() {
                        obj.push_cross_ref(name, t);
                    }
                }
                _ => obj.push_attribute(name, child.text()),
            }
        }
        Ok(obj)
    }
}

/// Reads an instance document against `model`.
pub fn parse_instance(text: &str, model: &EcoreModel) -> Result<InstanceObject, InstanceError> {
    let doc = parse_document(text).map_err(|e| {
        let (line, column) = LineIndex::new(text).position(text, e.offset);
        InstanceError::Syntax {
            line,
            column,
            message: e.message,
        }
    })?;
    let model = resolved(model);
    let mut prefixes = BTreeMap::new();
    for a in &doc.root.attrs {
        if a.name == "xmlns" {
            prefixes.insert(String::new(), a.value.clone());
        } else if let Some(p) = a.name.strip_prefix("xmlns:") {
            prefixes.insert(p.to_string(), a.value.clone());
        }
    }
    let reader = Reader {
        model: &model,
        builtins: BuiltinRegistry::standard(),
        packages: packages_by_uri(&model),
        prefixes,
    };
    let prefix = doc.root.prefix().unwrap_or("");
    let uri = reader.prefixes.get(prefix).cloned().unwrap_or_default();
    if !reader.packages.contains_key(uri.as_str()) {
        return Err(InstanceError::NamespaceMismatch { found: uri });
    }
    let class = reader.qualified_class(&doc.root.name, &doc.root.name)?;
    reader.object(&doc.root, class)
}

/// Namespace prefixes for every package whose classes appear in the tree.
fn prefix_table(model: &EcoreModel, root: &InstanceObject) -> Vec<(ElementPath, String, String)> {
    let mut table: Vec<(ElementPath, String, String)> = Vec::new();
    for (_, obj) in root.objects() {
        let Some(pkg_path) = obj.eclass.parent() else { continue };
        if table.iter().any(|(p, _, _)| *p == pkg_path) {
            continue;
        }
        let Some(ElementRef::Package(pkg)) = model.get(&pkg_path) else { continue };
        let base = if pkg.ns_prefix.is_empty() { "p" } else { pkg.ns_prefix.as_str() };
        let mut prefix = base.to_string();
        let mut n = 1;
        while table.iter().any(|(_, p, _)| *p == prefix) || ["xmi", "xsi", "xml"].contains(&prefix.as_str()) {
            prefix = format!("{base}{n}");
            n += 1;
        }
        table.push((pkg_path, prefix, pkg.ns_uri.clone()));
    }
    table
}

/// Writes the grammar read by [`parse_instance`]; `parse_instance` of the
/// output reproduces a canonical tree (see [`InstanceObject::canonicalize`]).
pub fn serialize_instance(instance: &InstanceObject, model: &EcoreModel) -> String {
    let model = resolved(model);
    let builtins = BuiltinRegistry::standard();
    let table = prefix_table(&model, instance);
    let qname = |class: &ElementPath| -> String {
        let prefix = class
            .parent()
            .and_then(|p| table.iter().find(|(t, _, _)| *t == p))
            .map_or("p", |(_, prefix, _)| prefix.as_str());
        format!("{prefix}:{}", class.name())
    };

    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let mut head = format!(
        "<{} xmi:version=\"2.0\" xmlns:xmi=\"{XMI_NS_URI}\" xmlns:xsi=\"{XSI_NS_URI}\"",
        qname(&instance.eclass)
    );
    for (_, prefix, uri) in &table {
        let _ = write!(head, " xmlns:{prefix}=\"{}\"", escape_attr(uri));
    }
    write_object(&mut out, &model, &builtins, instance, &qname(&instance.eclass), head, None, 0, &qname);
    out
}

#[allow(clippy::too_many_arguments)]
fn write_object(
    out: &mut String,
    model: &EcoreModel,
    builtins: &BuiltinRegistry,
    obj: &InstanceObject,
    tag: &str,
    mut head: String,
    declared: Option<&ValueType<'_>>,
    depth: usize,
    qname: &dyn Fn(&ElementPath) -> String,
) {
    let indent = "  ".repeat(depth);
    if let Some(ValueType::Class(t)) = declared {
        if *t != obj.eclass {
            let _ = write!(head, " xsi:type=\"{}\"", qname(&obj.eclass));
        }
    } else if declared.is_some() {
        let _ = write!(head, " xsi:type=\"{}\"", qname(&obj.eclass));
    }
    for (name, values) in &obj.attribute_values {
        if values.len() == 1 {
            let _ = write!(head, " {name}=\"{}\"", escape_attr(&values[0]));
        }
    }
    for (name, values) in &obj.cross_refs {
        if !values.is_empty() {
            let _ = write!(head, " {name}=\"{}\"", escape_attr(&values.join(" ")));
        }
    }
    let multi: Vec<_> = obj.attribute_values.iter().filter(|(_, v)| v.len() != 1).collect();
    if multi.is_empty() && obj.children.is_empty() {
        let _ = writeln!(out, "{indent}{head}/>");
        return;
    }
    let _ = writeln!(out, "{indent}{head}>");
    for (name, values) in multi {
        for v in values {
            let _ = writeln!(out, "{indent}  <{name}>{}</{name}>", escape_attr(v));
        }
    }
    let features = features_by_name(model, &obj.eclass);
    for (name, child) in &obj.children {
        let declared = features
            .iter()
            .find(|(f, _)| f.name == *name)
            .map(|(f, _)| value_type(model, builtins, f))
            .unwrap_or(ValueType::Unknown);
        let declared = match declared {
            ValueType::Class(_) => declared,
            _ => ValueType::AnyObject,
        };
        write_object(out, model, builtins, child, name, format!("<{name}"), Some(&declared), depth + 1, qname);
    }
    let _ = writeln!(out, "{indent}</{tag}>");
}
