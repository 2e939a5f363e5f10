//! `.ecore` XMI reading and canonical writing.
//!
//! Canonical form: UTF-8, LF line endings, two-space indentation, the XML
//! declaration on the first line, attributes ordered `xsi:type`, `name`, then
//! every other attribute in first-seen order, and known children in the fixed
//! Ecore slot order (`eAnnotations` first). Content the model does not
//! interpret is re-emitted verbatim next to the known child it followed.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use super::xml::{escape_attr, parse_document, LineIndex, XmlElement, XmlNode};
use crate::metamodel::{
    ChildAnchor, EAnnotation, EClass, EClassifier, EDataType, EEnum, EEnumLiteral, EOperation,
    EPackage, EParameter, EStructuralFeature, ElementPath, EcoreModel, FeatureKind, Fragment,
    Locator, Opaque, TypeRef, ECORE_NS_URI,
};

pub const XMI_NS_URI: &str = "http://www.omg.org/XMI";
pub const XSI_NS_URI: &str = "http://www.w3.org/2001/XMLSchema-instance";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XmiError {
    #[error("{line}:{column}: malformed XML: {message}")]
    Syntax {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("{line}:{column}: {message}")]
    Format {
        line: u32,
        column: u32,
        message: String,
    },
}

/// Start-tag position of every parsed element.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    entries: BTreeMap<ElementPath, SourceLocation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceLocation {
    pub line: u32,
    pub column: u32,
    pub byte_offset: usize,
}

impl SourceMap {
    pub fn get(&self, path: &ElementPath) -> Option<SourceLocation> {
        self.entries.get(path).copied()
    }

    pub fn line_col(&self, path: &ElementPath) -> Option<(u32, u32)> {
        self.get(path).map(|l| (l.line, l.column))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ParsedXmi {
    pub model: EcoreModel,
    pub source_map: SourceMap,
}

struct Reader<'a> {
    text: &'a str,
    lines: LineIndex,
    ecore_prefixes: Vec<String>,
    locations: Vec<(Locator, usize)>,
}

impl<'a> Reader<'a> {
    fn format_err(&self, offset: usize, message: impl Into<String>) -> XmiError {
        let (line, column) = self.lines.position(self.text, offset);
        XmiError::Format {
            line,
            column,
            message: message.into(),
        }
    }

    fn raw(&self, el: &XmlElement) -> String {
        self.text[el.span.clone()].to_string()
    }

    /// `xsi:type` local name when its prefix denotes the Ecore namespace.
    fn ecore_type<'e>(&self, el: &'e XmlElement) -> Option<&'e str> {
        let value = el.attr("xsi:type")?;
        let (prefix, local) = value.split_once(':')?;
        self.ecore_prefixes
            .iter()
            .any(|p| p == prefix)
            .then_some(local)
    }

    fn parse_int(&self, el: &XmlElement, name: &str, value: &str) -> Result<i64, XiError> {
        value
            .trim()
            .parse()
            .map_err(|_| self.format_err(el.span.start, format!("attribute `{name}` is not an integer: `{value}`")))
    }

    fn parse_bool(&self, el: &XmlElement, name: &str, value: &str) -> Result<bool, XiError> {
        match value.trim() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(self.format_err(el.span.start, format!("attribute `{name}` is not a boolean: `{value}`"))),
        }
    }
}

type XiError = XmiError;

/// Splits attributes into known ones (returned in `known`) and opaque ones.
fn split_attrs<'e>(el: &'e XmlElement, known: &[&str]) -> (BTreeMap<&'e str, &'e str>, Opaque) {
    let mut values = BTreeMap::new();
    let mut opaque = Opaque::default();
    for a in &el.attrs {
        if a.name == "xsi:type" {
            continue;
        }
        opaque.attr_order.push(a.name.clone());
        if a.name == "name" || known.contains(&a.name.as_str()) {
            values.insert(a.name.as_str(), a.value.as_str());
        } else {
            opaque.attributes.push((a.name.clone(), a.value.clone()));
        }
    }
    (values, opaque)
}

/// Walks element children, dispatching known slots to `on_child` and keeping
/// everything else as anchored fragments.
fn walk_children<'e>(
    reader: &Reader<'_>,
    el: &'e XmlElement,
    opaque: &mut Opaque,
    mut on_child: impl FnMut(&'e XmlElement) -> Result<Option<&'static str>, XmiError>,
) -> Result<(), XmiError> {
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut last: Option<ChildAnchor> = None;
    for child in &el.children {
        match child {
            XmlNode::Element(c) => match on_child(c)? {
                Some(slot) => {
                    let n = counts.entry(slot).or_insert(0);
                    last = Some(ChildAnchor {
                        slot: slot.to_string(),
                        index: *n,
                    });
                    *n += 1;
                }
                None => opaque.fragments.push(Fragment {
                    after: last.clone(),
                    text: reader.raw(c),
                }),
            },
            XmlNode::Text { text, span } => {
                if !text.trim().is_empty() {
                    opaque.fragments.push(Fragment {
                        after: last.clone(),
                        text: reader.text[span.clone()].trim().to_string(),
                    });
                }
            }
            XmlNode::Other { span } => opaque.fragments.push(Fragment {
                after: last.clone(),
                text: reader.text[span.clone()].to_string(),
            }),
        }
    }
    Ok(())
}

fn read_annotation(reader: &Reader<'_>, el: &XmlElement) -> Result<EAnnotation, XmiError> {
    let (values, mut opaque) = split_attrs(el, &["source"]);
    let mut details = Vec::new();
    walk_children(reader, el, &mut opaque, |c| {
        let plain = c.local_name() == "details"
            && c.prefix().is_none()
            && c.children.is_empty()
            && c.attrs.len() == 2
            && c.attrs[0].name == "key"
            && c.attrs[1].name == "value";
        if plain {
            details.push((c.attrs[0].value.clone(), c.attrs[1].value.clone()));
            Ok(Some("details"))
        } else {
            Ok(None)
        }
    })?;
    Ok(EAnnotation {
        source: values.get("source").copied().unwrap_or_default().to_string(),
        details,
        opaque,
    })
}

fn split_ref_list(value: &str) -> Vec<TypeRef> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i];
        // `ecore:EClass uri#frag` carries a type hint in front of the reference
        let is_hint = !t.contains('#') && !t.starts_with("//") && t.contains(':');
        if is_hint && i + 1 < tokens.len() {
            out.push(TypeRef::new(format!("{t} {}", tokens[i + 1])));
            i += 2;
        } else {
            out.push(TypeRef::new(t));
            i += 1;
        }
    }
    out
}

fn is_slot(el: &XmlElement, slot: &str) -> bool {
    el.prefix().is_none() && el.local_name() == slot
}

fn read_package(
    reader: &mut Reader<'_>,
    el: &XmlElement,
    chain: &mut Vec<usize>,
) -> Result<EPackage, XmiError> {
    reader
        .locations
        .push((Locator::Package(chain.clone()), el.span.start));
    let (values, mut opaque) = split_attrs(el, &["nsURI", "nsPrefix"]);
    let mut pkg = EPackage {
        name: values.get("name").copied().unwrap_or_default().to_string(),
        ns_uri: values.get("nsURI").copied().unwrap_or_default().to_string(),
        ns_prefix: values.get("nsPrefix").copied().unwrap_or_default().to_string(),
        ..EPackage::default()
    };
    let mut annotations = Vec::new();
    let mut classifiers = Vec::new();
    let mut subpackages = Vec::new();
    let mut classifier_els = Vec::new();
    let mut sub_els = Vec::new();
    {
        let r: &Reader<'_> = reader;
        walk_children(r, el, &mut opaque, |c| {
            if is_slot(c, "eAnnotations") {
                annotations.push(read_annotation(r, c)?);
                Ok(Some("eAnnotations"))
            } else if is_slot(c, "eClassifiers")
                && matches!(r.ecore_type(c), Some("EClass" | "EDataType" | "EEnum"))
            {
                classifier_els.push(c);
                Ok(Some("eClassifiers"))
            } else if is_slot(c, "eSubpackages") {
                sub_els.push(c);
                Ok(Some("eSubpackages"))
            } else {
                Ok(None)
            }
        })?;
    }
    for (ci, c) in classifier_els.into_iter().enumerate() {
        classifiers.push(read_classifier(reader, c, chain, ci)?);
    }
    for (si, s) in sub_els.into_iter().enumerate() {
        chain.push(si);
        subpackages.push(read_package(reader, s, chain)?);
        chain.pop();
    }
    pkg.annotations = annotations;
    pkg.classifiers = classifiers;
    pkg.subpackages = subpackages;
    pkg.opaque = opaque;
    Ok(pkg)
}

fn read_classifier(
    reader: &mut Reader<'_>,
    el: &XmlElement,
    chain: &[usize],
    ci: usize,
) -> Result<EClassifier, XmiError> {
    reader
        .locations
        .push((Locator::Classifier(chain.to_vec(), ci), el.span.start));
    match reader.ecore_type(el) {
        Some("EClass") => read_class(reader, el, chain, ci).map(EClassifier::Class),
        Some("EDataType") => {
            let (values, mut opaque) = split_attrs(el, &["instanceClassName", "instanceTypeName"]);
            let mut annotations = Vec::new();
            walk_children(reader, el, &mut opaque, |c| {
                if is_slot(c, "eAnnotations") {
                    annotations.push(read_annotation(reader, c)?);
                    Ok(Some("eAnnotations"))
                } else {
                    Ok(None)
                }
            })?;
            Ok(EClassifier::DataType(EDataType {
                name: values.get("name").copied().unwrap_or_default().to_string(),
                instance_class_name: values.get("instanceClassName").map(|s| s.to_string()),
                instance_type_name: values.get("instanceTypeName").map(|s| s.to_string()),
                annotations,
                opaque,
            }))
        }
        Some("EEnum") => read_enum(reader, el, chain, ci).map(EClassifier::Enum),
        _ => unreachable!("classifier kinds are filtered by the caller"),
    }
}

fn read_enum(
    reader: &mut Reader<'_>,
    el: &XmlElement,
    chain: &[usize],
    ci: usize,
) -> Result<EEnum, XmiError> {
    let (values, mut opaque) = split_attrs(el, &[]);
    let mut annotations = Vec::new();
    let mut literal_els = Vec::new();
    walk_children(reader, el, &mut opaque, |c| {
        if is_slot(c, "eAnnotations") {
            annotations.push(read_annotation(reader, c)?);
            Ok(Some("eAnnotations"))
        } else if is_slot(c, "eLiterals") {
            literal_els.push(c);
            Ok(Some("eLiterals"))
        } else {
            Ok(None)
        }
    })?;
    let mut literals = Vec::new();
    for (li, l) in literal_els.into_iter().enumerate() {
        reader
            .locations
            .push((Locator::Literal(chain.to_vec(), ci, li), l.span.start));
        let (lv, mut lopaque) = split_attrs(l, &["value", "literal"]);
        let mut lannotations = Vec::new();
        walk_children(reader, l, &mut lopaque, |c| {
            if is_slot(c, "eAnnotations") {
                lannotations.push(read_annotation(reader, c)?);
                Ok(Some("eAnnotations"))
            } else {
                Ok(None)
            }
        })?;
        literals.push(EEnumLiteral {
            name: lv.get("name").copied().unwrap_or_default().to_string(),
            value: match lv.get("value") {
                Some(v) => reader.parse_int(l, "value", v)?,
                None => 0,
            },
            literal: lv.get("literal").map(|s| s.to_string()),
            annotations: lannotations,
            opaque: lopaque,
        });
    }
    Ok(EEnum {
        name: values.get("name").copied().unwrap_or_default().to_string(),
        annotations,
        literals,
        opaque,
    })
}

fn read_class(
    reader: &mut Reader<'_>,
    el: &XmlElement,
    chain: &[usize],
    ci: usize,
) -> Result<EClass, XmiError> {
    let (values, mut opaque) = split_attrs(el, &["abstract", "interface", "eSuperTypes"]);
    let mut class = EClass {
        name: values.get("name").copied().unwrap_or_default().to_string(),
        ..EClass::default()
    };
    if let Some(v) = values.get("abstract") {
        class.is_abstract = reader.parse_bool(el, "abstract", v)?;
    }
    if let Some(v) = values.get("interface") {
        class.is_interface = reader.parse_bool(el, "interface", v)?;
    }
    if let Some(v) = values.get("eSuperTypes") {
        class.super_types = split_ref_list(v);
    }
    let mut op_els = Vec::new();
    let mut feature_els = Vec::new();
    {
        let r: &Reader<'_> = reader;
        let annotations = &mut class.annotations;
        walk_children(r, el, &mut opaque, |c| {
            if is_slot(c, "eAnnotations") {
                annotations.push(read_annotation(r, c)?);
                Ok(Some("eAnnotations"))
            } else if is_slot(c, "eOperations") {
                op_els.push(c);
                Ok(Some("eOperations"))
            } else if is_slot(c, "eStructuralFeatures")
                && matches!(r.ecore_type(c), Some("EAttribute" | "EReference"))
            {
                feature_els.push(c);
                Ok(Some("eStructuralFeatures"))
            } else {
                Ok(None)
            }
        })?;
    }
    for (oi, o) in op_els.into_iter().enumerate() {
        reader
            .locations
            .push((Locator::Operation(chain.to_vec(), ci, oi), o.span.start));
        class.operations.push(read_operation(reader, o, chain, ci, oi)?);
    }
    for (fi, f) in feature_els.into_iter().enumerate() {
        reader
            .locations
            .push((Locator::Feature(chain.to_vec(), ci, fi), f.span.start));
        class.features.push(read_feature(reader, f)?);
    }
    class.opaque = opaque;
    Ok(class)
}

fn read_operation(
    reader: &mut Reader<'_>,
    el: &XmlElement,
    chain: &[usize],
    ci: usize,
    oi: usize,
) -> Result<EOperation, XmiError> {
    let (values, mut opaque) = split_attrs(el, &["eType"]);
    let mut annotations = Vec::new();
    let mut param_els = Vec::new();
    walk_children(reader, el, &mut opaque, |c| {
        if is_slot(c, "eAnnotations") {
            annotations.push(read_annotation(reader, c)?);
            Ok(Some("eAnnotations"))
        } else if is_slot(c, "eParameters") {
            param_els.push(c);
            Ok(Some("eParameters"))
        } else {
            Ok(None)
        }
    })?;
    let mut parameters = Vec::new();
    for (pi, p) in param_els.into_iter().enumerate() {
        reader
            .locations
            .push((Locator::Parameter(chain.to_vec(), ci, oi, pi), p.span.start));
        let (pv, mut popaque) = split_attrs(p, &["eType", "lowerBound", "upperBound"]);
        let mut pannotations = Vec::new();
        walk_children(reader, p, &mut popaque, |c| {
            if is_slot(c, "eAnnotations") {
                pannotations.push(read_annotation(reader, c)?);
                Ok(Some("eAnnotations"))
            } else {
                Ok(None)
            }
        })?;
        parameters.push(EParameter {
            name: pv.get("name").copied().unwrap_or_default().to_string(),
            e_type: pv.get("eType").map(|s| TypeRef::new(*s)),
            lower_bound: match pv.get("lowerBound") {
                Some(v) => reader.parse_int(p, "lowerBound", v)?,
                None => 0,
            },
            upper_bound: match pv.get("upperBound") {
                Some(v) => reader.parse_int(p, "upperBound", v)?,
                None => 1,
            },
            annotations: pannotations,
            opaque: popaque,
        });
    }
    Ok(EOperation {
        name: values.get("name").copied().unwrap_or_default().to_string(),
        return_type: values.get("eType").map(|s| TypeRef::new(*s)),
        annotations,
        parameters,
        opaque,
    })
}

fn read_feature(reader: &Reader<'_>, el: &XmlElement) -> Result<EStructuralFeature, XmiError> {
    let kind = match reader.ecore_type(el) {
        Some("EReference") => FeatureKind::Reference,
        _ => FeatureKind::Attribute,
    };
    let mut known = vec![
        "eType",
        "lowerBound",
        "upperBound",
        "changeable",
        "derived",
        "defaultValueLiteral",
    ];
    if kind == FeatureKind::Reference {
        known.extend(["containment", "eOpposite"]);
    }
    let (values, mut opaque) = split_attrs(el, &known);
    let mut f = EStructuralFeature::new(
        kind,
        values.get("name").copied().unwrap_or_default(),
        values.get("eType").map(|s| TypeRef::new(*s)),
    );
    if let Some(v) = values.get("lowerBound") {
        f.lower_bound = reader.parse_int(el, "lowerBound", v)?;
    }
    if let Some(v) = values.get("upperBound") {
        f.upper_bound = reader.parse_int(el, "upperBound", v)?;
    }
    if let Some(v) = values.get("changeable") {
        f.changeable = reader.parse_bool(el, "changeable", v)?;
    }
    if let Some(v) = values.get("derived") {
        f.derived = reader.parse_bool(el, "derived", v)?;
    }
    if let Some(v) = values.get("containment") {
        f.containment = reader.parse_bool(el, "containment", v)?;
    }
    f.default_value_literal = values.get("defaultValueLiteral").map(|s| s.to_string());
    f.opposite = values.get("eOpposite").map(|s| TypeRef::new(*s));
    walk_children(reader, el, &mut opaque, |c| {
        if is_slot(c, "eAnnotations") {
            f.annotations.push(read_annotation(reader, c)?);
            Ok(Some("eAnnotations"))
        } else {
            Ok(None)
        }
    })?;
    f.opaque = opaque;
    Ok(f)
}

fn check_unique_ids(reader: &Reader<'_>, el: &XmlElement, seen: &mut HashSet<String>) -> Result<(), XmiError> {
    if let Some(id) = el.attr("xmi:id") {
        if !seen.insert(id.to_string()) {
            return Err(reader.format_err(el.span.start, format!("duplicate xmi:id `{id}`")));
        }
    }
    for c in el.elements() {
        check_unique_ids(reader, c, seen)?;
    }
    Ok(())
}

/// Parses an `.ecore` document. References are left unresolved; see
/// [`crate::metamodel::resolve_types`].
pub fn parse_xmi(text: &str, source_uri: &str) -> Result<ParsedXmi, XmiError> {
    let lines = LineIndex::new(text);
    let doc = parse_document(text).map_err(|e| {
        let (line, column) = lines.position(text, e.offset);
        XmiError::Syntax {
            line,
            column,
            message: e.message,
        }
    })?;
    let root = &doc.root;
    let ecore_prefixes: Vec<String> = root
        .attrs
        .iter()
        .filter(|a| a.value == ECORE_NS_URI)
        .filter_map(|a| a.name.strip_prefix("xmlns:").map(str::to_string))
        .collect();
    let mut reader = Reader {
        text,
        lines,
        ecore_prefixes,
        locations: Vec::new(),
    };
    let root_ns_ok = match root.prefix() {
        Some(p) => reader.ecore_prefixes.iter().any(|e| e == p),
        None => root.attr("xmlns") == Some(ECORE_NS_URI),
    };
    if root.local_name() != "EPackage" || !root_ns_ok {
        return Err(reader.format_err(
            root.span.start,
            format!("root element `{}` is not an EPackage in the Ecore namespace {ECORE_NS_URI}", root.name),
        ));
    }
    check_unique_ids(&reader, root, &mut HashSet::new())?;

    let mut pkg = read_package(&mut reader, root, &mut Vec::new())?;
    if !doc.prolog.is_empty() {
        // prolog comments ride on the root as fragments anchored before everything
        let prolog: Vec<Fragment> = doc
            .prolog
            .iter()
            .map(|span| Fragment {
                after: Some(ChildAnchor {
                    slot: PROLOG_SLOT.to_string(),
                    index: 0,
                }),
                text: text[span.clone()].to_string(),
            })
            .collect();
        pkg.opaque.fragments.splice(0..0, prolog);
    }
    let model = EcoreModel::new(pkg, source_uri);

    let mut entries = BTreeMap::new();
    let by_locator: Vec<(Locator, usize)> = std::mem::take(&mut reader.locations);
    let offsets: std::collections::HashMap<_, _> = by_locator.into_iter().map(|(l, o)| (format!("{l:?}"), o)).collect();
    for path in model.paths() {
        let loc = model.locate(path).expect("indexed");
        if let Some(&offset) = offsets.get(&format!("{loc:?}")) {
            let (line, column) = reader.lines.position(text, offset);
            entries.insert(
                path.clone(),
                SourceLocation {
                    line,
                    column,
                    byte_offset: offset,
                },
            );
        }
    }
    Ok(ParsedXmi {
        model,
        source_map: SourceMap { entries },
    })
}

/// Pseudo-slot marking root fragments that belong before the root element.
const PROLOG_SLOT: &str = "#prolog";

// ---------------------------------------------------------------------------
// writing

struct Node {
    tag: String,
    attrs: Vec<(String, String)>,
    /// Known children in canonical order, tagged with slot and slot index.
    children: Vec<(&'static str, usize, Node)>,
    fragments: Vec<Fragment>,
}

/// One known attribute: its current value (`None` when absent) and whether
/// that value is the Ecore default.
struct Known<'a> {
    name: &'static str,
    value: Option<String>,
    is_default: bool,
    _marker: std::marker::PhantomData<&'a ()>,
}

fn known(name: &'static str, value: Option<String>, is_default: bool) -> Known<'static> {
    Known {
        name,
        value,
        is_default,
        _marker: std::marker::PhantomData,
    }
}

fn assemble_attrs(
    xsi_type: Option<String>,
    name: Option<&str>,
    opaque: &Opaque,
    known_attrs: Vec<Known<'_>>,
) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if let Some(t) = xsi_type {
        out.push(("xsi:type".to_string(), t));
    }
    if let Some(n) = name {
        if !n.is_empty() || opaque.has_attr("name") {
            out.push(("name".to_string(), n.to_string()));
        }
    }
    let mut emitted: HashSet<&str> = HashSet::new();
    for attr in &opaque.attr_order {
        if attr == "name" {
            continue;
        }
        if let Some(k) = known_attrs.iter().find(|k| k.name == attr) {
            if let Some(v) = &k.value {
                out.push((attr.clone(), v.clone()));
            }
            emitted.insert(k.name);
        } else if let Some(v) = opaque.attribute(attr) {
            out.push((attr.clone(), v.to_string()));
        }
    }
    for k in &known_attrs {
        if emitted.contains(k.name) || k.is_default {
            continue;
        }
        if let Some(v) = &k.value {
            out.push((k.name.to_string(), v.clone()));
        }
    }
    out
}

fn bool_attr(name: &'static str, value: bool, default: bool) -> Known<'static> {
    known(name, Some(value.to_string()), value == default)
}

fn int_attr(name: &'static str, value: i64, default: i64) -> Known<'static> {
    known(name, Some(value.to_string()), value == default)
}

fn opt_attr(name: &'static str, value: Option<&str>) -> Known<'static> {
    known(name, value.map(str::to_string), value.is_none())
}

fn annotation_nodes(annotations: &[EAnnotation]) -> Vec<(&'static str, usize, Node)> {
    annotations
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let attrs = assemble_attrs(
                None,
                None,
                &a.opaque,
                vec![known("source", Some(a.source.clone()), false)],
            );
            let children = a
                .details
                .iter()
                .enumerate()
                .map(|(di, (k, v))| {
                    (
                        "details",
                        di,
                        Node {
                            tag: "details".into(),
                            attrs: vec![("key".into(), k.clone()), ("value".into(), v.clone())],
                            children: Vec::new(),
                            fragments: Vec::new(),
                        },
                    )
                })
                .collect();
            (
                "eAnnotations",
                i,
                Node {
                    tag: "eAnnotations".into(),
                    attrs,
                    children,
                    fragments: a.opaque.fragments.clone(),
                },
            )
        })
        .collect()
}

fn feature_node(f: &EStructuralFeature, ecore: &str) -> Node {
    let mut attrs = vec![
        int_attr("lowerBound", f.lower_bound, 0),
        int_attr("upperBound", f.upper_bound, 1),
        opt_attr("eType", f.e_type.as_ref().map(|t| t.raw.as_str())),
        bool_attr("changeable", f.changeable, true),
        bool_attr("derived", f.derived, false),
        opt_attr("defaultValueLiteral", f.default_value_literal.as_deref()),
    ];
    let xsi = match f.kind {
        FeatureKind::Attribute => "EAttribute",
        FeatureKind::Reference => {
            attrs.push(bool_attr("containment", f.containment, false));
            attrs.push(opt_attr("eOpposite", f.opposite.as_ref().map(|t| t.raw.as_str())));
            "EReference"
        }
    };
    Node {
        tag: "eStructuralFeatures".into(),
        attrs: assemble_attrs(Some(format!("{ecore}:{xsi}")), Some(&f.name), &f.opaque, attrs),
        children: annotation_nodes(&f.annotations),
        fragments: f.opaque.fragments.clone(),
    }
}

fn operation_node(o: &EOperation) -> Node {
    let mut children = annotation_nodes(&o.annotations);
    for (pi, p) in o.parameters.iter().enumerate() {
        let attrs = vec![
            int_attr("lowerBound", p.lower_bound, 0),
            int_attr("upperBound", p.upper_bound, 1),
            opt_attr("eType", p.e_type.as_ref().map(|t| t.raw.as_str())),
        ];
        children.push((
            "eParameters",
            pi,
            Node {
                tag: "eParameters".into(),
                attrs: assemble_attrs(None, Some(&p.name), &p.opaque, attrs),
                children: annotation_nodes(&p.annotations),
                fragments: p.opaque.fragments.clone(),
            },
        ));
    }
    Node {
        tag: "eOperations".into(),
        attrs: assemble_attrs(
            None,
            Some(&o.name),
            &o.opaque,
            vec![opt_attr("eType", o.return_type.as_ref().map(|t| t.raw.as_str()))],
        ),
        children,
        fragments: o.opaque.fragments.clone(),
    }
}

fn classifier_node(c: &EClassifier, ecore: &str) -> Node {
    match c {
        EClassifier::Class(class) => {
            let supers = (!class.super_types.is_empty()).then(|| {
                class
                    .super_types
                    .iter()
                    .map(|t| t.raw.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            });
            let attrs = vec![
                bool_attr("abstract", class.is_abstract, false),
                bool_attr("interface", class.is_interface, false),
                opt_attr("eSuperTypes", supers.as_deref()),
            ];
            let mut children = annotation_nodes(&class.annotations);
            children.extend(
                class
                    .operations
                    .iter()
                    .enumerate()
                    .map(|(i, o)| ("eOperations", i, operation_node(o))),
            );
            children.extend(
                class
                    .features
                    .iter()
                    .enumerate()
                    .map(|(i, f)| ("eStructuralFeatures", i, feature_node(f, ecore))),
            );
            Node {
                tag: "eClassifiers".into(),
                attrs: assemble_attrs(
                    Some(format!("{ecore}:EClass")),
                    Some(&class.name),
                    &class.opaque,
                    attrs,
                ),
                children,
                fragments: class.opaque.fragments.clone(),
            }
        }
        EClassifier::DataType(d) => Node {
            tag: "eClassifiers".into(),
            attrs: assemble_attrs(
                Some(format!("{ecore}:EDataType")),
                Some(&d.name),
                &d.opaque,
                vec![
                    opt_attr("instanceClassName", d.instance_class_name.as_deref()),
                    opt_attr("instanceTypeName", d.instance_type_name.as_deref()),
                ],
            ),
            children: annotation_nodes(&d.annotations),
            fragments: d.opaque.fragments.clone(),
        },
        EClassifier::Enum(e) => {
            let mut children = annotation_nodes(&e.annotations);
            for (li, l) in e.literals.iter().enumerate() {
                let attrs = vec![
                    int_attr("value", l.value, 0),
                    opt_attr("literal", l.literal.as_deref()),
                ];
                children.push((
                    "eLiterals",
                    li,
                    Node {
                        tag: "eLiterals".into(),
                        attrs: assemble_attrs(None, Some(&l.name), &l.opaque, attrs),
                        children: annotation_nodes(&l.annotations),
                        fragments: l.opaque.fragments.clone(),
                    },
                ));
            }
            Node {
                tag: "eClassifiers".into(),
                attrs: assemble_attrs(
                    Some(format!("{ecore}:EEnum")),
                    Some(&e.name),
                    &e.opaque,
                    vec![],
                ),
                children,
                fragments: e.opaque.fragments.clone(),
            }
        }
    }
}

fn package_node(p: &EPackage, tag: String, ecore: &str, is_root: bool) -> Node {
    let mut attrs = assemble_attrs(
        None,
        Some(&p.name),
        &p.opaque,
        vec![
            known("nsURI", Some(p.ns_uri.clone()), p.ns_uri.is_empty()),
            known("nsPrefix", Some(p.ns_prefix.clone()), p.ns_prefix.is_empty()),
        ],
    );
    if is_root {
        let required = [
            ("xmi:version", "2.0".to_string()),
            ("xmlns:xmi", XMI_NS_URI.to_string()),
            ("xmlns:xsi", XSI_NS_URI.to_string()),
            (
                if ecore.is_empty() { "xmlns" } else { "" },
                ECORE_NS_URI.to_string(),
            ),
        ];
        for (name, value) in required {
            let name = if name.is_empty() {
                format!("xmlns:{ecore}")
            } else {
                name.to_string()
            };
            if !attrs.iter().any(|(k, _)| *k == name) {
                attrs.push((name, value));
            }
        }
        // version and namespace declarations lead, as EMF writes them
        attrs.sort_by_key(|(k, _)| match k.as_str() {
            "xmi:version" => 0,
            k if k == "xmlns" || k.starts_with("xmlns:") => 1,
            _ => 2,
        });
    }
    let mut children = annotation_nodes(&p.annotations);
    children.extend(
        p.classifiers
            .iter()
            .enumerate()
            .map(|(i, c)| ("eClassifiers", i, classifier_node(c, ecore))),
    );
    children.extend(p.subpackages.iter().enumerate().map(|(i, s)| {
        ("eSubpackages", i, package_node(s, "eSubpackages".into(), ecore, false))
    }));
    let fragments = p
        .opaque
        .fragments
        .iter()
        .filter(|f| f.after.as_ref().map(|a| a.slot.as_str()) != Some(PROLOG_SLOT))
        .cloned()
        .collect();
    Node {
        tag,
        attrs,
        children,
        fragments,
    }
}

fn write_node(out: &mut String, node: &Node, depth: usize) {
    let indent = "  ".repeat(depth);
    out.push_str(&indent);
    out.push('<');
    out.push_str(&node.tag);
    for (k, v) in &node.attrs {
        out.push(' ');
        out.push_str(k);
        out.push_str("=\"");
        out.push_str(&escape_attr(v));
        out.push('"');
    }
    if node.children.is_empty() && node.fragments.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");

    // fragments go after the known child they followed; unmatched anchors at the end
    let mut slots: Vec<Vec<&Fragment>> = vec![Vec::new(); node.children.len() + 1];
    for f in &node.fragments {
        let pos = match &f.after {
            None => 0,
            Some(a) => node
                .children
                .iter()
                .position(|(slot, i, _)| *slot == a.slot && *i == a.index)
                .map(|p| p + 1)
                .unwrap_or(node.children.len()),
        };
        slots[pos].push(f);
    }
    let child_indent = "  ".repeat(depth + 1);
    let write_fragments = |out: &mut String, frags: &[&Fragment]| {
        for f in frags {
            out.push_str(&child_indent);
            out.push_str(&f.text);
            out.push('\n');
        }
    };
    write_fragments(out, &slots[0]);
    for (i, (_, _, child)) in node.children.iter().enumerate() {
        write_node(out, child, depth + 1);
        write_fragments(out, &slots[i + 1]);
    }
    out.push_str(&indent);
    out.push_str("</");
    out.push_str(&node.tag);
    out.push_str(">\n");
}

/// The prefix bound to the Ecore namespace on the root, `ecore` by default.
fn ecore_prefix(root: &EPackage) -> String {
    root.opaque
        .attributes
        .iter()
        .find(|(k, v)| v == ECORE_NS_URI && k.starts_with("xmlns:"))
        .map(|(k, _)| k["xmlns:".len()..].to_string())
        .or_else(|| {
            root.opaque
                .attributes
                .iter()
                .any(|(k, v)| k == "xmlns" && v == ECORE_NS_URI)
                .then(String::new)
        })
        .unwrap_or_else(|| "ecore".to_string())
}

/// Writes the model in canonical form. Deterministic; for a model read by
/// [`parse_xmi`] from a canonical document the output equals the input.
pub fn serialize_xmi(model: &EcoreModel) -> String {
    let root = model.root();
    let ecore = ecore_prefix(root);
    let tag = if ecore.is_empty() {
        "EPackage".to_string()
    } else {
        format!("{ecore}:EPackage")
    };
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    for f in &root.opaque.fragments {
        if f.after.as_ref().map(|a| a.slot.as_str()) == Some(PROLOG_SLOT) {
            out.push_str(&f.text);
            out.push('\n');
        }
    }
    // namespace-qualified xsi:type values need a non-empty prefix
    let type_prefix = if ecore.is_empty() { "ecore".to_string() } else { ecore.clone() };
    let node = package_node(root, tag, &type_prefix, true);
    write_node(&mut out, &node, 0);
    out
}
