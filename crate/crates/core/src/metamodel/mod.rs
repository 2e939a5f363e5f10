//! In-memory Ecore metamodel.
//!
//! The graph is a plain containment tree of owned nodes. Cross references
//! (`eType`, `eSuperTypes`, `eOpposite`) are [`TypeRef`]s that keep their
//! serialized text and, after [`resolve_types`], the [`ElementPath`] or builtin
//! they denote. Every list keeps document order.

mod builtins;
mod closure;
mod filter;
mod path;
mod resolve;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use builtins::{BuiltinRegistry, BuiltinType, ValueKind, ECORE_NS_URI};
pub use closure::{all_features, super_closure, OwnedFeature, SuperClosure};
pub use filter::{filter_selection, FilterError, FilterQuery};
pub use path::{ElementKind, ElementPath, Segment};
pub use resolve::{parse_ref, resolve_types, RefTarget};

/// Content of an element that the model does not interpret, kept so that
/// saving never drops or reorders it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Opaque {
    /// Names of all attributes seen on the element (except `xsi:type`), in file order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attr_order: Vec<String>,
    /// Unrecognized attributes with their unescaped values.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<(String, String)>,
    /// Unrecognized child content, verbatim.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fragments: Vec<Fragment>,
}

impl Opaque {
    pub fn is_empty(&self) -> bool {
        self.attr_order.is_empty() && self.attributes.is_empty() && self.fragments.is_empty()
    }

    pub fn has_attr(&self, name: &str) -> bool {
        self.attr_order.iter().any(|a| a == name)
    }

    pub fn attribute(&self, name: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }
}

/// A verbatim piece of child content and the known child it followed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub after: Option<ChildAnchor>,
    pub text: String,
}

/// Identifies a known child by its containment slot (`eClassifiers`, ...) and
/// its index within that slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildAnchor {
    pub slot: String,
    pub index: usize,
}

/// A reference to a classifier (or, for `eOpposite`, a feature), as written
/// in the document plus its resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRef {
    /// Serialized form, never rewritten by resolution.
    pub raw: String,
    pub resolved: Option<RefTarget>,
}

impl TypeRef {
    pub fn new(raw: impl Into<String>) -> Self {
        TypeRef {
            raw: raw.into(),
            resolved: None,
        }
    }

    /// Reference to a classifier in the same resource.
    pub fn local(path: &ElementPath) -> Self {
        TypeRef::new(format!("#{}", path.fragment()))
    }

    pub fn local_target(&self) -> Option<&ElementPath> {
        match &self.resolved {
            Some(RefTarget::Local(p)) => Some(p),
            _ => None,
        }
    }
}

impl Serialize for TypeRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

impl<'de> Deserialize<'de> for TypeRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer).map(TypeRef::new)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EAnnotation {
    pub source: String,
    #[serde(default)]
    pub details: Vec<(String, String)>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EAnnotation {
    pub fn detail(&self, key: &str) -> Option<&str> {
        self.details
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub const GENMODEL_SOURCE: &str = "http://www.eclipse.org/emf/2002/GenModel";

/// The GenModel `documentation` detail among `annotations`, if any.
pub fn documentation(annotations: &[EAnnotation]) -> Option<&str> {
    annotations
        .iter()
        .filter(|a| a.source == GENMODEL_SOURCE)
        .find_map(|a| a.detail("documentation"))
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_true(b: &bool) -> bool {
    *b
}

fn default_true() -> bool {
    true
}

fn default_upper() -> i64 {
    1
}

fn is_zero(v: &i64) -> bool {
    *v == 0
}

fn is_one(v: &i64) -> bool {
    *v == 1
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "EPackage", rename_all = "camelCase")]
pub struct EPackage {
    pub name: String,
    #[serde(default, rename = "nsURI", skip_serializing_if = "String::is_empty")]
    pub ns_uri: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub ns_prefix: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default)]
    pub classifiers: Vec<EClassifier>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subpackages: Vec<EPackage>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EPackage {
    pub fn new(name: &str, ns_uri: &str, ns_prefix: &str) -> Self {
        EPackage {
            name: name.to_string(),
            ns_uri: ns_uri.to_string(),
            ns_prefix: ns_prefix.to_string(),
            ..EPackage::default()
        }
    }

    /// Follows subpackage indices from this package.
    pub fn descend(&self, indices: &[usize]) -> &EPackage {
        indices.iter().fold(self, |p, &i| &p.subpackages[i])
    }

    pub fn descend_mut(&mut self, indices: &[usize]) -> &mut EPackage {
        indices.iter().fold(self, |p, &i| &mut p.subpackages[i])
    }

    pub fn classifier(&self, name: &str) -> Option<&EClassifier> {
        self.classifiers.iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum EClassifier {
    #[serde(rename = "EClass")]
    Class(EClass),
    #[serde(rename = "EDataType")]
    DataType(EDataType),
    #[serde(rename = "EEnum")]
    Enum(EEnum),
}

impl EClassifier {
    pub fn name(&self) -> &str {
        match self {
            EClassifier::Class(c) => &c.name,
            EClassifier::DataType(d) => &d.name,
            EClassifier::Enum(e) => &e.name,
        }
    }

    pub fn name_mut(&mut self) -> &mut String {
        match self {
            EClassifier::Class(c) => &mut c.name,
            EClassifier::DataType(d) => &mut d.name,
            EClassifier::Enum(e) => &mut e.name,
        }
    }

    pub fn kind(&self) -> ElementKind {
        match self {
            EClassifier::Class(_) => ElementKind::Class,
            EClassifier::DataType(_) => ElementKind::DataType,
            EClassifier::Enum(_) => ElementKind::Enum,
        }
    }

    pub fn annotations(&self) -> &[EAnnotation] {
        match self {
            EClassifier::Class(c) => &c.annotations,
            EClassifier::DataType(d) => &d.annotations,
            EClassifier::Enum(e) => &e.annotations,
        }
    }

    pub fn opaque(&self) -> &Opaque {
        match self {
            EClassifier::Class(c) => &c.opaque,
            EClassifier::DataType(d) => &d.opaque,
            EClassifier::Enum(e) => &e.opaque,
        }
    }

    pub fn as_class(&self) -> Option<&EClass> {
        match self {
            EClassifier::Class(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_enum(&self) -> Option<&EEnum> {
        match self {
            EClassifier::Enum(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EClass {
    pub name: String,
    #[serde(default, rename = "abstract", skip_serializing_if = "is_false")]
    pub is_abstract: bool,
    #[serde(default, rename = "interface", skip_serializing_if = "is_false")]
    pub is_interface: bool,
    #[serde(default, rename = "eSuperTypes", skip_serializing_if = "Vec::is_empty")]
    pub super_types: Vec<TypeRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operations: Vec<EOperation>,
    #[serde(default)]
    pub features: Vec<EStructuralFeature>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EClass {
    pub fn new(name: &str) -> Self {
        EClass {
            name: name.to_string(),
            ..EClass::default()
        }
    }

    /// Abstract classes and interfaces cannot be instantiated.
    pub fn is_instantiable(&self) -> bool {
        !self.is_abstract && !self.is_interface
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EDataType {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_class_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_type_name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EDataType {
    /// `instanceTypeName` when given, else `instanceClassName`.
    pub fn effective_instance_type(&self) -> Option<&str> {
        self.instance_type_name
            .as_deref()
            .or(self.instance_class_name.as_deref())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EEnum {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default)]
    pub literals: Vec<EEnumLiteral>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EEnum {
    /// Whether `text` names a literal, by its `literal` string or its name.
    pub fn accepts(&self, text: &str) -> bool {
        self.literals
            .iter()
            .any(|l| l.name == text || l.literal.as_deref() == Some(text))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "EEnumLiteral", rename_all = "camelCase")]
pub struct EEnumLiteral {
    pub name: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub value: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EEnumLiteral {
    /// The serialized form used in instance documents.
    pub fn text(&self) -> &str {
        self.literal.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FeatureKind {
    #[default]
    #[serde(rename = "EAttribute")]
    Attribute,
    #[serde(rename = "EReference")]
    Reference,
}

impl FeatureKind {
    pub fn element_kind(self) -> ElementKind {
        match self {
            FeatureKind::Attribute => ElementKind::Attribute,
            FeatureKind::Reference => ElementKind::Reference,
        }
    }
}

/// An `EAttribute` or `EReference`. Bounds are stored as written; invalid
/// combinations are left for the rules to report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EStructuralFeature {
    pub kind: FeatureKind,
    pub name: String,
    #[serde(default, rename = "eType", skip_serializing_if = "Option::is_none")]
    pub e_type: Option<TypeRef>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub lower_bound: i64,
    #[serde(default = "default_upper", skip_serializing_if = "is_one")]
    pub upper_bound: i64,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub changeable: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub derived: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_value_literal: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub containment: bool,
    #[serde(default, rename = "eOpposite", skip_serializing_if = "Option::is_none")]
    pub opposite: Option<TypeRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EStructuralFeature {
    pub fn new(kind: FeatureKind, name: &str, e_type: Option<TypeRef>) -> Self {
        EStructuralFeature {
            kind,
            name: name.to_string(),
            e_type,
            lower_bound: 0,
            upper_bound: 1,
            changeable: true,
            derived: false,
            default_value_literal: None,
            containment: false,
            opposite: None,
            annotations: Vec::new(),
            opaque: Opaque::default(),
        }
    }

    pub fn attribute(name: &str, e_type: TypeRef) -> Self {
        EStructuralFeature::new(FeatureKind::Attribute, name, Some(e_type))
    }

    pub fn reference(name: &str, e_type: TypeRef) -> Self {
        EStructuralFeature::new(FeatureKind::Reference, name, Some(e_type))
    }

    pub fn with_bounds(mut self, lower: i64, upper: i64) -> Self {
        self.lower_bound = lower;
        self.upper_bound = upper;
        self
    }

    pub fn is_reference(&self) -> bool {
        self.kind == FeatureKind::Reference
    }

    pub fn is_containment(&self) -> bool {
        self.is_reference() && self.containment
    }

    pub fn is_many(&self) -> bool {
        self.upper_bound == -1 || self.upper_bound > 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "EOperation", rename_all = "camelCase")]
pub struct EOperation {
    pub name: String,
    #[serde(default, rename = "eType", skip_serializing_if = "Option::is_none")]
    pub return_type: Option<TypeRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<EParameter>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "EParameter", rename_all = "camelCase")]
pub struct EParameter {
    pub name: String,
    #[serde(default, rename = "eType", skip_serializing_if = "Option::is_none")]
    pub e_type: Option<TypeRef>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub lower_bound: i64,
    #[serde(default = "default_upper", skip_serializing_if = "is_one")]
    pub upper_bound: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<EAnnotation>,
    #[serde(default, rename = "extras", skip_serializing_if = "Opaque::is_empty")]
    pub opaque: Opaque,
}

impl EParameter {
    pub fn new(name: &str, e_type: Option<TypeRef>) -> Self {
        EParameter {
            name: name.to_string(),
            e_type,
            lower_bound: 0,
            upper_bound: 1,
            annotations: Vec::new(),
            opaque: Opaque::default(),
        }
    }
}

/// Where an indexed element sits in the containment tree: the subpackage
/// index chain from the root, then positions within that package.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locator {
    Package(Vec<usize>),
    Classifier(Vec<usize>, usize),
    Feature(Vec<usize>, usize, usize),
    Operation(Vec<usize>, usize, usize),
    Parameter(Vec<usize>, usize, usize, usize),
    Literal(Vec<usize>, usize, usize),
}

/// Borrowed view of one indexed element.
#[derive(Debug, Clone, Copy)]
pub enum ElementRef<'a> {
    Package(&'a EPackage),
    Classifier(&'a EClassifier),
    Feature(&'a EStructuralFeature),
    Operation(&'a EOperation),
    Parameter(&'a EParameter),
    Literal(&'a EEnumLiteral),
}

impl<'a> ElementRef<'a> {
    pub fn name(&self) -> &'a str {
        match self {
            ElementRef::Package(p) => &p.name,
            ElementRef::Classifier(c) => c.name(),
            ElementRef::Feature(f) => &f.name,
            ElementRef::Operation(o) => &o.name,
            ElementRef::Parameter(p) => &p.name,
            ElementRef::Literal(l) => &l.name,
        }
    }

    pub fn annotations(&self) -> &'a [EAnnotation] {
        match self {
            ElementRef::Package(p) => &p.annotations,
            ElementRef::Classifier(c) => c.annotations(),
            ElementRef::Feature(f) => &f.annotations,
            ElementRef::Operation(o) => &o.annotations,
            ElementRef::Parameter(p) => &p.annotations,
            ElementRef::Literal(l) => &l.annotations,
        }
    }

    pub fn opaque(&self) -> &'a Opaque {
        match self {
            ElementRef::Package(p) => &p.opaque,
            ElementRef::Classifier(c) => c.opaque(),
            ElementRef::Feature(f) => &f.opaque,
            ElementRef::Operation(o) => &o.opaque,
            ElementRef::Parameter(p) => &p.opaque,
            ElementRef::Literal(l) => &l.opaque,
        }
    }
}

/// Mutable view of one element, obtained through [`EPackage::element_mut`].
#[derive(Debug)]
pub enum ElementMut<'a> {
    Package(&'a mut EPackage),
    Classifier(&'a mut EClassifier),
    Feature(&'a mut EStructuralFeature),
    Operation(&'a mut EOperation),
    Parameter(&'a mut EParameter),
    Literal(&'a mut EEnumLiteral),
}

impl ElementMut<'_> {
    pub fn name_mut(&mut self) -> &mut String {
        match self {
            ElementMut::Package(p) => &mut p.name,
            ElementMut::Classifier(c) => c.name_mut(),
            ElementMut::Feature(f) => &mut f.name,
            ElementMut::Operation(o) => &mut o.name,
            ElementMut::Parameter(p) => &mut p.name,
            ElementMut::Literal(l) => &mut l.name,
        }
    }

    pub fn annotations_mut(&mut self) -> &mut Vec<EAnnotation> {
        match self {
            ElementMut::Package(p) => &mut p.annotations,
            ElementMut::Classifier(EClassifier::Class(c)) => &mut c.annotations,
            ElementMut::Classifier(EClassifier::DataType(d)) => &mut d.annotations,
            ElementMut::Classifier(EClassifier::Enum(e)) => &mut e.annotations,
            ElementMut::Feature(f) => &mut f.annotations,
            ElementMut::Operation(o) => &mut o.annotations,
            ElementMut::Parameter(p) => &mut p.annotations,
            ElementMut::Literal(l) => &mut l.annotations,
        }
    }
}

impl EPackage {
    /// The element at `loc`, which must come from a model with this root.
    pub fn element_mut(&mut self, loc: &Locator) -> ElementMut<'_> {
        fn class(c: &mut EClassifier) -> &mut EClass {
            match c {
                EClassifier::Class(c) => c,
                _ => panic!("locator points into a non-class"),
            }
        }
        match loc {
            Locator::Package(pk) => ElementMut::Package(self.descend_mut(pk)),
            Locator::Classifier(pk, c) => {
                ElementMut::Classifier(&mut self.descend_mut(pk).classifiers[*c])
            }
            Locator::Feature(pk, c, f) => {
                ElementMut::Feature(&mut class(&mut self.descend_mut(pk).classifiers[*c]).features[*f])
            }
            Locator::Operation(pk, c, o) => ElementMut::Operation(
                &mut class(&mut self.descend_mut(pk).classifiers[*c]).operations[*o],
            ),
            Locator::Parameter(pk, c, o, p) => ElementMut::Parameter(
                &mut class(&mut self.descend_mut(pk).classifiers[*c]).operations[*o].parameters[*p],
            ),
            Locator::Literal(pk, c, l) => match &mut self.descend_mut(pk).classifiers[*c] {
                EClassifier::Enum(e) => ElementMut::Literal(&mut e.literals[*l]),
                _ => panic!("locator points into a non-enum"),
            },
        }
    }

    /// Every type reference held by this package tree, in document order.
    pub fn type_refs_mut(&mut self) -> Vec<&mut TypeRef> {
        let mut out = Vec::new();
        collect_refs(self, &mut out);
        out
    }
}

fn collect_refs<'a>(pkg: &'a mut EPackage, out: &mut Vec<&'a mut TypeRef>) {
    for c in &mut pkg.classifiers {
        if let EClassifier::Class(c) = c {
            out.extend(c.super_types.iter_mut());
            for o in &mut c.operations {
                out.extend(o.return_type.as_mut());
                for p in &mut o.parameters {
                    out.extend(p.e_type.as_mut());
                }
            }
            for f in &mut c.features {
                out.extend(f.e_type.as_mut());
                out.extend(f.opposite.as_mut());
            }
        }
    }
    for s in &mut pkg.subpackages {
        collect_refs(s, out);
    }
}

/// Per-element unrecognized content, keyed by path.
pub type OpaqueExtras = BTreeMap<ElementPath, Opaque>;

/// A metamodel loaded from one `.ecore` resource.
#[derive(Debug, Clone)]
pub struct EcoreModel {
    root: EPackage,
    pub source_uri: String,
    order: Vec<(ElementPath, Locator)>,
    by_path: HashMap<ElementPath, usize>,
    by_text: HashMap<String, usize>,
}

impl PartialEq for EcoreModel {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl EcoreModel {
    pub fn new(root: EPackage, source_uri: impl Into<String>) -> Self {
        let mut model = EcoreModel {
            root,
            source_uri: source_uri.into(),
            order: Vec::new(),
            by_path: HashMap::new(),
            by_text: HashMap::new(),
        };
        model.reindex();
        model
    }

    pub fn root(&self) -> &EPackage {
        &self.root
    }

    pub fn root_path(&self) -> ElementPath {
        ElementPath::root(&self.root.name)
    }

    /// Applies a structural edit and rebuilds the element index. Resolved
    /// references may be stale afterwards; run [`resolve_types`] again.
    pub fn edit<R>(&mut self, f: impl FnOnce(&mut EPackage) -> R) -> R {
        let r = f(&mut self.root);
        self.reindex();
        r
    }

    pub fn into_root(self) -> EPackage {
        self.root
    }

    fn reindex(&mut self) {
        let mut order = Vec::new();
        let root_path = ElementPath::root(&self.root.name);
        index_package(&self.root, root_path, &mut Vec::new(), &mut order);
        self.by_path = order
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (p.clone(), i))
            .collect();
        self.by_text = HashMap::with_capacity(order.len());
        for (i, (p, _)) in order.iter().enumerate() {
            self.by_text.entry(p.to_string()).or_insert(i);
        }
        self.order = order;
    }

    /// All element paths in document order.
    pub fn paths(&self) -> impl Iterator<Item = &ElementPath> {
        self.order.iter().map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, path: &ElementPath) -> bool {
        self.by_path.contains_key(path)
    }

    /// Document-order position of an element.
    pub fn position(&self, path: &ElementPath) -> Option<usize> {
        self.by_path.get(path).copied()
    }

    pub fn locate(&self, path: &ElementPath) -> Option<&Locator> {
        self.by_path.get(path).map(|&i| &self.order[i].1)
    }

    /// Recovers a path from its rendered text.
    pub fn path_from_str(&self, text: &str) -> Option<ElementPath> {
        self.by_text.get(text).map(|&i| self.order[i].0.clone())
    }

    pub fn get(&self, path: &ElementPath) -> Option<ElementRef<'_>> {
        self.locate(path).map(|loc| self.deref_locator(loc))
    }

    fn deref_locator(&self, loc: &Locator) -> ElementRef<'_> {
        match loc {
            Locator::Package(pk) => ElementRef::Package(self.root.descend(pk)),
            Locator::Classifier(pk, c) => {
                ElementRef::Classifier(&self.root.descend(pk).classifiers[*c])
            }
            Locator::Feature(pk, c, f) => {
                let class = self.root.descend(pk).classifiers[*c]
                    .as_class()
                    .expect("feature locator points into a class");
                ElementRef::Feature(&class.features[*f])
            }
            Locator::Operation(pk, c, o) => {
                let class = self.root.descend(pk).classifiers[*c]
                    .as_class()
                    .expect("operation locator points into a class");
                ElementRef::Operation(&class.operations[*o])
            }
            Locator::Parameter(pk, c, o, p) => {
                let class = self.root.descend(pk).classifiers[*c]
                    .as_class()
                    .expect("parameter locator points into a class");
                ElementRef::Parameter(&class.operations[*o].parameters[*p])
            }
            Locator::Literal(pk, c, l) => {
                let e = self.root.descend(pk).classifiers[*c]
                    .as_enum()
                    .expect("literal locator points into an enum");
                ElementRef::Literal(&e.literals[*l])
            }
        }
    }

    /// All elements in document order.
    pub fn elements(&self) -> impl Iterator<Item = (&ElementPath, ElementRef<'_>)> {
        self.order
            .iter()
            .map(move |(p, loc)| (p, self.deref_locator(loc)))
    }

    pub fn classifier(&self, path: &ElementPath) -> Option<&EClassifier> {
        match self.get(path)? {
            ElementRef::Classifier(c) => Some(c),
            _ => None,
        }
    }

    pub fn class(&self, path: &ElementPath) -> Option<&EClass> {
        self.classifier(path)?.as_class()
    }

    pub fn feature(&self, path: &ElementPath) -> Option<&EStructuralFeature> {
        match self.get(path)? {
            ElementRef::Feature(f) => Some(f),
            _ => None,
        }
    }

    /// All classes in document order.
    pub fn classes(&self) -> impl Iterator<Item = (&ElementPath, &EClass)> {
        self.elements().filter_map(|(p, e)| match e {
            ElementRef::Classifier(EClassifier::Class(c)) => Some((p, c)),
            _ => None,
        })
    }

    /// Resolved local supertypes of a class in declaration order; unresolved
    /// or non-class entries are skipped.
    pub fn direct_super_types(&self, class: &ElementPath) -> Vec<ElementPath> {
        let Some(c) = self.class(class) else {
            return Vec::new();
        };
        c.super_types
            .iter()
            .filter_map(|t| t.local_target())
            .filter(|p| self.class(p).is_some())
            .cloned()
            .collect()
    }

    /// Paths of the direct (declared) features of a class.
    pub fn feature_paths(&self, class: &ElementPath) -> Vec<ElementPath> {
        let Some(Locator::Classifier(..)) = self.locate(class) else {
            return Vec::new();
        };
        let Some(start) = self.position(class) else {
            return Vec::new();
        };
        self.order[start + 1..]
            .iter()
            .take_while(|(p, _)| p.depth() > class.depth())
            .filter(|(p, _)| p.depth() == class.depth() + 1 && p.kind().is_feature())
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Unrecognized content of every element that has some.
    pub fn opaque_extras(&self) -> OpaqueExtras {
        self.elements()
            .filter(|(_, e)| !e.opaque().is_empty())
            .map(|(p, e)| (p.clone(), e.opaque().clone()))
            .collect()
    }
}

/// Assigns ordinals to sibling segments that render identically.
struct Ordinals(HashMap<String, usize>);

impl Ordinals {
    fn new() -> Self {
        Ordinals(HashMap::new())
    }

    fn next(&mut self, kind: ElementKind, name: &str) -> usize {
        let key = Segment {
            kind,
            name: name.to_string(),
            ordinal: 0,
        }
        .base_text();
        let n = self.0.entry(key).or_insert(0);
        *n += 1;
        *n - 1
    }
}

fn index_package(
    pkg: &EPackage,
    path: ElementPath,
    chain: &mut Vec<usize>,
    out: &mut Vec<(ElementPath, Locator)>,
) {
    out.push((path.clone(), Locator::Package(chain.clone())));
    let mut siblings = Ordinals::new();
    for (ci, classifier) in pkg.classifiers.iter().enumerate() {
        let kind = classifier.kind();
        let cpath = path.child(kind, classifier.name(), siblings.next(kind, classifier.name()));
        out.push((cpath.clone(), Locator::Classifier(chain.clone(), ci)));
        match classifier {
            EClassifier::Class(class) => {
                let mut members = Ordinals::new();
                for (oi, op) in class.operations.iter().enumerate() {
                    let opath = cpath.child(
                        ElementKind::Operation,
                        &op.name,
                        members.next(ElementKind::Operation, &op.name),
                    );
                    out.push((opath.clone(), Locator::Operation(chain.clone(), ci, oi)));
                    let mut params = Ordinals::new();
                    for (pi, param) in op.parameters.iter().enumerate() {
                        let ppath = opath.child(
                            ElementKind::Parameter,
                            &param.name,
                            params.next(ElementKind::Parameter, &param.name),
                        );
                        out.push((ppath, Locator::Parameter(chain.clone(), ci, oi, pi)));
                    }
                }
                for (fi, feature) in class.features.iter().enumerate() {
                    let fkind = feature.kind.element_kind();
                    let fpath =
                        cpath.child(fkind, &feature.name, members.next(fkind, &feature.name));
                    out.push((fpath, Locator::Feature(chain.clone(), ci, fi)));
                }
            }
            EClassifier::Enum(e) => {
                let mut lits = Ordinals::new();
                for (li, lit) in e.literals.iter().enumerate() {
                    let lpath = cpath.child(
                        ElementKind::Literal,
                        &lit.name,
                        lits.next(ElementKind::Literal, &lit.name),
                    );
                    out.push((lpath, Locator::Literal(chain.clone(), ci, li)));
                }
            }
            EClassifier::DataType(_) => {}
        }
    }
    for (si, sub) in pkg.subpackages.iter().enumerate() {
        let spath = path.child(
            ElementKind::Package,
            &sub.name,
            siblings.next(ElementKind::Package, &sub.name),
        );
        chain.push(si);
        index_package(sub, spath, chain, out);
        chain.pop();
    }
}
