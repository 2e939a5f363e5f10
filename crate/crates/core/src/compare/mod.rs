//! Matching and diffing two versions of a model, plus model-to-model edits
//! (import, copy, search and replace).
//!
//! Elements are matched top-down by container, kind and name; there are no
//! stable ids, so a rename shows up as a removal plus an addition.

mod merge;
mod replace;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::metamodel::{EClassifier, ElementKind, ElementPath, ElementRef, EcoreModel};

pub use merge::{copy_elements, import_package, Conflict, ConflictList, CopyError};
pub use replace::{search_replace, ChangeSet, Rename, ReplaceError, ReplaceField, ReplaceOptions, ReplaceScope};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(ElementPath, ElementPath)>,
    pub unmatched_a: Vec<ElementPath>,
    pub unmatched_b: Vec<ElementPath>,
}

/// Direct children of every element, in document order.
fn children_index(model: &EcoreModel) -> HashMap<ElementPath, Vec<ElementPath>> {
    let mut out: HashMap<ElementPath, Vec<ElementPath>> = HashMap::new();
    for p in model.paths() {
        if let Some(parent) = p.parent() {
            out.entry(parent).or_default().push(p.clone());
        }
    }
    out
}

/// Type, bounds and name of a feature, used to tell same-named features apart.
fn signature(model: &EcoreModel, path: &ElementPath) -> String {
    match model.feature(path) {
        Some(f) => format!(
            "{}:{}[{}..{}]",
            f.name,
            f.e_type.as_ref().map(|t| t.raw.as_str()).unwrap_or(""),
            f.lower_bound,
            f.upper_bound
        ),
        None => String::new(),
    }
}

fn descendants(
    index: &HashMap<ElementPath, Vec<ElementPath>>,
    path: &ElementPath,
    out: &mut Vec<ElementPath>,
) {
    out.push(path.clone());
    for c in index.get(path).into_iter().flatten() {
        descendants(index, c, out);
    }
}

/// Pairs elements of `a` and `b`. Roots are always paired; children pair up
/// when kind and name agree, with equal signatures first and then in order.
pub fn match_elements(a: &EcoreModel, b: &EcoreModel) -> Matching {
    let ia = children_index(a);
    let ib = children_index(b);
    let mut m = Matching::default();
    let mut queue = vec![(a.root_path(), b.root_path())];
    while let Some((pa, pb)) = queue.pop() {
        m.pairs.push((pa.clone(), pb.clone()));
        let ca = ia.get(&pa).cloned().unwrap_or_default();
        let cb = ib.get(&pb).cloned().unwrap_or_default();
        let key = |p: &ElementPath| (p.kind(), p.name().to_string());
        let mut groups_b: BTreeMap<(ElementKind, String), Vec<ElementPath>> = BTreeMap::new();
        for p in &cb {
            groups_b.entry(key(p)).or_default().push(p.clone());
        }
        let mut taken_b: std::collections::HashSet<ElementPath> = Default::default();
        let mut pending_a = Vec::new();
        // equal signatures first
        for p in &ca {
            let sig = signature(a, p);
            let hit = groups_b.get(&key(p)).and_then(|cands| {
                cands
                    .iter()
                    .find(|q| !taken_b.contains(*q) && signature(b, q) == sig)
                    .cloned()
            });
            match hit {
                Some(q) => {
                    taken_b.insert(q.clone());
                    pending_a.push((p.clone(), Some(q)));
                }
                None => pending_a.push((p.clone(), None)),
            }
        }
        // then remaining same-named ones in order
        let mut local_pairs = Vec::new();
        for (p, hit) in pending_a {
            let q = hit.or_else(|| {
                groups_b
                    .get(&key(&p))
                    .and_then(|cands| cands.iter().find(|q| !taken_b.contains(*q)).cloned())
                    .inspect(|q| {
                        taken_b.insert(q.clone());
                    })
            });
            match q {
                Some(q) => local_pairs.push((p, q)),
                None => descendants(&ia, &p, &mut m.unmatched_a),
            }
        }
        for q in &cb {
            if !taken_b.contains(q) {
                descendants(&ib, q, &mut m.unmatched_b);
            }
        }
        // reversed so that popping visits children in document order
        queue.extend(local_pairs.into_iter().rev());
    }
    let pos_a = |p: &ElementPath| a.position(p).unwrap_or(usize::MAX);
    let pos_b = |p: &ElementPath| b.position(p).unwrap_or(usize::MAX);
    m.pairs.sort_by_key(|(p, _)| pos_a(p));
    m.unmatched_a.sort_by_key(|p| pos_a(p));
    m.unmatched_b.sort_by_key(|p| pos_b(p));
    m
}

/// One field that differs between matched elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldChange {
    pub path: ElementPath,
    pub field: String,
    pub old: Option<String>,
    pub new: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelDelta {
    /// Elements only in the second model, as paths there.
    pub additions: Vec<ElementPath>,
    /// Elements only in the first model.
    pub deletions: Vec<ElementPath>,
    /// Field differences of matched elements, at their path in the first model.
    pub changes: Vec<FieldChange>,
}

impl ModelDelta {
    pub fn is_empty(&self) -> bool {
        self.additions.is_empty() && self.deletions.is_empty() && self.changes.is_empty()
    }
}

fn flag(b: bool) -> Option<String> {
    Some(b.to_string())
}

/// The compared fields of an element, in a fixed order. Absent optional
/// values are `None`.
pub fn element_fields(element: ElementRef<'_>) -> Vec<(&'static str, Option<String>)> {
    let raw = |t: &Option<crate::metamodel::TypeRef>| t.as_ref().map(|t| t.raw.clone());
    let mut out = match element {
        ElementRef::Package(p) => vec![
            ("nsURI", Some(p.ns_uri.clone())),
            ("nsPrefix", Some(p.ns_prefix.clone())),
        ],
        ElementRef::Classifier(EClassifier::Class(c)) => vec![
            ("abstract", flag(c.is_abstract)),
            ("interface", flag(c.is_interface)),
            (
                "eSuperTypes",
                Some(
                    c.super_types
                        .iter()
                        .map(|t| t.raw.as_str())
                        .collect::<Vec<_>>()
                        .join(" "),
                ),
            ),
        ],
        ElementRef::Classifier(EClassifier::DataType(d)) => vec![
            ("instanceClassName", d.instance_class_name.clone()),
            ("instanceTypeName", d.instance_type_name.clone()),
        ],
        ElementRef::Classifier(EClassifier::Enum(_)) => vec![],
        ElementRef::Feature(f) => {
            let mut v = vec![
                ("eType", raw(&f.e_type)),
                ("lowerBound", Some(f.lower_bound.to_string())),
                ("upperBound", Some(f.upper_bound.to_string())),
                ("changeable", flag(f.changeable)),
                ("derived", flag(f.derived)),
                ("defaultValueLiteral", f.default_value_literal.clone()),
            ];
            if f.is_reference() {
                v.push(("containment", flag(f.containment)));
                v.push(("eOpposite", raw(&f.opposite)));
            }
            v
        }
        ElementRef::Operation(o) => vec![("eType", raw(&o.return_type))],
        ElementRef::Parameter(p) => vec![
            ("eType", raw(&p.e_type)),
            ("lowerBound", Some(p.lower_bound.to_string())),
            ("upperBound", Some(p.upper_bound.to_string())),
        ],
        ElementRef::Literal(l) => vec![
            ("value", Some(l.value.to_string())),
            ("literal", l.literal.clone()),
        ],
    };
    let annotations = element.annotations();
    out.push((
        "annotations",
        (!annotations.is_empty())
            .then(|| serde_json::to_string(annotations).expect("annotations serialize")),
    ));
    out
}

pub fn diff(a: &EcoreModel, b: &EcoreModel) -> ModelDelta {
    let m = match_elements(a, b);
    let mut changes = Vec::new();
    for (pa, pb) in &m.pairs {
        let (Some(ea), Some(eb)) = (a.get(pa), b.get(pb)) else {
            continue;
        };
        for ((field, old), (_, new)) in element_fields(ea).into_iter().zip(element_fields(eb)) {
            if old != new {
                changes.push(FieldChange {
                    path: pa.clone(),
                    field: field.to_string(),
                    old,
                    new,
                });
            }
        }
    }
    ModelDelta {
        additions: m.unmatched_b,
        deletions: m.unmatched_a,
        changes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangelogFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct ChangelogJson<'a> {
    added: Vec<String>,
    removed: Vec<String>,
    changed: &'a [FieldChange],
}

fn show(v: &Option<String>) -> String {
    match v {
        Some(s) => format!("{s:?}"),
        None => "(unset)".to_string(),
    }
}

/// Renders a delta for review: sections Added, Removed and Changed, or
/// `no changes`; JSON as `{"added","removed","changed"}`.
pub fn render_changelog(delta: &ModelDelta, format: ChangelogFormat) -> String {
    match format {
        ChangelogFormat::Json => {
            let doc = ChangelogJson {
                added: delta.additions.iter().map(|p| p.to_string()).collect(),
                removed: delta.deletions.iter().map(|p| p.to_string()).collect(),
                changed: &delta.changes,
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("changelog serializes");
            s.push('\n');
            s
        }
        ChangelogFormat::Text => {
            if delta.is_empty() {
                return "no changes\n".to_string();
            }
            let mut out = String::new();
            if !delta.additions.is_empty() {
                out.push_str(&format!("Added ({}):\n", delta.additions.len()));
                for p in &delta.additions {
                    out.push_str(&format!("  + {p}\n"));
                }
            }
            if !delta.deletions.is_empty() {
                out.push_str(&format!("Removed ({}):\n", delta.deletions.len()));
                for p in &delta.deletions {
                    out.push_str(&format!("  - {p}\n"));
                }
            }
            if !delta.changes.is_empty() {
                out.push_str(&format!("Changed ({}):\n", delta.changes.len()));
                for c in &delta.changes {
                    out.push_str(&format!(
                        "  ~ {} {}: {} -> {}\n",
                        c.path,
                        c.field,
                        show(&c.old),
                        show(&c.new)
                    ));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metamodel::{EClass, EPackage, EStructuralFeature, TypeRef};

    fn base() -> EcoreModel {
        let mut pkg = EPackage::new("p", "http://p", "p");
        let mut person = EClass::new("Person");
        person.features.push(EStructuralFeature::attribute(
            "name",
            TypeRef::new("ecore:EDataType http://www.eclipse.org/emf/2002/Ecore#//EString"),
        ));
        pkg.classifiers.push(EClassifier::Class(person));
        EcoreModel::new(pkg, "a")
    }

    #[test]
    fn identical_models_fully_paired() {
        let m = match_elements(&base(), &base());
        assert_eq!(m.pairs.len(), 3);
        assert!(m.unmatched_a.is_empty() && m.unmatched_b.is_empty());
        assert!(diff(&base(), &base()).is_empty());
        assert_eq!(render_changelog(&ModelDelta::default(), ChangelogFormat::Text), "no changes\n");
    }

    #[test]
    fn rename_is_delete_plus_add() {
        let mut b = base();
        b.edit(|r| *r.classifiers[0].name_mut() = "Human".into());
        let d = diff(&base(), &b);
        let added: Vec<String> = d.additions.iter().map(|p| p.to_string()).collect();
        let removed: Vec<String> = d.deletions.iter().map(|p| p.to_string()).collect();
        assert_eq!(added, ["/p/Human", "/p/Human/name"]);
        assert_eq!(removed, ["/p/Person", "/p/Person/name"]);
        assert!(d.changes.is_empty());
    }

    #[test]
    fn single_bound_change() {
        let mut b = base();
        b.edit(|r| {
            if let EClassifier::Class(c) = &mut r.classifiers[0] {
                c.features[0].upper_bound = -1;
            }
        });
        let d = diff(&base(), &b);
        assert_eq!(d.changes.len(), 1);
        assert_eq!(d.changes[0].field, "upperBound");
        assert_eq!(d.changes[0].new.as_deref(), Some("-1"));
        let text = render_changelog(&d, ChangelogFormat::Text);
        assert_eq!(text, "Changed (1):\n  ~ /p/Person/name upperBound: \"1\" -> \"-1\"\n");
        let json: serde_json::Value =
            serde_json::from_str(&render_changelog(&d, ChangelogFormat::Json)).unwrap();
        assert_eq!(json["changed"][0]["path"], "/p/Person/name");
        assert_eq!(json["added"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn colliding_names_use_signatures() {
        let mut a = base();
        a.edit(|r| {
            if let EClassifier::Class(c) = &mut r.classifiers[0] {
                let dup = EStructuralFeature::attribute("name", TypeRef::new("#//Other")).with_bounds(0, -1);
                c.features.push(dup);
            }
        });
        let mut b = a.clone();
        b.edit(|r| {
            if let EClassifier::Class(c) = &mut r.classifiers[0] {
                c.features.swap(0, 1);
            }
        });
        let d = diff(&a, &b);
        assert!(d.changes.is_empty(), "{d:?}");
    }
}
