use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::metamodel::{
    parse_ref, resolve_types, BuiltinRegistry, EClassifier, EPackage, ElementKind, ElementPath,
    ElementRef, EcoreModel, TypeRef,
};

/// A classifier (or feature, when copying into a class) whose name is
/// already taken at the destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    /// The existing element at the destination.
    pub existing: ElementPath,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} name conflict(s): {}", .conflicts.len(), .conflicts.iter().map(|c| c.existing.to_string()).collect::<Vec<_>>().join(", "))]
pub struct ConflictList {
    pub conflicts: Vec<Conflict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CopyError {
    #[error("selected element `{0}` is not in the source model")]
    MissingSelection(String),
    #[error("destination `{0}` is not a package or class of the target model")]
    BadDestination(String),
    #[error("`{0}` cannot be copied; select classifiers or structural features")]
    Unsupported(String),
    #[error(transparent)]
    Conflicts(#[from] ConflictList),
}

/// Rewrites `raw` so that it refers to `fragment` in the same resource,
/// keeping any type hint.
fn with_local_fragment(raw: &str, fragment: &str) -> String {
    let token_start = raw.rfind(char::is_whitespace).map(|i| i + 1).unwrap_or(0);
    format!("{}#{fragment}", &raw[..token_start])
}

fn localize_refs(pkg: &mut EPackage, own_uri: &str) {
    if own_uri.is_empty() {
        return;
    }
    for t in pkg.type_refs_mut() {
        let parts = parse_ref(&t.raw);
        if parts.uri == own_uri {
            let fragment = parts.fragment.to_string();
            *t = TypeRef::new(with_local_fragment(&t.raw, &fragment));
        }
    }
}

fn merge_into(
    target: &mut EPackage,
    source: EPackage,
    target_path: &ElementPath,
    target_model: &EcoreModel,
    conflicts: &mut Vec<Conflict>,
) {
    for c in source.classifiers {
        if let Some(i) = target
            .classifiers
            .iter()
            .position(|t| t.name() == c.name())
        {
            let existing = target_model
                .paths()
                .filter(|p| p.kind().is_classifier() && p.parent().as_ref() == Some(target_path))
                .nth(i)
                .cloned()
                .unwrap_or_else(|| target_path.clone());
            conflicts.push(Conflict {
                existing,
                name: c.name().to_string(),
            });
        } else {
            target.classifiers.push(c);
        }
    }
    for s in source.subpackages {
        match target.subpackages.iter().position(|t| t.name == s.name) {
            Some(i) => {
                let sub_path = target_path.child(ElementKind::Package, &s.name, 0);
                merge_into(&mut target.subpackages[i], s, &sub_path, target_model, conflicts);
            }
            None => target.subpackages.push(s),
        }
    }
}

/// Appends the classifiers of `source`'s root package to `target`'s root,
/// merging same-named subpackages recursively. Any name clash aborts the
/// whole import.
pub fn import_package(target: &EcoreModel, source: &EcoreModel) -> Result<EcoreModel, ConflictList> {
    let mut src = source.root().clone();
    localize_refs(&mut src, &source.root().ns_uri);
    let mut root = target.root().clone();
    let mut conflicts = Vec::new();
    // check everything against the untouched target first
    merge_into(&mut root, src, &target.root_path(), target, &mut conflicts);
    if !conflicts.is_empty() {
        return Err(ConflictList { conflicts });
    }
    let mut merged = EcoreModel::new(root, target.source_uri.clone());
    resolve_types(&mut merged, &BuiltinRegistry::standard());
    Ok(merged)
}

/// Deep-copies selected classifiers into a package of `target` (the root
/// unless `into` names another package) and selected features into the class
/// named by `into`. References to other selected classifiers are rewritten to
/// their new location; all other references keep their text and may end up
/// unresolved.
pub fn copy_elements(
    source: &EcoreModel,
    selection: &BTreeSet<ElementPath>,
    target: &EcoreModel,
    into: Option<&ElementPath>,
) -> Result<EcoreModel, CopyError> {
    for p in selection {
        if !source.contains(p) {
            return Err(CopyError::MissingSelection(p.to_string()));
        }
    }
    let dest = into.cloned().unwrap_or_else(|| target.root_path());
    let dest_kind = match target.get(&dest) {
        Some(ElementRef::Package(_)) => ElementKind::Package,
        Some(ElementRef::Classifier(EClassifier::Class(_))) => ElementKind::Class,
        _ => return Err(CopyError::BadDestination(dest.to_string())),
    };

    let classifiers: Vec<&ElementPath> = selection.iter().filter(|p| p.kind().is_classifier()).collect();
    // features whose class is copied as a whole come along anyway
    let features: Vec<&ElementPath> = selection
        .iter()
        .filter(|p| p.kind().is_feature())
        .filter(|p| !p.parent().is_some_and(|c| selection.contains(&c)))
        .collect();
    if let Some(p) = selection
        .iter()
        .find(|p| !p.kind().is_classifier() && !p.kind().is_feature())
    {
        return Err(CopyError::Unsupported(p.to_string()));
    }
    if !classifiers.is_empty() && dest_kind != ElementKind::Package {
        return Err(CopyError::BadDestination(dest.to_string()));
    }
    if !features.is_empty() && dest_kind != ElementKind::Class {
        return Err(CopyError::BadDestination(dest.to_string()));
    }

    // where each copied classifier lands, for rewriting references between them
    let mut moved: BTreeMap<String, String> = BTreeMap::new();
    for c in &classifiers {
        let new_path = dest.child(c.kind(), c.name(), 0);
        moved.insert(c.fragment(), new_path.fragment());
    }
    let retarget = |t: &mut TypeRef| {
        let parts = parse_ref(&t.raw);
        if !parts.uri.is_empty() {
            return;
        }
        // exact classifier, or a feature inside one (eOpposite)
        let hit = moved.iter().find_map(|(old, new)| {
            if parts.fragment == old {
                Some(new.clone())
            } else {
                parts
                    .fragment
                    .strip_prefix(old.as_str())
                    .filter(|rest| rest.starts_with('/'))
                    .map(|rest| format!("{new}{rest}"))
            }
        });
        if let Some(fragment) = hit {
            *t = TypeRef::new(with_local_fragment(&t.raw, &fragment));
        }
    };

    let loc = target.locate(&dest).expect("destination checked").clone();
    let mut root = target.root().clone();
    let mut conflicts = Vec::new();
    match root.element_mut(&loc) {
        crate::metamodel::ElementMut::Package(pkg) => {
            let base = pkg.classifiers.len();
            for c in &classifiers {
                let copy = source.classifier(c).expect("selection checked").clone();
                let clash = pkg.classifiers.iter().position(|t| t.name() == copy.name());
                match clash {
                    Some(i) if i < base => conflicts.push(Conflict {
                        existing: dest.child(pkg.classifiers[i].kind(), copy.name(), 0),
                        name: copy.name().to_string(),
                    }),
                    Some(_) => conflicts.push(Conflict {
                        existing: (*c).clone(),
                        name: copy.name().to_string(),
                    }),
                    None => pkg.classifiers.push(copy),
                }
            }
            let mut tmp = EPackage {
                classifiers: pkg.classifiers.split_off(base),
                ..EPackage::default()
            };
            for t in tmp.type_refs_mut() {
                retarget(t);
            }
            pkg.classifiers.append(&mut tmp.classifiers);
        }
        crate::metamodel::ElementMut::Classifier(EClassifier::Class(class)) => {
            for f in &features {
                let copy = source.feature(f).expect("selection checked").clone();
                if let Some(existing) = class.features.iter().find(|t| t.name == copy.name) {
                    conflicts.push(Conflict {
                        existing: dest.child(existing.kind.element_kind(), &existing.name, 0),
                        name: copy.name.clone(),
                    });
                } else {
                    class.features.push(copy);
                }
            }
        }
        _ => unreachable!("destination kind checked above"),
    }
    if !conflicts.is_empty() {
        return Err(ConflictList { conflicts }.into());
    }
    let mut merged = EcoreModel::new(root, target.source_uri.clone());
    resolve_types(&mut merged, &BuiltinRegistry::standard());
    Ok(merged)
}
