use super::{
    BuiltinRegistry, EPackage, EClassifier, ElementKind, ElementPath, EcoreModel, TypeRef,
    ECORE_NS_URI,
};
use crate::diagnostic::Diagnostic;
use crate::rules::catalog;

/// What a resolved [`TypeRef`] denotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefTarget {
    /// An element of the same model.
    Local(ElementPath),
    /// A standard Ecore data type or metaclass, by name.
    Builtin(String),
}

/// A reference split into its resource URI and fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefParts<'a> {
    pub uri: &'a str,
    pub fragment: &'a str,
}

/// Splits `[type-hint ]uri#fragment` (the hint is what EMF writes for
/// cross-resource data types, e.g. `ecore:EDataType`).
pub fn parse_ref(raw: &str) -> RefParts<'_> {
    let token = raw.split_whitespace().last().unwrap_or("");
    match token.split_once('#') {
        Some((uri, fragment)) => RefParts { uri, fragment },
        None => RefParts {
            uri: "",
            fragment: token,
        },
    }
}

/// Fragment segments after the leading `//`; `None` for other fragment syntaxes.
fn fragment_segments(fragment: &str) -> Option<Vec<&str>> {
    let rest = fragment.strip_prefix("//")?;
    if rest.is_empty() {
        return Some(Vec::new());
    }
    Some(rest.split('/').collect())
}

fn find_in_package(
    model: &EcoreModel,
    pkg: &EPackage,
    pkg_path: &ElementPath,
    segs: &[&str],
) -> Option<ElementPath> {
    let (first, rest) = segs.split_first()?;
    // classifiers first, then subpackages with the same name; the first
    // classifier with a given name always carries ordinal 0
    if let Some(classifier) = pkg.classifier(first) {
        let cpath = pkg_path.child(classifier.kind(), first, 0);
        match rest {
            [] => return Some(cpath),
            [member] => {
                let found = [ElementKind::Attribute, ElementKind::Reference, ElementKind::Literal]
                    .into_iter()
                    .map(|k| cpath.child(k, member, 0))
                    .find(|p| model.contains(p));
                if found.is_some() {
                    return found;
                }
            }
            _ => {}
        }
    }
    let sub = pkg.subpackages.iter().find(|s| s.name == *first)?;
    let shadowing = pkg.classifiers.iter().filter(|c| c.name() == *first).count();
    let spath = pkg_path.child(ElementKind::Package, first, shadowing);
    if rest.is_empty() {
        return Some(spath);
    }
    find_in_package(model, sub, &spath, rest)
}

/// Looks up what `raw` denotes in `model`, without modifying anything.
pub fn lookup_ref(model: &EcoreModel, builtins: &BuiltinRegistry, raw: &str) -> Option<RefTarget> {
    let parts = parse_ref(raw);
    if parts.uri == ECORE_NS_URI {
        let segs = fragment_segments(parts.fragment)?;
        let [name] = segs.as_slice() else {
            return None;
        };
        return builtins
            .contains(name)
            .then(|| RefTarget::Builtin(name.to_string()));
    }
    if !parts.uri.is_empty() {
        // other resources are out of reach for a single-file model
        return None;
    }
    let segs = fragment_segments(parts.fragment)?;
    if segs.is_empty() {
        return Some(RefTarget::Local(model.root_path()));
    }
    find_in_package(model, model.root(), &model.root_path(), &segs).map(RefTarget::Local)
}

#[derive(Clone, Copy)]
enum Expect {
    Classifier,
    Class,
    Reference,
}

fn acceptable(model: &EcoreModel, builtins: &BuiltinRegistry, target: &RefTarget, expect: Expect) -> bool {
    match (target, expect) {
        (RefTarget::Local(p), Expect::Classifier) => p.kind().is_classifier(),
        (RefTarget::Local(p), Expect::Class) => p.kind() == ElementKind::Class,
        (RefTarget::Local(p), Expect::Reference) => {
            p.kind() == ElementKind::Reference && model.contains(p)
        }
        (RefTarget::Builtin(_), Expect::Classifier) => true,
        (RefTarget::Builtin(name), Expect::Class) => builtins.is_class(name),
        (RefTarget::Builtin(_), Expect::Reference) => false,
    }
}

fn describe(expect: Expect) -> &'static str {
    match expect {
        Expect::Classifier => "classifier",
        Expect::Class => "EClass",
        Expect::Reference => "EReference",
    }
}

/// Resolves every reference in the model against its own classifiers and
/// the builtin registry.
///
/// References that cannot be resolved keep `resolved = None` and are
/// reported as SYN-005 at the owning element.
pub fn resolve_types(model: &mut EcoreModel, builtins: &BuiltinRegistry) -> Vec<Diagnostic> {
    struct Slot {
        path: ElementPath,
        role: &'static str,
        expect: Expect,
        raw: String,
    }
    // collect raw references in document order, then resolve against the
    // immutable model, then write back
    let mut slots = Vec::new();
    for (path, element) in model.elements() {
        use super::ElementRef::*;
        match element {
            Classifier(EClassifier::Class(c)) => {
                for t in &c.super_types {
                    slots.push(Slot { path: path.clone(), role: "eSuperTypes", expect: Expect::Class, raw: t.raw.clone() });
                }
            }
            Feature(f) => {
                if let Some(t) = &f.e_type {
                    slots.push(Slot { path: path.clone(), role: "eType", expect: Expect::Classifier, raw: t.raw.clone() });
                }
                if let Some(t) = &f.opposite {
                    slots.push(Slot { path: path.clone(), role: "eOpposite", expect: Expect::Reference, raw: t.raw.clone() });
                }
            }
            Operation(o) => {
                if let Some(t) = &o.return_type {
                    slots.push(Slot { path: path.clone(), role: "eType", expect: Expect::Classifier, raw: t.raw.clone() });
                }
            }
            Parameter(p) => {
                if let Some(t) = &p.e_type {
                    slots.push(Slot { path: path.clone(), role: "eType", expect: Expect::Classifier, raw: t.raw.clone() });
                }
            }
            _ => {}
        }
    }

    let mut diagnostics = Vec::new();
    let mut results = Vec::with_capacity(slots.len());
    for slot in &slots {
        let found = lookup_ref(model, builtins, &slot.raw);
        let resolved = match found {
            Some(t) if acceptable(model, builtins, &t, slot.expect) => Some(t),
            Some(_) => {
                diagnostics.push(catalog::diagnostic(
                    "SYN-005",
                    slot.path.clone(),
                    format!(
                        "{} `{}` does not denote an {}",
                        slot.role,
                        slot.raw,
                        describe(slot.expect)
                    ),
                ));
                None
            }
            None => {
                diagnostics.push(catalog::diagnostic(
                    "SYN-005",
                    slot.path.clone(),
                    format!("{} `{}` cannot be resolved", slot.role, slot.raw),
                ));
                None
            }
        };
        results.push(resolved);
    }

    let mut results = results.into_iter();
    let locators: Vec<_> = model
        .elements()
        .map(|(p, _)| model.locate(p).cloned().expect("indexed"))
        .collect();
    model.edit(|root| {
        let mut assign = |t: &mut TypeRef| t.resolved = results.next().expect("one result per slot");
        for loc in &locators {
            use super::Locator;
            match loc {
                Locator::Classifier(pk, ci) => {
                    if let EClassifier::Class(c) = &mut root.descend_mut(pk).classifiers[*ci] {
                        c.super_types.iter_mut().for_each(&mut assign);
                    }
                }
                Locator::Feature(pk, ci, fi) => {
                    if let EClassifier::Class(c) = &mut root.descend_mut(pk).classifiers[*ci] {
                        let f = &mut c.features[*fi];
                        if let Some(t) = &mut f.e_type {
                            assign(t);
                        }
                        if let Some(t) = &mut f.opposite {
                            assign(t);
                        }
                    }
                }
                Locator::Operation(pk, ci, oi) => {
                    if let EClassifier::Class(c) = &mut root.descend_mut(pk).classifiers[*ci] {
                        if let Some(t) = &mut c.operations[*oi].return_type {
                            assign(t);
                        }
                    }
                }
                Locator::Parameter(pk, ci, oi, pi) => {
                    if let EClassifier::Class(c) = &mut root.descend_mut(pk).classifiers[*ci] {
                        if let Some(t) = &mut c.operations[*oi].parameters[*pi].e_type {
                            assign(t);
                        }
                    }
                }
                _ => {}
            }
        }
    });
    diagnostics
}
