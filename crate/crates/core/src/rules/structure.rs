//! Structural checks: bounds, uniqueness, references, inheritance and
//! instantiability.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::diagnostic::Diagnostic;
use crate::metamodel::{
    all_features, super_closure, BuiltinRegistry, EClassifier, ElementPath, ElementRef,
    EcoreModel,
};

use super::catalog;

/// Lower bound non-negative and upper bound unbounded (-1) or at least
/// `max(1, lower)`.
pub fn bounds_valid(lower: i64, upper: i64) -> bool {
    lower >= 0 && (upper == -1 || upper >= lower.max(1))
}

/// SYN-002 for one typed element.
pub fn check_multiplicity_bounds(path: &ElementPath, lower: i64, upper: i64) -> Vec<Diagnostic> {
    if bounds_valid(lower, upper) {
        return Vec::new();
    }
    vec![catalog::diagnostic(
        "SYN-002",
        path.clone(),
        format!("invalid multiplicity [{lower}..{upper}]"),
    )]
}

pub fn check_all_bounds(model: &EcoreModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (path, element) in model.elements() {
        match element {
            ElementRef::Feature(f) => {
                out.extend(check_multiplicity_bounds(path, f.lower_bound, f.upper_bound))
            }
            ElementRef::Parameter(p) => {
                out.extend(check_multiplicity_bounds(path, p.lower_bound, p.upper_bound))
            }
            _ => {}
        }
    }
    out
}

/// SYN-003 per duplicate classifier name in a package (reported on every
/// occurrence after the first) and SYN-004 per class where a feature-name
/// collision first appears in its feature set.
pub fn check_name_uniqueness(model: &EcoreModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (pkg_path, element) in model.elements() {
        let ElementRef::Package(pkg) = element else {
            continue;
        };
        let mut first: BTreeMap<&str, ElementPath> = BTreeMap::new();
        let class_paths = model
            .paths()
            .filter(|p| p.kind().is_classifier() && p.parent().as_ref() == Some(pkg_path));
        for (c, path) in pkg.classifiers.iter().zip(class_paths) {
            if c.name().is_empty() {
                continue;
            }
            match first.get(c.name()) {
                Some(earlier) => out.push(
                    catalog::diagnostic(
                        "SYN-003",
                        path.clone(),
                        format!("classifier name `{}` is already used in package `{}`", c.name(), pkg.name),
                    )
                    .with_related([earlier.clone()]),
                ),
                None => {
                    first.insert(c.name(), path.clone());
                }
            }
        }
    }

    let collisions = |class: &ElementPath| -> BTreeMap<String, BTreeSet<ElementPath>> {
        let mut by_name: BTreeMap<String, BTreeSet<ElementPath>> = BTreeMap::new();
        for f in all_features(model, class) {
            if !f.feature.name.is_empty() {
                by_name.entry(f.feature.name.clone()).or_default().insert(f.path);
            }
        }
        by_name.retain(|_, v| v.len() > 1);
        by_name
    };
    let mut cache: BTreeMap<ElementPath, BTreeMap<String, BTreeSet<ElementPath>>> = BTreeMap::new();
    let classes: Vec<ElementPath> = model.classes().map(|(p, _)| p.clone()).collect();
    for class in &classes {
        cache.insert(class.clone(), collisions(class));
    }
    for class in &classes {
        let supers = model.direct_super_types(class);
        for (name, paths) in &cache[class] {
            // already reported on a supertype that has exactly this collision
            let inherited = supers.iter().any(|s| {
                cache.get(s).and_then(|m| m.get(name)) == Some(paths)
                    && !super_closure(model, s).ancestors.contains(class)
            });
            if inherited {
                continue;
            }
            let listing = paths.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
            out.push(
                catalog::diagnostic(
                    "SYN-004",
                    class.clone(),
                    format!("feature name `{name}` is not unique in `{}`: {listing}", class.name()),
                )
                .with_related(paths.iter().cloned()),
            );
        }
    }
    out
}

/// SYN-006 for data types with a missing or unknown instance type and SYN-007
/// for features without a type. Unresolved references (SYN-005) come from
/// type resolution.
pub fn check_references(model: &EcoreModel, builtins: &BuiltinRegistry) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (path, element) in model.elements() {
        match element {
            ElementRef::Classifier(EClassifier::DataType(d)) => match d.effective_instance_type() {
                None => out.push(catalog::diagnostic(
                    "SYN-006",
                    path.clone(),
                    format!("data type `{}` has no instance type name", d.name),
                )),
                Some(t) if !builtins.is_known_instance_type(t) => out.push(catalog::diagnostic(
                    "SYN-006",
                    path.clone(),
                    format!("data type `{}` has unknown instance type `{t}`", d.name),
                )),
                Some(_) => {}
            },
            ElementRef::Feature(f) if f.e_type.is_none() => out.push(catalog::diagnostic(
                "SYN-007",
                path.clone(),
                format!("feature `{}` has no eType", f.name),
            )),
            _ => {}
        }
    }
    out
}

/// SEM-004 once per distinct set of classes forming an inheritance cycle.
/// Each class contributes the shortest cycle through it.
pub fn check_circular_inheritance(model: &EcoreModel) -> Vec<Diagnostic> {
    let classes: Vec<&ElementPath> = model.classes().map(|(p, _)| p).collect();
    let index: HashMap<&ElementPath, usize> = classes.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let supers: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| {
            model
                .direct_super_types(c)
                .iter()
                .filter_map(|s| index.get(s).copied())
                .collect()
        })
        .collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for (start, class) in classes.iter().enumerate() {
        let Some(cycle) = shortest_cycle(&supers, start) else {
            continue;
        };
        let mut members = cycle.clone();
        members.sort_unstable();
        if !seen.insert(members) {
            continue;
        }
        let chain = cycle
            .iter()
            .chain(std::iter::once(&cycle[0]))
            .map(|&i| classes[i].name())
            .collect::<Vec<_>>()
            .join(" -> ");
        out.push(
            catalog::diagnostic("SEM-004", (*class).clone(), format!("circular inheritance: {chain}"))
                .with_related(cycle.iter().map(|&i| classes[i].clone())),
        );
    }
    out
}

/// Shortest cycle through `start` in supertype order, by breadth-first search.
fn shortest_cycle(supers: &[Vec<usize>], start: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; supers.len()];
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        for &sup in &supers[node] {
            if sup == start {
                let mut cycle = vec![node];
                let mut cur = node;
                while cur != start {
                    cur = parent[cur];
                    cycle.push(cur);
                }
                cycle.reverse();
                return Some(cycle);
            }
            if parent[sup] == usize::MAX {
                parent[sup] = node;
                queue.push_back(sup);
            }
        }
    }
    None
}

/// SEM-001 (abstract class without subclasses), SEM-002 (frozen required
/// feature without default) and SEM-003 (concrete class with nothing in it).
pub fn check_satisfiability(model: &EcoreModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut has_subclass: BTreeSet<ElementPath> = BTreeSet::new();
    for (class, _) in model.classes() {
        has_subclass.extend(model.direct_super_types(class).into_iter().filter(|s| s != class));
    }
    for (path, element) in model.elements() {
        match element {
            ElementRef::Classifier(EClassifier::Class(c)) => {
                if c.is_abstract && !has_subclass.contains(path) {
                    out.push(catalog::diagnostic(
                        "SEM-001",
                        path.clone(),
                        format!("abstract class `{}` is never inherited", c.name),
                    ));
                }
                if !c.is_abstract {
                    let closure = super_closure(model, path);
                    let owners = std::iter::once(path).chain(closure.ancestors.iter());
                    let empty = owners
                        .filter_map(|p| model.class(p))
                        .all(|k| k.features.is_empty() && k.operations.is_empty());
                    if empty {
                        out.push(catalog::diagnostic(
                            "SEM-003",
                            path.clone(),
                            format!("class `{}` has no features and no operations", c.name),
                        ));
                    }
                }
            }
            ElementRef::Feature(f) => {
                if !f.changeable && f.lower_bound >= 1 && f.default_value_literal.is_none() {
                    out.push(catalog::diagnostic(
                        "SEM-002",
                        path.clone(),
                        format!(
                            "feature `{}` is unchangeable and required but has no default value, so no valid instance can set it",
                            f.name
                        ),
                    ));
                }
            }
            _ => {}
        }
    }
    out
}

/// PRA-001 for annotations whose source names OCL.
pub fn check_ocl_annotations(model: &EcoreModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (path, element) in model.elements() {
        for a in element.annotations() {
            if a.source.to_ascii_lowercase().contains("ocl") {
                out.push(catalog::diagnostic(
                    "PRA-001",
                    path.clone(),
                    format!("annotation `{}` carries OCL constraints that are not evaluated", a.source),
                ));
            }
        }
    }
    out
}
