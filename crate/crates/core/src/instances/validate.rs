use std::collections::HashSet;

use super::{conforms, features_by_name, resolved, value_type, InstanceObject, ValueType};
use crate::diagnostic::Diagnostic;
use crate::metamodel::{BuiltinRegistry, EcoreModel};
use crate::rules::catalog;

/// Structural checks of an instance tree against its metamodel (INS-001 to
/// INS-005). Findings are attached to the metamodel element concerned and
/// name the instance path in the message. Derived features are not checked
/// for multiplicity. Cross-references must name an object of this document
/// whose class conforms to the reference type.
pub fn validate_instance(instance: &InstanceObject, model: &EcoreModel) -> Vec<Diagnostic> {
    let model = resolved(model);
    let builtins = BuiltinRegistry::standard();
    let objects = instance.objects();
    let mut out = Vec::new();
    for (ipath, obj) in &objects {
        let Some(class) = model.class(&obj.eclass) else {
            out.push(catalog::diagnostic(
                "INS-005",
                model.root_path(),
                format!("{ipath}: `{}` is not a class of this metamodel", obj.eclass),
            ));
            continue;
        };
        if !class.is_instantiable() {
            out.push(catalog::diagnostic(
                "INS-001",
                obj.eclass.clone(),
                format!("{ipath}: class `{}` is abstract and cannot be instantiated", class.name),
            ));
        }
        let features = features_by_name(&model, &obj.eclass);
        let mut named: Vec<&str> = Vec::new();
        named.extend(obj.attribute_values.iter().map(|(n, _)| n.as_str()));
        named.extend(obj.cross_refs.iter().map(|(n, _)| n.as_str()));
        named.extend(obj.children.iter().map(|(n, _)| n.as_str()));
        let mut reported = HashSet::new();
        for name in named {
            if !features.iter().any(|(f, _)| f.name == name) && reported.insert(name) {
                out.push(catalog::diagnostic(
                    "INS-005",
                    obj.eclass.clone(),
                    format!("{ipath}: class `{}` has no feature `{name}`", class.name),
                ));
            }
        }

        for (f, fpath) in &features {
            let count = obj.value_count(&f.name);
            if !f.derived {
                let upper_ok = f.upper_bound < 0 || count as i64 <= f.upper_bound;
                if (count as i64) < f.lower_bound || !upper_ok {
                    let up = if f.upper_bound < 0 { "*".to_string() } else { f.upper_bound.to_string() };
                    out.push(catalog::diagnostic(
                        "INS-002",
                        fpath.clone(),
                        format!(
                            "{ipath}: `{}` has {count} value(s), expected [{}..{up}]",
                            f.name, f.lower_bound
                        ),
                    ));
                }
            }
            let ty = value_type(&model, &builtins, f);
            for v in obj.attribute(&f.name).unwrap_or_default() {
                match &ty {
                    ValueType::Enum(e) if !e.accepts(v) => {
                        let names: Vec<&str> = e.literals.iter().map(|l| l.text()).collect();
                        out.push(catalog::diagnostic(
                            "INS-004",
                            fpath.clone(),
                            format!("{ipath}: `{v}` is not a literal of `{}` ({})", e.name, names.join(", ")),
                        ));
                    }
                    ValueType::Data(kind) if !kind.accepts(v) => out.push(catalog::diagnostic(
                        "INS-003",
                        fpath.clone(),
                        format!("{ipath}: `{v}` is not a valid {kind:?} value for `{}`", f.name),
                    )),
                    ValueType::Class(_) | ValueType::AnyObject => out.push(catalog::diagnostic(
                        "INS-003",
                        fpath.clone(),
                        format!("{ipath}: `{}` holds objects, not text", f.name),
                    )),
                    _ => {}
                }
            }
            for (name, child) in &obj.children {
                if name == &f.name && (!f.is_containment() || !conforms(&model, &child.eclass, &ty)) {
                    out.push(catalog::diagnostic(
                        "INS-003",
                        fpath.clone(),
                        format!(
                            "{ipath}: an object of class `{}` cannot be contained in `{}`",
                            child.eclass.name(),
                            f.name
                        ),
                    ));
                }
            }
            for target in obj.cross_refs.iter().filter(|(n, _)| n == &f.name).flat_map(|(_, v)| v) {
                let problem = if f.is_containment() {
                    Some("contained objects must be nested, not referenced".to_string())
                } else {
                    match objects.iter().find(|(p, _)| p == target) {
                        None => Some(format!("no object `{target}` in this document")),
                        Some((_, t)) if !conforms(&model, &t.eclass, &ty) => Some(format!(
                            "`{target}` is a `{}`, which `{}` cannot reference",
                            t.eclass.name(),
                            f.name
                        )),
                        Some(_) => None,
                    }
                };
                if let Some(p) = problem {
                    out.push(catalog::diagnostic("INS-003", fpath.clone(), format!("{ipath}: {p}")));
                }
            }
        }
    }
    out
}
