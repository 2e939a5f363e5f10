use std::collections::BTreeSet;

use regex::{NoExpand, Regex, RegexBuilder};
use serde::Serialize;
use thiserror::Error;

use crate::metamodel::{
    resolve_types, BuiltinRegistry, EClassifier, ElementKind, ElementMut, ElementPath,
    ElementRef, EcoreModel, RefTarget, TypeRef,
};

/// Which text fields a replacement may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ReplaceField {
    Name,
    /// `instanceClassName` and `instanceTypeName` of data types.
    InstanceType,
    DefaultValueLiteral,
    /// Values of annotation details.
    AnnotationValue,
}

impl std::str::FromStr for ReplaceField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "name" => ReplaceField::Name,
            "instance-type" | "instanceTypeName" => ReplaceField::InstanceType,
            "default" | "defaultValueLiteral" => ReplaceField::DefaultValueLiteral,
            "annotation" | "annotations" => ReplaceField::AnnotationValue,
            other => return Err(format!("unknown field `{other}`: expected name, instance-type, default or annotation")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplaceScope {
    /// Element kinds to touch; empty means all.
    pub kinds: BTreeSet<ElementKind>,
    pub fields: BTreeSet<ReplaceField>,
}

impl Default for ReplaceScope {
    fn default() -> Self {
        ReplaceScope {
            kinds: BTreeSet::new(),
            fields: BTreeSet::from([ReplaceField::Name]),
        }
    }
}

impl ReplaceScope {
    pub fn names_of(kinds: impl IntoIterator<Item = ElementKind>) -> Self {
        ReplaceScope {
            kinds: kinds.into_iter().collect(),
            ..ReplaceScope::default()
        }
    }

    fn covers(&self, kind: ElementKind, field: ReplaceField) -> bool {
        (self.kinds.is_empty() || self.kinds.contains(&kind)) && self.fields.contains(&field)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplaceOptions {
    pub case_sensitive: bool,
    /// Treat the pattern as a regular expression; `$1` etc. expand in the
    /// replacement.
    pub regex: bool,
    pub dry_run: bool,
}

impl Default for ReplaceOptions {
    fn default() -> Self {
        ReplaceOptions {
            case_sensitive: true,
            regex: false,
            dry_run: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rename {
    pub path: ElementPath,
    /// The attribute name, e.g. `name`, or `details.KEY` for an annotation detail.
    pub field: String,
    pub old: String,
    pub new: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ChangeSet {
    pub renames: Vec<Rename>,
}

impl ChangeSet {
    pub fn is_empty(&self) -> bool {
        self.renames.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplaceError {
    #[error("the search pattern is empty")]
    EmptyPattern,
    #[error("invalid regular expression: {0}")]
    BadRegex(String),
}

struct Replacer {
    re: Regex,
    replacement: String,
    expand: bool,
}

impl Replacer {
    fn apply(&self, text: &str) -> Option<String> {
        if !self.re.is_match(text) {
            return None;
        }
        let out = if self.expand {
            self.re.replace_all(text, self.replacement.as_str()).into_owned()
        } else {
            self.re.replace_all(text, NoExpand(&self.replacement)).into_owned()
        };
        (out != text).then_some(out)
    }
}

fn planned_renames(model: &EcoreModel, r: &Replacer, scope: &ReplaceScope) -> Vec<Rename> {
    let mut out = Vec::new();
    let mut push = |path: &ElementPath, field: &str, old: &str| {
        if let Some(new) = r.apply(old) {
            out.push(Rename {
                path: path.clone(),
                field: field.to_string(),
                old: old.to_string(),
                new,
            });
        }
    };
    for (path, element) in model.elements() {
        let kind = path.kind();
        if scope.covers(kind, ReplaceField::Name) {
            push(path, "name", element.name());
        }
        if scope.covers(kind, ReplaceField::InstanceType) {
            if let ElementRef::Classifier(EClassifier::DataType(d)) = element {
                if let Some(v) = &d.instance_class_name {
                    push(path, "instanceClassName", v);
                }
                if let Some(v) = &d.instance_type_name {
                    push(path, "instanceTypeName", v);
                }
            }
        }
        if scope.covers(kind, ReplaceField::DefaultValueLiteral) {
            if let ElementRef::Feature(f) = element {
                if let Some(v) = &f.default_value_literal {
                    push(path, "defaultValueLiteral", v);
                }
            }
        }
        if scope.covers(kind, ReplaceField::AnnotationValue) {
            for a in element.annotations() {
                for (k, v) in &a.details {
                    push(path, &format!("details.{k}"), v);
                }
            }
        }
    }
    out
}

/// Replaces `pattern` in the selected fields of every in-scope element.
///
/// Renamed classifiers, packages and features keep their incoming references:
/// every reference that resolved to a renamed element is rewritten to its new
/// fragment. Resulting duplicate names are left for the uniqueness rules to
/// report. The input model is never modified; with `dry_run` the returned
/// model equals it.
pub fn search_replace(
    model: &EcoreModel,
    pattern: &str,
    replacement: &str,
    scope: &ReplaceScope,
    options: &ReplaceOptions,
) -> Result<(EcoreModel, ChangeSet), ReplaceError> {
    if pattern.is_empty() && !options.regex {
        return Err(ReplaceError::EmptyPattern);
    }
    let source = if options.regex {
        pattern.to_string()
    } else {
        regex::escape(pattern)
    };
    let re = RegexBuilder::new(&source)
        .case_insensitive(!options.case_sensitive)
        .build()
        .map_err(|e| ReplaceError::BadRegex(e.to_string()))?;
    let replacer = Replacer {
        re,
        replacement: replacement.to_string(),
        expand: options.regex,
    };

    let builtins = BuiltinRegistry::standard();
    let mut resolved = model.clone();
    resolve_types(&mut resolved, &builtins);
    let renames = planned_renames(&resolved, &replacer, scope);
    let changes = ChangeSet { renames };
    if options.dry_run || changes.is_empty() {
        return Ok((model.clone(), changes));
    }

    let mut root = resolved.root().clone();
    for rn in &changes.renames {
        let loc = resolved.locate(&rn.path).expect("planned from this model").clone();
        let mut el = root.element_mut(&loc);
        match rn.field.as_str() {
            "name" => *el.name_mut() = rn.new.clone(),
            "instanceClassName" | "instanceTypeName" | "defaultValueLiteral" => match el {
                ElementMut::Classifier(EClassifier::DataType(d)) => {
                    let slot = if rn.field == "instanceClassName" {
                        &mut d.instance_class_name
                    } else {
                        &mut d.instance_type_name
                    };
                    *slot = Some(rn.new.clone());
                }
                ElementMut::Feature(f) => f.default_value_literal = Some(rn.new.clone()),
                _ => unreachable!("field planned only for matching kinds"),
            },
            field => {
                let key = field.strip_prefix("details.").unwrap_or(field);
                for a in el.annotations_mut() {
                    for (k, v) in &mut a.details {
                        if k == key && *v == rn.old {
                            *v = rn.new.clone();
                        }
                    }
                }
            }
        }
    }

    // same structure, so paths correspond position by position
    let renamed = EcoreModel::new(root, model.source_uri.clone());
    let new_path_of: std::collections::HashMap<ElementPath, ElementPath> = resolved
        .paths()
        .cloned()
        .zip(renamed.paths().cloned())
        .collect();
    let mut old_targets: Vec<Option<ElementPath>> = Vec::new();
    let mut old_root = resolved.root().clone();
    for t in old_root.type_refs_mut() {
        old_targets.push(match &t.resolved {
            Some(RefTarget::Local(p)) => Some(p.clone()),
            _ => None,
        });
    }
    let mut root = renamed.into_root();
    for (t, old) in root.type_refs_mut().into_iter().zip(old_targets) {
        let Some(old) = old else { continue };
        let Some(new) = new_path_of.get(&old) else { continue };
        if old.fragment() != new.fragment() {
            let prefix_end = t.raw.rfind('#').unwrap_or(0);
            *t = TypeRef::new(format!("{}#{}", &t.raw[..prefix_end], new.fragment()));
        }
    }
    let mut out = EcoreModel::new(root, model.source_uri.clone());
    resolve_types(&mut out, &builtins);
    Ok((out, changes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metamodel::{EClass, EPackage, EStructuralFeature};

    fn model() -> EcoreModel {
        let mut pkg = EPackage::new("p", "http://p", "p");
        pkg.classifiers.push(EClassifier::Class(EClass::new("Human")));
        let mut owner = EClass::new("OrderList");
        owner
            .features
            .push(EStructuralFeature::reference("owner", TypeRef::new("#//Human")));
        pkg.classifiers.push(EClassifier::Class(owner));
        EcoreModel::new(pkg, "m")
    }

    #[test]
    fn human_to_person_updates_references() {
        let scope = ReplaceScope::names_of([ElementKind::Class]);
        let (m, cs) = search_replace(&model(), "Human", "Person", &scope, &ReplaceOptions::default()).unwrap();
        assert_eq!(cs.renames.len(), 1);
        let f = m.feature(&m.path_from_str("/p/OrderList/owner").unwrap()).unwrap();
        assert_eq!(f.e_type.as_ref().unwrap().raw, "#//Person");
        let mut check = m.clone();
        assert!(resolve_types(&mut check, &BuiltinRegistry::standard()).is_empty());
    }

    #[test]
    fn regex_with_groups() {
        let opts = ReplaceOptions {
            regex: true,
            ..ReplaceOptions::default()
        };
        let (m, _) = search_replace(&model(), "(.*)List$", "${1}s", &ReplaceScope::default(), &opts).unwrap();
        assert!(m.path_from_str("/p/Orders").is_some());
    }

    #[test]
    fn dry_run_and_no_match_leave_model() {
        let opts = ReplaceOptions {
            dry_run: true,
            ..ReplaceOptions::default()
        };
        let (m, cs) = search_replace(&model(), "Human", "Person", &ReplaceScope::default(), &opts).unwrap();
        assert_eq!(cs.renames.len(), 1);
        assert_eq!(m, model());
        let (m, cs) = search_replace(&model(), "Zebra", "Horse", &ReplaceScope::default(), &ReplaceOptions::default()).unwrap();
        assert!(cs.is_empty());
        assert_eq!(m, model());
    }

    #[test]
    fn case_insensitive() {
        let opts = ReplaceOptions {
            case_sensitive: false,
            ..ReplaceOptions::default()
        };
        let (_, cs) = search_replace(&model(), "human", "Person", &ReplaceScope::default(), &opts).unwrap();
        assert_eq!(cs.renames[0].new, "Person");
    }

    #[test]
    fn bad_patterns() {
        let d = ReplaceOptions::default();
        assert_eq!(search_replace(&model(), "", "x", &ReplaceScope::default(), &d).unwrap_err(), ReplaceError::EmptyPattern);
        let re = ReplaceOptions { regex: true, ..d };
        assert!(matches!(search_replace(&model(), "(", "x", &ReplaceScope::default(), &re), Err(ReplaceError::BadRegex(_))));
    }
}
