use std::collections::BTreeSet;
use std::str::FromStr;

use regex::Regex;
use thiserror::Error;

use super::{super_closure, ElementKind, ElementPath, EcoreModel};

/// Selection queries for isolating parts of a model.
#[derive(Debug, Clone)]
pub enum FilterQuery {
    /// The class and all its transitive supertypes.
    SupertypesOf(String),
    /// The class and every class that transitively inherits from it.
    SubtypesOf(String),
    /// The class, the classifiers its references point to, and the classes
    /// with a reference to it.
    RelatedByReference(String),
    /// All classifiers of one kind.
    ByKind(ElementKind),
    /// Every element whose name matches the regular expression.
    ByNamePattern(Regex),
}

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("no class at `{0}`")]
    MissingAnchor(String),
    #[error("invalid filter query `{0}`: expected supertypes-of:PATH, subtypes-of:PATH, related:PATH, kind:EClass|EEnum|EDataType or name:REGEX")]
    BadQuery(String),
    #[error("invalid name pattern: {0}")]
    BadPattern(#[from] regex::Error),
}

impl FromStr for FilterQuery {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (op, arg) = s
            .split_once(':')
            .ok_or_else(|| FilterError::BadQuery(s.to_string()))?;
        Ok(match op {
            "supertypes-of" => FilterQuery::SupertypesOf(arg.to_string()),
            "subtypes-of" => FilterQuery::SubtypesOf(arg.to_string()),
            "related" | "related-by-reference" => FilterQuery::RelatedByReference(arg.to_string()),
            "kind" => match ElementKind::from_metaclass(arg) {
                Some(k) if k.is_classifier() => FilterQuery::ByKind(k),
                _ => return Err(FilterError::BadQuery(s.to_string())),
            },
            "name" => FilterQuery::ByNamePattern(Regex::new(arg)?),
            _ => return Err(FilterError::BadQuery(s.to_string())),
        })
    }
}

fn anchor(model: &EcoreModel, text: &str) -> Result<ElementPath, FilterError> {
    model
        .path_from_str(text)
        .filter(|p| model.class(p).is_some())
        .ok_or_else(|| FilterError::MissingAnchor(text.to_string()))
}

/// Paths of the elements selected by `query`.
pub fn filter_selection(
    model: &EcoreModel,
    query: &FilterQuery,
) -> Result<BTreeSet<ElementPath>, FilterError> {
    let mut out = BTreeSet::new();
    match query {
        FilterQuery::SupertypesOf(a) => {
            let a = anchor(model, a)?;
            out.extend(super_closure(model, &a).ancestors);
            out.insert(a);
        }
        FilterQuery::SubtypesOf(a) => {
            let a = anchor(model, a)?;
            for (p, _) in model.classes() {
                if super_closure(model, p).ancestors.contains(&a) {
                    out.insert(p.clone());
                }
            }
            out.insert(a);
        }
        FilterQuery::RelatedByReference(a) => {
            let a = anchor(model, a)?;
            for fpath in model.feature_paths(&a) {
                let f = model.feature(&fpath).expect("indexed");
                if let Some(t) = f.e_type.as_ref().filter(|_| f.is_reference()) {
                    if let Some(target) = t.local_target() {
                        out.insert(target.clone());
                    }
                }
            }
            for (p, _) in model.classes() {
                let points_here = model.feature_paths(p).iter().any(|fp| {
                    let f = model.feature(fp).expect("indexed");
                    f.is_reference()
                        && f.e_type.as_ref().and_then(|t| t.local_target()) == Some(&a)
                });
                if points_here {
                    out.insert(p.clone());
                }
            }
            out.insert(a);
        }
        FilterQuery::ByKind(kind) => {
            out.extend(model.paths().filter(|p| p.kind() == *kind).cloned());
        }
        FilterQuery::ByNamePattern(re) => {
            out.extend(model.paths().filter(|p| re.is_match(p.name())).cloned());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metamodel::{
        resolve_types, BuiltinRegistry, EClass, EClassifier, EEnum, EPackage, EStructuralFeature,
        TypeRef,
    };

    fn shop() -> EcoreModel {
        let mut pkg = EPackage::new("shop", "http://shop", "shop");
        let mut order = EClass::new("Order");
        order
            .features
            .push(EStructuralFeature::reference("customer", TypeRef::new("#//Customer")));
        let mut invoice = EClass::new("Invoice");
        invoice
            .features
            .push(EStructuralFeature::reference("order", TypeRef::new("#//Order")));
        pkg.classifiers.push(EClassifier::Class(order));
        pkg.classifiers.push(EClassifier::Class(EClass::new("Customer")));
        pkg.classifiers.push(EClassifier::Class(invoice));
        pkg.classifiers.push(EClassifier::Class(EClass::new("Unrelated")));
        pkg.classifiers.push(EClassifier::Enum(EEnum {
            name: "Status".into(),
            ..EEnum::default()
        }));
        let mut m = EcoreModel::new(pkg, "mem:");
        resolve_types(&mut m, &BuiltinRegistry::standard());
        m
    }

    fn names(set: &BTreeSet<ElementPath>) -> BTreeSet<&str> {
        set.iter().map(|p| p.name()).collect()
    }

    #[test]
    fn related_by_reference() {
        let m = shop();
        let q: FilterQuery = "related:/shop/Order".parse().unwrap();
        let got = filter_selection(&m, &q).unwrap();
        assert_eq!(names(&got), BTreeSet::from(["Order", "Customer", "Invoice"]));
    }

    #[test]
    fn by_kind_enum() {
        let m = shop();
        let got = filter_selection(&m, &FilterQuery::ByKind(ElementKind::Enum)).unwrap();
        assert_eq!(names(&got), BTreeSet::from(["Status"]));
    }

    #[test]
    fn missing_anchor_is_an_error() {
        let m = shop();
        let err = filter_selection(&m, &"supertypes-of:/shop/Ghost".parse().unwrap()).unwrap_err();
        assert!(err.to_string().contains("/shop/Ghost"));
    }

    #[test]
    fn bad_queries_rejected() {
        assert!("nonsense".parse::<FilterQuery>().is_err());
        assert!("kind:EAttribute".parse::<FilterQuery>().is_err());
        assert!("name:(".parse::<FilterQuery>().is_err());
    }
}
