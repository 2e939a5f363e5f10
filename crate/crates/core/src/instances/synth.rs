use thiserror::Error;

use super::{conforms, features_by_name, resolved, value_type, InstanceObject, ValueType};
use crate::metamodel::{super_closure, BuiltinRegistry, EcoreModel, ElementPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Deepest chain of required containments followed.
    pub max_depth: usize,
    /// Upper limit on objects plus attribute values created.
    pub max_size: usize,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            max_depth: 100,
            max_size: 100_000,
        }
    }
}

/// Why no finite instance meeting every lower bound exists for a root class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Unsatisfiable {
    #[error("`{0}` is not a class of this metamodel")]
    NotAClass(ElementPath),
    #[error("class `{0}` is abstract")]
    AbstractRoot(ElementPath),
    #[error("`{feature}` requires an object of `{target}`, which has no concrete class")]
    NoConcreteClass { feature: ElementPath, target: String },
    #[error("`{0}` is unchangeable and required but has no default value")]
    FrozenRequired(ElementPath),
    #[error("`{0}` requires values but its type is not usable")]
    UnusableType(ElementPath),
    #[error("`{0}` has bounds no value count can meet")]
    BadBounds(ElementPath),
    #[error("required containment through `{feature}` does not terminate within depth {depth}")]
    DepthExceeded { feature: ElementPath, depth: usize },
    #[error("a minimal instance would exceed {0} objects and values")]
    TooLarge(usize),
    #[error("`{feature}` needs {needed} distinct target object(s) but the instance has {available}")]
    MissingTargets {
        feature: ElementPath,
        needed: usize,
        available: usize,
    },
}

struct Pending {
    owner: String,
    feature: String,
    path: ElementPath,
    target: ValueType<'static>,
    needed: usize,
}

struct Builder<'m> {
    model: &'m EcoreModel,
    builtins: BuiltinRegistry,
    options: SynthesisOptions,
    size: usize,
    pending: Vec<Pending>,
}

impl Builder<'_> {
    fn concrete(&self, target: &ValueType<'_>) -> Option<ElementPath> {
        match target {
            ValueType::Class(t) if self.model.class(t).is_some_and(|c| c.is_instantiable()) => Some(t.clone()),
            ValueType::Class(t) => self
                .model
                .classes()
                .find(|(p, c)| c.is_instantiable() && super_closure(self.model, p).ancestors.contains(t))
                .map(|(p, _)| p.clone()),
            ValueType::AnyObject => self
                .model
                .classes()
                .find(|(_, c)| c.is_instantiable())
                .map(|(p, _)| p.clone()),
            _ => None,
        }
    }

    fn grow(&mut self, n: usize) -> Result<(), Unsatisfiable> {
        self.size += n;
        if self.size > self.options.max_size {
            return Err(Unsatisfiable::TooLarge(self.options.max_size));
        }
        Ok(())
    }

    fn build(&mut self, class: ElementPath, ipath: &str, depth: usize) -> Result<InstanceObject, Unsatisfiable> {
        self.grow(1)?;
        let model = self.model;
        let mut obj = InstanceObject::new(class.clone());
        for (f, fpath) in features_by_name(model, &class) {
            if f.derived || f.lower_bound < 1 {
                continue;
            }
            if f.upper_bound >= 0 && f.upper_bound < f.lower_bound {
                return Err(Unsatisfiable::BadBounds(fpath));
            }
            if !f.changeable && f.default_value_literal.is_none() {
                return Err(Unsatisfiable::FrozenRequired(fpath));
            }
            let n = usize::try_from(f.lower_bound).unwrap_or(usize::MAX);
            let ty = value_type(model, &self.builtins, f);
            if f.is_containment() {
                let Some(concrete) = self.concrete(&ty) else {
                    return Err(match ty {
                        ValueType::Class(t) => Unsatisfiable::NoConcreteClass {
                            feature: fpath,
                            target: t.to_string(),
                        },
                        _ => Unsatisfiable::UnusableType(fpath),
                    });
                };
                if depth + 1 > self.options.max_depth {
                    return Err(Unsatisfiable::DepthExceeded {
                        feature: fpath,
                        depth: self.options.max_depth,
                    });
                }
                for i in 0..n {
                    let child_path = super::child_path(ipath, &f.name, i);
                    let child = self.build(concrete.clone(), &child_path, depth + 1)?;
                    obj.children.push((f.name.clone(), child));
                }
            } else if f.is_reference() {
                let target = match ty {
                    ValueType::Class(t) => ValueType::Class(t),
                    ValueType::AnyObject => ValueType::AnyObject,
                    _ => return Err(Unsatisfiable::UnusableType(fpath)),
                };
                self.pending.push(Pending {
                    owner: ipath.to_string(),
                    feature: f.name.clone(),
                    path: fpath,
                    target,
                    needed: n,
                });
            } else {
                let literal = match &ty {
                    ValueType::Enum(e) => match f.default_value_literal.as_deref() {
                        Some(d) if e.accepts(d) => d.to_string(),
                        _ => match e.literals.first() {
                            Some(l) => l.text().to_string(),
                            None => return Err(Unsatisfiable::UnusableType(fpath)),
                        },
                    },
                    ValueType::Data(kind) => match f.default_value_literal.as_deref() {
                        Some(d) if kind.accepts(d) => d.to_string(),
                        _ => kind.default_literal().to_string(),
                    },
                    ValueType::Unknown => f.default_value_literal.clone().unwrap_or_default(),
                    ValueType::Class(_) | ValueType::AnyObject => {
                        return Err(Unsatisfiable::UnusableType(fpath))
                    }
                };
                self.grow(n)?;
                for _ in 0..n {
                    obj.push_attribute(&f.name, literal.clone());
                }
            }
        }
        Ok(obj)
    }
}

fn object_at<'a>(root: &'a mut InstanceObject, ipath: &str) -> &'a mut InstanceObject {
    if ipath == "/" {
        return root;
    }
    let mut cur = root;
    for step in ipath.trim_start_matches('/').split('/') {
        let (feature, index) = step
            .trim_start_matches('@')
            .rsplit_once('.')
            .expect("paths built by child_path");
        let index: usize = index.parse().expect("numeric index");
        cur = cur
            .children
            .iter_mut()
            .filter(|(f, _)| f == feature)
            .nth(index)
            .map(|(_, c)| c)
            .expect("path exists");
    }
    cur
}

/// [`synthesize_minimal_instance_with`] using default options.
pub fn synthesize_minimal_instance(
    model: &EcoreModel,
    root: &ElementPath,
) -> Result<InstanceObject, Unsatisfiable> {
    synthesize_minimal_instance_with(model, root, &SynthesisOptions::default())
}

/// Builds a smallest instance rooted at `root` meeting every lower bound:
/// required attributes get their default value literal when valid, else the
/// type's default (`0`, `false`, `0.0`, empty text, first enum literal);
/// required containments get the target class itself when concrete, else the
/// first concrete subclass in declaration order; required cross-references
/// point at distinct conforming objects of the tree, in preorder.
pub fn synthesize_minimal_instance_with(
    model: &EcoreModel,
    root: &ElementPath,
    options: &SynthesisOptions,
) -> Result<InstanceObject, Unsatisfiable> {
    let model = resolved(model);
    let Some(class) = model.class(root) else {
        return Err(Unsatisfiable::NotAClass(root.clone()));
    };
    if !class.is_instantiable() {
        return Err(Unsatisfiable::AbstractRoot(root.clone()));
    }
    let mut builder = Builder {
        model: &model,
        builtins: BuiltinRegistry::standard(),
        options: *options,
        size: 0,
        pending: Vec::new(),
    };
    let mut tree = builder.build(root.clone(), "/", 0)?;
    let pending = std::mem::take(&mut builder.pending);
    let catalogue: Vec<(String, ElementPath)> = tree
        .objects()
        .into_iter()
        .map(|(p, o)| (p, o.eclass.clone()))
        .collect();
    for p in pending {
        let targets: Vec<&String> = catalogue
            .iter()
            .filter(|(_, c)| conforms(&model, c, &p.target))
            .map(|(path, _)| path)
            .collect();
        if targets.len() < p.needed {
            return Err(Unsatisfiable::MissingTargets {
                feature: p.path,
                needed: p.needed,
                available: targets.len(),
            });
        }
        let owner = object_at(&mut tree, &p.owner);
        for t in targets.into_iter().take(p.needed) {
            owner.push_cross_ref(&p.feature, t.clone());
        }
    }
    tree.canonicalize();
    Ok(tree)
}
