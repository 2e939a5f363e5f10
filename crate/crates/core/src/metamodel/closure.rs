use std::collections::{HashMap, HashSet, VecDeque};

use super::{EStructuralFeature, ElementPath, EcoreModel};

/// Transitive supertypes of a class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuperClosure {
    /// Depth-first in declaration order, first visit wins; never contains the
    /// class itself.
    pub ancestors: Vec<ElementPath>,
    /// Shortest inheritance path from the class back to itself, starting with
    /// the class, when it lies on a cycle.
    pub cycle: Option<Vec<ElementPath>>,
}

/// Computes the supertype closure of `class`. Terminates on cyclic graphs;
/// unresolved supertypes are skipped.
pub fn super_closure(model: &EcoreModel, class: &ElementPath) -> SuperClosure {
    let mut ancestors = Vec::new();
    let mut seen: HashSet<ElementPath> = HashSet::new();
    seen.insert(class.clone());
    // explicit stack of pending supertype lists keeps preorder without recursion
    let mut stack: Vec<std::vec::IntoIter<ElementPath>> =
        vec![model.direct_super_types(class).into_iter()];
    while let Some(top) = stack.last_mut() {
        match top.next() {
            Some(next) => {
                if seen.insert(next.clone()) {
                    stack.push(model.direct_super_types(&next).into_iter());
                    ancestors.push(next);
                }
            }
            None => {
                stack.pop();
            }
        }
    }
    SuperClosure {
        ancestors,
        cycle: shortest_cycle(model, class),
    }
}

fn shortest_cycle(model: &EcoreModel, start: &ElementPath) -> Option<Vec<ElementPath>> {
    let mut parent: HashMap<ElementPath, ElementPath> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(start.clone());
    let mut visited: HashSet<ElementPath> = HashSet::new();
    while let Some(node) = queue.pop_front() {
        for sup in model.direct_super_types(&node) {
            if &sup == start {
                let mut cycle = vec![node.clone()];
                let mut cur = node;
                while &cur != start {
                    cur = parent[&cur].clone();
                    cycle.push(cur.clone());
                }
                cycle.reverse();
                return Some(cycle);
            }
            if visited.insert(sup.clone()) {
                parent.insert(sup.clone(), node.clone());
                queue.push_back(sup);
            }
        }
    }
    None
}

/// A feature as seen from some class: the feature, its path and its owner.
#[derive(Debug, Clone)]
pub struct OwnedFeature<'a> {
    pub feature: &'a EStructuralFeature,
    pub path: ElementPath,
    pub owner: ElementPath,
}

/// Own features first, then those of each ancestor in closure order.
/// Same-named features are all kept.
pub fn all_features<'a>(model: &'a EcoreModel, class: &ElementPath) -> Vec<OwnedFeature<'a>> {
    let mut owners = vec![class.clone()];
    owners.extend(super_closure(model, class).ancestors);
    owners
        .into_iter()
        .flat_map(|owner| {
            model
                .feature_paths(&owner)
                .into_iter()
                .map(move |path| (owner.clone(), path))
        })
        .map(|(owner, path)| OwnedFeature {
            feature: model.feature(&path).expect("feature path is indexed"),
            path,
            owner,
        })
        .collect()
}
