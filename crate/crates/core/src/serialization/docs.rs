//! Markdown reference documentation from GenModel `documentation` annotations.

use std::fmt::Write;

use crate::metamodel::{documentation, ElementPath, ElementRef, EcoreModel};

/// One section per documented classifier (members documented under it) and
/// an appendix listing every element without documentation.
pub fn export_docs(model: &EcoreModel) -> String {
    let mut out = String::new();
    let root = model.root();
    let _ = writeln!(out, "# {}\n", root.name);
    if let Some(doc) = documentation(&root.annotations) {
        let _ = writeln!(out, "{}\n", doc.trim());
    }
    let mut undocumented: Vec<&ElementPath> = Vec::new();
    let paths: Vec<(&ElementPath, ElementRef<'_>)> = model.elements().collect();
    for (i, (path, element)) in paths.iter().enumerate() {
        let doc = documentation(element.annotations());
        if doc.is_none() {
            undocumented.push(path);
        }
        if let ElementRef::Package(p) = element {
            if *path != &model.root_path() {
                if let Some(d) = documentation(&p.annotations) {
                    let _ = writeln!(out, "## Package {}\n\n{}\n", path, d.trim());
                }
            }
            continue;
        }
        if !path.kind().is_classifier() {
            continue;
        }
        let members: Vec<&(&ElementPath, ElementRef<'_>)> = paths[i + 1..]
            .iter()
            .take_while(|(p, _)| p.starts_with(path) && p.depth() > path.depth())
            .filter(|(p, e)| p.depth() == path.depth() + 1 && documentation(e.annotations()).is_some())
            .collect();
        if doc.is_none() && members.is_empty() {
            continue;
        }
        let _ = writeln!(out, "## {}\n", element.name());
        let _ = writeln!(out, "*{} `{}`*\n", path.kind().metaclass(), path);
        if let Some(d) = doc {
            let _ = writeln!(out, "{}\n", d.trim());
        }
        for (mp, me) in members {
            let _ = writeln!(out, "### {}\n", mp.segments().last().expect("non-root").base_text());
            let _ = writeln!(out, "{}\n", documentation(me.annotations()).unwrap_or("").trim());
        }
    }
    out.push_str("## Undocumented elements\n\n");
    if undocumented.is_empty() {
        out.push_str("None.\n");
    }
    for p in undocumented {
        let _ = writeln!(out, "- `{p}` ({})", p.kind().metaclass());
    }
    out
}
