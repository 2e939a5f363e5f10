//! SVG rendering of a laid-out diagram.

use std::fmt::Write;

use super::xml::{escape_attr, escape_text};
use crate::layout::{bounding_box, EdgeKind, LayoutModel};
use crate::metamodel::{parse_ref, EClassifier, EcoreModel};

const LINE_HEIGHT: f64 = 14.0;

const STYLE: &str = "\
.class-box { fill: #fffbe6; stroke: #333; stroke-width: 1; }
.class-name { font: bold 12px sans-serif; }
.feature { font: 11px sans-serif; }
.edge-reference { fill: none; stroke: #333; stroke-width: 1; }
.edge-supertype { fill: none; stroke: #1f5fbf; stroke-width: 2.5; }
.label { fill: none; stroke: #999; stroke-dasharray: 2 2; }";

fn type_name(raw: &str) -> &str {
    let frag = parse_ref(raw).fragment;
    frag.rsplit('/').next().unwrap_or(frag)
}

fn bounds(lower: i64, upper: i64) -> String {
    let up = if upper == -1 { "*".to_string() } else { upper.to_string() };
    if (lower, upper) == (0, 1) {
        String::new()
    } else {
        format!(" [{lower}..{up}]")
    }
}

/// One box with name and members per laid-out classifier and one polyline
/// per edge, supertype edges styled apart from references. Layout entries
/// naming no model element are skipped.
pub fn export_svg(model: &EcoreModel, layout: &LayoutModel) -> String {
    let (x0, y0, x1, y1) = bounding_box(layout).unwrap_or((0.0, 0.0, 0.0, 0.0));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{x0} {y0} {} {}\">",
        x1 - x0,
        y1 - y0,
        x1 - x0,
        y1 - y0
    );
    let _ = writeln!(out, "<style>\n{STYLE}\n</style>");
    for node in &layout.nodes {
        let Some(path) = model.path_from_str(&node.path) else {
            continue;
        };
        let Some(classifier) = model.classifier(&path) else {
            continue;
        };
        let _ = writeln!(out, "<g class=\"node\" data-path=\"{}\">", escape_attr(&node.path));
        let _ = writeln!(
            out,
            "  <rect class=\"class-box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
            node.x, node.y, node.w, node.h
        );
        let title = match classifier {
            EClassifier::Class(c) if c.is_interface => format!("«interface» {}", c.name),
            EClassifier::Class(c) if c.is_abstract => format!("«abstract» {}", c.name),
            EClassifier::Enum(e) => format!("«enum» {}", e.name),
            EClassifier::DataType(d) => format!("«datatype» {}", d.name),
            EClassifier::Class(c) => c.name.clone(),
        };
        let _ = writeln!(
            out,
            "  <text class=\"class-name\" x=\"{}\" y=\"{}\">{}</text>",
            node.x + 4.0,
            node.y + LINE_HEIGHT,
            escape_text(&title)
        );
        let members: Vec<String> = match classifier {
            EClassifier::Class(c) => c
                .features
                .iter()
                .map(|f| {
                    let t = f.e_type.as_ref().map(|t| type_name(&t.raw)).unwrap_or("?");
                    format!("{} : {t}{}", f.name, bounds(f.lower_bound, f.upper_bound))
                })
                .chain(c.operations.iter().map(|o| format!("{}()", o.name)))
                .collect(),
            EClassifier::Enum(e) => e.literals.iter().map(|l| l.name.clone()).collect(),
            EClassifier::DataType(_) => Vec::new(),
        };
        for (i, m) in members.iter().enumerate() {
            let _ = writeln!(
                out,
                "  <text class=\"feature\" x=\"{}\" y=\"{}\">{}</text>",
                node.x + 4.0,
                node.y + LINE_HEIGHT * (i as f64 + 2.0),
                escape_text(m)
            );
        }
        out.push_str("</g>\n");
    }
    for edge in &layout.edges {
        if model.path_from_str(&edge.path).is_none() {
            continue;
        }
        let class = match edge.kind {
            EdgeKind::Reference => "edge-reference",
            EdgeKind::Supertype => "edge-supertype",
        };
        let points = edge
            .points
            .iter()
            .map(|p| format!("{},{}", p.x, p.y))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            "<polyline class=\"{class}\" data-path=\"{}\" points=\"{points}\"/>",
            escape_attr(&edge.path)
        );
        if let Some(l) = &edge.label {
            let _ = writeln!(
                out,
                "<rect class=\"label\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                l.x, l.y, l.w, l.h
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
