//! Diagram layouts and their aesthetics metrics.
//!
//! A layout lives in a JSON sidecar next to the `.ecore` file:
//!
//! ```json
//! {
//!   "nodes": [{"path": "/shop/Order", "x": 0, "y": 0, "w": 120, "h": 60}],
//!   "edges": [{"path": "/shop/Order/customer", "kind": "reference",
//!              "points": [[120, 30], [200, 30]],
//!              "label": {"x": 140, "y": 10, "w": 50, "h": 14}}],
//!   "labels": [{"text": "note", "x": 0, "y": 100, "w": 40, "h": 14}]
//! }
//! ```
//!
//! Coordinates are abstract pixels with y growing downward. Supertype edges
//! carry the path of the subclass.

pub mod geometry;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::metamodel::{ElementPath, EcoreModel};
use crate::rules::catalog;
use geometry::{boxes_overlap, fold_angle, ray_angle_deg, segment_enters_box, segments_cross, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl LayoutBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        LayoutBox { x, y, w, h }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeLayout {
    pub path: String,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl NodeLayout {
    pub fn bounds(&self) -> LayoutBox {
        LayoutBox::new(self.x, self.y, self.w, self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Reference,
    Supertype,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeLayout {
    pub path: String,
    pub kind: EdgeKind,
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<LayoutBox>,
}

impl EdgeLayout {
    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.points.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelLayout {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutModel {
    #[serde(default)]
    pub nodes: Vec<NodeLayout>,
    #[serde(default)]
    pub edges: Vec<EdgeLayout>,
    #[serde(default)]
    pub labels: Vec<LabelLayout>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("layout {field}: {message}")]
pub struct LayoutError {
    /// Location of the offending value, e.g. `edges[2].points`.
    pub field: String,
    pub message: String,
}

/// Parses and validates a layout sidecar.
pub fn parse_layout(text: &str) -> Result<LayoutModel, LayoutError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let layout: LayoutModel = serde_path_to_error::deserialize(de).map_err(|e| LayoutError {
        field: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    layout.validate()?;
    Ok(layout)
}

fn check_box(field: String, x: f64, y: f64, w: f64, h: f64) -> Result<(), LayoutError> {
    if ![x, y, w, h].iter().all(|v| v.is_finite()) {
        return Err(LayoutError {
            field,
            message: "coordinates must be finite".into(),
        });
    }
    if w <= 0.0 || h <= 0.0 {
        return Err(LayoutError {
            field,
            message: format!("width and height must be positive, got {w}x{h}"),
        });
    }
    Ok(())
}

impl LayoutModel {
    pub fn validate(&self) -> Result<(), LayoutError> {
        for (i, n) in self.nodes.iter().enumerate() {
            check_box(format!("nodes[{i}]"), n.x, n.y, n.w, n.h)?;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.points.len() < 2 {
                return Err(LayoutError {
                    field: format!("edges[{i}].points"),
                    message: format!("a polyline needs at least 2 points, got {}", e.points.len()),
                });
            }
            if !e.points.iter().all(|p| p.x.is_finite() && p.y.is_finite()) {
                return Err(LayoutError {
                    field: format!("edges[{i}].points"),
                    message: "coordinates must be finite".into(),
                });
            }
            if let Some(l) = &e.label {
                check_box(format!("edges[{i}].label"), l.x, l.y, l.w, l.h)?;
            }
        }
        for (i, l) in self.labels.iter().enumerate() {
            check_box(format!("labels[{i}]"), l.x, l.y, l.w, l.h)?;
        }
        Ok(())
    }

    /// Label boxes with the edge they belong to: edge labels in edge order,
    /// then free labels.
    pub fn label_boxes(&self) -> Vec<(Option<usize>, LayoutBox)> {
        let mut out: Vec<(Option<usize>, LayoutBox)> = self
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.label.map(|l| (Some(i), l)))
            .collect();
        out.extend(
            self.labels
                .iter()
                .map(|l| (None, LayoutBox::new(l.x, l.y, l.w, l.h))),
        );
        out
    }

    /// Every distinct path the layout mentions, in first-mention order.
    pub fn referenced_paths(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.nodes
            .iter()
            .map(|n| n.path.as_str())
            .chain(self.edges.iter().map(|e| e.path.as_str()))
            .filter(|p| seen.insert(*p))
            .collect()
    }

    /// Layout paths that name no element of `model`.
    pub fn dangling_paths(&self, model: &EcoreModel) -> Vec<String> {
        self.referenced_paths()
            .into_iter()
            .filter(|p| model.path_from_str(p).is_none())
            .map(str::to_string)
            .collect()
    }
}

/// Number of crossing segment pairs taken from distinct edges.
pub fn edge_crossings(layout: &LayoutModel) -> usize {
    let segs: Vec<(usize, Segment)> = layout
        .edges
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.segments().map(move |s| (i, s)))
        .collect();
    let mut count = 0;
    for (k, (ei, s)) in segs.iter().enumerate() {
        for (ej, t) in &segs[k + 1..] {
            if ei != ej && segments_cross(s, t) {
                count += 1;
            }
        }
    }
    count
}

/// The smallest folded angle between two segments of distinct edges that
/// share an endpoint, with the two edge indices.
pub fn min_edge_angle_detail(layout: &LayoutModel) -> Option<(f64, usize, usize)> {
    let segs: Vec<(usize, Segment)> = layout
        .edges
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.segments().map(move |s| (i, s)))
        .filter(|(_, s)| !s.is_degenerate())
        .collect();
    let mut best: Option<(f64, usize, usize)> = None;
    for (k, (ei, s)) in segs.iter().enumerate() {
        for (ej, t) in &segs[k + 1..] {
            if ei == ej {
                continue;
            }
            for (o1, p) in [(s.a, s.b), (s.b, s.a)] {
                for (o2, q) in [(t.a, t.b), (t.b, t.a)] {
                    if o1 == o2 {
                        let angle = fold_angle(ray_angle_deg(o1, p, q));
                        if best.is_none_or(|(b, _, _)| angle < b) {
                            best = Some((angle, *ei, *ej));
                        }
                    }
                }
            }
        }
    }
    best
}

/// Minimum angle in degrees (folded into `[0, 90]`) between endpoint-sharing
/// segments of distinct edges; `None` when no such pair exists.
pub fn min_edge_angle(layout: &LayoutModel) -> Option<f64> {
    min_edge_angle_detail(layout).map(|(a, _, _)| a)
}

/// One overlap involving a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelOverlap {
    /// Two label boxes, as indices into [`LayoutModel::label_boxes`].
    Labels(usize, usize),
    /// A label box and a segment of an edge.
    LabelEdge { label: usize, edge: usize, segment: usize },
}

pub fn label_overlaps(layout: &LayoutModel) -> Vec<LabelOverlap> {
    let labels = layout.label_boxes();
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if boxes_overlap(&labels[i].1, &labels[j].1) {
                out.push(LabelOverlap::Labels(i, j));
            }
        }
    }
    for (li, (_, r)) in labels.iter().enumerate() {
        for (ei, e) in layout.edges.iter().enumerate() {
            for (si, s) in e.segments().enumerate() {
                if segment_enters_box(&s, r) {
                    out.push(LabelOverlap::LabelEdge {
                        label: li,
                        edge: ei,
                        segment: si,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutMetrics {
    pub crossings: usize,
    pub bends: usize,
    pub total_edge_length: f64,
    pub longest_edge: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_edge_angle_deg: Option<f64>,
    pub diagram_area: f64,
    pub label_overlaps: usize,
}

/// Bounding box of every node, label and edge point, as (min x, min y, max x, max y).
pub fn bounding_box(layout: &LayoutModel) -> Option<(f64, f64, f64, f64)> {
    let mut corners: Vec<Point> = Vec::new();
    for n in &layout.nodes {
        corners.push(Point::new(n.x, n.y));
        corners.push(Point::new(n.x + n.w, n.y + n.h));
    }
    for (_, b) in layout.label_boxes() {
        corners.push(Point::new(b.x, b.y));
        corners.push(Point::new(b.x + b.w, b.y + b.h));
    }
    for e in &layout.edges {
        corners.extend(e.points.iter().copied());
    }
    let first = corners.first()?;
    Some(corners.iter().fold(
        (first.x, first.y, first.x, first.y),
        |(x0, y0, x1, y1), p| (x0.min(p.x), y0.min(p.y), x1.max(p.x), y1.max(p.y)),
    ))
}

pub fn compute_metrics(layout: &LayoutModel) -> LayoutMetrics {
    let lengths: Vec<f64> = layout.edges.iter().map(EdgeLayout::length).collect();
    LayoutMetrics {
        crossings: edge_crossings(layout),
        bends: layout
            .edges
            .iter()
            .map(|e| e.points.len().saturating_sub(2))
            .sum(),
        total_edge_length: lengths.iter().sum(),
        longest_edge: lengths.iter().copied().fold(0.0, f64::max),
        min_edge_angle_deg: min_edge_angle(layout),
        diagram_area: bounding_box(layout)
            .map(|(x0, y0, x1, y1)| (x1 - x0) * (y1 - y0))
            .unwrap_or(0.0),
        label_overlaps: label_overlaps(layout).len(),
    }
}

/// Thresholds for layout diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LayoutThresholds {
    pub min_angle_deg: f64,
    pub max_label_overlaps: usize,
}

impl Default for LayoutThresholds {
    fn default() -> Self {
        LayoutThresholds {
            min_angle_deg: 15.0,
            max_label_overlaps: 0,
        }
    }
}

/// Layout diagnostics EMP-101..104. EMP-103 is always produced here; the rule
/// engine drops it unless enabled.
pub fn layout_report(
    model: &EcoreModel,
    layout: &LayoutModel,
    thresholds: &LayoutThresholds,
) -> Vec<Diagnostic> {
    let root = model.root_path();
    let resolve = |p: &str| model.path_from_str(p);
    let edge_path = |i: usize| resolve(&layout.edges[i].path);
    let mut out = Vec::new();

    if let Some((angle, e1, e2)) = min_edge_angle_detail(layout) {
        if angle < thresholds.min_angle_deg {
            let related: Vec<ElementPath> = edge_path(e2).into_iter().collect();
            out.push(
                catalog::diagnostic(
                    "EMP-101",
                    edge_path(e1).unwrap_or_else(|| root.clone()),
                    format!(
                        "edges `{}` and `{}` meet at {angle:.1}°, below the {}° minimum",
                        layout.edges[e1].path, layout.edges[e2].path, thresholds.min_angle_deg
                    ),
                )
                .with_related(related),
            );
        }
    }

    let labels = layout.label_boxes();
    let label_owner = |li: usize| labels[li].0.and_then(edge_path);
    let describe = |li: usize| match labels[li].0 {
        Some(e) => format!("label of edge `{}`", layout.edges[e].path),
        None => match &layout.labels[li - labels.iter().filter(|l| l.0.is_some()).count()].text {
            Some(t) => format!("label `{t}`"),
            None => format!("free label #{}", li),
        },
    };
    for overlap in label_overlaps(layout)
        .into_iter()
        .skip(thresholds.max_label_overlaps)
    {
        let (path, related, message) = match overlap {
            LabelOverlap::Labels(i, j) => (
                label_owner(i),
                label_owner(j),
                format!("{} overlaps {}", describe(i), describe(j)),
            ),
            LabelOverlap::LabelEdge { label, edge, segment } => (
                label_owner(label),
                edge_path(edge),
                format!(
                    "{} overlaps segment {segment} of edge `{}`",
                    describe(label),
                    layout.edges[edge].path
                ),
            ),
        };
        out.push(
            catalog::diagnostic("EMP-102", path.unwrap_or_else(|| root.clone()), message)
                .with_related(related),
        );
    }

    let m = compute_metrics(layout);
    out.push(catalog::diagnostic(
        "EMP-103",
        root.clone(),
        format!(
            "layout metrics: {} crossings, {} bends, area {:.1}, total edge length {:.1}, longest edge {:.1}",
            m.crossings, m.bends, m.diagram_area, m.total_edge_length, m.longest_edge
        ),
    ));

    for stale in layout.dangling_paths(model) {
        out.push(catalog::diagnostic(
            "EMP-104",
            root.clone(),
            format!("layout refers to `{stale}`, which is not in the model"),
        ));
    }
    out
}
