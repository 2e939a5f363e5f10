//! Shared fixtures, generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use ecore_quality::layout::{EdgeKind, EdgeLayout, LayoutBox, LayoutModel, NodeLayout, Point};
use ecore_quality::metamodel::{
    resolve_types, BuiltinRegistry, EClass, EClassifier, EEnum, EEnumLiteral, EPackage,
    EStructuralFeature, FeatureKind, TypeRef,
};
use ecore_quality::{load_model, EcoreModel, LoadedModel};
use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};

pub const STRING: &str = "ecore:EDataType http://www.eclipse.org/emf/2002/Ecore#//EString";
pub const INT: &str = "ecore:EDataType http://www.eclipse.org/emf/2002/Ecore#//EInt";
pub const BOOLEAN: &str = "ecore:EDataType http://www.eclipse.org/emf/2002/Ecore#//EBoolean";

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn load(rel: &str) -> LoadedModel {
    load_model(&read(rel), rel).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Sorted paths of `dir` entries with the given extension.
pub fn files(dir: &str, ext: &str) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(fixture(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    out.sort();
    out
}

/// Every `.ecore` file of the fixture tree.
pub fn all_models() -> Vec<PathBuf> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(&p, out);
            } else if p.extension().is_some_and(|x| x == "ecore") {
                out.push(p);
            }
        }
    }
    let mut out = Vec::new();
    walk(&fixture(""), &mut out);
    out.sort();
    out
}

pub fn sha256(path: &Path) -> Option<String> {
    let bytes = std::fs::read(path).ok()?;
    Some(format!("{:x}", Sha256::digest(bytes)))
}

pub struct CliRun {
    pub code: i32,
    pub out: String,
    pub err: String,
}

/// Runs the CLI in-process. Every argument naming an existing file is hashed
/// before and after; unless `--write` is given they must be unchanged. The
/// `--output` target is exempt.
pub fn cli(args: &[&str]) -> CliRun {
    let inputs: Vec<(PathBuf, String)> = args
        .iter()
        .enumerate()
        .filter(|(i, _)| *i == 0 || args[i - 1] != "--output")
        .map(|(_, a)| PathBuf::from(a))
        .filter(|p| p.is_file())
        .filter_map(|p| sha256(&p).map(|h| (p, h)))
        .collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ecoreq").chain(args.iter().copied());
    let code = ecore_quality::cli::run(argv, &mut out, &mut err);
    if !args.contains(&"--write") {
        for (p, h) in &inputs {
            assert_eq!(sha256(p).as_ref(), Some(h), "{} changed by {args:?}", p.display());
        }
    }
    CliRun {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

pub fn resolved(root: EPackage) -> EcoreModel {
    static BUILTINS: std::sync::OnceLock<BuiltinRegistry> = std::sync::OnceLock::new();
    let mut m = EcoreModel::new(root, "mem:");
    resolve_types(&mut m, BUILTINS.get_or_init(BuiltinRegistry::standard));
    m
}

/// Package `p` with classes `C0..Cn`; `edges` are (subclass, supertype).
pub fn inheritance_model(n: usize, edges: &[(usize, usize)]) -> EcoreModel {
    let mut pkg = EPackage::new("p", "http://p", "p");
    for i in 0..n {
        let mut c = EClass::new(&format!("C{i}"));
        c.super_types = edges
            .iter()
            .filter(|(s, _)| *s == i)
            .map(|(_, t)| TypeRef::new(format!("#//C{t}")))
            .collect();
        pkg.classifiers.push(EClassifier::Class(c));
    }
    resolved(pkg)
}

/// Vertices on some directed cycle, by repeated reachability.
pub fn cyclic_vertices(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n).map(|v| reach[v][v]).collect()
}

/// Length of a shortest directed cycle through `v`, by breadth-first search.
pub fn shortest_cycle_len(n: usize, edges: &[(usize, usize)], v: usize) -> Option<usize> {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        succ[a].push(b);
    }
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([v]);
    dist[v] = 0;
    while let Some(a) = queue.pop_front() {
        for &b in &succ[a] {
            if b == v {
                return Some(dist[a] + 1);
            }
            if dist[b] == usize::MAX {
                dist[b] = dist[a] + 1;
                queue.push_back(b);
            }
        }
    }
    None
}

/// Random model of at most `max` elements with unique names.
pub fn random_model(rng: &mut impl Rng, max: usize) -> EcoreModel {
    let mut pkg = EPackage::new("p", "http://p", "p");
    let mut count = 1;
    let classes = rng.gen_range(1..=5);
    for i in 0..classes {
        if count >= max {
            break;
        }
        let mut c = EClass::new(&format!("C{i}"));
        c.is_abstract = rng.gen_bool(0.2);
        if i > 0 && rng.gen_bool(0.3) {
            c.super_types.push(TypeRef::new(format!("#//C{}", rng.gen_range(0..i))));
        }
        count += 1;
        for j in 0..rng.gen_range(0..4) {
            if count >= max {
                break;
            }
            c.features.push(random_feature(rng, &format!("f{i}x{j}"), classes));
            count += 1;
        }
        pkg.classifiers.push(EClassifier::Class(c));
    }
    if count + 3 <= max && rng.gen_bool(0.5) {
        let mut e = EEnum {
            name: "Kind".into(),
            ..EEnum::default()
        };
        for (v, l) in ["alpha", "beta"].iter().enumerate() {
            e.literals.push(EEnumLiteral {
                name: l.to_string(),
                value: v as i64,
                ..EEnumLiteral::default()
            });
        }
        pkg.classifiers.push(EClassifier::Enum(e));
    }
    resolved(pkg)
}

fn random_feature(rng: &mut impl Rng, name: &str, classes: usize) -> EStructuralFeature {
    let mut f = if rng.gen_bool(0.5) {
        let t = [STRING, INT, BOOLEAN].choose(rng).unwrap();
        EStructuralFeature::attribute(name, TypeRef::new(*t))
    } else {
        let mut r = EStructuralFeature::reference(name, TypeRef::new(format!("#//C{}", rng.gen_range(0..classes))));
        r.containment = rng.gen_bool(0.3);
        r
    };
    f.lower_bound = rng.gen_range(0..=1);
    f.upper_bound = *[1, -1, 3].choose(rng).unwrap();
    f
}

/// Applies `k` random edits, keeping names unique.
pub fn mutate(rng: &mut impl Rng, model: &EcoreModel, k: usize) -> EcoreModel {
    let mut root = model.root().clone();
    let mut fresh = 0;
    for _ in 0..k {
        let classes: Vec<usize> = (0..root.classifiers.len())
            .filter(|i| matches!(root.classifiers[*i], EClassifier::Class(_)))
            .collect();
        let ci = *classes.choose(rng).unwrap();
        let choice = rng.gen_range(0..9);
        fresh += 1;
        let EClassifier::Class(c) = &mut root.classifiers[ci] else { unreachable!() };
        match choice {
            0 => c.name = format!("R{fresh}"),
            1 => c.is_abstract = !c.is_abstract,
            2 => c.features.push(random_feature(rng, &format!("n{fresh}"), classes.len())),
            3 if !c.features.is_empty() => {
                let i = rng.gen_range(0..c.features.len());
                c.features.remove(i);
            }
            4 if !c.features.is_empty() => {
                let i = rng.gen_range(0..c.features.len());
                c.features[i].name = format!("m{fresh}");
            }
            5 if !c.features.is_empty() => {
                let i = rng.gen_range(0..c.features.len());
                c.features[i].upper_bound = if c.features[i].upper_bound == -1 { 7 } else { -1 };
            }
            6 if !c.features.is_empty() => {
                let i = rng.gen_range(0..c.features.len());
                c.features[i].default_value_literal = Some(format!("d{fresh}"));
            }
            7 => root.classifiers.push(EClassifier::Class(EClass::new(&format!("N{fresh}")))),
            8 if classes.len() > 1 => {
                root.classifiers.remove(ci);
            }
            _ => c.is_interface = !c.is_interface,
        }
    }
    resolved(root)
}

/// Random layout with integer coordinates; endpoints are drawn from a small
/// pool so shared endpoints, touching and collinear segments are common.
pub fn random_layout(rng: &mut impl Rng, max_edges: usize) -> LayoutModel {
    let pool: Vec<Point> = (0..12)
        .map(|_| Point::new(rng.gen_range(0..40) as f64, rng.gen_range(0..40) as f64))
        .collect();
    let edges = rng.gen_range(1..=max_edges);
    let mut layout = LayoutModel::default();
    for i in 0..edges {
        let n = rng.gen_range(2..=4);
        let points = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    *pool.choose(rng).unwrap()
                } else {
                    Point::new(rng.gen_range(0..40) as f64, rng.gen_range(0..40) as f64)
                }
            })
            .collect();
        let label = rng.gen_bool(0.3).then(|| {
            LayoutBox::new(
                rng.gen_range(0..40) as f64,
                rng.gen_range(0..40) as f64,
                rng.gen_range(1..8) as f64,
                rng.gen_range(1..4) as f64,
            )
        });
        layout.edges.push(EdgeLayout {
            path: format!("/p/C{i}"),
            kind: if rng.gen_bool(0.5) { EdgeKind::Reference } else { EdgeKind::Supertype },
            points,
            label,
        });
    }
    for i in 0..rng.gen_range(0..5) {
        layout.nodes.push(NodeLayout {
            path: format!("/p/N{i}"),
            x: rng.gen_range(-20..60) as f64,
            y: rng.gen_range(-20..60) as f64,
            w: rng.gen_range(1..30) as f64,
            h: rng.gen_range(1..30) as f64,
        });
    }
    layout
}

/// Applies `p -> p * scale + (dx, dy)` to every coordinate and size.
pub fn transform(layout: &LayoutModel, scale: f64, dx: f64, dy: f64) -> LayoutModel {
    let pt = |p: &Point| Point::new(p.x * scale + dx, p.y * scale + dy);
    let mut out = layout.clone();
    for n in &mut out.nodes {
        n.x = n.x * scale + dx;
        n.y = n.y * scale + dy;
        n.w *= scale;
        n.h *= scale;
    }
    for e in &mut out.edges {
        e.points = e.points.iter().map(pt).collect();
        if let Some(l) = &mut e.label {
            *l = LayoutBox::new(l.x * scale + dx, l.y * scale + dy, l.w * scale, l.h * scale);
        }
    }
    out
}

/// Segment-pair crossings by parametric intersection in exact integer
/// arithmetic; assumes integer coordinates.
pub fn crossings_oracle(layout: &LayoutModel) -> usize {
    type P = (i64, i64);
    let cross = |a: P, b: P| a.0 * b.1 - a.1 * b.0;
    let sub = |a: P, b: P| (a.0 - b.0, a.1 - b.1);
    let segs: Vec<(usize, P, P)> = layout
        .edges
        .iter()
        .enumerate()
        .flat_map(|(i, e)| {
            e.points
                .windows(2)
                .map(move |w| (i, (w[0].x as i64, w[0].y as i64), (w[1].x as i64, w[1].y as i64)))
        })
        .filter(|(_, a, b)| a != b)
        .collect();
    let mut count = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (ei, p, p2) = segs[i];
            let (ej, q, q2) = segs[j];
            if ei == ej {
                continue;
            }
            let r = sub(p2, p);
            let s = sub(q2, q);
            let denom = cross(r, s);
            let qp = sub(q, p);
            let hit = if denom == 0 {
                if cross(qp, r) != 0 {
                    false
                } else {
                    // collinear: overlap of parameter intervals along r
                    let rr = r.0 * r.0 + r.1 * r.1;
                    let t0 = qp.0 * r.0 + qp.1 * r.1;
                    let t1 = t0 + s.0 * r.0 + s.1 * r.1;
                    let (lo, hi) = (t0.min(t1), t0.max(t1));
                    hi.min(rr) > lo.max(0)
                }
            } else {
                let (tn, un) = (cross(qp, s), cross(qp, r));
                let (tn, un, d) = if denom < 0 { (-tn, -un, -denom) } else { (tn, un, denom) };
                let on_both = (0..=d).contains(&tn) && (0..=d).contains(&un);
                let interior = (0 < tn && tn < d) || (0 < un && un < d);
                on_both && interior
            };
            if hit {
                count += 1;
            }
        }
    }
    count
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    let d = (a - b).abs();
    d <= tol * a.abs().max(b.abs()) || d <= 1e-12
}

/// (path, field, value) triples of every element, for the diff oracle.
pub fn triples(model: &EcoreModel) -> BTreeSet<(String, String, String)> {
    use ecore_quality::metamodel::ElementRef;
    let mut out = BTreeSet::new();
    for (path, element) in model.elements() {
        let p = path.to_string();
        let mut put = |field: &str, value: Option<String>| {
            if let Some(v) = value {
                out.insert((p.clone(), field.to_string(), v));
            }
        };
        put("#kind", Some(path.kind().metaclass().to_string()));
        match element {
            ElementRef::Package(pk) => {
                put("nsURI", Some(pk.ns_uri.clone()));
                put("nsPrefix", Some(pk.ns_prefix.clone()));
            }
            ElementRef::Classifier(EClassifier::Class(c)) => {
                put("abstract", Some(c.is_abstract.to_string()));
                put("interface", Some(c.is_interface.to_string()));
                let supers: Vec<&str> = c.super_types.iter().map(|t| t.raw.as_str()).collect();
                put("eSuperTypes", Some(supers.join(" ")));
            }
            ElementRef::Feature(f) => {
                put("eType", f.e_type.as_ref().map(|t| t.raw.clone()));
                put("lowerBound", Some(f.lower_bound.to_string()));
                put("upperBound", Some(f.upper_bound.to_string()));
                put("changeable", Some(f.changeable.to_string()));
                put("derived", Some(f.derived.to_string()));
                put("defaultValueLiteral", f.default_value_literal.clone());
                if f.kind == FeatureKind::Reference {
                    put("containment", Some(f.containment.to_string()));
                }
            }
            ElementRef::Literal(l) => {
                put("value", Some(l.value.to_string()));
                put("literal", l.literal.clone());
            }
            _ => {}
        }
    }
    out
}
