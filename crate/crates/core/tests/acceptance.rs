//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use common::*;
use ecore_quality::compare::diff;
use ecore_quality::instances::{
    parse_instance, synthesize_minimal_instance, validate_instance, Unsatisfiable,
};
use ecore_quality::layout::{compute_metrics, edge_crossings, parse_layout, LayoutModel};
use ecore_quality::metamodel::EcoreModel;
use ecore_quality::rules::{
    check_circular_inheritance, parse_dictionary, run_rules, split_identifier, RuleConfig,
    RuleInputs,
};
use ecore_quality::serialization::{export_json, parse_json};
use ecore_quality::{load_model, parse_xmi, serialize_xmi, Severity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative tolerance for recomputed lengths, angles and areas.
const GEOMETRY_REL_TOL: f64 = 1e-9;
const RANDOM_DIGRAPHS: usize = 500;
const RANDOM_DIGRAPH_MAX_NODES: usize = 12;
const RANDOM_LAYOUTS: usize = 200;
const LAYOUT_MAX_EDGES: usize = 50;
const TRANSFORMS_PER_LAYOUT: usize = 20;
const DIFF_PAIRS: usize = 100;
const DIFF_MAX_ELEMENTS: usize = 30;
const RANDOM_IDENTIFIERS: usize = 1000;
const RANDOM_METAMODELS: usize = 100;
const FUZZ_INPUTS: usize = 1000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1_round_trip() -> Outcome {
    let fixtures = files("canonical", "ecore");
    ensure(fixtures.len() >= 10, || format!("only {} canonical fixtures", fixtures.len()))?;
    for f in &fixtures {
        let text = std::fs::read_to_string(f).unwrap();
        let uri = f.display().to_string();
        let parsed = parse_xmi(&text, &uri).map_err(|e| format!("{uri}: {e}"))?.model;
        let out = serialize_xmi(&parsed);
        ensure(out == text, || format!("{uri}: serialization differs from the input"))?;
        let back = parse_json(&export_json(&parsed), &uri).map_err(|e| format!("{uri}: {e}"))?;
        ensure(back.root() == parsed.root(), || format!("{uri}: JSON round trip differs"))?;
    }
    Ok(format!("{} fixtures byte-identical through XMI and equal through JSON", fixtures.len()))
}

fn golden(dir: &Path) -> Vec<String> {
    std::fs::read_to_string(dir.join("positive.golden"))
        .unwrap()
        .lines()
        .map(str::to_string)
        .filter(|l| !l.trim().is_empty())
        .collect()
}

fn findings(dir: &Path, which: &str) -> Result<Vec<String>, String> {
    let id = dir.file_name().unwrap().to_str().unwrap();
    let read = |name: &str| std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{id}/{name}: {e}"));
    let lines = |diags: &[ecore_quality::Diagnostic]| {
        diags.iter().map(|d| format!("{} {}", d.rule_id, d.path)).collect::<Vec<_>>()
    };
    if id.starts_with("INS-") {
        let loaded = load_model(&read("model.ecore")?, id).map_err(|e| e.to_string())?;
        let inst = parse_instance(&read(&format!("{which}.xmi"))?, &loaded.model).map_err(|e| e.to_string())?;
        return Ok(lines(&validate_instance(&inst, &loaded.model)));
    }
    let layout_rule = id.starts_with("EMP-1");
    let model_file = if layout_rule { "model.ecore".to_string() } else { format!("{which}.ecore") };
    let loaded = load_model(&read(&model_file)?, id).map_err(|e| e.to_string())?;
    let mut inputs = RuleInputs::new(&loaded.builtins);
    let layout: Option<LayoutModel> = if layout_rule {
        Some(parse_layout(&read(&format!("{which}.layout.json"))?).map_err(|e| e.to_string())?)
    } else {
        None
    };
    if let Some(l) = &layout {
        inputs = inputs.with_layout(l);
    }
    let dictionary: Option<HashSet<String>> = dir
        .join("dictionary.txt")
        .is_file()
        .then(|| parse_dictionary(&read("dictionary.txt").unwrap()));
    if let Some(d) = &dictionary {
        inputs = inputs.with_dictionary(d);
    }
    let report = run_rules(&loaded.model, &inputs, &RuleConfig::default()).map_err(|e| e.to_string())?;
    Ok(lines(&report.diagnostics))
}

fn criterion_2_rule_matrix() -> Outcome {
    let expected_ids = [
        "SYN-001", "SYN-002", "SYN-003", "SYN-004", "SYN-005", "SYN-006", "SYN-007", "SEM-001",
        "SEM-002", "SEM-003", "SEM-004", "EMP-001", "EMP-002", "EMP-101", "EMP-102", "EMP-104",
        "INS-001", "INS-002", "INS-003", "INS-004", "INS-005",
    ];
    for id in expected_ids {
        let dir = fixture(&format!("rules/{id}"));
        let want = golden(&dir);
        ensure(!want.is_empty() && want.iter().all(|l| l.starts_with(id)), || {
            format!("{id}: golden file must list only {id}")
        })?;
        let got = findings(&dir, "positive")?;
        ensure(got == want, || format!("{id}: positive gave {got:?}, golden {want:?}"))?;
        let neg = findings(&dir, "negative")?;
        ensure(neg.is_empty(), || format!("{id}: negative gave {neg:?}"))?;
    }
    Ok(format!("{} rules: positives match goldens, negatives clean", expected_ids.len()))
}

/// Checks SEM-004 on one digraph against the brute-force oracle.
fn check_cycles(n: usize, edges: &[(usize, usize)]) -> Result<(), String> {
    let model = inheritance_model(n, edges);
    let diags = check_circular_inheritance(&model);
    let index = |name: &str| name[1..].parse::<usize>().unwrap();
    let cyclic = cyclic_vertices(n, edges);
    let mut covered = vec![false; n];
    let mut reported: BTreeSet<Vec<usize>> = BTreeSet::new();
    for d in &diags {
        let cycle: Vec<usize> = d.related_paths.iter().map(|p| index(p.name())).collect();
        let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
        ensure(!cycle.is_empty() && distinct.len() == cycle.len(), || format!("{edges:?}: bad cycle {cycle:?}"))?;
        for k in 0..cycle.len() {
            let step = (cycle[k], cycle[(k + 1) % cycle.len()]);
            ensure(edges.contains(&step), || format!("{edges:?}: {cycle:?} uses missing edge {step:?}"))?;
        }
        for &v in &cycle {
            covered[v] = true;
        }
        let mut key = cycle.clone();
        key.sort();
        ensure(reported.insert(key), || format!("{edges:?}: cycle {cycle:?} reported twice"))?;
    }
    ensure(covered == cyclic, || format!("{edges:?}: covered {covered:?}, cyclic {cyclic:?}"))?;
    // each cyclic vertex is reported with a shortest cycle through it
    for v in (0..n).filter(|v| cyclic[*v]) {
        let shortest = shortest_cycle_len(n, edges, v).unwrap();
        ensure(reported.iter().any(|c| c.contains(&v) && c.len() == shortest), || {
            format!("{edges:?}: no shortest cycle (length {shortest}) through C{v}")
        })?;
    }
    Ok(())
}

fn criterion_3_cycle_oracle() -> Outcome {
    let mut graphs = 0usize;
    // every labeled digraph with self-loops up to 4 nodes
    for n in 1..=4 {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << slots.len()) {
            let edges: Vec<_> = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
            check_cycles(n, &edges)?;
            graphs += 1;
        }
    }
    // every labeled loop-free digraph on 5 nodes, each with one of the 32
    // self-loop patterns in rotation
    let n = 5;
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |b| *b != a).map(move |b| (a, b))).collect();
    for mask in 0u32..(1 << slots.len()) {
        let mut edges: Vec<_> = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
        let loops = mask % 32;
        edges.extend((0..n).filter(|v| loops >> v & 1 == 1).map(|v| (v, v)));
        edges.sort();
        check_cycles(n, &edges)?;
        graphs += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..RANDOM_DIGRAPHS {
        let n = rng.gen_range(1..=RANDOM_DIGRAPH_MAX_NODES);
        let p = rng.gen_range(0.02..0.3);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        check_cycles(n, &edges)?;
        graphs += 1;
    }
    Ok(format!("{graphs} digraphs agree with the reachability and BFS oracles"))
}

fn angle_oracle(layout: &LayoutModel) -> Option<f64> {
    let segs: Vec<(usize, (f64, f64), (f64, f64))> = layout
        .edges
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.points.windows(2).map(move |w| (i, (w[0].x, w[0].y), (w[1].x, w[1].y))))
        .filter(|(_, a, b)| a != b)
        .collect();
    let dir = |o: (f64, f64), p: (f64, f64)| (p.1 - o.1).atan2(p.0 - o.0);
    let mut best: Option<f64> = None;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if segs[i].0 == segs[j].0 {
                continue;
            }
            for (o1, p) in [(segs[i].1, segs[i].2), (segs[i].2, segs[i].1)] {
                for (o2, q) in [(segs[j].1, segs[j].2), (segs[j].2, segs[j].1)] {
                    if o1 != o2 {
                        continue;
                    }
                    let mut d = (dir(o1, p) - dir(o1, q)).abs();
                    if d > std::f64::consts::PI {
                        d = 2.0 * std::f64::consts::PI - d;
                    }
                    let mut deg = d.to_degrees();
                    if deg > 90.0 {
                        deg = 180.0 - deg;
                    }
                    best = Some(best.map_or(deg, |b: f64| b.min(deg)));
                }
            }
        }
    }
    best
}

fn area_oracle(layout: &LayoutModel) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in &layout.nodes {
        xs.extend([n.x, n.x + n.w]);
        ys.extend([n.y, n.y + n.h]);
    }
    for l in &layout.labels {
        xs.extend([l.x, l.x + l.w]);
        ys.extend([l.y, l.y + l.h]);
    }
    for e in &layout.edges {
        if let Some(l) = &e.label {
            xs.extend([l.x, l.x + l.w]);
            ys.extend([l.y, l.y + l.h]);
        }
        xs.extend(e.points.iter().map(|p| p.x));
        ys.extend(e.points.iter().map(|p| p.y));
    }
    if xs.is_empty() {
        return 0.0;
    }
    let span = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    span(&xs) * span(&ys)
}

fn criterion_4_geometry_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total_crossings = 0;
    for k in 0..RANDOM_LAYOUTS {
        let layout = random_layout(&mut rng, LAYOUT_MAX_EDGES);
        let m = compute_metrics(&layout);
        let oracle = crossings_oracle(&layout);
        ensure(m.crossings == oracle, || format!("layout {k}: {} crossings, oracle {oracle}", m.crossings))?;
        total_crossings += oracle;

        let lengths: Vec<f64> = layout
            .edges
            .iter()
            .map(|e| {
                e.points
                    .windows(2)
                    .map(|w| {
                        let (dx, dy) = ((w[1].x - w[0].x) as i64, (w[1].y - w[0].y) as i64);
                        ((dx * dx + dy * dy) as f64).sqrt()
                    })
                    .sum()
            })
            .collect();
        let total: f64 = lengths.iter().sum();
        let longest = lengths.iter().cloned().fold(0.0, f64::max);
        ensure(rel_close(m.total_edge_length, total, GEOMETRY_REL_TOL), || {
            format!("layout {k}: total length {} vs {total}", m.total_edge_length)
        })?;
        ensure(rel_close(m.longest_edge, longest, GEOMETRY_REL_TOL), || {
            format!("layout {k}: longest {} vs {longest}", m.longest_edge)
        })?;
        let angle = angle_oracle(&layout);
        let same_angle = match (m.min_edge_angle_deg, angle) {
            (Some(a), Some(b)) => rel_close(a, b, GEOMETRY_REL_TOL),
            (None, None) => true,
            _ => false,
        };
        ensure(same_angle, || format!("layout {k}: angle {:?} vs {angle:?}", m.min_edge_angle_deg))?;
        let area = area_oracle(&layout);
        ensure(rel_close(m.diagram_area, area, GEOMETRY_REL_TOL), || {
            format!("layout {k}: area {} vs {area}", m.diagram_area)
        })?;

        for _ in 0..TRANSFORMS_PER_LAYOUT {
            let scale = [0.25, 0.5, 1.0, 2.0, 3.0, 7.0, 10.0][rng.gen_range(0..7)];
            let (dx, dy) = (rng.gen_range(-1000..1000) as f64, rng.gen_range(-1000..1000) as f64);
            let moved = transform(&layout, scale, dx, dy);
            let c = edge_crossings(&moved);
            ensure(c == oracle, || format!("layout {k}: {c} crossings after x{scale} +({dx},{dy}), expected {oracle}"))?;
        }
    }
    Ok(format!(
        "{RANDOM_LAYOUTS} layouts ({total_crossings} crossings) match; invariant under {TRANSFORMS_PER_LAYOUT} transforms each"
    ))
}

fn delta_triples(a: &EcoreModel, b: &EcoreModel) -> (BTreeSet<(String, String, String)>, BTreeSet<(String, String, String)>) {
    let ta = triples(a);
    let tb = triples(b);
    let d = diff(a, b);
    let of = |set: &BTreeSet<(String, String, String)>, paths: &[ecore_quality::ElementPath]| {
        let names: BTreeSet<String> = paths.iter().map(|p| p.to_string()).collect();
        set.iter().filter(|t| names.contains(&t.0)).cloned().collect::<BTreeSet<_>>()
    };
    let mut removed = of(&ta, &d.deletions);
    let mut added = of(&tb, &d.additions);
    for c in &d.changes {
        if let Some(old) = &c.old {
            removed.insert((c.path.to_string(), c.field.clone(), old.clone()));
        }
        if let Some(new) = &c.new {
            added.insert((c.path.to_string(), c.field.clone(), new.clone()));
        }
    }
    (removed, added)
}

fn criterion_5_diff_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nonempty = 0;
    for k in 0..DIFF_PAIRS {
        let a = random_model(&mut rng, DIFF_MAX_ELEMENTS);
        let k_edits = rng.gen_range(1..=5);
        let b = mutate(&mut rng, &a, k_edits);
        ensure(a.paths().count() <= DIFF_MAX_ELEMENTS, || format!("pair {k}: model too large"))?;
        let ta = triples(&a);
        let tb = triples(&b);
        let want_removed: BTreeSet<_> = ta.difference(&tb).cloned().collect();
        let want_added: BTreeSet<_> = tb.difference(&ta).cloned().collect();
        let (removed, added) = delta_triples(&a, &b);
        ensure(removed == want_removed, || {
            format!("pair {k}: removed {:?} vs oracle {:?}", removed, want_removed)
        })?;
        ensure(added == want_added, || format!("pair {k}: added {:?} vs oracle {:?}", added, want_added))?;
        if !want_added.is_empty() || !want_removed.is_empty() {
            nonempty += 1;
        }
    }
    let models = all_models();
    for f in &models {
        let text = std::fs::read_to_string(f).unwrap();
        let Ok(m) = load_model(&text, "x") else { continue };
        ensure(diff(&m.model, &m.model).is_empty(), || format!("{}: diff(a, a) not empty", f.display()))?;
    }
    Ok(format!("{DIFF_PAIRS} pairs ({nonempty} with changes) match; diff(a, a) empty on {} fixtures", models.len()))
}

fn criterion_6_identifier_splitting() -> Outcome {
    let got = split_identifier("myBadSpelling");
    ensure(got == ["my", "bad", "spelling"], || format!("myBadSpelling gave {got:?}"))?;
    let alphabet: Vec<char> = ('a'..='z').chain('A'..='Z').chain('0'..='9').chain(['_']).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..RANDOM_IDENTIFIERS {
        let len = rng.gen_range(1..=20);
        let id: String = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let joined: String = split_identifier(&id).concat().to_lowercase();
        let expect: String = id.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        ensure(joined == expect, || format!("{id:?}: words join to {joined:?}"))?;
    }
    Ok(format!("example exact; reconstruction holds on {RANDOM_IDENTIFIERS} identifiers"))
}

fn synthesize_all(model: &EcoreModel, label: &str) -> Result<(usize, usize), String> {
    let mut ok = 0;
    let mut unsat = 0;
    let classes: Vec<_> = model
        .classes()
        .filter(|(_, c)| c.is_instantiable())
        .map(|(p, _)| p.clone())
        .collect();
    for class in classes {
        match synthesize_minimal_instance(model, &class) {
            Ok(inst) => {
                let errors: Vec<_> = validate_instance(&inst, model)
                    .into_iter()
                    .filter(|d| d.severity == Severity::Error)
                    .collect();
                ensure(errors.is_empty(), || format!("{label} root {class}: {errors:?}"))?;
                ok += 1;
            }
            Err(_) => unsat += 1,
        }
    }
    Ok((ok, unsat))
}

fn criterion_7_synthesis() -> Outcome {
    let mut fixture_ok = 0;
    for f in all_models().iter().filter(|f| !f.to_string_lossy().contains("/unsat/")) {
        let text = std::fs::read_to_string(f).unwrap();
        let Ok(m) = load_model(&text, "x") else { continue };
        let (ok, unsat) = synthesize_all(&m.model, &f.display().to_string())?;
        fixture_ok += ok;
        if f.to_string_lossy().contains("/canonical/") {
            ensure(ok > 0, || format!("{}: all {unsat} concrete classes unsatisfiable", f.display()))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut satisfiable_models = 0;
    let mut attempts = 0;
    while satisfiable_models < RANDOM_METAMODELS {
        attempts += 1;
        ensure(attempts <= 20 * RANDOM_METAMODELS, || "too few satisfiable random metamodels".to_string())?;
        let m = random_model(&mut rng, 12);
        let (ok, _) = synthesize_all(&m, &format!("random {attempts}"))?;
        if ok > 0 {
            satisfiable_models += 1;
        }
    }
    let expect = [
        ("unsat/abstract_root.ecore", "/p/Shape"),
        ("unsat/no_concrete_subclass.ecore", "/p/Drawing"),
        ("unsat/frozen_required.ecore", "/p/Car"),
    ];
    for (file, root) in expect {
        let m = load(file).model;
        let path = m.path_from_str(root).ok_or_else(|| format!("{file}: no {root}"))?;
        let r = synthesize_minimal_instance(&m, &path);
        let right = match (file, &r) {
            (f, Err(Unsatisfiable::AbstractRoot(_))) if f.contains("abstract_root") => true,
            (f, Err(Unsatisfiable::NoConcreteClass { .. })) if f.contains("no_concrete") => true,
            (f, Err(Unsatisfiable::FrozenRequired(_))) if f.contains("frozen") => true,
            _ => false,
        };
        ensure(right, || format!("{file}: got {r:?}"))?;
    }
    Ok(format!(
        "{fixture_ok} fixture roots and {RANDOM_METAMODELS} random metamodels ({attempts} drawn) validate clean; 3 unsatisfiable fixtures rejected"
    ))
}

fn criterion_8_no_mutation() -> Outcome {
    // every `cli` call asserts unchanged hashes of its file arguments
    let shop = fixture("canonical/shop.ecore");
    let library = fixture("canonical/library.ecore");
    let layout = fixture("layouts/library.layout.json");
    let dict = fixture("dictionary.txt");
    let (s, l, lay, d) = (
        shop.to_str().unwrap(),
        library.to_str().unwrap(),
        layout.to_str().unwrap(),
        dict.to_str().unwrap(),
    );
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = tmp.path().join("out.ecore");
    let o = out.to_str().unwrap();
    let log_file = tmp.path().join("history.log");
    let log = log_file.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["lint", l, "--layout", lay, "--dict", d, "--format", "json"],
        vec!["diff", s, l, "--format", "json"],
        vec!["replace", l, "Book", "Volume", "--dry-run"],
        vec!["replace", l, "Book", "Volume"],
        vec!["replace", l, "Book", "Volume", "--output", o],
        vec!["import", l, s],
        vec!["import", l, s, "--output", o],
        vec!["copy", s, l, "--select", "/shop/Order"],
        vec!["instance", "new", l, "--root", "Library"],
        vec!["export", "json", l],
        vec!["export", "svg", l, "--layout", lay],
        vec!["export", "docs", l],
        vec!["export", "xmi", l],
        vec!["filter", l, "kind:EClass"],
        vec!["diff", s, l, "--log", log],
        vec!["age", l, "--log", log, "--now", "100"],
        vec!["rules"],
    ];
    for args in &commands {
        let r = cli(args);
        ensure(r.code != 3, || format!("{args:?}: usage error {}", r.err))?;
    }

    // a conflicted import with --write leaves the target byte-identical
    let target = tmp.path().join("target.ecore");
    std::fs::copy(&shop, &target).map_err(|e| e.to_string())?;
    let before = sha256(&target);
    let t = target.to_str().unwrap();
    let r = cli(&["import", t, s, "--write"]);
    ensure(r.code == 2, || format!("conflicted import exited {}", r.code))?;
    ensure(sha256(&target) == before, || "conflicted import changed the target".to_string())?;
    let leftovers = std::fs::read_dir(tmp.path()).unwrap().count();
    ensure(leftovers == 3, || format!("{leftovers} files in the target directory after a failed write"))?;
    Ok(format!("{} read-only commands left inputs unchanged; conflicted import left the target intact", commands.len()))
}

fn mutate_bytes(rng: &mut ChaCha8Rng, text: &str) -> Vec<u8> {
    let mut b = text.as_bytes().to_vec();
    let junk: &[&[u8]] = &[b"<", b">", b"\"", b"/>", b"</x>", b"&", b"&amp;", b"#//", b" eType=\"#//Nope\"", b"\xff", b"xsi:type=\"ecore:EEnum\"", b"-1", b"<eClassifiers>"];
    for _ in 0..rng.gen_range(1..=4) {
        if b.is_empty() {
            break;
        }
        let i = rng.gen_range(0..b.len());
        match rng.gen_range(0..6) {
            0 => b[i] = rng.gen(),
            1 => {
                let j = (i + rng.gen_range(1..40)).min(b.len());
                b.drain(i..j);
            }
            2 => {
                let s = junk[rng.gen_range(0..junk.len())];
                b.splice(i..i, s.iter().copied());
            }
            3 => b.truncate(i),
            4 => {
                let j = (i + rng.gen_range(1..200)).min(b.len());
                let slice: Vec<u8> = b[i..j].to_vec();
                let at = rng.gen_range(0..=b.len());
                b.splice(at..at, slice);
            }
            _ => {
                // swap the content of two attribute values
                let j = rng.gen_range(0..b.len());
                b.swap(i, j);
            }
        }
    }
    b
}

fn criterion_9_fuzz() -> Outcome {
    let seeds: Vec<String> = all_models().iter().map(|f| std::fs::read_to_string(f).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut parse_errors, mut linted) = (0, 0);
    for k in 0..FUZZ_INPUTS {
        let seed = &seeds[rng.gen_range(0..seeds.len())];
        let bytes = mutate_bytes(&mut rng, seed);
        let text = String::from_utf8_lossy(&bytes).into_owned();
        let result = catch_unwind(AssertUnwindSafe(|| match load_model(&text, "fuzz") {
            Err(e) => {
                assert!(!e.to_string().is_empty());
                Ok(false)
            }
            Ok(m) => {
                let inputs = RuleInputs::new(&m.builtins).with_source_map(&m.source_map);
                run_rules(&m.model, &inputs, &RuleConfig::default()).map(|_| true).map_err(|e| e.to_string())
            }
        }));
        match result {
            Ok(Ok(true)) => linted += 1,
            Ok(Ok(false)) => parse_errors += 1,
            Ok(Err(e)) => return Err(format!("input {k}: rule engine error {e}")),
            Err(_) => return Err(format!("input {k}: panic\n{text}")),
        }
    }
    Ok(format!("{FUZZ_INPUTS} inputs: {parse_errors} structured parse errors, {linted} linted"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("round-trip stability", criterion_1_round_trip),
        ("rule-fixture matrix", criterion_2_rule_matrix),
        ("cycle oracle", criterion_3_cycle_oracle),
        ("geometry oracle", criterion_4_geometry_oracle),
        ("diff oracle", criterion_5_diff_oracle),
        ("identifier splitting", criterion_6_identifier_splitting),
        ("instance synthesis soundness", criterion_7_synthesis),
        ("atomicity and no-mutation", criterion_8_no_mutation),
        ("fuzz no-crash", criterion_9_fuzz),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if filter.as_ref().is_some_and(|f| !name.contains(f.as_str()) && *f != n.to_string()) {
            continue;
        }
        let start = std::time::Instant::now();
        let outcome = catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".to_string()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({name}): {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}): {why} [{secs:.1}s]");
            }
        }
    }
    std::panic::set_hook(default_hook);
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
