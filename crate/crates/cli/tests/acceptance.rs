//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use raag_core::cover::{cover_homology, ns_rank_oracle, salvetti_boundaries};
use raag_core::gradients::Rational;
use raag_core::graph::{classify, has_induced, Pattern, SimplicialGraph};
use raag_core::hierarchy::{chi_tree, decompose};
use raag_core::homology::{euler_char_cliques, ExactField, FlagComplex};
use raag_core::quotients::{
    chain, fiber_action, make_congruence, CosetAction, Perm, DEFAULT_DEGREE_CAP,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const Q: ExactField = ExactField::Rationals;
const F2: ExactField = ExactField::PrimeField(2);
const F3: ExactField = ExactField::PrimeField(3);

/// Cover homology instance: (label, degree N, χ(G), dims).
type Instance = (String, usize, i64, Vec<usize>);

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn graph(n: usize, edges: &[(usize, usize)]) -> SimplicialGraph {
    let labels = (0..n).map(|i| format!("v{i}")).collect();
    SimplicialGraph::from_indices(labels, edges).unwrap()
}

fn all_graphs(max_n: usize) -> Vec<SimplicialGraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let ps = pairs(n);
        for mask in 0..1u64 << ps.len() {
            let edges: Vec<_> = ps
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            out.push(graph(n, &edges));
        }
    }
    out
}

fn neighbor_masks(g: &SimplicialGraph) -> Vec<u32> {
    let n = g.vertex_count();
    (0..n)
        .map(|v| (0..n).filter(|&u| g.adjacent(u, v)).fold(0, |m, u| m | 1 << u))
        .collect()
}

/// Checks every vertex subset directly: `(has induced C4 or P4, has induced
/// cycle of length >= 4)`.
fn brute_force(g: &SimplicialGraph) -> (bool, bool) {
    let n = g.vertex_count();
    let nbr = neighbor_masks(g);
    let mut square_or_path = false;
    let mut long_cycle = false;
    for s in 0u32..1 << n {
        let k = s.count_ones();
        if k < 4 {
            continue;
        }
        let mut degs = Vec::with_capacity(k as usize);
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            degs.push((nbr[v] & s).count_ones());
        }
        if k == 4 {
            let mut d = degs.clone();
            d.sort_unstable();
            if d == [2, 2, 2, 2] || d == [1, 1, 2, 2] {
                square_or_path = true;
            }
        }
        if !long_cycle && degs.iter().all(|&d| d == 2) {
            // all degrees two: a disjoint union of cycles; connected means one cycle
            let start = s.trailing_zeros();
            let mut reached = 1u32 << start;
            loop {
                let mut next = reached;
                let mut r = reached;
                while r != 0 {
                    let v = r.trailing_zeros() as usize;
                    r &= r - 1;
                    next |= nbr[v] & s;
                }
                if next == reached {
                    break;
                }
                reached = next;
            }
            long_cycle = reached == s;
        }
    }
    (square_or_path, long_cycle)
}

fn classifier_agrees(g: &SimplicialGraph) -> bool {
    let c = classify(g);
    let (bad4, cycle) = brute_force(g);
    let witness_ok = match &c.witness {
        None => true,
        Some(w) => {
            let idx: Vec<usize> = w.vertices.iter().map(|l| g.index_of(l).unwrap()).collect();
            let edges = g.induced(&idx).edge_count();
            (w.pattern == Pattern::C4 && edges == 4) || (w.pattern == Pattern::P4 && edges == 3)
        }
    };
    c.is_droms == !bad4 && c.is_chordal == !cycle && witness_ok
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = 0;
    for g in all_graphs(6) {
        checked += 1;
        if !classifier_agrees(&g) {
            bad += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.05..0.95);
        let edges: Vec<_> = pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
        checked += 1;
        if !classifier_agrees(&graph(n, &edges)) {
            bad += 1;
        }
    }
    // spot check the square itself
    if has_induced(&SimplicialGraph::cycle(4), Pattern::C4).is_none() {
        bad += 1;
    }
    let elapsed = start.elapsed();
    let msg = format!("{checked} graphs, {bad} disagreements, {:.1?}", elapsed);
    if bad == 0 && elapsed < Duration::from_secs(60) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_2() -> Result<String, String> {
    let mut droms = 0;
    let mut bad = 0;
    for g in all_graphs(6) {
        if let Ok(t) = decompose(&g) {
            droms += 1;
            if chi_tree(&t) != euler_char_cliques(&g) {
                bad += 1;
            }
        }
    }
    let msg = format!("{droms} Droms graphs, {bad} disagreements");
    if bad == 0 && droms > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_3() -> Result<String, String> {
    let mut chordal = 0;
    let mut bad = 0;
    for g in all_graphs(6) {
        if !classify(&g).is_chordal {
            continue;
        }
        chordal += 1;
        let flag = FlagComplex::new(&g);
        for field in [Q, F2, F3] {
            if flag.reduced_betti_numbers(field)[1..].iter().any(|&b| b != 0) {
                bad += 1;
            }
        }
    }
    let msg = format!("{chordal} chordal graphs x 3 fields, {bad} exceptions");
    if bad == 0 && chordal > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Each vertex acts by a permutation of a random support composed with a
/// power of a global cycle on separate points; adjacent vertices get disjoint
/// supports. Restricted to one orbit.
fn random_action(rng: &mut ChaCha8Rng, g: &SimplicialGraph, max_degree: usize) -> CosetAction {
    let degree = rng.gen_range(2..=max_degree);
    let cycle_len = rng.gen_range(0..=degree.min(8));
    let cycle: Vec<u32> = (0..degree as u32)
        .map(|x| if (x as usize) < cycle_len { (x + 1) % cycle_len as u32 } else { x })
        .collect();
    let cycle = Perm::from_images(cycle).unwrap();
    let n = g.vertex_count();
    let mut supports: Vec<Vec<usize>> = Vec::new();
    let mut images = Vec::new();
    for v in 0..n {
        let blocked: Vec<usize> = (0..v)
            .filter(|&u| g.adjacent(u, v))
            .flat_map(|u| supports[u].clone())
            .collect();
        let support: Vec<usize> = (cycle_len..degree)
            .filter(|x| !blocked.contains(x) && rng.gen_bool(0.5))
            .collect();
        let mut shuffled = support.clone();
        shuffled.shuffle(rng);
        let mut local: Vec<u32> = (0..degree as u32).collect();
        for (&from, &to) in support.iter().zip(&shuffled) {
            local[from] = to as u32;
        }
        let power = rng.gen_range(0..cycle_len.max(1) as u64);
        images.push(Perm::from_images(local).unwrap().then(&cycle.pow(power)));
        supports.push(support);
    }
    let basepoint = rng.gen_range(0..degree as u32);
    CosetAction::from_orbit(g, &images, basepoint).unwrap()
}

fn criterion_4(instances: &mut Vec<Instance>) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = 0;
    let mut max_degree = 0;
    for i in 0..100 {
        let n = rng.gen_range(2..=6);
        let p = rng.gen_range(0.2..0.8);
        let edges: Vec<_> = pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
        let g = graph(n, &edges);
        // every fourth pair uses a regular congruence action
        let action = if i % 4 == 0 {
            let m = rng.gen_range(2..=3);
            let q = make_congruence(&g, m, 64).unwrap_or_else(|_| make_congruence(&g, 2, 64).unwrap());
            q.regular_action()
        } else {
            random_action(&mut rng, &g, 64)
        };
        max_degree = max_degree.max(action.degree());
        for field in [Q, F2] {
            let complex = salvetti_boundaries(&g, &action, field).unwrap();
            if !complex.square_defects().is_empty() {
                bad += 1;
            }
            let dims = cover_homology(&g, &action, field).unwrap();
            instances.push((format!("random #{i} over {field}"), action.degree(), euler_char_cliques(&g), dims));
        }
    }
    let msg = format!("100 pairs x 2 fields, max degree {max_degree}, {bad} exceptions");
    if bad == 0 && max_degree <= 64 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_5(instances: &mut Vec<Instance>) -> Result<String, String> {
    let start = Instant::now();
    let mut problems = Vec::new();
    for k in [2usize, 3] {
        let g = SimplicialGraph::edgeless(k);
        let c = chain(&g, &[2, 4, 8], DEFAULT_DEGREE_CAP).map_err(|e| e.to_string())?;
        c.verify().map_err(|e| e.to_string())?;
        let mut last_gap: Option<Rational> = None;
        for q in c.quotients() {
            let n = q.order();
            let dims = cover_homology(&g, &q.regular_action(), Q).unwrap();
            let want = ns_rank_oracle(k as u64, n as u64) as usize;
            if dims[1] != want {
                problems.push(format!("F_{k} N={n}: H_1 {} != {want}", dims[1]));
            }
            let ratio = Rational::new(dims[1] as i64, n as i64);
            let expected = Rational::from_integer(k as i64 - 1) + Rational::new(1, n as i64);
            if ratio != expected {
                problems.push(format!("F_{k} N={n}: ratio {ratio} != {expected}"));
            }
            let gap = ratio - Rational::from_integer(k as i64 - 1);
            if last_gap.is_some_and(|prev| gap >= prev) {
                problems.push(format!("F_{k}: not monotone at N={n}"));
            }
            last_gap = Some(gap);
            instances.push((format!("F_{k} N={n}"), n, euler_char_cliques(&g), dims));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(120) {
        problems.push(format!("took {elapsed:.1?}"));
    }
    if problems.is_empty() {
        Ok(format!("F_2, F_3 at m = 2, 4, 8 exact, {elapsed:.1?}"))
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_6(instances: &mut Vec<Instance>) -> Result<String, String> {
    let start = Instant::now();
    let g = SimplicialGraph::cycle(4);
    let mut problems = Vec::new();
    let mut h1_ratios = Vec::new();
    let mut h2_gaps = Vec::new();
    for (m, h2, ratio) in [(2u64, 25usize, Rational::new(25, 16)), (3, 100, Rational::new(100, 81))] {
        let q = make_congruence(&g, m, DEFAULT_DEGREE_CAP).unwrap();
        let n = q.order();
        let dims = cover_homology(&g, &q.regular_action(), Q).unwrap();
        // Künneth for F_2 x F_2 with both factors reduced mod m
        let b = ns_rank_oracle(2, m * m) as usize;
        let kunneth = vec![1, 2 * b, b * b];
        if dims != kunneth {
            problems.push(format!("m={m}: dims {dims:?} != {kunneth:?}"));
        }
        if dims[2] != h2 || Rational::new(dims[2] as i64, n as i64) != ratio {
            problems.push(format!("m={m}: H_2 = {}", dims[2]));
        }
        h1_ratios.push(Rational::new(dims[1] as i64, n as i64));
        let gap = Rational::new(dims[2] as i64, n as i64) - Rational::from_integer(1);
        h2_gaps.push(if gap < Rational::from_integer(0) { -gap } else { gap });
        instances.push((format!("C4 m={m}"), n, euler_char_cliques(&g), dims));
    }
    if h1_ratios[1] >= h1_ratios[0] {
        problems.push("H_1 ratio not decreasing".into());
    }
    if h2_gaps[1] >= h2_gaps[0] {
        problems.push("H_2 ratio not approaching chi = 1".into());
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(600) {
        problems.push(format!("took {elapsed:.1?}"));
    }
    if problems.is_empty() {
        Ok(format!(
            "H_2 = 25, 100; ratios 25/16, 100/81; H_1 ratios {}, {}; {elapsed:.1?}",
            h1_ratios[0], h1_ratios[1]
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_7(instances: &[Instance]) -> Result<String, String> {
    let bad: Vec<&str> = instances
        .iter()
        .filter(|(_, n, chi, dims)| {
            let sum: i64 = dims
                .iter()
                .enumerate()
                .map(|(j, &d)| if j % 2 == 0 { d as i64 } else { -(d as i64) })
                .sum();
            sum != *n as i64 * chi
        })
        .map(|(label, ..)| label.as_str())
        .collect();
    if bad.is_empty() && !instances.is_empty() {
        Ok(format!("{} instances, alternating sums equal N * chi", instances.len()))
    } else {
        Err(format!("{} of {} instances fail: {bad:?}", bad.len(), instances.len()))
    }
}

fn criterion_8() -> Result<String, String> {
    let f2 = SimplicialGraph::edgeless(2);
    let q1 = make_congruence(&f2, 2, DEFAULT_DEGREE_CAP).unwrap();
    let q2 = make_congruence(&f2, 2, DEFAULT_DEGREE_CAP).unwrap();
    let iso: Vec<u32> = (0..4).collect();
    let fp = fiber_action(&q1, &q2, &iso, DEFAULT_DEGREE_CAP).map_err(|e| e.to_string())?;
    fp.action.validate(&fp.graph).map_err(|e| e.to_string())?;
    let check = fp.check_subdirect();
    let msg = format!(
        "index {}, projection indices {:?}, full {}",
        check.index, check.projection_index, check.full
    );
    let witnesses_ok = check.fullness.len() == 2 && check.fullness.iter().all(|w| w.exponent >= 1);
    if check.index == 4 && check.projections_surjective && check.full && witnesses_ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_9() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let c4 = dir.path().join("c4.graph");
    let f2 = dir.path().join("f2.graph");
    std::fs::write(&c4, "vertices: a b c d\nedges: a-b b-c c-d d-a\n").unwrap();
    std::fs::write(&f2, "vertices: a b\n").unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_raagkit"))
            .arg("gradient")
            .arg(&c4)
            .arg("--product-of")
            .arg(&f2)
            .arg(&f2)
            .args(["--chain", "2,3,4", "--field", "q", "--max-dim", "2"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    if !a.status.success() {
        return Err(format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)));
    }
    if a.stdout != b.stdout {
        return Err("outputs differ between runs".into());
    }
    let doc: Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    let ratios: Vec<&str> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["degree"] == 2)
        .map(|r| r["ratio"].as_str().unwrap())
        .collect();
    let v2 = doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["degree"] == 2)
        .cloned()
        .unwrap_or(Value::Null);
    if ratios != ["25/16", "100/81", "289/256"] {
        return Err(format!("j=2 ratios {ratios:?}"));
    }
    if v2["prediction"] != "1" || v2["verdict"] != "MonotoneTrendTowardPrediction" {
        return Err(format!("j=2 verdict {v2}"));
    }
    Ok(format!("{} bytes identical over two runs; j=2 ratios {}", a.stdout.len(), ratios.join(", ")))
}

fn guarded(f: impl FnOnce() -> Result<String, String>) -> Result<String, String> {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() {
    let mut instances = Vec::new();
    let results = [
        ("1 classifier vs brute force", guarded(criterion_1)),
        ("2 chi cross-check", guarded(criterion_2)),
        ("3 chordal flag complexes acyclic", guarded(criterion_3)),
        ("4 boundary squares to zero", guarded(|| criterion_4(&mut instances))),
        ("5 free-group exactness", guarded(|| criterion_5(&mut instances))),
        ("6 product/Kunneth exactness", guarded(|| criterion_6(&mut instances))),
        ("7 Euler multiplicativity", guarded(|| criterion_7(&instances))),
        ("8 fiber product subdirectness", guarded(criterion_8)),
        ("9 CLI determinism", guarded(criterion_9)),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
