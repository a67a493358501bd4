#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use raag_core::graph::SimplicialGraph;
use raag_core::quotients::{CosetAction, Perm};

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn graph_from_mask(n: usize, mask: u64) -> SimplicialGraph {
    let edges: Vec<(usize, usize)> = pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    SimplicialGraph::from_indices(labels(n), &edges).unwrap()
}

/// Every labelled graph on `1..=max_n` vertices.
pub fn all_graphs(max_n: usize) -> impl Iterator<Item = SimplicialGraph> {
    (1..=max_n).flat_map(|n| {
        let m = n * (n - 1) / 2;
        (0..1u64 << m).map(move |mask| graph_from_mask(n, mask))
    })
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> SimplicialGraph {
    let edges: Vec<(usize, usize)> = pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    SimplicialGraph::from_indices(labels(n), &edges).unwrap()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn induced_degrees(g: &SimplicialGraph, s: &[usize]) -> Vec<usize> {
    s.iter()
        .map(|&a| s.iter().filter(|&&b| g.adjacent(a, b)).count())
        .collect()
}

/// Some 4-subset induces a square or a path on four vertices.
pub fn brute_not_droms(g: &SimplicialGraph) -> bool {
    subsets(g.vertex_count(), 4).iter().any(|s| {
        let mut d = induced_degrees(g, s);
        d.sort_unstable();
        d == [2, 2, 2, 2] || d == [1, 1, 2, 2]
    })
}

fn connected(g: &SimplicialGraph, s: &[usize]) -> bool {
    g.components_of(s).len() == 1
}

/// Some subset of four or more vertices induces a cycle.
pub fn brute_not_chordal(g: &SimplicialGraph) -> bool {
    let n = g.vertex_count();
    (4..=n).any(|k| {
        subsets(n, k)
            .iter()
            .any(|s| induced_degrees(g, s).iter().all(|&d| d == 2) && connected(g, s))
    })
}

/// Maximal cliques by Bron–Kerbosch with pivoting, expanded to all cliques.
pub fn oracle_clique_counts(g: &SimplicialGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let nbr = |v: usize| -> u64 { (0..n).filter(|&u| g.adjacent(u, v)).fold(0, |m, u| m | 1 << u) };
    let mut maximal = Vec::new();
    fn bk(r: u64, mut p: u64, mut x: u64, nbr: &dyn Fn(usize) -> u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !nbr(pivot);
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            bk(r | 1 << v, p & nbr(v), x & nbr(v), nbr, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    bk(0, (1u64 << n) - 1, 0, &nbr, &mut maximal);
    let mut all = BTreeSet::new();
    for m in maximal {
        let bits: Vec<u64> = (0..n).filter(|&v| m >> v & 1 == 1).map(|v| 1 << v).collect();
        for sub in 0..1u64 << bits.len() {
            let s = (0..bits.len())
                .filter(|&i| sub >> i & 1 == 1)
                .fold(0, |acc, i| acc | bits[i]);
            all.insert(s);
        }
    }
    let mut counts = vec![0; n + 1];
    for s in all {
        counts[s.count_ones() as usize] += 1;
    }
    while counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}

fn random_perm_on<R: Rng>(rng: &mut R, degree: usize, support: &[usize]) -> Vec<u32> {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut shuffled = support.to_vec();
    shuffled.shuffle(rng);
    for (&from, &to) in support.iter().zip(&shuffled) {
        images[from] = to as u32;
    }
    images
}

/// A transitive action of the RAAG of degree at most `max_degree`.
///
/// Each vertex acts by a permutation of a random support composed with a
/// power of one global cycle on separate points. Supports of adjacent
/// vertices are disjoint, so their images commute; other pairs usually do
/// not. The result is restricted to the orbit of a random point.
pub fn random_action<R: Rng>(rng: &mut R, g: &SimplicialGraph, max_degree: usize) -> CosetAction {
    let degree = rng.gen_range(1..=max_degree);
    let cycle_len = rng.gen_range(0..=degree.min(8));
    let cycle: Vec<u32> = (0..degree as u32)
        .map(|x| {
            if (x as usize) < cycle_len {
                (x + 1) % cycle_len as u32
            } else {
                x
            }
        })
        .collect();
    let cycle = Perm::from_images(cycle).unwrap();
    let n = g.vertex_count();
    let mut supports: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut images = Vec::with_capacity(n);
    for v in 0..n {
        let blocked: BTreeSet<usize> = (0..v)
            .filter(|&u| g.adjacent(u, v))
            .flat_map(|u| supports[u].iter().copied())
            .collect();
        let support: Vec<usize> = (cycle_len..degree)
            .filter(|x| !blocked.contains(x) && rng.gen_bool(0.5))
            .collect();
        let local = Perm::from_images(random_perm_on(rng, degree, &support)).unwrap();
        let power = rng.gen_range(0..cycle_len.max(1) as u64);
        images.push(local.then(&cycle.pow(power)));
        supports.push(support);
    }
    let basepoint = rng.gen_range(0..degree as u32);
    CosetAction::from_orbit(g, &images, basepoint).unwrap()
}
