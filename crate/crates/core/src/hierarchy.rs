//! Z∗-closure decomposition of Droms RAAGs.
//!
//! A Droms RAAG splits as `Z^m × (G_1 ∗ ⋯ ∗ G_n)` where the `Z^m` factor is
//! generated by the universal vertices and the free factors come from the
//! connected components of what remains. Iterating bottoms out at free groups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{classify, SimplicialGraph, Witness};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("graph is not Droms (induced {}: {})", .0.pattern, .0.vertices.join(","))]
    NotDroms(Witness),
}

impl HierarchyError {
    pub fn code(&self) -> &'static str {
        match self {
            HierarchyError::NotDroms(_) => "hierarchy.not_droms",
        }
    }
}

/// One node of the decomposition. Every node records the vertex labels of
/// the induced subgraph it was built from, in declared order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecompositionTree {
    /// Free group of the given rank on an edgeless induced subgraph.
    /// Rank 0 is the trivial group and only occurs below a `Product`.
    Free { rank: usize, vertices: Vec<String> },
    /// `Z^m × child`, `m >= 1`.
    Product {
        m: usize,
        child: Box<DecompositionTree>,
        vertices: Vec<String>,
    },
    /// Free product of at least two factors.
    FreeProduct {
        children: Vec<DecompositionTree>,
        vertices: Vec<String>,
    },
}

impl DecompositionTree {
    pub fn vertices(&self) -> &[String] {
        match self {
            DecompositionTree::Free { vertices, .. }
            | DecompositionTree::Product { vertices, .. }
            | DecompositionTree::FreeProduct { vertices, .. } => vertices,
        }
    }

    /// True when the group is non-abelian with trivial center.
    pub fn is_centerless_nonabelian(&self) -> bool {
        match self {
            DecompositionTree::Free { rank, .. } => *rank >= 2,
            DecompositionTree::Product { .. } => false,
            DecompositionTree::FreeProduct { .. } => true,
        }
    }

    /// Checks the structural invariants of the tree.
    pub fn is_valid(&self) -> bool {
        match self {
            DecompositionTree::Free { rank, vertices } => *rank == vertices.len(),
            DecompositionTree::Product { m, child, vertices } => {
                *m >= 1 && child.is_valid() && vertices.len() == m + child.vertices().len()
            }
            DecompositionTree::FreeProduct { children, vertices } => {
                children.len() >= 2
                    && children.iter().all(DecompositionTree::is_valid)
                    && children.iter().map(|c| c.vertices().len()).sum::<usize>()
                        == vertices.len()
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tree serializes")
    }

    /// Rebuilds the defining graph: a `Product` joins a complete graph on its
    /// central vertices to the child, a `FreeProduct` is a disjoint union.
    pub fn reconstruct(&self) -> SimplicialGraph {
        let labels = self.vertices().to_vec();
        let mut edges = Vec::new();
        self.collect_edges(&mut edges);
        let edges: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let vs: Vec<&str> = labels.iter().map(String::as_str).collect();
        SimplicialGraph::from_labels(&vs, &edges).expect("tree vertices are distinct")
    }

    fn collect_edges(&self, out: &mut Vec<(String, String)>) {
        match self {
            DecompositionTree::Free { .. } => {}
            DecompositionTree::Product { child, vertices, .. } => {
                let below = child.vertices();
                let central: Vec<&String> =
                    vertices.iter().filter(|v| !below.contains(v)).collect();
                for (i, a) in central.iter().enumerate() {
                    for b in &central[i + 1..] {
                        out.push(((*a).clone(), (*b).clone()));
                    }
                    for b in below {
                        out.push(((*a).clone(), b.clone()));
                    }
                }
                child.collect_edges(out);
            }
            DecompositionTree::FreeProduct { children, .. } => {
                for c in children {
                    c.collect_edges(out);
                }
            }
        }
    }
}

/// Decomposes a Droms graph. Fails with the forbidden-pattern witness
/// otherwise.
pub fn decompose(graph: &SimplicialGraph) -> Result<DecompositionTree, HierarchyError> {
    let class = classify(graph);
    if let Some(w) = class.witness {
        return Err(HierarchyError::NotDroms(w));
    }
    let all: Vec<usize> = (0..graph.vertex_count()).collect();
    Ok(build(graph, &all))
}

fn names(g: &SimplicialGraph, subset: &[usize]) -> Vec<String> {
    subset.iter().map(|&v| g.label(v).to_string()).collect()
}

fn has_edge_within(g: &SimplicialGraph, subset: &[usize]) -> bool {
    subset
        .iter()
        .enumerate()
        .any(|(i, &a)| subset[i + 1..].iter().any(|&b| g.adjacent(a, b)))
}

fn build(g: &SimplicialGraph, subset: &[usize]) -> DecompositionTree {
    if !has_edge_within(g, subset) {
        return DecompositionTree::Free {
            rank: subset.len(),
            vertices: names(g, subset),
        };
    }
    let (central, rest): (Vec<usize>, Vec<usize>) = subset
        .iter()
        .partition(|&&v| subset.iter().all(|&u| u == v || g.adjacent(u, v)));
    if central.is_empty() {
        return split_free(g, subset);
    }
    let child = if rest.is_empty() {
        DecompositionTree::Free {
            rank: 0,
            vertices: vec![],
        }
    } else {
        split_free(g, &rest)
    };
    DecompositionTree::Product {
        m: central.len(),
        child: Box::new(child),
        vertices: names(g, subset),
    }
}

fn split_free(g: &SimplicialGraph, subset: &[usize]) -> DecompositionTree {
    if !has_edge_within(g, subset) {
        return DecompositionTree::Free {
            rank: subset.len(),
            vertices: names(g, subset),
        };
    }
    let comps = g.components_of(subset);
    // A connected Droms graph on two or more vertices has a universal vertex,
    // and it would have been peeled off by the caller.
    assert!(comps.len() >= 2, "connected remainder without universal vertex");
    DecompositionTree::FreeProduct {
        children: comps.iter().map(|c| build(g, c)).collect(),
        vertices: names(g, subset),
    }
}

/// Smallest `k` with the group in the `k`-th stage of the Z∗-closure of the
/// finitely generated free groups.
pub fn level(tree: &DecompositionTree) -> usize {
    match tree {
        DecompositionTree::Free { .. } => 0,
        DecompositionTree::Product { m, child, .. } => match child.as_ref() {
            // Z itself is free
            DecompositionTree::Free { rank, .. } => usize::from(*m != 1 || *rank != 0),
            DecompositionTree::FreeProduct { children, .. } => max_level(children) + 1,
            DecompositionTree::Product { .. } => level(child).max(1),
        },
        DecompositionTree::FreeProduct { children, .. } => {
            let top = max_level(children);
            if top == 0 {
                0
            } else {
                top + 1
            }
        }
    }
}

fn max_level(children: &[DecompositionTree]) -> usize {
    let mut top = 0;
    for c in children {
        top = top.max(level(c));
    }
    top
}

/// Euler characteristic from the tree: `1 - k` for `F_k`, `0` for any
/// non-trivial direct factor `Z^m`, and `Σ χ(G_i) - (n - 1)` for free
/// products.
pub fn chi_tree(tree: &DecompositionTree) -> i64 {
    match tree {
        DecompositionTree::Free { rank, .. } => 1 - *rank as i64,
        DecompositionTree::Product { .. } => 0,
        DecompositionTree::FreeProduct { children, .. } => {
            children.iter().map(chi_tree).sum::<i64>() - (children.len() as i64 - 1)
        }
    }
}

/// Number of universal vertices (the rank of the center of the RAAG).
pub fn center_rank(graph: &SimplicialGraph) -> usize {
    let n = graph.vertex_count();
    (0..n)
        .filter(|&v| (0..n).all(|u| u == v || graph.adjacent(u, v)))
        .count()
}

/// Euler characteristic of a finite graph of groups: vertex terms minus edge
/// terms.
pub fn graph_of_groups_chi(vertex_chis: &[i64], edge_chis: &[i64]) -> i64 {
    vertex_chis.iter().sum::<i64>() - edge_chis.iter().sum::<i64>()
}
