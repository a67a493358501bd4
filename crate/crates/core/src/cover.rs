//! Homology of finite-index subgroups through the Salvetti complex with
//! coefficients in a coset permutation module.
//!
//! For a transitive action of `GX` on `N` cosets of `B`, the cellular chain
//! complex of the Salvetti complex with coefficients in `K[cosets]` computes
//! `H_*(B; K)`. The module for a `j`-cell (a `j`-clique) is `K^N`, and the
//! boundary of `e_σ`, `σ = {v_1 < … < v_j}`, is
//! `Σ_i (−1)^{i−1} (P(v_i) − I) e_{σ ∖ v_i}`.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{cliques, SimplicialGraph};
use crate::homology::{ExactField, FieldMatrix};
use crate::quotients::{orbit_sizes, CosetAction};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("action has {found} generator images but the graph has {expected} vertices")]
    VertexMismatch { expected: usize, found: usize },
    #[error("boundary maps do not compose to zero at degree {0}")]
    ChainComplexBroken(usize),
}

impl CoverError {
    pub fn code(&self) -> &'static str {
        match self {
            CoverError::VertexMismatch { .. } => "cover.vertex_mismatch",
            CoverError::ChainComplexBroken(_) => "cover.chain_complex_broken",
        }
    }
}

/// Chain complex `C_j = K^{N · n_j}`, block per clique, cosets fastest
/// within a block.
#[derive(Debug, Clone)]
pub struct InducedChainComplex {
    field: ExactField,
    degree: usize,
    clique_counts: Vec<usize>,
    orbits: usize,
    /// `boundaries[j - 1]` is `∂_j` for `j = 1..=ω`.
    boundaries: Vec<FieldMatrix>,
}

impl InducedChainComplex {
    pub fn field(&self) -> ExactField {
        self.field
    }

    /// Number of cosets `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn clique_counts(&self) -> &[usize] {
        &self.clique_counts
    }

    /// Top degree (clique number).
    pub fn top(&self) -> usize {
        self.clique_counts.len() - 1
    }

    pub fn chain_rank(&self, j: usize) -> usize {
        self.degree * self.clique_counts.get(j).copied().unwrap_or(0)
    }

    /// `∂_j`, `1 <= j <= top`.
    pub fn boundary(&self, j: usize) -> &FieldMatrix {
        &self.boundaries[j - 1]
    }

    /// Degrees `j` with `∂_j ∘ ∂_{j+1} ≠ 0`.
    pub fn square_defects(&self) -> Vec<usize> {
        (1..self.top())
            .into_par_iter()
            .filter(|&j| !self.boundary(j).mul(self.boundary(j + 1)).is_zero())
            .collect()
    }
}

/// Assembles the boundary matrices for `graph` acting through `action`.
pub fn salvetti_boundaries(
    graph: &SimplicialGraph,
    action: &CosetAction,
    field: ExactField,
) -> Result<InducedChainComplex, CoverError> {
    if action.images().len() != graph.vertex_count() {
        return Err(CoverError::VertexMismatch {
            expected: graph.vertex_count(),
            found: action.images().len(),
        });
    }
    let table = cliques(graph);
    let n = action.degree();
    let boundaries = (1..=table.clique_number())
        .into_par_iter()
        .map(|j| {
            let cols = table.of_size(j);
            let rows = table.count(j - 1);
            let mut triplets = Vec::new();
            for (c, sigma) in cols.iter().enumerate() {
                for (i, &v) in sigma.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let mut face = sigma.clone();
                    face.remove(i);
                    let r = table.position(&face).expect("cliques are closed under faces");
                    let perm = action.image(v);
                    for x in 0..n as u32 {
                        let y = perm.apply(x);
                        if y != x {
                            let col = c * n + x as usize;
                            triplets.push((r * n + y as usize, col, sign));
                            triplets.push((r * n + x as usize, col, -sign));
                        }
                    }
                }
            }
            FieldMatrix::from_triplets(field, rows * n, cols.len() * n, triplets)
        })
        .collect();
    Ok(InducedChainComplex {
        field,
        degree: n,
        clique_counts: table.counts(),
        orbits: orbit_sizes(n, action.images()).len(),
        boundaries,
    })
}

/// `dim_K H_j` for `j = 0..=top`. Fails if `∂² ≠ 0`.
pub fn homology_dims(complex: &InducedChainComplex) -> Result<Vec<usize>, CoverError> {
    if let Some(&j) = complex.square_defects().first() {
        return Err(CoverError::ChainComplexBroken(j));
    }
    let top = complex.top();
    let mut ranks: Vec<usize> = vec![0; top + 2];
    let computed: Vec<usize> = (1..=top)
        .into_par_iter()
        .map(|j| complex.boundary(j).rank())
        .collect();
    ranks[1..=top].copy_from_slice(&computed);
    let dims: Vec<usize> = (0..=top)
        .map(|j| complex.chain_rank(j) - ranks[j] - ranks[j + 1])
        .collect();
    debug_assert_eq!(dims[0], complex.orbits);
    Ok(dims)
}

/// Convenience wrapper: builds the complex and returns its homology.
pub fn cover_homology(
    graph: &SimplicialGraph,
    action: &CosetAction,
    field: ExactField,
) -> Result<Vec<usize>, CoverError> {
    homology_dims(&salvetti_boundaries(graph, action, field)?)
}

/// Number of orbits of the action, which must equal `dim H_0`.
pub fn orbit_count(action: &CosetAction) -> usize {
    orbit_sizes(action.degree(), action.images()).len()
}

/// Rank of a subgroup of index `index` in a free group of rank `free_rank`.
pub fn ns_rank_oracle(free_rank: u64, index: u64) -> u64 {
    1 + index * (free_rank - 1)
}

/// Homology dimensions of a product from those of its factors.
pub fn kunneth_oracle(dims1: &[u64], dims2: &[u64]) -> Vec<u64> {
    if dims1.is_empty() || dims2.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; dims1.len() + dims2.len() - 1];
    for (a, x) in dims1.iter().enumerate() {
        for (b, y) in dims2.iter().enumerate() {
            out[a + b] += x * y;
        }
    }
    out
}

/// Homology table as CSV with header `j,field,N,dim,ratio`.
pub fn homology_csv(dims: &[usize], degree: usize, field: ExactField) -> String {
    let mut out = String::from("j,field,N,dim,ratio\n");
    for (j, d) in dims.iter().enumerate() {
        let ratio = num_rational::Ratio::new(*d as i64, degree as i64);
        out.push_str(&format!("{j},{field},{degree},{d},{ratio}\n"));
    }
    out
}
