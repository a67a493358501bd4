//! Flag complexes of defining graphs and their reduced homology.

use thiserror::Error;

use super::field::ExactField;
use super::matrix::FieldMatrix;
use crate::graph::{cliques, CliqueTable, SimplicialGraph};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FlagError {
    #[error("boundary degree {j} outside 0..={max}")]
    DegreeOutOfRange { j: usize, max: usize },
}

/// The clique complex `L` of a graph. A `d`-simplex is a clique on `d + 1`
/// vertices, oriented by declared vertex order.
#[derive(Debug, Clone)]
pub struct FlagComplex {
    cliques: CliqueTable,
}

impl FlagComplex {
    pub fn new(graph: &SimplicialGraph) -> Self {
        FlagComplex {
            cliques: cliques(graph),
        }
    }

    /// Top simplex dimension (`ω - 1`).
    pub fn dim(&self) -> usize {
        self.cliques.clique_number() - 1
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.cliques.of_size(d + 1)
    }

    pub fn cliques(&self) -> &CliqueTable {
        &self.cliques
    }

    /// `∂_j : C_j → C_{j-1}` of the augmented chain complex. At `j = 0` this
    /// is the augmentation row of ones; at `j = dim + 1` it has no columns.
    pub fn boundary_matrix(&self, j: usize, field: ExactField) -> Result<FieldMatrix, FlagError> {
        let max = self.dim() + 1;
        if j > max {
            return Err(FlagError::DegreeOutOfRange { j, max });
        }
        if j == 0 {
            let n = self.simplices(0).len();
            return Ok(FieldMatrix::from_triplets(field, 1, n, (0..n).map(|c| (0, c, 1))));
        }
        let cols = self.simplices(j);
        let rows = self.simplices(j - 1).len();
        let mut triplets = Vec::new();
        for (c, simplex) in cols.iter().enumerate() {
            for i in 0..simplex.len() {
                let mut face = simplex.clone();
                face.remove(i);
                let r = self.cliques.position(&face).expect("flag complex is closed under faces");
                triplets.push((r, c, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        Ok(FieldMatrix::from_triplets(field, rows, cols.len(), triplets))
    }

    /// `b̄_j` for `j = 0..=dim`.
    pub fn reduced_betti_numbers(&self, field: ExactField) -> Vec<usize> {
        let top = self.dim();
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|j| self.boundary_matrix(j, field).expect("degree in range").rank())
            .collect();
        (0..=top)
            .map(|j| self.simplices(j).len() - ranks[j] - ranks[j + 1])
            .collect()
    }
}

/// Reduced Betti number `b̄_j(L, K)` of the flag complex of `graph`.
/// Zero above the top dimension.
pub fn reduced_betti(graph: &SimplicialGraph, j: usize, field: ExactField) -> usize {
    let table = FlagComplex::new(graph).reduced_betti_numbers(field);
    table.get(j).copied().unwrap_or(0)
}

/// Euler characteristic of the RAAG from the Salvetti cell count: one
/// `k`-cell per `k`-vertex clique, including the single 0-cell.
pub fn euler_char_cliques(graph: &SimplicialGraph) -> i64 {
    cliques(graph)
        .counts()
        .iter()
        .enumerate()
        .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// Betti table as CSV with header `j,field,reduced_betti`.
pub fn betti_csv(betti: &[usize], field: ExactField) -> String {
    let mut out = String::from("j,field,reduced_betti\n");
    for (j, b) in betti.iter().enumerate() {
        out.push_str(&format!("{j},{field},{b}\n"));
    }
    out
}
