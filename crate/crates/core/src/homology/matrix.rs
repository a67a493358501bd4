//! Integer-entry matrices read over an exact field, with exact rank.

use std::collections::BTreeSet;

use serde_json::Value;

use super::field::{Arith, ExactField, ModP, Rat};

/// Matrices with at most this many entries go through dense elimination.
pub const DENSE_ENTRY_LIMIT: usize = 40_000;

/// Matrix over `K` whose entries are images of integers. Stored as sorted
/// sparse rows; semantics are dense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: ExactField,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl FieldMatrix {
    pub fn zeros(field: ExactField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn from_dense(field: ExactField, entries: &[Vec<i64>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (r, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (c, &v) in row.iter().enumerate() {
                triplets.push((r, c, v));
            }
        }
        Self::from_triplets(field, rows, cols, triplets)
    }

    /// Duplicate positions are summed.
    pub fn from_triplets(
        field: ExactField,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        let mut data: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            data[r].push((c, v));
        }
        for row in &mut data {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.iter_mut().for_each(|e| e.1 = field.reduce(e.1));
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        FieldMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r]
            .binary_search_by_key(&c, |e| e.0)
            .map_or(0, |i| self.data[r][i].1)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                out[r][c] = v;
            }
        }
        out
    }

    /// Dense JSON array of rows.
    pub fn to_json(&self) -> Value {
        Value::from(
            self.to_dense()
                .into_iter()
                .map(Value::from)
                .collect::<Vec<_>>(),
        )
    }

    /// Product `self * other`, reduced in the field.
    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        assert_eq!(self.field, other.field, "field mismatch in product");
        let p = self.field.characteristic() as i128;
        let mut triplets = Vec::new();
        let mut acc: Vec<i128> = vec![0; other.cols];
        let mut touched = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    if acc[c] == 0 {
                        touched.push(c);
                    }
                    acc[c] += a as i128 * b as i128;
                    if p > 0 {
                        acc[c] %= p;
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &c in &touched {
                if acc[c] != 0 {
                    let v = i64::try_from(acc[c]).expect("product entry overflows i64");
                    triplets.push((r, c, v));
                }
                acc[c] = 0;
            }
            touched.clear();
        }
        FieldMatrix::from_triplets(self.field, self.rows, other.cols, triplets)
    }

    /// Exact rank over the matrix's field.
    pub fn rank(&self) -> usize {
        match self.field {
            ExactField::Rationals => self.rank_with(&Rat),
            ExactField::PrimeField(p) => self.rank_with(&ModP(p)),
        }
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    fn rank_with<F: Arith>(&self, f: &F) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.rows * self.cols <= DENSE_ENTRY_LIMIT {
            dense_rank(f, self.to_dense_field(f), self.cols)
        } else {
            let rows = self
                .data
                .iter()
                .map(|row| row.iter().map(|&(c, v)| (c, f.from_int(v))).collect())
                .collect();
            sparse_rank(f, rows, self.cols)
        }
    }

    fn to_dense_field<F: Arith>(&self, f: &F) -> Vec<Vec<F::Elem>> {
        let zero = f.from_int(0);
        let mut out = vec![vec![zero; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                out[r][c] = f.from_int(v);
            }
        }
        out
    }
}

fn dense_rank<F: Arith>(f: &F, mut m: Vec<Vec<F::Elem>>, cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !f.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            if f.is_zero(&row[col]) {
                continue;
            }
            let factor = f.div(&row[col], &prow[col]);
            for c in col..cols {
                if !f.is_zero(&prow[c]) {
                    row[c] = f.sub_mul(&row[c], &factor, &prow[c]);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Sparse elimination with a Markowitz-style pivot choice: the shortest
/// remaining row is the pivot row, and within it the column touching the
/// fewest other rows.
fn sparse_rank<F: Arith>(f: &F, mut rows: Vec<Vec<(usize, F::Elem)>>, cols: usize) -> usize {
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (r, row) in rows.iter_mut().enumerate() {
        row.retain(|(_, v)| !f.is_zero(v));
        for (c, _) in row.iter() {
            col_rows[*c].insert(r);
        }
        if !row.is_empty() {
            queue.insert((row.len(), r));
        }
    }
    let mut rank = 0;
    while let Some((len, r)) = queue.pop_first() {
        let pivot_row = std::mem::take(&mut rows[r]);
        debug_assert_eq!(pivot_row.len(), len);
        let (pc, pv) = pivot_row
            .iter()
            .min_by_key(|(c, _)| (col_rows[*c].len(), *c))
            .map(|(c, v)| (*c, v.clone()))
            .expect("queued rows are non-empty");
        for (c, _) in &pivot_row {
            col_rows[*c].remove(&r);
        }
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for s in targets {
            let old = std::mem::take(&mut rows[s]);
            queue.remove(&(old.len(), s));
            let at = old.binary_search_by_key(&pc, |e| e.0).expect("column index is consistent");
            let factor = f.div(&old[at].1, &pv);
            let new = eliminate(f, &old, &factor, &pivot_row, s, &mut col_rows);
            if !new.is_empty() {
                queue.insert((new.len(), s));
            }
            rows[s] = new;
        }
        rank += 1;
    }
    rank
}

/// `target - factor * pivot`, keeping the column index in sync.
fn eliminate<F: Arith>(
    f: &F,
    target: &[(usize, F::Elem)],
    factor: &F::Elem,
    pivot: &[(usize, F::Elem)],
    row_id: usize,
    col_rows: &mut [BTreeSet<usize>],
) -> Vec<(usize, F::Elem)> {
    let zero = f.from_int(0);
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else if cj < ci {
            let v = f.sub_mul(&zero, factor, &pivot[j].1);
            col_rows[cj].insert(row_id);
            out.push((cj, v));
            j += 1;
        } else {
            let v = f.sub_mul(&target[i].1, factor, &pivot[j].1);
            if f.is_zero(&v) {
                col_rows[ci].remove(&row_id);
            } else {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
