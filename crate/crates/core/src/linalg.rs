//! Sparse matrices over Q(i) with exact rank and kernel computation.
//!
//! Rank and null spaces are obtained by pivoted exact Gaussian elimination on
//! sparse rows. Pivots are chosen to limit fill-in (fewest nonzeros first,
//! unit entries preferred), which keeps the elimination fast on the
//! incidence-like matrices produced by the differential operators.

use std::collections::BTreeMap;

use crate::scalar::GaussianRational;

/// A sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(usize, GaussianRational)>;

/// `dst += c * src` on sparse vectors, dropping cancellations.
pub fn axpy(dst: &SparseVec, c: &GaussianRational, src: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        match (dst.get(i), src.get(j)) {
            (Some((di, dv)), Some((si, sv))) if di == si => {
                let v = dv + &(c * sv);
                if !v.is_zero() {
                    out.push((*di, v));
                }
                i += 1;
                j += 1;
            }
            (Some((di, dv)), Some((si, _))) if di < si => {
                out.push((*di, dv.clone()));
                i += 1;
            }
            (Some(_), Some((si, sv))) => {
                let v = c * sv;
                if !v.is_zero() {
                    out.push((*si, v));
                }
                j += 1;
            }
            (Some((di, dv)), None) => {
                out.push((*di, dv.clone()));
                i += 1;
            }
            (None, Some((si, sv))) => {
                let v = c * sv;
                if !v.is_zero() {
                    out.push((*si, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// A sparse `rows x cols` matrix over Q(i). Stored column-major; absent
/// entries are zero and stored entries are never zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for k in 0..n {
            m.columns[k].push((k, GaussianRational::one()));
        }
        m
    }

    /// Builds a matrix from full sparse columns (each sorted, zero-free).
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        let cols = columns.len();
        for col in &columns {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.iter().all(|(r, v)| *r < rows && !v.is_zero()));
        }
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    /// Inserts or overwrites an entry; a zero value clears it.
    pub fn set(&mut self, row: usize, col: usize, value: GaussianRational) {
        assert!(row < self.rows && col < self.cols, "entry ({row},{col}) out of bounds");
        let column = &mut self.columns[col];
        match column.binary_search_by_key(&row, |(r, _)| *r) {
            Ok(pos) => {
                if value.is_zero() {
                    column.remove(pos);
                } else {
                    column[pos].1 = value;
                }
            }
            Err(pos) => {
                if !value.is_zero() {
                    column.insert(pos, (row, value));
                }
            }
        }
    }

    pub fn get(&self, row: usize, col: usize) -> GaussianRational {
        self.columns[col]
            .binary_search_by_key(&row, |(r, _)| *r)
            .map(|pos| self.columns[col][pos].1.clone())
            .unwrap_or_else(|_| GaussianRational::zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GaussianRational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (i, j, v) in self.entries() {
            cols[i].push((j, v.clone()));
        }
        for col in &mut cols {
            col.sort_by_key(|(r, _)| *r);
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns: cols }
    }

    /// Matrix-vector product `self * v` for a sparse `v` over the columns.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        for (j, c) in v {
            for (i, a) in &self.columns[*j] {
                let e = acc.entry(*i).or_insert_with(GaussianRational::zero);
                *e += &(a * c);
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    fn row_vectors(&self) -> Vec<SparseVec> {
        let t = self.transpose();
        t.columns
    }

    /// Exact rank over Q(i).
    pub fn rank(&self) -> usize {
        echelon(self.row_vectors()).len()
    }

    /// An exact basis of the right null space, `cols - rank` sparse vectors.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let pivots = echelon(self.row_vectors());
        let pivot_cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }

        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|c| !is_pivot[*c]) {
            // Solve R v = 0 with v[free] = 1 and all other free coordinates 0,
            // walking the pivot rows from the right.
            let mut v: BTreeMap<usize, GaussianRational> = BTreeMap::new();
            v.insert(free, GaussianRational::one());
            for (pcol, row) in pivots.iter().rev() {
                let mut s = GaussianRational::zero();
                for (c, a) in row.iter().skip(1) {
                    if let Some(vc) = v.get(c) {
                        s += &(a * vc);
                    }
                }
                if !s.is_zero() {
                    let lead = &row.first().expect("pivot row nonempty").1;
                    v.insert(*pcol, -(&s / lead));
                }
            }
            basis.push(v.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
        basis
    }

    /// Rank of the column span of `self` together with extra vectors.
    pub fn rank_with(&self, extra: &[SparseVec]) -> usize {
        let mut cols = self.columns.clone();
        cols.extend(extra.iter().cloned());
        SparseMatrix::from_columns(self.rows, cols).rank()
    }
}

/// Reduces the given rows to echelon form. Returns the pivot rows keyed by
/// their leading column, in increasing column order. Rows are combined only
/// when their leading columns collide, which keeps fill-in local.
fn echelon(rows: Vec<SparseVec>) -> Vec<(usize, SparseVec)> {
    let mut buckets: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
    for row in rows {
        if let Some((lead, _)) = row.first() {
            buckets.entry(*lead).or_default().push(row);
        }
    }

    let mut pivots: Vec<(usize, SparseVec)> = Vec::new();
    while let Some((&col, _)) = buckets.iter().next() {
        let mut bucket = buckets.remove(&col).expect("bucket exists");
        // Deterministic pivot choice: prefer unit leading entries, then short rows.
        let pick = bucket
            .iter()
            .enumerate()
            .min_by_key(|(i, r)| (!r[0].1.is_unit_like() as usize, r.len(), *i))
            .map(|(i, _)| i)
            .expect("bucket nonempty");
        let pivot = bucket.swap_remove(pick);
        let lead = pivot[0].1.clone();
        for row in bucket {
            let factor = -(&row[0].1 / &lead);
            let reduced = axpy(&row, &factor, &pivot);
            debug_assert!(reduced.first().is_none_or(|(c, _)| *c > col));
            if let Some((newlead, _)) = reduced.first() {
                buckets.entry(*newlead).or_default().push(reduced);
            }
        }
        pivots.push((col, pivot));
    }
    pivots
}
