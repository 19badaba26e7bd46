//! Exact page computation for the filtration spectral sequence of the
//! Koszul-Brylinski double complex.
//!
//! The total complex is filtered by holomorphic codegree `s = n - p`; taking
//! `delbar`-cohomology first gives a first page of Dolbeault dimensions
//! `E_1^{s,t} = h^{n-s,t}` and differentials `d_r` of bidegree `(r, 1-r)`.
//! Pages are computed as exact subquotients: with
//! `Z(k, a, b) = { x in F^a T^k : D x in F^b T^{k+1} }`, the page entry is
//!
//! `E_r^{s,t} = Z(s+t, s, s+r) / ( Z(s+t, s+1, s+r) + D Z(s+t-1, s-r+1, s) )`
//!
//! and everything reduces to kernels and ranks over Q(i). The grid is bounded
//! by `0 <= s, t <= n`, so every `d_r` with `r > n` vanishes and the pages
//! stabilize at `r = n + 1`.

use std::collections::HashMap;
use std::rc::Rc;

use crate::homology::{DimVector, PageTable};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::model::{LieModel, PoissonSpec};

use crate::homology::TotalComplex;

pub(crate) struct SpectralEngine {
    tc: TotalComplex,
    n: i64,
    z_memo: HashMap<(i64, i64, i64), Rc<Vec<SparseVec>>>,
}

impl SpectralEngine {
    pub fn new(tc: TotalComplex) -> Self {
        let n = tc.n as i64;
        SpectralEngine { tc, n, z_memo: HashMap::new() }
    }

    fn dim_t(&self, k: i64) -> usize {
        if k < 0 || k > 2 * self.n + 1 {
            0
        } else {
            self.tc.dim(k as usize)
        }
    }

    /// Basis (global coordinates in `T^k`) of `{ x in F^a : D x in F^b }`.
    fn z_basis(&mut self, k: i64, a: i64, b: i64) -> Rc<Vec<SparseVec>> {
        let a = a.clamp(0, self.n + 2);
        let b = b.clamp(0, self.n + 2);
        if let Some(hit) = self.z_memo.get(&(k, a, b)) {
            return Rc::clone(hit);
        }
        let result = Rc::new(self.compute_z(k, a, b));
        self.z_memo.insert((k, a, b), Rc::clone(&result));
        result
    }

    fn compute_z(&self, k: i64, a: i64, b: i64) -> Vec<SparseVec> {
        if k < 0 || k > 2 * self.n || self.dim_t(k) == 0 {
            return Vec::new();
        }
        let k_us = k as usize;
        let layout = &self.tc.layouts[k_us];
        let col_start = layout.offset_of(a);
        let dim = layout.dim;
        if col_start >= dim {
            return Vec::new();
        }
        // Constraint: all components of Dx in columns s' < b vanish. Those
        // are a coordinate prefix of T^{k+1}.
        let rows_end = self.tc.layouts[k_us + 1].offset_of(b);
        if rows_end == 0 {
            // No constraint: F^a itself.
            return (col_start..dim)
                .map(|j| vec![(j, crate::scalar::GaussianRational::one())])
                .collect();
        }
        let columns: Vec<SparseVec> = (col_start..dim)
            .map(|j| {
                self.tc.mats[k_us]
                    .column(j)
                    .iter()
                    .filter(|(r, _)| *r < rows_end)
                    .cloned()
                    .collect()
            })
            .collect();
        let constrained = SparseMatrix::from_columns(rows_end, columns);
        constrained
            .kernel_basis()
            .into_iter()
            .map(|v| v.into_iter().map(|(i, c)| (i + col_start, c)).collect())
            .collect()
    }

    fn apply_d(&self, k: i64, v: &SparseVec) -> SparseVec {
        self.tc.mats[k as usize].apply(v)
    }

    /// Generators of the boundary subgroup at `(s, t)` on page `r`.
    fn b_generators(&mut self, r: i64, s: i64, t: i64) -> Vec<SparseVec> {
        let k = s + t;
        let mut gens: Vec<SparseVec> = self.z_basis(k, s + 1, s + r).as_ref().clone();
        if k >= 1 {
            let lower = self.z_basis(k - 1, s - r + 1, s);
            gens.extend(lower.iter().map(|v| self.apply_d(k - 1, v)));
        }
        gens.retain(|v| !v.is_empty());
        gens
    }

    /// `dim E_r^{s,t}`.
    pub fn entry(&mut self, r: i64, s: i64, t: i64) -> usize {
        let k = s + t;
        if k < 0 || k > 2 * self.n {
            return 0;
        }
        let z = self.z_basis(k, s, s + r);
        if z.is_empty() {
            return 0;
        }
        let gens = self.b_generators(r, s, t);
        let rank_b = SparseMatrix::from_columns(self.dim_t(k), gens).rank();
        z.len() - rank_b
    }

    /// Rank of `d_r` leaving `(s, t)`, i.e. of the induced map into
    /// `(s + r, t - r + 1)`.
    pub fn rank_out(&mut self, r: i64, s: i64, t: i64) -> usize {
        let k = s + t;
        if k < 0 || k >= 2 * self.n {
            return 0;
        }
        let (ts, tt) = (s + r, t - r + 1);
        if ts > self.n || tt < 0 {
            return 0;
        }
        let images: Vec<SparseVec> = {
            let z = self.z_basis(k, s, s + r);
            z.iter().map(|v| self.apply_d(k, v)).filter(|v| !v.is_empty()).collect()
        };
        if images.is_empty() {
            return 0;
        }
        let target_b = self.b_generators(r, ts, tt);
        let rows = self.dim_t(k + 1);
        let base = SparseMatrix::from_columns(rows, target_b);
        base.rank_with(&images) - base.rank()
    }

    pub fn page(&mut self, r: i64) -> PageTable {
        let n = self.n as usize;
        let mut e = vec![vec![0usize; n + 1]; n + 1];
        let mut d_ranks = vec![vec![0usize; n + 1]; n + 1];
        for s in 0..=self.n {
            for t in 0..=self.n {
                e[s as usize][t as usize] = self.entry(r, s, t);
                d_ranks[s as usize][t as usize] = self.rank_out(r, s, t);
            }
        }
        PageTable { n: self.n as u8, r: r as usize, e, d_ranks }
    }
}

/// Pages `E_1 .. E_{r_max}` of the spectral sequence converging to the
/// Koszul-Brylinski homology. Internally the stabilized page is checked
/// against the total-complex dimensions degree by degree, and consecutive
/// pages are checked against the rank recurrence.
pub fn spectral_pages(model: &LieModel, pi: &PoissonSpec, r_max: usize) -> Vec<PageTable> {
    assert!(r_max >= 1, "page index starts at 1");
    let n = model.n() as i64;
    let mut engine = SpectralEngine::new(TotalComplex::kb(model, pi));

    let r_stab = (n + 1) as usize;
    let deep = r_max.max(r_stab);
    let mut pages: Vec<PageTable> = Vec::with_capacity(deep);
    for r in 1..=deep {
        pages.push(engine.page(r as i64));
    }

    // Page recurrence: E_{r+1} = E_r - (rank out) - (rank in), entrywise.
    for r in 0..pages.len() - 1 {
        let cur = &pages[r];
        let next = &pages[r + 1];
        let rr = cur.r as i64;
        for s in 0..=n {
            for t in 0..=n {
                let rank_out = cur.d_ranks[s as usize][t as usize];
                let (ins, int) = (s - rr, t + rr - 1);
                let rank_in = if (0..=n).contains(&ins) && (0..=n).contains(&int) {
                    cur.d_ranks[ins as usize][int as usize]
                } else {
                    0
                };
                assert_eq!(
                    next.e[s as usize][t as usize],
                    cur.e[s as usize][t as usize] - rank_out - rank_in,
                    "page recurrence failed at r={}, (s,t)=({s},{t})",
                    cur.r
                );
            }
        }
    }

    // Convergence: the stabilized page sums to the homology dimensions.
    let kb = engine.tc.total_dims();
    let infinity = &pages[r_stab - 1];
    for k in 0..=2 * n {
        let sum: usize = (0..=n)
            .filter(|s| (0..=n).contains(&(k - s)))
            .map(|s| infinity.e[s as usize][(k - s) as usize])
            .sum();
        assert_eq!(sum, kb.get(k), "stabilized page does not converge at degree {k}");
    }
    debug_assert!(infinity.d_ranks.iter().flatten().all(|r| *r == 0));

    pages.truncate(r_max);
    pages
}

/// Sum of page entries along a total degree.
pub fn page_degree_sum(page: &PageTable, k: i64) -> usize {
    let n = page.n as i64;
    (0..=n)
        .filter(|s| (0..=n).contains(&(k - s)))
        .map(|s| page.e[s as usize][(k - s) as usize])
        .sum()
}

/// The stabilized (infinity) page.
pub fn einfinity(model: &LieModel, pi: &PoissonSpec) -> PageTable {
    let r_stab = model.n() as usize + 1;
    spectral_pages(model, pi, r_stab).pop().expect("at least one page")
}

/// Convergence check exposed for reporting: per-degree sums of the
/// stabilized page against the homology table.
pub fn check_convergence(model: &LieModel, pi: &PoissonSpec, kb: &DimVector) -> bool {
    let inf = einfinity(model, pi);
    (0..=2 * model.n() as i64).all(|k| page_degree_sum(&inf, k) == kb.get(k))
}
