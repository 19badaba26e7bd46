//! Closed-form dimension-vector combinators: blow-up and projective-bundle
//! formulas, the trivial-Poisson reduction of a Hodge diamond, and the
//! degeneracy-defect transfer. Pure table arithmetic, deliberately decoupled
//! from models so spaces without an invariant model enter via their diamonds.

use thiserror::Error;

use crate::homology::{DimVector, HodgeDiamond};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("codimension must be at least 2, got {0}")]
    CodimTooSmall(usize),
    #[error("center table has length {z_len}, expected {expected} for ambient dimension {n} and codimension {c}")]
    DimensionMismatch { z_len: usize, expected: usize, n: usize, c: usize },
    #[error(
        "center must satisfy the del-delbar lemma: without it the blow-up homology \
         carries a quotient of the exceptional-divisor homology that is not \
         computable from dimension tables"
    )]
    DdbarRequired,
}

/// Input of the blow-up combinator: ambient table `x` (complex dimension
/// `n`), center table `z` (dimension `n - c`), codimension `c >= 2`, and the
/// caller-asserted del-delbar flag for the center.
#[derive(Clone, Debug)]
pub struct BlowupSpec {
    pub x: DimVector,
    pub z: DimVector,
    pub codim: usize,
    pub z_ddbar: bool,
}

/// Blow-up of the homology table along a center satisfying the del-delbar
/// lemma: `out[k] = x[k] + (c-1) * z[k-c]`. In the stable ranges
/// `k <= c-1` and `k >= 2n-c+1` the table is unchanged.
pub fn blowup_dims(spec: &BlowupSpec) -> Result<DimVector, FormulaError> {
    let c = spec.codim;
    if c < 2 {
        return Err(FormulaError::CodimTooSmall(c));
    }
    let n = spec.x.n();
    if n < c || spec.z.dims().len() != 2 * (n - c) + 1 {
        return Err(FormulaError::DimensionMismatch {
            z_len: spec.z.dims().len(),
            expected: if n >= c { 2 * (n - c) + 1 } else { 0 },
            n,
            c,
        });
    }
    if !spec.z_ddbar {
        return Err(FormulaError::DdbarRequired);
    }
    let out: Vec<usize> = (0..=2 * n as i64)
        .map(|k| spec.x.get(k) + (c - 1) * spec.z.get(k - c as i64))
        .collect();
    debug_assert!((0..c).all(|k| out[k] == spec.x.get(k as i64)));
    debug_assert!((2 * n - c + 1..=2 * n).all(|k| out[k] == spec.x.get(k as i64)));
    Ok(DimVector::new(out))
}

/// Projectivization of a rank-`c` bundle over a base with the del-delbar
/// lemma: `out[k] = c * z[k+1-c]` on an ambient dimension `dim(Z) + c - 1`.
pub fn pbundle_dims(z: &DimVector, rank: usize) -> Result<DimVector, FormulaError> {
    if rank < 2 {
        return Err(FormulaError::CodimTooSmall(rank));
    }
    let ambient = z.n() + rank - 1;
    let out: Vec<usize> =
        (0..=2 * ambient as i64).map(|k| rank * z.get(k + 1 - rank as i64)).collect();
    Ok(DimVector::new(out))
}

/// Product with projective `n`-space: `out[k] = (n+1) * x[k-n]`; the rank
/// `n + 1` special case of the bundle formula.
pub fn product_pn_dims(x: &DimVector, n: usize) -> Result<DimVector, FormulaError> {
    if n < 1 {
        return Err(FormulaError::CodimTooSmall(n + 1));
    }
    let ambient = x.n() + n;
    let out: Vec<usize> = (0..=2 * ambient as i64).map(|k| (n + 1) * x.get(k - n as i64)).collect();
    Ok(DimVector::new(out))
}

/// Homology table of a trivial Poisson structure from a Hodge diamond:
/// `out[k] = Sum_{p-q=n-k} h^{p,q}`.
pub fn trivial_poisson_dims(h: &HodgeDiamond) -> DimVector {
    let n = h.n() as i64;
    let dims = (0..=2 * n).map(|k| crate::homology::hodge_antidiagonal_sum(h, k)).collect();
    DimVector::new(dims)
}

/// Defect-table transfer under blow-up: the combined defect is
/// `defect_X[k] + (c-1) * defect_Z[k-c]`, so the blow-up is first-page
/// degenerate iff both inputs are.
pub fn degeneracy_transfer(x_defects: &[usize], z_defects: &[usize], c: usize) -> Vec<usize> {
    (0..x_defects.len())
        .map(|k| {
            let zd = if k >= c && k - c < z_defects.len() { z_defects[k - c] } else { 0 };
            x_defects[k] + (c - 1) * zd
        })
        .collect()
}

/// The diamond of complex projective `n`-space: `h^{p,p} = 1`.
pub fn projective_space_diamond(n: u8) -> HodgeDiamond {
    let mut h = vec![vec![0usize; n as usize + 1]; n as usize + 1];
    for (p, row) in h.iter_mut().enumerate() {
        row[p] = 1;
    }
    HodgeDiamond::new(n, h)
}

/// The homology table of a point.
pub fn point_dims() -> DimVector {
    DimVector::new(vec![1])
}
