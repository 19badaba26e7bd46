//! Exact-arithmetic workbench for holomorphic Koszul-Brylinski homology,
//! Dolbeault cohomology, Lichnerowicz-Poisson cohomology and the associated
//! spectral sequences of left-invariant holomorphic Poisson structures on
//! complex-parallelisable nilmanifold models, plus closed-form blow-up and
//! projective-bundle dimension combinators.
//!
//! All arithmetic happens in the Gaussian rationals, so every reported
//! dimension is an exact integer.

pub mod cli;
pub mod exterior;
pub mod formulas;
pub mod homology;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod spectral;

pub use exterior::{Form, IndexSet, Monomial, Polyvector};
pub use homology::{DimVector, HodgeDiamond, PageTable};
pub use model::{LieModel, PoissonSpec};
pub use scalar::GaussianRational;
