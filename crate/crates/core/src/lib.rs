//! Exact duality of quotient Landau-Ginzburg models.
//!
//! A quotient LG model is a superpotential `W`, a sum of distinct monomials
//! with unit coefficients, together with a finite diagonal group `G` under
//! which `W` is invariant. This crate factors the exponent matrix through the
//! quotient (`P = A Bτ`), builds the dual model `(Pτ, G^T)`, compares it with
//! Krawitz's dual group, computes weight lattices and the Calabi-Yau
//! condition, and certifies the resulting birationality statements on
//! concrete inputs.

pub mod corpus;
pub mod duality;
pub mod error;
pub mod json;
pub mod lattice;
pub mod lg;
pub mod linalg;
pub mod model_file;
pub mod selftest;
pub mod verify;

pub use duality::{
    dualize, is_calabi_yau, krawitz_dual, normalize_weight_generator, weight_lattice, CyReport,
    DualModel, WeightLattice,
};
pub use error::{Error, ParseErrorKind, Result};
pub use lattice::{
    dual_lattice, elementary_divisors, enumerate_elements, group_equal, group_from_generators,
    DiagonalGroup, KernelGroup, Lattice,
};
pub use lg::{
    factorize, is_invariant, parse_polynomial, quotient_superpotential, CharacterSum,
    ExponentMatrix, Factorization, QuotientLGModel, TorusTag,
};
pub use linalg::{IntMatrix, IntVector, RatVector, SnfDecomposition};
