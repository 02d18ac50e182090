//! Exact computer algebra for quiver algebras with quadratic relations:
//! reduction systems and the diamond condition, the comultiplicative
//! bimodule resolution, Hochschild cohomology in low degrees, Gerstenhaber
//! brackets via homotopy lifting maps, and first-order deformations through
//! the combinatorial star product.
//!
//! All arithmetic is exact, over the rationals or a prime field; every
//! enumeration and every pivot choice is deterministic, so repeated runs
//! produce identical tables.

pub mod algebra;
pub mod bar;
pub mod cohomology;
pub mod deform;
pub mod element;
pub mod lifting;
pub mod linalg;
pub mod parse;
pub mod quiver;
pub mod reduction;
pub mod resolution;
pub mod scalar;
pub mod tensor;

pub use algebra::PresentedAlgebra;
pub use cohomology::{cochain_space, cohomology_basis, Cochain};
pub use element::PathElement;
pub use lifting::{
    bracket, maurer_cartan_check, recurrence_lift, recurrence_step, solve_homotopy_lifting,
    verify_homotopy, HomotopyLifting,
};
pub use parse::{parse_combination, parse_spec, ParsedSpec};
pub use quiver::{Path, Quiver};
pub use reduction::{
    default_reduction_system, Caps, IrreducibleBasis, ReductionRule, ReductionSystem,
};
pub use resolution::{
    build_family, build_koszul, load_manual_resolution, verify_complex, KComplex,
};
pub use scalar::{FieldSpec, Scalar};
