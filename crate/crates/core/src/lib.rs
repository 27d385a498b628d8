//! Exact computation of Lie-Rinehart cohomology for quasi-homogeneous
//! surface singularities `A = Q[x1,x2,x3]/(f)`, together with diagonal
//! cyclic group actions, invariants, and integrable connections on
//! rank-one modules.
//!
//! The pipeline is entirely exact: all linear algebra runs over the
//! rationals with arbitrary-precision integers, group actions are kept
//! as `Z/m` weight gradings (roots of unity never appear as field
//! elements), and every reported dimension is an exact integer.
//!
//! Module layout:
//!
//! * [`qlinalg`] — sparse exact linear algebra over Q.
//! * [`wpoly`] — weighted-graded polynomial arithmetic, the quotient
//!   algebra, parsing and printing.
//! * [`deriv`] — the derivation module `Der(A)`: graded bases,
//!   generators, Lie brackets.
//! * [`presmod`] — graded presentations of `Der(A)` and its exterior
//!   powers; cochain spaces `Hom(∧^n Der(A), A)` degree by degree.
//! * [`lrc`] — the Lie-Rinehart complex, its differential, and graded
//!   cohomology.
//! * [`equiv`] — cyclic actions, ξ-weight gradings, Reynolds averaging,
//!   invariant cohomology, pseudo-reflection detection.
//! * [`conn`] — connections on rank-one modules, curvature,
//!   integrability classes, and moduli comparison.

pub mod conn;
pub mod deriv;
pub mod equiv;
pub mod lrc;
pub mod presmod;
pub mod qlinalg;
pub mod wpoly;

pub use conn::{Connection, RankOneModule};
pub use deriv::Derivation;
pub use equiv::CyclicActionType;
pub use lrc::{Cochain, Complex};
pub use presmod::DerPresentation;
pub use qlinalg::{QMatrix, Rational};
pub use wpoly::{Monomial, Poly, WeightSystem, WeightedAlgebra};
