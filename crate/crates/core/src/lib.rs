//! Exact exterior calculus for almost contact metric structures.
//!
//! The crate verifies and solves the structure equations
//! `dη = ω∧η`, `dΦ = 2f η∧Φ + 2ω∧Φ` of locally conformal almost generalized
//! f-cosymplectic manifolds on a single coordinate chart, with coefficients in
//! an exact ring of exponential polynomials.
//!
//! The symbolic core is generic over the coefficient field ([`Scalar`]); the
//! aliases below fix it to the exact rationals, which is what the classifier
//! and the command-line tool use.

pub mod classify;
pub mod conformal;
pub mod corpus;
pub mod expr;
pub mod forms;
pub mod scalar;
pub mod schema;
pub mod structure;
pub mod symplin;

pub use expr::{parse, Chart, ExpPoly, ExprError, Monomial, Polynomial};
pub use forms::{DiffForm, FormError, VecField};
pub use scalar::{Rational, Scalar};
pub use structure::{AlmostContactMetric, Matrix};

pub type Expr = ExpPoly<Rational>;
pub type KForm = DiffForm<Rational>;
pub type VectorField = VecField<Rational>;
pub type AlmostContactStructure = AlmostContactMetric<Rational>;
pub type ExprMatrix = Matrix<Rational>;

pub type ExprF64 = ExpPoly<f64>;
pub type KFormF64 = DiffForm<f64>;
pub type VectorFieldF64 = VecField<f64>;
pub type AlmostContactStructureF64 = AlmostContactMetric<f64>;
