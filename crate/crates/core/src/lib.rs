//! Exact computations behind the fusion rules of the ℤ₃-orbifold 𝒲 of the
//! W(2,3) algebra at central charge 6/5.
//!
//! * [`scalars`]: arithmetic in ℚ(√−3).
//! * [`modes`]: canonical-form calculus for the modes `L(n)`, `J(n)`.
//! * [`singular`]: singular-vector checks, searches and parameter recovery.
//! * [`zhu`]: Zhu-bimodule reduction and fusion-rule upper bounds.
//! * [`group`]: twisted group-set algebras and fusion-rule lower bounds.
//! * [`table`]: the assembled fusion table and its symmetry checks.

pub mod config;
pub mod expr;
pub mod group;
pub mod linalg;
pub mod modes;
pub mod poly;
pub mod scalars;
pub mod singular;
pub mod table;
pub mod zhu;

pub use modes::{graded_basis, Gen, Mode, ModuleCalc, ModuleParams, PbwMonomial, PbwVector};
pub use scalars::{QuadScalar, Rational, Ring};
