//! Exact sparse polynomial arithmetic over `Q` and the linear algebra
//! (nullspace, rank, solves) used by every bounded-degree computation.

pub mod chart;
pub mod matrix;
pub mod monomial;
pub mod polynomial;
pub mod rational;

pub use chart::PolyChart;
pub use matrix::{nullspace_of_sparse_rows, Echelon, RationalMatrix, Subspace};
pub use monomial::{dim_up_to, monomials_up_to, Monomial};
pub use polynomial::Polynomial;
pub use rational::{rat, ratio, Rational};
