//! Exact symbolic computation for the Lie algebra of derivations of a
//! polynomial algebra over `Q`.
//!
//! The crate provides, bottom up:
//!
//! - [`polyalg`]: sparse multivariate polynomials with exact rational
//!   coefficients, plus the fraction-free linear algebra (nullspace, rank,
//!   solves) behind every bounded-degree computation;
//! - [`liederiv`]: derivations `sum a_i d_i` as a Lie algebra — the module
//!   action on polynomials, the bracket, the `Z^n`-grading, and
//!   bounded-degree centralizers, normalizers, ideal closures and module
//!   orbits;
//! - [`endomorph`]: polynomial endomorphisms and automorphisms — composition,
//!   Jacobian matrices, exact bounded-degree inversion, the conjugation
//!   action on derivations, and shift/fixator predicates;
//! - [`lndkit`]: locally nilpotent derivations — nilpotency indices, bounded
//!   kernels and common kernels, and slice extraction;
//! - [`recover`]: reconstruction of a polynomial automorphism from `n`
//!   commuting locally nilpotent derivations whose common kernel is the
//!   constants, with a full roundtrip driver;
//! - [`parse`] and [`cli`]: a small expression grammar (`x1^2*x2 - 1/2`,
//!   `d1 + x1*d2`, `x1 -> x1 + x2^2; x2 -> x2`) and the command-line surface
//!   over all of the above;
//! - [`sample`]: deterministic random generators (polynomials, derivations,
//!   tame automorphisms) shared by the test suites and the examples.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod endomorph;
pub mod liederiv;
pub mod lndkit;
pub mod parse;
pub mod polyalg;
pub mod recover;
pub mod sample;

pub use endomorph::{conjugate_derivation, PolyEndo, PolyMatrix, TameAutomorphism};
pub use liederiv::{Derivation, DerivationSubspace, GradedComponent};
pub use lndkit::{KernelBasis, SliceCertificate};
pub use parse::{parse_derivation, parse_endo, parse_polynomial};
pub use polyalg::{Monomial, Polynomial, Rational, RationalMatrix};
pub use recover::{
    construct_coordinates, main_theorem_roundtrip, normalize_by_shift, recover_automorphism,
    CoordinateSystem, RecoveryReport, RoundtripReport,
};
