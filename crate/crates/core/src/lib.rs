//! Exact counting and generating functions for nonintersecting lattice paths
//! (vicious walkers) on a cylinder.
//!
//! The brute-force enumerator in [`lattice`] is the ground truth. Everything
//! else, from the determinant formulas in [`formulas`] to the free-energy
//! limits in [`asymptotics`], is checked against it or against exact
//! arithmetic.

pub mod asymptotics;
pub mod error;
pub mod formulas;
pub mod genfunc;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod numeric;
pub mod quadrature;
pub mod verify;

pub use asymptotics::{FreeEnergyReport, Length, Method};
pub use error::{Error, Result};
pub use formulas::ZCountResult;
pub use lattice::{CylinderConfig, FamilyEnumeration, FamilySignature, Step, WalkerFamily};
pub use laurent::{LaurentPoly2, Monomial, TermRecord};
pub use linalg::{ComplexMatrix, PolyMatrix};
pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use numeric::Tolerance;
pub use verify::{Suite, SuiteReport};
