//! Exact computations on two-pointed genus-zero orbifold curve chains and
//! the sector and Novikov-series calculus of quantum Serre duality.
//!
//! Everything is exact: rationals for degrees, ages and integrals, and
//! [`foundation::PhasedScalar`] for the roots of unity `e^{πi r}` that carry
//! the duality signs.

pub mod bundles;
pub mod cohomology;
pub mod convexity;
pub mod error;
pub mod foundation;
pub mod linalg;
pub mod novikov;
pub mod sector;
pub mod suites;
pub mod twisted_curve;
pub mod wps;

pub use error::{Error, Result};
pub use foundation::{Phase, PhasedScalar, Rational};
