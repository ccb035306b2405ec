//! Zeros of generalized hypergeometric polynomials with parameters linear in
//! `n`, the algebraic curve satisfied by the limit of their Cauchy
//! transforms, and the harmonic level-curve machinery describing where the
//! zeros cluster.
//!
//! Module map:
//! - [`hyp`]: exact polynomial construction and the hypergeometric operator
//! - [`measure`]: certified multiprecision zeros and the root-counting measure
//! - [`curve`]: the bivariate curve `A(z, w) = 0`, branches and branch points
//! - [`potential`]: harmonic branches, level-curve tracing, region grids
//! - [`experiments`]: distance, convergence and clustering reports

pub mod aberth;
pub mod curve;
pub mod error;
pub mod experiments;
pub mod hyp;
pub mod measure;
pub mod mp;
pub mod potential;
pub mod rational;
pub mod schedule;
pub mod upoly;

pub use error::{Error, Result};
pub use hyp::{build_polynomial, HypPolynomial};
pub use measure::{find_roots, find_roots_adaptive, RootCountingMeasure};
pub use mp::BigComplex;
pub use rational::ComplexRational;
pub use schedule::ParameterSchedule;
