//! Exact-arithmetic engine for truncated Dyson-Schwinger equations.
//!
//! The symbolic layer (series, Hopf algebra, solver, reduction, recursions)
//! works entirely over arbitrary-precision rationals; floating point enters
//! only in the radius estimation and the ODE vector-field exploration.

pub mod bivariate;
pub mod error;
pub mod hopf;
pub mod laurent;
pub mod ode;
pub mod radius;
pub mod rational;
pub mod recursion;
pub mod reduce;
pub mod series;
pub mod solver;
pub mod theory;

pub use error::Error;
pub use laurent::LaurentData;
pub use rational::Rational;
pub use series::RationalSeries;
pub use theory::{GammaTable, TheorySpec};
