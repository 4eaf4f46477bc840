//! Exact rational solutions of the Knizhnik-Zamolodchikov system
//! `dW/dz = rho * sum_k P_k / (z - z_k) W` for the natural representation of
//! the symmetric group `S_n`, `rho = ±1`.
//!
//! All arithmetic is exact: [`Rational`] numbers, [`Polynomial`]s and
//! [`RationalFunction`]s over them. Solutions are built in partial-fraction
//! form ([`builder`]), checked by exact differentiation ([`verify`]) and
//! exchanged as versioned JSON documents ([`io`]).

pub mod builder;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;
pub mod verify;

pub use builder::{build_fundamental, FundamentalSolution, PartialFractionSolution};
pub use error::{Error, Result};
pub use model::{KZSystem, Rho};
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;
pub use rational::Rational;
