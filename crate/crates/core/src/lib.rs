//! Tropicalised quasi-automorphisms of cluster algebras.
//!
//! The crate evaluates the piecewise-linear maps induced by cyclic rotation,
//! reflection, twist and braid generators on Grassmannian cluster algebras,
//! translates between truncated g-vectors and semistandard tableaux, and
//! studies fixed points and braid orbits of these maps.
//!
//! Everything is exact: tropical values are read off as degrees or
//! valuations of Laurent polynomials obtained by substituting `t^v` into a
//! positive parametrisation.

pub mod cluster_core;
pub mod dynamics;
pub mod error;
pub mod exact_arith;
pub mod fixtures;
pub mod grassmannian;
pub mod tableaux;
pub mod tropexpr;
pub mod verify;

pub use cluster_core::{ExchangeMatrix, Seed, TropPoint};
pub use error::{Error, Result};
pub use exact_arith::{Convention, LMatrix, LaurentPoly};
pub use grassmannian::{GrContext, QuasiAuto};
pub use tableaux::Tableau;
