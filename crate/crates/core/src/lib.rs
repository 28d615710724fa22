//! Iwasawa cocycles on flag manifolds of SL(n, R) and an empirical
//! estimator for the flag type of a matrix semigroup.
//!
//! For a semigroup `S` with core point `x0` of its invariant control set, a
//! simple root `alpha` lies in the flag type exactly when
//! `inf_{g in S} rho_alpha(g, x0) = 0`. [`flagtype::estimate_flag_type`]
//! measures that infimum along sampled words of growing length and sorts the
//! roots into decaying and bounded ones.

pub mod cocycle;
pub mod error;
pub mod flagtype;
pub mod matgroup;
pub mod rootdata;
pub mod seeds;
pub mod semigroup;

pub use error::{Error, Result};
