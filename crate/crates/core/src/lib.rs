//! Exact computation on products of finite posets and symmetric intersecting
//! families of vectors in `[k]^n`.
//!
//! * [`poset`]: finite posets, up-sets, up-closures and domination strength.
//! * [`measure`]: measures, the interpolation `mu_t`, product measures,
//!   influences and the Margulis–Russo derivative.
//! * [`covering`]: the covering poset `W_k`, the embedding of `[k]^n`,
//!   complements and intersection predicates.
//! * [`lab`]: constructions of intersecting families and symmetry checks.
//! * [`search`]: exact maximum symmetric intersecting families via orbits.
//! * [`chain`]: the closure / half-measure / threshold pipeline on one family.

pub mod chain;
pub mod covering;
pub mod error;
pub mod family;
pub mod lab;
pub mod measure;
pub mod poset;
pub mod rational;
pub mod search;

pub use error::{Error, Result, DEFAULT_BUDGET};
pub use family::ProductFamily;
pub use rational::Rational;
