//! Dihedral group codes over finite fields.
//!
//! The group algebra `FG` of the dihedral group of order `2n` splits into
//! blocks `A_0 + A_1 + ... + A_m`. Picking a simple left ideal `C_t` in each
//! block gives the codes `C` and `hat C = F hat e_0 + C` of length `2n`, whose
//! right translates `C beta` by units `beta` form the random families studied
//! here. The crate builds the decomposition, audits the duality properties of
//! the translates, estimates their minimum distances, and evaluates the
//! closed-form bounds on `Pr(Delta <= delta)`.

pub mod cyclic;
pub mod dihedral;
pub mod ensemble;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod lincode;
pub mod ntheory;
pub mod poly;
pub mod selftest;

pub use error::{Error, Result};

/// Bound evaluations in double precision.
pub type Bound = ntheory::BoundEstimate<f64>;
