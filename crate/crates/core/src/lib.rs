//! Exact computations on varieties of commuting nilpotent matrices.
//!
//! The crate is `no_std` (it needs `alloc`). It covers exact dense linear
//! algebra over Q and `F_p`, centralizers and generated algebras, the explicit
//! witness families (the two-block parabolic nilradical and the `Γ` family in
//! `gl_{4s}`), rank-of-differential dimension witnesses, a brute-force point
//! counter over small prime fields, and re-verifiable reducibility
//! certificates.

#![no_std]

extern crate alloc;

pub mod census;
pub mod certify;
pub mod error;
pub mod field;
pub mod geomdim;
pub mod linalg;
pub mod mat;
pub mod nilcore;
pub mod rng;
pub mod witnesses;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals, DEFAULT_PRIME};
pub use mat::{AnyMat, DynField, Mat};
pub use nilcore::{AlgebraClosure, MatSpace, MatTuple};
pub use rng::Rng;
