//! Exact commutative algebra for Azumaya algebras over computable rings.
//!
//! * [`ring`]: ring towers (ℤ, ℚ, 𝔽_p, ℤ/p^k extended by monic quotients and
//!   localizations), exact linear algebra, locality certificates.
//! * [`poly`]: dense polynomials and finite-field factorization.
//! * [`decomp`]: universal decomposition algebras, unramifiability, Zariski lattice.
//! * [`hensel`]: root, idempotent and factorization lifting over finite local rings.
//! * [`algebra`]: structure-constant algebras and the Azumaya canonical map.
//! * [`split_tree`]: splitting-tree certificates, matrix units, Skolem–Noether.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod hensel;
pub mod json;
pub mod poly;
pub mod ring;
pub mod split_tree;

pub use error::{Error, Result};
pub use poly::Poly;
pub use ring::local::{check_local, LocalCertificate};
pub use ring::{make_ring, BaseRing, Elem, ExtensionStep, Ring, RingDescriptor};
