//! Computational engine for Engel Lie algebras and superalgebras.
//!
//! The crate is organised around the pipeline used to bound nilpotency
//! classes of n-Engel Lie algebras:
//!
//! * [`freelie`] — basic commutators (Hall-style basis of the free Lie algebra)
//!   on an ordered, Z2-graded generating set, with multiweight caps.
//! * [`grassmann`] — monomial arithmetic in the auxiliary exterior algebra and
//!   the sign a permutation induces on the odd entries of a sequence.
//! * [`superalg`] — the free Lie superalgebra over the integers with the
//!   basic-commutator-plus-squares basis, collection to normal form, and
//!   integer structure-constant tables.
//! * [`young`] — partitions, tableaux, primitive idempotents and the strip
//!   decompositions that turn 12-cell diagrams into small superalgebra cases.
//! * [`engel`] — homogeneous instances of the (super) Engel identities and the
//!   group-derived identity, assembled into integer relation matrices.
//! * [`exactla`] — exact rank, Smith normal form, determinants, and the
//!   randomized determinant-gcd full-rank certificate.
//! * [`nilquot`] — graded nilpotent quotients over GF(p) for Engel presets.

pub mod engel;
pub mod exactla;
pub mod freelie;
pub mod grassmann;
pub mod nilquot;
pub mod perm;
pub mod ring;
pub mod superalg;
pub mod young;

pub use freelie::{BasicCommutator, BasisEnumeration, Generator, Parity};
pub use grassmann::GrassmannMonomial;
pub use superalg::{SuperAlgebra, SuperBasisElement, SuperElement};
pub use young::{CaseSpec, Partition, StripDecomposition, YoungTableau};

use thiserror::Error;

/// Errors shared across the crate's modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
