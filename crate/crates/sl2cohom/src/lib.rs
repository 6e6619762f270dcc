//! Integral cohomology of `Gamma_0(p)`, `PGamma_0(p)` and `SL_2(Z[1/p])`.
//!
//! The closed-form tables for these groups are determined by `p mod 12`
//! together with the free rank `N(p)` of `H^1(Gamma_0(p), Z)`. Everything
//! that feeds those tables is finitely checkable inside `SL_2(F_p)`: the
//! double coset decompositions of the coset spaces `G/C_k` under the Borel
//! subgroup, the quotient graph they assemble into, and the rank and order
//! bookkeeping of the exact sequences relating the four families. This
//! crate computes both sides — closed forms and brute-force decompositions —
//! and ships a verification suite that checks them against each other.
//!
//! Modules:
//! - [`fp`]: exact arithmetic in `F_p`, enumeration of `SL_2(F_p)` and its
//!   distinguished subgroups.
//! - [`cosets`]: coset spaces `G/C_k`, Borel orbit decompositions, and the
//!   quotient graph with vertex set `G/C_4 ⊔ G/C_6` and edge set `G/C_2`.
//! - [`abelian`]: finitely generated abelian groups in invariant-factor
//!   form, plus integer Smith normal form.
//! - [`tables`]: the cohomology tables themselves and the consistency
//!   suite tying them to the orbit data.
//! - [`cli`]: rendering and command implementations behind the `sl2cohom`
//!   binary.

use thiserror::Error;

pub mod abelian;
pub mod cli;
pub mod cosets;
pub mod fp;
pub mod tables;

pub use abelian::FinAbGroup;
pub use cosets::{CosetSpace, OrbitDecomposition, QuotientGraph};
pub use fp::{FpMat, Prime};
pub use tables::{CohomologyTable, DerivedConstants, GroupFamily, ResidueClass};

/// Default cap on primes accepted by the brute-force (enumeration) routines.
///
/// `|SL_2(F_p)| = p(p^2-1)` is about `1.03e6` at `p = 101`; the cap keeps
/// memory and run time of the oracle suite predictable. Callers may raise it
/// explicitly (the CLI exposes `--bound`).
pub const DEFAULT_ENUM_BOUND: u64 = 101;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} exceeds the enumeration bound {bound}")]
    BoundExceeded { p: u64, bound: u64 },
    #[error("p = {0} is not supported by this operation (requires p > 3)")]
    UnsupportedPrime(u64),
    #[error("generators degenerate at p = {0}")]
    DegenerateGenerators(u64),
    #[error("matrix determinant is not 1 mod {0}")]
    NotUnimodular(u64),
    #[error("cyclic order {0} is invalid (must be >= 2)")]
    InvalidOrder(u64),
    #[error("degree {0} is not valid here (need an even degree >= 4)")]
    InvalidDegree(u64),
    #[error("integer overflow detected during exact computation")]
    OverflowDetected,
}

pub type Result<T> = std::result::Result<T, Error>;
