//! Exact low-dimensional homology of `SL2(Z[1/n])` and friends.
//!
//! The crate computes `H1` and `H2` of `SL2(Z[1/n])` for square-free `n`,
//! `H1` of the congruence subgroups `Gamma0(n, p)`, and cross-checks the
//! closed-form answers against a brute-force oracle for the finite quotients
//! `SL2(Z/m)` and the Borel subgroups `B(F_p)`. Everything is exact: finitely
//! generated abelian groups in canonical form, integer matrices over `i128`,
//! rationals reduced at construction. No floating point, no approximation.
//!
//! Modules, roughly bottom-up:
//!
//! * [`arith`]: factorization, primality, the rank constants `r_p`, and the
//!   small number-theoretic gadgets (`scpd`, `d_of`) the case analysis runs on.
//! * [`abelian`]: canonical finitely generated abelian groups, Smith normal
//!   form, invariant factors, order censuses, surjection tests.
//! * [`rat`] / [`sl2`]: exact rationals and 2x2 matrices over `Z[1/n]`,
//!   elementary generators, congruence-subgroup membership.
//! * [`oracle`]: brute-force enumeration of `SL2(Z/m)` and `B(F_p)`,
//!   abelianization by commutator closure, generation checks.
//! * [`tame`]: tame symbols on Steinberg symbol products.
//! * [`homology`]: the closed-form `H1`/`H2` layer and its consistency checks.
//! * [`verify`]: the named verification suites wired into the CLI.

pub mod abelian;
pub mod arith;
pub mod homology;
pub mod oracle;
mod parallel;
pub mod rat;
pub mod sl2;
pub mod tame;
pub mod verify;

#[cfg(test)]
pub(crate) mod brute;

pub use parallel::parallel_enabled;

use thiserror::Error;

/// Crate-wide error type. Domain violations are reported, never silently fixed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n must be greater than 1 (got {0})")]
    NTooSmall(u64),
    #[error("{0} is not square-free")]
    NotSquareFree(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is prime; a composite modulus is required")]
    PrimeNotAllowed(u64),
    #[error("p = {p} divides n = {n}")]
    PDividesN { p: u64, n: u64 },
    #[error("modulus {m} is not coprime to n = {n}")]
    NotCoprime { m: u64, n: u64 },
    #[error("modulus {m} exceeds the configured oracle bound {bound}")]
    BoundExceeded { m: u64, bound: u64 },
    #[error("group of order {order} exceeds the abelianization bound {bound}")]
    GroupTooLarge { order: u64, bound: u64 },
    #[error("matrix {matrix} is not an element of the group mod {modulus}")]
    NotInGroup { matrix: String, modulus: u64 },
    #[error("matrix has determinant {det}, expected 1")]
    DetNotOne { det: String },
    #[error("denominator of {value} is not supported on the primes of n = {n}")]
    DenominatorNotLocal { value: String, n: u64 },
    #[error("{value} is not a unit of Z[1/{n}]")]
    NotAUnit { value: String, n: u64 },
    #[error("matrix is not in Gamma0: lower-left entry {c} is not divisible by {p}")]
    NotInGamma0 { c: String, p: u64 },
    #[error("mixed contexts: n = {0} vs n = {1}")]
    ContextMismatch(u64, u64),
    #[error("{q} is not an admissible torsion-prime choice for n = {n}")]
    BadChoice { q: u64, n: u64 },
    #[error("zero is not allowed in a Steinberg symbol")]
    ZeroInSymbol,
    #[error("tame symbols require an odd prime (got {0})")]
    EvenTamePrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("census is not that of a finite abelian group: {0}")]
    BadCensus(String),
    #[error("order census requires a finite group (free rank is {0})")]
    InfiniteCensus(usize),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("cannot parse {0:?} as a rational (expected \"num\" or \"num/den\")")]
    BadRational(String),
    #[error("cannot parse matrix literal {0:?} (expected four rationals \"a b c d\")")]
    BadMatrixLiteral(String),
    #[error("unknown check suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of one named verification check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl Check {
    pub fn pass(name: impl Into<String>, details: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, details: details.into() }
    }

    pub fn fail(name: impl Into<String>, details: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, details: details.into() }
    }

    pub fn from_outcome(name: impl Into<String>, passed: bool, details: impl Into<String>) -> Self {
        Check { name: name.into(), passed, details: details.into() }
    }
}
