//! Exact arithmetic for discriminant quotients on Drinfeld modular curves.
//!
//! Everything here works over the rational function field `K = F_q(T)` with
//! ring of integers `A = F_q[T]`.  For a nonconstant monic level `n ∈ A` the
//! curve `X_0(n)` carries, for every monic divisor `m | n`, a discriminant
//! form `Δ_m(z) = Δ(mz)`; quotients `g_r = ∏_{a|n} Δ_a^{r_a}` with integer
//! exponent vectors `r` are the basic supply of modular functions whose
//! divisors are supported on cusps.  This crate decides when such a quotient
//! admits a `(q−1)(q²−1)`-th root that is a modular unit, computes the matrix
//! `Λ(n)` of cusp orders together with its closed-form inverse, and inverts
//! the resulting linear map to bound and predict orders in the rational
//! cuspidal divisor class group.
//!
//! # Modules
//!
//! * [`field`] — the coefficient field `F_q` (prime or prime-power order,
//!   power-basis representation).
//! * [`poly`] — dense univariate arithmetic over `F_q`, factorization by
//!   trial division, the text format used for I/O.
//! * [`lattice`] — levels, their divisor lattice in canonical order, cusps,
//!   cusp counting (`deg P(n)_d`, `ρ_n`), and degeneracy maps.
//! * [`units`] — the root-of-`Δ`-quotient criteria: the two-divisibility
//!   theorem form and the lemma form (odd-degree mass, degree sum, parity),
//!   which must always agree.
//! * [`matrix`] — dense exact-rational matrices with a fraction-free
//!   (Bareiss) inverse; this is the generic route the closed forms are
//!   checked against.
//! * [`orders`] — cusp orders of `Δ_m`, the matrices `Λ(n) = ρ̃(n)·Υ(n)`,
//!   the per-prime closed-form inverse of `Υ(p^r)`, ramification indices.
//! * [`bridge`] — the injection `g` from degree-zero cuspidal divisors to
//!   rational exponent vectors, conjectural class orders, exponent bounds.
//!
//! # Conventions
//!
//! * The absolute value is `|a| = q^{deg a}`; `|0|` is never used.
//! * Divisors of `n = ∏ p_i^{r_i}` are indexed by exponent tuples
//!   `(h_1, …, h_s)` with `0 ≤ h_i ≤ r_i`, primes in canonical order
//!   (degree ascending, then coefficient tuple lexicographic from the
//!   constant term up), and the *first* prime's exponent varying slowest.
//! * `Λ(n)` has rows indexed by cusp heights `d` and columns by divisors
//!   `a`; column `a` is the cusp divisor of `Δ_a` in the `(P(n)_d)` basis.
//! * All arithmetic is exact: `BigInt` for integers, reduced `BigRational`
//!   for fractions.  No floating point anywhere.
//!
//! The crate is `no_std` (with `alloc`); all types are plain immutable
//! values and all operations are pure functions, so everything is safe to
//! share across threads.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bridge;
pub mod error;
pub mod field;
pub mod lattice;
pub mod matrix;
pub mod orders;
pub mod poly;
pub mod units;

pub use bridge::{BridgeImage, CuspidalDivisor};
pub use error::Error;
pub use field::{FieldSpec, FqElem};
pub use lattice::{Cusp, LevelContext};
pub use matrix::{ExactMatrix, Rational};
pub use poly::{Factorization, Poly};
pub use units::UnitCheckReport;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
