//! Cusp orders of Delta quotients and the lattice matrices Λ, ρ̃, Υ.
//!
//! For a level `n = ∏ pᵢ^{rᵢ}` the cusps of the Drinfeld modular curve
//! `X₀(n)` are indexed (up to the finer numerator classes) by the divisors
//! `d | n`, the *heights*.  For divisors `m, d` of `n` write `h = (hᵢ)` for
//! the exponent tuple of `d` and `r' = (r'ᵢ)` for that of `m`.  The order
//! of vanishing of the Delta quotient `Δ_m / Δ_n` at a height-`d` cusp is
//!
//! ```text
//! ord_d(m) = (q−1)/ρ(d) · ∏ᵢ |pᵢ|^{ max{hᵢ, rᵢ−hᵢ} − |r'ᵢ − hᵢ| }
//! ```
//!
//! with `ρ(d) = 1` when some exponent is strict (`0 < hᵢ < rᵢ`) and `q−1`
//! otherwise.  Collecting these into the square matrix `Λ` — **rows are
//! heights `d`, columns are divisors `m`**, both in the canonical divisor
//! order — gives the factorization
//!
//! ```text
//! Λ = ρ̃ · Υ,    Υ(n) = ⊗ᵢ Υ(pᵢ^{rᵢ}),    Υ(p^r)[i][j] = |p|^{max{i,r−i} − |i−j|},
//! ```
//!
//! where `ρ̃` is the diagonal matrix of `(q−1)/ρ(d)` and the Kronecker
//! factors follow the canonical order (first prime slowest).  Each factor
//! has the explicit inverse
//!
//! ```text
//! Υ(p^r)⁻¹ = 1/((P²−1)·P^{r−1}) ·  [ P at (0,0),(r,r);  −1 at (1,0),(r−1,r);
//!                                    (P²+1)·P^{m(j)−1} at (j,j), 0<j<r;
//!                                    −P^{m(j)} at |i−j|=1, 0<j<r;  0 else ]
//! ```
//!
//! with `P = |p|` and `m(j) = min{j, r−j}`, so `Λ⁻¹ = (⊗ᵢ Υ(pᵢ^{rᵢ})⁻¹)·ρ̃⁻¹`
//! needs no elimination.  The generic Bareiss inverse in [`crate::matrix`]
//! exists precisely to keep this closed form honest.
//!
//! The same exponent data controls degeneracy maps: for `m | n` and a
//! height `d | n` with `d' = gcd(d, m)`, the ramification index of a
//! height-`d` cusp over its height-`d'` image is
//!
//! ```text
//! e(d) = ρ_m(d')/ρ_n(d) · ∏ᵢ |pᵢ|^{kᵢ},
//! kᵢ = max{rᵢ, 2hᵢ} − max{r'ᵢ, 2hᵢ}   if hᵢ < r'ᵢ,
//! kᵢ = rᵢ − min{2hᵢ, rᵢ}              otherwise,
//! ```
//!
//! and this always agrees with the ratio `ord_d(1 in n) / ord_{d'}(1 in m)`
//! — [`ramification_index`] computes both and refuses to return on a
//! mismatch.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::Error;
use crate::lattice::LevelContext;
use crate::matrix::{ExactMatrix, Rational};
use crate::Result;

fn big_pow(base: &BigInt, exp: u32) -> BigInt {
    Pow::pow(base, exp)
}

/// Order of vanishing of the quotient `Δ_m / Δ_n` at the height-`d` cusps,
/// for divisors `m` (index `m_idx`) and `d` (index `d_idx`) of the level.
///
/// Always a positive integer; the per-prime exponents are provably
/// nonnegative and the `(q−1)/ρ(d)` prefactor is `1` or `q−1`.
pub fn order_delta(ctx: &LevelContext, m_idx: usize, d_idx: usize) -> Result<BigInt> {
    let rp = ctx.tuple(m_idx);
    let h = ctx.tuple(d_idx);
    let norms = ctx.prime_norms();
    let mut value = (ctx.spec().q_big() - 1u32) / ctx.rho(d_idx);
    for (i, ((_, exp), norm)) in ctx.primes().iter().zip(norms.iter()).enumerate() {
        let r = i64::from(*exp);
        let hi = i64::from(h[i]);
        let mi = i64::from(rp[i]);
        let e = hi.max(r - hi) - (mi - hi).abs();
        if e < 0 {
            return Err(Error::inconsistency(
                "negative exponent in cusp-order formula",
            ));
        }
        value *= big_pow(norm, e as u32);
    }
    Ok(value)
}

/// The full order matrix `Λ`: `Λ[d][m] = order_delta(m, d)` with rows
/// indexed by heights `d` and columns by divisors `m`, both in canonical
/// divisor order.
pub fn lambda(ctx: &LevelContext) -> Result<ExactMatrix> {
    let n = ctx.num_divisors();
    let mut m = ExactMatrix::zeros(n);
    for d in 0..n {
        for a in 0..n {
            m.set(d, a, Rational::from_integer(order_delta(ctx, a, d)?));
        }
    }
    Ok(m)
}

/// Diagonal matrix `ρ̃ = diag_d (q−1)/ρ(d)` appearing in `Λ = ρ̃·Υ`.
pub fn rho_diag(ctx: &LevelContext) -> ExactMatrix {
    let q1 = ctx.spec().q_big() - 1u32;
    ExactMatrix::from_fn(ctx.num_divisors(), |i, j| {
        if i == j {
            Rational::from_integer(&q1 / ctx.rho(i))
        } else {
            Rational::zero()
        }
    })
}

/// Single-prime block `Υ(p^r)[i][j] = P^{max{i, r−i} − |i−j|}` of size
/// `(r+1)×(r+1)`, where `P = |p|`.
pub fn upsilon_pr(p_norm: &BigInt, r: u32) -> ExactMatrix {
    let n = (r + 1) as usize;
    ExactMatrix::from_fn(n, |i, j| {
        let i = i as i64;
        let j = j as i64;
        let r = i64::from(r);
        let e = i.max(r - i) - (i - j).abs();
        debug_assert!(e >= 0);
        Rational::from_integer(big_pow(p_norm, e as u32))
    })
}

/// Kronecker product `Υ(n) = ⊗ᵢ Υ(pᵢ^{rᵢ})` over the level's primes in
/// canonical order (first factor slowest, matching the divisor order).
pub fn upsilon(ctx: &LevelContext) -> ExactMatrix {
    kron_over_primes(ctx, upsilon_pr)
}

/// Closed-form inverse of [`upsilon_pr`]; see the module docs for the
/// entry table.  Validated against the Bareiss inverse in tests and in
/// the acceptance suite.
pub fn upsilon_pr_inverse(p_norm: &BigInt, r: u32) -> ExactMatrix {
    let n = (r + 1) as usize;
    let r_us = r as usize;
    let p2m1 = big_pow(p_norm, 2) - 1u32;
    let denom = &p2m1 * big_pow(p_norm, r - 1);
    let minor = |j: usize| -> u32 { (j as u32).min(r - j as u32) };
    ExactMatrix::from_fn(n, |i, j| {
        let num: BigInt = if j == 0 {
            if i == 0 {
                p_norm.clone()
            } else if i == 1 {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        } else if j == r_us {
            if i == r_us {
                p_norm.clone()
            } else if i + 1 == r_us {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        } else if i == j {
            (big_pow(p_norm, 2) + 1u32) * big_pow(p_norm, minor(j) - 1)
        } else if i.abs_diff(j) == 1 {
            -big_pow(p_norm, minor(j))
        } else {
            BigInt::zero()
        };
        Rational::new(num, denom.clone())
    })
}

/// Exact inverse `Λ⁻¹ = (⊗ᵢ Υ(pᵢ^{rᵢ})⁻¹) · ρ̃⁻¹`, assembled from the
/// closed-form blocks — no elimination, and checked against `Λ` before
/// returning.
pub fn lambda_inverse(ctx: &LevelContext) -> Result<ExactMatrix> {
    let kron_inv = kron_over_primes(ctx, upsilon_pr_inverse);
    // ρ̃⁻¹ scales column d by ρ(d)/(q−1).
    let q1 = ctx.spec().q_big() - 1u32;
    let inv = ExactMatrix::from_fn(ctx.num_divisors(), |i, j| {
        kron_inv.get(i, j) * Rational::new(ctx.rho(j), q1.clone())
    });
    let check = lambda(ctx)?.mul(&inv)?;
    if !check.is_identity() {
        return Err(Error::inconsistency("closed-form Λ⁻¹ failed Λ·Λ⁻¹ = I"));
    }
    Ok(inv)
}

fn kron_over_primes(ctx: &LevelContext, block: impl Fn(&BigInt, u32) -> ExactMatrix) -> ExactMatrix {
    let norms = ctx.prime_norms();
    let mut acc: Option<ExactMatrix> = None;
    for ((_, exp), norm) in ctx.primes().iter().zip(norms.iter()) {
        let b = block(norm, *exp);
        acc = Some(match acc {
            None => b,
            Some(a) => a.kron(&b),
        });
    }
    acc.unwrap_or_else(|| ExactMatrix::identity(1))
}

/// Ramification index of a height-`d` cusp of `X₀(n)` over its image on
/// `X₀(m)` under the degeneracy map, where `m` is the divisor at `m_idx`
/// and `d` the height at `d_idx`; the image height is `d' = gcd(d, m)`.
///
/// Computed from the piecewise exponent formula and cross-checked against
/// the order ratio `ord_d(Δ_1/Δ_n) / ord_{d'}(Δ_1/Δ_m)`; a mismatch is an
/// internal consistency error.
pub fn ramification_index(ctx: &LevelContext, m_idx: usize, d_idx: usize) -> Result<BigInt> {
    if ctx.tuple(m_idx).iter().all(|&e| e == 0) {
        return Err(Error::domain(
            "degeneracy target level must be a nonconstant divisor",
        ));
    }
    let rp = ctx.tuple(m_idx);
    let h = ctx.tuple(d_idx);
    let norms = ctx.prime_norms();
    let d_prime_idx = ctx.gcd_index(d_idx, m_idx);

    let sub = ctx.sub_context(m_idx)?;
    let d_prime_sub = sub.index_of(ctx.divisor(d_prime_idx))?;

    // ρ_m(d') / ρ_n(d) — always 1 or q−1 (never 1/(q−1): a strict exponent
    // of d' in m forces one for d in n).
    let rho_num = sub.rho(d_prime_sub);
    let rho_den = ctx.rho(d_idx);
    let (rho_factor, rho_rem) = rho_num.div_rem(&rho_den);
    if !rho_rem.is_zero() {
        return Err(Error::inconsistency(
            "ρ ratio in ramification formula was not integral",
        ));
    }

    let mut value = rho_factor;
    for (i, ((_, exp), norm)) in ctx.primes().iter().zip(norms.iter()).enumerate() {
        let r = i64::from(*exp);
        let hi = i64::from(h[i]);
        let ri = i64::from(rp[i]);
        let k = if hi < ri {
            r.max(2 * hi) - ri.max(2 * hi)
        } else {
            r - (2 * hi).min(r)
        };
        if k < 0 {
            return Err(Error::inconsistency(
                "negative exponent in ramification formula",
            ));
        }
        value *= big_pow(norm, k as u32);
    }

    // Independent route: ratio of the trivial-quotient orders.
    let num = order_delta(ctx, 0, d_idx)?;
    let den = order_delta(&sub, 0, d_prime_sub)?;
    let (ratio, rem) = num.div_rem(&den);
    if !rem.is_zero() || ratio != value {
        return Err(Error::inconsistency(
            "ramification formula disagrees with cusp-order ratio",
        ));
    }
    Ok(value)
}

/// Sum of ramification indices over a fiber equals the degree of the
/// degeneracy map — exposed for tests and the self-test battery.
pub fn degeneracy_degree(ctx: &LevelContext, m_idx: usize) -> Result<BigInt> {
    // deg α = [Γ₀(m) : Γ₀(n)] = ∏ᵢ |pᵢ|^{rᵢ−r'ᵢ−1}·(|pᵢ| + 1) over primes
    // with r'ᵢ < rᵢ (and |pᵢ|^{rᵢ−r'ᵢ} when r'ᵢ > 0).
    let rp = ctx.tuple(m_idx);
    let norms = ctx.prime_norms();
    let mut deg = BigInt::one();
    for (i, ((_, exp), norm)) in ctx.primes().iter().zip(norms.iter()).enumerate() {
        let r = *exp;
        let rpi = rp[i];
        if rpi == r {
            continue;
        }
        if rpi > 0 {
            deg *= big_pow(norm, r - rpi);
        } else {
            deg *= big_pow(norm, r - rpi - 1) * (norm + BigInt::one());
        }
    }
    Ok(deg)
}
