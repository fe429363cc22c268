//! Levels, their divisor lattice, and cusps of `X_0(n)`.
//!
//! A [`LevelContext`] fixes a nonconstant monic level `n = ∏ p_i^{r_i}`
//! over `F_q[T]` and freezes, once and for all, the order every vector and
//! matrix downstream is written in:
//!
//! * primes in canonical order — degree ascending, then the coefficient
//!   tuple lexicographically from the constant term up;
//! * monic divisors of `n` indexed by exponent tuples `(h_1, …, h_s)`,
//!   `0 ≤ h_i ≤ r_i`, enumerated with the *first* prime's exponent varying
//!   slowest (row-major), which is exactly the index order a Kronecker
//!   product over the primes expects.
//!
//! Cusps of `X_0(n)` are written `[a; d]` with `d | n` monic (the
//! *height*) and `gcd(a, n) = 1`; two cusps of the same height coincide
//! iff their numerators agree modulo `gcd(d, n/d)` up to a factor in
//! `F_q^*`.  The height-`d` cusps assemble into a single rational divisor
//! `P(n)_d` of degree
//!
//! ```text
//! deg P(n)_d = 1                                  if no 0 < h_i < r_i,
//!            = (1/(q−1)) · ∏_{0<h_i<r_i} (|p_i|−1)·|p_i|^{min(h_i, r_i−h_i)−1}
//! ```
//!
//! (equivalently `φ(gcd(d, n/d)) / (q−1)` when the gcd is nonconstant —
//! the tests count equivalence classes by brute force against this).  The
//! weight `ρ_n(d)` is `1` when some exponent is strict and `q − 1`
//! otherwise; it is the denominator that turns raw order formulas into
//! orders along `P(n)_d`.
//!
//! [`degeneracy_map`] implements the level-lowering map
//! `α_p : X_0(np) → X_0(n)` on cusps: with `p^r ∥ n` and `d · p^f` the
//! height (`p ∤ d`),
//!
//! ```text
//! [a; d·p^f] ↦ [a; d·p^f]        f ≤ r,
//! [a; d·p^{r+1}] ↦ [p·a + d; d·p^r]
//! ```
//!
//! Composites of such maps send a height `d` to `gcd(d, m)` on `X_0(m)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::Error;
use crate::field::FieldSpec;
use crate::poly::{self, Poly};
use crate::Result;

/// Hard cap on the number of divisors a level may have; far beyond desk
/// scale, purely an allocation guard.
const MAX_DIVISORS: usize = 1 << 16;

/// A fixed level `n` with its factorization, divisor order, and cusp
/// bookkeeping.  Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelContext {
    spec: FieldSpec,
    n: Poly,
    /// `(p_i, r_i)` in canonical (or caller-overridden) order.
    primes: Vec<(Poly, u32)>,
    /// Exponent tuples in index order (first prime slowest).
    tuples: Vec<Vec<u32>>,
    /// `∏ p_i^{h_i}` for each tuple.
    divisors: Vec<Poly>,
    /// Monic divisor → index.
    index: BTreeMap<Poly, usize>,
}

/// A cusp `[a; d]` of `X_0(n)`: the class of `a/d` with `d | n` monic and
/// `gcd(a, n) = 1`.  Plain data — no canonical reduction is performed, and
/// validity is checked by the [`LevelContext`] operations that consume it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cusp {
    pub numerator: Poly,
    pub height: Poly,
}

impl LevelContext {
    /// Build the context for a monic nonconstant level.
    pub fn new(spec: &FieldSpec, n: &Poly) -> Result<Self> {
        let fac = poly::factor(spec, n)?;
        Self::from_primes(spec, n, fac.factors)
    }

    /// Build the context with an explicit prime order (a permutation of
    /// the canonical primes) — the index convention is ours, not
    /// mathematics, so callers may override it.
    pub fn with_prime_order(spec: &FieldSpec, n: &Poly, order: &[Poly]) -> Result<Self> {
        let fac = poly::factor(spec, n)?;
        if order.len() != fac.factors.len() {
            return Err(Error::domain(alloc::format!(
                "prime order lists {} primes, level has {}",
                order.len(),
                fac.factors.len()
            )));
        }
        let mut reordered = Vec::with_capacity(order.len());
        for p in order {
            match fac.factors.iter().find(|(fp, _)| fp == p) {
                Some((fp, r)) => {
                    if reordered.iter().any(|(rp, _): &(Poly, u32)| rp == fp) {
                        return Err(Error::domain("prime order repeats a prime"));
                    }
                    reordered.push((fp.clone(), *r));
                }
                None => {
                    return Err(Error::domain(alloc::format!(
                        "'{}' is not a prime of the level",
                        poly::display(spec, p)
                    )));
                }
            }
        }
        Self::from_primes(spec, n, reordered)
    }

    fn from_primes(spec: &FieldSpec, n: &Poly, primes: Vec<(Poly, u32)>) -> Result<Self> {
        if !n.is_monic() {
            return Err(Error::domain("level must be monic"));
        }
        if n.degree().unwrap_or(0) == 0 {
            return Err(Error::domain("level must be nonconstant"));
        }
        let mut count: usize = 1;
        for (_, r) in &primes {
            count = count
                .checked_mul(*r as usize + 1)
                .filter(|&c| c <= MAX_DIVISORS)
                .ok_or_else(|| Error::domain("level has too many divisors"))?;
        }
        let mut tuples = Vec::with_capacity(count);
        let mut divisors = Vec::with_capacity(count);
        let mut index = BTreeMap::new();
        let s = primes.len();
        let mut h = vec![0u32; s];
        loop {
            let mut d = Poly::one(spec);
            for (i, (p, _)) in primes.iter().enumerate() {
                if h[i] > 0 {
                    d = poly::mul(spec, &d, &poly::pow(spec, p, h[i]));
                }
            }
            index.insert(d.clone(), tuples.len());
            tuples.push(h.clone());
            divisors.push(d);
            // Row-major odometer: last prime's exponent varies fastest.
            let mut i = s;
            loop {
                if i == 0 {
                    let ctx = LevelContext {
                        spec: spec.clone(),
                        n: n.clone(),
                        primes,
                        tuples,
                        divisors,
                        index,
                    };
                    debug_assert_eq!(ctx.divisors.len(), count);
                    debug_assert_eq!(ctx.divisors.last(), Some(&ctx.n));
                    return Ok(ctx);
                }
                i -= 1;
                h[i] += 1;
                if h[i] <= primes[i].1 {
                    break;
                }
                h[i] = 0;
            }
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// The level `n`.
    pub fn level(&self) -> &Poly {
        &self.n
    }

    /// `(p_i, r_i)` in index order.
    pub fn primes(&self) -> &[(Poly, u32)] {
        &self.primes
    }

    /// `|p_i| = q^{deg p_i}` for each prime, index order.
    pub fn prime_norms(&self) -> Vec<BigInt> {
        self.primes
            .iter()
            .map(|(p, _)| poly::norm(&self.spec, p).expect("primes are nonzero"))
            .collect()
    }

    /// Number of monic divisors of `n` (the dimension of everything).
    pub fn num_divisors(&self) -> usize {
        self.divisors.len()
    }

    /// All monic divisors in index order.
    pub fn divisors(&self) -> &[Poly] {
        &self.divisors
    }

    /// The divisor at an index.
    pub fn divisor(&self, idx: usize) -> &Poly {
        &self.divisors[idx]
    }

    /// The exponent tuple at an index (first prime first).
    pub fn tuple(&self, idx: usize) -> &[u32] {
        &self.tuples[idx]
    }

    /// Index of a monic divisor.
    pub fn index_of(&self, d: &Poly) -> Result<usize> {
        self.index.get(d).copied().ok_or_else(|| {
            Error::domain(alloc::format!(
                "'{}' is not a monic divisor of the level",
                poly::display(&self.spec, d)
            ))
        })
    }

    /// Index of an exponent tuple.
    pub fn index_of_tuple(&self, t: &[u32]) -> Result<usize> {
        if t.len() != self.primes.len() {
            return Err(Error::domain("exponent tuple has the wrong length"));
        }
        let mut idx = 0usize;
        for (i, (_, r)) in self.primes.iter().enumerate() {
            if t[i] > *r {
                return Err(Error::domain("exponent exceeds the level's"));
            }
            idx = idx * (*r as usize + 1) + t[i] as usize;
        }
        Ok(idx)
    }

    /// Index of `gcd(divisor(i), divisor(j))` — tuple-wise minimum.
    pub fn gcd_index(&self, i: usize, j: usize) -> usize {
        let t: Vec<u32> = self.tuples[i]
            .iter()
            .zip(&self.tuples[j])
            .map(|(&a, &b)| a.min(b))
            .collect();
        self.index_of_tuple(&t).expect("componentwise min stays in range")
    }

    /// Index of the complementary divisor `n / divisor(i)`.
    pub fn complement_index(&self, i: usize) -> usize {
        let t: Vec<u32> = self.tuples[i]
            .iter()
            .zip(&self.primes)
            .map(|(&h, (_, r))| r - h)
            .collect();
        self.index_of_tuple(&t).expect("complement stays in range")
    }

    /// A context for the sub-level `m = divisor(idx)` (which must be
    /// nonconstant).  The primes keep their relative order, so sub-level
    /// indices are compatible restrictions of the parent's.
    pub fn sub_context(&self, idx: usize) -> Result<LevelContext> {
        let m = &self.divisors[idx];
        if m.degree().unwrap_or(0) == 0 {
            return Err(Error::domain("sub-level must be nonconstant"));
        }
        let primes: Vec<(Poly, u32)> = self
            .primes
            .iter()
            .zip(&self.tuples[idx])
            .filter(|(_, &h)| h > 0)
            .map(|((p, _), &h)| (p.clone(), h))
            .collect();
        Self::from_primes(&self.spec, m, primes)
    }

    /// The weight `ρ_n(d)`: `1` if some `0 < h_i < r_i`, else `q − 1`.
    pub fn rho(&self, d_idx: usize) -> BigInt {
        if self.has_strict_exponent(d_idx) {
            BigInt::one()
        } else {
            self.spec.q_big() - 1
        }
    }

    fn has_strict_exponent(&self, d_idx: usize) -> bool {
        self.tuples[d_idx]
            .iter()
            .zip(&self.primes)
            .any(|(&h, (_, r))| 0 < h && h < *r)
    }

    /// `deg P(n)_d`, the degree of the rational divisor collecting all
    /// height-`d` cusps (see module docs for the closed form).
    pub fn deg_p(&self, d_idx: usize) -> Result<BigInt> {
        if !self.has_strict_exponent(d_idx) {
            return Ok(BigInt::one());
        }
        let norms = self.prime_norms();
        let mut prod = BigInt::one();
        for (i, (&h, (_, r))) in self.tuples[d_idx].iter().zip(&self.primes).enumerate() {
            if 0 < h && h < *r {
                let m = h.min(*r - h);
                prod *= (&norms[i] - 1) * Pow::pow(&norms[i], m - 1);
            }
        }
        let q1 = self.spec.q_big() - 1;
        let (quot, rem) = prod.div_rem(&q1);
        if !rem.is_zero() {
            return Err(Error::inconsistency(
                "deg P(n)_d product is not divisible by q − 1",
            ));
        }
        Ok(quot)
    }

    /// Construct a cusp, validating `gcd(a, n) = 1` and `d | n`.
    pub fn cusp(&self, numerator: &Poly, height: &Poly) -> Result<Cusp> {
        self.index_of(height)?;
        let g = poly::gcd(&self.spec, numerator, &self.n)?;
        if !g.is_one() {
            return Err(Error::domain(
                "cusp numerator must be coprime to the level",
            ));
        }
        Ok(Cusp {
            numerator: numerator.clone(),
            height: height.clone(),
        })
    }

    /// Do two cusps of this level coincide?  True iff the heights agree
    /// and `a₁ ≡ c·a₂ mod gcd(d, n/d)` for some `c ∈ F_q^*`.
    pub fn cusp_height_equal(&self, c1: &Cusp, c2: &Cusp) -> Result<bool> {
        let d_idx = self.index_of(&c1.height)?;
        self.validate_cusp(c1)?;
        self.validate_cusp(c2)?;
        if c1.height != c2.height {
            return Ok(false);
        }
        let comp = self.complement_index(d_idx);
        let g = poly::gcd(&self.spec, &c1.height, &self.divisors[comp])?;
        if g.degree().unwrap_or(0) == 0 {
            // Everything is congruent mod a unit.
            return Ok(true);
        }
        for c in self.spec.units() {
            let scaled = poly::scale(&self.spec, &c, &c2.numerator);
            let diff = poly::sub(&self.spec, &c1.numerator, &scaled);
            if poly::rem(&self.spec, &diff, &g)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn validate_cusp(&self, c: &Cusp) -> Result<()> {
        self.index_of(&c.height)?;
        let g = poly::gcd(&self.spec, &c.numerator, &self.n)?;
        if !g.is_one() {
            return Err(Error::domain(
                "cusp numerator must be coprime to the level",
            ));
        }
        Ok(())
    }
}

/// The degeneracy map `α_p : X_0(n·p) → X_0(n)` on cusps, where `ctx_np`
/// is the source level `n·p` and `p` one of its primes.  See the module
/// docs for the piecewise formula.
///
/// The returned cusp lives on the target `X_0(n)`; callers usually hold
/// (or build) the target context to keep working with it.
pub fn degeneracy_map(ctx_np: &LevelContext, p: &Poly, c: &Cusp) -> Result<Cusp> {
    let spec = ctx_np.spec();
    let (_, level_exp) = ctx_np
        .primes()
        .iter()
        .find(|(pp, _)| pp == p)
        .ok_or_else(|| Error::domain("p is not a prime of the source level"))?;
    // p^{r+1} ∥ n·p, so p^r ∥ n.
    let r = *level_exp - 1;
    ctx_np.validate_cusp(c)?;
    let f = poly::valuation(spec, &c.height, p)?;
    if f <= r {
        return Ok(c.clone());
    }
    debug_assert_eq!(f, r + 1, "height divides the level");
    // Strip the full p-part: height = d·p^{r+1} with p ∤ d.
    let d = poly::div_exact(spec, &c.height, &poly::pow(spec, p, f))?;
    let numerator = poly::add(spec, &poly::mul(spec, p, &c.numerator), &d);
    let height = poly::mul(spec, &d, &poly::pow(spec, p, r));
    Ok(Cusp { numerator, height })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    fn ctx(q: u64, n: &str) -> LevelContext {
        let k = FieldSpec::from_q(q).unwrap();
        let n = parse(&k, n).unwrap();
        LevelContext::new(&k, &n).unwrap()
    }

    fn strs(c: &LevelContext) -> Vec<alloc::string::String> {
        c.divisors()
            .iter()
            .map(|d| poly::display(c.spec(), d))
            .collect()
    }

    #[test]
    fn divisor_order_squarefree() {
        // n = T(T+1) over F_2: primes T < T+1, first prime slowest.
        let c = ctx(2, "T^2+T");
        assert_eq!(strs(&c), ["1", "T+1", "T", "T^2+T"]);
        assert_eq!(c.num_divisors(), 4);
    }

    #[test]
    fn divisor_order_with_square() {
        // n = T(T+1)² over F_3 — the (1, q, q², p, pq, pq²) layout.
        let c = ctx(3, "T^3+2*T^2+T");
        assert_eq!(
            strs(&c),
            ["1", "T+1", "T^2+2*T+1", "T", "T^2+T", "T^3+2*T^2+T"]
        );
        // Tuple/index round trip.
        for i in 0..c.num_divisors() {
            assert_eq!(c.index_of_tuple(c.tuple(i)).unwrap(), i);
            assert_eq!(c.index_of(c.divisor(i)).unwrap(), i);
        }
        // Complement is the reversal here.
        for i in 0..c.num_divisors() {
            assert_eq!(c.complement_index(i), c.num_divisors() - 1 - i);
        }
    }

    #[test]
    fn rejects_bad_levels() {
        let k = FieldSpec::prime(3).unwrap();
        // Non-monic.
        let f = parse(&k, "2*T+1").unwrap();
        assert!(LevelContext::new(&k, &f).is_err());
        // Constant.
        let f = parse(&k, "1").unwrap();
        assert!(LevelContext::new(&k, &f).is_err());
        // Zero.
        assert!(LevelContext::new(&k, &Poly::zero()).is_err());
    }

    #[test]
    fn prime_order_override() {
        let k = FieldSpec::prime(3).unwrap();
        let n = parse(&k, "T^2+T").unwrap();
        let order = [parse(&k, "T+1").unwrap(), parse(&k, "T").unwrap()];
        let c = LevelContext::with_prime_order(&k, &n, &order).unwrap();
        assert_eq!(strs(&c), ["1", "T", "T+1", "T^2+T"]);
        // Wrong prime rejected.
        let bad = [parse(&k, "T+2").unwrap(), parse(&k, "T").unwrap()];
        assert!(LevelContext::with_prime_order(&k, &n, &bad).is_err());
    }

    #[test]
    fn rho_values() {
        let c = ctx(3, "T^3+2*T^2+T"); // T(T+1)²
        let rho: Vec<BigInt> = (0..6).map(|i| c.rho(i)).collect();
        let expect: Vec<BigInt> = [2, 1, 2, 2, 1, 2].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(rho, expect);
    }

    #[test]
    fn deg_p_goldens() {
        // n = 𝔭² (q = 3): deg P at d = 𝔭 is 1.
        let c = ctx(3, "T^2");
        assert_eq!(c.deg_p(1).unwrap(), BigInt::from(1));
        assert_eq!(c.deg_p(0).unwrap(), BigInt::from(1));
        // n = 𝔭³ (q = 2, 𝔭 = T²+T+1): deg P at d = 𝔭 and 𝔭² is 3.
        let c = ctx(2, "T^6+T^5+T^3+T+1"); // (T²+T+1)³
        assert_eq!(c.primes().len(), 1);
        assert_eq!(c.primes()[0].1, 3);
        assert_eq!(c.deg_p(1).unwrap(), BigInt::from(3));
        assert_eq!(c.deg_p(2).unwrap(), BigInt::from(3));
        assert_eq!(c.deg_p(3).unwrap(), BigInt::from(1));
        // n = T⁴ (q = 3): deg P at d = T² is 3.
        let c = ctx(3, "T^4");
        assert_eq!(c.deg_p(2).unwrap(), BigInt::from(3));
    }

    #[test]
    fn deg_p_matches_brute_class_count() {
        // Count height-d cusp classes by pairwise cusp_height_equal over
        // all numerators of degree < deg g coprime to n, for a level with
        // a genuinely nontrivial gcd.
        let c = ctx(3, "T^4");
        let k = c.spec().clone();
        let d = c.divisor(2).clone(); // T²
        let mut reps: Vec<Cusp> = Vec::new();
        // Numerators a + b·T with a ≠ 0 are exactly the valid ones here.
        for a in 1..3u32 {
            for b in 0..3u32 {
                let num = poly::add(
                    &k,
                    &Poly::constant(k.from_int(a as i64)),
                    &poly::scale(&k, &k.from_int(b as i64), &Poly::t(&k)),
                );
                let cusp = c.cusp(&num, &d).unwrap();
                if !reps
                    .iter()
                    .any(|r| c.cusp_height_equal(r, &cusp).unwrap())
                {
                    reps.push(cusp);
                }
            }
        }
        assert_eq!(BigInt::from(reps.len()), c.deg_p(2).unwrap());
    }

    #[test]
    fn cusp_equality_examples() {
        let c = ctx(3, "T^4");
        let k = c.spec().clone();
        let d = c.divisor(2).clone(); // T², gcd(d, n/d) = T²
        let mk = |s: &str| c.cusp(&parse(&k, s).unwrap(), &d).unwrap();
        assert!(!c.cusp_height_equal(&mk("1"), &mk("T+1")).unwrap());
        // (1+T) ≡ 2·(2+2T) mod T² (indeed 2·(2+2T) = 4+4T = 1+T).
        assert!(c.cusp_height_equal(&mk("T+1"), &mk("2*T+2")).unwrap());
        // Different heights never compare equal.
        let other = c.cusp(&parse(&k, "1").unwrap(), c.divisor(1)).unwrap();
        assert!(!c.cusp_height_equal(&mk("1"), &other).unwrap());
        // Invalid numerator rejected.
        assert!(c.cusp(&parse(&k, "T").unwrap(), &d).is_err());
    }

    #[test]
    fn degeneracy_map_golden() {
        // X_0(𝔭²) → X_0(𝔭), 𝔭 = T over F_3: [1; 𝔭²] ↦ [𝔭+1; 𝔭].
        let c = ctx(3, "T^2");
        let k = c.spec().clone();
        let p = Poly::t(&k);
        let cusp = c.cusp(&Poly::one(&k), c.divisor(2)).unwrap();
        let image = degeneracy_map(&c, &p, &cusp).unwrap();
        assert_eq!(image.numerator, parse(&k, "T+1").unwrap());
        assert_eq!(image.height, p);
        // Low heights pass through unchanged.
        let cusp = c.cusp(&Poly::one(&k), c.divisor(1)).unwrap();
        let image = degeneracy_map(&c, &p, &cusp).unwrap();
        assert_eq!(image, cusp);
    }

    #[test]
    fn composed_degeneracy_height_is_gcd() {
        // Strip T(T+1) off n = T²(T+1) step by step and check the final
        // height is gcd(d, m) for every divisor d.
        let k = FieldSpec::prime(3).unwrap();
        let n = parse(&k, "T^3+T^2").unwrap(); // T²(T+1)
        let m = parse(&k, "T").unwrap();
        let cn = LevelContext::new(&k, &n).unwrap();
        for d_idx in 0..cn.num_divisors() {
            let d = cn.divisor(d_idx).clone();
            // A numerator coprime to n: 1 works for every height.
            let mut cusp = cn.cusp(&Poly::one(&k), &d).unwrap();
            let mut level = n.clone();
            let mut ctx = cn.clone();
            for pstr in ["T+1", "T"] {
                let p = parse(&k, pstr).unwrap();
                cusp = degeneracy_map(&ctx, &p, &cusp).unwrap();
                level = poly::div_exact(&k, &level, &p).unwrap();
                ctx = LevelContext::new(&k, &level).unwrap();
            }
            assert_eq!(level, m);
            let expect = poly::gcd(&k, &d, &m).unwrap();
            assert_eq!(cusp.height, expect, "height of image of d = {}", poly::display(&k, &d));
        }
    }

    #[test]
    fn sub_context_restricts() {
        let c = ctx(3, "T^3+2*T^2+T"); // T(T+1)²
        let sub = c.sub_context(2).unwrap(); // (T+1)²
        assert_eq!(strs(&sub), ["1", "T+1", "T^2+2*T+1"]);
        assert!(c.sub_context(0).is_err());
    }
}
