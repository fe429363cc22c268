//! When is a `Δ`-quotient a perfect `(q−1)(q²−1)`-th power of a modular
//! unit?
//!
//! For an exponent vector `r = (r_a)` over the monic divisors `a | n`, the
//! quotient `g_r = ∏ Δ_a^{r_a}` admits a `(q−1)(q²−1)`-th root that is a
//! modular function with unit reductions iff
//!
//! ```text
//! T1:  (q−1)(q²−1) | S1,  S1 = Σ_a r_a·|a|
//! T2:  (q−1)(q²−1) | S2,  S2 = Σ_a r_a·|n/a|
//! T3:  S0 = Σ_a r_a = 0
//! T4:  ∏ a^{r_a} ∈ (K^*)^{q−1}
//! ```
//!
//! `T4` is decided prime by prime: the product is a `(q−1)`-th power iff
//! `(q−1) | Σ_a r_a·v_p(a)` for every prime `p | n` (the unit part is
//! automatic because `F_q^*` has order `q − 1` and every `a` is monic).
//!
//! The same verdict has an equivalent low-level form that constrains the
//! degree data instead of the absolute values:
//!
//! ```text
//! L1:  S0 = 0
//! L2:  (q+1) | m,     m    = Σ_{deg a odd} r_a
//! L3:  (q−1) | Sdeg,  Sdeg = Σ_a r_a·deg a
//! L4:  m/(q+1) ≡ Sdeg/(q−1)  (mod 2)      — evaluated only when L2 ∧ L3
//! ```
//!
//! together with the same character condition `T4`.  Given `S0 = 0` the
//! two divisibilities `T1` and `T2` are equivalent (replacing `a` by `n/a`
//! flips the sign of `m` and fixes `Sdeg` mod `q−1` and the parity), and
//! each is equivalent to `L2 ∧ L3 ∧ L4`; the tests exercise precisely this
//! equivalence on large random corpora.  Every report therefore carries
//! both flag sets, computed by the two different arithmetic routes.
//!
//! Everything is exact `BigInt` arithmetic; `q = 2` is handled by the
//! same code paths (there `q − 1 = 1`, so `T4` and `L3` hold vacuously
//! and the modulus `(q−1)(q²−1)` collapses to `3`).

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::Error;
use crate::lattice::LevelContext;
use crate::poly;
use crate::Result;

/// The full diagnostic record of a unit-root check: every aggregate the
/// two criteria read, both flag sets, and the verdict.
///
/// Invariant: `verdict == theorem[0] && … && theorem[3]`, and (this is the
/// theorem) it always coincides with [`UnitCheckReport::lemma_verdict`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCheckReport {
    /// `S0 = Σ r_a`.
    pub s0: BigInt,
    /// `S1 = Σ r_a·|a|`.
    pub s1: BigInt,
    /// `S2 = Σ r_a·|n/a|`.
    pub s2: BigInt,
    /// `Sdeg = Σ r_a·deg a`.
    pub s_deg: BigInt,
    /// `m = Σ_{deg a odd} r_a`.
    pub m: BigInt,
    /// `Σ_a r_a·v_{p_i}(a)` for each prime of the level, index order.
    pub prime_valuations: Vec<BigInt>,
    /// `[T1, T2, T3, T4]`.
    pub theorem: [bool; 4],
    /// `[L1, L2, L3, L4]` (`L4` is vacuously true unless `L2 ∧ L3`).
    pub lemma: [bool; 4],
    /// The theorem-route verdict `T1 ∧ T2 ∧ T3 ∧ T4`.
    pub verdict: bool,
}

impl UnitCheckReport {
    /// `T1 ∧ T2 ∧ T3 ∧ T4` — same as [`UnitCheckReport::verdict`].
    pub fn theorem_verdict(&self) -> bool {
        self.theorem.iter().all(|&b| b)
    }

    /// `L1 ∧ L2 ∧ L3 ∧ L4` together with the character condition `T4`:
    /// the lemma-route verdict, which must always equal the theorem's.
    pub fn lemma_verdict(&self) -> bool {
        self.lemma.iter().all(|&b| b) && self.theorem[3]
    }
}

/// Shared aggregates for both criteria.
fn aggregates(ctx: &LevelContext, r: &[BigInt]) -> Result<UnitCheckReport> {
    if r.len() != ctx.num_divisors() {
        return Err(Error::domain(alloc::format!(
            "exponent vector has {} entries, level has {} divisors",
            r.len(),
            ctx.num_divisors()
        )));
    }
    let spec = ctx.spec();
    let mut s0 = BigInt::zero();
    let mut s1 = BigInt::zero();
    let mut s2 = BigInt::zero();
    let mut s_deg = BigInt::zero();
    let mut m = BigInt::zero();
    let mut prime_valuations = alloc::vec![BigInt::zero(); ctx.primes().len()];
    for (idx, ra) in r.iter().enumerate() {
        let a = ctx.divisor(idx);
        let deg = a.degree().expect("divisors are nonzero") as u64;
        s0 += ra;
        s1 += ra * poly::norm(spec, a)?;
        s2 += ra * poly::norm(spec, ctx.divisor(ctx.complement_index(idx)))?;
        s_deg += ra * BigInt::from(deg);
        if deg % 2 == 1 {
            m += ra;
        }
        for (i, &h) in ctx.tuple(idx).iter().enumerate() {
            prime_valuations[i] += ra * BigInt::from(h);
        }
    }
    Ok(UnitCheckReport {
        s0,
        s1,
        s2,
        s_deg,
        m,
        prime_valuations,
        theorem: [false; 4],
        lemma: [false; 4],
        verdict: false,
    })
}

fn fill_flags(spec_q: &BigInt, rep: &mut UnitCheckReport) {
    let q1 = spec_q - 1;
    let qq1 = &q1 * (spec_q * spec_q - 1);
    let t4 = rep
        .prime_valuations
        .iter()
        .all(|v| v.mod_floor(&q1).is_zero());
    rep.theorem = [
        rep.s1.mod_floor(&qq1).is_zero(),
        rep.s2.mod_floor(&qq1).is_zero(),
        rep.s0.is_zero(),
        t4,
    ];

    let qp1 = spec_q + 1;
    let l2 = rep.m.mod_floor(&qp1).is_zero();
    let l3 = rep.s_deg.mod_floor(&q1).is_zero();
    let l4 = if l2 && l3 {
        let two = BigInt::from(2);
        let lhs = (&rep.m / &qp1).mod_floor(&two);
        let rhs = (&rep.s_deg / &q1).mod_floor(&two);
        lhs == rhs
    } else {
        // The parity condition only makes sense once the two quotients
        // exist; it is vacuous (and the conjunction already false) here.
        true
    };
    rep.lemma = [rep.s0.is_zero(), l2, l3, l4];
    rep.verdict = rep.theorem.iter().all(|&b| b);
}

/// Decide the unit-root criterion in its theorem form (`T1`–`T4`).
/// The returned report also carries the lemma flags for inspection.
pub fn check_theorem(ctx: &LevelContext, r: &[BigInt]) -> Result<UnitCheckReport> {
    let mut rep = aggregates(ctx, r)?;
    fill_flags(&ctx.spec().q_big(), &mut rep);
    Ok(rep)
}

/// Decide the criterion in its lemma form (`L1`–`L4` plus the character
/// condition).  Identical report; consult
/// [`UnitCheckReport::lemma_verdict`] for this route's verdict.  The two
/// verdicts agree for every input — the equivalence is the content of the
/// criterion, and the test suites check it on random corpora.
pub fn check_lemma(ctx: &LevelContext, r: &[BigInt]) -> Result<UnitCheckReport> {
    check_theorem(ctx, r)
}

/// `true` iff `∏ Δ_a^{r_a}` admits a `(q−1)(q²−1)`-th root that is a
/// modular unit — the theorem verdict.
pub fn is_unit_root(ctx: &LevelContext, r: &[BigInt]) -> Result<bool> {
    Ok(check_theorem(ctx, r)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::parse;

    fn ctx(q: u64, n: &str) -> LevelContext {
        let k = FieldSpec::from_q(q).unwrap();
        let n = parse(&k, n).unwrap();
        LevelContext::new(&k, &n).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn example_vector_passes() {
        // q = 3, n = T(T+1)², r = (9, −4, 3, −3, 4, −9) in the order
        // (1, 𝔮, 𝔮², 𝔭, 𝔭𝔮, 𝔭𝔮²).
        let c = ctx(3, "T^3+2*T^2+T");
        let rep = check_theorem(&c, &v(&[9, -4, 3, -3, 4, -9])).unwrap();
        assert_eq!(rep.s0, BigInt::from(0));
        assert_eq!(rep.s1, BigInt::from(-192));
        assert_eq!(rep.s2, BigInt::from(192));
        assert_eq!(rep.s_deg, BigInt::from(-20));
        assert_eq!(rep.m, BigInt::from(-16));
        assert_eq!(rep.prime_valuations, v(&[-8, -12]));
        assert_eq!(rep.theorem, [true; 4]);
        assert!(rep.verdict);
        assert!(rep.lemma_verdict());
        assert!(is_unit_root(&c, &v(&[9, -4, 3, -3, 4, -9])).unwrap());
    }

    #[test]
    fn prime_level_multiples() {
        // q = 3, n = T, divisors (1, T): r = (k, −k) passes iff 8 | k
        // (S1 = −2k must be divisible by 16).
        let c = ctx(3, "T");
        for k in 1..=16i64 {
            let rep = check_theorem(&c, &v(&[k, -k])).unwrap();
            assert_eq!(rep.verdict, k % 8 == 0, "k = {k}");
            assert_eq!(rep.verdict, rep.lemma_verdict(), "k = {k}");
        }
    }

    #[test]
    fn lemma_flags_on_small_failure() {
        // q = 3, n = T, r = (1, −1): the odd-degree mass is −1, so L2
        // fails (and T1 fails on the other route).
        let c = ctx(3, "T");
        let rep = check_lemma(&c, &v(&[1, -1])).unwrap();
        assert!(!rep.lemma[1]);
        assert!(!rep.theorem[0]);
        assert!(!rep.verdict && !rep.lemma_verdict());
    }

    #[test]
    fn nonzero_s0_fails_both_routes() {
        let c = ctx(3, "T");
        let rep = check_theorem(&c, &v(&[16, 0])).unwrap();
        assert!(rep.theorem[0], "S1 = 16 is divisible by 16");
        assert!(!rep.theorem[2]);
        assert!(!rep.verdict);
        assert!(!rep.lemma_verdict());
    }

    #[test]
    fn character_condition_catches_odd_valuation() {
        // q = 3, n = T²: r = (0, 16, −16)·? — pick S0 = 0, S1/S2 ≡ 0 but
        // v_T odd: r = (8, -16, 8): S0 = 0, S1 = 8 − 48 + 72·... let's
        // compute: |1|,|T|,|T²| = 1,3,9 → S1 = 8·1 −16·3 + 8·9 = 32; not
        // divisible by 16 → adjust: r = (16, -32, 16): S1 = 64, 16 | 64,
        // S2 = 16·9 −32·3 + 16 = 64 ✓, v_T = −32 + 32 = 0 — even.  Build
        // instead r with v_T ≡ 1 mod 2: r = (a, b, c), v_T = b + 2c.
        // Take (24, -25, 1): S0 = 0, S1 = 24 − 75 + 9 = −42 ✗.  Simpler to
        // assert the flag directly on a vector failing only T4 is fiddly;
        // instead check T4 flags odd valuation while others may fail too.
        let c = ctx(3, "T^2");
        let rep = check_theorem(&c, &v(&[0, 1, -1])).unwrap();
        assert_eq!(rep.prime_valuations, v(&[-1]));
        assert!(!rep.theorem[3], "odd T-valuation must fail T4 at q = 3");
    }

    #[test]
    fn q2_degenerate_modulus() {
        // q = 2: (q−1)(q²−1) = 3, T4 and L3 vacuous.
        let c = ctx(2, "T");
        // r = (k, −k): S1 = k − 2k = −k, so the verdict is 3 | k.
        for k in 1..=6i64 {
            let rep = check_theorem(&c, &v(&[k, -k])).unwrap();
            assert!(rep.theorem[3], "T4 vacuous at q = 2");
            assert!(rep.lemma[2], "L3 vacuous at q = 2");
            assert_eq!(rep.verdict, k % 3 == 0, "k = {k}");
            assert_eq!(rep.verdict, rep.lemma_verdict(), "k = {k}");
        }
    }

    #[test]
    fn length_mismatch_is_domain_error() {
        let c = ctx(3, "T");
        assert!(check_theorem(&c, &v(&[1])).is_err());
    }
}
