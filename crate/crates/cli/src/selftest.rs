//! The built-in verification battery.
//!
//! Nine groups, each independently seeded and reporting pass/fail with a
//! one-line detail.  The groups deliberately re-derive expected values
//! through routes different from the library code they exercise: the
//! closed-form Υ(𝔭^r)⁻¹ is compared against fraction-free Gaussian
//! elimination, the irreducibility predicate against a Frobenius-based
//! oracle (f of degree d is irreducible over F_q iff T^(q^d) ≡ T mod f
//! and gcd(T^(q^(d/ℓ)) − T, f) = 1 for every prime ℓ | d), ramification
//! indices against both the piecewise formula and composed one-prime
//! degeneracy maps, and conjectural orders against the divisibility
//! bound.
//!
//! `Scale::Reduced` is what the `selftest` subcommand runs: the same
//! checks at smaller corpus sizes.  `Scale::Full` is the acceptance
//! configuration.

use std::time::Instant;

use deltaquot_core::matrix::{ExactMatrix, Rational};
use deltaquot_core::{
    bridge, lattice, orders, poly, units, CuspidalDivisor, FieldSpec, LevelContext, Poly,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Reduced corpus sizes, used by the `selftest` subcommand.
    Reduced,
    /// Acceptance-level corpus sizes.
    Full,
}

pub struct GroupOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub millis: u128,
    pub detail: String,
}

pub const GROUP_NAMES: [&str; 9] = [
    "golden-example-1",
    "golden-example-2",
    "closed-form-inverse",
    "criterion-equivalence",
    "bridge-soundness",
    "degree-consistency",
    "ramification-coherence",
    "exponent-bound",
    "arithmetic-substrate",
];

pub fn run_all(scale: Scale) -> Vec<GroupOutcome> {
    GROUP_NAMES
        .iter()
        .map(|name| run_group(name, scale).expect("known group"))
        .collect()
}

pub fn run_group(name: &str, scale: Scale) -> Option<GroupOutcome> {
    let static_name = GROUP_NAMES.iter().copied().find(|g| *g == name)?;
    let body: fn(Scale) -> Result<String, String> = match static_name {
        "golden-example-1" => |_| golden_example_1(),
        "golden-example-2" => |_| golden_example_2(),
        "closed-form-inverse" => closed_form_inverse,
        "criterion-equivalence" => criterion_equivalence,
        "bridge-soundness" => bridge_soundness,
        "degree-consistency" => degree_consistency,
        "ramification-coherence" => ramification_coherence,
        "exponent-bound" => exponent_bound_divides,
        "arithmetic-substrate" => arithmetic_substrate,
        _ => return None,
    };
    let start = Instant::now();
    let result = body(scale);
    let millis = start.elapsed().as_millis();
    let (passed, detail) = match result {
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    Some(GroupOutcome {
        name: static_name,
        passed,
        millis,
        detail,
    })
}

// ---------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn ctx_for(q: u64, n: &str) -> Result<LevelContext, String> {
    let k = FieldSpec::from_q(q).map_err(|e| format!("field q={q}: {e}"))?;
    let f = poly::parse(&k, n).map_err(|e| format!("parse {n}: {e}"))?;
    LevelContext::new(&k, &f).map_err(|e| format!("level {n}: {e}"))
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn bigs(vs: &[i64]) -> Vec<BigInt> {
    vs.iter().map(|&v| BigInt::from(v)).collect()
}

/// Random monic polynomial of exact degree `d`.
fn random_monic(rng: &mut ChaCha8Rng, k: &FieldSpec, d: usize) -> Poly {
    let els = k.elements();
    let mut coeffs: Vec<_> = (0..d)
        .map(|_| els[rng.gen_range(0..els.len())].clone())
        .collect();
    coeffs.push(k.one());
    Poly::from_coeffs(coeffs)
}

/// Random nonzero polynomial of degree at most `d` (may be non-monic).
fn random_poly(rng: &mut ChaCha8Rng, k: &FieldSpec, d: usize) -> Poly {
    let els = k.elements();
    loop {
        let deg = rng.gen_range(0..=d);
        let coeffs: Vec<_> = (0..=deg)
            .map(|_| els[rng.gen_range(0..els.len())].clone())
            .collect();
        let f = Poly::from_coeffs(coeffs);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Rejection-sample a random monic irreducible of exact degree `d`.
fn random_irreducible(rng: &mut ChaCha8Rng, k: &FieldSpec, d: usize) -> Poly {
    loop {
        let f = random_monic(rng, k, d);
        if poly::is_irreducible(k, &f) {
            return f;
        }
    }
}

/// Random level of total degree between 1 and `max_deg` over a field drawn
/// from `qs`.  Repeated prime draws simply raise the exponent, so the
/// sampled shapes cover prime powers and mixed levels alike.
fn random_level(rng: &mut ChaCha8Rng, qs: &[u64], max_deg: usize) -> LevelContext {
    let q = qs[rng.gen_range(0..qs.len())];
    let k = FieldSpec::from_q(q).expect("valid q");
    let mut n = Poly::one(&k);
    let mut budget = rng.gen_range(1..=max_deg);
    while budget > 0 {
        let d = rng.gen_range(1..=budget.min(3));
        let e = rng.gen_range(1..=(budget / d)) as u32;
        let p = random_irreducible(rng, &k, d);
        n = poly::mul(&k, &n, &poly::pow(&k, &p, e));
        budget -= d * e as usize;
        if rng.gen_bool(0.4) {
            break;
        }
    }
    if n.degree() == Some(0) {
        n = poly::mul(&k, &n, &random_irreducible(rng, &k, 1));
    }
    LevelContext::new(&k, &n).expect("level context")
}

/// First `count` monic irreducibles of exact degree `d`, in canonical order.
fn first_irreducibles(k: &FieldSpec, d: usize, count: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    if count == 0 {
        return out;
    }
    for f in poly::monic_polys(k, d) {
        if poly::is_irreducible(k, &f) {
            out.push(f);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// Canonical representatives of every factorization shape of total degree
/// at most `max_deg` that is realizable over `k`: for each multiset of
/// (prime degree, exponent) pairs, instantiate the first irreducibles of
/// each degree.  Levels differing only in which primes of a given degree
/// appear have identical Λ, ρ, deg_P, and ramification data, so one
/// representative per shape covers the whole degree range.
fn shape_levels(k: &FieldSpec, max_deg: usize) -> Vec<Poly> {
    let pools: Vec<Vec<Poly>> = (0..=max_deg)
        .map(|d| {
            if d == 0 {
                Vec::new()
            } else {
                first_irreducibles(k, d, max_deg / d)
            }
        })
        .collect();
    // For each degree choose a nonincreasing exponent tuple over distinct
    // primes of that degree, then move to the next degree.
    fn extend(
        k: &FieldSpec,
        pools: &[Vec<Poly>],
        d: usize,
        idx: usize,
        cap: u32,
        budget: usize,
        acc: &Poly,
        out: &mut Vec<Poly>,
    ) {
        if d >= pools.len() {
            if acc.degree().unwrap_or(0) > 0 {
                out.push(acc.clone());
            }
            return;
        }
        // take no further prime of degree d
        extend(k, pools, d + 1, 0, u32::MAX, budget, acc, out);
        if idx >= pools[d].len() || budget < d {
            return;
        }
        let emax = (budget / d) as u32;
        for e in 1..=emax.min(cap) {
            let next = poly::mul(k, acc, &poly::pow(k, &pools[d][idx], e));
            extend(k, pools, d, idx + 1, e, budget - d * e as usize, &next, out);
        }
    }
    let mut out = Vec::new();
    extend(k, &pools, 1, 0, u32::MAX, max_deg, &Poly::one(k), &mut out);
    out
}

/// Random exponent vector with zero sum.
fn random_zero_sum(rng: &mut ChaCha8Rng, len: usize) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = (0..len - 1)
        .map(|_| big(rng.gen_range(-30i64..=30)))
        .collect();
    let total: BigInt = v.iter().sum();
    v.push(-total);
    v
}

/// Random degree-0 cuspidal divisor on `ctx`: the coefficient of the top
/// divisor n (whose cusps all have degree 1) balances the rest.
fn random_degree0(rng: &mut ChaCha8Rng, ctx: &LevelContext) -> CuspidalDivisor {
    let nd = ctx.num_divisors();
    let mut coeffs: Vec<BigInt> = (0..nd - 1)
        .map(|_| big(rng.gen_range(-5i64..=5)))
        .collect();
    let mut weighted = BigInt::zero();
    for (i, c) in coeffs.iter().enumerate() {
        weighted += c * ctx.deg_p(i).expect("deg_P");
    }
    coeffs.push(-weighted);
    CuspidalDivisor::from_coeffs(ctx, coeffs).expect("degree-0 divisor")
}

/// The shared random corpus for the bridge-soundness and exponent-bound
/// groups: levels of degree at most 8 with two degree-0 divisors and a
/// small scalar each.  Deterministic, so both groups see the same data.
fn bridge_corpus(cases: usize) -> Vec<(LevelContext, CuspidalDivisor, CuspidalDivisor, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0E1_7A05);
    let mut out = Vec::new();
    while 2 * out.len() < cases {
        let ctx = random_level(&mut rng, &[2, 3, 4, 5], 8);
        let a = random_degree0(&mut rng, &ctx);
        let b = random_degree0(&mut rng, &ctx);
        let kmul = rng.gen_range(2i64..=5);
        out.push((ctx, a, b, kmul));
    }
    out
}

// ---------------------------------------------------------------------
// Frobenius-based irreducibility oracle, independent of poly::is_irreducible
// ---------------------------------------------------------------------

fn pow_mod(k: &FieldSpec, base: &Poly, exp: u64, modulus: &Poly) -> Poly {
    let mut result = Poly::one(k);
    let mut base = poly::rem(k, base, modulus).expect("rem");
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = poly::rem(k, &poly::mul(k, &result, &base), modulus).expect("rem");
        }
        base = poly::rem(k, &poly::mul(k, &base, &base), modulus).expect("rem");
        e >>= 1;
    }
    result
}

/// T^(q^steps) mod f, by iterated q-th powers.
fn frobenius_iterate(k: &FieldSpec, f: &Poly, steps: usize) -> Poly {
    let mut x = poly::rem(k, &Poly::t(k), f).expect("rem");
    for _ in 0..steps {
        x = pow_mod(k, &x, k.q(), f);
    }
    x
}

fn prime_factors_usize(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Monic `f` of degree d ≥ 1 is irreducible iff T^(q^d) ≡ T mod f and
/// gcd(T^(q^(d/ℓ)) − T, f) = 1 for every prime ℓ dividing d.
fn rabin_irreducible(k: &FieldSpec, f: &Poly) -> bool {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    let t_mod = poly::rem(k, &Poly::t(k), f).expect("rem");
    if !poly::sub(k, &frobenius_iterate(k, f, d), &t_mod).is_zero() {
        return false;
    }
    for l in prime_factors_usize(d) {
        let h = poly::sub(k, &frobenius_iterate(k, f, d / l), &t_mod);
        let g = poly::gcd(k, &h, f).expect("gcd");
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------
// group 1: squarefree two-prime golden example
// ---------------------------------------------------------------------

fn golden_example_1() -> Result<String, String> {
    // Three field shapes realizing the same abstract two-prime level.
    let cases: [(u64, &str, i64, i64); 3] = [
        (3, "T^2+T", 3, 3),
        (3, "T^3+T", 3, 9),
        (2, "T^4+T^2+T", 2, 8),
    ];
    for (q, n, np, nq) in cases {
        let ctx = ctx_for(q, n)?;
        if ctx.num_divisors() != 4 {
            return fail(format!("q={q} n={n}: expected 4 divisors"));
        }
        let (p, qq) = (big(np), big(nq));
        let pq = &p * &qq;
        let lam = orders::lambda(&ctx).map_err(|e| format!("lambda: {e}"))?;
        let mags = [
            [pq.clone(), p.clone(), qq.clone(), BigInt::one()],
            [p.clone(), pq.clone(), BigInt::one(), qq.clone()],
            [qq.clone(), BigInt::one(), pq.clone(), p.clone()],
            [BigInt::one(), qq.clone(), p.clone(), pq.clone()],
        ];
        for i in 0..4 {
            for j in 0..4 {
                let got = lam.get(i, j);
                if got.denom() != &BigInt::one() || got.numer() != &mags[i][j] {
                    return fail(format!(
                        "q={q} n={n}: Λ[{i}][{j}] = {got}, expected {}",
                        mags[i][j]
                    ));
                }
            }
        }
        let lam_inv = orders::lambda_inverse(&ctx).map_err(|e| format!("lambda_inverse: {e}"))?;
        let den = (&p * &p - BigInt::one()) * (&qq * &qq - BigInt::one());
        let signs = [[1i64, -1, -1, 1], [-1, 1, 1, -1], [-1, 1, 1, -1], [1, -1, -1, 1]];
        for i in 0..4 {
            for j in 0..4 {
                let want = Rational::new(big(signs[i][j]) * &mags[i][j], den.clone());
                if lam_inv.get(i, j) != &want {
                    return fail(format!(
                        "q={q} n={n}: Λ⁻¹[{i}][{j}] = {}, expected {}",
                        lam_inv.get(i, j),
                        want
                    ));
                }
            }
        }
        // Bridge rays of the standard degree-0 divisors, checked as exact
        // fraction equalities against hand-computed images.
        let rays: [(usize, Vec<BigInt>, BigInt); 3] = [
            (
                0,
                vec![&pq - BigInt::one(), &qq - &p, &p - &qq, BigInt::one() - &pq],
                den.clone(),
            ),
            (
                2,
                vec![-BigInt::one(), BigInt::one(), p.clone(), -&p],
                (&p * &p - BigInt::one()) * (&qq - BigInt::one()),
            ),
            (
                1,
                vec![-BigInt::one(), qq.clone(), BigInt::one(), -&qq],
                (&p - BigInt::one()) * (&qq * &qq - BigInt::one()),
            ),
        ];
        for (idx, expect_r, expect_den) in rays {
            let div = CuspidalDivisor::standard(&ctx, idx).map_err(|e| e.to_string())?;
            let img = bridge::bridge_g(&ctx, &div).map_err(|e| format!("bridge: {e}"))?;
            for (a, b) in img.reduced_r.iter().zip(expect_r.iter()) {
                // a / reduced_n == b / expect_den
                if a * &expect_den != b * &img.reduced_n {
                    return fail(format!(
                        "q={q} n={n} divisor {idx}: ray {a}/{} vs {b}/{expect_den}",
                        img.reduced_n
                    ));
                }
            }
        }
    }
    Ok("3 field shapes: Λ, Λ⁻¹, and 3 standard bridge rays each".into())
}

// ---------------------------------------------------------------------
// group 2: level with a square factor
// ---------------------------------------------------------------------

fn golden_example_2() -> Result<String, String> {
    let ctx = ctx_for(3, "T^3+2T^2+T")?;
    if ctx.num_divisors() != 6 {
        return fail("expected 6 divisors");
    }
    let lam = orders::lambda(&ctx).map_err(|e| e.to_string())?;
    let expect: [[i64; 6]; 6] = [
        [27, 9, 3, 9, 3, 1],
        [6, 18, 6, 2, 6, 2],
        [3, 9, 27, 1, 3, 9],
        [9, 3, 1, 27, 9, 3],
        [2, 6, 2, 6, 18, 6],
        [1, 3, 9, 3, 9, 27],
    ];
    for i in 0..6 {
        for j in 0..6 {
            let got = lam.get(i, j);
            if got.denom() != &BigInt::one() || got.numer() != &big(expect[i][j]) {
                return fail(format!("Λ[{i}][{j}] = {got}, expected {}", expect[i][j]));
            }
        }
    }
    // ρ̃ = diag((q−1)/ρ(d)) with the middle heights of the square prime
    // picking up the factor 2.
    let rho = orders::rho_diag(&ctx);
    let rho_expect = [1i64, 2, 1, 1, 2, 1];
    for i in 0..6 {
        for j in 0..6 {
            let want = if i == j { big(rho_expect[i]) } else { BigInt::zero() };
            let got = rho.get(i, j);
            if got.denom() != &BigInt::one() || got.numer() != &want {
                return fail(format!("ρ̃[{i}][{j}] = {got}, expected {want}"));
            }
        }
    }
    // Λ⁻¹ from the two printed blocks: Υ(𝔭)⁻¹ = (1/8)[[3,−1],[−1,3]],
    // Υ(𝔮²)⁻¹ = (1/24)[[3,−3,0],[−1,10,−1],[0,−3,3]], Kronecker product
    // (first prime slowest), columns divided by ρ̃.
    let a_num = [[3i64, -1], [-1, 3]];
    let b_num = [[3i64, -3, 0], [-1, 10, -1], [0, -3, 3]];
    let block_a = ExactMatrix::from_fn(2, |i, j| Rational::new(big(a_num[i][j]), big(8)));
    let block_b = ExactMatrix::from_fn(3, |i, j| Rational::new(big(b_num[i][j]), big(24)));
    let kron = block_a.kron(&block_b);
    let lam_inv = orders::lambda_inverse(&ctx).map_err(|e| e.to_string())?;
    for i in 0..6 {
        for j in 0..6 {
            let want = kron.get(i, j).clone() / Rational::from(big(rho_expect[j]));
            if lam_inv.get(i, j) != &want {
                return fail(format!(
                    "Λ⁻¹[{i}][{j}] = {}, expected {want}",
                    lam_inv.get(i, j)
                ));
            }
        }
    }
    if !lam.mul(&lam_inv).map_err(|e| e.to_string())?.is_identity() {
        return fail("Λ·Λ⁻¹ ≠ I");
    }
    let n_scale = bridge::scale_n(&ctx);
    if n_scale != big(384) {
        return fail(format!("N = {n_scale}, expected 384"));
    }
    let d0 = CuspidalDivisor::standard(&ctx, 0).map_err(|e| e.to_string())?;
    let img = bridge::bridge_g(&ctx, &d0).map_err(|e| e.to_string())?;
    if img.r != bigs(&[18, -8, 6, -6, 8, -18]) {
        return fail(format!("raw bridge image {:?}", img.r));
    }
    if img.reduced_r != bigs(&[9, -4, 3, -3, 4, -9]) || img.reduced_n != big(192) {
        return fail(format!(
            "reduced bridge image {:?} / {}",
            img.reduced_r, img.reduced_n
        ));
    }
    // The reduced vector is the admissible exponent vector of the CLI
    // golden: S1 = −192, S2 = +192, prime-valuation sums (−8, −12).
    let rep = units::check_theorem(&ctx, &img.reduced_r).map_err(|e| e.to_string())?;
    if !rep.s0.is_zero() || rep.s1 != big(-192) || rep.s2 != big(192) {
        return fail(format!(
            "unit sums S0={} S1={} S2={}, expected 0/−192/+192",
            rep.s0, rep.s1, rep.s2
        ));
    }
    if rep.prime_valuations != bigs(&[-8, -12]) {
        return fail(format!(
            "prime valuation sums {:?}, expected (−8, −12)",
            rep.prime_valuations
        ));
    }
    if !rep.verdict || !rep.theorem_verdict() || !rep.lemma_verdict() {
        return fail("reduced golden vector is not admissible");
    }
    let t = bridge::conjectural_order(&ctx, &d0).map_err(|e| e.to_string())?;
    if t != big(12) {
        return fail(format!("conjectural order {t}, expected 12"));
    }
    let bound = bridge::exponent_bound(&ctx);
    if bound != big(192) {
        return fail(format!("exponent bound {bound}, expected 192"));
    }
    if !bound.is_multiple_of(&t) {
        return fail("12 ∤ 192");
    }
    Ok("Λ, ρ̃, Λ⁻¹, N=384, bridge (18,−8,6,−6,8,−18)→(9,−4,3,−3,4,−9)/192, order 12".into())
}

// ---------------------------------------------------------------------
// group 3: closed-form Υ(𝔭^r)⁻¹ vs fraction-free elimination
// ---------------------------------------------------------------------

fn closed_form_inverse(scale: Scale) -> Result<String, String> {
    let rmax: u32 = match scale {
        Scale::Reduced => 4,
        Scale::Full => 5,
    };
    let mut blocks = 0usize;
    for q in [2u64, 3, 4] {
        for deg_p in [1u32, 2, 3] {
            let p_norm = BigInt::from(q).pow(deg_p);
            for r in 1..=rmax {
                let block = orders::upsilon_pr(&p_norm, r);
                let closed = orders::upsilon_pr_inverse(&p_norm, r);
                let generic = block
                    .inverse()
                    .map_err(|e| format!("q={q} |p|={p_norm} r={r}: {e}"))?;
                for i in 0..block.size() {
                    for j in 0..block.size() {
                        if closed.get(i, j) != generic.get(i, j) {
                            return fail(format!(
                                "q={q} |p|={p_norm} r={r}: closed[{i}][{j}] = {} vs {}",
                                closed.get(i, j),
                                generic.get(i, j)
                            ));
                        }
                    }
                }
                if !block
                    .mul(&closed)
                    .map_err(|e| e.to_string())?
                    .is_identity()
                {
                    return fail(format!("q={q} |p|={p_norm} r={r}: Υ·Υ⁻¹ ≠ I"));
                }
                blocks += 1;
            }
        }
    }
    Ok(format!("{blocks} blocks: closed form = elimination"))
}

// ---------------------------------------------------------------------
// group 4: theorem/lemma criterion equivalences on random vectors
// ---------------------------------------------------------------------

fn criterion_equivalence(scale: Scale) -> Result<String, String> {
    let cases = match scale {
        Scale::Reduced => 250usize,
        Scale::Full => 1000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0E1_7A04);
    let mut admissible = 0usize;
    for i in 0..cases {
        let ctx = random_level(&mut rng, &[2, 3, 4], 6);
        let r = random_zero_sum(&mut rng, ctx.num_divisors());
        let rep_t = units::check_theorem(&ctx, &r).map_err(|e| format!("case {i}: {e}"))?;
        let rep_l = units::check_lemma(&ctx, &r).map_err(|e| format!("case {i}: {e}"))?;
        if rep_t.theorem_verdict() != rep_l.lemma_verdict() {
            return fail(format!(
                "case {i}: theorem verdict {} ≠ lemma verdict {} (q={}, n={})",
                rep_t.theorem_verdict(),
                rep_l.lemma_verdict(),
                ctx.spec().q(),
                poly::display(ctx.spec(), ctx.level())
            ));
        }
        // With Σr = 0 the two divisibility conditions are equivalent …
        if rep_t.theorem[0] != rep_t.theorem[1] {
            return fail(format!("case {i}: T1 ⇎ T2 despite zero sum"));
        }
        // … and each matches the lemma congruences L2 ∧ L3 ∧ L4.
        let lemma_core = rep_l.lemma[1] && rep_l.lemma[2] && rep_l.lemma[3];
        if rep_t.theorem[0] != lemma_core {
            return fail(format!("case {i}: T1 ⇎ L2∧L3∧L4"));
        }
        if rep_t.theorem_verdict() {
            admissible += 1;
        }
    }
    Ok(format!(
        "{cases} zero-sum vectors: verdicts agree ({admissible} admissible)"
    ))
}

// ---------------------------------------------------------------------
// group 5: bridge soundness on random degree-0 divisors
// ---------------------------------------------------------------------

fn bridge_soundness(scale: Scale) -> Result<String, String> {
    let cases = match scale {
        Scale::Reduced => 60usize,
        Scale::Full => 200,
    };
    let mut done = 0usize;
    for (case, (ctx, a, b, kmul)) in bridge_corpus(cases).iter().enumerate() {
        let n_scale = bridge::scale_n(ctx);
        let lam = orders::lambda(ctx).map_err(|e| e.to_string())?;
        let ia = bridge::bridge_g(ctx, a).map_err(|e| format!("case {case}: {e}"))?;
        let ib = bridge::bridge_g(ctx, b).map_err(|e| format!("case {case}: {e}"))?;
        for (div, img) in [(a, &ia), (b, &ib)] {
            // Λ·r = N·c, recomputed through the forward matrix.
            let r_rat: Vec<Rational> = img.r.iter().map(|x| Rational::from(x.clone())).collect();
            let lhs = lam.mul_vec(&r_rat).map_err(|e| e.to_string())?;
            for (d_idx, l) in lhs.iter().enumerate() {
                let want = Rational::from(&n_scale * &div.coeffs()[d_idx]);
                if *l != want {
                    return fail(format!("case {case}: (Λr)[{d_idx}] = {l} ≠ N·c"));
                }
            }
            let total: BigInt = img.r.iter().sum();
            if !total.is_zero() {
                return fail(format!("case {case}: Σr = {total} ≠ 0"));
            }
            // the reduced pair represents the same ray
            for (raw, red) in img.r.iter().zip(img.reduced_r.iter()) {
                if raw * &img.reduced_n != red * &img.n_scale {
                    return fail(format!("case {case}: reduction changed the ray"));
                }
            }
        }
        // additivity on raw images (same N on both sides)
        let sum = CuspidalDivisor::from_coeffs(
            ctx,
            a.coeffs()
                .iter()
                .zip(b.coeffs())
                .map(|(x, y)| x + y)
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let isum = bridge::bridge_g(ctx, &sum).map_err(|e| format!("case {case}: {e}"))?;
        for ((x, y), z) in ia.r.iter().zip(ib.r.iter()).zip(isum.r.iter()) {
            if &(x + y) != z {
                return fail(format!("case {case}: bridge is not additive"));
            }
        }
        // injectivity: distinct divisors must give distinct raw images
        if a.coeffs() != b.coeffs() && ia.r == ib.r {
            return fail(format!("case {case}: distinct divisors collide"));
        }
        // scalar linearity
        let kb = big(*kmul);
        let iscaled =
            bridge::bridge_g(ctx, &a.scaled(&kb)).map_err(|e| format!("case {case}: {e}"))?;
        for (x, z) in ia.r.iter().zip(iscaled.r.iter()) {
            if &(x * &kb) != z {
                return fail(format!("case {case}: bridge is not scalar-linear"));
            }
        }
        done += 2;
    }
    Ok(format!(
        "{done} divisors: integral, Λr = Nc, Σr = 0, additive, injective"
    ))
}

// ---------------------------------------------------------------------
// group 6: column-degree consistency of Λ over all shapes
// ---------------------------------------------------------------------

fn degree_consistency(scale: Scale) -> Result<String, String> {
    let (qs, max_deg): (&[u64], usize) = match scale {
        Scale::Reduced => (&[2, 3], 6),
        Scale::Full => (&[2, 3, 4, 5], 8),
    };
    let mut levels = 0usize;
    for &q in qs {
        let k = FieldSpec::from_q(q).map_err(|e| e.to_string())?;
        for n in shape_levels(&k, max_deg) {
            let ctx = LevelContext::new(&k, &n).map_err(|e| e.to_string())?;
            let lam = orders::lambda(&ctx).map_err(|e| e.to_string())?;
            let nd = ctx.num_divisors();
            let weights: Vec<BigInt> = (0..nd)
                .map(|d| ctx.deg_p(d).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let mut reference: Option<BigInt> = None;
            for a in 0..nd {
                let mut total = BigInt::zero();
                for d in 0..nd {
                    let entry = lam.get(d, a);
                    if entry.denom() != &BigInt::one() {
                        return fail("non-integral Λ entry");
                    }
                    total += entry.numer() * &weights[d];
                }
                match &reference {
                    None => reference = Some(total),
                    Some(want) if *want == total => {}
                    Some(want) => {
                        return fail(format!(
                            "q={q} n={}: column {a} weight {total} ≠ {want}",
                            poly::display(&k, &n)
                        ))
                    }
                }
            }
            levels += 1;
        }
    }
    Ok(format!(
        "{levels} levels: Σ_d Λ[d][a]·deg_P(d) constant over columns"
    ))
}

// ---------------------------------------------------------------------
// group 7: ramification indices vs order ratios and composed maps
// ---------------------------------------------------------------------

fn ramification_coherence(scale: Scale) -> Result<String, String> {
    let (qs, max_deg): (&[u64], usize) = match scale {
        Scale::Reduced => (&[2, 3], 5),
        Scale::Full => (&[2, 3, 4], 6),
    };
    let mut triples = 0usize;
    for &q in qs {
        let k = FieldSpec::from_q(q).map_err(|e| e.to_string())?;
        for n in shape_levels(&k, max_deg) {
            let ctx = LevelContext::new(&k, &n).map_err(|e| e.to_string())?;
            let nd = ctx.num_divisors();
            for m_idx in 1..nd {
                let sub = ctx.sub_context(m_idx).map_err(|e| e.to_string())?;
                let deg_alpha =
                    orders::degeneracy_degree(&ctx, m_idx).map_err(|e| e.to_string())?;
                let mut fiber: Vec<BigInt> = vec![BigInt::zero(); sub.num_divisors()];
                for d_idx in 0..nd {
                    // ramification_index internally cross-checks the
                    // piecewise product against the order-ratio route and
                    // errors on any mismatch.
                    let e = orders::ramification_index(&ctx, m_idx, d_idx)
                        .map_err(|e| format!("q={q} m={m_idx} d={d_idx}: {e}"))?;
                    let dprime = ctx.gcd_index(d_idx, m_idx);
                    let dprime_sub = sub
                        .index_of(ctx.divisor(dprime))
                        .map_err(|e| e.to_string())?;
                    fiber[dprime_sub] += &e * ctx.deg_p(d_idx).map_err(|e| e.to_string())?;
                    // composed one-prime maps must send height d to gcd(d, m)
                    let landed = composed_height(&ctx, m_idx, d_idx)?;
                    if landed != *ctx.divisor(dprime) {
                        return fail(format!(
                            "q={q} n={} m={m_idx}: maps send d={d_idx} to {} ≠ gcd",
                            poly::display(&k, &n),
                            poly::display(&k, &landed)
                        ));
                    }
                    triples += 1;
                }
                // fibers of the degeneracy map account for its full degree
                for (j, f) in fiber.iter().enumerate() {
                    let want = &deg_alpha * sub.deg_p(j).map_err(|e| e.to_string())?;
                    if *f != want {
                        return fail(format!(
                            "q={q} n={} m={m_idx}: fiber over {j} sums to {f} ≠ {want}",
                            poly::display(&k, &n)
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{triples} (n, m, d) triples: piecewise = ratio, fibers sum, maps compose"
    ))
}

/// Push the cusp [1; d] down from the level of `ctx` to the divisor at
/// `m_idx` by composing one-prime degeneracy maps, returning the final
/// height.
fn composed_height(ctx: &LevelContext, m_idx: usize, d_idx: usize) -> Result<Poly, String> {
    let k = ctx.spec().clone();
    let one = Poly::one(&k);
    let mut cur = ctx.clone();
    let mut cusp = cur
        .cusp(&one, ctx.divisor(d_idx))
        .map_err(|e| e.to_string())?;
    let target = ctx.tuple(m_idx).to_vec();
    let primes: Vec<Poly> = ctx.primes().iter().map(|(p, _)| p.clone()).collect();
    loop {
        let mut stripped = false;
        for (i, p) in primes.iter().enumerate() {
            let cur_exp = cur
                .primes()
                .iter()
                .find(|(pp, _)| pp == p)
                .map(|(_, r)| *r)
                .unwrap_or(0);
            if cur_exp > target[i] {
                cusp = lattice::degeneracy_map(&cur, p, &cusp).map_err(|e| e.to_string())?;
                let next = poly::div_exact(&k, cur.level(), p).map_err(|e| e.to_string())?;
                cur = LevelContext::new(&k, &next).map_err(|e| e.to_string())?;
                cusp = coprime_representative(&cur, &cusp)?;
                stripped = true;
                break;
            }
        }
        if !stripped {
            break;
        }
    }
    Ok(cusp.height)
}

/// Replace the numerator of `c` by a representative of the same cusp
/// class that is coprime to the level of `ctx`.  A cusp class on X_0(n)
/// is determined by its height d and the numerator modulo
/// g = gcd(d, n/d), so adding any multiple of g preserves the class; a
/// coprime representative always exists for a genuine class.  The image
/// of a chained degeneracy map can land on a representative sharing a
/// factor with the level, which the strict constructor rejects.
fn coprime_representative(
    ctx: &LevelContext,
    c: &lattice::Cusp,
) -> Result<lattice::Cusp, String> {
    let k = ctx.spec().clone();
    if poly::gcd(&k, &c.numerator, ctx.level())
        .map_err(|e| e.to_string())?
        .is_one()
    {
        return Ok(c.clone());
    }
    let d_idx = ctx.index_of(&c.height).map_err(|e| e.to_string())?;
    let comp = ctx.complement_index(d_idx);
    let g = poly::gcd(&k, &c.height, ctx.divisor(comp)).map_err(|e| e.to_string())?;
    let max_extra = ctx.level().degree().unwrap_or(0) + 2;
    for deg in 0..=max_extra {
        for m in poly::monic_polys(&k, deg) {
            for u in k.units() {
                let t = poly::scale(&k, &u, &m);
                let b = poly::add(&k, &c.numerator, &poly::mul(&k, &g, &t));
                if poly::gcd(&k, &b, ctx.level())
                    .map_err(|e| e.to_string())?
                    .is_one()
                {
                    return ctx.cusp(&b, &c.height).map_err(|e| e.to_string());
                }
            }
        }
    }
    fail(format!(
        "no coprime representative for [{}; {}] at level {}",
        poly::display(&k, &c.numerator),
        poly::display(&k, &c.height),
        poly::display(&k, ctx.level())
    ))
}

// ---------------------------------------------------------------------
// group 8: conjectural order divides the exponent bound
// ---------------------------------------------------------------------

fn exponent_bound_divides(scale: Scale) -> Result<String, String> {
    let cases = match scale {
        Scale::Reduced => 60usize,
        Scale::Full => 200,
    };
    let mut done = 0usize;
    let mut max_order = BigInt::one();
    for (case, (ctx, a, b, _)) in bridge_corpus(cases).iter().enumerate() {
        let bound = bridge::exponent_bound(ctx);
        for div in [a, b] {
            let t = bridge::conjectural_order(ctx, div)
                .map_err(|e| format!("case {case}: {e}"))?;
            if !bound.is_multiple_of(&t) {
                return fail(format!(
                    "case {case}: order {t} ∤ bound {bound} (q={}, n={})",
                    ctx.spec().q(),
                    poly::display(ctx.spec(), ctx.level())
                ));
            }
            if t > max_order {
                max_order = t.clone();
            }
            done += 1;
        }
    }
    Ok(format!(
        "{done} divisors: order | N/(q−1); largest order {max_order}"
    ))
}

// ---------------------------------------------------------------------
// group 9: arithmetic substrate against independent oracles
// ---------------------------------------------------------------------

fn arithmetic_substrate(scale: Scale) -> Result<String, String> {
    let cases = match scale {
        Scale::Reduced => 120usize,
        Scale::Full => 500,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0E1_7A09);
    let qs = [2u64, 3, 4, 5, 9];

    // factorization reconstruction
    for i in 0..cases {
        let q = qs[rng.gen_range(0..qs.len())];
        let k = FieldSpec::from_q(q).map_err(|e| e.to_string())?;
        let f = random_poly(&mut rng, &k, 8);
        let fac = poly::factor(&k, &f).map_err(|e| format!("factor case {i}: {e}"))?;
        let mut prod = Poly::constant(fac.unit.clone());
        for (p, e) in &fac.factors {
            if !p.is_monic() {
                return fail(format!("factor case {i}: non-monic factor"));
            }
            if !poly::is_irreducible(&k, p) {
                return fail(format!("factor case {i}: reducible factor"));
            }
            prod = poly::mul(&k, &prod, &poly::pow(&k, p, *e));
        }
        if prod != f {
            return fail(format!(
                "factor case {i}: product ≠ input for {}",
                poly::display(&k, &f)
            ));
        }
    }

    // irreducibility against the Frobenius oracle
    let mut primes_seen = 0usize;
    for i in 0..cases {
        let q = qs[rng.gen_range(0..qs.len())];
        let k = FieldSpec::from_q(q).map_err(|e| e.to_string())?;
        let d = rng.gen_range(1..=8);
        let f = random_monic(&mut rng, &k, d);
        let lib = poly::is_irreducible(&k, &f);
        let oracle = rabin_irreducible(&k, &f);
        if lib != oracle {
            return fail(format!(
                "irreducibility case {i}: library {lib} ≠ oracle {oracle} for {} over q={q}",
                poly::display(&k, &f)
            ));
        }
        if lib {
            primes_seen += 1;
        }
    }

    // extended gcd identity
    for i in 0..cases {
        let q = qs[rng.gen_range(0..qs.len())];
        let k = FieldSpec::from_q(q).map_err(|e| e.to_string())?;
        let f = random_poly(&mut rng, &k, 6);
        let g = random_poly(&mut rng, &k, 6);
        let (d, s, t) = poly::xgcd(&k, &f, &g).map_err(|e| format!("xgcd case {i}: {e}"))?;
        let lhs = poly::add(&k, &poly::mul(&k, &s, &f), &poly::mul(&k, &t, &g));
        if lhs != d {
            return fail(format!("xgcd case {i}: Bézout identity fails"));
        }
        let div_f = poly::divides(&k, &d, &f).map_err(|e| e.to_string())?;
        let div_g = poly::divides(&k, &d, &g).map_err(|e| e.to_string())?;
        if !div_f || !div_g {
            return fail(format!("xgcd case {i}: gcd does not divide both inputs"));
        }
        if !d.is_monic() {
            return fail(format!("xgcd case {i}: gcd not monic"));
        }
    }

    // norm multiplicativity
    for i in 0..cases {
        let q = qs[rng.gen_range(0..qs.len())];
        let k = FieldSpec::from_q(q).map_err(|e| e.to_string())?;
        let f = random_poly(&mut rng, &k, 6);
        let g = random_poly(&mut rng, &k, 6);
        let nf = poly::norm(&k, &f).map_err(|e| e.to_string())?;
        let ng = poly::norm(&k, &g).map_err(|e| e.to_string())?;
        let nfg = poly::norm(&k, &poly::mul(&k, &f, &g)).map_err(|e| e.to_string())?;
        if &nf * &ng != nfg {
            return fail(format!("norm case {i}: |f|·|g| = {} ≠ |fg| = {nfg}", &nf * &ng));
        }
    }

    Ok(format!(
        "{cases}×4 cases (factor, irreducibility [{primes_seen} primes], xgcd, norm)"
    ))
}
