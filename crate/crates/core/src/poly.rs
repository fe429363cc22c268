//! Dense univariate polynomials over `F_q` and the `A = F_q[T]` toolkit:
//! exact division, gcd/xgcd, trial-division factorization, norms, and the
//! text format used at every I/O boundary.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so
//! the zero polynomial is the empty vector and `degree` of zero is `None`.
//! All arithmetic is a pure function taking the [`FieldSpec`] explicitly;
//! polynomials are plain immutable values.
//!
//! Factorization is plain trial division in canonical enumeration order:
//! candidates of degree `d` are only tested after every prime of smaller
//! degree has been divided out, so a composite candidate can never divide
//! the remaining cofactor and the factors arrive already sorted.  That is
//! quadratic-ish in `q^{deg/2}` and entirely adequate at desk scale
//! (`deg n ≤ 12`); no squarefree or Cantor–Zassenhaus machinery is needed.
//!
//! # Text format
//!
//! ```text
//! poly   := term (('+'|'-') term)*          whitespace ignored
//! term   := factor ('*' factor)*            at most one of each kind:
//! factor := uint                            scalar, reduced mod p
//!         | 'u' ('^' k)? | '(' u-poly ')'   coefficient in F_{p^e}, e > 1
//!         | 'T' ('^' k)?
//! ```
//!
//! Display writes terms highest degree first, drops zero terms and unit
//! coefficients (`T^2+2*T+1`, `(u+1)*T^2+u`), and renders `F_{p^e}`
//! coefficients as polynomials in the power-basis generator `u`.  Parsing
//! accepts everything display produces; the round trip is exact.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::Pow;

use crate::error::Error;
use crate::field::{FieldSpec, FqElem};
use crate::Result;

/// A polynomial in `T` over `F_q`: coefficients lowest degree first,
/// trailing zeros trimmed (zero is the empty vector).
///
/// The derived equality and the manual `Ord` (degree first, then the
/// coefficient tuple lexicographically from the constant term up) give the
/// deterministic canonical order used to sort primes of a level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// Build from coefficients (lowest degree first); trailing zeros are
    /// trimmed so the representation is unique.
    pub fn from_coeffs(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: FqElem) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `c·T^k`.
    pub fn term(k: &FieldSpec, c: FqElem, deg: usize) -> Self {
        let mut coeffs = vec![k.zero(); deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(coeffs)
    }

    /// The variable `T`.
    pub fn t(k: &FieldSpec) -> Self {
        Poly::term(k, k.one(), 1)
    }

    /// The constant `1`.
    pub fn one(k: &FieldSpec) -> Self {
        Poly::constant(k.one())
    }

    /// `deg f`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff the polynomial is `1`.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && is_one_elem(&self.coeffs[0])
    }

    /// True iff nonzero with leading coefficient `1`.
    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(is_one_elem)
    }

    /// Coefficients, lowest degree first (empty for zero).
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// The coefficient of `T^i` (zero beyond the degree).
    pub fn coeff(&self, k: &FieldSpec, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    /// Leading coefficient; errors on zero.
    pub fn lead(&self) -> Result<FqElem> {
        self.coeffs
            .last()
            .cloned()
            .ok_or_else(|| Error::domain("zero polynomial has no leading coefficient"))
    }
}

fn is_one_elem(c: &FqElem) -> bool {
    c.coords().first() == Some(&1) && c.coords()[1..].iter().all(|&x| x == 0)
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Canonical order: degree ascending, then the coefficient tuple
    /// `(c_0, c_1, …)` lexicographically (constant term most significant),
    /// each coefficient compared by its power-basis coordinates.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

// --- ring operations -----------------------------------------------------

pub fn add(k: &FieldSpec, f: &Poly, g: &Poly) -> Poly {
    let n = f.coeffs.len().max(g.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(k.add(&f.coeff(k, i), &g.coeff(k, i)));
    }
    Poly::from_coeffs(out)
}

pub fn neg(k: &FieldSpec, f: &Poly) -> Poly {
    Poly::from_coeffs(f.coeffs.iter().map(|c| k.neg(c)).collect())
}

pub fn sub(k: &FieldSpec, f: &Poly, g: &Poly) -> Poly {
    add(k, f, &neg(k, g))
}

pub fn mul(k: &FieldSpec, f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() || g.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![k.zero(); f.coeffs.len() + g.coeffs.len() - 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(a, b));
        }
    }
    Poly::from_coeffs(out)
}

/// Scale by a field element.
pub fn scale(k: &FieldSpec, c: &FqElem, f: &Poly) -> Poly {
    Poly::from_coeffs(f.coeffs.iter().map(|a| k.mul(c, a)).collect())
}

/// `f^e` by repeated squaring; `f^0 = 1`.
pub fn pow(k: &FieldSpec, f: &Poly, mut e: u32) -> Poly {
    let mut acc = Poly::one(k);
    let mut base = f.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(k, &acc, &base);
        }
        base = mul(k, &base, &base);
        e >>= 1;
    }
    acc
}

/// Euclidean division `f = q·g + r` with `deg r < deg g`.
/// Domain error when `g = 0`.
pub fn divmod(k: &FieldSpec, f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    let gd = g
        .degree()
        .ok_or_else(|| Error::domain("polynomial division by zero"))?;
    let lead_inv = k.inv(&g.coeffs[gd])?;
    let mut rem = f.coeffs.clone();
    let mut quot = vec![k.zero(); f.coeffs.len().saturating_sub(gd)];
    while rem.len() > gd {
        let rd = rem.len() - 1;
        let c = k.mul(&rem[rd], &lead_inv);
        if !c.is_zero() {
            quot[rd - gd] = c.clone();
            for (i, b) in g.coeffs.iter().enumerate() {
                let t = k.mul(&c, b);
                rem[rd - gd + i] = k.sub(&rem[rd - gd + i], &t);
            }
        }
        // The leading entry is now zero by construction.
        rem.pop();
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
    }
    Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
}

/// Remainder of `f` mod `g`.
pub fn rem(k: &FieldSpec, f: &Poly, g: &Poly) -> Result<Poly> {
    Ok(divmod(k, f, g)?.1)
}

/// True iff `g` divides `f` (`g ≠ 0`).
pub fn divides(k: &FieldSpec, g: &Poly, f: &Poly) -> Result<bool> {
    Ok(rem(k, f, g)?.is_zero())
}

/// Exact quotient `f / g`; inconsistency error if the division leaves a
/// remainder (callers use this only where divisibility is guaranteed).
pub fn div_exact(k: &FieldSpec, f: &Poly, g: &Poly) -> Result<Poly> {
    let (q, r) = divmod(k, f, g)?;
    if !r.is_zero() {
        return Err(Error::inconsistency("exact polynomial division left a remainder"));
    }
    Ok(q)
}

/// Monic normalization `f / lead(f)`.  Domain error on zero.
pub fn monic(k: &FieldSpec, f: &Poly) -> Result<Poly> {
    let inv = k.inv(&f.lead()?)?;
    Ok(scale(k, &inv, f))
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(k: &FieldSpec, f: &Poly, g: &Poly) -> Result<Poly> {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = rem(k, &a, &b)?;
        a = core::mem::replace(&mut b, r);
    }
    if a.is_zero() {
        return Ok(a);
    }
    monic(k, &a)
}

/// Extended gcd: returns `(d, s, t)` with `s·f + t·g = d`, `d` the monic
/// gcd (or zero when both inputs are zero).
pub fn xgcd(k: &FieldSpec, f: &Poly, g: &Poly) -> Result<(Poly, Poly, Poly)> {
    // Invariants: r0 = s0·f + t0·g,  r1 = s1·f + t1·g.
    let mut r0 = f.clone();
    let mut r1 = g.clone();
    let mut s0 = Poly::one(k);
    let mut s1 = Poly::zero();
    let mut t0 = Poly::zero();
    let mut t1 = Poly::one(k);
    while !r1.is_zero() {
        let (q, r) = divmod(k, &r0, &r1)?;
        r0 = core::mem::replace(&mut r1, r);
        let ns = sub(k, &s0, &mul(k, &q, &s1));
        s0 = core::mem::replace(&mut s1, ns);
        let nt = sub(k, &t0, &mul(k, &q, &t1));
        t0 = core::mem::replace(&mut t1, nt);
    }
    if r0.is_zero() {
        return Ok((r0, s0, t0));
    }
    let c = k.inv(&r0.lead()?)?;
    Ok((scale(k, &c, &r0), scale(k, &c, &s0), scale(k, &c, &t0)))
}

/// Evaluate `f` at `x`, Horner style.
pub fn eval(k: &FieldSpec, f: &Poly, x: &FqElem) -> FqElem {
    let mut acc = k.zero();
    for c in f.coeffs.iter().rev() {
        acc = k.add(&k.mul(&acc, x), c);
    }
    acc
}

/// The `p`-adic valuation `v_p(f)` for a nonconstant `p` and nonzero `f`.
pub fn valuation(k: &FieldSpec, f: &Poly, p: &Poly) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::domain("valuation of the zero polynomial"));
    }
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::domain("valuation at a constant"));
    }
    let mut v = 0u32;
    let mut rest = f.clone();
    loop {
        let (q, r) = divmod(k, &rest, p)?;
        if !r.is_zero() {
            return Ok(v);
        }
        v += 1;
        rest = q;
    }
}

/// The absolute value `|f| = q^{deg f}` (so `|unit| = 1`).
/// Domain error on zero.
pub fn norm(k: &FieldSpec, f: &Poly) -> Result<BigInt> {
    let d = f
        .degree()
        .ok_or_else(|| Error::domain("norm of the zero polynomial"))?;
    Ok(Pow::pow(&k.q_big(), d as u32))
}

// --- enumeration and factorization ---------------------------------------

/// Iterator over all monic polynomials of the given degree, in canonical
/// order (coefficient tuple lexicographic, constant term most significant).
/// There are `q^degree` of them; degree 0 yields just `1`.
pub fn monic_polys(k: &FieldSpec, degree: usize) -> MonicIter {
    MonicIter {
        k: k.clone(),
        elems: k.elements(),
        state: Some(vec![0usize; degree]),
        degree,
    }
}

pub struct MonicIter {
    k: FieldSpec,
    elems: Vec<FqElem>,
    /// Indices into `elems` for the non-leading coefficients, constant
    /// term first; `None` once exhausted.
    state: Option<Vec<usize>>,
    degree: usize,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let state = self.state.as_mut()?;
        let mut coeffs: Vec<FqElem> = state.iter().map(|&i| self.elems[i].clone()).collect();
        coeffs.push(self.k.one());
        let out = Poly::from_coeffs(coeffs);
        // Odometer with the constant term most significant: bump the
        // highest non-leading index first so output stays Ord-sorted.
        let mut i = self.degree;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            state[i] += 1;
            if state[i] < self.elems.len() {
                break;
            }
            state[i] = 0;
        }
        Some(out)
    }
}

/// Trial-division irreducibility: true iff `f` is nonconstant and
/// `monic(f)` has no monic factor of degree in `[1, deg f / 2]`.
///
/// Units are *not* irreducible (so nonzero constants return false), and
/// neither is zero.
pub fn is_irreducible(k: &FieldSpec, f: &Poly) -> bool {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let target = monic(k, f).expect("nonzero by the degree check");
    for gd in 1..=(d / 2) {
        for g in monic_polys(k, gd) {
            if divides(k, &g, &target).expect("monic divisor is nonzero") {
                return false;
            }
        }
    }
    true
}

/// All monic irreducibles of degree `1 ..= max_degree`, canonical order.
pub fn enumerate_monic_irreducibles(k: &FieldSpec, max_degree: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    for d in 1..=max_degree {
        for g in monic_polys(k, d) {
            if is_irreducible(k, &g) {
                out.push(g);
            }
        }
    }
    out
}

/// A factorization `f = unit · ∏ pᵢ^{eᵢ}` with monic irreducible `pᵢ` in
/// canonical order and `eᵢ ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FqElem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Multiply the factorization back out (used by tests and consistency
    /// checks).
    pub fn product(&self, k: &FieldSpec) -> Poly {
        let mut acc = Poly::constant(self.unit.clone());
        for (p, e) in &self.factors {
            acc = mul(k, &acc, &pow(k, p, *e));
        }
        acc
    }
}

/// Factor a nonzero polynomial by trial division in canonical order.
///
/// Candidates of degree `d` are tested only after all primes of degree
/// `< d` have been divided out to full multiplicity, so any candidate that
/// divides the cofactor is automatically irreducible, and the factor list
/// comes out sorted.
pub fn factor(k: &FieldSpec, f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::domain("cannot factor the zero polynomial"));
    }
    let unit = f.lead()?;
    let mut rest = monic(k, f)?;
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 1 {
        let rd = rest.degree().expect("nonconstant");
        if 2 * d > rd {
            // No factor of degree ≤ rd/2 remains: the cofactor is prime.
            factors.push((rest, 1));
            break;
        }
        for g in monic_polys(k, d) {
            if !divides(k, &g, &rest)? {
                continue;
            }
            let mut e = 0u32;
            while divides(k, &g, &rest)? {
                rest = div_exact(k, &rest, &g)?;
                e += 1;
            }
            factors.push((g.clone(), e));
            if rest.degree().unwrap_or(0) < d {
                break;
            }
        }
        d += 1;
    }
    debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
    Ok(Factorization { unit, factors })
}

// --- text format ----------------------------------------------------------

/// Render a field element in the `u`-generator format: decimal residue for
/// prime fields, a polynomial in `u` (highest power first) otherwise.
pub fn display_elem(k: &FieldSpec, a: &FqElem) -> String {
    if k.extension_degree() == 1 {
        return alloc::format!("{}", a.coords()[0]);
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in a.coords().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (c, i) {
            (_, 0) => alloc::format!("{c}"),
            (1, 1) => String::from("u"),
            (1, _) => alloc::format!("u^{i}"),
            (_, 1) => alloc::format!("{c}*u"),
            (_, _) => alloc::format!("{c}*u^{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        String::from("0")
    } else {
        parts.join("+")
    }
}

/// Render a polynomial in the text format (see module docs): terms highest
/// degree first, unit coefficients dropped, multi-term `F_{p^e}`
/// coefficients parenthesized.
pub fn display(k: &FieldSpec, f: &Poly) -> String {
    if f.is_zero() {
        return String::from("0");
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = display_elem(k, c);
        let coef = if cs.contains('+') {
            alloc::format!("({cs})")
        } else {
            cs
        };
        let part = match i {
            0 => coef,
            _ => {
                let tpart = if i == 1 {
                    String::from("T")
                } else {
                    alloc::format!("T^{i}")
                };
                if is_one_elem(c) {
                    tpart
                } else {
                    alloc::format!("{coef}*{tpart}")
                }
            }
        };
        parts.push(part);
    }
    parts.join("+")
}

/// Render a factorization as `unit·(p1)^e1·(p2)^e2·…`, omitting a unit of
/// `1` and exponents of `1`, e.g. `(T)·(T+1)` or `2·(T^2+1)`.
pub fn display_factorization(k: &FieldSpec, fac: &Factorization) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !is_one_elem(&fac.unit) || fac.factors.is_empty() {
        let us = display_elem(k, &fac.unit);
        parts.push(if us.contains('+') {
            alloc::format!("({us})")
        } else {
            us
        });
    }
    for (p, e) in &fac.factors {
        let ps = display(k, p);
        parts.push(if *e == 1 {
            alloc::format!("({ps})")
        } else {
            alloc::format!("({ps})^{e}")
        });
    }
    parts.join("·")
}

/// Maximum exponent the parser accepts, to keep hostile inputs from
/// allocating absurd coefficient vectors.
const MAX_EXPONENT: usize = 65_535;

/// Parse the text format.  Accepts everything [`display`] produces plus
/// unreduced scalars, `-` separators, and redundant whitespace.
pub fn parse(k: &FieldSpec, input: &str) -> Result<Poly> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse("empty polynomial"));
    }
    let mut acc = Poly::zero();
    for (term, negate) in split_terms(&s)? {
        let t = parse_term(k, term)?;
        let t = if negate { neg(k, &t) } else { t };
        acc = add(k, &acc, &t);
    }
    Ok(acc)
}

/// Split on top-level `+`/`-` (depth 0 w.r.t. parentheses), returning each
/// term with its sign.
fn split_terms(s: &str) -> Result<Vec<(&str, bool)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut negate = false;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::parse("unbalanced ')'"))?;
            }
            b'+' | b'-' if depth == 0 => {
                if i == start {
                    // Leading sign (only '-' is meaningful, '+' is noise).
                    if i != 0 {
                        return Err(Error::parse("empty term"));
                    }
                } else {
                    out.push((&s[start..i], negate));
                }
                negate = b == b'-';
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::parse("unbalanced '('"));
    }
    if start >= s.len() {
        return Err(Error::parse("trailing operator"));
    }
    out.push((&s[start..], negate));
    Ok(out)
}

/// One term: `*`-separated factors, at most one scalar, one `u`-part, one
/// `T`-part.  A single factor may also juxtapose those pieces without `*`
/// (`2T^2`, `uT`, `(u+1)T^3`) — the conventional compact notation.
fn parse_term(k: &FieldSpec, term: &str) -> Result<Poly> {
    let mut coef = k.one();
    let mut seen_scalar = false;
    let mut seen_u = false;
    let mut tdeg: Option<usize> = None;
    for factor in split_factors(term)? {
        if factor.is_empty() {
            return Err(Error::parse("empty factor"));
        }
        let mut rest = factor;
        // Optional parenthesized coefficient, e.g. `(u+1)` or `(u+1)T^2`.
        if let Some(body) = rest.strip_prefix('(') {
            let close = matching_paren(body)
                .ok_or_else(|| Error::parse("unbalanced '('"))?;
            if seen_u {
                return Err(Error::parse("more than one coefficient part in a term"));
            }
            seen_u = true;
            coef = k.mul(&coef, &parse_uexpr(k, &body[..close])?);
            rest = &body[close + 1..];
        }
        // Optional decimal scalar run.
        let digits = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if digits > 0 {
            if seen_scalar {
                return Err(Error::parse("more than one scalar in a term"));
            }
            seen_scalar = true;
            coef = k.mul(&coef, &parse_scalar(k, &rest[..digits])?);
            rest = &rest[digits..];
        }
        // Optional `u` power.
        if rest.starts_with('u') {
            if seen_u {
                return Err(Error::parse("more than one u part in a term"));
            }
            seen_u = true;
            let (upart, after) = split_power(rest);
            coef = k.mul(&coef, &parse_umonomial(k, upart)?);
            rest = after;
        }
        // Optional `T` power.
        if rest.starts_with('T') {
            if tdeg.is_some() {
                return Err(Error::parse("more than one T part in a term"));
            }
            let (tpart, after) = split_power(rest);
            tdeg = Some(parse_power(tpart, "T")?);
            rest = after;
        }
        if !rest.is_empty() {
            return Err(Error::parse(alloc::format!("cannot read factor '{factor}'")));
        }
    }
    Ok(Poly::term(k, coef, tdeg.unwrap_or(0)))
}

/// Index of the `)` matching an already-consumed `(`, scanning `body`.
fn matching_paren(body: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, b) in body.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

/// Split `X`/`X^digits` off the front of `rest`:
/// `"T^12uv"` → (`"T^12"`, `"uv"`), `"T"` → (`"T"`, `""`).
fn split_power(rest: &str) -> (&str, &str) {
    let mut end = 1usize; // the variable letter itself
    let bytes = rest.as_bytes();
    if bytes.len() > 1 && bytes[1] == b'^' {
        let mut j = 2;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > 2 {
            end = j;
        }
    }
    (&rest[..end], &rest[end..])
}

/// Split a term into factors on top-level `*`.
fn split_factors(term: &str) -> Result<Vec<&str>> {
    let bytes = term.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::parse("unbalanced ')'"))?;
            }
            b'*' if depth == 0 => {
                out.push(&term[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    Ok(out)
}

/// `X` or `X^k` for a fixed variable name.
fn parse_power(factor: &str, var: &str) -> Result<usize> {
    let rest = &factor[var.len()..];
    if rest.is_empty() {
        return Ok(1);
    }
    let digits = rest
        .strip_prefix('^')
        .ok_or_else(|| Error::parse(alloc::format!("cannot read factor '{factor}'")))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(alloc::format!("bad exponent in '{factor}'")));
    }
    let k: usize = digits
        .parse()
        .map_err(|_| Error::parse(alloc::format!("bad exponent in '{factor}'")))?;
    if k > MAX_EXPONENT {
        return Err(Error::parse(alloc::format!("exponent {k} too large")));
    }
    Ok(k)
}

/// A decimal scalar, reduced mod `p` (arbitrary length).
fn parse_scalar(k: &FieldSpec, digits: &str) -> Result<FqElem> {
    let n: BigUint = digits
        .parse()
        .map_err(|_| Error::parse(alloc::format!("bad scalar '{digits}'")))?;
    let r = (n % BigUint::from(k.p())).to_u64_digits();
    let mut coords = vec![0u64; k.extension_degree()];
    coords[0] = *r.first().unwrap_or(&0);
    k.elem_from_coords(coords)
}

/// `u` or `u^k`, optionally `c*u^k` comes through `parse_term`'s scalar
/// handling; here only the bare power.
fn parse_umonomial(k: &FieldSpec, factor: &str) -> Result<FqElem> {
    if k.extension_degree() == 1 {
        return Err(Error::parse("'u' is only meaningful for extension fields"));
    }
    let pw = parse_power(factor, "u")?;
    let u = k.generator().expect("extension field");
    Ok(k.pow(&u, pw as u64))
}

/// A parenthesized coefficient: a polynomial in `u`, same term grammar
/// without `T` or nesting.
fn parse_uexpr(k: &FieldSpec, inner: &str) -> Result<FqElem> {
    if k.extension_degree() == 1 {
        return Err(Error::parse("'u' is only meaningful for extension fields"));
    }
    if inner.is_empty() {
        return Err(Error::parse("empty coefficient"));
    }
    let mut acc = k.zero();
    for (term, negate) in split_terms(inner)? {
        let mut val = k.one();
        let mut seen_scalar = false;
        let mut seen_u = false;
        for factor in split_factors(term)? {
            if factor.starts_with('u') {
                if seen_u {
                    return Err(Error::parse("more than one u part in a coefficient term"));
                }
                seen_u = true;
                val = k.mul(&val, &parse_umonomial(k, factor)?);
            } else if !factor.is_empty() && factor.bytes().all(|b| b.is_ascii_digit()) {
                if seen_scalar {
                    return Err(Error::parse("more than one scalar in a coefficient term"));
                }
                seen_scalar = true;
                val = k.mul(&val, &parse_scalar(k, factor)?);
            } else {
                return Err(Error::parse(alloc::format!(
                    "cannot read coefficient factor '{factor}'"
                )));
            }
        }
        if negate {
            val = k.neg(&val);
        }
        acc = k.add(&acc, &val);
    }
    Ok(acc)
}

/// Parse an integer (possibly signed, arbitrary precision) — used by
/// callers reading exponent vectors.
pub fn parse_bigint(s: &str) -> Result<BigInt> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse("empty integer"));
    }
    t.parse::<BigInt>()
        .map_err(|_| Error::parse(alloc::format!("bad integer '{t}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::prime(3).unwrap()
    }

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn p(k: &FieldSpec, s: &str) -> Poly {
        parse(k, s).unwrap()
    }

    #[test]
    fn multiplication_golden() {
        // (T+1)(T+2) = T² + 2 over F_3.
        let k = f3();
        let prod = mul(&k, &p(&k, "T+1"), &p(&k, "T+2"));
        assert_eq!(prod, p(&k, "T^2+2"));
    }

    #[test]
    fn divmod_identity_and_errors() {
        let k = f3();
        let f = p(&k, "T^4+2*T^2+T+1");
        let g = p(&k, "2*T^2+1");
        let (q, r) = divmod(&k, &f, &g).unwrap();
        assert_eq!(add(&k, &mul(&k, &q, &g), &r), f);
        assert!(r.degree().unwrap_or(0) < g.degree().unwrap());
        assert!(divmod(&k, &f, &Poly::zero()).is_err());
    }

    #[test]
    fn xgcd_bezout_identity() {
        let k = f3();
        let f = p(&k, "T");
        let g = p(&k, "T+1");
        let (d, s, t) = xgcd(&k, &f, &g).unwrap();
        assert!(d.is_one());
        let lhs = add(&k, &mul(&k, &s, &f), &mul(&k, &t, &g));
        assert_eq!(lhs, d);
    }

    #[test]
    fn irreducibility_goldens() {
        let k3 = f3();
        assert!(is_irreducible(&k3, &p(&k3, "T^2+1")));
        assert!(is_irreducible(&k3, &p(&k3, "T+2")));
        // Units and zero are not irreducible.
        assert!(!is_irreducible(&k3, &p(&k3, "2")));
        assert!(!is_irreducible(&k3, &Poly::zero()));
        let k2 = f2();
        // T² + 1 = (T+1)² over F_2.
        assert!(!is_irreducible(&k2, &p(&k2, "T^2+1")));
        assert!(is_irreducible(&k2, &p(&k2, "T^3+T+1")));
    }

    #[test]
    fn factor_goldens() {
        let k3 = f3();
        // 2T² + 2 = 2·(T²+1), and T²+1 is prime over F_3.
        let fac = factor(&k3, &p(&k3, "2*T^2+2")).unwrap();
        assert_eq!(fac.unit, k3.from_int(2));
        assert_eq!(fac.factors, alloc::vec![(p(&k3, "T^2+1"), 1)]);
        assert_eq!(fac.product(&k3), p(&k3, "2*T^2+2"));

        let k2 = f2();
        // T⁴ + T² = T²·(T+1)² over F_2.
        let fac = factor(&k2, &p(&k2, "T^4+T^2")).unwrap();
        assert_eq!(
            fac.factors,
            alloc::vec![(p(&k2, "T"), 2), (p(&k2, "T+1"), 2)]
        );
        assert!(factor(&k2, &Poly::zero()).is_err());

        // Factor of a unit: empty factor list.
        let fac = factor(&k3, &p(&k3, "2")).unwrap();
        assert_eq!(fac.unit, k3.from_int(2));
        assert!(fac.factors.is_empty());
    }

    #[test]
    fn enumeration_goldens() {
        let k2 = f2();
        let irr = enumerate_monic_irreducibles(&k2, 2);
        let expect: Vec<Poly> = ["T", "T+1", "T^2+T+1"].iter().map(|s| p(&k2, s)).collect();
        assert_eq!(irr, expect);

        // Necklace count: 3 monic irreducible quadratics over F_3.
        let k3 = f3();
        let quad: Vec<_> = enumerate_monic_irreducibles(&k3, 2)
            .into_iter()
            .filter(|f| f.degree() == Some(2))
            .collect();
        assert_eq!(quad.len(), 3);
    }

    #[test]
    fn canonical_order_examples() {
        let k2 = f2();
        assert!(p(&k2, "T") < p(&k2, "T+1"));
        let k3 = f3();
        assert!(p(&k3, "T") < p(&k3, "T^2+1"));
        assert!(p(&k3, "T+1") < p(&k3, "T+2"));
    }

    #[test]
    fn norm_examples() {
        let k3 = f3();
        assert_eq!(norm(&k3, &p(&k3, "T^2+1")).unwrap(), BigInt::from(9));
        assert_eq!(norm(&k3, &p(&k3, "2")).unwrap(), BigInt::from(1));
        assert!(norm(&k3, &Poly::zero()).is_err());
    }

    #[test]
    fn valuation_examples() {
        let k2 = f2();
        let f = p(&k2, "T^4+T^2");
        assert_eq!(valuation(&k2, &f, &p(&k2, "T")).unwrap(), 2);
        assert_eq!(valuation(&k2, &f, &p(&k2, "T+1")).unwrap(), 2);
        assert_eq!(valuation(&k2, &f, &p(&k2, "T^2+T+1")).unwrap(), 0);
    }

    #[test]
    fn text_round_trip_prime_field() {
        let k = f3();
        for s in ["0", "1", "2", "T", "T^2+1", "2*T+1", "T^2+2*T+1", "T^3+2*T^2+T"] {
            let f = p(&k, s);
            assert_eq!(display(&k, &f), *s, "display must be canonical");
            assert_eq!(parse(&k, &display(&k, &f)).unwrap(), f);
        }
        // Non-canonical inputs normalize.
        assert_eq!(p(&k, " T^2 + 4*T + 1 "), p(&k, "T^2+T+1"));
        assert_eq!(p(&k, "T^2-1"), p(&k, "T^2+2"));
        assert_eq!(p(&k, "5"), p(&k, "2"));
    }

    #[test]
    fn juxtaposed_terms_parse() {
        let k = f3();
        assert_eq!(p(&k, "T^3+2T^2+T"), p(&k, "T^3+2*T^2+T"));
        assert_eq!(p(&k, "2T"), p(&k, "2*T"));
        let k4 = FieldSpec::from_q(4).unwrap();
        assert_eq!(p(&k4, "uT^2"), p(&k4, "u*T^2"));
        assert_eq!(p(&k4, "(u+1)T+u"), p(&k4, "(u+1)*T+u"));
        assert!(parse(&k4, "T^2u").is_err(), "T before u is not a term");
    }

    #[test]
    fn text_round_trip_extension_field() {
        let k = FieldSpec::from_q(4).unwrap();
        for s in ["u", "u^2", "(u+1)*T^2+u*T+1", "u*T", "T^2+(u+1)", "(u+1)"] {
            let f = p(&k, s);
            assert_eq!(parse(&k, &display(&k, &f)).unwrap(), f, "round trip for '{s}'");
        }
        // u² = u + 1 in the table field F_4.
        assert_eq!(p(&k, "u^2"), p(&k, "u+1"));
        // 'u' is rejected over prime fields.
        assert!(parse(&f3(), "u*T").is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        let k = f3();
        for s in ["", "+", "T^", "T**2", "2*2", "T*T", "(T+1", "x", "T^999999"] {
            assert!(parse(&k, s).is_err(), "'{s}' must not parse");
        }
    }

    #[test]
    fn factorization_display_golden() {
        let k2 = f2();
        let fac = factor(&k2, &p(&k2, "T^2+T")).unwrap();
        assert_eq!(display_factorization(&k2, &fac), "(T)·(T+1)");
        let k3 = f3();
        let fac = factor(&k3, &p(&k3, "2*T^2+2")).unwrap();
        assert_eq!(display_factorization(&k3, &fac), "2·(T^2+1)");
        let fac = factor(&k3, &p(&k3, "T^2")).unwrap();
        assert_eq!(display_factorization(&k3, &fac), "(T)^2");
    }

    #[test]
    fn display_uses_middle_dot_only_for_factorizations() {
        // Poly display never emits '·'; factorization display joins with it.
        let k = f3();
        let f = p(&k, "T^3+2*T^2+T");
        assert!(!display(&k, &f).contains('·'));
        let s = display_factorization(&k, &factor(&k, &f).unwrap());
        assert_eq!(s, "(T)·(T+1)^2");
    }
}
