//! The coefficient field `F_q`, `q = p^e`.
//!
//! Elements are stored in the power basis `1, u, …, u^{e−1}` of
//! `F_p[u]/(modulus)` as a vector of `e` residues mod `p`; for prime `q`
//! that degenerates to a single residue.  A [`FieldSpec`] carries `p`, `e`
//! and (for `e > 1`) the monic irreducible modulus, and owns all element
//! arithmetic, so every operation states explicitly which field it happens
//! in — there is no global field state.
//!
//! For the prime powers that actually occur at desk scale the modulus can
//! be left implicit; [`FieldSpec::prime_power`] uses this built-in table:
//!
//! ```text
//! q = 4  : u² + u + 1          q = 16 : u⁴ + u + 1
//! q = 8  : u³ + u + 1          q = 25 : u² + 2
//! q = 9  : u² + 1              q = 27 : u³ + 2u + 1
//! ```
//!
//! Any other prime power needs an explicit modulus via
//! [`FieldSpec::with_modulus`] (the CLI exposes this as `--modulus`).
//!
//! Elements carry a total order — lexicographic on the coordinate vector,
//! constant coordinate most significant.  The order has no algebraic
//! meaning; it exists so that enumeration and the canonical prime order of
//! the divisor lattice are deterministic.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::Error;
use crate::Result;

/// Description of `F_q` together with its arithmetic.
///
/// Immutable after construction.  `q = p^e` must fit in a `u64`; all values
/// derived from `q` downstream (norms, matrix entries, exponent sums) are
/// arbitrary-precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    e: usize,
    q: u64,
    /// Monic irreducible modulus of degree `e` over `F_p`, lowest degree
    /// first, length `e + 1`; `None` exactly when `e == 1`.
    modulus: Option<Vec<u64>>,
}

/// An element of `F_q` in the power basis of its [`FieldSpec`].
///
/// The coordinate vector always has length `e` with entries in `[0, p)`.
/// Elements are plain data; all arithmetic lives on the spec.  The derived
/// order (coordinate-lexicographic, constant coordinate first) is the
/// deterministic enumeration order, nothing more.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem {
    coords: Vec<u64>,
}

impl FqElem {
    /// The raw power-basis coordinates (constant coordinate first).
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// True iff this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::domain(alloc::format!("{p} is not prime")));
        }
        Ok(FieldSpec { p, e: 1, q: p, modulus: None })
    }

    /// `F_{p^e}` with the built-in modulus table (see module docs).
    ///
    /// Errors if `p` is not prime, `p^e` overflows `u64`, or `e > 1` and
    /// `p^e` is not in the table — supply a modulus explicitly then.
    pub fn prime_power(p: u64, e: usize) -> Result<Self> {
        if e == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        if e == 1 {
            return Self::prime(p);
        }
        let q = checked_pow(p, e)?;
        let table: &[(u64, &[u64])] = &[
            (4, &[1, 1, 1]),
            (8, &[1, 1, 0, 1]),
            (9, &[1, 0, 1]),
            (16, &[1, 1, 0, 0, 1]),
            (25, &[2, 0, 1]),
            (27, &[1, 2, 0, 1]),
        ];
        match table.iter().find(|(tq, _)| *tq == q) {
            Some((_, m)) => Self::with_modulus(p, m.to_vec()),
            None => Err(Error::domain(alloc::format!(
                "no built-in modulus for q = {q}; supply a monic irreducible of degree {e} over F_{p}"
            ))),
        }
    }

    /// `F_{p^e}` with an explicit monic irreducible modulus over `F_p`
    /// (coefficients lowest degree first, length `e + 1 ≥ 3`).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::domain(alloc::format!("{p} is not prime")));
        }
        if modulus.len() < 3 {
            return Err(Error::domain(
                "modulus must have degree at least 2 (use FieldSpec::prime for e = 1)",
            ));
        }
        let e = modulus.len() - 1;
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        if modulus[e] != 1 {
            return Err(Error::domain("modulus must be monic"));
        }
        if !fp_is_irreducible(p, &modulus) {
            return Err(Error::domain("modulus is reducible over F_p"));
        }
        let q = checked_pow(p, e)?;
        Ok(FieldSpec { p, e, q, modulus: Some(modulus) })
    }

    /// Build the field from its order: factors `q = p^e` and dispatches to
    /// [`FieldSpec::prime_power`].
    pub fn from_q(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain("field order must be at least 2"));
        }
        let p = smallest_prime_factor(q);
        let mut e = 0usize;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::domain(alloc::format!("{q} is not a prime power")));
        }
        Self::prime_power(p, e)
    }

    /// The characteristic `p`.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The extension degree `e` (so `q = p^e`).
    pub fn extension_degree(&self) -> usize {
        self.e
    }

    /// The field order `q`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q` as a `BigInt`, the form every downstream formula consumes.
    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }

    /// The modulus coefficients (lowest first), or `None` for prime `q`.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    /// The zero element.
    pub fn zero(&self) -> FqElem {
        FqElem { coords: vec![0; self.e] }
    }

    /// The unit element.
    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// The power-basis generator `u` (only meaningful for `e > 1`; for
    /// prime fields this is just `0`, which callers never ask for).
    pub fn generator(&self) -> Result<FqElem> {
        if self.e == 1 {
            return Err(Error::domain("prime field has no extension generator u"));
        }
        let mut coords = vec![0; self.e];
        coords[1] = 1;
        Ok(FqElem { coords })
    }

    /// The image of the integer `c` (reduced mod `p`) in `F_q`.
    pub fn from_int(&self, c: i64) -> FqElem {
        let p = self.p as i64;
        let r = ((c % p) + p) % p;
        let mut coords = vec![0; self.e];
        coords[0] = r as u64;
        FqElem { coords }
    }

    /// An element from raw power-basis coordinates (reduced mod `p`).
    pub fn elem_from_coords(&self, coords: Vec<u64>) -> Result<FqElem> {
        if coords.len() != self.e {
            return Err(Error::domain(alloc::format!(
                "expected {} coordinates, got {}",
                self.e,
                coords.len()
            )));
        }
        Ok(FqElem { coords: coords.iter().map(|&c| c % self.p).collect() })
    }

    fn check(&self, a: &FqElem) {
        assert!(
            a.coords.len() == self.e,
            "element has {} coordinates but the field has extension degree {}",
            a.coords.len(),
            self.e
        );
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.check(a);
        self.check(b);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FqElem { coords }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        self.check(a);
        let coords = a.coords.iter().map(|&x| (self.p - x) % self.p).collect();
        FqElem { coords }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.check(a);
        self.check(b);
        if self.e == 1 {
            return FqElem { coords: vec![mul_mod(a.coords[0], b.coords[0], self.p)] };
        }
        // Schoolbook product in F_p[u], then reduction by the monic modulus.
        let mut prod = vec![0u64; 2 * self.e - 1];
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        let m = self.modulus.as_ref().expect("extension field has a modulus");
        let rem = fp_rem(self.p, &prod, m);
        let mut coords = vec![0u64; self.e];
        coords[..rem.len()].copy_from_slice(&rem);
        FqElem { coords }
    }

    /// Multiplicative inverse.  Errors on zero.
    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::domain("inverse of zero in F_q"));
        }
        if self.e == 1 {
            // Fermat: a^{p-2}.
            let mut r = 1u64;
            let mut base = a.coords[0];
            let mut k = self.p - 2;
            while k > 0 {
                if k & 1 == 1 {
                    r = mul_mod(r, base, self.p);
                }
                base = mul_mod(base, base, self.p);
                k >>= 1;
            }
            return Ok(FqElem { coords: vec![r] });
        }
        let m = self.modulus.as_ref().expect("extension field has a modulus");
        let inv = fp_inverse_mod(self.p, &a.coords, m).ok_or_else(|| {
            Error::inconsistency("nonzero element not invertible mod an irreducible modulus")
        })?;
        let mut coords = vec![0u64; self.e];
        coords[..inv.len()].copy_from_slice(&inv);
        Ok(FqElem { coords })
    }

    /// `a^k` by repeated squaring (`a^0 = 1`, including for `a = 0`).
    pub fn pow(&self, a: &FqElem, mut k: u64) -> FqElem {
        self.check(a);
        let mut acc = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// All `q` elements in the deterministic enumeration order (sorted by
    /// the derived `Ord` on [`FqElem`]).
    pub fn elements(&self) -> Vec<FqElem> {
        let mut out = Vec::with_capacity(self.q as usize);
        let mut coords = vec![0u64; self.e];
        loop {
            out.push(FqElem { coords: coords.clone() });
            // Odometer with the constant coordinate most significant: bump
            // the last coordinate first so the output stays Ord-sorted.
            let mut i = self.e;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < self.p {
                    break;
                }
                coords[i] = 0;
            }
        }
    }

    /// The `q − 1` nonzero elements, enumeration order.
    pub fn units(&self) -> Vec<FqElem> {
        self.elements().into_iter().filter(|a| !a.is_zero()).collect()
    }
}

/// `p^e` with an overflow check — fields larger than `u64` are far beyond
/// desk scale and get a loud error instead of silent wraparound.
fn checked_pow(p: u64, e: usize) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..e {
        q = q
            .checked_mul(p)
            .ok_or_else(|| Error::domain(alloc::format!("field order {p}^{e} overflows u64")))?;
    }
    Ok(q)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while let Some(sq) = d.checked_mul(d) {
        if sq > p {
            return true;
        }
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

// --- tiny F_p[x] toolkit for the modulus layer --------------------------
//
// These helpers act on plain residue vectors (lowest degree first, not
// necessarily trimmed) and exist only to reduce products and invert
// elements inside F_p[u]/(modulus).  Full polynomial arithmetic over F_q
// lives in `poly`, built on top of this module.

fn fp_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` by the monic `m` over `F_p`.
fn fp_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let md = fp_deg(m).expect("modulus is nonzero");
    let mut r = fp_trim(a.to_vec());
    while let Some(rd) = fp_deg(&r) {
        if rd < md {
            break;
        }
        let lead = r[rd];
        let shift = rd - md;
        for (i, &mc) in m.iter().enumerate().take(md + 1) {
            let sub = mul_mod(lead, mc, p);
            r[i + shift] = (r[i + shift] + p - sub % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

/// Quotient and remainder by a (not necessarily monic) nonzero divisor.
fn fp_divmod(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let bd = fp_deg(b).expect("division by zero polynomial");
    let lead_inv = {
        // Fermat inverse of the leading coefficient.
        let mut r = 1u64;
        let mut base = b[bd];
        let mut k = p - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = mul_mod(r, base, p);
            }
            base = mul_mod(base, base, p);
            k >>= 1;
        }
        r
    };
    let mut r = fp_trim(a.to_vec());
    let mut q = vec![0u64; r.len().saturating_sub(bd) + 1];
    while let Some(rd) = fp_deg(&r) {
        if rd < bd {
            break;
        }
        let c = mul_mod(r[rd], lead_inv, p);
        let shift = rd - bd;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate().take(bd + 1) {
            let sub = mul_mod(c, bc, p);
            r[i + shift] = (r[i + shift] + p - sub % p) % p;
        }
        r = fp_trim(r);
    }
    (fp_trim(q), r)
}

fn fp_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if fp_deg(a).is_none() || fp_deg(b).is_none() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_trim(out)
}

/// Inverse of `a` modulo the monic irreducible `m`, by extended Euclid.
/// Returns `None` only if `gcd(a, m) ≠ 1`, which cannot happen for
/// nonzero `a` of degree `< deg m` when `m` is irreducible.
fn fp_inverse_mod(p: u64, a: &[u64], m: &[u64]) -> Option<Vec<u64>> {
    // Invariants: r0 = s0·a (mod m), r1 = s1·a (mod m).
    let mut r0 = fp_trim(m.to_vec());
    let mut r1 = fp_trim(a.to_vec());
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while fp_deg(&r1).is_some() {
        let (q, r) = fp_divmod(p, &r0, &r1);
        let qs = fp_mul(p, &q, &s1);
        let mut s = s0.clone();
        s.resize(s.len().max(qs.len()), 0);
        for (i, &c) in qs.iter().enumerate() {
            s[i] = (s[i] + p - c) % p;
        }
        s0 = s1;
        s1 = fp_trim(s);
        r0 = core::mem::replace(&mut r1, r);
    }
    let d = fp_deg(&r0)?;
    if d != 0 {
        return None;
    }
    // Scale so the Bézout identity reads 1 = s0·a (mod m).
    let mut cinv = 1u64;
    {
        let mut base = r0[0];
        let mut k = p - 2;
        while k > 0 {
            if k & 1 == 1 {
                cinv = mul_mod(cinv, base, p);
            }
            base = mul_mod(base, base, p);
            k >>= 1;
        }
    }
    let scaled: Vec<u64> = s0.iter().map(|&c| mul_mod(c, cinv, p)).collect();
    Some(fp_rem(p, &scaled, m))
}

/// Trial-division irreducibility over `F_p` for the modulus gate: `f` is
/// irreducible iff no monic polynomial of degree in `[1, deg f / 2]`
/// divides it.
fn fp_is_irreducible(p: u64, f: &[u64]) -> bool {
    let d = match fp_deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    for gd in 1..=(d / 2) {
        // All monic polynomials of degree gd, odometer over lower coeffs.
        let mut g = vec![0u64; gd + 1];
        g[gd] = 1;
        loop {
            let (_, r) = fp_divmod(p, f, &g);
            if fp_deg(&r).is_none() {
                return false;
            }
            let mut i = 0;
            loop {
                if i == gd {
                    // Odometer rolled over: next degree.
                    break;
                }
                g[i] += 1;
                if g[i] < p {
                    break;
                }
                g[i] = 0;
                i += 1;
            }
            if i == gd {
                break;
            }
        }
    }
    true
}

impl core::fmt::Display for FqElem {
    /// Bare display used in debugging: the coordinate vector.  The text
    /// format with the `u` generator lives in [`crate::poly`], where the
    /// field is available.
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let parts: Vec<_> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let k = FieldSpec::prime(3).unwrap();
        let two = k.from_int(2);
        assert_eq!(k.add(&two, &two), k.from_int(1));
        assert_eq!(k.mul(&two, &two), k.from_int(1));
        assert_eq!(k.inv(&two).unwrap(), two);
        assert_eq!(k.neg(&k.one()), two);
        assert_eq!(k.from_int(-1), two);
        assert!(k.inv(&k.zero()).is_err());
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(FieldSpec::prime(6).is_err());
        assert!(FieldSpec::from_q(12).is_err());
        assert!(FieldSpec::from_q(1).is_err());
        // Reducible modulus: u^2 - 1 = (u-1)(u+1) over F_3.
        assert!(FieldSpec::with_modulus(3, alloc::vec![2, 0, 1]).is_err());
    }

    #[test]
    fn builtin_extension_fields_are_fields() {
        for q in [4u64, 8, 9, 16, 25, 27] {
            let k = FieldSpec::from_q(q).unwrap();
            assert_eq!(k.q(), q);
            let elems = k.elements();
            assert_eq!(elems.len(), q as usize);
            // Every nonzero element is invertible and the inverse checks out.
            for a in &elems {
                if a.is_zero() {
                    continue;
                }
                let inv = k.inv(a).unwrap();
                assert_eq!(k.mul(a, &inv), k.one(), "a·a⁻¹ ≠ 1 in F_{q}");
            }
            // x^{q-1} = 1 for units (so the multiplicative group has
            // exponent dividing q − 1).
            for a in k.units() {
                assert_eq!(k.pow(&a, q - 1), k.one());
            }
        }
    }

    #[test]
    fn f4_table_modulus() {
        // In F_4 = F_2[u]/(u²+u+1): u² = u + 1.
        let k = FieldSpec::prime_power(2, 2).unwrap();
        let u = k.generator().unwrap();
        let u2 = k.mul(&u, &u);
        assert_eq!(u2, k.add(&u, &k.one()));
        // u³ = 1.
        assert_eq!(k.pow(&u, 3), k.one());
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        for q in [2u64, 3, 4, 5, 9] {
            let k = FieldSpec::from_q(q).unwrap();
            let elems = k.elements();
            assert_eq!(elems.len(), q as usize);
            for w in elems.windows(2) {
                assert!(w[0] < w[1], "enumeration must be strictly Ord-sorted");
            }
            assert_eq!(k.units().len(), (q - 1) as usize);
        }
    }

    #[test]
    fn distributivity_spot_checks() {
        // (a+b)·c = a·c + b·c over every built-in field, all triples for
        // the small ones.
        for q in [4u64, 9] {
            let k = FieldSpec::from_q(q).unwrap();
            let elems = k.elements();
            for a in &elems {
                for b in &elems {
                    for c in &elems {
                        let lhs = k.mul(&k.add(a, b), c);
                        let rhs = k.add(&k.mul(a, c), &k.mul(b, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
