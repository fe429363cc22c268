//! Dense square matrices over the exact rationals.
//!
//! This is deliberately plain plumbing: row-major `Vec` storage, `O(n³)`
//! products, and a fraction-free (Bareiss) inverse.  The inverse is the
//! *generic* route against which the closed-form inverses in
//! [`crate::orders`] are validated, so it must not share any structure
//! with them: denominators are cleared row by row, the integer matrix is
//! triangularized with Bareiss's exact-division pivoting (every interior
//! division is checked to be exact), and the augmented columns are then
//! back-substituted over rationals.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value
//! reduced with a positive denominator — exactness is structural, there
//! is no epsilon anywhere in this crate.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Exact rational scalar: reduced `BigInt` fraction with positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat_int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// A square matrix of [`Rational`]s, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    size: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(size: usize) -> Self {
        ExactMatrix {
            size,
            data: vec![Rational::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        ExactMatrix { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Rational) {
        self.data[row * self.size + col] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.size, |i, j| self.get(i, j) * c)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::domain("matrix size mismatch in product"));
        }
        let n = self.size;
        Ok(Self::from_fn(n, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..n {
                acc += self.get(i, k) * other.get(k, j);
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.size {
            return Err(Error::domain("vector length mismatch in matrix·vector"));
        }
        let n = self.size;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Rational::zero();
            for j in 0..n {
                acc += self.get(i, j) * &v[j];
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Kronecker product: `(A ⊗ B)[i·m + k, j·m + l] = A[i,j]·B[k,l]`
    /// with `m = B.size()` — the left factor's index varies slowest,
    /// matching the divisor-lattice enumeration.
    pub fn kron(&self, other: &Self) -> Self {
        let n = self.size;
        let m = other.size;
        Self::from_fn(n * m, |i, j| {
            self.get(i / m, j / m) * other.get(i % m, j % m)
        })
    }

    pub fn is_identity(&self) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| {
                if i == j {
                    self.get(i, j).is_one()
                } else {
                    self.get(i, j).is_zero()
                }
            })
        })
    }

    /// Exact inverse by fraction-free Gaussian elimination.
    ///
    /// Denominators are cleared row by row, the integer part is brought to
    /// upper-triangular form with the Bareiss one-step update
    /// `a[i][j] ← (a[k][k]·a[i][j] − a[i][k]·a[k][j]) / prev_pivot`
    /// (divisions exact by Sylvester's identity — verified at runtime),
    /// and the augmented identity columns are back-substituted exactly.
    ///
    /// Domain error on singular input.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.size;
        if n == 0 {
            return Ok(self.clone());
        }
        // Row scales: M = diag(s)·A is integral, A⁻¹ = M⁻¹·diag(s).
        let mut scales: Vec<BigInt> = Vec::with_capacity(n);
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = BigInt::one();
            for j in 0..n {
                s = s.lcm(self.get(i, j).denom());
            }
            let mut row: Vec<BigInt> = Vec::with_capacity(2 * n);
            for j in 0..n {
                let v = self.get(i, j);
                row.push(v.numer() * (&s / v.denom()));
            }
            for j in 0..n {
                row.push(if i == j { s.clone() } else { BigInt::zero() });
            }
            scales.push(s);
            m.push(row);
        }
        // Note the augmented part starts as diag(s), which *is* M·A⁻¹·…
        // bookkeeping folded in: solving M·X = diag(s) yields X = A⁻¹
        // directly.
        let mut prev = BigInt::one();
        for k in 0..n {
            // Pivot search.
            let pivot_row = (k..n)
                .find(|&r| !m[r][k].is_zero())
                .ok_or_else(|| Error::domain("matrix is singular"))?;
            m.swap(k, pivot_row);
            for i in (k + 1)..n {
                for j in (k + 1)..(2 * n) {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    let (quot, rem) = num.div_rem(&prev);
                    if !rem.is_zero() {
                        return Err(Error::inconsistency(
                            "Bareiss interior division was not exact",
                        ));
                    }
                    m[i][j] = quot;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        // Back substitution over rationals, one augmented column at a time.
        let mut inv = Self::zeros(n);
        for col in 0..n {
            let mut x = vec![Rational::zero(); n];
            for i in (0..n).rev() {
                let mut acc = Rational::from_integer(m[i][n + col].clone());
                for j in (i + 1)..n {
                    acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
                }
                x[i] = acc / Rational::from_integer(m[i][i].clone());
            }
            for i in 0..n {
                inv.set(i, col, x[i].clone());
            }
        }
        // The diag(s) fold-in above already accounts for the row scaling;
        // verify on the spot — an inverse that fails A·A⁻¹ = I is a bug.
        if !self.mul(&inv)?.is_identity() {
            return Err(Error::inconsistency("computed inverse failed A·A⁻¹ = I"));
        }
        Ok(inv)
    }

    /// Content (gcd) of an integer vector; zero for the zero vector.
    pub fn int_content(v: &[BigInt]) -> BigInt {
        v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        let n = rows.len();
        ExactMatrix::from_fn(n, |i, j| rat_int(rows[i][j]))
    }

    #[test]
    fn golden_2x2_inverse() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        // [[−2, 1], [3/2, −1/2]]
        assert_eq!(inv.get(0, 0), &rat_int(-2));
        assert_eq!(inv.get(0, 1), &rat_int(1));
        assert_eq!(inv.get(1, 0), &Rational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(inv.get(1, 1), &Rational::new(BigInt::from(-1), BigInt::from(2)));
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn pivot_swap_path() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert_eq!(inv, a, "a permutation is its own inverse here");
    }

    #[test]
    fn singular_is_domain_error() {
        let a = m(&[&[1, 2], &[2, 4]]);
        match a.inverse() {
            Err(Error::Domain(_)) => {}
            other => panic!("expected a domain error, got {other:?}"),
        }
    }

    #[test]
    fn rational_entries_invert() {
        let a = ExactMatrix::from_fn(3, |i, j| {
            Rational::new(BigInt::from(1 + i as i64), BigInt::from(1 + j as i64 + i as i64))
        });
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&a).unwrap().is_identity());
    }

    #[test]
    fn deterministic_pseudorandom_inverses() {
        // A little LCG drives entries; every matrix here is checked both
        // ways.  Singular draws are skipped.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 19) as i64 - 9
        };
        let mut inverted = 0;
        for n in 1..=5usize {
            for _ in 0..4 {
                let a = ExactMatrix::from_fn(n, |_, _| rat_int(next()));
                match a.inverse() {
                    Ok(inv) => {
                        assert!(a.mul(&inv).unwrap().is_identity());
                        assert!(inv.mul(&a).unwrap().is_identity());
                        inverted += 1;
                    }
                    Err(Error::Domain(_)) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
        assert!(inverted >= 10, "most random draws are invertible");
    }

    #[test]
    fn kron_golden_and_mixed_product() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        let expect = m(&[
            &[0, 1, 0, 2],
            &[1, 0, 2, 0],
            &[0, 3, 0, 4],
            &[3, 0, 4, 0],
        ]);
        assert_eq!(k, expect);
        // (A⊗B)(C⊗D) = (AC)⊗(BD).
        let c = m(&[&[2, 0], &[1, 1]]);
        let d = m(&[&[1, 1], &[0, 2]]);
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_inverse_is_inverse_of_kron() {
        let a = m(&[&[3, 1], &[1, 3]]);
        let b = m(&[&[2, 1], &[1, 1]]);
        let lhs = a.kron(&b).inverse().unwrap();
        let rhs = a.inverse().unwrap().kron(&b.inverse().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mul_vec_and_content() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let v = vec![rat_int(1), rat_int(-1)];
        let out = a.mul_vec(&v).unwrap();
        assert_eq!(out, vec![rat_int(-1), rat_int(-1)]);
        let content = ExactMatrix::int_content(&[BigInt::from(-6), BigInt::from(9), BigInt::from(0)]);
        assert_eq!(content, BigInt::from(3));
        assert_eq!(ExactMatrix::int_content(&[]), BigInt::from(0));
    }
}
