//! Exact rational scalars, dense rational matrices and division-free
//! characteristic polynomials. Everything here is exact; no floating point
//! is used anywhere in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: left matrix is {left_rows}x{left_cols}, right matrix is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({row},{col}) = {value} is not an integer")]
    NonIntegerEntry {
        row: usize,
        col: usize,
        value: String,
    },
}

/// Dense matrix over [`Rational`], stored row-major. Matrices are immutable
/// values: every operation returns a fresh result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RationalMatrix { rows, cols, entries }
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        assert!(r > 0, "matrix dimensions must be positive");
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set_entry(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.entry(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self.entry(r, c) != self.entry(c, r) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact matrix product.
    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.entry(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.entry(r, c).clone();
                    out.set_entry(r, c, cur + a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, ExactError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(ExactError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self.entry(r, c) + rhs.entry(r, c)
        }))
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, ExactError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(ExactError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self.entry(r, c) - rhs.entry(r, c)
        }))
    }

    pub fn scale(&self, s: &Rational) -> RationalMatrix {
        Self::from_fn(self.rows, self.cols, |r, c| self.entry(r, c) * s)
    }

    /// True iff the matrix equals its transpose and its own square,
    /// tested entrywise exactly.
    pub fn is_projection(&self) -> Result<bool, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_symmetric() {
            return Ok(false);
        }
        let sq = self.mul(self).expect("square by construction");
        Ok(sq == *self)
    }

    /// Largest denominator over all entries.
    pub fn max_denominator(&self) -> BigInt {
        let mut max = BigInt::one();
        for e in &self.entries {
            if e.denom().abs() > max {
                max = e.denom().abs();
            }
        }
        max
    }

    /// Exact characteristic polynomial `det(xI - A)` of a square matrix with
    /// integer entries, computed by the division-free Berkowitz scheme.
    pub fn char_poly(&self) -> Result<IntPolynomial, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let e = self.entry(r, c);
                if !e.is_integer() {
                    return Err(ExactError::NonIntegerEntry {
                        row: r,
                        col: c,
                        value: e.to_string(),
                    });
                }
                a.push(e.to_integer());
            }
        }
        Ok(berkowitz(n, &a))
    }
}

/// acc += m * v, with shortcuts for the ubiquitous 0 and +-1 entries.
fn mul_acc(acc: &mut BigInt, m: &BigInt, v: &BigInt) {
    if m.is_zero() || v.is_zero() {
        return;
    }
    if m.is_one() {
        *acc += v;
    } else if (-m).is_one() {
        *acc -= v;
    } else {
        *acc += m * v;
    }
}

/// Berkowitz characteristic polynomial of the n x n integer matrix `a`
/// (row-major). Returns the monic polynomial det(xI - a).
fn berkowitz(n: usize, a: &[BigInt]) -> IntPolynomial {
    // Coefficient vector in descending powers; starts with the 1x1 leading
    // principal submatrix and grows one row/column per step.
    let mut coeffs: Vec<BigInt> = vec![BigInt::one(), -a[0].clone()];
    for r in 1..n {
        // t[0] = 1, t[1] = -a[r][r], t[k] = -(R . M^{k-2} . C) for the
        // leading r x r submatrix M, row R = a[r][0..r], column C = a[0..r][r].
        let mut t: Vec<BigInt> = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-a[r * n + r].clone());
        // v starts as C and is repeatedly replaced by M v.
        let mut v: Vec<BigInt> = (0..r).map(|i| a[i * n + r].clone()).collect();
        for _k in 2..=(r + 1) {
            let mut dot = BigInt::zero();
            for j in 0..r {
                mul_acc(&mut dot, &a[r * n + j], &v[j]);
            }
            t.push(-dot);
            if _k <= r {
                let mut next = vec![BigInt::zero(); r];
                for (i, ni) in next.iter_mut().enumerate() {
                    for j in 0..r {
                        mul_acc(ni, &a[i * n + j], &v[j]);
                    }
                }
                v = next;
            }
        }
        // coeffs <- (lower triangular Toeplitz of t) * coeffs, i.e. the
        // leading r+2 coefficients of the convolution t * coeffs.
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, ni) in next.iter_mut().enumerate() {
            for (k, tk) in t.iter().enumerate().take(i + 1) {
                if i - k < coeffs.len() {
                    mul_acc(ni, tk, &coeffs[i - k]);
                }
            }
        }
        coeffs = next;
    }
    // Descending to ascending order.
    coeffs.reverse();
    IntPolynomial::new(coeffs)
}

/// Polynomial with arbitrary-precision integer coefficients, stored in
/// ascending degree order with a nonzero leading coefficient (unless zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficients in ascending degree order.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                mul_acc(&mut out[i + j], a, b);
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `(x + c)^k`, a convenience for building spectra from known eigenvalues.
    pub fn linear_power(c: i64, k: usize) -> IntPolynomial {
        let lin = IntPolynomial::from_i64(&[c, 1]);
        let mut acc = IntPolynomial::from_i64(&[1]);
        for _ in 0..k {
            acc = acc.mul(&lin);
        }
        acc
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let ac = c.abs();
            if i == 0 {
                write!(f, "{ac}")?;
            } else {
                if !ac.is_one() {
                    write!(f, "{ac}*")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{i}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rm(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_int_rows(rows)
    }

    #[test]
    fn identity_times_anything() {
        let p = rm(&[vec![1, 2], vec![3, 4]]);
        let i = RationalMatrix::identity(2);
        assert_eq!(i.mul(&p).unwrap(), p);
        assert_eq!(p.mul(&i).unwrap(), p);
    }

    #[test]
    fn dimension_mismatch_reports_both_shapes() {
        let a = RationalMatrix::zero(2, 3);
        let b = RationalMatrix::zero(2, 3);
        match a.mul(&b) {
            Err(ExactError::DimensionMismatch {
                left_rows: 2,
                left_cols: 3,
                right_rows: 2,
                right_cols: 3,
            }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    /// Rank-1 projection onto an integer vector.
    fn projection(v: &[i64]) -> RationalMatrix {
        let norm: i64 = v.iter().map(|x| x * x).sum();
        RationalMatrix::from_fn(v.len(), v.len(), |r, c| ratio(v[r] * v[c], norm))
    }

    #[test]
    fn orthogonal_projections_multiply_to_zero() {
        let p = projection(&[1, 1, 0, 0, 0, 0, 0, 0]);
        let q = projection(&[1, -1, 0, 0, 0, 0, 0, 0]);
        assert!(p.mul(&q).unwrap().is_zero());
    }

    #[test]
    fn projection_checks() {
        assert!(projection(&[1, 1, 0, 0, 0, 0, 0, 0]).is_projection().unwrap());
        assert!(RationalMatrix::identity(8).is_projection().unwrap());
        let double = RationalMatrix::identity(8).scale(&rat(2));
        assert!(!double.is_projection().unwrap());
        let nonsquare = RationalMatrix::zero(2, 3);
        assert!(matches!(
            nonsquare.is_projection(),
            Err(ExactError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn char_poly_small_cases() {
        // zero 2x2 -> x^2
        let z = RationalMatrix::zero(2, 2);
        assert_eq!(z.char_poly().unwrap(), IntPolynomial::from_i64(&[0, 0, 1]));
        // adjacency of K2 -> x^2 - 1
        let k2 = rm(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(k2.char_poly().unwrap(), IntPolynomial::from_i64(&[-1, 0, 1]));
        // a non-symmetric 3x3 with known determinant and trace
        let m = rm(&[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 1]]);
        let p = m.char_poly().unwrap();
        assert_eq!(p.degree(), Some(3));
        // x^3 - tr x^2 + (sum of principal 2-minors) x - det
        assert_eq!(p.coeff(3), BigInt::from(1));
        assert_eq!(p.coeff(2), BigInt::from(-6));
        assert_eq!(p.coeff(0), BigInt::from(-7)); // det = 7
    }

    #[test]
    fn char_poly_rejects_non_integer_entries() {
        let mut m = RationalMatrix::identity(2);
        m.set_entry(0, 1, ratio(1, 2));
        assert!(matches!(
            m.char_poly(),
            Err(ExactError::NonIntegerEntry { row: 0, col: 1, .. })
        ));
    }

    /// Brute-force char poly by cofactor expansion of det(xI - A) over
    /// polynomial entries; an independent oracle for small n.
    fn char_poly_brute(m: &RationalMatrix) -> IntPolynomial {
        let n = m.rows();
        let entries: Vec<Vec<IntPolynomial>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let a = -m.entry(r, c).to_integer();
                        if r == c {
                            IntPolynomial::new(vec![a, BigInt::one()])
                        } else {
                            IntPolynomial::new(vec![a])
                        }
                    })
                    .collect()
            })
            .collect();
        fn det(rows: &[usize], cols: &[usize], e: &Vec<Vec<IntPolynomial>>) -> IntPolynomial {
            if rows.len() == 1 {
                return e[rows[0]][cols[0]].clone();
            }
            let mut acc = IntPolynomial::zero();
            let rest: Vec<usize> = rows[1..].to_vec();
            for (k, &c) in cols.iter().enumerate() {
                let mut sub_cols = cols.to_vec();
                sub_cols.remove(k);
                let minor = det(&rest, &sub_cols, e);
                let term = e[rows[0]][c].mul(&minor);
                let signed = if k % 2 == 0 {
                    term
                } else {
                    term.mul(&IntPolynomial::from_i64(&[-1]))
                };
                let sum: Vec<BigInt> = (0..acc.coeffs().len().max(signed.coeffs().len()))
                    .map(|i| acc.coeff(i) + signed.coeff(i))
                    .collect();
                acc = IntPolynomial::new(sum);
            }
            acc
        }
        let idx: Vec<usize> = (0..n).collect();
        det(&idx, &idx, &entries)
    }

    proptest! {
        #[test]
        fn matmul_is_associative(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dims: Vec<usize> = (0..4).map(|_| rng.random_range(1..4usize)).collect();
            let mk = |rng: &mut rand_chacha::ChaCha8Rng, r: usize, c: usize| {
                RationalMatrix::from_fn(r, c, |_, _| {
                    ratio(rng.random_range(-5i64..6), rng.random_range(1i64..4))
                })
            };
            let a = mk(&mut rng, dims[0], dims[1]);
            let b = mk(&mut rng, dims[1], dims[2]);
            let c = mk(&mut rng, dims[2], dims[3]);
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn berkowitz_matches_cofactor_expansion(seed in 0u64..300) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(1..6usize);
            let m = RationalMatrix::from_fn(n, n, |_, _| rat(rng.random_range(-4i64..5)));
            prop_assert_eq!(m.char_poly().unwrap(), char_poly_brute(&m));
        }

        #[test]
        fn char_poly_is_similarity_invariant(seed in 0u64..300) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(2..7usize);
            let m = RationalMatrix::from_fn(n, n, |_, _| rat(rng.random_range(-3i64..4)));
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let p = RationalMatrix::from_fn(n, n, |r, c| {
                if perm[c] == r { rat(1) } else { rat(0) }
            });
            let conj = p.transpose().mul(&m).unwrap().mul(&p).unwrap();
            prop_assert_eq!(conj.char_poly().unwrap(), m.char_poly().unwrap());
        }
    }

    #[test]
    fn polynomial_display_and_eval() {
        let p = IntPolynomial::from_i64(&[-1, 0, 1]);
        assert_eq!(p.to_string(), "x^2 - 1");
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(8));
        assert_eq!(IntPolynomial::linear_power(-3, 2), IntPolynomial::from_i64(&[9, -6, 1]));
    }
}
