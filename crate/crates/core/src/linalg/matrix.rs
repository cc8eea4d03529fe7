use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::poly::{IntPolynomial, RatPolynomial};
use crate::error::{Error, Result};

/// Dense exact-rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigRationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl BigRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BigRationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(BigRationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| BigRational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn neg(&self) -> Self {
        BigRationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.data
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }

    /// Entries multiplied by `scale`, which must clear every denominator.
    fn scaled_integer_rows(&self, scale: &BigInt) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| {
                        let s = v * BigRational::from_integer(scale.clone());
                        debug_assert!(s.is_integer());
                        s.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact determinant: denominators are cleared row by row, then fraction-free elimination.
    pub fn determinant(&self) -> Result<BigRational> {
        let n = self.require_square()?;
        let mut rows = Vec::with_capacity(n);
        let mut scale = BigInt::one();
        for i in 0..n {
            let l = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |a, v| a.lcm(v.denom()));
            rows.push(
                self.row(i)
                    .iter()
                    .map(|v| (v * BigRational::from_integer(l.clone())).to_integer())
                    .collect(),
            );
            scale *= l;
        }
        Ok(BigRational::new(bareiss_determinant(rows), scale))
    }

    /// Rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = m[(rank, c)].recip();
            for r in rank + 1..m.rows {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] * &inv;
                for k in c..m.cols {
                    let d = &f * &m[(rank, k)];
                    m[(r, k)] -= d;
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.cols {
                self.data.swap(a * self.cols + k, b * self.cols + k);
            }
        }
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        let n = self.require_square()?;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Ok(None);
            };
            m.swap_rows(c, p);
            inv.swap_rows(c, p);
            let piv = m[(c, c)].recip();
            for k in 0..n {
                m[(c, k)] *= &piv;
                inv[(c, k)] *= &piv;
            }
            for r in 0..n {
                if r == c || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for k in 0..n {
                    let d = &f * &m[(c, k)];
                    m[(r, k)] -= d;
                    let d = &f * &inv[(c, k)];
                    inv[(r, k)] -= d;
                }
            }
        }
        Ok(Some(inv))
    }

    /// det(xI - M) with rational coefficients; integer matrices give integer coefficients.
    pub fn charpoly(&self) -> Result<RatPolynomial> {
        let n = self.require_square()?;
        let d = self.denominator_lcm();
        let ints = self.scaled_integer_rows(&d);
        let pb = integer_charpoly(&ints);
        // P_A(x) = d^{-n} P_B(d x)
        let mut coeffs = Vec::with_capacity(n + 1);
        for (k, c) in pb.coeffs().iter().enumerate() {
            let shift = (n - k) as u32;
            coeffs.push(BigRational::new(c.clone(), d.pow(shift)));
        }
        let p = RatPolynomial::new(coeffs);
        self.check_charpoly(&p);
        Ok(p)
    }

    /// Integer characteristic polynomial; fails on non-integral entries.
    pub fn charpoly_integer(&self) -> Result<IntPolynomial> {
        self.require_square()?;
        if !self.is_integral() {
            return Err(Error::Unsupported(
                "charpoly_integer on a rational matrix".into(),
            ));
        }
        let ints = self.scaled_integer_rows(&BigInt::one());
        let p = integer_charpoly(&ints);
        self.check_charpoly(&p.to_rational());
        Ok(p)
    }

    /// Trace identities on the top coefficients; a failure here is a bug, not bad input.
    fn check_charpoly(&self, p: &RatPolynomial) {
        let n = self.rows;
        assert_eq!(p.degree(), Some(n), "charpoly degree");
        assert!(p.is_monic(), "charpoly not monic");
        if n >= 1 {
            assert_eq!(
                p.coeff(n - 1),
                -self.trace(),
                "x^(n-1) coefficient is not -trace"
            );
        }
        if n >= 2 {
            let t = self.trace();
            let mut t2 = BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    if !self[(i, j)].is_zero() && !self[(j, i)].is_zero() {
                        t2 += &self[(i, j)] * &self[(j, i)];
                    }
                }
            }
            let e2 = (&t * &t - t2) / BigRational::from_integer(2.into());
            assert_eq!(p.coeff(n - 2), e2, "x^(n-2) coefficient mismatch");
        }
    }
}

impl Index<(usize, usize)> for BigRationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for BigRationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &BigRationalMatrix {
    type Output = BigRationalMatrix;
    fn mul(self, rhs: Self) -> BigRationalMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = BigRationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for BigRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free Gaussian elimination (Bareiss). Every intermediate division is exact.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        for row in tail.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// det(xI - B) for an integer matrix: evaluate at x = 0..n in parallel, then
/// interpolate with Newton forward differences.
pub fn integer_charpoly(b: &[Vec<BigInt>]) -> IntPolynomial {
    let n = b.len();
    let values: Vec<BigInt> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let kk = BigInt::from(k);
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let v = -&b[i][j];
                            if i == j {
                                v + &kk
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect();
            bareiss_determinant(m)
        })
        .collect();
    newton_interpolate(values)
}

/// Integer-valued polynomial of degree <= len-1 through (k, values[k]), k = 0..len-1.
fn newton_interpolate(mut diffs: Vec<BigInt>) -> IntPolynomial {
    let len = diffs.len();
    // Forward differences in place: diffs[j] becomes Delta^j f(0).
    for j in 1..len {
        for i in (j..len).rev() {
            let d = &diffs[i] - &diffs[i - 1];
            diffs[i] = d;
        }
    }
    // Sum Delta^j f(0) * C(x, j); C(x, j) = falling(x, j) / j!.
    let mut result = vec![BigInt::zero(); len.max(1)];
    let mut falling = vec![BigInt::one()];
    let mut fact = BigInt::one();
    for (j, d) in diffs.iter().enumerate() {
        if j > 0 {
            fact *= j;
            // falling *= (x - (j-1))
            let shift = BigInt::from(j - 1);
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &shift;
            }
            falling = next;
        }
        let (q, r) = d.div_rem(&fact);
        assert!(r.is_zero(), "forward difference not divisible by j!");
        if q.is_zero() {
            continue;
        }
        for (i, c) in falling.iter().enumerate() {
            result[i] += c * &q;
        }
    }
    IntPolynomial::new(result)
}
