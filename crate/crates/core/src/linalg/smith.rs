use std::fmt;

use super::matrix::BigRationalMatrix;
use super::poly::RatPolynomial;
use crate::error::{Error, Result};

pub const DEFAULT_SMITH_CAP: usize = 40;

/// Invariant factors of xI - A over Q[x], monic, each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySmithForm {
    pub factors: Vec<RatPolynomial>,
}

impl PolySmithForm {
    /// Factors other than the constant 1.
    pub fn nontrivial(&self) -> Vec<&RatPolynomial> {
        self.factors
            .iter()
            .filter(|f| f.degree() != Some(0))
            .collect()
    }

    pub fn product(&self) -> RatPolynomial {
        RatPolynomial::product(self.factors.iter())
    }
}

impl fmt::Display for PolySmithForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.nontrivial() {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

pub fn smith_form_xi_minus_a(a: &BigRationalMatrix) -> Result<PolySmithForm> {
    smith_form_xi_minus_a_capped(a, DEFAULT_SMITH_CAP)
}

pub fn smith_form_xi_minus_a_capped(a: &BigRationalMatrix, cap: usize) -> Result<PolySmithForm> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n > cap {
        return Err(Error::CapExceeded {
            what: format!("Smith form dimension {n}"),
            cap,
        });
    }
    let mut m: Vec<Vec<RatPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = RatPolynomial::constant(-a[(i, j)].clone());
                    if i == j {
                        &c + &RatPolynomial::x()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();

    let mut factors = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            // Smallest-degree nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(d) = m[i][j].degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                // Trailing block is zero: remaining factors are 0 (singular xI - A never happens).
                factors.extend((k..n).map(|_| RatPolynomial::zero()));
                return Ok(finish(factors));
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let pivot = m[k][k].clone();
            let mut dirty = false;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, r) = m[i][k].div_rem(&pivot)?;
                for j in k..n {
                    let t = &m[i][j] - &(&q * &m[k][j]);
                    m[i][j] = t;
                }
                dirty |= !r.is_zero();
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, r) = m[k][j].div_rem(&pivot)?;
                for row in m.iter_mut().skip(k) {
                    let t = &row[j] - &(&q * &row[k]);
                    row[j] = t;
                }
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest by the pivot.
            let bad = (k + 1..n)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| {
                    !m[i][j]
                        .div_rem(&pivot)
                        .map(|(_, r)| r.is_zero())
                        .unwrap_or(false)
                });
            match bad {
                Some((i, _)) => {
                    for j in k..n {
                        let t = &m[k][j] + &m[i][j];
                        m[k][j] = t;
                    }
                }
                None => break,
            }
        }
        factors.push(m[k][k].monic());
    }
    Ok(finish(factors))
}

fn finish(mut factors: Vec<RatPolynomial>) -> PolySmithForm {
    // Pivots come out in divisibility order; sort by degree to be safe for display.
    factors.sort_by_key(|f| f.degree().unwrap_or(usize::MAX));
    PolySmithForm { factors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::poly::IntPolynomial;

    #[test]
    fn identity_two() {
        let s = smith_form_xi_minus_a(&BigRationalMatrix::identity(2)).unwrap();
        let xm1 = IntPolynomial::from_i64(&[-1, 1]).to_rational();
        assert_eq!(s.factors, vec![xm1.clone(), xm1]);
    }

    #[test]
    fn jordan_block_differs_from_identity() {
        let j = BigRationalMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let a = smith_form_xi_minus_a(&j).unwrap();
        let b = smith_form_xi_minus_a(&BigRationalMatrix::identity(2)).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.product(), b.product());
    }

    #[test]
    fn product_equals_charpoly_and_chain_divides() {
        let m = BigRationalMatrix::from_i64_rows(&[
            &[0, 1, 1, 0],
            &[1, 0, 0, 1],
            &[1, 0, 0, 1],
            &[0, 1, 1, 0],
        ]);
        let s = smith_form_xi_minus_a(&m).unwrap();
        assert_eq!(s.product(), m.charpoly().unwrap());
        for w in s.factors.windows(2) {
            assert!(w[1].div_rem(&w[0]).unwrap().1.is_zero());
        }
    }

    #[test]
    fn over_cap() {
        let m = BigRationalMatrix::identity(3);
        assert!(matches!(
            smith_form_xi_minus_a_capped(&m, 2),
            Err(Error::CapExceeded { .. })
        ));
    }
}
