use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree.
/// The zero polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RatPolynomial = Polynomial<BigRational>;

impl<T: Clone + Num> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial x.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// x - c
    pub fn linear_root(c: T) -> Self {
        Self::new(vec![T::zero() - c, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// p(-x)
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if k % 2 == 1 {
                        T::zero() - c.clone()
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
    }

    /// Long division; fails when a quotient coefficient is not representable in `T`
    /// (only possible for integer coefficients).
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::Dimension("division by the zero polynomial".into()))?;
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let q = top.clone() / lead.clone();
            if q.clone() * lead.clone() != top {
                return Err(Error::Remainder);
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - q.clone() * c.clone();
            }
            quot[k] = q;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn divide_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Remainder)
        }
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Self>>(factors: I) -> Self
    where
        T: 'a,
    {
        factors.into_iter().fold(Self::one(), |acc, f| &acc * f)
    }
}

impl IntPolynomial {
    /// Parses the compact form written by [`IntPolynomial::to_compact_string`].
    pub fn parse_compact(s: &str) -> Result<Self> {
        let err = |column: usize, message: &str| Error::Parse {
            line: 1,
            column,
            message: message.to_string(),
        };
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(err(1, "empty polynomial"));
        }
        let bytes = text.as_bytes();
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let start = i;
            let neg = match bytes[i] {
                b'-' => {
                    i += 1;
                    true
                }
                b'+' => {
                    i += 1;
                    false
                }
                _ if i == 0 => false,
                _ => return Err(err(i + 1, "expected sign")),
            };
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut c: BigInt = if i > digits_start {
                text[digits_start..i]
                    .parse()
                    .map_err(|_| err(digits_start + 1, "bad coefficient"))?
            } else {
                BigInt::from(1)
            };
            let mut k = 0usize;
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                k = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let e0 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    k = text[e0..i]
                        .parse()
                        .map_err(|_| err(e0 + 1, "bad exponent"))?;
                }
            } else if i == digits_start {
                return Err(err(start + 1, "empty term"));
            }
            if neg {
                c = -c;
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            coeffs[k] += c;
        }
        Ok(Self::new(coeffs))
    }

    /// Compact form such as `x^4-4x^2+1`, highest degree first, no spaces.
    pub fn to_compact_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == num_bigint::Sign::Minus;
            let mag = c.magnitude().to_string();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if k == 0 || mag != "1" {
                out.push_str(&mag);
            }
            match k {
                0 => {}
                1 => out.push('x'),
                _ => out.push_str(&format!("x^{k}")),
            }
        }
        out
    }

    pub fn to_rational(&self) -> RatPolynomial {
        RatPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl RatPolynomial {
    /// Like the integer compact form; fractional coefficients are parenthesised, e.g.
    /// `x^3-(1/2)x`.
    pub fn to_compact_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mag = c.abs();
            if mag.is_integer() {
                if k == 0 || !mag.is_one() {
                    out.push_str(&mag.numer().to_string());
                }
            } else if k == 0 {
                out.push_str(&format!("{}/{}", mag.numer(), mag.denom()));
            } else {
                out.push_str(&format!("({}/{})", mag.numer(), mag.denom()));
            }
            match k {
                0 => {}
                1 => out.push('x'),
                _ => out.push_str(&format!("x^{k}")),
            }
        }
        out
    }

    /// Integer polynomial when every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd over the rationals.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("rational division is exact");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<T: Clone + Num> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Clone + Num> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Clone + Num> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Clone + Num> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| T::zero() - c.clone()).collect())
    }
}

impl<T: Clone + Num + fmt::Display> fmt::Display for Polynomial<T> {
    /// Text form `poly <degree>: c0 c1 ... cd`; the zero polynomial prints as degree 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "poly 0: 0");
        }
        write!(f, "poly {}:", self.coeffs.len() - 1)?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// Parses `p` or `p/q` with q > 0.
pub fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        None => t.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            (q > BigInt::zero()).then(|| BigRational::new(p, q))
        }
    }
}

/// Parses the `poly <degree>: c0 ... cd` text form.
pub fn parse_rat_polynomial(s: &str) -> Result<RatPolynomial> {
    let err = |column: usize, message: &str| Error::Parse {
        line: 1,
        column,
        message: message.to_string(),
    };
    let rest = s
        .trim()
        .strip_prefix("poly ")
        .ok_or_else(|| err(1, "expected `poly`"))?;
    let (deg, body) = rest.split_once(':').ok_or_else(|| err(6, "expected `:`"))?;
    let deg: usize = deg.trim().parse().map_err(|_| err(6, "bad degree"))?;
    let coeffs = body
        .split_whitespace()
        .map(|t| parse_rational(t).ok_or_else(|| err(1, "bad coefficient")))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.len() != deg + 1 {
        return Err(err(1, "coefficient count does not match degree"));
    }
    Ok(RatPolynomial::new(coeffs))
}
