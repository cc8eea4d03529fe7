//! Trigonometric product formulas evaluated in multi-precision arithmetic and rounded to
//! exact values under a certificate, together with the exact graph counts they predict.

mod real;
mod tables;

use std::fmt;
use std::str::FromStr;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{build_path_family, family, FamilyName};
use crate::linalg::IntPolynomial;
use crate::matching::{count_invariant_matchings, count_matchings, SymmetryGroup};
use crate::trees::{symmetry_class_count, tree_count};

pub use real::{nearest_integer, neg_log2, to_rational, RealCtx};
pub use tables::{encoded_census_value, encoded_highdim_charpoly, CENSUS_FACTORS};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 256;
/// A rounding is accepted only when the distance to the nearest integer is at most 2^-64.
pub const ACCEPT_BITS: i64 = 64;
/// The precision ladder stops here.
pub const MAX_PRECISION: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    Eq2_2PathSpectrum,
    Eq2_3GridSpectrum,
    Eq2_4,
    Eq2_5,
    Eq3_22,
    Eq3_24,
    Eq3_25,
    Eq3_26,
    Eq3_28,
    Eq3_29,
    Eq4_1,
    Eq4_2,
    Eq4_3,
    Eq4_4,
    Eq4_7,
    Eq4_8,
    Eq4_9,
    Eq4_10,
    Eq4_11,
    Eq4_12,
    Eq5_1,
    Eq5_2,
    Eq5_3,
    Eq5_4,
    Eq5_5,
    Eq5_6,
    Eq5_7,
    Eq6_3,
}

impl FormulaId {
    pub const ALL: [FormulaId; 28] = [
        FormulaId::Eq2_2PathSpectrum,
        FormulaId::Eq2_3GridSpectrum,
        FormulaId::Eq2_4,
        FormulaId::Eq2_5,
        FormulaId::Eq3_22,
        FormulaId::Eq3_24,
        FormulaId::Eq3_25,
        FormulaId::Eq3_26,
        FormulaId::Eq3_28,
        FormulaId::Eq3_29,
        FormulaId::Eq4_1,
        FormulaId::Eq4_2,
        FormulaId::Eq4_3,
        FormulaId::Eq4_4,
        FormulaId::Eq4_7,
        FormulaId::Eq4_8,
        FormulaId::Eq4_9,
        FormulaId::Eq4_10,
        FormulaId::Eq4_11,
        FormulaId::Eq4_12,
        FormulaId::Eq5_1,
        FormulaId::Eq5_2,
        FormulaId::Eq5_3,
        FormulaId::Eq5_4,
        FormulaId::Eq5_5,
        FormulaId::Eq5_6,
        FormulaId::Eq5_7,
        FormulaId::Eq6_3,
    ];

    pub fn tag(self) -> &'static str {
        use FormulaId::*;
        match self {
            Eq2_2PathSpectrum => "EQ2_2_PATH_SPECTRUM",
            Eq2_3GridSpectrum => "EQ2_3_GRID_SPECTRUM",
            Eq2_4 => "EQ2_4",
            Eq2_5 => "EQ2_5",
            Eq3_22 => "EQ3_22",
            Eq3_24 => "EQ3_24",
            Eq3_25 => "EQ3_25",
            Eq3_26 => "EQ3_26",
            Eq3_28 => "EQ3_28",
            Eq3_29 => "EQ3_29",
            Eq4_1 => "EQ4_1",
            Eq4_2 => "EQ4_2",
            Eq4_3 => "EQ4_3",
            Eq4_4 => "EQ4_4",
            Eq4_7 => "EQ4_7",
            Eq4_8 => "EQ4_8",
            Eq4_9 => "EQ4_9",
            Eq4_10 => "EQ4_10",
            Eq4_11 => "EQ4_11",
            Eq4_12 => "EQ4_12",
            Eq5_1 => "EQ5_1",
            Eq5_2 => "EQ5_2",
            Eq5_3 => "EQ5_3",
            Eq5_4 => "EQ5_4",
            Eq5_5 => "EQ5_5",
            Eq5_6 => "EQ5_6",
            Eq5_7 => "EQ5_7",
            Eq6_3 => "EQ6_3",
        }
    }

    /// Smallest parameter for which the formula is stated.
    pub fn min_n(self) -> i64 {
        match self {
            FormulaId::Eq2_4 => 2,
            _ => 1,
        }
    }

    /// What the formula counts, in words.
    pub fn describes(self) -> &'static str {
        use FormulaId::*;
        match self {
            Eq2_2PathSpectrum => "charpoly of the path P_n",
            Eq2_3GridSpectrum => "charpoly of the grid G_n",
            Eq2_4 => "charpoly of QAD_{n-1}",
            Eq2_5 => "spanning trees of QAD_n",
            Eq3_22 => "spanning trees of HMD_n",
            Eq3_24 => "charpoly of OD_n",
            Eq3_25 => "charpoly of HOD_{n-1}",
            Eq3_26 => "spanning trees of HOD_n",
            Eq3_28 => "charpoly of MD_n",
            Eq3_29 => "charpoly of HMD_{n-1}",
            Eq4_1 => "perfect matchings of A_n",
            Eq4_2 => "perfect matchings of B_n",
            Eq4_3 => "perfect matchings of C_n",
            Eq4_4 => "perfect matchings of D_n",
            Eq4_7 => "perfect matchings of G_{2n}",
            Eq4_8 => "h-symmetric spanning trees of AD_n",
            Eq4_9 => "h-symmetric spanning trees of OD_n",
            Eq4_10 => "hv-symmetric spanning trees of OD_n",
            Eq4_11 => "h-symmetric spanning trees of MD_n",
            Eq4_12 => "hv-symmetric spanning trees of MD_n",
            Eq5_1 => "weighted perfect matchings of A~_n",
            Eq5_2 => "weighted perfect matchings of B~_n",
            Eq5_3 => "h-invariant perfect matchings of H_{2n}",
            Eq5_4 => "hv-invariant perfect matchings of H_{2n}",
            Eq5_5 => "r2-invariant perfect matchings of H_n",
            Eq5_6 => "r-invariant perfect matchings of H_{2n-1}",
            Eq5_7 => "r-invariant perfect matchings of H_{2n}",
            Eq6_3 => "spanning trees of AP_n",
        }
    }

    pub fn is_polynomial(self) -> bool {
        use FormulaId::*;
        matches!(
            self,
            Eq2_2PathSpectrum | Eq2_3GridSpectrum | Eq2_4 | Eq3_24 | Eq3_25 | Eq3_28 | Eq3_29
        )
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        FormulaId::ALL
            .into_iter()
            .find(|f| f.tag() == up)
            .ok_or_else(|| Error::Unsupported(format!("formula `{s}`")))
    }
}

/// Exact outcome of a formula or of the count it predicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactValue {
    Integer(BigInt),
    Rational(BigRational),
    Polynomial(IntPolynomial),
}

impl ExactValue {
    pub fn from_rational(r: BigRational) -> Self {
        if r.is_integer() {
            ExactValue::Integer(r.to_integer())
        } else {
            ExactValue::Rational(r)
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Integer(v) => write!(f, "{v}"),
            ExactValue::Rational(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            ExactValue::Polynomial(p) => f.write_str(&p.to_compact_string()),
        }
    }
}

/// Evidence that a floating evaluation was rounded to the right exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundingCertificate {
    /// Precision of the accepted evaluation.
    pub bits: usize,
    /// Largest distance from an evaluated quantity to the integer it was rounded to.
    pub distance: BigRational,
}

impl RoundingCertificate {
    /// k with distance <= 2^-k, or None for an exact hit.
    pub fn distance_exponent(&self) -> Option<i64> {
        neg_log2(&self.distance)
    }
}

impl fmt::Display for RoundingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.distance_exponent() {
            Some(k) => write!(f, "DIST 2^-{k} BITS {}", self.bits),
            None => write!(f, "DIST 0 BITS {}", self.bits),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub id: FormulaId,
    pub n: i64,
    pub value: ExactValue,
    pub certificate: RoundingCertificate,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VALUE {} {}", self.value, self.certificate)
    }
}

/// A formula as evaluated at one precision: an exact prefactor times a product of algebraic
/// integers (which is a rational integer), or a polynomial given by its roots times x^zeros.
enum Raw {
    /// `loss` bounds the bits lost to rounding: product size, factor count and cancellation.
    Scalar {
        prefactor: BigRational,
        product: BigFloat,
        loss: i64,
    },
    Roots {
        zeros: usize,
        roots: Vec<BigFloat>,
    },
}

fn pow2(e: i64) -> BigRational {
    let two = BigRational::from_integer(2.into());
    if e >= 0 {
        two.pow(e as i32)
    } else {
        BigRational::one() / two.pow((-e) as i32)
    }
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

const GUARD_BITS: i64 = 8;

/// e with 2^(e-1) <= |x| < 2^e; zero counts as very small.
fn exponent(x: &BigFloat) -> i64 {
    x.exponent().map_or(-(1 << 20), |e| e as i64)
}

fn bit_len(k: usize) -> i64 {
    (usize::BITS - k.leading_zeros()) as i64
}

/// Ordered running product at the context precision.
struct Acc<'a> {
    ctx: &'a RealCtx,
    value: BigFloat,
}

impl<'a> Acc<'a> {
    fn new(ctx: &'a RealCtx) -> Self {
        Acc {
            ctx,
            value: ctx.int(1),
        }
    }

    fn times(&mut self, f: &BigFloat) {
        self.value = self.ctx.mul(&self.value, f);
    }
}

/// 4 - 2cos(a pi/d) - 2cos(b pi/d).
fn sum_factor(ctx: &mut RealCtx, a: i64, b: i64, d: i64) -> BigFloat {
    let (x, y) = (ctx.two_cos(a, d), ctx.two_cos(b, d));
    ctx.sub(&ctx.sub(&ctx.int(4), &x), &y)
}

/// 4 - 4cos(a pi/d)cos(b pi/d).
fn product_factor(ctx: &mut RealCtx, a: i64, b: i64, d: i64) -> BigFloat {
    let (x, y) = (ctx.two_cos(a, d), ctx.two_cos(b, d));
    ctx.sub(&ctx.int(4), &ctx.mul(&x, &y))
}

/// 4cos^2(a pi/d) + 4cos^2(b pi/d).
fn square_sum_factor(ctx: &mut RealCtx, a: i64, b: i64, d: i64) -> BigFloat {
    let (x, y) = (ctx.two_cos(a, d), ctx.two_cos(b, d));
    ctx.add(&ctx.mul(&x, &x), &ctx.mul(&y, &y))
}

/// 4 - 4cos(a pi/d).
fn single_factor(ctx: &mut RealCtx, a: i64, d: i64) -> BigFloat {
    let x = ctx.two_cos(a, d);
    ctx.sub(&ctx.int(4), &ctx.mul(&ctx.int(2), &x))
}

fn pairs(lo: i64, hi: i64, strict: bool) -> impl Iterator<Item = (i64, i64)> {
    (lo..=hi).flat_map(move |j| {
        let start = if strict { j + 1 } else { j };
        (start..=hi).map(move |k| (j, k))
    })
}

fn scalar(
    ctx: &mut RealCtx,
    prefactor: BigRational,
    build: impl FnOnce(&mut RealCtx, &mut Vec<BigFloat>),
) -> Raw {
    let mut factors = Vec::new();
    build(ctx, &mut factors);
    let mut acc = Acc::new(ctx);
    let mut smallest = 0i64;
    for f in &factors {
        acc.times(f);
        smallest = smallest.min(exponent(f));
    }
    let loss = exponent(&acc.value).max(0) - smallest + bit_len(factors.len()) + GUARD_BITS;
    Raw::Scalar {
        prefactor,
        product: acc.value,
        loss,
    }
}

fn evaluate_raw(ctx: &mut RealCtx, id: FormulaId, n: i64) -> Raw {
    use FormulaId::*;
    match id {
        Eq2_2PathSpectrum => Raw::Roots {
            zeros: 0,
            roots: (1..=n).map(|k| ctx.two_cos(k, n + 1)).collect(),
        },
        Eq2_3GridSpectrum => {
            let mut roots = Vec::new();
            for j in 1..=n {
                for k in 1..=n {
                    let (a, b) = (ctx.two_cos(j, n + 1), ctx.two_cos(k, n + 1));
                    roots.push(ctx.add(&a, &b));
                }
            }
            Raw::Roots { zeros: 0, roots }
        }
        Eq2_4 => {
            let mut roots = Vec::new();
            for (j, k) in pairs(1, n, true) {
                let (a, b) = (ctx.two_cos(j, n + 1), ctx.two_cos(k, n + 1));
                roots.push(ctx.add(&a, &b));
            }
            Raw::Roots { zeros: 0, roots }
        }
        Eq2_5 => scalar(ctx, BigRational::one(), |c, fs| {
            for (j, k) in pairs(1, n - 1, true) {
                fs.push(sum_factor(c, j, k, n));
            }
        }),
        Eq3_22 => scalar(ctx, BigRational::one(), |c, fs| {
            for (j, k) in pairs(1, 2 * n - 1, true).filter(|&(j, k)| j + k < 2 * n) {
                fs.push(product_factor(c, j, k, 2 * n));
            }
        }),
        Eq3_24 | Eq3_28 => {
            let (d, top, zeros) = if id == Eq3_24 {
                (2 * n + 2, 2 * n + 1, 1)
            } else {
                (2 * n + 1, 2 * n, 0)
            };
            let mut roots = Vec::new();
            for j in 1..=n {
                let a = ctx.two_cos(j, d);
                roots.push(ctx.mul(&a, &a));
            }
            for (j, k) in pairs(1, top, true) {
                let (a, b) = (ctx.two_cos(j, d), ctx.two_cos(k, d));
                roots.push(ctx.mul(&a, &b));
            }
            Raw::Roots { zeros, roots }
        }
        Eq3_25 | Eq3_29 => {
            let (d, top) = if id == Eq3_25 {
                (2 * n + 2, 2 * n + 1)
            } else {
                (2 * n + 1, 2 * n)
            };
            let mut roots = Vec::new();
            for (j, k) in pairs(1, top, true).filter(|&(j, k)| j + k <= top) {
                let (a, b) = (ctx.two_cos(j, d), ctx.two_cos(k, d));
                roots.push(ctx.mul(&a, &b));
            }
            Raw::Roots { zeros: 0, roots }
        }
        Eq3_26 => scalar(ctx, BigRational::one(), |c, fs| {
            for (j, k) in pairs(1, 2 * n, true).filter(|&(j, k)| j + k <= 2 * n) {
                fs.push(product_factor(c, j, k, 2 * n + 1));
            }
        }),
        Eq4_1 => scalar(ctx, pow2(-n), |c, fs| {
            for (j, k) in pairs(1, n, false) {
                fs.push(sum_factor(c, j, k, n + 1));
            }
        }),
        Eq4_2 => scalar(ctx, BigRational::one(), |c, fs| {
            for (j, k) in pairs(1, n, true) {
                fs.push(square_sum_factor(c, j, k, 2 * n + 1));
            }
        }),
        Eq4_3 => scalar(ctx, pow2(-2 * ((n + 1) / 2)), |c, fs| {
            for (j, k) in pairs(1, n, false).filter(|&(j, k)| (j + k) % 2 == 0) {
                fs.push(sum_factor(c, j, k, n + 1));
            }
        }),
        Eq4_4 => scalar(ctx, pow2(-(n / 2)), |c, fs| {
            for (j, k) in pairs(1, n, true).filter(|&(j, k)| (j + k) % 2 == 1) {
                fs.push(sum_factor(c, j, k, n + 1));
            }
        }),
        Eq4_7 => scalar(ctx, BigRational::one(), |c, fs| {
            for j in 1..=n {
                for k in 1..=n {
                    fs.push(square_sum_factor(c, j, k, 2 * n + 1));
                }
            }
        }),
        Eq4_8 => scalar(ctx, BigRational::from_integer((2 * n).into()), |c, fs| {
            for (j, k) in pairs(1, 2 * n - 1, true).filter(|&(j, k)| j + k < 2 * n) {
                fs.push(product_factor(c, j, k, 2 * n));
            }
        }),
        Eq4_9 => scalar(ctx, pow2(-2 * n), |c, fs| {
            for (j, k) in pairs(1, 2 * n - 1, false).filter(|&(j, k)| (j + k) % 2 == 0) {
                fs.push(sum_factor(c, j, k, 2 * n));
            }
        }),
        Eq4_10 => scalar(ctx, pow2(-(n - 1)), |c, fs| {
            for (j, k) in pairs(1, n - 1, false) {
                fs.push(sum_factor(c, j, k, n));
            }
        }),
        Eq4_11 => scalar(ctx, pow2(-(2 * n - 2)), |c, fs| {
            for (j, k) in pairs(1, 2 * n - 2, false).filter(|&(j, k)| (j + k) % 2 == 0) {
                fs.push(sum_factor(c, j, k, 2 * n - 1));
            }
        }),
        // 2^{n-1} prod cos(j pi/(2n-1)) is written as prod 2cos(j pi/(2n-1)).
        Eq4_12 => scalar(ctx, BigRational::one(), |c, fs| {
            for j in 1..n {
                fs.push(c.two_cos(j, 2 * n - 1));
            }
            for (j, k) in pairs(1, n - 1, true) {
                fs.push(square_sum_factor(c, j, k, 2 * n - 1));
            }
        }),
        Eq5_1 => scalar(ctx, pow2(-3 * n), |c, fs| {
            for j in 1..=2 * n {
                fs.push(single_factor(c, j, 2 * n + 1));
            }
            for (j, k) in pairs(1, n, true) {
                fs.push(sum_factor(c, 2 * j, 2 * k, 2 * n + 1));
            }
        }),
        Eq5_2 => scalar(ctx, pow2(-(n - 1)), |c, fs| {
            for (j, k) in
                pairs(1, 2 * n - 1, true).filter(|&(j, k)| j + k < 2 * n && (j + k) % 2 == 1)
            {
                fs.push(product_factor(c, j, k, 2 * n));
            }
        }),
        Eq5_3 => scalar(ctx, BigRational::one(), |c, fs| {
            for j in 0..n {
                for k in 0..=2 * n {
                    fs.push(sum_factor(c, 2 * j + 1, k, 2 * n + 1));
                }
            }
        }),
        Eq5_4 => scalar(ctx, BigRational::one(), |c, fs| {
            for j in 1..=n {
                for k in 1..=n {
                    fs.push(square_sum_factor(c, j, k, 2 * n + 1));
                }
            }
        }),
        Eq5_5 => scalar(ctx, pow2(n - 2 * (n / 2)), |c, fs| {
            for (j, k) in pairs(1, n, true).filter(|&(j, k)| (j + k) % 2 == 1) {
                let f = sum_factor(c, j, k, n + 1);
                fs.push(f.clone());
                fs.push(f);
            }
        }),
        Eq5_6 => scalar(ctx, BigRational::from_integer(2.into()), |c, fs| {
            for (j, k) in pairs(1, n - 1, false) {
                fs.push(sum_factor(c, j, k, n));
            }
            for (j, k) in
                pairs(1, 2 * n - 1, true).filter(|&(j, k)| j + k < 2 * n && (j + k) % 2 == 1)
            {
                fs.push(product_factor(c, j, k, 2 * n));
            }
        }),
        Eq5_7 => scalar(ctx, pow2(-n), |c, fs| {
            for j in 1..=2 * n {
                fs.push(single_factor(c, j, 2 * n + 1));
            }
            for (j, k) in pairs(1, n, true) {
                fs.push(sum_factor(c, 2 * j, 2 * k, 2 * n + 1));
                fs.push(square_sum_factor(c, j, k, 2 * n + 1));
            }
        }),
        Eq6_3 => scalar(ctx, ratio(1, 2 * n * n), |c, fs| {
            for j in 1..2 * n {
                let f = single_factor(c, j, 2 * n);
                fs.push(f.clone());
                fs.push(f);
            }
            for j in 1..2 * n {
                for k in 1..2 * n {
                    fs.push(product_factor(c, j, k, 2 * n));
                }
            }
        }),
    }
}

/// Rounds one evaluation; returns the exact value, the largest rounding distance and the
/// number of bits the evaluation may have lost.
fn round_raw(ctx: &RealCtx, raw: Raw) -> Result<(ExactValue, BigRational, i64)> {
    match raw {
        Raw::Scalar {
            prefactor,
            product,
            loss,
        } => {
            let (v, d) = nearest_integer(&to_rational(&product)?);
            Ok((
                ExactValue::from_rational(prefactor * BigRational::from_integer(v)),
                d,
                loss,
            ))
        }
        Raw::Roots { zeros, roots } => {
            // Intermediate coefficients are bounded by prod (1 + |r|).
            let mut bound = ctx.int(1);
            for r in &roots {
                bound = ctx.mul(&bound, &ctx.add(&ctx.int(1), &r.abs()));
            }
            let loss = exponent(&bound) + 2 * bit_len(roots.len()) + GUARD_BITS;
            // Expand prod (x - r) in the given order; coefficients ascending.
            let mut coeffs = vec![ctx.int(1)];
            for r in &roots {
                let mut next = vec![ctx.int(0); coeffs.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    next[i + 1] = ctx.add(&next[i + 1], c);
                    next[i] = ctx.sub(&next[i], &ctx.mul(c, r));
                }
                coeffs = next;
            }
            let mut ints = vec![BigInt::zero(); zeros];
            let mut worst = BigRational::zero();
            for c in &coeffs {
                let (v, d) = nearest_integer(&to_rational(c)?);
                if d > worst {
                    worst = d;
                }
                ints.push(v);
            }
            Ok((
                ExactValue::Polynomial(IntPolynomial::new(ints)),
                worst,
                loss,
            ))
        }
    }
}

fn evaluate_at(id: FormulaId, n: i64, bits: usize) -> Result<(ExactValue, BigRational, i64)> {
    let mut ctx = RealCtx::new(bits)?;
    let raw = evaluate_raw(&mut ctx, id, n);
    round_raw(&ctx, raw)
}

/// The distance must be small and the precision must leave ACCEPT_BITS fractional bits
/// after the estimated loss; otherwise a huge product rounds to an integer trivially.
fn accepted(d: &BigRational, bits: usize, loss: i64) -> bool {
    bits as i64 - loss >= ACCEPT_BITS && neg_log2(d).is_none_or(|k| k >= ACCEPT_BITS)
}

/// Evaluates at the default precision, climbing the precision ladder as needed.
pub fn eval_formula(id: FormulaId, n: i64) -> Result<Evaluation> {
    eval_formula_with(id, n, DEFAULT_PRECISION)
}

/// Evaluates starting at `bits`, doubling until the rounding distance is at most 2^-64; the
/// accepted value must then reproduce at twice the precision.
pub fn eval_formula_with(id: FormulaId, n: i64, bits: usize) -> Result<Evaluation> {
    if n < id.min_n() {
        return Err(Error::BadOrder {
            min: id.min_n(),
            got: n,
        });
    }
    let mut p = bits.max(64);
    loop {
        let (value, distance, loss) = evaluate_at(id, n, p)?;
        if accepted(&distance, p, loss) {
            let (again, _, _) = evaluate_at(id, n, 2 * p)?;
            if again != value {
                return Err(Error::Certificate {
                    bits: p,
                    detail: format!("{id} at n={n} changed under doubled precision"),
                });
            }
            return Ok(Evaluation {
                id,
                n,
                value,
                certificate: RoundingCertificate { bits: p, distance },
            });
        }
        if p >= MAX_PRECISION {
            return Err(Error::Certificate {
                bits: p,
                detail: format!("{id} at n={n} not within 2^-{ACCEPT_BITS} of an integer"),
            });
        }
        p *= 2;
    }
}

fn charpoly_of(g: &crate::lattice::LatticeGraph) -> Result<ExactValue> {
    Ok(ExactValue::Polynomial(
        g.adjacency_matrix().charpoly_integer()?,
    ))
}

fn matchings_of(g: &crate::lattice::LatticeGraph) -> Result<ExactValue> {
    Ok(ExactValue::from_rational(count_matchings(g)?))
}

fn class_count(name: FamilyName, n: i64, group: SymmetryGroup) -> Result<ExactValue> {
    Ok(ExactValue::Integer(
        symmetry_class_count(name, n, group)?.value,
    ))
}

fn holes(m: i64, group: SymmetryGroup) -> Result<ExactValue> {
    Ok(ExactValue::Integer(count_invariant_matchings(
        &family(FamilyName::HoledSquare, m),
        group,
    )?))
}

/// The exact quantity a formula predicts, computed from the graphs themselves.
pub fn exact_counterpart(id: FormulaId, n: i64) -> Result<ExactValue> {
    use FamilyName::*;
    use FormulaId::*;
    if n < id.min_n() {
        return Err(Error::BadOrder {
            min: id.min_n(),
            got: n,
        });
    }
    let trees = |name: FamilyName, m: i64| -> Result<ExactValue> {
        Ok(ExactValue::Integer(tree_count(&family(name, m))?))
    };
    match id {
        Eq2_2PathSpectrum => charpoly_of(&build_path_family(PathQ, n, BigRational::one())?),
        Eq2_3GridSpectrum => charpoly_of(&family(Grid, n)),
        Eq2_4 => charpoly_of(&family(Quartered, n - 1)),
        Eq2_5 => trees(Quartered, n),
        Eq3_22 => trees(HalfMixed, n),
        Eq3_24 => charpoly_of(&family(OddDiamond, n)),
        Eq3_25 => charpoly_of(&family(HalfOdd, n - 1)),
        Eq3_26 => trees(HalfOdd, n),
        Eq3_28 => charpoly_of(&family(MixedDiamond, n)),
        Eq3_29 => charpoly_of(&family(HalfMixed, n - 1)),
        Eq4_1 => matchings_of(&family(ZigzagA, n)),
        Eq4_2 => matchings_of(&family(ZigzagB, n)),
        Eq4_3 => matchings_of(&family(ZigzagC, n)),
        Eq4_4 => matchings_of(&family(ZigzagD, n)),
        Eq4_7 => matchings_of(&family(Grid, 2 * n)),
        Eq4_8 => class_count(Aztec, n, SymmetryGroup::H),
        Eq4_9 => class_count(OddDiamond, n, SymmetryGroup::H),
        Eq4_10 => class_count(OddDiamond, n, SymmetryGroup::HV),
        Eq4_11 => class_count(MixedDiamond, n, SymmetryGroup::H),
        Eq4_12 => class_count(MixedDiamond, n, SymmetryGroup::HV),
        Eq5_1 => matchings_of(&family(ZigzagATilde, n)),
        Eq5_2 => matchings_of(&family(ZigzagBTilde, n)),
        Eq5_3 => holes(2 * n, SymmetryGroup::H),
        Eq5_4 => holes(2 * n, SymmetryGroup::HV),
        Eq5_5 => holes(n, SymmetryGroup::R2),
        Eq5_6 => holes(2 * n - 1, SymmetryGroup::R),
        Eq5_7 => holes(2 * n, SymmetryGroup::R),
        Eq6_3 => trees(Pillowcase, n),
    }
}

/// Path-like graphs whose spectra are cosines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathSpectrum {
    /// Unit path P_n.
    P,
    /// Path with edge weight 2.
    P2,
    /// Path with loops 2.
    Q,
    /// Path with loops -2.
    QP,
    /// Loops 2 with a final loop 1.
    R,
    /// Loops -2 with a final loop -1.
    RP,
}

impl PathSpectrum {
    pub fn family(self) -> (FamilyName, i64) {
        match self {
            PathSpectrum::P => (FamilyName::PathQ, 1),
            PathSpectrum::P2 => (FamilyName::PathQ, 2),
            PathSpectrum::Q => (FamilyName::LoopQ, 1),
            PathSpectrum::QP => (FamilyName::LoopQp, 1),
            PathSpectrum::R => (FamilyName::LoopR, 1),
            PathSpectrum::RP => (FamilyName::LoopRp, 1),
        }
    }
}

impl FromStr for PathSpectrum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "P" => PathSpectrum::P,
            "P2" => PathSpectrum::P2,
            "Q" => PathSpectrum::Q,
            "QP" => PathSpectrum::QP,
            "R" => PathSpectrum::R,
            "RP" => PathSpectrum::RP,
            _ => return Err(Error::Unsupported(format!("path spectrum `{s}`"))),
        })
    }
}

/// The eigenvalue shift + scale * cos(num * pi / den).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CosineDescriptor {
    pub num: i64,
    pub den: i64,
    pub scale: i64,
    pub shift: i64,
}

impl CosineDescriptor {
    pub fn evaluate(&self, ctx: &mut RealCtx) -> BigFloat {
        let c = ctx.cos_pi(self.num, self.den);
        ctx.add(&ctx.int(self.shift), &ctx.mul(&ctx.int(self.scale), &c))
    }
}

impl fmt::Display for CosineDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift != 0 {
            write!(f, "{}{:+}", self.shift, self.scale)?;
        } else {
            write!(f, "{}", self.scale)?;
        }
        write!(f, "cos({}pi/{})", self.num, self.den)
    }
}

/// Eigenvalues of the path-like graph of order n as cosine descriptors.
pub fn path_like_spectra(id: PathSpectrum, n: i64) -> Result<Vec<CosineDescriptor>> {
    if n < 1 {
        return Err(Error::BadOrder { min: 1, got: n });
    }
    let d = |num, den, scale, shift| CosineDescriptor {
        num,
        den,
        scale,
        shift,
    };
    Ok((1..=n)
        .map(|k| match id {
            PathSpectrum::P => d(k, n + 1, 2, 0),
            PathSpectrum::P2 => d(k, n + 1, 4, 0),
            // 4cos^2(k pi/(2n+2)) = 2 + 2cos(k pi/(n+1)).
            PathSpectrum::Q => d(k, n + 1, 2, 2),
            PathSpectrum::QP => d(k, n + 1, 2, -2),
            // 4cos^2(k pi/(2n+1)) = 2 + 2cos(2k pi/(2n+1)).
            PathSpectrum::R => d(2 * k, 2 * n + 1, 2, 2),
            PathSpectrum::RP => d(2 * k, 2 * n + 1, -2, -2),
        })
        .collect())
}

/// Checks product(x - lambda) over the descriptors against the exact charpoly of the built
/// path; returns the largest coefficient distance.
pub fn check_path_spectrum(id: PathSpectrum, n: i64, bits: usize) -> Result<(bool, BigRational)> {
    let (name, q) = id.family();
    let g = build_path_family(name, n, BigRational::from_integer(q.into()))?;
    let exact = g.adjacency_matrix().charpoly_integer()?;
    let mut ctx = RealCtx::new(bits)?;
    let roots = path_like_spectra(id, n)?
        .iter()
        .map(|c| c.evaluate(&mut ctx))
        .collect();
    let (value, d, loss) = round_raw(&ctx, Raw::Roots { zeros: 0, roots })?;
    Ok((
        accepted(&d, bits, loss) && value == ExactValue::Polynomial(exact),
        d,
    ))
}

/// prod_{j=1}^{n} 2cos(j pi/(2n+1)); equals 1 exactly.
pub fn cosine_identity_product(n: i64, bits: usize) -> Result<BigRational> {
    let mut ctx = RealCtx::new(bits)?;
    let mut acc = ctx.int(1);
    for j in 1..=n {
        let c = ctx.two_cos(j, 2 * n + 1);
        acc = ctx.mul(&acc, &c);
    }
    to_rational(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_value(id: FormulaId, n: i64) -> BigInt {
        match eval_formula(id, n).unwrap().value {
            ExactValue::Integer(v) => v,
            other => panic!("{id} {n}: {other}"),
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(int_value(FormulaId::Eq2_5, 2), 1.into());
        assert_eq!(int_value(FormulaId::Eq2_5, 3), 4.into());
        assert_eq!(int_value(FormulaId::Eq4_7, 1), 2.into());
        assert_eq!(int_value(FormulaId::Eq6_3, 1), 32.into());
        assert_eq!(int_value(FormulaId::Eq5_4, 1), 2.into());
    }

    #[test]
    fn formulas_match_counts() {
        for id in FormulaId::ALL {
            for n in id.min_n()..=id.min_n() + 2 {
                let e = eval_formula(id, n).unwrap();
                let c = exact_counterpart(id, n).unwrap();
                assert_eq!(e.value, c, "{id} n={n}");
            }
        }
    }

    #[test]
    fn certificate_text() {
        let e = eval_formula(FormulaId::Eq2_5, 4).unwrap();
        let s = e.to_string();
        assert!(s.starts_with("VALUE "), "{s}");
        assert!(s.contains(" BITS 256"), "{s}");
    }

    #[test]
    fn tags_round_trip() {
        for id in FormulaId::ALL {
            assert_eq!(id.tag().parse::<FormulaId>().unwrap(), id);
        }
        assert!("EQ9_9".parse::<FormulaId>().is_err());
    }

    #[test]
    fn path_spectra() {
        for id in [
            PathSpectrum::P,
            PathSpectrum::P2,
            PathSpectrum::Q,
            PathSpectrum::QP,
            PathSpectrum::R,
            PathSpectrum::RP,
        ] {
            for n in 1..=6 {
                let (ok, d) = check_path_spectrum(id, n, 256).unwrap();
                assert!(ok, "{id:?} {n}");
                assert!(neg_log2(&d).is_none_or(|k| k >= 128));
            }
        }
        let p1 = path_like_spectra(PathSpectrum::P, 1).unwrap();
        assert_eq!(
            p1,
            vec![CosineDescriptor {
                num: 1,
                den: 2,
                scale: 2,
                shift: 0
            }]
        );
    }

    #[test]
    fn grid_spectrum_is_exact_multiset() {
        for n in 1..=5 {
            let e = eval_formula(FormulaId::Eq2_3GridSpectrum, n).unwrap();
            assert_eq!(
                e.value,
                exact_counterpart(FormulaId::Eq2_3GridSpectrum, n).unwrap()
            );
            assert!(e.certificate.distance_exponent().is_none_or(|k| k >= 128));
        }
    }

    #[test]
    fn cosine_identity() {
        for n in [1, 5, 20, 50] {
            let v = cosine_identity_product(n, 256).unwrap();
            let d = num_traits::Signed::abs(&(v - BigRational::one()));
            assert!(neg_log2(&d).is_none_or(|k| k >= 200), "n={n}");
        }
    }

    #[test]
    fn rational_prefactors() {
        // A~_1 carries weight-1/2 edges.
        let e = eval_formula(FormulaId::Eq5_1, 1).unwrap();
        assert_eq!(
            e.value,
            ExactValue::Rational(BigRational::new(3.into(), 2.into()))
        );
        assert!(eval_formula(FormulaId::Eq2_4, 1).is_err());
    }
}
