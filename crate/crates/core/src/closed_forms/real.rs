//! Multi-precision reals for cosine products, with exact conversion back to rationals.

use std::collections::HashMap;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Evaluation context at a fixed binary precision; cosines of rational multiples of pi are
/// cached by reduced angle.
pub struct RealCtx {
    p: usize,
    consts: Consts,
    pi: BigFloat,
    cos_cache: HashMap<(i64, i64), BigFloat>,
}

impl RealCtx {
    pub fn new(bits: usize) -> Result<Self> {
        let mut consts = Consts::new().map_err(|e| Error::Certificate {
            bits,
            detail: format!("constant cache: {e:?}"),
        })?;
        let pi = consts.pi(bits, RM);
        Ok(RealCtx {
            p: bits,
            consts,
            pi,
            cos_cache: HashMap::new(),
        })
    }

    pub fn bits(&self) -> usize {
        self.p
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.p)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    /// cos(num * pi / den).
    pub fn cos_pi(&mut self, num: i64, den: i64) -> BigFloat {
        let g = num.gcd(&den).max(1);
        let key = (num / g, den / g);
        if let Some(v) = self.cos_cache.get(&key) {
            return v.clone();
        }
        let angle = self
            .pi
            .mul(&BigFloat::from_i64(key.0, self.p), self.p, RM)
            .div(&BigFloat::from_i64(key.1, self.p), self.p, RM);
        let v = angle.cos(self.p, RM, &mut self.consts);
        self.cos_cache.insert(key, v.clone());
        v
    }

    /// 2 cos(num * pi / den), an algebraic integer.
    pub fn two_cos(&mut self, num: i64, den: i64) -> BigFloat {
        let c = self.cos_pi(num, den);
        self.mul(&self.int(2), &c)
    }
}

/// Exact rational value of a finite float.
pub fn to_rational(x: &BigFloat) -> Result<BigRational> {
    if x.is_zero() {
        return Ok(BigRational::zero());
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().ok_or_else(|| Error::Certificate {
        bits: 0,
        detail: "non-finite intermediate value".into(),
    })?;
    let digits: Vec<u32> = words
        .iter()
        .flat_map(|&w| {
            // Words are u32 on 32-bit targets.
            #[allow(clippy::useless_conversion)]
            let w = u64::from(w);
            if WORD_BIT_SIZE == 64 {
                vec![w as u32, (w >> 32) as u32]
            } else {
                vec![w as u32]
            }
        })
        .collect();
    let mantissa = BigInt::from(BigUint::new(digits));
    let mantissa = if sign == Sign::Neg {
        -mantissa
    } else {
        mantissa
    };
    // Value is 0.m times 2^exp, with the mantissa filling all its words.
    let shift = exp as i64 - (words.len() * WORD_BIT_SIZE) as i64;
    let two = BigInt::from(2);
    Ok(if shift >= 0 {
        BigRational::from_integer(mantissa * two.pow(shift as u32))
    } else {
        BigRational::new(mantissa, two.pow((-shift) as u32))
    })
}

/// Nearest integer to `x` (ties away from zero) and the distance to it.
pub fn nearest_integer(x: &BigRational) -> (BigInt, BigRational) {
    let r = x.round();
    let d = (x - &r).abs();
    (r.to_integer(), d)
}

/// floor(-log2(d)) for 0 < d < 1, the exponent k in d <= 2^-k; None when d = 0.
pub fn neg_log2(d: &BigRational) -> Option<i64> {
    if d.is_zero() {
        return None;
    }
    let (n, m) = (d.numer().bits() as i64, d.denom().bits() as i64);
    let mut k = m - n - 1;
    // Adjust so that d <= 2^-k < 2d.
    let two = BigRational::from_integer(2.into());
    let pow = |k: i64| {
        if k >= 0 {
            BigRational::one() / two.pow(k as i32)
        } else {
            two.pow((-k) as i32)
        }
    };
    while d > &pow(k) {
        k -= 1;
    }
    while d <= &pow(k + 1) {
        k += 1;
    }
    Some(k)
}
