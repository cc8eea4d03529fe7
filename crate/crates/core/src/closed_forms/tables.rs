//! Reference tables: the holed-square matching counts in factored form and the factored
//! characteristic polynomials of the small cubical grids in dimensions three and four.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::IntPolynomial;

/// Odd prime factors p of M(H_n) = 2^n * (prod p)^2, for n = 1..12.
pub const CENSUS_FACTORS: [&[&str]; 12] = [
    &[],
    &["7"],
    &["97"],
    &["6121"],
    &["31", "113", "271"],
    &["592442159"],
    &["7417", "132605129"],
    &["4481", "8513", "9929", "16361"],
    &["4639", "23357676333902111"],
    &["7", "73", "191", "479", "51151", "2905610745223"],
    &["1033", "1049", "1663", "166151", "4241286739685449"],
    &["41", "137", "7057", "20992575527970355281835400921"],
];

/// The tabulated value of M(H_n).
pub fn encoded_census_value(n: i64) -> Result<BigInt> {
    if !(1..=12).contains(&n) {
        return Err(Error::NotEncoded(format!("census order {n}")));
    }
    let mut odd = BigInt::from(1);
    for p in CENSUS_FACTORS[(n - 1) as usize] {
        odd *= p
            .parse::<BigInt>()
            .map_err(|_| Error::NotEncoded(format!("census factor {p}")))?;
    }
    Ok(BigInt::from(2).pow(n as u32) * &odd * &odd)
}

/// A factored polynomial: outer factors times (inner factors)^power, each with a multiplicity.
struct Factored {
    outer: &'static [(&'static str, u32)],
    inner: &'static [(&'static str, u32)],
    power: u32,
}

const D3: [Factored; 5] = [
    Factored {
        outer: &[("x", 1)],
        inner: &[],
        power: 3,
    },
    Factored {
        outer: &[("x-3", 1), ("x+3", 1)],
        inner: &[("x-1", 1), ("x+1", 1)],
        power: 3,
    },
    Factored {
        outer: &[("x", 1), ("x^2-18", 1)],
        inner: &[("x", 2), ("x^2-8", 1), ("x^2-2", 2)],
        power: 3,
    },
    Factored {
        outer: &[("x^2-3x-9", 1), ("x^2+3x-9", 1)],
        inner: &[
            ("x^2-3x+1", 1),
            ("x^2+3x+1", 1),
            ("x^2-x-11", 1),
            ("x^2+x-11", 1),
            ("x^2-x-1", 3),
            ("x^2+x-1", 3),
        ],
        power: 3,
    },
    // As tabulated; the inner bracket has degree 36 where 40 is needed (see the n = 5 test).
    Factored {
        outer: &[("x", 1), ("x-3", 1), ("x+3", 1), ("x^2-27", 1)],
        inner: &[
            ("x-2", 1),
            ("x+2", 1),
            ("x^2-12", 1),
            ("x^2-4x+1", 1),
            ("x^2+4x+1", 1),
            ("x^2-2x-11", 1),
            ("x^2+2x-11", 1),
            ("x^2-2x-2", 2),
            ("x^2+2x-2", 2),
            ("x-1", 4),
            ("x+1", 4),
            ("x^2-3", 4),
        ],
        power: 3,
    },
];

const D4: [Factored; 5] = [
    Factored {
        outer: &[("x", 1)],
        inner: &[],
        power: 4,
    },
    Factored {
        outer: &[("x", 2), ("x-4", 1), ("x+4", 1)],
        inner: &[("x", 1), ("x-2", 1), ("x+2", 1)],
        power: 4,
    },
    Factored {
        outer: &[("x", 3), ("x^2-32", 1), ("x^2-8", 2)],
        inner: &[("x", 4), ("x^2-18", 1), ("x^2-8", 2), ("x^2-2", 4)],
        power: 4,
    },
    Factored {
        outer: &[
            ("x", 4),
            ("x-2", 2),
            ("x+2", 2),
            ("x^2-4x-16", 1),
            ("x^2+4x-16", 1),
            ("x^2-20", 2),
        ],
        inner: &[
            ("x", 8),
            ("x-2", 1),
            ("x+2", 1),
            ("x^2-20", 1),
            ("x^2-4x-1", 1),
            ("x^2+4x-1", 1),
            ("x^2-2x-19", 1),
            ("x^2+2x-19", 1),
            ("x^2-2x-4", 4),
            ("x^2+2x-4", 4),
            ("x-1", 6),
            ("x+1", 6),
            ("x^2-5", 6),
        ],
        power: 4,
    },
    Factored {
        outer: &[
            ("x", 5),
            ("x-4", 1),
            ("x+4", 1),
            ("x^2-48", 1),
            ("x-2", 2),
            ("x+2", 2),
            ("x^2-12", 2),
            ("x^2-4x-8", 2),
            ("x^2+4x-8", 2),
        ],
        inner: &[
            ("x", 14),
            ("x-3", 1),
            ("x+3", 1),
            ("x^2-6x+6", 1),
            ("x^2+6x+6", 1),
            ("x^2-2x-26", 1),
            ("x^2+2x-26", 1),
            ("x^2-27", 1),
            ("x^2-4x-8", 1),
            ("x^2+4x-8", 1),
            ("x^2-4x+1", 3),
            ("x^2+4x+1", 3),
            ("x^2-2x-11", 3),
            ("x^2+2x-11", 3),
            ("x-2", 5),
            ("x+2", 5),
            ("x^2-12", 5),
            ("x^2-2x-2", 9),
            ("x^2+2x-2", 9),
            ("x-1", 10),
            ("x+1", 10),
            ("x^2-3", 10),
        ],
        power: 4,
    },
];

/// Expands the tabulated factored charpoly of the d-dimensional grid of side n.
pub fn encoded_highdim_charpoly(d: usize, n: i64) -> Result<IntPolynomial> {
    let table = match d {
        3 => &D3,
        4 => &D4,
        _ => return Err(Error::NotEncoded(format!("dimension {d}"))),
    };
    if !(1..=5).contains(&n) {
        return Err(Error::NotEncoded(format!("dimension {d} side {n}")));
    }
    let f = &table[(n - 1) as usize];
    let mut out = IntPolynomial::one();
    for (text, m) in f.outer {
        out = &out * &IntPolynomial::parse_compact(text)?.pow(*m);
    }
    for (text, m) in f.inner {
        out = &out * &IntPolynomial::parse_compact(text)?.pow(*m * f.power);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_small() {
        assert_eq!(encoded_census_value(1).unwrap(), BigInt::from(2));
        assert_eq!(encoded_census_value(2).unwrap(), BigInt::from(196));
        assert_eq!(encoded_census_value(3).unwrap(), BigInt::from(75272));
        assert!(encoded_census_value(13).is_err());
    }

    #[test]
    fn degrees() {
        for n in 1..=5i64 {
            let d4 = encoded_highdim_charpoly(4, n).unwrap();
            assert_eq!(d4.degree(), Some(n.pow(4) as usize), "d=4 n={n}");
            assert!(d4.is_monic());
        }
        for n in 1..=4i64 {
            assert_eq!(
                encoded_highdim_charpoly(3, n).unwrap().degree(),
                Some(n.pow(3) as usize)
            );
        }
        // The tabulated fifth entry for d = 3 is short by degree 12.
        assert_eq!(encoded_highdim_charpoly(3, 5).unwrap().degree(), Some(113));
        assert!(encoded_highdim_charpoly(5, 2).is_err());
    }

    #[test]
    fn cube_of_side_two() {
        // (x-3)(x+3)(x-1)^3(x+1)^3
        let p = encoded_highdim_charpoly(3, 2).unwrap();
        assert_eq!(p.coeffs().len(), 9);
        assert_eq!(p.coeff(6), BigInt::from(-12));
    }
}
