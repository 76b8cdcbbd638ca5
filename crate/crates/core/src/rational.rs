//! Small exact-rational helpers shared by the series and checker modules.

use num::{BigInt, BigRational, One, Rational64};

use crate::error::{Error, Result};

pub fn big(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

pub fn big_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Generalized binomial coefficient `top (top-1) ... (top-j+1) / j!` for rational `top`.
pub fn binomial(top: &BigRational, j: u64) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..j {
        num *= top - big_int(i as i64);
    }
    num / BigRational::from_integer(factorial(j))
}

/// Numerator of `q` over the denominator `order`, failing when `order * q` is not integral.
pub fn numerator_over(q: Rational64, order: u32) -> Result<i64> {
    let scaled = q * Rational64::from_integer(order as i64);
    if !scaled.is_integer() {
        return Err(Error::Precondition(format!(
            "{q} is not a multiple of 1/{order}"
        )));
    }
    Ok(scaled.to_integer())
}

pub fn from_numerator(num: i64, order: u32) -> Rational64 {
    Rational64::new(num, order as i64)
}

/// Reduced fraction without a trailing `/1`.
pub fn fmt_ratio(num: i64, order: u32) -> String {
    let q = from_numerator(num, order);
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
