//! Exact-to-float conversions and small exact helpers shared by the other modules.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `num / den` as the nearest-ish `f64`, without overflowing on huge operands.
pub fn bigint_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let (a, b) = (num.abs(), den.abs());
    // scale so the integer quotient carries ~64 significant bits
    let shift = a.bits() as i64 - b.bits() as i64 - 64;
    let q = if shift > 0 {
        a / (b << shift as u64)
    } else {
        (a << (-shift) as u64) / b
    };
    let value = q.to_f64().expect("quotient fits in f64") * 2f64.powi(shift as i32);
    if negative {
        -value
    } else {
        value
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    bigint_ratio_to_f64(r.numer(), r.denom())
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    // running product stays integral: C(n-k+i, i) at step i
    (1..=k).fold(BigInt::one(), |acc, i| acc * (n - k + i) / i)
}

/// `(2l-1)!! = 1·3·5⋯(2l-1)`, the number of perfect matchings of `2l` points.
pub fn double_factorial_odd(l: u64) -> BigInt {
    (1..=l).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}
