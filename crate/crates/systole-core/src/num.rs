//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::{Integer};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` in lowest terms. Panics on `d == 0`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qbig(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Q::from_integer(acc)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `x^e` for a non-negative exponent.
pub fn qpow(x: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Integer value of `x` if it is integral and fits in `i64`.
pub fn as_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// `floor(sqrt(x))` for `x >= 0`.
pub fn floor_sqrt(x: &Q) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    x.floor().to_integer().sqrt()
}

/// `floor(x)` as a big integer.
pub fn floor_int(x: &Q) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil_int(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

/// Nearest integer, ties rounded towards positive infinity.
pub fn round_half_up(x: &Q) -> BigInt {
    (x + qr(1, 2)).floor().to_integer()
}

/// The rational with smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Q, hi: &Q) -> Q {
    debug_assert!(lo <= hi);
    let fl = floor_int(lo);
    if Q::from_integer(fl.clone()) == *lo {
        return lo.clone();
    }
    if Q::from_integer(fl.clone() + 1) <= *hi {
        return Q::from_integer(fl + 1);
    }
    // Both endpoints share the integer part `fl`; recurse on reciprocals.
    let base = Q::from_integer(fl);
    let lo_frac = lo - &base;
    let hi_frac = hi - &base;
    let inner = simplest_between(&hi_frac.recip(), &lo_frac.recip());
    base + inner.recip()
}

/// Greatest common divisor of big integers, non-negative.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Approximate decimal rendering with `digits` fractional digits (rounded half away from zero).
pub fn to_decimal_string(x: &Q, digits: usize) -> alloc::string::String {
    use alloc::format;
    use alloc::string::ToString;
    let neg = x.is_negative();
    let ax = x.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (ax * Q::from_integer(scale.clone()) + qr(1, 2)).floor().to_integer();
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let mut s = alloc::string::String::new();
    if neg && !(int_part.is_zero() && frac_part.is_zero()) {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        s.push('.');
        for _ in frac.len()..digits {
            s.push('0');
        }
        s.push_str(&format!("{}", frac));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&qr(1, 3), &qr(1, 2)), qr(1, 2));
        assert_eq!(simplest_between(&qr(31, 100), &qr(34, 100)), qr(1, 3));
        assert_eq!(simplest_between(&qr(-7, 3), &qr(-2, 1)), q(-2));
        assert_eq!(simplest_between(&qr(5, 2), &qr(5, 2)), qr(5, 2));
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal_string(&qr(2, 3), 4), "0.6667");
        assert_eq!(to_decimal_string(&qr(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal_string(&q(12), 0), "12");
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), q(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(floor_sqrt(&qr(50, 3)), BigInt::from(4));
    }
}
