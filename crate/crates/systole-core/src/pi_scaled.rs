//! Exact values of the form `q * pi^k`.

use core::fmt;
use core::ops::{Div, Mul};

use num_traits::{One, Zero};

use crate::num::{q, Q};

/// `coefficient * pi^pi_exponent`, with the coefficient kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiScaled {
    pub coefficient: Q,
    pub pi_exponent: i32,
}

impl PiScaled {
    pub fn new(coefficient: Q, pi_exponent: i32) -> Self {
        PiScaled { coefficient, pi_exponent }
    }

    pub fn rational(coefficient: Q) -> Self {
        PiScaled::new(coefficient, 0)
    }

    pub fn pi_times(coefficient: Q) -> Self {
        PiScaled::new(coefficient, 1)
    }

    pub fn from_int(n: i64, pi_exponent: i32) -> Self {
        PiScaled::new(q(n), pi_exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn recip(&self) -> Self {
        PiScaled::new(self.coefficient.recip(), -self.pi_exponent)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut c = Q::one();
        for _ in 0..e {
            c *= &self.coefficient;
        }
        PiScaled::new(c, self.pi_exponent * e as i32)
    }

    /// Decimal approximation using a rational approximation of pi accurate to ~1e-50.
    pub fn approx_rational(&self) -> Q {
        let pi = pi_approx();
        let mut v = self.coefficient.clone();
        if self.pi_exponent >= 0 {
            for _ in 0..self.pi_exponent {
                v *= &pi;
            }
        } else {
            for _ in 0..(-self.pi_exponent) {
                v /= &pi;
            }
        }
        v
    }
}

/// Rational approximation of pi with 60 correct decimal digits.
pub fn pi_approx() -> Q {
    use num_bigint::BigInt;
    let digits = "3141592653589793238462643383279502884197169399375105820974944";
    let num: BigInt = digits.parse().expect("static digits");
    let den = num_traits::pow(BigInt::from(10), digits.len() - 1);
    Q::new(num, den)
}

impl Mul for &PiScaled {
    type Output = PiScaled;
    fn mul(self, rhs: &PiScaled) -> PiScaled {
        PiScaled::new(&self.coefficient * &rhs.coefficient, self.pi_exponent + rhs.pi_exponent)
    }
}

impl Div for &PiScaled {
    type Output = PiScaled;
    fn div(self, rhs: &PiScaled) -> PiScaled {
        PiScaled::new(&self.coefficient / &rhs.coefficient, self.pi_exponent - rhs.pi_exponent)
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_exponent == 0 || self.coefficient.is_zero() {
            return write!(f, "{}", self.coefficient);
        }
        if self.pi_exponent == 1 {
            write!(f, "{} * pi", self.coefficient)
        } else {
            write!(f, "{} * pi^{}", self.coefficient, self.pi_exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qr;
    use alloc::string::ToString;

    #[test]
    fn display_forms() {
        assert_eq!(PiScaled::from_int(48, 1).to_string(), "48 * pi");
        assert_eq!(PiScaled::new(qr(1, 6), 3).to_string(), "1/6 * pi^3");
        assert_eq!(PiScaled::from_int(24, 0).to_string(), "24");
    }

    #[test]
    fn arithmetic() {
        let a = PiScaled::from_int(8, 1);
        let b = PiScaled::from_int(24, 0);
        assert_eq!(&a / &b, PiScaled::new(qr(1, 3), 1));
        assert_eq!(a.recip().pi_exponent, -1);
        assert_eq!(PiScaled::from_int(2, 1).pow(3), PiScaled::from_int(8, 3));
    }
}
