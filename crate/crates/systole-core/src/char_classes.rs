//! Multiplicative sequences over a graded ring: power sums, the Â-class, the Todd
//! class, the Chern character and Whitney quotients.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::graded_ring::{GradedClass, RingError, RingHandle};
use crate::num::{factorial, q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Complex,
    Realified,
}

/// Rank and total Chern class `1 + c_1 + c_2 + ...` with `c_k` in degree `2k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernData {
    pub rank: u32,
    pub total: GradedClass,
    pub flavor: Flavor,
}

/// Power sums `p_1, ..., p_m` of the Chern roots, `p_k` in degree `2k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSums {
    pub p: Vec<GradedClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassError {
    #[error("the bundle must be complex")]
    NotComplex,
    #[error("divisor total class must have constant term 1")]
    DivisionInconsistent,
    #[error("invalid Chern data: {0}")]
    InvalidChernData(&'static str),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl ChernData {
    /// Validates `c_0 = 1` and that only even degrees occur.
    pub fn new(rank: u32, total: GradedClass, flavor: Flavor) -> Result<Self, ClassError> {
        if !total.constant_term().is_one() {
            return Err(ClassError::InvalidChernData("c_0 must equal 1"));
        }
        if total.degrees().iter().any(|d| d % 2 == 1) {
            return Err(ClassError::InvalidChernData("Chern classes live in even degrees"));
        }
        Ok(ChernData { rank, total, flavor })
    }

    pub fn trivial(ring: &RingHandle, rank: u32, flavor: Flavor) -> Self {
        ChernData { rank, total: GradedClass::one(ring), flavor }
    }

    /// Complex line bundle with first Chern class `x`.
    pub fn line_bundle(x: &GradedClass) -> Result<Self, ClassError> {
        if !x.is_homogeneous_of(2) {
            return Err(RingError::NotDegreeTwo.into());
        }
        let total = &GradedClass::one(x.ring()) + x;
        Ok(ChernData { rank: 1, total, flavor: Flavor::Complex })
    }

    pub fn ring(&self) -> &RingHandle {
        self.total.ring()
    }

    /// `c_k`, the degree-`2k` component.
    pub fn c(&self, k: u32) -> GradedClass {
        self.total.component(2 * k)
    }

    pub fn c1(&self) -> GradedClass {
        self.c(1)
    }

    /// Largest `k` with `2k` within the truncation.
    pub fn max_order(&self) -> u32 {
        self.ring().truncation() / 2
    }

    /// Whitney sum.
    pub fn direct_sum(&self, other: &ChernData) -> Result<ChernData, ClassError> {
        let total = crate::graded_ring::mul(&self.total, &other.total)?;
        let flavor = if self.flavor == Flavor::Complex && other.flavor == Flavor::Complex {
            Flavor::Complex
        } else {
            Flavor::Realified
        };
        Ok(ChernData { rank: self.rank + other.rank, total, flavor })
    }
}

/// Newton's identities `p_k = sum_{i<k} (-1)^{i-1} c_i p_{k-i} + (-1)^{k-1} k c_k`.
pub fn newton_power_sums(c: &ChernData) -> PowerSums {
    let m = c.max_order();
    let mut p: Vec<GradedClass> = Vec::with_capacity(m as usize);
    for k in 1..=m {
        let sign_k = if (k - 1) % 2 == 0 { q(1) } else { q(-1) };
        let mut acc = c.c(k).scale(&(sign_k * q(k as i64)));
        for i in 1..k {
            let sign = if (i - 1) % 2 == 0 { q(1) } else { q(-1) };
            let term = &c.c(i) * &p[(k - i - 1) as usize];
            acc = &acc + &term.scale(&sign);
        }
        p.push(acc);
    }
    PowerSums { p }
}

/// Inverse of Newton's identities: `k c_k = sum_{i=1}^k (-1)^{i-1} c_{k-i} p_i`.
pub fn chern_from_power_sums(rank: u32, ps: &PowerSums, ring: &RingHandle, flavor: Flavor) -> ChernData {
    let mut cs: Vec<GradedClass> = vec![GradedClass::one(ring)];
    for k in 1..=ps.p.len() {
        let mut acc = GradedClass::zero(ring);
        for i in 1..=k {
            let sign = if (i - 1) % 2 == 0 { q(1) } else { q(-1) };
            let term = &cs[k - i] * &ps.p[i - 1];
            acc = &acc + &term.scale(&sign);
        }
        cs.push(acc.scale(&q(k as i64).recip()));
    }
    let mut total = GradedClass::zero(ring);
    for ck in &cs {
        total = &total + ck;
    }
    ChernData { rank, total, flavor }
}

/// Truncated power series helpers on coefficient vectors `[a_0, a_1, ...]`.
pub mod series {
    use super::*;

    pub fn mul(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (i, x) in a.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// `1 / a` for `a_0 != 0`.
    pub fn inverse(a: &[Q], n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        let a0 = a[0].clone();
        out[0] = a0.recip();
        for k in 1..n {
            let mut s = Q::zero();
            for j in 1..=k {
                if let Some(aj) = a.get(j) {
                    s += aj * &out[k - j];
                }
            }
            out[k] = -s / &a0;
        }
        out
    }

    /// `log a` for `a_0 = 1`, via `(log a)' = a'/a`.
    pub fn log(a: &[Q], n: usize) -> Vec<Q> {
        let deriv: Vec<Q> = (1..n + 1).map(|k| a.get(k).cloned().unwrap_or_else(Q::zero) * q(k as i64)).collect();
        let ratio = mul(&deriv, &inverse(a, n), n);
        let mut out = vec![Q::zero(); n];
        for k in 1..n {
            out[k] = &ratio[k - 1] / q(k as i64);
        }
        out
    }

    /// Taylor coefficients of `(x/2)/sinh(x/2)` up to `x^(n-1)`.
    pub fn ahat_series(n: usize) -> Vec<Q> {
        let mut s = vec![Q::zero(); n];
        let mut k = 0usize;
        while 2 * k < n {
            // (x/2)^{2k} / (2k+1)!
            let mut two_pow = Q::one();
            for _ in 0..2 * k {
                two_pow *= q(2);
            }
            s[2 * k] = (factorial(2 * k as u32 + 1) * two_pow).recip();
            k += 1;
        }
        inverse(&s, n)
    }

    /// Taylor coefficients of `x/(1 - e^{-x})` up to `x^(n-1)`.
    pub fn todd_series(n: usize) -> Vec<Q> {
        let s: Vec<Q> = (0..n)
            .map(|k| {
                let sign = if k % 2 == 0 { q(1) } else { q(-1) };
                sign / factorial(k as u32 + 1)
            })
            .collect();
        inverse(&s, n)
    }
}

/// `exp(sum_k l_k p_k)` where `l` are the log-coefficients of a generating function.
fn multiplicative_class(c: &ChernData, log_coeffs: &[Q]) -> GradedClass {
    let ps = newton_power_sums(c);
    let mut exponent = GradedClass::zero(c.ring());
    for (k, p) in ps.p.iter().enumerate() {
        let coeff = &log_coeffs[k + 1];
        if !coeff.is_zero() {
            exponent = &exponent + &p.scale(coeff);
        }
    }
    exponent.exp_nilpotent()
}

/// Truncated Â-class.
pub fn a_hat(c: &ChernData) -> GradedClass {
    let n = c.max_order() as usize + 1;
    let logs = series::log(&series::ahat_series(n), n);
    multiplicative_class(c, &logs)
}

/// Truncated Todd class of a complex bundle.
pub fn todd(c: &ChernData) -> Result<GradedClass, ClassError> {
    if c.flavor != Flavor::Complex {
        return Err(ClassError::NotComplex);
    }
    let n = c.max_order() as usize + 1;
    let logs = series::log(&series::todd_series(n), n);
    Ok(multiplicative_class(c, &logs))
}

/// `rk + sum_k p_k / k!`.
pub fn chern_character(c: &ChernData) -> Result<GradedClass, ClassError> {
    if c.flavor != Flavor::Complex {
        return Err(ClassError::NotComplex);
    }
    let ps = newton_power_sums(c);
    let mut acc = GradedClass::constant(c.ring(), q(c.rank as i64));
    for (k, p) in ps.p.iter().enumerate() {
        acc = &acc + &p.scale(&factorial(k as u32 + 1).recip());
    }
    Ok(acc)
}

/// `c(ambient) / c(normal)` by truncated series division.
pub fn whitney_quotient(ambient: &ChernData, normal: &ChernData) -> Result<ChernData, ClassError> {
    if !normal.total.constant_term().is_one() {
        return Err(ClassError::DivisionInconsistent);
    }
    if normal.rank > ambient.rank {
        return Err(ClassError::InvalidChernData("normal rank exceeds ambient rank"));
    }
    let inv = normal.total.inverse().ok_or(ClassError::DivisionInconsistent)?;
    let total = crate::graded_ring::mul(&ambient.total, &inv)?;
    Ok(ChernData { rank: ambient.rank - normal.rank, total, flavor: ambient.flavor })
}
