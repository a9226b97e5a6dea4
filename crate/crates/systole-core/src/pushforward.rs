//! Gysin pushforwards for Grassmannian bundles by localization, the primitive
//! power-sum coefficient and the Segre-class cross-check.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::char_classes::{ChernData, ClassError};
use crate::graded_ring::GradedClass;
use crate::num::{q, qpow, qr, Q};

/// Largest rank and degree handled.
pub const MAX_RANK: usize = 6;
pub const MAX_DEGREE: u32 = 6;

/// Sign relating `P^{1,r}_b` to the Segre class `s_b`, fixed at `(k, r, j) = (1, 2, 1)`
/// where the localization sum gives `-p_1` and `s_1 = -c_1 = -p_1`.
pub const SEGRE_SIGN: i32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PushforwardError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("localization sum for (k, r, j) = ({k}, {r}, {j}) left a nonzero remainder")]
    NonPolynomialResult { k: usize, r: usize, j: u32 },
    #[error("power sum p_{b} is not independent in {r} variables")]
    TooFewVariables { b: u32, r: usize },
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// Polynomial in `x_1..x_n` over the rationals, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPolynomial {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl SymmetricPolynomial {
    pub fn zero(nvars: usize) -> Self {
        SymmetricPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Q::one());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Q::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Total degree of the top term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    /// Invariance under the transpositions `(1 i)`, which generate the symmetric group.
    pub fn is_symmetric(&self) -> bool {
        (1..self.nvars).all(|i| {
            let mut swapped = Self::zero(self.nvars);
            for (e, c) in &self.terms {
                let mut f = e.clone();
                f.swap(0, i);
                swapped.add_term(f, c.clone());
            }
            swapped == *self
        })
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (xi, &k) in x.iter().zip(e) {
                    v *= qpow(xi, k);
                }
                v
            })
            .sum()
    }

    /// Exact quotient by `x_a - x_b`, `None` if the remainder is nonzero.
    pub fn divide_by_difference(&self, a: usize, b: usize) -> Option<Self> {
        // Group by the exponent of x_a; synthetic division top-down.
        let mut by_deg: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let d = rest[a];
            rest[a] = 0;
            by_deg.entry(d).or_insert_with(|| Self::zero(self.nvars)).add_term(rest, c.clone());
        }
        let top = match by_deg.keys().next_back() {
            Some(&t) => t,
            None => return Some(Self::zero(self.nvars)),
        };
        let xb = Self::variable(self.nvars, b);
        let mut quotient = Self::zero(self.nvars);
        let mut carry = Self::zero(self.nvars);
        for d in (0..=top).rev() {
            let coeff = by_deg.get(&d).cloned().unwrap_or_else(|| Self::zero(self.nvars));
            let current = coeff.add(&xb.mul(&carry));
            if d == 0 {
                return if current.is_zero() { Some(quotient) } else { None };
            }
            for (e, c) in &current.terms {
                let mut f = e.clone();
                f[a] = d - 1;
                quotient.add_term(f, c.clone());
            }
            carry = current;
        }
        unreachable!()
    }

    /// Elementary symmetric polynomial `e_k`.
    pub fn elementary(nvars: usize, k: usize) -> Self {
        let mut p = Self::zero(nvars);
        let mut idx: Vec<usize> = (0..k).collect();
        if k == 0 {
            return Self::constant(nvars, Q::one());
        }
        if k > nvars {
            return p;
        }
        loop {
            let mut e = vec![0; nvars];
            for &i in &idx {
                e[i] = 1;
            }
            p.add_term(e, Q::one());
            if !next_subset(&mut idx, nvars) {
                return p;
            }
        }
    }

    /// Power sum `p_k`.
    pub fn power_sum(nvars: usize, k: u32) -> Self {
        let mut p = Self::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = k;
            p.add_term(e, Q::one());
        }
        p
    }

    /// Coordinates in the elementary basis: `e`-exponent vector to coefficient.
    pub fn to_elementary(&self) -> Option<BTreeMap<Vec<u32>, Q>> {
        if !self.is_symmetric() {
            return None;
        }
        let n = self.nvars;
        let es: Vec<Self> = (1..=n).map(|k| Self::elementary(n, k)).collect();
        let mut rest = self.clone();
        let mut out = BTreeMap::new();
        while let Some((lead, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            // The lex-leading monomial of a symmetric polynomial has weakly decreasing exponents.
            let mut ee = vec![0u32; n];
            let mut product = Self::constant(n, Q::one());
            for i in 0..n {
                let next = if i + 1 < n { lead[i + 1] } else { 0 };
                let m = lead[i].checked_sub(next)?;
                ee[i] = m;
                product = product.mul(&es[i].pow(m));
            }
            rest = rest.sub(&product.scale(&c));
            *out.entry(ee).or_insert_with(Q::zero) += c;
        }
        Some(out)
    }
}

impl fmt::Display for SymmetricPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let body: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if body.is_empty() {
                write!(f, "{sep}{a}")?;
            } else if a.is_one() {
                write!(f, "{sep}{}", body.join("*"))?;
            } else {
                write!(f, "{sep}{a}*{}", body.join("*"))?;
            }
        }
        Ok(())
    }
}

fn next_subset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for l in i + 1..k {
                idx[l] = idx[l - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `P^{k,r}_j = sum_{|I|=k} (-sum_{i in I} x_i)^{q+j} / prod_{i in I, l not in I} (x_l - x_i)`
/// with `q = k(r-k)`, cleared against the full Vandermonde and divided exactly.
pub fn localization_pushforward(k: usize, r: usize, j: u32) -> Result<SymmetricPolynomial, PushforwardError> {
    if k == 0 || k >= r {
        return Err(PushforwardError::InvalidArgument(format!("need 1 <= k < r, got k = {k}, r = {r}")));
    }
    if r > MAX_RANK || j > MAX_DEGREE {
        return Err(PushforwardError::InvalidArgument(format!("need r <= {MAX_RANK} and j <= {MAX_DEGREE}")));
    }
    let qdim = (k * (r - k)) as u32;
    let diff = |a: usize, b: usize| SymmetricPolynomial::variable(r, a).sub(&SymmetricPolynomial::variable(r, b));
    let mut vandermonde = SymmetricPolynomial::constant(r, Q::one());
    for a in 0..r {
        for b in a + 1..r {
            vandermonde = vandermonde.mul(&diff(a, b));
        }
    }
    let fail = || PushforwardError::NonPolynomialResult { k, r, j };
    let mut numerator = SymmetricPolynomial::zero(r);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut sum = SymmetricPolynomial::zero(r);
        for &i in &idx {
            sum = sum.add(&SymmetricPolynomial::variable(r, i));
        }
        let top = sum.scale(&q(-1)).pow(qdim + j);
        // V / D_I by exact division, one linear factor (x_l - x_i) = -(x_i - x_l) at a time.
        let mut cofactor = vandermonde.clone();
        let mut negations = 0;
        for &i in &idx {
            for l in (0..r).filter(|l| !idx.contains(l)) {
                cofactor = cofactor.divide_by_difference(i, l).ok_or_else(fail)?;
                negations += 1;
            }
        }
        if negations % 2 == 1 {
            cofactor = cofactor.scale(&q(-1));
        }
        numerator = numerator.add(&top.mul(&cofactor));
        if !next_subset(&mut idx, r) {
            break;
        }
    }
    let mut result = numerator;
    for a in 0..r {
        for b in a + 1..r {
            result = result.divide_by_difference(a, b).ok_or_else(fail)?;
        }
    }
    if !result.is_homogeneous_of(j) || !result.is_symmetric() {
        return Err(fail());
    }
    Ok(result)
}

/// Coefficient of `p_b` in the power-sum expansion of a symmetric polynomial of degree `b`.
///
/// Every product `e_lambda` with two or more parts has no `p_b` term, and
/// `e_b = ... + (-1)^{b-1} p_b / b`.
pub fn power_sum_coefficient(f: &SymmetricPolynomial, b: u32) -> Result<Q, PushforwardError> {
    if (b as usize) > f.nvars || b == 0 {
        return Err(PushforwardError::TooFewVariables { b, r: f.nvars });
    }
    let elem = f
        .to_elementary()
        .ok_or_else(|| PushforwardError::InvalidArgument(String::from("polynomial is not symmetric")))?;
    let mut key = vec![0u32; f.nvars];
    key[b as usize - 1] = 1;
    let a = elem.get(&key).cloned().unwrap_or_else(Q::zero);
    let sign = if b % 2 == 1 { q(1) } else { q(-1) };
    Ok(a * sign / q(b as i64))
}

/// `[P^{k,r}_b]_prim`: coefficient of `p_b` once `p_1..p_{b-1}` vanish.
pub fn primitive_coefficient(k: usize, r: usize, b: u32) -> Result<Q, PushforwardError> {
    if b == 0 || b as usize > r {
        return Err(PushforwardError::TooFewVariables { b, r });
    }
    let p = localization_pushforward(k, r, b)?;
    power_sum_coefficient(&p, b)
}

/// `k ((r-k)/r)^b + (r-k) (-k/r)^b`, the predicted shape of the primitive coefficient.
pub fn primitive_bracket(k: usize, r: usize, b: u32) -> Q {
    let (k, r) = (k as i64, r as i64);
    q(k) * qpow(&qr(r - k, r), b) + q(r - k) * qpow(&qr(-k, r), b)
}

/// Primitive coefficient together with the proportionality constant, when the bracket is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveReport {
    pub coefficient: Q,
    pub bracket: Q,
    pub constant: Option<Q>,
}

pub fn primitive_report(k: usize, r: usize, b: u32) -> Result<PrimitiveReport, PushforwardError> {
    let coefficient = primitive_coefficient(k, r, b)?;
    let bracket = primitive_bracket(k, r, b);
    let constant = if bracket.is_zero() { None } else { Some(&coefficient / &bracket) };
    Ok(PrimitiveReport { coefficient, bracket, constant })
}

/// Segre class `s_b`: the degree-`2b` part of `c(E)^{-1}`.
pub fn segre_pushforward(chern: &ChernData, b: u32) -> GradedClass {
    chern.total.inverse().expect("total Chern class has constant term 1").component(2 * b)
}
