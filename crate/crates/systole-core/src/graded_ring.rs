//! Truncated graded-commutative rings over the rationals.
//!
//! A ring is given by generators with real degrees and parities, exponent caps,
//! rewrite rules `g^k -> polynomial` and `g*h -> 0`, a truncation degree and a
//! rational pairing on top-degree normal-form monomials. Every raw monomial up to
//! the truncation is reduced once at construction; products afterwards are table
//! lookups.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::num::{factorial, q, Q};

/// Exponent vector, one entry per generator.
pub type Monomial = Vec<u32>;

/// Upper bound on rewrite steps for a single monomial.
pub const REWRITE_STEP_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    /// Real cohomological degree.
    pub degree: u32,
    pub parity: Parity,
}

impl Generator {
    pub fn new(name: &str, degree: u32, parity: Parity) -> Self {
        Generator { name: String::from(name), degree, parity }
    }

    pub fn even(name: &str, degree: u32) -> Self {
        Generator::new(name, degree, Parity::Even)
    }

    pub fn odd(name: &str, degree: u32) -> Self {
        Generator::new(name, degree, Parity::Odd)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `g^exponent -> replacement`.
    Power { generator: usize, exponent: u32, replacement: Vec<(Monomial, Q)> },
    /// `g_a * g_b -> 0`.
    ZeroProduct { a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingPresentation {
    pub generators: Vec<Generator>,
    /// Total real dimension; anything of higher degree is discarded.
    pub truncation: u32,
    /// `caps[i] = Some(c)` means `g_i^(c+1) = 0`. Odd generators always have cap 1.
    pub caps: Vec<Option<u32>>,
    pub rules: Vec<Rule>,
    /// Values of the fundamental-class pairing on top-degree normal-form monomials.
    pub pairing: Vec<(Monomial, Q)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("rewrite rules did not terminate within {0} steps")]
    NonTerminatingRewrite(usize),
    #[error("invalid ring presentation: {0}")]
    InvalidPresentation(String),
    #[error("classes belong to different rings")]
    RingMismatch,
    #[error("class is not homogeneous of degree 2")]
    NotDegreeTwo,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

/// A validated ring with its precomputed normal-form table.
#[derive(Debug)]
pub struct Ring {
    presentation: RingPresentation,
    normal_forms: BTreeMap<Monomial, Vec<(Monomial, Q)>>,
    pairing: BTreeMap<Monomial, Q>,
}

pub type RingHandle = Arc<Ring>;

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        self.presentation == other.presentation
    }
}

/// Validates a presentation and reduces every raw monomial up to the truncation.
pub fn make_ring(mut presentation: RingPresentation) -> Result<RingHandle, RingError> {
    let ngen = presentation.generators.len();
    let bad = |msg: String| Err(RingError::InvalidPresentation(msg));
    if presentation.caps.len() != ngen {
        return bad(format!("expected {} exponent caps, got {}", ngen, presentation.caps.len()));
    }
    for (i, g) in presentation.generators.iter().enumerate() {
        if g.degree == 0 {
            return bad(format!("generator {} has degree 0", g.name));
        }
        let expected = if g.degree % 2 == 0 { Parity::Even } else { Parity::Odd };
        if g.parity != expected {
            return bad(format!("generator {} has degree {} but parity {:?}", g.name, g.degree, g.parity));
        }
        if g.parity == Parity::Odd {
            match presentation.caps[i] {
                None => presentation.caps[i] = Some(1),
                Some(1) => {}
                Some(c) => return bad(format!("odd generator {} must be square-zero, cap {} given", g.name, c)),
            }
        }
    }
    let degree_of = |m: &Monomial| -> u32 {
        m.iter().zip(&presentation.generators).map(|(e, g)| e * g.degree).sum()
    };
    for rule in &presentation.rules {
        match rule {
            Rule::Power { generator, exponent, replacement } => {
                let Some(g) = presentation.generators.get(*generator) else {
                    return bad(format!("rule refers to generator index {}", generator));
                };
                if g.parity == Parity::Odd {
                    return bad(format!("power rule on odd generator {}", g.name));
                }
                if *exponent == 0 {
                    return bad(String::from("power rule with exponent 0"));
                }
                let lhs_deg = exponent * g.degree;
                for (m, c) in replacement {
                    if m.len() != ngen {
                        return bad(String::from("replacement monomial has wrong length"));
                    }
                    if c.is_zero() {
                        return bad(String::from("replacement term with zero coefficient"));
                    }
                    let d = degree_of(m);
                    if d != lhs_deg {
                        return bad(format!(
                            "rule {}^{} changes degree from {} to {}",
                            g.name, exponent, lhs_deg, d
                        ));
                    }
                }
            }
            Rule::ZeroProduct { a, b } => {
                if *a >= ngen || *b >= ngen || a == b {
                    return bad(format!("zero-product rule on generators {} and {}", a, b));
                }
            }
        }
    }

    let mut ring = Ring {
        presentation,
        normal_forms: BTreeMap::new(),
        pairing: BTreeMap::new(),
    };
    let raw = ring.raw_monomials();
    for m in raw {
        let nf = ring.reduce(&m)?;
        ring.normal_forms.insert(m, nf);
    }

    let top = ring.presentation.truncation;
    let mut any_nonzero = false;
    let entries = ring.presentation.pairing.clone();
    for (m, v) in entries {
        if m.len() != ngen {
            return bad(String::from("pairing monomial has wrong length"));
        }
        if ring.degree(&m) != top {
            return bad(format!("pairing assigned to monomial of degree {} below top {}", ring.degree(&m), top));
        }
        let nf = ring.normal_forms.get(&m).cloned().unwrap_or_default();
        if nf.len() != 1 || nf[0].0 != m || !nf[0].1.is_one() {
            return bad(String::from("pairing assigned to a monomial that is not in normal form"));
        }
        if !v.is_zero() {
            any_nonzero = true;
            ring.pairing.insert(m, v);
        }
    }
    if !any_nonzero {
        return bad(String::from("pairing vanishes on every top-degree monomial"));
    }
    Ok(Arc::new(ring))
}

impl Ring {
    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn generators(&self) -> &[Generator] {
        &self.presentation.generators
    }

    pub fn truncation(&self) -> u32 {
        self.presentation.truncation
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.presentation.generators.iter().position(|g| g.name == name)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.iter().zip(&self.presentation.generators).map(|(e, g)| e * g.degree).sum()
    }

    /// Number of monomials in normal form, grouped by degree.
    pub fn graded_dimensions(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for (m, nf) in &self.normal_forms {
            if nf.len() == 1 && nf[0].0 == *m && nf[0].1.is_one() {
                *out.entry(self.degree(m)).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn pairing(&self) -> &BTreeMap<Monomial, Q> {
        &self.pairing
    }

    /// Every exponent vector with total degree at most the truncation.
    fn raw_monomials(&self) -> Vec<Monomial> {
        let gens = &self.presentation.generators;
        let top = self.presentation.truncation;
        let mut out = Vec::new();
        let mut cur = vec![0u32; gens.len()];
        fn rec(i: usize, budget: u32, gens: &[Generator], cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if i == gens.len() {
                out.push(cur.clone());
                return;
            }
            let max = budget / gens[i].degree;
            for e in 0..=max {
                cur[i] = e;
                rec(i + 1, budget - e * gens[i].degree, gens, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, top, gens, &mut cur, &mut out);
        out
    }

    /// Sign from reordering the product `m1 * m2` into generator order.
    fn koszul_sign(&self, m1: &Monomial, m2: &Monomial) -> bool {
        let gens = &self.presentation.generators;
        let mut odd = 0u32;
        for j in 0..gens.len() {
            if gens[j].parity != Parity::Odd || m2[j] == 0 {
                continue;
            }
            for i in (j + 1)..gens.len() {
                if gens[i].parity == Parity::Odd {
                    odd += m1[i] * m2[j];
                }
            }
        }
        odd % 2 == 1
    }

    fn reduce(&self, m: &Monomial) -> Result<Vec<(Monomial, Q)>, RingError> {
        let p = &self.presentation;
        let mut out: BTreeMap<Monomial, Q> = BTreeMap::new();
        let mut work: Vec<(Monomial, Q)> = vec![(m.clone(), Q::one())];
        let mut steps = 0usize;
        'outer: while let Some((mono, c)) = work.pop() {
            steps += 1;
            if steps > REWRITE_STEP_LIMIT {
                return Err(RingError::NonTerminatingRewrite(REWRITE_STEP_LIMIT));
            }
            if self.degree(&mono) > p.truncation {
                continue;
            }
            for (i, cap) in p.caps.iter().enumerate() {
                if let Some(cap) = cap {
                    if mono[i] > *cap {
                        continue 'outer;
                    }
                }
            }
            for rule in &p.rules {
                match rule {
                    Rule::ZeroProduct { a, b } => {
                        if mono[*a] > 0 && mono[*b] > 0 {
                            continue 'outer;
                        }
                    }
                    Rule::Power { generator, exponent, replacement } => {
                        if mono[*generator] >= *exponent {
                            let mut rest = mono.clone();
                            rest[*generator] -= exponent;
                            for (r, rc) in replacement {
                                let neg = self.koszul_sign(r, &rest);
                                let prod: Monomial = r.iter().zip(&rest).map(|(x, y)| x + y).collect();
                                let coeff = if neg { -(&c * rc) } else { &c * rc };
                                work.push((prod, coeff));
                            }
                            continue 'outer;
                        }
                    }
                }
            }
            let e = out.entry(mono).or_insert_with(Q::zero);
            *e += c;
        }
        Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    fn monomial_name(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (e, g) in m.iter().zip(&self.presentation.generators) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        parts.join("*")
    }
}

/// An element of a ring, stored as normal-form monomials with nonzero coefficients.
#[derive(Clone, Debug)]
pub struct GradedClass {
    ring: RingHandle,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &GradedClass) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

fn same_ring(a: &RingHandle, b: &RingHandle) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GradedClass {
    pub fn zero(ring: &RingHandle) -> Self {
        GradedClass { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &RingHandle, c: Q) -> Self {
        let mut out = GradedClass::zero(ring);
        if !c.is_zero() {
            out.terms.insert(vec![0; ring.generators().len()], c);
        }
        out
    }

    pub fn one(ring: &RingHandle) -> Self {
        GradedClass::constant(ring, Q::one())
    }

    /// The class of a raw monomial (reduced to normal form).
    pub fn monomial(ring: &RingHandle, m: &[u32], c: Q) -> Self {
        let mut out = GradedClass::zero(ring);
        if ring.degree(&m.to_vec()) > ring.truncation() || c.is_zero() {
            return out;
        }
        if let Some(nf) = ring.normal_forms.get(m) {
            for (mono, v) in nf {
                out.add_term(mono.clone(), v * &c);
            }
        }
        out
    }

    pub fn generator(ring: &RingHandle, name: &str) -> Result<Self, RingError> {
        let i = ring.generator_index(name).ok_or_else(|| RingError::UnknownGenerator(String::from(name)))?;
        let mut m = vec![0; ring.generators().len()];
        m[i] = 1;
        Ok(GradedClass::monomial(ring, &m, Q::one()))
    }

    pub fn generator_at(ring: &RingHandle, i: usize) -> Self {
        let mut m = vec![0; ring.generators().len()];
        m[i] = 1;
        GradedClass::monomial(ring, &m, Q::one())
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coefficient(&vec![0; self.ring.generators().len()])
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check(&self, other: &GradedClass) -> Result<(), RingError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &GradedClass) -> Result<GradedClass, RingError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &GradedClass) -> Result<GradedClass, RingError> {
        self.try_add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Q) -> GradedClass {
        let mut out = GradedClass::zero(&self.ring);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    /// Degrees of the terms present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(|m| self.ring.degree(m)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| self.ring.degree(m) == d)
    }

    /// Component of the given real degree.
    pub fn component(&self, d: u32) -> GradedClass {
        let mut out = GradedClass::zero(&self.ring);
        for (m, c) in &self.terms {
            if self.ring.degree(m) == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> GradedClass {
        let mut acc = GradedClass::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pairing with the fundamental class: only top-degree terms contribute.
    pub fn integrate(&self) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            if let Some(v) = self.ring.pairing.get(m) {
                acc += c * v;
            }
        }
        acc
    }

    /// Transports the class along a map of generator indices into another ring.
    /// `map[i]` is the index in `target` of generator `i`.
    pub fn transport(&self, target: &RingHandle, map: &[usize]) -> GradedClass {
        let mut out = GradedClass::zero(target);
        let n = target.generators().len();
        for (m, c) in &self.terms {
            let mut tm = vec![0u32; n];
            for (i, e) in m.iter().enumerate() {
                tm[map[i]] += e;
            }
            let piece = GradedClass::monomial(target, &tm, c.clone());
            out = &out + &piece;
        }
        out
    }

    /// `exp(self)` for a class with vanishing constant term (hence nilpotent).
    pub fn exp_nilpotent(&self) -> GradedClass {
        assert!(self.constant_term().is_zero(), "exp_nilpotent needs zero constant term");
        let mut acc = GradedClass::one(&self.ring);
        let mut power = GradedClass::one(&self.ring);
        let mut k = 1u32;
        loop {
            power = &power * self;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power.scale(&factorial(k).recip());
            k += 1;
        }
        acc
    }

    /// Multiplicative inverse of a class with constant term 1... or any nonzero constant term.
    pub fn inverse(&self) -> Option<GradedClass> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        let unit = self.scale(&c0.recip());
        let nil = &unit - &GradedClass::one(&self.ring);
        // 1/(1+y) = sum (-y)^k
        let neg = nil.scale(&q(-1));
        let mut acc = GradedClass::one(&self.ring);
        let mut power = GradedClass::one(&self.ring);
        loop {
            power = &power * &neg;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Some(acc.scale(&c0.recip()))
    }

    /// `log(self)` for a class with constant term 1.
    pub fn log_unipotent(&self) -> Option<GradedClass> {
        if !self.constant_term().is_one() {
            return None;
        }
        let y = self - &GradedClass::one(&self.ring);
        let mut acc = GradedClass::zero(&self.ring);
        let mut power = GradedClass::one(&self.ring);
        let mut k = 1i64;
        loop {
            power = &power * &y;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { q(1) } else { q(-1) };
            acc = &acc + &power.scale(&(sign / q(k)));
            k += 1;
        }
        Some(acc)
    }
}

/// Koszul-signed product in normal form; errors when the rings differ.
pub fn mul(a: &GradedClass, b: &GradedClass) -> Result<GradedClass, RingError> {
    a.check(b)?;
    let ring = &a.ring;
    let top = ring.truncation();
    let mut out = GradedClass::zero(ring);
    for (m1, c1) in &a.terms {
        let d1 = ring.degree(m1);
        for (m2, c2) in &b.terms {
            if d1 + ring.degree(m2) > top {
                continue;
            }
            let neg = ring.koszul_sign(m1, m2);
            let raw: Monomial = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
            let coeff = if neg { -(c1 * c2) } else { c1 * c2 };
            if let Some(nf) = ring.normal_forms.get(&raw) {
                for (m, v) in nf {
                    out.add_term(m.clone(), v * &coeff);
                }
            }
        }
    }
    Ok(out)
}

/// Pairing of a class with the fundamental class.
pub fn integrate(a: &GradedClass) -> Q {
    a.integrate()
}

/// `sum x^k / k!` for a homogeneous degree-2 class.
pub fn exp_class(x: &GradedClass) -> Result<GradedClass, RingError> {
    if !x.is_homogeneous_of(2) {
        return Err(RingError::NotDegreeTwo);
    }
    Ok(x.exp_nilpotent())
}

impl Mul for &GradedClass {
    type Output = GradedClass;
    /// Panics if the operands live in different rings; use [`mul`] to get an error instead.
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        mul(self, rhs).expect("ring mismatch in product")
    }
}

impl Add for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.try_add(rhs).expect("ring mismatch in sum")
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self.try_sub(rhs).expect("ring mismatch in difference")
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        self.scale(&q(-1))
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut items: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            self.ring.degree(a.0).cmp(&self.ring.degree(b.0)).then_with(|| b.0.cmp(a.0))
        });
        let mut first = true;
        for (m, c) in items {
            let name = self.ring.monomial_name(m);
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                f.write_str(&name)?;
            } else {
                write!(f, "{}*{}", a, name)?;
            }
        }
        Ok(())
    }
}
