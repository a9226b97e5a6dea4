//! Spin^c index polynomials, the length invariant and the closed-form curvature bounds.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::catalog::{product, CatalogError, Family, Space};
use crate::char_classes::{a_hat, todd, ClassError};
use crate::graded_ring::GradedClass;
use crate::num::{as_i64, factorial, q, Q};
use crate::pi_scaled::PiScaled;
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("odd-dimensional space needs a degree-1 class xi")]
    MissingOddClass,
    #[error("a primitive degree-2 class is required (b2 = 1)")]
    NoPrimitiveClass,
    #[error("spin^c class is not a multiple of the primitive class")]
    NotMultipleOfPrimitive,
    #[error("the index polynomial vanishes identically")]
    IndexVanishes,
    #[error("no nonvanishing index found within |q0 + 2a| <= {0}")]
    WindowExhausted(u32),
    #[error("b2 condition fails: {0}")]
    KunnethViolation(String),
    #[error("both factors are odd-dimensional")]
    ParityViolation,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("<A-hat> is nonzero: no metric of positive scalar curvature exists")]
    LichnerowiczObstruction,
    #[error("degenerate class: alpha^n = 0")]
    DegenerateClass,
    #[error("class must be homogeneous of degree 2")]
    NotDegreeTwo,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// `P(a) = <[X], xi . e^{a x} e^{c/2} A-hat(TX)>` as an exact polynomial in `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexPolynomial {
    pub poly: UPoly,
    /// `c = q0 * x` in rational cohomology.
    pub q0: i64,
}

impl IndexPolynomial {
    pub fn eval(&self, a: i64) -> Q {
        self.poly.eval_int(a)
    }
}

/// Result of the length search together with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Length {
    pub value: u32,
    /// Some `a` with `|q0 + 2a| = value` and `P(a) != 0`.
    pub witness: i64,
}

/// `<[X], Td(TX)>`.
pub fn todd_genus(x: &Space) -> Result<Q, IndexError> {
    let t = x.tangent()?;
    Ok(todd(t)?.integrate())
}

/// `xi . e^{c/2} A-hat`, with `xi = 1` in even dimension.
fn twisted_a_hat(x: &Space) -> Result<GradedClass, IndexError> {
    let ring = x.ring()?;
    let c = x.spin_c()?;
    let mut base = &c.scale(&Q::new(1.into(), 2.into())).exp_nilpotent() * &a_hat(x.tangent()?);
    if x.real_dim % 2 == 1 {
        let xi = x.odd_xi.as_ref().ok_or(IndexError::MissingOddClass)?;
        base = xi * &base;
    }
    debug_assert!(**base.ring() == **ring);
    Ok(base)
}

/// The scalar `q0` with `c = q0 * x`.
fn spin_c_multiple(x: &Space, prim: &GradedClass) -> Result<i64, IndexError> {
    let c = x.spin_c()?;
    let (m, coeff) = prim.terms().iter().next().ok_or(IndexError::NoPrimitiveClass)?;
    let ratio = c.coefficient(m) / coeff;
    if &prim.scale(&ratio) != c || !ratio.is_integer() {
        return Err(IndexError::NotMultipleOfPrimitive);
    }
    as_i64(&ratio).ok_or(IndexError::NotMultipleOfPrimitive)
}

pub fn index_polynomial(x: &Space) -> Result<IndexPolynomial, IndexError> {
    let prim = x.primitive_x.as_ref().ok_or(IndexError::NoPrimitiveClass)?;
    let base = twisted_a_hat(x)?;
    let q0 = spin_c_multiple(x, prim)?;
    let n = x.real_dim / 2;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut power = base;
    for k in 0..=n {
        coeffs.push(power.integrate() / factorial(k));
        power = &power * prim;
    }
    Ok(IndexPolynomial { poly: UPoly::new(coeffs), q0 })
}

/// Smallest `|q0 + 2a|` over integers `a` with `P(a) != 0`.
///
/// A value of zero is the Lichnerowicz obstruction and must not be read as a bound.
pub fn length(x: &Space) -> Result<Length, IndexError> {
    let p = index_polynomial(x)?;
    length_of(&p, x.real_dim / 2 + 1)
}

fn length_of(p: &IndexPolynomial, window: u32) -> Result<Length, IndexError> {
    if p.poly.is_zero() {
        return Err(IndexError::IndexVanishes);
    }
    let q0 = p.q0;
    let start = q0.rem_euclid(2) as u32;
    let mut m = start;
    while m <= window {
        // a with q0 + 2a = -m comes first so that the witness is canonical.
        for target in [-(m as i64), m as i64] {
            let a = (target - q0) / 2;
            if !p.eval(a).is_zero() {
                return Ok(Length { value: m, witness: a });
            }
        }
        m += 2;
    }
    Err(IndexError::WindowExhausted(window))
}

/// `<[N], eta . e^{c/2} A-hat(TN)>`, the factor condition for a second factor.
pub fn factor_index(n: &Space) -> Result<Q, IndexError> {
    Ok(twisted_a_hat(n)?.integrate())
}

/// `length(X x N)`, checked against `length(X)`.
pub fn product_length_bound(x: &Space, n: &Space) -> Result<Length, IndexError> {
    if x.b2 != Some(1) {
        return Err(IndexError::KunnethViolation(String::from("b2(X) = 1 required")));
    }
    if n.b2 != Some(0) {
        return Err(IndexError::KunnethViolation(String::from("b2(N) = 0 required")));
    }
    if x.real_dim % 2 == 1 && n.real_dim % 2 == 1 {
        return Err(IndexError::ParityViolation);
    }
    if factor_index(n)?.is_zero() {
        return Err(IndexError::PreconditionUnmet(String::from(
            "N needs a nonzero twisted A-hat index",
        )));
    }
    let lx = length(x)?;
    let m = product(x, n)?;
    let lm = length(&m)?;
    assert!(lm.value <= lx.value, "product length exceeds factor length");
    Ok(lm)
}

/// Which closed-form inequality to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `4 pi n (n + 1)` for Kahler manifolds.
    Kahler,
    /// `4 pi n^2` for Kahler manifolds other than projective space.
    KahlerNotProjective,
    /// `4 pi (n + floor(dim N / 2)) (n + 1)` for `X x N` with `b2 = 1`.
    ProductStable,
    /// `4 pi (n (n - 1) + 2)` for Kahler manifolds other than projective space and quadrics.
    KahlerNotProjectiveOrQuadric,
    /// `4 pi (n + floor(dim N / 2)) i_X` for manifolds diffeomorphic to Fano manifolds.
    FanoIndex,
    /// `4 pi n l(X)` from the length invariant.
    Length,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Kahler,
        BoundKind::KahlerNotProjective,
        BoundKind::ProductStable,
        BoundKind::KahlerNotProjectiveOrQuadric,
        BoundKind::FanoIndex,
        BoundKind::Length,
    ];
}

fn require(cond: bool, hypothesis: &str) -> Result<(), IndexError> {
    if cond {
        Ok(())
    } else {
        Err(IndexError::PreconditionUnmet(String::from(hypothesis)))
    }
}

fn four_pi(k: i64) -> PiScaled {
    PiScaled::from_int(4 * k, 1)
}

/// Right-hand side of the chosen inequality for `X x N` (`N = None` is a point).
pub fn systolic_bound(x: &Space, n: Option<&Space>, kind: BoundKind) -> Result<PiScaled, IndexError> {
    let nx = (x.real_dim / 2) as i64;
    let half_n = n.map_or(0, |s| (s.real_dim / 2) as i64);
    let kahler = x.real_dim % 2 == 0 && (x.is_complex() || x.ring.is_none());
    match kind {
        BoundKind::Kahler => {
            require(n.is_none(), "no second factor")?;
            require(kahler, "X Kahler")?;
            Ok(four_pi(nx * (nx + 1)))
        }
        BoundKind::KahlerNotProjective => {
            require(n.is_none(), "no second factor")?;
            require(kahler, "X Kahler")?;
            require(!matches!(x.family, Family::ProjectiveSpace { .. }), "X not biholomorphic to CP^n")?;
            Ok(four_pi(nx * nx))
        }
        BoundKind::KahlerNotProjectiveOrQuadric => {
            require(n.is_none(), "no second factor")?;
            require(kahler, "X Kahler")?;
            require(
                !matches!(x.family, Family::ProjectiveSpace { .. } | Family::Quadric { .. }),
                "X not biholomorphic to CP^n or Q^n",
            )?;
            Ok(four_pi(nx * (nx - 1) + 2))
        }
        BoundKind::ProductStable => {
            let b2n = n.map_or(Some(0), |s| s.b2);
            require(x.b2 == Some(1) && b2n == Some(0), "b2(X x N) = 1")?;
            require(
                !(x.real_dim % 2 == 1 && n.is_some_and(|s| s.real_dim % 2 == 1)),
                "X and N not both odd-dimensional",
            )?;
            let prim = x.primitive_x.as_ref().ok_or(IndexError::PreconditionUnmet(String::from(
                "X has a degree-2 class u with u^n != 0",
            )))?;
            let top = if x.real_dim % 2 == 1 {
                let xi = x.odd_xi.as_ref().ok_or(IndexError::PreconditionUnmet(String::from(
                    "odd-dimensional X carries xi with xi u^n != 0",
                )))?;
                (xi * &prim.pow(nx as u32)).integrate()
            } else {
                prim.pow(nx as u32).integrate()
            };
            require(!top.is_zero(), "X has a degree-2 class u with u^n != 0")?;
            if let Some(s) = n {
                require(!factor_index(s)?.is_zero(), "N has nonzero twisted A-hat index")?;
            }
            Ok(four_pi((nx + half_n) * (nx + 1)))
        }
        BoundKind::FanoIndex => {
            require(x.b2 == Some(1), "b2(X) = 1")?;
            let i = x.fano_index.ok_or(IndexError::PreconditionUnmet(String::from(
                "X diffeomorphic to a Fano manifold with known index",
            )))?;
            if let Some(s) = n {
                require(s.b2 == Some(0), "b2(N) = 0")?;
                require(!factor_index(s)?.is_zero(), "N has nonzero twisted A-hat index")?;
            }
            Ok(four_pi((nx + half_n) * i as i64))
        }
        BoundKind::Length => {
            require(n.is_none(), "no second factor")?;
            let l = length(x)?;
            if l.value == 0 {
                return Err(IndexError::LichnerowiczObstruction);
            }
            Ok(four_pi(nx * l.value as i64))
        }
    }
}

/// A degree-2 class times a symbolic scale, e.g. `pi * H`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledClass {
    pub scale: PiScaled,
    pub class: GradedClass,
}

impl ScaledClass {
    pub fn new(scale: PiScaled, class: GradedClass) -> Self {
        ScaledClass { scale, class }
    }

    pub fn plain(class: GradedClass) -> Self {
        ScaledClass { scale: PiScaled::rational(Q::one()), class }
    }
}

/// `(c1 . A^{n-1}, A^n)` for the ring part `A` of `alpha`.
fn curvature_pairings(x: &Space, alpha: &ScaledClass) -> Result<(Q, Q), IndexError> {
    if !alpha.class.is_homogeneous_of(2) || alpha.class.is_zero() {
        return Err(IndexError::NotDegreeTwo);
    }
    let n = x.real_dim / 2;
    let c1 = x.c1()?;
    let lower = alpha.class.pow(n - 1);
    let top = x.integrate(&(&lower * &alpha.class))?;
    if top.is_zero() {
        return Err(IndexError::DegenerateClass);
    }
    let mixed = x.integrate(&(&c1 * &lower))?;
    Ok((mixed, top))
}

/// Average scalar curvature `4 pi n (c1 . alpha^{n-1}) / alpha^n` of a Kahler class.
pub fn avg_scalar_curvature(x: &Space, alpha: &ScaledClass) -> Result<PiScaled, IndexError> {
    if alpha.scale.is_zero() {
        return Err(IndexError::DegenerateClass);
    }
    let n = (x.real_dim / 2) as i64;
    let (mixed, top) = curvature_pairings(x, alpha)?;
    let value = PiScaled::pi_times(q(4 * n) * mixed / top);
    Ok(&value / &alpha.scale)
}

/// `alpha^n / n!`.
pub fn volume(x: &Space, alpha: &ScaledClass) -> Result<PiScaled, IndexError> {
    let n = x.real_dim / 2;
    let (_, top) = curvature_pairings(x, alpha)?;
    if alpha.scale.is_zero() {
        return Err(IndexError::DegenerateClass);
    }
    Ok(&PiScaled::rational(top / factorial(n)) * &alpha.scale.pow(n))
}

/// `8 pi n^2 / R-bar(alpha)`.
pub fn gromov_width_bound(x: &Space, alpha: &ScaledClass) -> Result<PiScaled, IndexError> {
    let n = (x.real_dim / 2) as i64;
    let r = avg_scalar_curvature(x, alpha)?;
    if r.is_zero() {
        return Err(IndexError::PreconditionUnmet(String::from("positive total scalar curvature")));
    }
    Ok(&PiScaled::from_int(8 * n * n, 1) / &r)
}

/// `k -> <[X], e^{k L} Td(TX)>`.
pub fn hilbert_polynomial(x: &Space, l: &GradedClass) -> Result<UPoly, IndexError> {
    if !l.is_homogeneous_of(2) {
        return Err(IndexError::NotDegreeTwo);
    }
    let td = todd(x.tangent()?)?;
    let n = x.real_dim / 2;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut power = td;
    for k in 0..=n {
        coeffs.push(x.integrate(&power)? / factorial(k));
        power = &power * l;
    }
    Ok(UPoly::new(coeffs))
}

/// Renders a length certificate for reports.
pub fn describe_length(l: &Length, q0: i64) -> String {
    format!("l = {} (a = {}, q0 = {}, |q0 + 2a| = {})", l.value, l.witness, q0, (q0 + 2 * l.witness).abs())
}

/// `binom(n + a, n)` as a polynomial in `a`.
pub fn binomial_poly(n: u32) -> UPoly {
    let mut p = UPoly::constant(Q::one());
    for i in 1..=n {
        p = p.mul(&UPoly::linear(q(i as i64), Q::one()));
    }
    p.scale(&factorial(n).recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;

    #[test]
    fn todd_genus_projective() {
        for n in 1..6 {
            assert_eq!(todd_genus(&projective_space(n).unwrap()).unwrap(), q(1));
        }
    }

    #[test]
    fn index_polynomial_of_projective_space() {
        for n in 1..6 {
            let p = index_polynomial(&projective_space(n).unwrap()).unwrap();
            assert_eq!(p.poly, binomial_poly(n));
            assert_eq!(p.q0, n as i64 + 1);
        }
    }

    #[test]
    fn lengths() {
        for n in 1..6 {
            assert_eq!(length(&projective_space(n).unwrap()).unwrap().value, n + 1);
        }
        for n in 3..6 {
            assert_eq!(length(&quadric(n).unwrap()).unwrap().value, n);
        }
        assert_eq!(length(&hypersurface(3, 4).unwrap()).unwrap().value, 3);
    }

    #[test]
    fn bounds() {
        let cp3 = projective_space(3).unwrap();
        let s1 = circle().unwrap();
        let b = systolic_bound(&cp3, Some(&s1), BoundKind::ProductStable).unwrap();
        assert_eq!(b, PiScaled::from_int(48, 1));
        let q4 = quadric(4).unwrap();
        assert_eq!(systolic_bound(&q4, None, BoundKind::Length).unwrap(), PiScaled::from_int(64, 1));
        let x3 = hypersurface(3, 4).unwrap();
        assert_eq!(systolic_bound(&x3, None, BoundKind::FanoIndex).unwrap(), PiScaled::from_int(48, 1));
        assert!(systolic_bound(&cp3, None, BoundKind::KahlerNotProjective).is_err());
    }

    #[test]
    fn average_scalar_curvature() {
        let cp2 = projective_space(2).unwrap();
        let a = ScaledClass::new(PiScaled::pi_times(q(1)), cp2.class("H").unwrap());
        assert_eq!(avg_scalar_curvature(&cp2, &a).unwrap(), PiScaled::rational(q(24)));
        assert_eq!(volume(&cp2, &a).unwrap(), PiScaled::new(Q::new(1.into(), 2.into()), 2));
    }
}
