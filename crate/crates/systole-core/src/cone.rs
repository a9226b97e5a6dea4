//! The volume functional `Phi` on nef cones of Picard rank at most two, nef
//! thresholds, projective-bundle profiles and contractions of multiprojective
//! complete intersections.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::catalog::{proj_bundle_over_curve, CatalogError, NefData, Space};
use crate::graded_ring::GradedClass;
use crate::num::{q, qpow, qr, simplest_between, Q};
use crate::upoly::UPoly;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("degenerate class: alpha^n = 0")]
    DegenerateClass,
    #[error("nef cone data is only available in Picard rank 1 or 2 for this family ({0})")]
    UnsupportedRank(String),
    #[error("class is not in the span of the nef basis")]
    NotInSpan,
    #[error("class is not in the interior of the nef cone")]
    NotAmple,
    #[error("invalid normalization: {0}")]
    InvalidNormalization(String),
    #[error("dimension {0} is below 3 (Lefschetz hypothesis)")]
    DimensionTooLow(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// `(c1 . alpha^{n-1})^n / (alpha^n)^{n-1}`.
pub fn phi(x: &Space, alpha: &GradedClass) -> Result<Q, ConeError> {
    let n = x.real_dim / 2;
    if x.real_dim % 2 == 1 || n == 0 {
        return Err(ConeError::InvalidArgument(String::from("Phi needs a complex manifold")));
    }
    let lower = alpha.pow(n - 1);
    let v = x.integrate(&(&lower * alpha))?;
    if v.is_zero() {
        return Err(ConeError::DegenerateClass);
    }
    let c = x.integrate(&(&x.c1()? * &lower))?;
    Ok(qpow(&c, n) / qpow(&v, n - 1))
}

/// Nef cone of a catalog space with explicit rays and extremal curves.
#[derive(Clone, Debug)]
pub struct ConeProblem {
    pub space: Space,
    pub nef: NefData,
}

impl ConeProblem {
    pub fn new(space: &Space) -> Result<Self, ConeError> {
        let nef = space.nef.clone().ok_or_else(|| ConeError::UnsupportedRank(space.name.clone()))?;
        if nef.basis.is_empty() || nef.basis.len() > 2 {
            return Err(ConeError::UnsupportedRank(space.name.clone()));
        }
        Ok(ConeProblem { space: space.clone(), nef })
    }

    pub fn rank(&self) -> usize {
        self.nef.basis.len()
    }

    /// `sum coords_i basis_i`.
    pub fn class_of(&self, coords: &[Q]) -> GradedClass {
        let ring = self.nef.basis[0].ring();
        let mut acc = GradedClass::zero(ring);
        for (b, c) in self.nef.basis.iter().zip(coords) {
            acc = &acc + &b.scale(c);
        }
        acc
    }

    /// Coordinates of a degree-2 class in the nef basis.
    pub fn coords(&self, alpha: &GradedClass) -> Result<Vec<Q>, ConeError> {
        let mut out = Vec::with_capacity(self.rank());
        for b in &self.nef.basis {
            let (m, c) = b.terms().iter().next().ok_or(ConeError::NotInSpan)?;
            out.push(alpha.coefficient(m) / c);
        }
        if &self.class_of(&out) != alpha {
            return Err(ConeError::NotInSpan);
        }
        Ok(out)
    }

    /// `D . C_j` for every extremal curve.
    fn curve_pairings(&self, coords: &[Q]) -> Vec<Q> {
        self.nef
            .curves
            .iter()
            .map(|c| coords.iter().zip(c).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Value of a supremum: exact, or an enclosure of an algebraic value.
#[derive(Clone, Debug, PartialEq)]
pub enum SupValue {
    Exact(Q),
    Enclosure { lo: Q, hi: Q },
}

impl SupValue {
    fn upper(&self) -> &Q {
        match self {
            SupValue::Exact(v) => v,
            SupValue::Enclosure { hi, .. } => hi,
        }
    }

    fn lower(&self) -> &Q {
        match self {
            SupValue::Exact(v) => v,
            SupValue::Enclosure { lo, .. } => lo,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiSup {
    Bounded {
        value: SupValue,
        /// Nef-basis coordinates of a maximizer (or of the limiting boundary class).
        argmax: Vec<Q>,
        /// False when the supremum is only approached at a boundary class.
        attained: bool,
    },
    /// `Phi` blows up towards the nef class `witness` with `witness^n = 0`.
    Unbounded { witness: Vec<Q>, witness_name: String },
}

/// Order of vanishing of `p` at `t0`.
fn vanishing_order(p: &UPoly, t0: &Q) -> usize {
    if p.is_zero() {
        return usize::MAX;
    }
    let shifted = p.compose(&UPoly::linear(t0.clone(), Q::one()));
    shifted.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0)
}

/// Coefficient of `s^d` in `p(t0 + sign * s)`.
fn local_coeff(p: &UPoly, t0: &Q, sign: i64, d: usize) -> Q {
    p.compose(&UPoly::linear(t0.clone(), q(sign))).coeff(d)
}

struct Candidate {
    value: SupValue,
    t: Q,
    attained: bool,
}

/// Interval enclosure of `C^n / V^{n-1}` on `[lo, hi]`, assuming `V > 0` there.
fn phi_enclosure(cp: &UPoly, vp: &UPoly, n: u32, lo: &Q, hi: &Q) -> (Q, Q) {
    let (c_lo, c_hi) = cp.range_on(lo, hi);
    let (v_lo, v_hi) = vp.range_on(lo, hi);
    let pow_range = |a: &Q, b: &Q, e: u32| -> (Q, Q) {
        let pa = qpow(a, e);
        let pb = qpow(b, e);
        if e % 2 == 0 && a.is_negative() && b.is_positive() {
            (Q::zero(), if pa > pb { pa } else { pb })
        } else if pa <= pb {
            (pa, pb)
        } else {
            (pb, pa)
        }
    };
    let (num_lo, num_hi) = pow_range(&c_lo, &c_hi, n);
    let (den_lo, den_hi) = pow_range(&v_lo, &v_hi, n - 1);
    let cands = [&num_lo / &den_lo, &num_lo / &den_hi, &num_hi / &den_lo, &num_hi / &den_hi];
    let mut mn = cands[0].clone();
    let mut mx = cands[0].clone();
    for c in &cands[1..] {
        if *c < mn {
            mn = c.clone();
        }
        if *c > mx {
            mx = c.clone();
        }
    }
    (mn, mx)
}

/// Bound on denominators of rational roots of `g`: the leading coefficient of its
/// primitive integer multiple.
fn rational_root_denominator_bound(g: &UPoly) -> Q {
    let mut l = num_bigint::BigInt::one();
    for c in g.coeffs() {
        l = num_integer::Integer::lcm(&l, c.denom());
    }
    (g.leading() * Q::from_integer(l)).abs()
}

/// Exact supremum of `Phi` over the nef cone.
pub fn phi_sup(problem: &ConeProblem) -> Result<PhiSup, ConeError> {
    let x = &problem.space;
    let n = x.real_dim / 2;
    if problem.rank() == 1 {
        let ray = problem.nef.rays[0].clone();
        let v = phi(x, &problem.class_of(&ray))?;
        return Ok(PhiSup::Bounded { value: SupValue::Exact(v), argmax: ray, attained: true });
    }
    let r0 = &problem.nef.rays[0];
    let r1 = &problem.nef.rays[1];
    let point = |t: &Q| -> Vec<Q> {
        r0.iter().zip(r1).map(|(a, b)| (Q::one() - t) * a + t * b).collect()
    };
    // C(t) = c1 . alpha(t)^{n-1} and V(t) = alpha(t)^n through exact interpolation.
    let c1 = x.c1()?;
    let mut c_pts = Vec::new();
    let mut v_pts = Vec::new();
    for i in 0..=n {
        let t = q(i as i64);
        let a = problem.class_of(&point(&t));
        let lower = a.pow(n - 1);
        c_pts.push((t.clone(), x.integrate(&(&c1 * &lower))?));
        v_pts.push((t, x.integrate(&(&lower * &a))?));
    }
    let cp = UPoly::interpolate(&c_pts);
    let vp = UPoly::interpolate(&v_pts);
    let phi_at = |t: &Q| qpow(&cp.eval(t), n) / qpow(&vp.eval(t), n - 1);

    let mut cands: Vec<Candidate> = Vec::new();
    for (t0, sign, ray, name) in [
        (Q::zero(), 1i64, r0, &problem.nef.ray_names[0]),
        (Q::one(), -1i64, r1, &problem.nef.ray_names[1]),
    ] {
        if !vp.eval(&t0).is_zero() {
            cands.push(Candidate { value: SupValue::Exact(phi_at(&t0)), t: t0, attained: true });
            continue;
        }
        let dv = vanishing_order(&vp, &t0);
        let dc = vanishing_order(&cp, &t0);
        if dc == usize::MAX {
            cands.push(Candidate { value: SupValue::Exact(Q::zero()), t: t0, attained: false });
            continue;
        }
        let lead_c = local_coeff(&cp, &t0, sign, dc);
        let lead_v = local_coeff(&vp, &t0, sign, dv);
        let exponent = n as i64 * dc as i64 - (n as i64 - 1) * dv as i64;
        let lead = qpow(&lead_c, n) / qpow(&lead_v, n - 1);
        if exponent < 0 && lead.is_positive() {
            return Ok(PhiSup::Unbounded { witness: ray.clone(), witness_name: name.clone() });
        }
        let limit = if exponent == 0 { lead } else { Q::zero() };
        cands.push(Candidate { value: SupValue::Exact(limit), t: t0, attained: false });
    }

    // Interior critical points: zeros of C and of n C' V - (n - 1) C V'.
    let zero = Q::zero();
    let one = Q::one();
    for (lo, hi) in cp.isolate_roots(&zero, &one) {
        let t = (&lo + &hi) * qr(1, 2);
        cands.push(Candidate { value: SupValue::Exact(Q::zero()), t, attained: true });
    }
    let g = cp
        .derivative()
        .mul(&vp)
        .scale(&q(n as i64))
        .sub(&cp.mul(&vp.derivative()).scale(&q(n as i64 - 1)));
    if !g.is_zero() {
        let den_bound = rational_root_denominator_bound(&g);
        let sep = (&den_bound * &den_bound * q(2)).recip();
        for (lo, hi) in g.isolate_roots(&zero, &one) {
            let (a, b) = g.refine_root(&lo, &hi, &sep);
            let s = if a == b { a.clone() } else { simplest_between(&a, &b) };
            if g.eval(&s).is_zero() {
                cands.push(Candidate { value: SupValue::Exact(phi_at(&s)), t: s, attained: true });
            } else {
                let width = Q::new(1.into(), num_bigint::BigInt::from(10).pow(40));
                let (a, b) = g.refine_root(&a, &b, &width);
                let (elo, ehi) = phi_enclosure(&cp, &vp, n, &a, &b);
                cands.push(Candidate {
                    value: SupValue::Enclosure { lo: elo, hi: ehi },
                    t: (&a + &b) * qr(1, 2),
                    attained: true,
                });
            }
        }
    }

    let best = cands
        .into_iter()
        .max_by(|a, b| a.value.upper().cmp(b.value.upper()))
        .expect("endpoints always yield candidates");
    Ok(PhiSup::Bounded { argmax: point(&best.t), value: best.value, attained: best.attained })
}

/// Compares two sup values conservatively, returning `None` when enclosures overlap.
pub fn sup_le(a: &SupValue, b: &SupValue) -> Option<bool> {
    if a.upper() <= b.lower() {
        Some(true)
    } else if a.lower() > b.upper() {
        Some(false)
    } else {
        None
    }
}

/// Nef threshold `r(alpha) = inf { t > 0 : K + t alpha nef }`.
pub fn nef_threshold(problem: &ConeProblem, alpha: &GradedClass) -> Result<Q, ConeError> {
    let a = problem.coords(alpha)?;
    let k = problem.coords(&problem.space.c1()?)?;
    let ac = problem.curve_pairings(&a);
    let kc = problem.curve_pairings(&k);
    let mut r = Q::zero();
    for (ai, ki) in ac.iter().zip(&kc) {
        if !ai.is_positive() {
            return Err(ConeError::NotAmple);
        }
        let t = ki / ai;
        if t > r {
            r = t;
        }
    }
    Ok(r)
}

/// `s(alpha) = c1 . alpha^{n-1} / alpha^n`, checked against `r(alpha)`.
pub fn s_alpha(problem: &ConeProblem, alpha: &GradedClass) -> Result<Q, ConeError> {
    let x = &problem.space;
    let n = x.real_dim / 2;
    let lower = alpha.pow(n - 1);
    let v = x.integrate(&(&lower * alpha))?;
    if v.is_zero() {
        return Err(ConeError::DegenerateClass);
    }
    let s = x.integrate(&(&x.c1()? * &lower))? / v;
    let r = nef_threshold(problem, alpha)?;
    assert!(s <= r, "s(alpha) exceeds the nef threshold");
    Ok(s)
}

/// Holomorphic systole of `alpha = a xi + b f` on a projective bundle over a curve and
/// its product with `s(alpha)`.
pub fn bundle_systole_profile(degrees: &[i64], genus: u32, a: &Q, b: &Q) -> Result<(Q, Q), ConeError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(ConeError::InvalidArgument(String::from("a, b > 0 required")));
    }
    if genus == 0 && (degrees.first() != Some(&0) || degrees.windows(2).any(|w| w[0] > w[1])) {
        return Err(ConeError::InvalidNormalization(String::from("genus 0 needs 0 = d1 <= d2 <= ...")));
    }
    let x = proj_bundle_over_curve(degrees, genus)?;
    let alpha = &x.class("xi")?.scale(a) + &x.class("f")?.scale(b);
    let problem = ConeProblem::new(&x)?;
    let s = s_alpha(&problem, &alpha)?;
    let sys = if genus == 0 { if a < b { a.clone() } else { b.clone() } } else { a.clone() };
    let prod = &sys * &s;
    Ok((sys, prod))
}

/// Certified maximum of `min(1, x) (n - 1 + 2 / (e + n x))` over `x > 0`, `e >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSup {
    pub value: Q,
    /// Maximizer `(x, e)`.
    pub argmax: (Q, i64),
    /// Number of grid points checked against the closed form.
    pub grid_points: usize,
}

fn profile(n: u32, x: &Q, e: i64) -> Q {
    let m = if x < &Q::one() { x.clone() } else { Q::one() };
    m * (q(n as i64 - 1) + q(2) / (q(e) + q(n as i64) * x))
}

/// On `x <= 1` the profile increases in `x`, on `x >= 1` it decreases, and it decreases
/// in `e`, so the maximum sits at `(1, 0)`. A rational grid sweep confirms the value.
pub fn bundle_profile_sup(n: u32) -> Result<ProfileSup, ConeError> {
    if n < 2 {
        return Err(ConeError::InvalidArgument(String::from("n >= 2 required")));
    }
    let value = q(n as i64 - 1) + qr(2, n as i64);
    let argmax = (Q::one(), 0i64);
    assert_eq!(profile(n, &argmax.0, argmax.1), value);
    let mut grid_points = 0;
    for e in 0..=12i64 {
        for k in 1..=64i64 {
            let x = qr(k, 16);
            let v = profile(n, &x, e);
            assert!(v <= value, "profile exceeds its closed-form maximum");
            grid_points += 1;
        }
    }
    Ok(ProfileSup { value, argmax, grid_points })
}

/// One coordinate projection of a multiprojective complete intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionInfo {
    pub factor: usize,
    pub ambient_dim: u32,
    pub degree_sum: u32,
    /// Coefficient of `H_i` in `-K_X`.
    pub anticanonical_coeff: i64,
    pub k_negative: bool,
    pub fiber_dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionReport {
    pub projections: Vec<ProjectionInfo>,
    pub fano: bool,
    /// Largest admissible systole order `min_i (N_i - r)`.
    pub max_order: i64,
}

pub fn multiproj_contractions(ambient: &[u32], degrees: &[Vec<u32>]) -> Result<ContractionReport, ConeError> {
    let r = degrees.len();
    if ambient.is_empty() || degrees.iter().any(|row| row.len() != ambient.len()) {
        return Err(ConeError::InvalidArgument(String::from("degree rows must match the ambient factors")));
    }
    let total: u32 = ambient.iter().sum();
    let dim = total as i64 - r as i64;
    if dim < 3 {
        return Err(ConeError::DimensionTooLow(dim.max(0) as u32));
    }
    let projections: Vec<ProjectionInfo> = ambient
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let s: u32 = degrees.iter().map(|row| row[i]).sum();
            ProjectionInfo {
                factor: i,
                ambient_dim: n,
                degree_sum: s,
                anticanonical_coeff: n as i64 + 1 - s as i64,
                k_negative: s <= n,
                fiber_dim: n as i64 - r as i64,
            }
        })
        .collect();
    let fano = projections.iter().all(|p| p.k_negative);
    let max_order = projections.iter().map(|p| p.fiber_dim).min().unwrap_or(0);
    Ok(ContractionReport { projections, fano, max_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use alloc::vec;

    #[test]
    fn phi_on_projective_space() {
        for n in 1..5 {
            let x = projective_space(n).unwrap();
            let h = x.class("H").unwrap();
            assert_eq!(phi(&x, &h).unwrap(), qpow(&q(n as i64 + 1), n));
            assert_eq!(phi(&x, &h.scale(&q(7))).unwrap(), qpow(&q(n as i64 + 1), n));
            let p = ConeProblem::new(&x).unwrap();
            match phi_sup(&p).unwrap() {
                PhiSup::Bounded { value, .. } => assert_eq!(value, SupValue::Exact(qpow(&q(n as i64 + 1), n))),
                other => panic!("{:?}", other),
            }
        }
    }

    #[test]
    fn blowup_phi_and_sup() {
        let x = blowup_point(3).unwrap();
        let a = &x.class("H").unwrap().scale(&q(2)) - &x.class("E").unwrap();
        assert_eq!(phi(&x, &a).unwrap(), q(56));
        let p = ConeProblem::new(&x).unwrap();
        match phi_sup(&p).unwrap() {
            PhiSup::Unbounded { witness, witness_name } => {
                assert_eq!(witness, vec![q(1), q(-1)]);
                assert_eq!(witness_name, "H - E");
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn thresholds_on_product() {
        let x = product(&projective_space(1).unwrap(), &projective_space(1).unwrap()).unwrap();
        let p = ConeProblem::new(&x).unwrap();
        let a = &x.class("H1").unwrap() + &x.class("H2").unwrap().scale(&q(2));
        assert_eq!(nef_threshold(&p, &a).unwrap(), q(2));
        assert_eq!(s_alpha(&p, &a).unwrap(), qr(3, 2));
        assert_eq!(nef_threshold(&p, &a.scale(&q(2))).unwrap(), q(1));
    }

    #[test]
    fn bundle_profiles() {
        assert_eq!(bundle_systole_profile(&[0, 2], 0, &q(1), &q(1)).unwrap().1, qr(3, 2));
        for n in 2..6 {
            let degs = vec![0i64; n];
            let (_, v) = bundle_systole_profile(&degs, 0, &q(1), &q(1)).unwrap();
            assert_eq!(v, q(n as i64 - 1) + qr(2, n as i64));
            let (_, w) = bundle_systole_profile(&degs, 1, &q(1), &q(3)).unwrap();
            assert_eq!(w, q(n as i64 - 1));
        }
        assert_eq!(bundle_profile_sup(3).unwrap().value, qr(8, 3));
        assert!(bundle_systole_profile(&[1, 0], 0, &q(1), &q(1)).is_err());
    }

    #[test]
    fn contractions() {
        let r = multiproj_contractions(&[3, 3], &[vec![2, 2]]).unwrap();
        assert!(r.fano);
        assert!(r.projections.iter().all(|p| p.k_negative && p.fiber_dim == 2));
        let r = multiproj_contractions(&[3, 2], &[vec![4, 1]]).unwrap();
        assert!(!r.projections[0].k_negative);
        assert!(!r.fano);
        assert!(matches!(multiproj_contractions(&[1, 2], &[vec![1, 1]]), Err(ConeError::DimensionTooLow(_))));
    }
}
