//! Randomized invariants.

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use systole_core::catalog::{self, Space};
use systole_core::char_classes::{chern_from_power_sums, todd, newton_power_sums, whitney_quotient, ChernData, Flavor};
use systole_core::cone::{nef_threshold, phi, s_alpha, ConeProblem};
use systole_core::graded_ring::{exp_class, mul, GradedClass};
use systole_core::index;
use systole_core::lattice::{self, Norm, NormedLattice};
use systole_core::num::{q, Q};
use systole_core::pushforward::localization_pushforward;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn spaces() -> Vec<Space> {
    vec![
        catalog::projective_space(3).unwrap(),
        catalog::quadric(3).unwrap(),
        catalog::blowup_point(3).unwrap(),
        catalog::product(&catalog::projective_space(1).unwrap(), &catalog::projective_space(2).unwrap()).unwrap(),
        catalog::proj_bundle_over_curve(&[0, 1, 2], 1).unwrap(),
    ]
}

/// Random class built from monomials with exponents up to 2 in each generator.
fn class_from(x: &Space, coeffs: &[(Vec<u32>, i64)]) -> GradedClass {
    let ring = x.ring().unwrap();
    let g = ring.generators().len();
    let mut acc = GradedClass::zero(ring);
    for (m, c) in coeffs {
        let m: Vec<u32> = m.iter().take(g).copied().chain(std::iter::repeat(0)).take(g).collect();
        acc = &acc + &GradedClass::monomial(ring, &m, q(*c));
    }
    acc
}

fn divisor(x: &Space, coeffs: &[i64]) -> GradedClass {
    let ring = x.ring().unwrap();
    let mut acc = GradedClass::zero(ring);
    for (i, c) in coeffs.iter().enumerate().take(ring.generators().len()) {
        acc = &acc + &GradedClass::generator_at(ring, i).scale(&q(*c));
    }
    acc
}

fn monomials() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), -4i64..=4), 1..5)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn ring_is_commutative_and_associative(i in 0usize..5, a in monomials(), b in monomials(), c in monomials()) {
        let x = &spaces()[i];
        let (a, b, c) = (class_from(x, &a), class_from(x, &b), class_from(x, &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn exponential_is_additive(i in 0usize..5, u in prop::collection::vec(-3i64..=3, 3), v in prop::collection::vec(-3i64..=3, 3)) {
        let x = &spaces()[i];
        let (u, v) = (divisor(x, &u), divisor(x, &v));
        let lhs = exp_class(&(&u + &v)).unwrap();
        let rhs = mul(&exp_class(&u).unwrap(), &exp_class(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chern_classes_round_trip(i in 0usize..5, rank in 1u32..=4, a in prop::collection::vec(-3i64..=3, 3), b in prop::collection::vec(-3i64..=3, 3)) {
        let x = &spaces()[i];
        let ring = x.ring().unwrap();
        let total = &(&GradedClass::one(ring) + &divisor(x, &a)) * &(&GradedClass::one(ring) + &divisor(x, &b));
        let c = ChernData::new(rank.max(2), total, Flavor::Complex).unwrap();
        let back = chern_from_power_sums(c.rank, &newton_power_sums(&c), ring, Flavor::Complex);
        prop_assert_eq!(back, c.clone());
        let n = ChernData::line_bundle(&divisor(x, &b)).unwrap();
        let ambient = ChernData::new(c.rank + 1, &c.total * &n.total, Flavor::Complex).unwrap();
        prop_assert_eq!(whitney_quotient(&ambient, &n).unwrap().total, c.total);
    }

    #[test]
    fn phi_and_thresholds_scale(a in 1i64..6, b in 1i64..6, k in 1i64..5) {
        let x = catalog::product(&catalog::projective_space(1).unwrap(), &catalog::projective_space(2).unwrap()).unwrap();
        let p = ConeProblem::new(&x).unwrap();
        let alpha = divisor(&x, &[a, b]);
        let scaled = alpha.scale(&q(k));
        prop_assert_eq!(phi(&x, &scaled).unwrap(), phi(&x, &alpha).unwrap());
        let r = nef_threshold(&p, &alpha).unwrap();
        prop_assert_eq!(nef_threshold(&p, &alpha.scale(&q(2))).unwrap(), &r / q(2));
        prop_assert!(s_alpha(&p, &alpha).unwrap() <= r);
    }

    #[test]
    fn twisting_preserves_length(i in 0usize..4, k in -3i64..=3) {
        let pool = [
            catalog::projective_space(3).unwrap(),
            catalog::quadric(4).unwrap(),
            catalog::hypersurface(3, 4).unwrap(),
            catalog::sphere(2).unwrap(),
        ];
        let x = &pool[i];
        let t = catalog::twist_spin_c(x, k).unwrap();
        prop_assert_eq!(index::length(&t).unwrap().value, index::length(x).unwrap().value);
    }

    #[test]
    fn hilbert_polynomial_matches_integration(i in 0usize..4, k in -8i64..=8) {
        let pool = [
            catalog::projective_space(4).unwrap(),
            catalog::quadric(3).unwrap(),
            catalog::blowup_point(2).unwrap(),
            catalog::hypersurface(3, 3).unwrap(),
        ];
        let x = &pool[i];
        let n = (x.real_dim / 2) as i64;
        prop_assume!(k.abs() <= 2 * n);
        let h = x.class("H").unwrap();
        let hp = index::hilbert_polynomial(x, &h).unwrap();
        let td = todd(x.tangent().unwrap()).unwrap();
        let direct = x.integrate(&(&exp_class(&h.scale(&q(k))).unwrap() * &td)).unwrap();
        prop_assert_eq!(hp.eval_int(k), direct);
    }

    #[test]
    fn pushforwards_are_symmetric(r in 2usize..=5, k in 1usize..5, j in 0u32..=3) {
        prop_assume!(k < r);
        let p = localization_pushforward(k, r, j).unwrap();
        prop_assert!(p.is_symmetric());
        prop_assert!(p.is_homogeneous_of(j));
    }
}

// ---------- lattices ----------

fn nonsingular(r: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, r), r)
        .prop_map(|rows| rows.into_iter().map(|row| row.into_iter().map(q).collect()).collect::<Vec<Vec<Q>>>())
        .prop_filter("singular", |m| !lattice::determinant(m).is_zero())
}

/// Unimodular matrix from a sequence of elementary column operations.
fn unimodular(r: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<Q>> {
    let mut u = lattice::identity(r);
    for &(i, j, c) in ops {
        let (i, j) = (i % r, j % r);
        if i == j {
            continue;
        }
        for row in u.iter_mut() {
            let v = &row[j] * q(c);
            row[i] += v;
        }
    }
    u
}

fn squared_minima(l: &NormedLattice) -> Vec<Q> {
    (1..=l.rank()).map(|j| lattice::successive_minima(l, j).unwrap().squared()).collect()
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn double_dual_is_original(b in (2usize..=4).prop_flat_map(nonsingular)) {
        let r = b.len();
        let l = NormedLattice::new(b, Norm::Euclidean(lattice::identity(r))).unwrap();
        let dd = lattice::dual_lattice(&lattice::dual_lattice(&l).unwrap()).unwrap();
        prop_assert_eq!(dd.lattice_gram(), l.lattice_gram());
        prop_assert_eq!(&dd.basis, &l.basis);
    }

    #[test]
    fn minima_ignore_basis_change(b in nonsingular(3), ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6)) {
        let l = NormedLattice::new(b.clone(), Norm::Euclidean(lattice::identity(3))).unwrap();
        let m = squared_minima(&l);
        let moved = lattice::mat_mul(&b, &unimodular(3, &ops));
        let l2 = NormedLattice::new(moved, Norm::Euclidean(lattice::identity(3))).unwrap();
        prop_assert_eq!(squared_minima(&l2), m.clone());
        prop_assert!(m.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn polytope_sandwich_is_tight(pts in prop::collection::vec(prop::collection::vec(-5i64..=5, 2), 2..5)) {
        let mut verts: Vec<Vec<Q>> = Vec::new();
        for p in &pts {
            let v: Vec<Q> = p.iter().map(|&x| q(x)).collect();
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            verts.push(v.iter().map(|x| -x).collect());
            verts.push(v);
        }
        let facets = lattice::polytope_facets(&verts, 2);
        prop_assume!(facets.is_ok());
        let facets = facets.unwrap();
        let sw = lattice::polytope_sandwich(&verts, &facets);
        let ginv = lattice::inverse(&sw.gram).unwrap();
        // Inscribed: the support function of E stays within every facet.
        for a in &facets {
            let s: Q = (0..2).map(|i| (0..2).map(|j| &a[i] * &ginv[i][j] * &a[j]).sum::<Q>()).sum();
            prop_assert!(s <= q(1));
        }
        let tol = q(2) * (q(1) + Q::new(1.into(), 1_000_000.into()));
        prop_assert!(sw.distortion_sq <= tol && sw.distortion_sq.is_positive());
    }
}
