//! Worked examples for every module, with hand-derived expected values.

use num_traits::{Signed, Zero};

use systole_core::catalog::{self, Space};
use systole_core::char_classes::{
    a_hat, chern_character, newton_power_sums, todd, whitney_quotient, ChernData, Flavor,
};
use systole_core::cone::{
    bundle_profile_sup, bundle_systole_profile, multiproj_contractions, nef_threshold, phi, phi_sup, s_alpha,
    ConeProblem, PhiSup,
};
use systole_core::graded_ring::{
    exp_class, make_ring, Generator, GradedClass, RingError, RingPresentation, Rule,
};
use systole_core::index::{self, BoundKind, ScaledClass};
use systole_core::lattice::{self, Norm, NormedLattice};
use systole_core::num::{factorial, q, qr, Q};
use systole_core::pi_scaled::PiScaled;
use systole_core::pushforward::{
    localization_pushforward, primitive_coefficient, segre_pushforward, SymmetricPolynomial,
};
use systole_core::upoly::UPoly;

fn cp(n: u32) -> Space {
    catalog::projective_space(n).unwrap()
}

fn cls(x: &Space, name: &str) -> GradedClass {
    x.class(name).unwrap()
}

fn one(x: &Space) -> GradedClass {
    GradedClass::one(x.ring().unwrap())
}

fn lin(x: &Space, terms: &[(&str, i64)]) -> GradedClass {
    let mut acc = GradedClass::zero(x.ring().unwrap());
    for (name, c) in terms {
        acc = &acc + &cls(x, name).scale(&q(*c));
    }
    acc
}

// ---------- graded rings ----------

#[test]
fn ring_presentations() {
    let r = cp(3);
    let dims = r.ring().unwrap().graded_dimensions();
    assert_eq!(dims.keys().copied().collect::<Vec<_>>(), vec![0, 2, 4, 6]);

    let odd = make_ring(RingPresentation {
        generators: vec![Generator::odd("xi", 1)],
        truncation: 1,
        caps: vec![None],
        rules: vec![],
        pairing: vec![(vec![1], q(1))],
    })
    .unwrap();
    let xi = GradedClass::generator(&odd, "xi").unwrap();
    assert!((&xi * &xi).is_zero());

    let bad = make_ring(RingPresentation {
        generators: vec![Generator::even("H", 2)],
        truncation: 8,
        caps: vec![None],
        rules: vec![Rule::Power { generator: 0, exponent: 3, replacement: vec![(vec![4], q(1))] }],
        pairing: vec![(vec![4], q(1))],
    });
    assert!(matches!(bad, Err(RingError::InvalidPresentation(_))));
}

#[test]
fn products_in_normal_form() {
    let x = cp(2);
    let h = cls(&x, "H");
    assert_eq!(&h * &h, GradedClass::monomial(x.ring().unwrap(), &[2], q(1)));

    let bl = catalog::blowup_point(2).unwrap();
    let l = lin(&bl, &[("H", 3), ("E", -1)]);
    // HE = 0 kills the cross term; E^2 pairs to -1, so the square integrates to 9 - 1.
    let want = &cls(&bl, "H").pow(2).scale(&q(9)) + &cls(&bl, "E").pow(2);
    assert_eq!(l.pow(2), want);
    assert_eq!(bl.integrate(&want).unwrap(), q(8));
}

#[test]
fn fundamental_class_pairings() {
    for n in 1..=5 {
        let x = cp(n);
        assert_eq!(x.integrate(&cls(&x, "H").pow(n)).unwrap(), q(1));
        let qn = catalog::quadric(n + 1).unwrap();
        // Bezout in the ambient: H^(n+1) . 2H on CP^(n+2).
        assert_eq!(qn.integrate(&cls(&qn, "H").pow(n + 1)).unwrap(), q(2));
    }
    let x = cp(3);
    assert_eq!(x.integrate(&cls(&x, "H")).unwrap(), q(0));
}

#[test]
fn exponential_examples() {
    let x = cp(2);
    let r = x.ring().unwrap();
    assert_eq!(exp_class(&GradedClass::zero(r)).unwrap(), one(&x));
    let h = cls(&x, "H");
    let want = &(&one(&x) + &h) + &h.pow(2).scale(&qr(1, 2));
    assert_eq!(exp_class(&h).unwrap(), want);
    assert_eq!(&exp_class(&h).unwrap() * &exp_class(&(-&h)).unwrap(), one(&x));
}

// ---------- characteristic classes ----------

#[test]
fn newton_examples() {
    // c = 1 + N alpha with alpha in degree 4 on CP^4.
    let x = cp(4);
    let alpha = cls(&x, "H").pow(2);
    let n = q(5);
    let c = ChernData::new(3, &one(&x) + &alpha.scale(&n), Flavor::Complex).unwrap();
    let ps = newton_power_sums(&c);
    assert!(ps.p[0].is_zero());
    assert_eq!(ps.p[1], alpha.scale(&(q(-2) * &n)));

    let trivial = ChernData::trivial(x.ring().unwrap(), 3, Flavor::Complex);
    assert!(newton_power_sums(&trivial).p.iter().all(|p| p.is_zero()));

    // Rank two on CP^2 x CP^2 with c1 = H1 + H2, c2 = H1 H2.
    let y = catalog::product(&cp(2), &cp(2)).unwrap();
    let (h1, h2) = (cls(&y, "H1"), cls(&y, "H2"));
    let c1 = &h1 + &h2;
    let c2 = &h1 * &h2;
    let c = ChernData::new(2, &(&one(&y) + &c1) + &c2, Flavor::Complex).unwrap();
    assert_eq!(newton_power_sums(&c).p[1], &c1.pow(2) - &c2.scale(&q(2)));
}

#[test]
fn a_hat_and_todd_of_line_bundles() {
    let x = cp(4);
    let h = cls(&x, "H");
    let l = ChernData::line_bundle(&h).unwrap();
    // (x/2)/sinh(x/2) = 1 - x^2/24 + 7 x^4/5760.
    let want = &(&one(&x) - &h.pow(2).scale(&qr(1, 24))) + &h.pow(4).scale(&qr(7, 5760));
    assert_eq!(a_hat(&l), want);
    // x/(1 - e^-x) = 1 + x/2 + x^2/12 - x^4/720.
    let want = &(&(&one(&x) + &h.scale(&qr(1, 2))) + &h.pow(2).scale(&qr(1, 12))) - &h.pow(4).scale(&qr(1, 720));
    assert_eq!(todd(&l).unwrap(), want);

    let trivial = ChernData::trivial(x.ring().unwrap(), 2, Flavor::Complex);
    assert_eq!(a_hat(&trivial), one(&x));
    assert_eq!(todd(&trivial).unwrap(), one(&x));

    let y = catalog::product(&cp(2), &cp(2)).unwrap();
    let l1 = ChernData::line_bundle(&cls(&y, "H1")).unwrap();
    let l2 = ChernData::line_bundle(&cls(&y, "H2")).unwrap();
    assert_eq!(a_hat(&l1.direct_sum(&l2).unwrap()), &a_hat(&l1) * &a_hat(&l2));

    let p1 = cp(1);
    assert_eq!(todd(p1.tangent().unwrap()).unwrap(), &one(&p1) + &cls(&p1, "H"));
}

#[test]
fn chern_character_examples() {
    let x = cp(3);
    let h = cls(&x, "H");
    let l = ChernData::line_bundle(&h).unwrap();
    assert_eq!(chern_character(&l).unwrap(), exp_class(&h).unwrap());

    let l2 = ChernData::line_bundle(&h.scale(&q(2))).unwrap();
    let sum = l.direct_sum(&l2).unwrap();
    assert_eq!(chern_character(&sum).unwrap(), &chern_character(&l).unwrap() + &chern_character(&l2).unwrap());

    // Alternating sum of e^{a v} with binomial weights equals (e^v - 1)^2.
    let plus = ChernData::line_bundle(&h.scale(&q(2))).unwrap().direct_sum(&ChernData::trivial(x.ring().unwrap(), 1, Flavor::Complex)).unwrap();
    let minus = l.direct_sum(&l).unwrap();
    let diff = &chern_character(&plus).unwrap() - &chern_character(&minus).unwrap();
    let e = &exp_class(&h).unwrap() - &one(&x);
    assert_eq!(diff, e.pow(2));
}

#[test]
fn whitney_quotients() {
    for n in 2..=5 {
        let x = catalog::quadric(n).unwrap();
        let h = cls(&x, "H");
        let ambient = ChernData::new(n + 1, (&one(&x) + &h).pow(n + 2), Flavor::Complex).unwrap();
        let normal = ChernData::line_bundle(&h.scale(&q(2))).unwrap();
        let t = whitney_quotient(&ambient, &normal).unwrap();
        assert_eq!(t.c1(), h.scale(&q(n as i64)));
        assert_eq!(t, *x.tangent().unwrap());
        let trivial = ChernData::trivial(x.ring().unwrap(), 0, Flavor::Complex);
        assert_eq!(whitney_quotient(&ambient, &trivial).unwrap().total, ambient.total);
    }
    let x3 = catalog::hypersurface(3, 3).unwrap();
    assert_eq!(x3.c1().unwrap(), cls(&x3, "H").scale(&q(2)));
}

// ---------- catalog ----------

#[test]
fn projective_spaces_and_quadrics() {
    assert_eq!(index::todd_genus(&cp(1)).unwrap(), q(1));
    let x = cp(3);
    assert_eq!(x.c1().unwrap(), cls(&x, "H").scale(&q(4)));
    assert!(catalog::projective_space(0).is_err());
    let q4 = catalog::quadric(4).unwrap();
    assert_eq!(q4.c1().unwrap(), cls(&q4, "H").scale(&q(4)));
    let q3 = catalog::quadric(3).unwrap();
    assert_eq!(index::todd_genus(&q3).unwrap(), q(1));
    assert_eq!(q3.integrate(&cls(&q3, "H").pow(3)).unwrap(), q(2));
}

#[test]
fn products_spheres_and_circles() {
    let p = catalog::product(&cp(1), &cp(1)).unwrap();
    assert_eq!(p.integrate(&(&cls(&p, "H1") * &cls(&p, "H2"))).unwrap(), q(1));

    let s1 = catalog::circle().unwrap();
    assert_eq!(s1.integrate(&cls(&s1, "xi")).unwrap(), q(1));
    let x = catalog::product(&cp(2), &s1).unwrap();
    assert_eq!(x.odd_xi, Some(cls(&x, "xi")));
    let ahat = a_hat(cp(2).tangent().unwrap()).transport(x.ring().unwrap(), &[0]);
    assert_eq!(a_hat(x.tangent().unwrap()), ahat);

    let y = catalog::product(&cp(2), &cp(3)).unwrap();
    assert_eq!(index::todd_genus(&y).unwrap(), q(1));

    let s2 = catalog::sphere(2).unwrap();
    assert_eq!(s2.b2, Some(1));
    assert_eq!(s2.primitive_x, Some(cls(&s2, "x")));
    assert_eq!(s2.integrate(&cls(&s2, "x")).unwrap(), q(1));
    let s4 = catalog::sphere(4).unwrap();
    assert_eq!(a_hat(s4.tangent().unwrap()), one(&s4));
}

#[test]
fn projective_bundles_over_curves() {
    // c1 . alpha^(n-1) = a^(n-2) [(n-1)(a e + n b) - (2g - 2) a] with n = 2, e = 0.
    let x = catalog::proj_bundle_over_curve(&[0, 0], 0).unwrap();
    for (a, b) in [(1, 1), (2, 3), (5, 1)] {
        let alpha = lin(&x, &[("xi", a), ("f", b)]);
        let got = x.integrate(&(&x.c1().unwrap() * &alpha)).unwrap();
        assert_eq!(got, q(2 * b + 2 * a));
    }
    let x = catalog::proj_bundle_over_curve(&[0, 0, 0], 0).unwrap();
    assert_eq!(x.integrate(&lin(&x, &[("xi", 1), ("f", 1)]).pow(3)).unwrap(), q(3));
    let x = catalog::proj_bundle_over_curve(&[0, 0, 0], 1).unwrap();
    let alpha = lin(&x, &[("xi", 1), ("f", 1)]);
    assert_eq!(x.integrate(&(&x.c1().unwrap() * &alpha.pow(2))).unwrap(), q(6));
}

#[test]
fn complete_intersection_examples() {
    let x3 = catalog::complete_intersection(&[vec![3]], &[4]).unwrap();
    assert_eq!(x3.c1().unwrap(), cls(&x3, "H").scale(&q(2)));
    assert_eq!(x3.integrate(&cls(&x3, "H").pow(3)).unwrap(), q(3));
    for n in 3..=6 {
        let x = catalog::projective_ci(&[2, 2], n).unwrap();
        assert_eq!(x.fano_index, Some(n - 1));
    }
    let x4 = catalog::hypersurface(4, 4).unwrap();
    assert_eq!(index::todd_genus(&x4).unwrap(), q(1));
    let x23 = catalog::projective_ci(&[2, 3], 3).unwrap();
    assert_eq!(index::todd_genus(&x23).unwrap(), q(1));
}

#[test]
fn point_blowups() {
    for n in 2..=5u32 {
        let x = catalog::blowup_point(n).unwrap();
        for (a, b) in [(3i64, 1i64), (2, 1), (5, 2)] {
            let l = lin(&x, &[("H", a), ("E", -b)]);
            let want = q(a.pow(n)) - q(b.pow(n));
            assert_eq!(x.integrate(&l.pow(n)).unwrap(), want);
        }
        assert!(x.integrate(&lin(&x, &[("H", 1), ("E", -1)]).pow(n)).unwrap().is_zero());
    }
    let x = catalog::blowup_point(2).unwrap();
    assert_eq!(x.integrate(&cls(&x, "E").pow(2)).unwrap(), q(-1));
}

#[test]
fn spin_c_twists() {
    let x = cp(3);
    assert_eq!(catalog::twist_spin_c(&x, 0).unwrap(), x);
    let p2 = cp(2);
    let t = catalog::twist_spin_c(&p2, -1).unwrap();
    assert_eq!(t.spin_c().unwrap(), &cls(&p2, "H"));
    let s2 = catalog::sphere(2).unwrap();
    let t = catalog::twist_spin_c(&s2, 1).unwrap();
    assert_eq!(t.spin_c().unwrap(), &cls(&s2, "x").scale(&q(2)));
}

// ---------- index engine ----------

fn binomial_poly(n: u32) -> UPoly {
    // binom(n + a, n) as a polynomial in a.
    let mut p = UPoly::constant(factorial(n).recip());
    for i in 1..=n as i64 {
        p = p.mul(&UPoly::linear(q(i), q(1)));
    }
    p
}

#[test]
fn todd_genera() {
    for n in 1..=8 {
        assert_eq!(index::todd_genus(&cp(n)).unwrap(), q(1));
    }
    let q2 = catalog::product(&cp(1), &cp(1)).unwrap();
    assert_eq!(index::todd_genus(&q2).unwrap(), q(1));
}

#[test]
fn index_polynomials() {
    for n in 1..=5 {
        let x = cp(n);
        let p = index::index_polynomial(&x).unwrap();
        assert_eq!(p.poly, binomial_poly(n));
        assert_eq!(p.eval(0), q(1));
        // Direct evaluation of chi(O(a)) at 2n + 2 points.
        let td = todd(x.tangent().unwrap()).unwrap();
        for a in -(n as i64) - 1..=n as i64 {
            let e = exp_class(&cls(&x, "H").scale(&q(a))).unwrap();
            assert_eq!(x.integrate(&(&e * &td)).unwrap(), p.eval(a));
        }
    }
    let p2s1 = catalog::product(&cp(2), &catalog::circle().unwrap()).unwrap();
    assert_eq!(index::index_polynomial(&p2s1).unwrap().poly, binomial_poly(2));
    let q3 = index::index_polynomial(&catalog::quadric(3).unwrap()).unwrap();
    assert!(q3.eval(-1).is_zero() && q3.eval(-2).is_zero());
}

#[test]
fn lengths() {
    for n in 1..=6 {
        assert_eq!(index::length(&cp(n)).unwrap().value, n + 1);
    }
    for n in 2..=6 {
        assert_eq!(index::length(&catalog::quadric(n).unwrap()).unwrap().value, n);
    }
    for n in 3..=6 {
        assert_eq!(index::length(&catalog::hypersurface(3, n).unwrap()).unwrap().value, n - 1);
    }
    let s1 = catalog::circle().unwrap();
    assert_eq!(index::product_length_bound(&cp(2), &s1).unwrap().value, 3);
    assert_eq!(index::product_length_bound(&cp(1), &s1).unwrap().value, 2);
    // S^4 carries no primitive degree-2 class, so its length search is rejected.
    let s4 = catalog::sphere(4).unwrap();
    assert!(index::product_length_bound(&catalog::quadric(3).unwrap(), &s4).is_err());
}

#[test]
fn systolic_bounds() {
    let s1 = catalog::circle().unwrap();
    assert_eq!(
        index::systolic_bound(&cp(3), Some(&s1), BoundKind::ProductStable).unwrap(),
        PiScaled::new(q(48), 1)
    );
    assert_eq!(index::systolic_bound(&catalog::quadric(4).unwrap(), None, BoundKind::Length).unwrap(), PiScaled::new(q(64), 1));
    assert_eq!(
        index::systolic_bound(&catalog::hypersurface(3, 4).unwrap(), None, BoundKind::FanoIndex).unwrap(),
        PiScaled::new(q(48), 1)
    );
    assert_eq!(index::systolic_bound(&cp(3), None, BoundKind::Length).unwrap(), PiScaled::new(q(48), 1));
}

#[test]
fn curvature_volume_width() {
    for n in 1..=6i64 {
        let x = cp(n as u32);
        let a = ScaledClass::new(PiScaled::new(q(1), 1), cls(&x, "H"));
        assert_eq!(index::avg_scalar_curvature(&x, &a).unwrap(), PiScaled::new(q(4 * n * (n + 1)), 0));
        assert_eq!(index::volume(&x, &a).unwrap(), PiScaled::new(factorial(n as u32).recip(), n as i32));
        assert_eq!(index::gromov_width_bound(&x, &a).unwrap(), PiScaled::new(qr(2 * n, n + 1), 1));
        let qn = catalog::quadric(n as u32 + 1).unwrap();
        let a = ScaledClass::new(PiScaled::new(q(1), 1), cls(&qn, "H"));
        assert_eq!(index::avg_scalar_curvature(&qn, &a).unwrap(), PiScaled::new(q(4 * (n + 1) * (n + 1)), 0));
    }
    // 4 pi n c1.alpha / alpha^2 with n = 2, c1.alpha = 4, alpha^2 = 2.
    let p = catalog::product(&cp(1), &cp(1)).unwrap();
    let a = ScaledClass::plain(lin(&p, &[("H1", 1), ("H2", 1)]));
    assert_eq!(index::avg_scalar_curvature(&p, &a).unwrap(), PiScaled::new(q(16), 1));
    let meta = catalog::grassmannian_section(4).unwrap();
    assert!(index::volume(&meta, &a).is_err());
}

#[test]
fn hilbert_polynomials() {
    let x = cp(2);
    let hp = index::hilbert_polynomial(&x, &cls(&x, "H")).unwrap();
    let want = UPoly::linear(q(1), q(1)).mul(&UPoly::linear(q(2), q(1))).scale(&qr(1, 2));
    assert_eq!(hp, want);
    let p = catalog::product(&cp(1), &cp(1)).unwrap();
    let hp = index::hilbert_polynomial(&p, &lin(&p, &[("H1", 1), ("H2", 1)])).unwrap();
    assert_eq!(hp, UPoly::linear(q(1), q(1)).pow(2));
    for x in [cp(3), catalog::quadric(3).unwrap(), catalog::hypersurface(3, 3).unwrap(), catalog::blowup_point(3).unwrap()] {
        let h = cls(&x, "H");
        assert_eq!(index::hilbert_polynomial(&x, &h).unwrap().eval_int(0), q(1));
    }
}

// ---------- cone engine ----------

#[test]
fn phi_values() {
    for n in 1..=5u32 {
        let x = cp(n);
        let want = q(n as i64 + 1).pow(n as i32);
        assert_eq!(phi(&x, &cls(&x, "H")).unwrap(), want);
        assert_eq!(phi(&x, &cls(&x, "H").scale(&q(7))).unwrap(), want);
        let s = phi_sup(&ConeProblem::new(&x).unwrap()).unwrap();
        assert!(matches!(s, PhiSup::Bounded { .. }));
    }
    // c1 = 2 alpha, alpha^3 = 7: Phi = 14^3 / 7^2.
    let bl = catalog::blowup_point(3).unwrap();
    assert_eq!(phi(&bl, &lin(&bl, &[("H", 2), ("E", -1)])).unwrap(), q(56));
}

#[test]
fn phi_suprema() {
    for n in 2..=5 {
        let x = catalog::blowup_point(n).unwrap();
        match phi_sup(&ConeProblem::new(&x).unwrap()).unwrap() {
            PhiSup::Unbounded { witness_name, .. } => assert_eq!(witness_name, "H - E"),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }
    for n in 3..=4 {
        let x = catalog::blowup_point_of_hypersurface(3, n).unwrap();
        let s = phi_sup(&ConeProblem::new(&x).unwrap()).unwrap();
        assert!(matches!(s, PhiSup::Bounded { .. }), "{s:?}");
    }
}

#[test]
fn thresholds() {
    for n in 1..=5 {
        let x = cp(n);
        let p = ConeProblem::new(&x).unwrap();
        let h = cls(&x, "H");
        assert_eq!(nef_threshold(&p, &h).unwrap(), q(n as i64 + 1));
        assert_eq!(s_alpha(&p, &h).unwrap(), q(n as i64 + 1));
        assert_eq!(nef_threshold(&p, &h.scale(&q(2))).unwrap(), qr(n as i64 + 1, 2));
    }
    let x = catalog::product(&cp(1), &cp(1)).unwrap();
    let p = ConeProblem::new(&x).unwrap();
    let a = lin(&x, &[("H1", 1), ("H2", 2)]);
    assert_eq!(nef_threshold(&p, &a).unwrap(), q(2));
    // c1.alpha / alpha^2 = 6 / 4.
    assert_eq!(s_alpha(&p, &a).unwrap(), qr(3, 2));
}

#[test]
fn bundle_profiles() {
    for n in 2..=5usize {
        let degs = vec![0i64; n];
        let (_, v) = bundle_systole_profile(&degs, 0, &q(1), &q(1)).unwrap();
        assert_eq!(v, q(n as i64 - 1) + qr(2, n as i64));
        let (_, v) = bundle_systole_profile(&degs, 1, &q(1), &q(1)).unwrap();
        assert_eq!(v, q(n as i64 - 1));
    }
    let (_, v) = bundle_systole_profile(&[0, 2], 0, &q(1), &q(1)).unwrap();
    assert_eq!(v, qr(3, 2));
    assert_eq!(bundle_profile_sup(2).unwrap().value, q(2));
    assert_eq!(bundle_profile_sup(3).unwrap().value, qr(8, 3));
    for n in 2..=8i64 {
        let s = bundle_profile_sup(n as u32).unwrap().value;
        assert_eq!(q(4 * n) * s, q(4 * (n * (n - 1) + 2)));
    }
}

#[test]
fn multiprojective_contractions() {
    let r = multiproj_contractions(&[3, 3], &[vec![2, 2]]).unwrap();
    assert!(r.fano);
    assert!(r.projections.iter().all(|p| p.k_negative && p.fiber_dim == 2));
    let r = multiproj_contractions(&[3, 2], &[vec![4, 1]]).unwrap();
    assert!(!r.projections[0].k_negative);
    for (a, b, d, e) in [(3u32, 3u32, 2u32, 2u32), (4, 3, 3, 1), (5, 4, 2, 3)] {
        let r = multiproj_contractions(&[a, b], &[vec![d, e]]).unwrap();
        assert!(r.fano);
        assert_eq!(r.max_order, (a.min(b) - 1) as i64);
    }
}

// ---------- lattices ----------

#[test]
fn successive_minima_examples() {
    for r in 1..=4 {
        let l = NormedLattice::standard(r).unwrap();
        for j in 1..=r {
            assert_eq!(lattice::successive_minima(&l, j).unwrap().squared(), q(1));
        }
    }
    let g = vec![vec![q(2), q(1)], vec![q(1), q(2)]];
    let l = NormedLattice::euclidean_gram(lattice::identity(2), g).unwrap();
    assert_eq!(lattice::successive_minima(&l, 1).unwrap().squared(), q(2));

    // Hexagon with vertices +-(2,0), +-(0,2), +-(2,2); brute-force gauge over a box.
    let l = NormedLattice::new(lattice::identity(2), Norm::Polytope(hexagon())).unwrap();
    let facets = lattice::polytope_facets(&hexagon(), 2).unwrap();
    let gauge = |v: &[Q]| facets.iter().map(|a| &a[0] * &v[0] + &a[1] * &v[1]).max().unwrap();
    let mut best: Option<Q> = None;
    for x in -3i64..=3 {
        for y in -3i64..=3 {
            if x != 0 || y != 0 {
                let g = gauge(&[q(x), q(y)]);
                best = Some(best.map_or(g.clone(), |b| if g < b { g } else { b }));
            }
        }
    }
    assert_eq!(best.unwrap(), qr(1, 2));
    assert_eq!(lattice::successive_minima(&l, 1).unwrap(), lattice::NormValue::Exact(qr(1, 2)));
}

fn hexagon() -> Vec<Vec<Q>> {
    [(2, 0), (0, 2), (2, 2), (-2, 0), (0, -2), (-2, -2)].iter().map(|&(a, b)| vec![q(a), q(b)]).collect()
}

#[test]
fn dual_lattices() {
    let z = NormedLattice::standard(3).unwrap();
    let d = lattice::dual_lattice(&z).unwrap();
    assert_eq!(d.lattice_gram().unwrap(), lattice::identity(3));
    let g = vec![vec![q(2), q(0)], vec![q(0), q(2)]];
    let l = NormedLattice::euclidean_gram(lattice::identity(2), g).unwrap();
    let d = lattice::dual_lattice(&l).unwrap();
    assert_eq!(d.lattice_gram().unwrap(), vec![vec![qr(1, 2), q(0)], vec![q(0), qr(1, 2)]]);
    let dd = lattice::dual_lattice(&d).unwrap();
    assert_eq!(dd.lattice_gram(), l.lattice_gram());
}

#[test]
fn reduced_dual_bases() {
    let z = NormedLattice::standard(2).unwrap();
    let red = lattice::reduced_dual_basis(&z).unwrap();
    assert!(red.dual_norms.iter().all(|n| n.squared() == q(1)));
    let g = vec![vec![q(2), q(1)], vec![q(1), q(2)]];
    let l = NormedLattice::euclidean_gram(lattice::identity(2), g).unwrap();
    let red = lattice::reduced_dual_basis(&l).unwrap();
    // |u|* <= 4 / sqrt 2, squared 8.
    assert!(red.dual_norms.iter().all(|n| n.squared() <= q(8)));
}

#[test]
fn transference_examples() {
    for r in 1..=4 {
        let t = lattice::transference_check(&NormedLattice::standard(r).unwrap()).unwrap();
        assert_eq!(t.product_sq, q(1));
        assert!(t.holds);
    }
    let g = vec![vec![q(4), q(0)], vec![q(0), qr(1, 4)]];
    let l = NormedLattice::euclidean_gram(lattice::identity(2), g).unwrap();
    let t = lattice::transference_check(&l).unwrap();
    assert_eq!(t.lambda1_sq, qr(1, 4));
    // Dual Gram diag(1/4, 4): lambda_2* = 2.
    assert_eq!(t.dual_lambda_r_sq, q(4));
    assert!(t.product_sq <= q(4) && t.holds);
}

// ---------- pushforward ----------

#[test]
fn localization_examples() {
    let p = localization_pushforward(1, 2, 1).unwrap();
    assert_eq!(p, SymmetricPolynomial::power_sum(2, 1).scale(&q(-1)));
    // Degree zero gives the degree of the Grassmannian in its Plucker embedding.
    for (k, r, d) in [(1, 2, 1), (1, 5, 1), (2, 4, 2), (2, 5, 5), (3, 6, 42)] {
        assert_eq!(localization_pushforward(k, r, 0).unwrap(), SymmetricPolynomial::constant(r, q(d)));
    }
}

/// Complete homogeneous polynomial `h_j` in `n` variables.
fn complete_homogeneous(n: usize, j: u32) -> SymmetricPolynomial {
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, acc: &mut SymmetricPolynomial, n: usize) {
        if i == n - 1 {
            exps[i] = left;
            let mut m = SymmetricPolynomial::constant(n, q(1));
            for (v, &e) in exps.iter().enumerate() {
                m = m.mul(&SymmetricPolynomial::variable(n, v).pow(e));
            }
            *acc = acc.add(&m);
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(i + 1, left - e, exps, acc, n);
        }
    }
    let mut acc = SymmetricPolynomial::zero(n);
    rec(0, j, &mut vec![0; n], &mut acc, n);
    acc
}

#[test]
fn segre_series_for_projective_bundles() {
    // Coefficients of prod (1 + x_i)^{-1} in degree j are (-1)^j h_j.
    for r in 2..=5 {
        for j in 0..=4u32 {
            let want = complete_homogeneous(r, j).scale(&q(if j % 2 == 0 { 1 } else { -1 }));
            assert_eq!(localization_pushforward(1, r, j).unwrap(), want, "r={r} j={j}");
        }
    }
}

#[test]
fn primitive_coefficients() {
    let c = primitive_coefficient(1, 3, 1).unwrap();
    let lead = primitive_coefficient(1, 2, 1).unwrap();
    assert!(!c.is_zero());
    assert_eq!(c.clone() / c.abs(), lead.clone() / lead.abs());
    for k in 1..=3usize {
        for b in 2..=(2 * k) as u32 {
            let c = primitive_coefficient(k, 2 * k, b).unwrap();
            assert_eq!(c.is_zero(), b % 2 == 1, "k={k} b={b}");
        }
    }
    assert_eq!(primitive_coefficient(2, 4, 3).unwrap(), q(0));
}

#[test]
fn segre_classes() {
    let x = cp(3);
    let h = cls(&x, "H");
    let c = ChernData::line_bundle(&h).unwrap();
    assert_eq!(segre_pushforward(&c, 1), -&h);
    let trivial = ChernData::trivial(x.ring().unwrap(), 2, Flavor::Complex);
    for b in 1..=3 {
        assert!(segre_pushforward(&trivial, b).is_zero());
    }
    let y = catalog::product(&cp(2), &cp(2)).unwrap();
    let (a1, a2) = (cls(&y, "H1"), cls(&y, "H2"));
    let (n1, n2) = (q(3), q(5));
    let total = &(&one(&y) + &a1.scale(&n1)) * &(&one(&y) + &a2.scale(&n2));
    let c = ChernData::new(2, total, Flavor::Complex).unwrap();
    let s2 = segre_pushforward(&c, 2);
    let want = &(&a1.pow(2).scale(&(&n1 * &n1)) + &(&a1 * &a2).scale(&(&n1 * &n2))) + &a2.pow(2).scale(&(&n2 * &n2));
    assert_eq!(s2, want);
    assert_eq!(s2.coefficient(&[1, 1]), q(15));
}
