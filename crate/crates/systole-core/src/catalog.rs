//! Constructors for the catalog of explicitly presented manifolds.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::char_classes::{whitney_quotient, ChernData, ClassError, Flavor};
use crate::graded_ring::{make_ring, Generator, GradedClass, Monomial, RingError, RingHandle, RingPresentation, Rule};
use crate::num::{q, Q};

/// Which constructor produced a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    ProjectiveSpace { n: u32 },
    Quadric { n: u32 },
    /// `degrees[alpha][i]` is the degree of equation `alpha` in factor `i`.
    CompleteIntersection { degrees: Vec<Vec<u32>>, ambient: Vec<u32> },
    ProjectiveBundle { degrees: Vec<i64>, genus: u32 },
    /// Blowup of a degree-`degree` hypersurface of dimension `n` at a point.
    BlowupPoint { n: u32, degree: u32 },
    Circle,
    Sphere { k: u32 },
    Product(Box<Family>, Box<Family>),
    WeightedHypersurface { kind: WeightedKind, n: u32 },
    GrassmannianSection { n: u32 },
}

/// Weighted-projective hypersurfaces that enter only through their index data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedKind {
    /// Sextic in `P(1^n, 2, 3)`.
    SexticP123,
    /// Quartic in `P(1^(n+1), 2)`.
    QuarticP12,
    /// Sextic in `P(1^(n+1), 3)`.
    SexticP13,
}

/// Nef cone of a Picard-rank at most two family, in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct NefData {
    /// Divisor classes spanning the Neron-Severi space.
    pub basis: Vec<GradedClass>,
    /// Extremal nef rays in basis coordinates.
    pub rays: Vec<Vec<Q>>,
    pub ray_names: Vec<String>,
    /// Intersection numbers `D_i . C` for the extremal curve classes.
    pub curves: Vec<Vec<Q>>,
    pub curve_names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    pub name: String,
    pub real_dim: u32,
    /// `None` for metadata-only spaces.
    pub ring: Option<RingHandle>,
    pub tangent: Option<ChernData>,
    pub spin_c: Option<GradedClass>,
    pub primitive_x: Option<GradedClass>,
    pub odd_xi: Option<GradedClass>,
    pub b2: Option<u32>,
    pub fano_index: Option<u32>,
    pub family: Family,
    pub nef: Option<NefData>,
    /// Kahler-Einstein existence flag where the classification records one.
    pub kahler_einstein: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty intersection: {equations} equations in an ambient space of dimension {ambient_dim}")]
    EmptyIntersection { equations: usize, ambient_dim: u32 },
    #[error("a primitive degree-2 generator is required (b2 = 1)")]
    NoPrimitiveClass,
    #[error("{0} has no cohomology ring in the catalog (metadata only)")]
    MetadataOnlySpace(String),
    #[error("class does not belong to the ring of {0}")]
    RingMismatch(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Class(#[from] ClassError),
}

impl Space {
    pub fn complex_dim(&self) -> u32 {
        self.real_dim / 2
    }

    pub fn is_complex(&self) -> bool {
        self.tangent.as_ref().is_some_and(|t| t.flavor == Flavor::Complex)
    }

    pub fn ring(&self) -> Result<&RingHandle, CatalogError> {
        self.ring.as_ref().ok_or_else(|| CatalogError::MetadataOnlySpace(self.name.clone()))
    }

    pub fn tangent(&self) -> Result<&ChernData, CatalogError> {
        self.tangent.as_ref().ok_or_else(|| CatalogError::MetadataOnlySpace(self.name.clone()))
    }

    pub fn spin_c(&self) -> Result<&GradedClass, CatalogError> {
        self.spin_c.as_ref().ok_or_else(|| CatalogError::MetadataOnlySpace(self.name.clone()))
    }

    /// First Chern class of the tangent data.
    pub fn c1(&self) -> Result<GradedClass, CatalogError> {
        Ok(self.tangent()?.c1())
    }

    /// Named generator of the ring as a class.
    pub fn class(&self, name: &str) -> Result<GradedClass, CatalogError> {
        Ok(GradedClass::generator(self.ring()?, name)?)
    }

    /// Pairing with the fundamental class.
    pub fn integrate(&self, a: &GradedClass) -> Result<Q, CatalogError> {
        let ring = self.ring()?;
        if !alloc::sync::Arc::ptr_eq(ring, a.ring()) && **ring != **a.ring() {
            return Err(CatalogError::RingMismatch(self.name.clone()));
        }
        Ok(a.integrate())
    }
}

fn poly_power_sum(ring: &RingHandle, terms: &[(usize, Q)]) -> GradedClass {
    let mut acc = GradedClass::zero(ring);
    for (i, c) in terms {
        acc = &acc + &GradedClass::generator_at(ring, *i).scale(c);
    }
    acc
}

fn one_plus(x: &GradedClass) -> GradedClass {
    &GradedClass::one(x.ring()) + x
}

fn single_ray_nef(h: &GradedClass, name: &str) -> NefData {
    NefData {
        basis: vec![h.clone()],
        rays: vec![vec![q(1)]],
        ray_names: vec![String::from(name)],
        curves: vec![vec![q(1)]],
        curve_names: vec![String::from("line")],
    }
}

/// Complex projective space with hyperplane class `H`.
pub fn projective_space(n: u32) -> Result<Space, CatalogError> {
    if n == 0 {
        return Err(CatalogError::InvalidArgument(String::from("projective space needs n >= 1")));
    }
    let ring = make_ring(RingPresentation {
        generators: vec![Generator::even("H", 2)],
        truncation: 2 * n,
        caps: vec![Some(n)],
        rules: vec![],
        pairing: vec![(vec![n], q(1))],
    })?;
    let h = GradedClass::generator(&ring, "H")?;
    let tangent = ChernData::new(n, one_plus(&h).pow(n + 1), Flavor::Complex)?;
    Ok(Space {
        name: format!("CP({})", n),
        real_dim: 2 * n,
        spin_c: Some(h.scale(&q(n as i64 + 1))),
        primitive_x: Some(h.clone()),
        odd_xi: None,
        b2: Some(1),
        fano_index: Some(n + 1),
        family: Family::ProjectiveSpace { n },
        nef: Some(single_ray_nef(&h, "H")),
        tangent: Some(tangent),
        ring: Some(ring),
        kahler_einstein: Some(true),
    })
}

/// Smooth quadric hypersurface, modelled on the subring generated by `H`.
pub fn quadric(n: u32) -> Result<Space, CatalogError> {
    if n < 2 {
        return Err(CatalogError::InvalidArgument(String::from("quadric needs n >= 2")));
    }
    let ring = make_ring(RingPresentation {
        generators: vec![Generator::even("H", 2)],
        truncation: 2 * n,
        caps: vec![Some(n)],
        rules: vec![],
        pairing: vec![(vec![n], q(2))],
    })?;
    let h = GradedClass::generator(&ring, "H")?;
    let ambient = ChernData::new(n + 1, one_plus(&h).pow(n + 2), Flavor::Complex)?;
    let normal = ChernData::line_bundle(&h.scale(&q(2)))?;
    let tangent = whitney_quotient(&ambient, &normal)?;
    Ok(Space {
        name: format!("Q({})", n),
        real_dim: 2 * n,
        spin_c: Some(tangent.c1()),
        primitive_x: Some(h.clone()),
        odd_xi: None,
        b2: Some(if n == 2 { 2 } else { 1 }),
        fano_index: Some(n),
        family: Family::Quadric { n },
        // The H-subring of the two-dimensional quadric misses half of its Picard group.
        nef: if n == 2 { None } else { Some(single_ray_nef(&h, "H")) },
        tangent: Some(tangent),
        ring: Some(ring),
        kahler_einstein: Some(true),
    })
}

fn factor_names(m: usize) -> Vec<String> {
    if m == 1 {
        vec![String::from("H")]
    } else {
        (1..=m).map(|i| format!("H{}", i)).collect()
    }
}

/// Smooth complete intersection in a product of projective spaces.
///
/// Classes live in the ambient ring truncated at the dimension of the
/// intersection; the pairing multiplies by the class of the intersection.
pub fn complete_intersection(degrees: &[Vec<u32>], ambient: &[u32]) -> Result<Space, CatalogError> {
    let m = ambient.len();
    let r = degrees.len();
    if m == 0 || ambient.iter().any(|&n| n == 0) {
        return Err(CatalogError::InvalidArgument(String::from("ambient dimensions must be positive")));
    }
    let total: u32 = ambient.iter().sum();
    if r as u32 > total {
        return Err(CatalogError::EmptyIntersection { equations: r, ambient_dim: total });
    }
    if r as u32 == total {
        return Err(CatalogError::InvalidArgument(String::from("complete intersection must have dimension >= 1")));
    }
    for row in degrees {
        if row.len() != m {
            return Err(CatalogError::InvalidArgument(format!(
                "each multidegree needs {} entries, got {}",
                m,
                row.len()
            )));
        }
        if row.iter().all(|&d| d == 0) {
            return Err(CatalogError::InvalidArgument(String::from("every equation needs a nonzero degree")));
        }
    }
    let dim = total - r as u32;
    let names = factor_names(m);
    let gens: Vec<Generator> = names.iter().map(|s| Generator::even(s, 2)).collect();
    let caps: Vec<Option<u32>> = ambient.iter().map(|&n| Some(n)).collect();

    // Ambient ring, used once to evaluate the twisted pairing.
    let amb_ring = make_ring(RingPresentation {
        generators: gens.clone(),
        truncation: 2 * total,
        caps: caps.clone(),
        rules: vec![],
        pairing: vec![(ambient.to_vec(), q(1))],
    })?;
    let mut cut = GradedClass::one(&amb_ring);
    for row in degrees {
        let terms: Vec<(usize, Q)> = row.iter().enumerate().map(|(i, &d)| (i, q(d as i64))).collect();
        cut = &cut * &poly_power_sum(&amb_ring, &terms);
    }
    let mut pairing: Vec<(Monomial, Q)> = Vec::new();
    for mono in monomials_of_degree(ambient, dim) {
        let v = (&GradedClass::monomial(&amb_ring, &mono, q(1)) * &cut).integrate();
        if !v.is_zero() {
            pairing.push((mono, v));
        }
    }
    let ring = make_ring(RingPresentation {
        generators: gens,
        truncation: 2 * dim,
        caps,
        rules: vec![],
        pairing,
    })?;

    let mut amb_total = GradedClass::one(&ring);
    for (i, &n) in ambient.iter().enumerate() {
        amb_total = &amb_total * &one_plus(&GradedClass::generator_at(&ring, i)).pow(n + 1);
    }
    let amb_rank: u32 = ambient.iter().sum();
    let mut normal_total = GradedClass::one(&ring);
    for row in degrees {
        let terms: Vec<(usize, Q)> = row.iter().enumerate().map(|(i, &d)| (i, q(d as i64))).collect();
        normal_total = &normal_total * &one_plus(&poly_power_sum(&ring, &terms));
    }
    let amb = ChernData::new(amb_rank + m as u32, amb_total, Flavor::Complex)?;
    // Euler sequences add one trivial summand per factor; the quotient removes them again.
    let normal = ChernData::new(r as u32 + m as u32, normal_total, Flavor::Complex)?;
    let tangent = whitney_quotient(&amb, &normal)?;
    let c1 = tangent.c1();

    let single = m == 1;
    let lefschetz = dim >= 3;
    let primitive_x = if single && lefschetz { Some(GradedClass::generator_at(&ring, 0)) } else { None };
    let fano_index = if single && lefschetz {
        let s: u32 = degrees.iter().map(|row| row[0]).sum();
        let idx = ambient[0] as i64 + 1 - s as i64;
        if idx > 0 {
            Some(idx as u32)
        } else {
            None
        }
    } else {
        None
    };
    let b2 = if lefschetz { Some(m as u32) } else { None };
    let positive = degrees.iter().all(|row| row.iter().all(|&d| d > 0));
    let nef = if single {
        Some(single_ray_nef(&GradedClass::generator_at(&ring, 0), "H"))
    } else if m == 2 && lefschetz && positive {
        Some(NefData {
            basis: vec![GradedClass::generator_at(&ring, 0), GradedClass::generator_at(&ring, 1)],
            rays: vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            ray_names: names.clone(),
            curves: vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            curve_names: vec![String::from("line in factor 1"), String::from("line in factor 2")],
        })
    } else {
        None
    };
    Ok(Space {
        name: ci_name(degrees, ambient),
        real_dim: 2 * dim,
        spin_c: Some(c1),
        primitive_x,
        odd_xi: None,
        b2,
        fano_index,
        family: Family::CompleteIntersection { degrees: degrees.to_vec(), ambient: ambient.to_vec() },
        nef,
        tangent: Some(tangent),
        ring: Some(ring),
        kahler_einstein: None,
    })
}

fn ci_name(degrees: &[Vec<u32>], ambient: &[u32]) -> String {
    let rows: Vec<String> = degrees
        .iter()
        .map(|row| format!("[{}]", row.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let amb: Vec<String> = ambient.iter().map(|n| n.to_string()).collect();
    format!("CI(degrees=[{}]; ambient=[{}])", rows.join(","), amb.join(","))
}

/// Exponent vectors with `sum e_i = d` and `e_i <= caps[i]`.
fn monomials_of_degree(caps: &[u32], d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; caps.len()];
    fn rec(i: usize, left: u32, caps: &[u32], cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left.min(caps[i]) {
            cur[i] = e;
            rec(i + 1, left - e, caps, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, caps, &mut cur, &mut out);
    out
}

/// Projectivisation (of quotients) of a split bundle `O(d_1) + ... + O(d_n)` over a
/// curve of genus `g`, with tautological class `xi` and fibre class `f`.
pub fn proj_bundle_over_curve(degrees: &[i64], genus: u32) -> Result<Space, CatalogError> {
    let n = degrees.len() as u32;
    if n < 2 {
        return Err(CatalogError::InvalidArgument(String::from("projective bundle needs rank n >= 2")));
    }
    let e: i64 = degrees.iter().sum();
    let replacement = if e == 0 { vec![] } else { vec![(vec![n - 1, 1], q(e))] };
    let ring = make_ring(RingPresentation {
        generators: vec![Generator::even("xi", 2), Generator::even("f", 2)],
        truncation: 2 * n,
        caps: vec![None, Some(1)],
        rules: vec![Rule::Power { generator: 0, exponent: n, replacement }],
        pairing: vec![(vec![n - 1, 1], q(1))],
    })?;
    let xi = GradedClass::generator(&ring, "xi")?;
    let f = GradedClass::generator(&ring, "f")?;
    let mut total = one_plus(&f.scale(&q(2 - 2 * genus as i64)));
    for &d in degrees {
        total = &total * &one_plus(&(&xi - &f.scale(&q(d))));
    }
    let tangent = ChernData::new(n, total, Flavor::Complex)?;
    let dmin = *degrees.iter().min().expect("n >= 2");
    let nef = NefData {
        basis: vec![xi.clone(), f.clone()],
        rays: vec![vec![q(1), q(-dmin)], vec![q(0), q(1)]],
        ray_names: vec![
            if dmin == 0 { String::from("xi") } else { format!("xi - ({})*f", dmin) },
            String::from("f"),
        ],
        curves: vec![vec![q(1), q(0)], vec![q(dmin), q(1)]],
        curve_names: vec![String::from("fibre line"), String::from("minimal section")],
    };
    let degs: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
    Ok(Space {
        name: format!("PB(degrees=[{}]; genus={})", degs.join(","), genus),
        real_dim: 2 * n,
        spin_c: Some(tangent.c1()),
        primitive_x: None,
        odd_xi: None,
        b2: Some(2),
        fano_index: None,
        family: Family::ProjectiveBundle { degrees: degrees.to_vec(), genus },
        nef: Some(nef),
        tangent: Some(tangent),
        ring: Some(ring),
        kahler_einstein: None,
    })
}

/// Blowup of projective space at a point, with exceptional class `E`.
pub fn blowup_point(n: u32) -> Result<Space, CatalogError> {
    blowup_point_of_hypersurface(1, n)
}

/// Blowup at a general point of a smooth degree-`d` hypersurface `X` of dimension `n`
/// (`d = 1` is projective space itself).
///
/// The tangent class is `pi^* c(X) + (1 + E)(1 - E)^n - 1`; the correction is local
/// at the point. For `d <= n` lines of `X` pass through a general point, so the nef
/// cone is spanned by `H` and `H - E`.
pub fn blowup_point_of_hypersurface(d: u32, n: u32) -> Result<Space, CatalogError> {
    if n < 2 {
        return Err(CatalogError::InvalidArgument(String::from("blowup needs n >= 2")));
    }
    if d == 0 || d > n {
        return Err(CatalogError::InvalidArgument(String::from(
            "blowup is catalogued for hypersurfaces of degree 1 <= d <= n",
        )));
    }
    let sign = if n % 2 == 1 { q(1) } else { q(-1) };
    let ring = make_ring(RingPresentation {
        generators: vec![Generator::even("H", 2), Generator::even("E", 2)],
        truncation: 2 * n,
        caps: vec![Some(n), Some(n)],
        rules: vec![Rule::ZeroProduct { a: 0, b: 1 }],
        pairing: vec![(vec![n, 0], q(d as i64)), (vec![0, n], sign)],
    })?;
    let h = GradedClass::generator(&ring, "H")?;
    let ex = GradedClass::generator(&ring, "E")?;
    let base = if d == 1 {
        one_plus(&h).pow(n + 1)
    } else {
        let amb = ChernData::new(n + 1, one_plus(&h).pow(n + 2), Flavor::Complex)?;
        let normal = ChernData::line_bundle(&h.scale(&q(d as i64)))?;
        whitney_quotient(&amb, &normal)?.total
    };
    let correction = &(&one_plus(&ex) * &one_plus(&-&ex).pow(n)) - &GradedClass::one(&ring);
    let tangent = ChernData::new(n, &base + &correction, Flavor::Complex)?;
    let nef = NefData {
        basis: vec![h.clone(), ex.clone()],
        rays: vec![vec![q(1), q(0)], vec![q(1), q(-1)]],
        ray_names: vec![String::from("H"), String::from("H - E")],
        curves: vec![vec![q(0), q(-1)], vec![q(1), q(1)]],
        curve_names: vec![String::from("line in E"), String::from("line through p")],
    };
    let name = if d == 1 { format!("BlP({})", n) } else { format!("BlX(d={}; n={})", d, n) };
    Ok(Space {
        name,
        real_dim: 2 * n,
        spin_c: Some(tangent.c1()),
        primitive_x: None,
        odd_xi: None,
        b2: Some(2),
        fano_index: None,
        family: Family::BlowupPoint { n, degree: d },
        nef: Some(nef),
        tangent: Some(tangent),
        ring: Some(ring),
        kahler_einstein: None,
    })
}

/// The circle, carrying the odd class `xi` with `<xi> = 1`.
pub fn circle() -> Result<Space, CatalogError> {
    let ring = make_ring(RingPresentation {
        generators: vec![Generator::odd("xi", 1)],
        truncation: 1,
        caps: vec![Some(1)],
        rules: vec![],
        pairing: vec![(vec![1], q(1))],
    })?;
    let xi = GradedClass::generator(&ring, "xi")?;
    Ok(Space {
        name: String::from("S1"),
        real_dim: 1,
        spin_c: Some(GradedClass::zero(&ring)),
        primitive_x: None,
        odd_xi: Some(xi),
        b2: Some(0),
        fano_index: None,
        family: Family::Circle,
        nef: None,
        tangent: Some(ChernData::trivial(&ring, 0, Flavor::Realified)),
        ring: Some(ring),
        kahler_einstein: None,
    })
}

/// The round sphere with the spin structure (`c = 0`) and stably trivial tangent bundle.
pub fn sphere(k: u32) -> Result<Space, CatalogError> {
    if k == 0 {
        return Err(CatalogError::InvalidArgument(String::from("sphere needs k >= 1")));
    }
    if k == 1 {
        return circle();
    }
    let name = if k == 2 { "x" } else { "s" };
    let gen = if k % 2 == 0 { Generator::even(name, k) } else { Generator::odd(name, k) };
    let ring = make_ring(RingPresentation {
        generators: vec![gen],
        truncation: k,
        caps: vec![Some(1)],
        rules: vec![],
        pairing: vec![(vec![1], q(1))],
    })?;
    let primitive_x = if k == 2 { Some(GradedClass::generator(&ring, "x")?) } else { None };
    Ok(Space {
        name: format!("S({})", k),
        real_dim: k,
        spin_c: Some(GradedClass::zero(&ring)),
        primitive_x,
        odd_xi: None,
        b2: Some(if k == 2 { 1 } else { 0 }),
        fano_index: None,
        family: Family::Sphere { k },
        nef: None,
        tangent: Some(ChernData::trivial(&ring, 0, Flavor::Realified)),
        ring: Some(ring),
        kahler_einstein: None,
    })
}

/// Disambiguates repeated generator names by appending their occurrence number.
fn product_names(names: &[String]) -> Vec<String> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let total = names.iter().filter(|m| *m == n).count();
            if total == 1 {
                n.clone()
            } else {
                let k = names[..=i].iter().filter(|m| *m == n).count();
                format!("{}{}", n, k)
            }
        })
        .collect()
}

/// Cartesian product with tensor-product ring and Kunneth pairing.
pub fn product(x: &Space, y: &Space) -> Result<Space, CatalogError> {
    let rx = x.ring()?;
    let ry = y.ring()?;
    let px = rx.presentation();
    let py = ry.presentation();
    let nx = px.generators.len();
    let names: Vec<String> = px.generators.iter().chain(&py.generators).map(|g| g.name.clone()).collect();
    let names = product_names(&names);
    let generators: Vec<Generator> = px
        .generators
        .iter()
        .chain(&py.generators)
        .zip(&names)
        .map(|(g, n)| Generator::new(n, g.degree, g.parity))
        .collect();
    let ngen = generators.len();
    let caps: Vec<Option<u32>> = px.caps.iter().chain(&py.caps).cloned().collect();
    let shift = |m: &Monomial, offset: usize| -> Monomial {
        let mut out = vec![0; ngen];
        for (i, e) in m.iter().enumerate() {
            out[i + offset] = *e;
        }
        out
    };
    let mut rules = Vec::new();
    for (rulesrc, offset) in [(&px.rules, 0usize), (&py.rules, nx)] {
        for rule in rulesrc {
            rules.push(match rule {
                Rule::Power { generator, exponent, replacement } => Rule::Power {
                    generator: generator + offset,
                    exponent: *exponent,
                    replacement: replacement.iter().map(|(m, c)| (shift(m, offset), c.clone())).collect(),
                },
                Rule::ZeroProduct { a, b } => Rule::ZeroProduct { a: a + offset, b: b + offset },
            });
        }
    }
    let mut pairing = Vec::new();
    for (mx, vx) in rx.pairing() {
        for (my, vy) in ry.pairing() {
            let mut m = shift(mx, 0);
            for (i, e) in my.iter().enumerate() {
                m[nx + i] = *e;
            }
            pairing.push((m, vx * vy));
        }
    }
    let ring = make_ring(RingPresentation {
        generators,
        truncation: px.truncation + py.truncation,
        caps,
        rules,
        pairing,
    })?;
    let map_x: Vec<usize> = (0..nx).collect();
    let map_y: Vec<usize> = (0..py.generators.len()).map(|j| nx + j).collect();
    let pull_x = |c: &GradedClass| c.transport(&ring, &map_x);
    let pull_y = |c: &GradedClass| c.transport(&ring, &map_y);

    let tx = x.tangent()?;
    let ty = y.tangent()?;
    let tangent = ChernData {
        rank: tx.rank + ty.rank,
        total: &pull_x(&tx.total) * &pull_y(&ty.total),
        flavor: if tx.flavor == Flavor::Complex && ty.flavor == Flavor::Complex {
            Flavor::Complex
        } else {
            Flavor::Realified
        },
    };
    let spin_c = &pull_x(x.spin_c()?) + &pull_y(y.spin_c()?);
    let primitive_x = match (x.b2, y.b2, &x.primitive_x, &y.primitive_x) {
        (Some(1), Some(0), Some(px), _) => Some(pull_x(px)),
        (Some(0), Some(1), _, Some(py)) => Some(pull_y(py)),
        _ => None,
    };
    let real_dim = x.real_dim + y.real_dim;
    let odd_xi = if real_dim % 2 == 1 {
        match (&x.odd_xi, &y.odd_xi) {
            (Some(a), None) => Some(pull_x(a)),
            (None, Some(b)) => Some(pull_y(b)),
            _ => None,
        }
    } else {
        None
    };
    // Kunneth: b2(X x Y) = b2(X) + b1(X) b1(Y) + b2(Y).
    let b1 = |r: &RingHandle| r.graded_dimensions().get(&1).copied().unwrap_or(0) as u32;
    let b2 = match (x.b2, y.b2) {
        (Some(a), Some(b)) => Some(a + b + b1(rx) * b1(ry)),
        _ => None,
    };
    let nef = product_nef(x, y, &pull_x, &pull_y);
    Ok(Space {
        name: format!("{} * {}", x.name, y.name),
        real_dim,
        ring: Some(ring.clone()),
        tangent: Some(tangent),
        spin_c: Some(spin_c),
        primitive_x,
        odd_xi,
        b2,
        fano_index: None,
        family: Family::Product(Box::new(x.family.clone()), Box::new(y.family.clone())),
        nef,
        kahler_einstein: None,
    })
}

fn product_nef(
    x: &Space,
    y: &Space,
    pull_x: &dyn Fn(&GradedClass) -> GradedClass,
    pull_y: &dyn Fn(&GradedClass) -> GradedClass,
) -> Option<NefData> {
    let empty = NefData { basis: vec![], rays: vec![], ray_names: vec![], curves: vec![], curve_names: vec![] };
    let nx = match (&x.nef, x.b2) {
        (Some(n), _) => n.clone(),
        (None, Some(0)) => empty.clone(),
        _ => return None,
    };
    let ny = match (&y.nef, y.b2) {
        (Some(n), _) => n.clone(),
        (None, Some(0)) => empty,
        _ => return None,
    };
    let kx = nx.basis.len();
    let ky = ny.basis.len();
    if kx + ky == 0 || kx + ky > 2 {
        return None;
    }
    let pad = |v: &Vec<Q>, left: bool| -> Vec<Q> {
        let mut out = vec![Q::zero(); kx + ky];
        for (i, c) in v.iter().enumerate() {
            out[if left { i } else { kx + i }] = c.clone();
        }
        out
    };
    let mut basis: Vec<GradedClass> = nx.basis.iter().map(|b| pull_x(b)).collect();
    basis.extend(ny.basis.iter().map(|b| pull_y(b)));
    let mut rays: Vec<Vec<Q>> = nx.rays.iter().map(|r| pad(r, true)).collect();
    rays.extend(ny.rays.iter().map(|r| pad(r, false)));
    let mut curves: Vec<Vec<Q>> = nx.curves.iter().map(|c| pad(c, true)).collect();
    curves.extend(ny.curves.iter().map(|c| pad(c, false)));
    let mut ray_names = nx.ray_names.clone();
    ray_names.extend(ny.ray_names.iter().cloned());
    let mut curve_names = nx.curve_names.clone();
    curve_names.extend(ny.curve_names.iter().cloned());
    // Rename rays after the product ring's generator names.
    let ray_names = rays
        .iter()
        .zip(ray_names)
        .map(|(r, fallback)| describe_combination(&basis, r).unwrap_or(fallback))
        .collect();
    Some(NefData { basis, rays, ray_names, curves, curve_names })
}

/// Renders `sum r_i basis_i` when every basis element is a single generator.
fn describe_combination(basis: &[GradedClass], coords: &[Q]) -> Option<String> {
    let mut acc: Option<GradedClass> = None;
    for (b, c) in basis.iter().zip(coords) {
        let t = b.scale(c);
        acc = Some(match acc {
            None => t,
            Some(a) => &a + &t,
        });
    }
    acc.map(|c| c.to_string())
}

/// Replaces the spin^c class `c` by `c + 2k x` for the primitive class `x`.
pub fn twist_spin_c(x: &Space, k: i64) -> Result<Space, CatalogError> {
    let prim = x.primitive_x.as_ref().ok_or(CatalogError::NoPrimitiveClass)?;
    let c = x.spin_c()?;
    let mut out = x.clone();
    out.spin_c = Some(c + &prim.scale(&q(2 * k)));
    if k != 0 {
        out.name = format!("{}.twist({})", x.name, k);
    }
    Ok(out)
}

/// Weighted-projective hypersurface, index data only.
pub fn weighted_hypersurface(kind: WeightedKind, n: u32) -> Result<Space, CatalogError> {
    if n < 3 {
        return Err(CatalogError::InvalidArgument(String::from("weighted hypersurfaces are catalogued for n >= 3")));
    }
    let (name, index) = match kind {
        WeightedKind::SexticP123 => (format!("X6 in P(1^{},2,3)", n), n - 1),
        WeightedKind::QuarticP12 => (format!("X4 in P(1^{},2)", n + 1), n - 1),
        WeightedKind::SexticP13 => (format!("X6 in P(1^{},3)", n + 1), n - 2),
    };
    Ok(metadata_space(name, n, index, Family::WeightedHypersurface { kind, n }, None))
}

/// Linear section of the Grassmannian of planes in C^5, index data only.
pub fn grassmannian_section(n: u32) -> Result<Space, CatalogError> {
    if !(3..=6).contains(&n) {
        return Err(CatalogError::InvalidArgument(String::from("Grassmannian sections exist for 3 <= n <= 6")));
    }
    let ke = Some(n == 3 || n == 6);
    Ok(metadata_space(
        format!("G(2,5) cap CP^{}", n + 3),
        n,
        n - 1,
        Family::GrassmannianSection { n },
        ke,
    ))
}

fn metadata_space(name: String, n: u32, index: u32, family: Family, ke: Option<bool>) -> Space {
    Space {
        name,
        real_dim: 2 * n,
        ring: None,
        tangent: None,
        spin_c: None,
        primitive_x: None,
        odd_xi: None,
        b2: Some(1),
        fano_index: Some(index),
        family,
        nef: None,
        kahler_einstein: ke,
    }
}

/// Hypersurface of degree `d` in `CP^(n+1)`.
pub fn hypersurface(d: u32, n: u32) -> Result<Space, CatalogError> {
    complete_intersection(&[vec![d]], &[n + 1])
}

/// Complete intersection of the given degrees in a single projective space of dimension `n + r`.
pub fn projective_ci(degrees: &[u32], n: u32) -> Result<Space, CatalogError> {
    let rows: Vec<Vec<u32>> = degrees.iter().map(|&d| vec![d]).collect();
    complete_intersection(&rows, &[n + degrees.len() as u32])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_classes::todd;

    #[test]
    fn cp3_first_chern_class() {
        let x = projective_space(3).unwrap();
        assert_eq!(x.c1().unwrap(), x.class("H").unwrap().scale(&q(4)));
        assert!(projective_space(0).is_err());
    }

    #[test]
    fn quadric_data() {
        let x = quadric(4).unwrap();
        assert_eq!(x.c1().unwrap(), x.class("H").unwrap().scale(&q(4)));
        let x3 = quadric(3).unwrap();
        assert_eq!(x3.class("H").unwrap().pow(3).integrate(), q(2));
    }

    #[test]
    fn cubic_threefold() {
        let x = hypersurface(3, 3).unwrap();
        let h = x.class("H").unwrap();
        assert_eq!(x.c1().unwrap(), h.scale(&q(2)));
        assert_eq!(h.pow(3).integrate(), q(3));
        assert_eq!(x.fano_index, Some(2));
    }

    #[test]
    fn blowup_expansion() {
        let x = blowup_point(2).unwrap();
        let h = x.class("H").unwrap();
        let e = x.class("E").unwrap();
        let l = &h.scale(&q(3)) - &e;
        assert_eq!(l.pow(2), &h.pow(2).scale(&q(9)) + &e.pow(2));
        assert_eq!(e.pow(2).integrate(), q(-1));
        assert_eq!((&h - &e).pow(2).integrate(), q(0));
        let td = todd(x.tangent().unwrap()).unwrap();
        assert_eq!(td.integrate(), q(1));
    }

    #[test]
    fn blowup_tangent_matches_toric_formula() {
        for n in 2..5 {
            let x = blowup_point(n).unwrap();
            let h = x.class("H").unwrap();
            let e = x.class("E").unwrap();
            let toric = &(&one_plus(&h) * &one_plus(&(&h - &e)).pow(n)) * &one_plus(&e);
            assert_eq!(x.tangent().unwrap().total, toric);
        }
    }

    #[test]
    fn blown_up_cubic() {
        let x = blowup_point_of_hypersurface(3, 3).unwrap();
        let h = x.class("H").unwrap();
        let e = x.class("E").unwrap();
        assert_eq!(x.c1().unwrap(), (&h - &e).scale(&q(2)));
        assert_eq!(todd(x.tangent().unwrap()).unwrap().integrate(), q(1));
        assert!(blowup_point_of_hypersurface(4, 3).is_err());
    }

    #[test]
    fn bundle_volume() {
        let x = proj_bundle_over_curve(&[0, 0, 0], 0).unwrap();
        let a = &x.class("xi").unwrap() + &x.class("f").unwrap();
        assert_eq!(a.pow(3).integrate(), q(3));
    }

    #[test]
    fn product_kunneth_and_names() {
        let p = product(&projective_space(1).unwrap(), &projective_space(1).unwrap()).unwrap();
        let h1 = p.class("H1").unwrap();
        let h2 = p.class("H2").unwrap();
        assert_eq!((&h1 * &h2).integrate(), q(1));
        assert_eq!(p.b2, Some(2));
    }

    #[test]
    fn circle_and_spheres() {
        let s = circle().unwrap();
        assert_eq!(s.odd_xi.as_ref().unwrap().integrate(), q(1));
        let s2 = sphere(2).unwrap();
        assert_eq!(s2.primitive_x.as_ref().unwrap().integrate(), q(1));
        assert_eq!(s2.b2, Some(1));
    }

    #[test]
    fn twist_examples() {
        let x = projective_space(2).unwrap();
        let t = twist_spin_c(&x, -1).unwrap();
        assert_eq!(t.spin_c.unwrap(), x.class("H").unwrap());
        let s = twist_spin_c(&sphere(2).unwrap(), 1).unwrap();
        assert_eq!(s.spin_c.unwrap().to_string(), "2*x");
        assert_eq!(twist_spin_c(&circle().unwrap(), 1), Err(CatalogError::NoPrimitiveClass));
    }

    #[test]
    fn metadata_only_has_no_ring() {
        let g = grassmannian_section(4).unwrap();
        assert!(matches!(g.ring(), Err(CatalogError::MetadataOnlySpace(_))));
        assert_eq!(g.fano_index, Some(3));
    }
}
