//! Normed lattices of rank at most five: successive minima by exhaustive
//! enumeration, dual lattices, Korkine-Zolotarev reduction of the dual and
//! the transference check.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::num::{ceil_int, floor_int, floor_sqrt, q, round_half_up, Q};

pub const MAX_RANK: usize = 5;

/// Row-major square matrix.
pub type Mat = Vec<Vec<Q>>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("rank {0} exceeds the supported maximum of 5")]
    RankTooLarge(usize),
    #[error("rank must be at least 1")]
    Empty,
    #[error("basis is singular")]
    Singular,
    #[error("Gram matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("index j = {0} is outside 1..=r")]
    IndexOutOfRange(usize),
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("dual basis bound violated: |u_{index}|* lambda_1 exceeds r^2")]
    BoundViolated { index: usize },
}

/// The norm on the ambient space.
#[derive(Clone, Debug, PartialEq)]
pub enum Norm {
    /// `|v|^2 = v^T G v`.
    Euclidean(Mat),
    /// Minkowski functional of the convex hull of the given centrally symmetric vertices.
    Polytope(Vec<Vec<Q>>),
}

/// Lattice generated by the columns of `basis`, with a norm on the ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct NormedLattice {
    pub basis: Mat,
    pub norm: Norm,
    /// Facet normals `a` with `K = { a . x <= 1 }`, cached for polytope norms.
    facets: Vec<Vec<Q>>,
}

/// A norm value: Euclidean minima are kept squared so that they stay rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormValue {
    Squared(Q),
    Exact(Q),
}

impl NormValue {
    pub fn squared(&self) -> Q {
        match self {
            NormValue::Squared(v) => v.clone(),
            NormValue::Exact(v) => v * v,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            NormValue::Squared(v) => libm_sqrt(v.to_f64().unwrap_or(f64::NAN)),
            NormValue::Exact(v) => v.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Square root by Newton iteration, for reporting only.
fn libm_sqrt(x: f64) -> f64 {
    if x <= 0.0 || x.is_nan() {
        return if x == 0.0 { 0.0 } else { f64::NAN };
    }
    let mut g = if x > 1.0 { x } else { 1.0 };
    for _ in 0..100 {
        let next = 0.5 * (g + x / g);
        if (next - g).abs() <= 1e-16 * g {
            return next;
        }
        g = next;
    }
    g
}

// ---------- exact linear algebra ----------

pub fn identity(r: usize) -> Mat {
    (0..r).map(|i| (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let r = a.len();
    let c = if r == 0 { 0 } else { a[0].len() };
    (0..c).map(|j| (0..r).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Q::zero();
                    for l in 0..k {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            s += &a[i][l] * &b[l][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[Q]) -> Vec<Q> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn quad(g: &Mat, v: &[Q]) -> Q {
    dot(v, &mat_vec(g, v))
}

/// Inverse by Gauss-Jordan elimination, `None` if singular.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(a: &Mat) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Q::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Q::zero(),
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    det
}

/// Rank of a list of vectors.
pub fn rank_of(vectors: &[Vec<Q>]) -> usize {
    let mut rows: Vec<Vec<Q>> = vectors.to_vec();
    let mut rank = 0;
    let cols = rows.first().map_or(0, |r| r.len());
    for col in 0..cols {
        let piv = match (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        rows.swap(rank, piv);
        let p = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if !rows[r][col].is_zero() {
                let f = &rows[r][col] / &p;
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn is_positive_definite(g: &Mat) -> bool {
    let n = g.len();
    if (0..n).any(|i| (0..n).any(|j| g[i][j] != g[j][i])) {
        return false;
    }
    (1..=n).all(|k| {
        let minor: Mat = (0..k).map(|i| g[i][..k].to_vec()).collect();
        determinant(&minor).is_positive()
    })
}

fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

fn int_mat_to_q(u: &[Vec<BigInt>]) -> Mat {
    u.iter().map(|r| to_q(r)).collect()
}

// ---------- lattice reduction and enumeration on Gram matrices ----------

/// Gram-Schmidt coefficients `mu` and squared lengths `b*` of a Gram matrix.
fn gso(m: &Mat) -> (Mat, Vec<Q>) {
    let n = m.len();
    let mut mu = vec![vec![Q::zero(); n]; n];
    let mut bstar = vec![Q::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = m[i][j].clone();
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &bstar[k];
            }
            mu[i][j] = s / &bstar[j];
        }
        let mut s = m[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &bstar[k];
        }
        bstar[i] = s;
        mu[i][i] = Q::one();
    }
    (mu, bstar)
}

/// Integer column operation `b_i += c b_j` on the transform `u` and Gram `m`.
fn add_column(u: &mut [Vec<BigInt>], m: &mut Mat, i: usize, j: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for row in u.iter_mut() {
        let t = &row[j] * c;
        row[i] += t;
    }
    let cq = Q::from_integer(c.clone());
    let n = m.len();
    // Column i, then row i (the Gram changes as B^T G B with B e_i += c B e_j).
    let mjj = m[j][j].clone();
    let mij = m[i][j].clone();
    for k in 0..n {
        if k != i {
            let add = &cq * &m[k][j];
            m[k][i] += add.clone();
            m[i][k] = m[k][i].clone();
        }
    }
    m[i][i] = &m[i][i] + q(2) * &cq * &mij + &cq * &cq * &mjj;
}

fn swap_columns(u: &mut [Vec<BigInt>], m: &mut Mat, i: usize, j: usize) {
    for row in u.iter_mut() {
        row.swap(i, j);
    }
    m.swap(i, j);
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

fn int_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect()).collect()
}

/// LLL reduction (`delta = 3/4`) of a Gram matrix; returns the unimodular transform
/// (columns are the new basis in old coordinates) and the reduced Gram.
pub fn lll(m: &Mat) -> (Vec<Vec<BigInt>>, Mat) {
    let n = m.len();
    let mut u = int_identity(n);
    let mut g = m.clone();
    let delta = Q::new(3.into(), 4.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let c = round_half_up(&mu[k][j]);
            if !c.is_zero() {
                add_column(&mut u, &mut g, k, j, &-c);
            }
        }
        let (mu, bstar) = gso(&g);
        if bstar[k] >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1] {
            k += 1;
        } else {
            swap_columns(&mut u, &mut g, k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    (u, g)
}

/// All nonzero `z` (one of each pair `+-z`) with `z^T M z <= bound`.
pub fn enumerate(m: &Mat, bound: &Q) -> Vec<(Vec<BigInt>, Q)> {
    let n = m.len();
    // Quadratic form as sum_i q_ii (z_i + sum_{j>i} q_ij z_j)^2.
    let mut qm = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            qm[j][i] = qm[i][j].clone();
            qm[i][j] = &qm[i][j] / &qm[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let t = &qm[k][i] * &qm[i][l];
                qm[k][l] -= t;
            }
        }
    }
    let mut out = Vec::new();
    let mut z = vec![BigInt::zero(); n];
    fn rec(i: isize, qm: &Mat, z: &mut Vec<BigInt>, budget: Q, total: &Q, out: &mut Vec<(Vec<BigInt>, Q)>) {
        if i < 0 {
            if z.iter().any(|x| !x.is_zero()) {
                out.push((z.clone(), total - &budget));
            }
            return;
        }
        let i = i as usize;
        let n = z.len();
        let mut c = Q::zero();
        for j in i + 1..n {
            c += &qm[i][j] * Q::from_integer(z[j].clone());
        }
        let u = &budget / &qm[i][i];
        let s = floor_sqrt(&u);
        let lo: BigInt = floor_int(&-&c) - &s - 1;
        let hi: BigInt = ceil_int(&-&c) + &s + 1;
        let mut x = lo;
        while x <= hi {
            let t = Q::from_integer(x.clone()) + &c;
            let used = &qm[i][i] * &t * &t;
            if used <= budget {
                z[i] = x.clone();
                rec(i as isize - 1, qm, z, &budget - used, total, out);
            }
            x += 1;
        }
        z[i] = BigInt::zero();
    }
    rec(n as isize - 1, &qm, &mut z, bound.clone(), bound, &mut out);
    out.retain(|(v, _)| v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive()));
    out
}

/// Successive minima of a positive-definite Gram matrix, squared, with minimizers.
///
/// The enumeration radius is the `r`-th smallest LLL basis length, which already
/// certifies `r` independent vectors.
pub fn gram_minima(m: &Mat) -> Vec<(Q, Vec<BigInt>)> {
    let n = m.len();
    let (u, g) = lll(m);
    let mut diag: Vec<Q> = (0..n).map(|i| g[i][i].clone()).collect();
    diag.sort();
    let radius = diag[n - 1].clone();
    let mut vs = enumerate(&g, &radius);
    vs.sort_by(|a, b| a.1.cmp(&b.1));
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    let mut out = Vec::new();
    for (z, norm) in vs {
        let mut trial = chosen.clone();
        trial.push(to_q(&z));
        if rank_of(&trial) > chosen.len() {
            chosen = trial;
            // Back to the caller's coordinates.
            let orig: Vec<BigInt> = (0..n).map(|i| (0..n).map(|j| &u[i][j] * &z[j]).sum()).collect();
            out.push((norm, orig));
            if out.len() == n {
                break;
            }
        }
    }
    assert_eq!(out.len(), n, "enumeration radius failed to certify all minima");
    out
}

/// Unimodular integer matrix whose first column is the primitive vector `z`.
fn extend_to_unimodular(z: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = z.len();
    let mut v = int_identity(n);
    let mut w: Vec<BigInt> = z.to_vec();
    if w[0].is_zero() {
        let k = w.iter().position(|x| !x.is_zero()).expect("nonzero vector");
        w.swap(0, k);
        v.swap(0, k);
    }
    for k in 1..n {
        if w[k].is_zero() {
            continue;
        }
        let e = num_integer::Integer::extended_gcd(&w[0], &w[k]);
        let (g, a, b) = (e.gcd, e.x, e.y);
        let p = &w[0] / &g;
        let r = &w[k] / &g;
        // [[a, b], [-r, p]] has determinant a p + b r = 1.
        let row0 = v[0].clone();
        let rowk = v[k].clone();
        v[0] = row0.iter().zip(&rowk).map(|(x, y)| &a * x + &b * y).collect();
        v[k] = row0.iter().zip(&rowk).map(|(x, y)| -&r * x + &p * y).collect();
        w[0] = g;
        w[k] = BigInt::zero();
    }
    assert!(w[0].abs().is_one(), "vector is not primitive");
    if w[0].is_negative() {
        v[0] = v[0].iter().map(|x| -x).collect();
    }
    // V z = e_1, so V^{-1} has first column z.
    let inv = inverse(&int_mat_to_q(&v)).expect("unimodular");
    inv.iter().map(|row| row.iter().map(|x| x.to_integer()).collect()).collect()
}

/// Korkine-Zolotarev reduction of a Gram matrix; returns the unimodular transform.
pub fn kz_reduce(m: &Mat) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut u = int_identity(n);
    for i in 0..n {
        let g = mat_mul(&mat_mul(&transpose(&int_mat_to_q(&u)), m), &int_mat_to_q(&u));
        // Gram of the tail projected orthogonally to the head (Schur complement).
        let proj: Mat = if i == 0 {
            g.clone()
        } else {
            let a: Mat = (0..i).map(|r| g[r][..i].to_vec()).collect();
            let b: Mat = (0..i).map(|r| g[r][i..].to_vec()).collect();
            let d: Mat = (i..n).map(|r| g[r][i..].to_vec()).collect();
            let ainv = inverse(&a).expect("independent head");
            let corr = mat_mul(&mat_mul(&transpose(&b), &ainv), &b);
            d.iter()
                .zip(&corr)
                .map(|(dr, cr)| dr.iter().zip(cr).map(|(x, y)| x - y).collect())
                .collect()
        };
        let shortest = gram_minima(&proj).swap_remove(0).1;
        let w = extend_to_unimodular(&shortest);
        let k = n - i;
        let mut next = u.clone();
        for row in 0..n {
            for col in 0..k {
                let mut s = BigInt::zero();
                for l in 0..k {
                    s += &u[row][i + l] * &w[l][col];
                }
                next[row][i + col] = s;
            }
        }
        u = next;
    }
    // Size reduction: |mu_ij| <= 1/2.
    let mut g = mat_mul(&mat_mul(&transpose(&int_mat_to_q(&u)), m), &int_mat_to_q(&u));
    for i in 1..n {
        for j in (0..i).rev() {
            let (mu, _) = gso(&g);
            let c = round_half_up(&mu[i][j]);
            if !c.is_zero() {
                add_column(&mut u, &mut g, i, j, &-c);
            }
        }
    }
    u
}

// ---------- normed lattices ----------

impl NormedLattice {
    pub fn new(basis: Mat, norm: Norm) -> Result<Self, LatticeError> {
        let r = basis.len();
        if r == 0 {
            return Err(LatticeError::Empty);
        }
        if r > MAX_RANK {
            return Err(LatticeError::RankTooLarge(r));
        }
        if basis.iter().any(|row| row.len() != r) {
            return Err(LatticeError::DimensionMismatch);
        }
        if determinant(&basis).is_zero() {
            return Err(LatticeError::Singular);
        }
        let facets = match &norm {
            Norm::Euclidean(g) => {
                if g.len() != r || g.iter().any(|row| row.len() != r) {
                    return Err(LatticeError::DimensionMismatch);
                }
                if !is_positive_definite(g) {
                    return Err(LatticeError::NotPositiveDefinite);
                }
                Vec::new()
            }
            Norm::Polytope(vs) => polytope_facets(vs, r)?,
        };
        Ok(NormedLattice { basis, norm, facets })
    }

    /// Standard lattice `Z^r` with the identity Gram matrix.
    pub fn standard(r: usize) -> Result<Self, LatticeError> {
        NormedLattice::new(identity(r), Norm::Euclidean(identity(r)))
    }

    pub fn euclidean_gram(basis: Mat, gram: Mat) -> Result<Self, LatticeError> {
        NormedLattice::new(basis, Norm::Euclidean(gram))
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn facets(&self) -> &[Vec<Q>] {
        &self.facets
    }

    /// Gram matrix `B^T G B` in lattice coordinates (Euclidean norms only).
    pub fn lattice_gram(&self) -> Option<Mat> {
        match &self.norm {
            Norm::Euclidean(g) => Some(mat_mul(&mat_mul(&transpose(&self.basis), g), &self.basis)),
            Norm::Polytope(_) => None,
        }
    }

    /// Ambient vector `B z`.
    pub fn vector(&self, z: &[BigInt]) -> Vec<Q> {
        mat_vec(&self.basis, &to_q(z))
    }

    /// Norm of an ambient vector.
    pub fn norm_of(&self, v: &[Q]) -> NormValue {
        match &self.norm {
            Norm::Euclidean(g) => NormValue::Squared(quad(g, v)),
            Norm::Polytope(_) => NormValue::Exact(gauge(&self.facets, v)),
        }
    }

    /// All successive minima with minimizing lattice coordinates.
    pub fn minima(&self) -> Vec<(NormValue, Vec<BigInt>)> {
        match &self.norm {
            Norm::Euclidean(_) => gram_minima(&self.lattice_gram().expect("euclidean"))
                .into_iter()
                .map(|(v, z)| (NormValue::Squared(v), z))
                .collect(),
            Norm::Polytope(vs) => self.polytope_minima(vs),
        }
    }

    fn polytope_minima(&self, vertices: &[Vec<Q>]) -> Vec<(NormValue, Vec<BigInt>)> {
        let r = self.rank();
        // |v|_E <= rho ||v|| with rho the largest Euclidean vertex length.
        let rho2 = vertices.iter().map(|v| dot(v, v)).max().expect("vertices");
        let euclid = mat_mul(&transpose(&self.basis), &self.basis);
        let (u, _) = lll(&euclid);
        let mut norms: Vec<Q> = (0..r)
            .map(|j| {
                let col: Vec<BigInt> = (0..r).map(|i| u[i][j].clone()).collect();
                gauge(&self.facets, &self.vector(&col))
            })
            .collect();
        norms.sort();
        let t = norms[r - 1].clone();
        let bound = &rho2 * &t * &t;
        let mut vs: Vec<(Vec<BigInt>, Q)> = enumerate(&euclid, &bound)
            .into_iter()
            .map(|(z, _)| {
                let g = gauge(&self.facets, &self.vector(&z));
                (z, g)
            })
            .filter(|(_, g)| g <= &t)
            .collect();
        vs.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let mut chosen: Vec<Vec<Q>> = Vec::new();
        let mut out = Vec::new();
        for (z, g) in vs {
            let mut trial = chosen.clone();
            trial.push(to_q(&z));
            if rank_of(&trial) > chosen.len() {
                chosen = trial;
                out.push((NormValue::Exact(g), z));
                if out.len() == r {
                    break;
                }
            }
        }
        assert_eq!(out.len(), r, "polytope enumeration failed to certify all minima");
        out
    }
}

/// `lambda_j`, squared for Euclidean norms.
pub fn successive_minima(l: &NormedLattice, j: usize) -> Result<NormValue, LatticeError> {
    if j == 0 || j > l.rank() {
        return Err(LatticeError::IndexOutOfRange(j));
    }
    Ok(l.minima().swap_remove(j - 1).0)
}

/// Minkowski functional `max_a a . v` over facet normals.
fn gauge(facets: &[Vec<Q>], v: &[Q]) -> Q {
    facets.iter().map(|a| dot(a, v)).max().unwrap_or_else(Q::zero)
}

/// Facet normals of a centrally symmetric, full-dimensional polytope.
pub fn polytope_facets(vertices: &[Vec<Q>], r: usize) -> Result<Vec<Vec<Q>>, LatticeError> {
    if vertices.iter().any(|v| v.len() != r) {
        return Err(LatticeError::DimensionMismatch);
    }
    for v in vertices {
        let neg: Vec<Q> = v.iter().map(|x| -x).collect();
        if !vertices.contains(&neg) {
            return Err(LatticeError::InvalidPolytope(String::from("vertex list is not closed under negation")));
        }
    }
    if rank_of(vertices) < r {
        return Err(LatticeError::InvalidPolytope(String::from("polytope is not full-dimensional")));
    }
    let mut facets: Vec<Vec<Q>> = Vec::new();
    let m = vertices.len();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let sub: Mat = idx.iter().map(|&i| vertices[i].clone()).collect();
        if let Some(inv) = inverse(&sub) {
            // a with a . v_i = 1 on the chosen vertices.
            let ones = vec![Q::one(); r];
            let a = mat_vec(&inv, &ones);
            if vertices.iter().all(|v| dot(&a, v) <= Q::one()) && !facets.contains(&a) {
                let tight: Vec<Vec<Q>> = vertices.iter().filter(|v| dot(&a, v) == Q::one()).cloned().collect();
                if rank_of(&tight) == r {
                    facets.push(a);
                }
            }
        }
        // Next r-subset in lexicographic order.
        let mut k = r;
        loop {
            if k == 0 {
                facets.sort();
                return Ok(facets);
            }
            k -= 1;
            if idx[k] < m - r + k {
                idx[k] += 1;
                for l in k + 1..r {
                    idx[l] = idx[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Dual lattice `{ phi : phi(L) in Z }` with the dual norm.
pub fn dual_lattice(l: &NormedLattice) -> Result<NormedLattice, LatticeError> {
    let binv = inverse(&l.basis).ok_or(LatticeError::Singular)?;
    let basis = transpose(&binv);
    let norm = match &l.norm {
        Norm::Euclidean(g) => Norm::Euclidean(inverse(g).ok_or(LatticeError::NotPositiveDefinite)?),
        Norm::Polytope(_) => Norm::Polytope(l.facets.clone()),
    };
    NormedLattice::new(basis, norm)
}

/// Inscribed ellipsoid `E = { v^T G v <= 1 }` with `E in K in f E`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sandwich {
    pub gram: Mat,
    /// `f^2`, the squared distortion; John's theorem allows `r`.
    pub distortion_sq: Q,
}

/// Minimum-volume enclosing ellipsoid of the vertices by Khachiyan's iteration
/// (floating point), rounded to rationals and rescaled exactly to be inscribed.
pub fn polytope_sandwich(vertices: &[Vec<Q>], facets: &[Vec<Q>]) -> Sandwich {
    let r = vertices[0].len();
    // Interior and edge points slow Khachiyan's iteration down badly; keep true vertices.
    let extreme: Vec<&Vec<Q>> = vertices
        .iter()
        .filter(|v| {
            let tight: Vec<Vec<Q>> =
                facets.iter().filter(|a| a.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<Q>().is_one()).cloned().collect();
            rank_of(&tight) == r
        })
        .collect();
    let pts: Vec<Vec<f64>> = extreme.iter().map(|v| v.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    let m = pts.len();
    let mut w = vec![1.0 / m as f64; m];
    let d = r as f64;
    let mut minv = vec![vec![0.0; r]; r];
    for _ in 0..20000 {
        let mut mm = vec![vec![0.0; r]; r];
        for (p, wi) in pts.iter().zip(&w) {
            for i in 0..r {
                for j in 0..r {
                    mm[i][j] += wi * p[i] * p[j];
                }
            }
        }
        minv = f64_inverse(&mm);
        let kappa: Vec<f64> = pts
            .iter()
            .map(|p| {
                let mut s = 0.0;
                for i in 0..r {
                    for j in 0..r {
                        s += p[i] * minv[i][j] * p[j];
                    }
                }
                s
            })
            .collect();
        let (jmax, kmax) = kappa.iter().enumerate().fold((0, f64::MIN), |acc, (i, &k)| if k > acc.1 { (i, k) } else { acc });
        if kmax <= d * (1.0 + 1e-9) {
            break;
        }
        let step = (kmax - d) / (d * (kmax - 1.0));
        for x in w.iter_mut() {
            *x *= 1.0 - step;
        }
        w[jmax] += step;
    }
    // Enclosing ellipsoid { v^T (M^{-1}/d) v <= 1 }; round to rationals.
    let scale = 1u64 << 40;
    let mut g: Mat = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let v = 0.5 * (minv[i][j] + minv[j][i]) / d;
                    Q::new(BigInt::from((v * scale as f64).round() as i64), BigInt::from(scale))
                })
                .collect()
        })
        .collect();
    if !is_positive_definite(&g) {
        g = identity(r);
    }
    // Inscribe: support of E in direction a is sqrt(a^T G^{-1} a) and must be <= 1.
    let ginv = inverse(&g).expect("positive definite");
    let s = facets.iter().map(|a| quad(&ginv, a)).max().expect("facets");
    let g: Mat = g.iter().map(|row| row.iter().map(|x| x * &s).collect()).collect();
    let distortion_sq = vertices.iter().map(|v| quad(&g, v)).max().expect("vertices");
    Sandwich { gram: g, distortion_sq }
}

fn f64_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap()).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// A reduced basis `u_1..u_r` of the dual lattice with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDualBasis {
    /// Dual vectors in ambient dual coordinates.
    pub vectors: Vec<Vec<Q>>,
    /// Integer change of basis from the canonical dual basis (columns).
    pub transform: Vec<Vec<BigInt>>,
    pub dual_norms: Vec<NormValue>,
    /// `lambda_1` of the primal lattice by independent enumeration.
    pub lambda1: NormValue,
    /// `max_i (|u_i|* lambda_1)^2`, to be compared with `r^4`.
    pub achieved_sq: Q,
    /// Squared distortion of the Euclideanization (polytope norms only).
    pub distortion_sq: Option<Q>,
}

/// Korkine-Zolotarev reduced dual basis with `|u_i|* <= r^2 / lambda_1` verified.
pub fn reduced_dual_basis(l: &NormedLattice) -> Result<ReducedDualBasis, LatticeError> {
    let r = l.rank();
    let dual = dual_lattice(l)?;
    let lambda1 = l.minima().swap_remove(0).0;
    let (euclid_gram, distortion_sq) = match &l.norm {
        Norm::Euclidean(g) => (inverse(g).expect("positive definite"), None),
        Norm::Polytope(vs) => {
            // Euclideanize the dual norm via the sandwich of the dual unit ball.
            let sw = polytope_sandwich(&l.facets, vs);
            (sw.gram, Some(sw.distortion_sq))
        }
    };
    let gram = mat_mul(&mat_mul(&transpose(&dual.basis), &euclid_gram), &dual.basis);
    let u = kz_reduce(&gram);
    let uq = int_mat_to_q(&u);
    let vectors_mat = mat_mul(&dual.basis, &uq);
    let vectors: Vec<Vec<Q>> = (0..r).map(|j| (0..r).map(|i| vectors_mat[i][j].clone()).collect()).collect();
    let det = determinant(&uq);
    assert!(det.abs().is_one(), "change of basis is not unimodular");
    let dual_norms: Vec<NormValue> = vectors.iter().map(|v| dual.norm_of(v)).collect();
    let l1 = lambda1.squared();
    let bound = q((r * r * r * r) as i64);
    let mut achieved_sq = Q::zero();
    for (i, nv) in dual_norms.iter().enumerate() {
        let c = nv.squared() * &l1;
        if c > bound {
            return Err(LatticeError::BoundViolated { index: i + 1 });
        }
        if c > achieved_sq {
            achieved_sq = c;
        }
    }
    Ok(ReducedDualBasis { vectors, transform: u, dual_norms, lambda1, achieved_sq, distortion_sq })
}

/// `lambda_1(L)^2`, `lambda_r(L*)^2` and their product, which must not exceed `r^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transference {
    pub lambda1_sq: Q,
    pub dual_lambda_r_sq: Q,
    pub product_sq: Q,
    pub holds: bool,
}

pub fn transference_check(l: &NormedLattice) -> Result<Transference, LatticeError> {
    if !matches!(l.norm, Norm::Euclidean(_)) {
        return Err(LatticeError::InvalidPolytope(String::from("transference check needs a Euclidean norm")));
    }
    let r = l.rank();
    let lambda1_sq = l.minima().swap_remove(0).0.squared();
    let dual = dual_lattice(l)?;
    let dual_lambda_r_sq = dual.minima().swap_remove(r - 1).0.squared();
    let product_sq = &lambda1_sq * &dual_lambda_r_sq;
    let holds = product_sq <= q((r * r) as i64);
    Ok(Transference { lambda1_sq, dual_lambda_r_sq, product_sq, holds })
}
