//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn from_real(m: &DMatrix<f64>) -> CMat {
    m.map(c)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.ncols()))
}

/// Max-entry defect of `P^2 = P` and `P = P^dagger`.
pub fn projector_defect(p: &CMat) -> f64 {
    max_abs_diff(&(p * p), p).max(hermiticity_defect(p))
}

pub fn require_square(m: &CMat) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension { expected: m.nrows(), found: m.ncols() });
    }
    Ok(m.nrows())
}

/// Kronecker product with `a` as the more significant factor.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors in matching columns.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `f(M)` for Hermitian `M` through its eigen-decomposition.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let diag = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&v| c(f(v)))));
    &vecs * diag * vecs.adjoint()
}

/// Rotation angles for the Hermitian pencils used by [`unitary_eigen`].
const PENCIL_ANGLES: [f64; 4] = [0.6180339887498949, 2.414213562373095, 1.324717957244746, 0.2360679774997897];

/// Eigenvalues and eigenvectors of a unitary (or any normal) matrix.
///
/// Diagonalises the Hermitian part of `exp(-i t) U`; clusters of equal
/// pencil eigenvalues are split by recursing on the projected block with
/// the next angle. Unlike an unshifted Schur iteration this terminates on
/// highly degenerate spectra such as reflections.
pub fn unitary_eigen(u: &CMat) -> (Vec<Complex64>, CMat) {
    normal_eigen(u, 0)
}

fn normal_eigen(u: &CMat, depth: usize) -> (Vec<Complex64>, CMat) {
    let n = u.nrows();
    if n == 1 {
        return (vec![u[(0, 0)]], identity(1));
    }
    let mean = u.trace() / n as f64;
    if max_abs_diff(u, &(identity(n) * mean)) < 1e-13 {
        return (vec![mean; n], identity(n));
    }
    if depth == PENCIL_ANGLES.len() {
        let (q, t) = u.clone().schur().unpack();
        return ((0..n).map(|i| t[(i, i)]).collect(), q);
    }
    let rot = Complex64::from_polar(1.0, -PENCIL_ANGLES[depth]);
    let pencil = (u * rot + u.adjoint() * rot.conj()).scale(0.5);
    let (vals, vecs) = hermitian_eigen(&pencil);
    let mut values = Vec::with_capacity(n);
    let mut columns = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end] - vals[end - 1] < 1e-9 {
            end += 1;
        }
        let basis = vecs.columns(start, end - start).into_owned();
        let block = basis.adjoint() * u * &basis;
        let (bv, bw) = normal_eigen(&block, depth + 1);
        let rotated = &basis * bw;
        values.extend(bv);
        columns.extend(rotated.column_iter().map(|c| c.into_owned()));
        start = end;
    }
    (values, CMat::from_columns(&columns))
}

pub fn unitary_eigenvalues(u: &CMat) -> Vec<Complex64> {
    unitary_eigen(u).0
}

/// Phase of `z` in cycles on the branch `(-1/2, 1/2]`.
pub fn phase_of(z: Complex64) -> f64 {
    let p = z.arg() / (2.0 * std::f64::consts::PI);
    if p <= -0.5 {
        p + 1.0
    } else {
        p
    }
}

/// Eigenphases of a unitary in cycles, sorted ascending.
pub fn eigenphases(u: &CMat) -> Vec<f64> {
    let mut p: Vec<f64> = unitary_eigenvalues(u).into_iter().map(phase_of).collect();
    p.sort_by(f64::total_cmp);
    p
}

/// Distance between two phases on the unit circle of cycles.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Largest deviation after optimally pairing two phase multisets on the
/// circle. Lengths must agree.
pub fn phase_multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    let mut a_sorted = a.to_vec();
    a_sorted.sort_by(f64::total_cmp);
    for &x in &a_sorted {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &y)| (j, circular_distance(x, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// `M^k` by repeated squaring.
pub fn matrix_power(m: &CMat, mut k: u64) -> CMat {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `|v><v|` for a column vector.
pub fn outer(v: &CVec) -> CMat {
    v * v.adjoint()
}

/// Projector onto the column span of `basis`, assumed orthonormal.
pub fn span_projector(basis: &CMat) -> CMat {
    basis * basis.adjoint()
}

/// `min_s ||v - s w||^2` over unit-modulus `s`, for unit vectors.
pub fn phase_aligned_distance_sq(v: &CVec, w: &CVec) -> f64 {
    (2.0 - 2.0 * v.dotc(w).norm()).max(0.0)
}
