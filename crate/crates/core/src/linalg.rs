//! Dense complex matrix helpers shared by the algebra and module layers.
//!
//! Everything here works on plain `DMatrix<Complex64>` and knows nothing about
//! block structure. Hermitian eigenproblems go through nalgebra; singular value
//! decompositions go through faer, whose SVD stays accurate on the
//! rank-deficient matrices that range and rank questions produce.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `(m + m*) / 2`.
pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitize(m)).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition of the Hermitian part of `m`: eigenvalues (unsorted)
/// and the unitary whose columns are the matching eigenvectors.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(hermitize(m));
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `U diag(f(λ)) U*` for Hermitian `m`.
pub fn hermitian_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (values, vectors) = hermitian_eigen(m);
    let n = values.len();
    let mut scaled = vectors.clone();
    for j in 0..n {
        let s = Complex64::from(f(values[j]));
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    hermitize(&(scaled * vectors.adjoint()))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    thin_svd(m).1
}

/// `m = U diag(s) V*` with `U: r×k`, `V: c×k`, `k = min(r, c)`.
pub fn thin_svd(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (r, c) = m.shape();
    let a = faer::Mat::<faer::c64>::from_fn(r, c, |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    });
    let svd = a.thin_svd().expect("SVD converges on finite input");
    let back = |x: faer::MatRef<'_, faer::c64>| {
        CMat::from_fn(x.nrows(), x.ncols(), |i, j| {
            let z = x[(i, j)];
            Complex64::new(z.re, z.im)
        })
    };
    let s = svd.S().column_vector();
    let values = (0..s.nrows()).map(|k| s[k].re).collect();
    (back(svd.U()), values, back(svd.V()))
}

/// Largest singular value; zero for an empty matrix.
pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Numerical rank: singular values at or below `rank_tol * σ_max` count as zero.
pub fn rank(m: &CMat, rank_tol: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// Moore–Penrose pseudo-inverse with a relative singular-value cutoff.
pub fn pinv(m: &CMat, rank_tol: f64) -> CMat {
    let (r, c) = m.shape();
    if m.is_empty() {
        return CMat::zeros(c, r);
    }
    let (u, sv, v) = thin_svd(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return CMat::zeros(c, r);
    }
    let cutoff = rank_tol * smax;
    let mut out = CMat::zeros(c, r);
    for (k, &s) in sv.iter().enumerate() {
        if s > cutoff {
            out += (v.column(k) * u.column(k).adjoint()).unscale(s);
        }
    }
    out
}

/// Orthonormal basis of the column space of `m` together with the matching
/// singular values.
pub fn range_basis(m: &CMat, rank_tol: f64) -> (CMat, Vec<f64>) {
    let rows = m.nrows();
    if m.is_empty() {
        return (CMat::zeros(rows, 0), Vec::new());
    }
    let (u, sv, _) = thin_svd(m);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sv.len())
        .filter(|&k| smax > 0.0 && sv[k] > rank_tol * smax)
        .collect();
    let mut basis = CMat::zeros(rows, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        basis.set_column(j, &u.column(k));
    }
    (basis, keep.iter().map(|&k| sv[k]).collect())
}

/// Least `λ ≥ 0` with `p ⪯ λ·f f*`, restricted to the range of `f`.
///
/// Returns `None` when the range of the positive matrix `p` is not contained
/// in the range of `f`, i.e. when `‖(I − Π) p (I − Π)‖ > tol·max(1, ‖p‖)` for
/// the orthogonal projector `Π` onto `range(f)`.
pub fn pencil_sup(p: &CMat, f: &CMat, rank_tol: f64, tol: f64) -> Option<f64> {
    let n = p.nrows();
    let (basis, sigma) = range_basis(f, rank_tol);
    let proj = &basis * basis.adjoint();
    let complement = CMat::identity(n, n) - proj;
    let leak = spectral_norm(&(&complement * p * &complement));
    if leak > tol * spectral_norm(p).max(1.0) {
        return None;
    }
    if sigma.is_empty() {
        return Some(0.0);
    }
    let mut reduced = basis.adjoint() * p * &basis;
    for i in 0..sigma.len() {
        for j in 0..sigma.len() {
            reduced[(i, j)] /= sigma[i] * sigma[j];
        }
    }
    let top = hermitian_eigenvalues(&reduced).last().copied().unwrap_or(0.0);
    Some(top.max(0.0))
}
