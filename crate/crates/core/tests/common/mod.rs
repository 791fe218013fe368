//! Dense oracles. A vector of `A^m` is flattened entry by entry in the
//! matrix-unit basis, which is orthonormal for `tr⟨x, y⟩`; an operator becomes
//! the dense matrix of its action on that basis. Nothing here touches the
//! block realization.
#![allow(dead_code)]

use cstar_frames::{AlgebraElement, AlgebraSpec, ModuleVector};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type Dense = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn dim(spec: &AlgebraSpec, m: usize) -> usize {
    m * spec.block_dims().iter().map(|d| d * d).sum::<usize>()
}

pub fn basis(spec: &AlgebraSpec, m: usize) -> Vec<ModuleVector> {
    let mut out = Vec::new();
    for i in 0..m {
        for (b, &d) in spec.block_dims().iter().enumerate() {
            for r in 0..d {
                for col in 0..d {
                    let mut entries = vec![AlgebraElement::zero(spec); m];
                    entries[i] = AlgebraElement::matrix_unit(spec, b, r, col).unwrap();
                    out.push(ModuleVector::new(spec.clone(), entries).unwrap());
                }
            }
        }
    }
    out
}

pub fn flatten(v: &ModuleVector) -> DVector<Complex64> {
    let mut out = Vec::new();
    for e in v.entries() {
        for blk in e.blocks() {
            for r in 0..blk.nrows() {
                for col in 0..blk.ncols() {
                    out.push(blk[(r, col)]);
                }
            }
        }
    }
    DVector::from_vec(out)
}

/// Dense matrix of a ℂ-linear map `A^dom → A^cod`.
pub fn dense(spec: &AlgebraSpec, dom: usize, cod: usize, f: impl Fn(&ModuleVector) -> ModuleVector) -> Dense {
    let cols = basis(spec, dom);
    let mut out = Dense::zeros(dim(spec, cod), cols.len());
    for (k, e) in cols.iter().enumerate() {
        out.set_column(k, &flatten(&f(e)));
    }
    out
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigs(h: &Dense) -> Vec<f64> {
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eig(h: &Dense) -> f64 {
    eigs(h)[0]
}

pub fn max_eig(h: &Dense) -> f64 {
    *eigs(h).last().unwrap()
}

/// Dense frame operator `x ↦ Σ⟨x,f_n⟩f_n` built by direct summation.
pub fn dense_frame_operator(spec: &AlgebraSpec, m: usize, vectors: &[ModuleVector]) -> Dense {
    dense(spec, m, m, |x| {
        let mut acc = ModuleVector::zero(spec, m);
        for f in vectors {
            acc = &acc + &f.left_mul(&x.inner(f).unwrap()).unwrap();
        }
        acc
    })
}

/// `sup {C : S ⪰ C·P}` for positive definite `S`, by Cholesky whitening.
pub fn pencil_lower(s: &Dense, p: &Dense) -> f64 {
    let l = s.clone().cholesky().expect("positive definite").l();
    let li = l.try_inverse().unwrap();
    1.0 / max_eig(&(&li * p * li.adjoint()))
}

pub fn vec_diff(a: &ModuleVector, b: &ModuleVector) -> f64 {
    (flatten(a) - flatten(b)).norm()
}
