//! The free Hilbert module `H = A^m` and its adjointable operators.
//!
//! Conventions: `A` acts on the left, the inner product is linear in the first
//! slot, `⟨x, y⟩ = Σ_i x_i y_i*`. An adjointable operator `T: A^m → A^k` is an
//! `m × k` matrix of algebra elements acting by right coefficients,
//! `(Tx)_j = Σ_i x_i M_ij`, which makes it A-linear by construction.
//!
//! Composition of such operators multiplies the raw A-matrices in reverse
//! order. The realization `φ` fixes that: per algebra block `b`, gather
//! `M_b = [(M_ij)_b]` into one `(m·d_b) × (k·d_b)` complex matrix and take its
//! plain (unconjugated) transpose. Then `φ(T₁T₂) = φ(T₁)φ(T₂)` and
//! `φ(T*) = φ(T)*`, so spectra, norms and pseudo-inverses of operators become
//! ordinary dense computations.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraSpec};
use crate::error::{FrameError, Result};
use crate::linalg::{self, CMat};

/// Singular values below `RANK_TOL · σ_max` are treated as zero.
pub const RANK_TOL: f64 = 1e-10;

/// A vector `x = (x_1, …, x_m) ∈ A^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct ModuleVector {
    spec: AlgebraSpec,
    entries: Vec<AlgebraElement>,
}

impl ModuleVector {
    pub fn new(spec: AlgebraSpec, entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.is_empty() {
            return Err(FrameError::structural("module rank must be at least 1"));
        }
        if let Some(bad) = entries.iter().position(|e| e.spec() != &spec) {
            return Err(FrameError::structural(format!(
                "entry {bad} does not belong to the algebra [{spec}]"
            )));
        }
        Ok(ModuleVector { spec, entries })
    }

    pub fn zero(spec: &AlgebraSpec, rank: usize) -> Self {
        ModuleVector {
            spec: spec.clone(),
            entries: vec![AlgebraElement::zero(spec); rank.max(1)],
        }
    }

    /// The standard generator `e_i` with `(e_i)_j = δ_ij · 1`.
    pub fn generator(spec: &AlgebraSpec, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(spec, rank);
        v.entries[i] = AlgebraElement::unit(spec);
        v
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &AlgebraElement {
        &self.entries[i]
    }

    /// Module action `a · x`.
    pub fn left_mul(&self, a: &AlgebraElement) -> Result<Self> {
        if a.spec() != &self.spec {
            return Err(FrameError::structural("coefficient from a different algebra"));
        }
        Ok(ModuleVector {
            spec: self.spec.clone(),
            entries: self.entries.iter().map(|x| a * x).collect(),
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        ModuleVector {
            spec: self.spec.clone(),
            entries: self.entries.iter().map(|x| x.scale(c)).collect(),
        }
    }

    /// The A-valued inner product `Σ_i x_i y_i*`.
    pub fn inner(&self, other: &ModuleVector) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        let mut acc = AlgebraElement::zero(&self.spec);
        for (x, y) in self.entries.iter().zip(&other.entries) {
            acc = &acc + &(x * &y.adjoint());
        }
        Ok(acc)
    }

    /// `‖x‖ = ‖⟨x, x⟩‖^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.inner(self).expect("self-compatible").cstar_norm().sqrt()
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &ModuleVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).max_abs_entry())
            .fold(0.0, f64::max)
    }

    /// Coordinates in block `b` as an `(m·d_b) × d_b` matrix; column `c` is the
    /// flattened row `c` of `[x_1 | … | x_m]_b`. Realized operators act on these
    /// by left multiplication.
    pub fn coordinates(&self, b: usize) -> CMat {
        let d = self.spec.block_dims()[b];
        let m = self.rank();
        let mut out = CMat::zeros(m * d, d);
        for (i, x) in self.entries.iter().enumerate() {
            let xb = x.block(b);
            for p in 0..d {
                for q in 0..d {
                    out[(i * d + q, p)] = xb[(p, q)];
                }
            }
        }
        out
    }

    /// Inverse of [`ModuleVector::coordinates`] over all blocks.
    pub fn from_coordinates(spec: &AlgebraSpec, rank: usize, coords: &[CMat]) -> Result<Self> {
        if coords.len() != spec.num_blocks() {
            return Err(FrameError::structural("one coordinate matrix per block expected"));
        }
        let mut entries = vec![Vec::with_capacity(spec.num_blocks()); rank];
        for (b, (&d, c)) in spec.block_dims().iter().zip(coords).enumerate() {
            if c.shape() != (rank * d, d) {
                return Err(FrameError::structural(format!(
                    "coordinates for block {b} have shape {:?}",
                    c.shape()
                )));
            }
            for (i, blocks) in entries.iter_mut().enumerate() {
                let mut xb = CMat::zeros(d, d);
                for p in 0..d {
                    for q in 0..d {
                        xb[(p, q)] = c[(i * d + q, p)];
                    }
                }
                blocks.push(xb);
            }
        }
        let entries = entries
            .into_iter()
            .map(|blocks| AlgebraElement::from_blocks(spec.clone(), blocks))
            .collect::<Result<Vec<_>>>()?;
        ModuleVector::new(spec.clone(), entries)
    }

    fn check_compatible(&self, other: &ModuleVector) -> Result<()> {
        if self.spec != other.spec {
            return Err(FrameError::structural("vectors over different algebras"));
        }
        if self.rank() != other.rank() {
            return Err(FrameError::structural(format!(
                "rank mismatch: {} vs {}",
                self.rank(),
                other.rank()
            )));
        }
        Ok(())
    }
}

impl Add for &ModuleVector {
    type Output = ModuleVector;
    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        self.check_compatible(rhs).expect("incompatible vectors");
        ModuleVector {
            spec: self.spec.clone(),
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ModuleVector {
    type Output = ModuleVector;
    fn sub(self, rhs: &ModuleVector) -> ModuleVector {
        self.check_compatible(rhs).expect("incompatible vectors");
        ModuleVector {
            spec: self.spec.clone(),
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Per-block complex matrices `φ(T)_b`, each of shape `(k·d_b) × (m·d_b)` for
/// `T: A^m → A^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockRealization {
    pub blocks: Vec<CMat>,
}

impl BlockRealization {
    pub fn compose(&self, rhs: &BlockRealization) -> BlockRealization {
        BlockRealization {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn adjoint(&self) -> BlockRealization {
        BlockRealization {
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// Largest spectral norm over blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &BlockRealization) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// An adjointable map `T: A^m → A^k`, stored as its `m × k` A-matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct ModuleOperator {
    spec: AlgebraSpec,
    dom: usize,
    cod: usize,
    mat: Vec<Vec<AlgebraElement>>,
}

impl ModuleOperator {
    /// `mat` is indexed `[domain index][codomain index]`.
    pub fn new(spec: AlgebraSpec, dom: usize, cod: usize, mat: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        if dom == 0 || cod == 0 {
            return Err(FrameError::structural(
                "operators between rank-0 modules are not supported",
            ));
        }
        if mat.len() != dom || mat.iter().any(|row| row.len() != cod) {
            return Err(FrameError::structural(format!("A-matrix is not {dom}×{cod}")));
        }
        if mat.iter().flatten().any(|e| e.spec() != &spec) {
            return Err(FrameError::structural("A-matrix entry from a different algebra"));
        }
        Ok(ModuleOperator { spec, dom, cod, mat })
    }

    pub fn from_fn(
        spec: &AlgebraSpec,
        dom: usize,
        cod: usize,
        mut f: impl FnMut(usize, usize) -> AlgebraElement,
    ) -> Result<Self> {
        let mat = (0..dom).map(|i| (0..cod).map(|j| f(i, j)).collect()).collect();
        Self::new(spec.clone(), dom, cod, mat)
    }

    pub fn identity(spec: &AlgebraSpec, rank: usize) -> Result<Self> {
        Self::from_fn(spec, rank, rank, |i, j| {
            if i == j {
                AlgebraElement::unit(spec)
            } else {
                AlgebraElement::zero(spec)
            }
        })
    }

    pub fn zero(spec: &AlgebraSpec, dom: usize, cod: usize) -> Result<Self> {
        Self::from_fn(spec, dom, cod, |_, _| AlgebraElement::zero(spec))
    }

    /// Diagonal operator on `A^m` with the given diagonal entries.
    pub fn diagonal(spec: &AlgebraSpec, diag: &[AlgebraElement]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(spec, n, n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                AlgebraElement::zero(spec)
            }
        })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn dom_rank(&self) -> usize {
        self.dom
    }

    pub fn cod_rank(&self) -> usize {
        self.cod
    }

    pub fn is_square(&self) -> bool {
        self.dom == self.cod
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.mat[i][j]
    }

    pub fn matrix(&self) -> &[Vec<AlgebraElement>] {
        &self.mat
    }

    /// `(Tx)_j = Σ_i x_i M_ij`.
    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        if x.spec() != &self.spec {
            return Err(FrameError::structural("vector from a different algebra"));
        }
        if x.rank() != self.dom {
            return Err(FrameError::structural(format!(
                "operator expects rank {}, vector has rank {}",
                self.dom,
                x.rank()
            )));
        }
        let entries = (0..self.cod)
            .map(|j| {
                let mut acc = AlgebraElement::zero(&self.spec);
                for i in 0..self.dom {
                    acc = &acc + &(x.entry(i) * &self.mat[i][j]);
                }
                acc
            })
            .collect();
        ModuleVector::new(self.spec.clone(), entries)
    }

    /// `T*`, with A-matrix `(M*)_{ji} = (M_ij)*`.
    pub fn adjoint(&self) -> ModuleOperator {
        let mat = (0..self.cod)
            .map(|j| (0..self.dom).map(|i| self.mat[i][j].adjoint()).collect())
            .collect();
        ModuleOperator {
            spec: self.spec.clone(),
            dom: self.cod,
            cod: self.dom,
            mat,
        }
    }

    /// `self ∘ inner`: apply `inner` first. The raw A-matrix is
    /// `mat(inner) · mat(self)`.
    pub fn compose(&self, inner: &ModuleOperator) -> Result<ModuleOperator> {
        if inner.spec != self.spec {
            return Err(FrameError::structural("operators over different algebras"));
        }
        if inner.cod != self.dom {
            return Err(FrameError::structural(format!(
                "cannot compose: inner codomain rank {} vs outer domain rank {}",
                inner.cod, self.dom
            )));
        }
        Self::from_fn(&self.spec, inner.dom, self.cod, |i, l| {
            let mut acc = AlgebraElement::zero(&self.spec);
            for j in 0..self.dom {
                acc = &acc + &(&inner.mat[i][j] * &self.mat[j][l]);
            }
            acc
        })
    }

    pub fn scale(&self, c: f64) -> ModuleOperator {
        self.map_entries(|e| e.scale(c))
    }

    pub fn checked_add(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.zip_entries(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.zip_entries(other, |a, b| a - b)
    }

    /// Per-block `(m·d_b) × (k·d_b)` matrix of the raw A-matrix.
    fn gathered_block(&self, b: usize) -> CMat {
        let d = self.spec.block_dims()[b];
        let mut out = CMat::zeros(self.dom * d, self.cod * d);
        for i in 0..self.dom {
            for j in 0..self.cod {
                out.view_mut((i * d, j * d), (d, d)).copy_from(self.mat[i][j].block(b));
            }
        }
        out
    }

    /// The realization `φ(T)`.
    pub fn realize(&self) -> BlockRealization {
        BlockRealization {
            blocks: (0..self.spec.num_blocks())
                .map(|b| self.gathered_block(b).transpose())
                .collect(),
        }
    }

    /// `φ⁻¹`: rebuild `T: A^dom → A^cod` from blocks of shape `(cod·d) × (dom·d)`.
    pub fn from_realization(
        spec: &AlgebraSpec,
        dom: usize,
        cod: usize,
        real: &BlockRealization,
    ) -> Result<ModuleOperator> {
        if real.blocks.len() != spec.num_blocks() {
            return Err(FrameError::structural(
                "one realization block per algebra block expected",
            ));
        }
        for (b, (&d, blk)) in spec.block_dims().iter().zip(&real.blocks).enumerate() {
            if blk.shape() != (cod * d, dom * d) {
                return Err(FrameError::structural(format!(
                    "realization block {b} has shape {:?}, expected ({}, {})",
                    blk.shape(),
                    cod * d,
                    dom * d
                )));
            }
        }
        let gathered: Vec<CMat> = real.blocks.iter().map(|m| m.transpose()).collect();
        Self::from_fn(spec, dom, cod, |i, j| {
            let blocks = spec
                .block_dims()
                .iter()
                .zip(&gathered)
                .map(|(&d, g)| g.view((i * d, j * d), (d, d)).into_owned())
                .collect();
            AlgebraElement::from_blocks(spec.clone(), blocks).expect("block shapes checked")
        })
    }

    /// `‖T‖`, the largest singular value of `φ(T)` over all blocks.
    pub fn operator_norm(&self) -> f64 {
        self.realize().norm()
    }

    /// Smallest and largest eigenvalue of the Hermitian part of `φ(T)` over all
    /// blocks. Only meaningful for square operators.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for blk in self.realize().blocks {
            let ev = linalg::hermitian_eigenvalues(&blk);
            lo = lo.min(ev[0]);
            hi = hi.max(ev[ev.len() - 1]);
        }
        (lo, hi)
    }

    /// Rank-one probe vectors built from the extreme eigenvectors of every
    /// block of `φ(T)`: for such an `x`, `⟨Tx, x⟩` is the matching eigenvalue
    /// placed in a single block. Square operators only.
    pub fn eigenvector_probes(&self) -> Vec<ModuleVector> {
        let mut probes = Vec::new();
        for (b, blk) in self.realize().blocks.iter().enumerate() {
            let (values, vectors) = linalg::hermitian_eigen(blk);
            let lo = (0..values.len()).min_by(|&i, &j| values[i].total_cmp(&values[j]));
            let hi = (0..values.len()).max_by(|&i, &j| values[i].total_cmp(&values[j]));
            for k in [lo, hi].into_iter().flatten() {
                let coords: Vec<CMat> = self
                    .spec
                    .block_dims()
                    .iter()
                    .enumerate()
                    .map(|(c, &d)| {
                        let mut m = CMat::zeros(self.dom * d, d);
                        if c == b {
                            m.set_column(0, &vectors.column(k));
                        }
                        m
                    })
                    .collect();
                if let Ok(v) = ModuleVector::from_coordinates(&self.spec, self.dom, &coords) {
                    probes.push(v);
                }
            }
        }
        probes
    }

    /// Every block of `φ(T)` is Hermitian positive semidefinite within `tol`
    /// (scaled by `max(1, ‖block‖)`).
    pub fn is_positive_operator(&self, tol: f64) -> Result<bool> {
        if !self.is_square() {
            return Err(FrameError::structural("positivity needs a square operator"));
        }
        Ok(self.realize().blocks.iter().all(|blk| {
            let scale = linalg::spectral_norm(blk).max(1.0);
            let asym = linalg::spectral_norm(&(blk - blk.adjoint()));
            asym <= tol * scale && linalg::hermitian_eigenvalues(blk).first().copied().unwrap_or(0.0) >= -tol * scale
        }))
    }

    /// Blockwise Moore–Penrose pseudo-inverse through `φ`.
    pub fn pseudo_inverse(&self, rank_tol: f64) -> ModuleOperator {
        let real = self.realize();
        let inv = BlockRealization {
            blocks: real.blocks.iter().map(|b| linalg::pinv(b, rank_tol)).collect(),
        };
        Self::from_realization(&self.spec, self.cod, self.dom, &inv).expect("pinv shapes")
    }

    /// Inverse of a positive invertible operator. Fails with a domain error when
    /// the smallest eigenvalue of `φ(T)` is not above `tol`.
    pub fn positive_inverse(&self, tol: f64) -> Result<ModuleOperator> {
        if !self.is_square() {
            return Err(FrameError::structural("inverse needs a square operator"));
        }
        let (lo, _) = self.spectral_bounds();
        if lo.is_nan() || lo <= tol {
            return Err(FrameError::domain(format!(
                "operator is not invertible (smallest eigenvalue {lo:e})"
            )));
        }
        let inv = BlockRealization {
            blocks: self
                .realize()
                .blocks
                .iter()
                .map(|b| linalg::hermitian_map(b, |v| 1.0 / v))
                .collect(),
        };
        Self::from_realization(&self.spec, self.dom, self.cod, &inv)
    }

    /// Largest absolute coordinate difference of the A-matrices.
    pub fn max_abs_diff(&self, other: &ModuleOperator) -> f64 {
        self.mat
            .iter()
            .flatten()
            .zip(other.mat.iter().flatten())
            .map(|(a, b)| (a - b).max_abs_entry())
            .fold(0.0, f64::max)
    }

    fn map_entries(&self, f: impl Fn(&AlgebraElement) -> AlgebraElement) -> ModuleOperator {
        ModuleOperator {
            spec: self.spec.clone(),
            dom: self.dom,
            cod: self.cod,
            mat: self.mat.iter().map(|row| row.iter().map(&f).collect()).collect(),
        }
    }

    fn zip_entries(
        &self,
        other: &ModuleOperator,
        f: impl Fn(&AlgebraElement, &AlgebraElement) -> AlgebraElement,
    ) -> Result<ModuleOperator> {
        if self.spec != other.spec || self.dom != other.dom || self.cod != other.cod {
            return Err(FrameError::structural("operators differ in algebra or shape"));
        }
        Ok(ModuleOperator {
            spec: self.spec.clone(),
            dom: self.dom,
            cod: self.cod,
            mat: self
                .mat
                .iter()
                .zip(&other.mat)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
                .collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    rank: usize,
    entries: Vec<AlgebraElement>,
}

impl From<ModuleVector> for VectorRepr {
    fn from(v: ModuleVector) -> Self {
        VectorRepr {
            rank: v.entries.len(),
            entries: v.entries,
        }
    }
}

impl TryFrom<VectorRepr> for ModuleVector {
    type Error = FrameError;

    fn try_from(r: VectorRepr) -> Result<Self> {
        if r.rank != r.entries.len() {
            return Err(FrameError::structural(format!(
                "rank {} but {} entries",
                r.rank,
                r.entries.len()
            )));
        }
        let spec = r
            .entries
            .first()
            .map(|e| e.spec().clone())
            .ok_or_else(|| FrameError::structural("vector without entries"))?;
        ModuleVector::new(spec, r.entries)
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    dom: usize,
    cod: usize,
    mat: Vec<Vec<AlgebraElement>>,
}

impl From<ModuleOperator> for OperatorRepr {
    fn from(t: ModuleOperator) -> Self {
        OperatorRepr {
            dom: t.dom,
            cod: t.cod,
            mat: t.mat,
        }
    }
}

impl TryFrom<OperatorRepr> for ModuleOperator {
    type Error = FrameError;

    fn try_from(r: OperatorRepr) -> Result<Self> {
        let spec = r
            .mat
            .first()
            .and_then(|row| row.first())
            .map(|e| e.spec().clone())
            .ok_or_else(|| FrameError::structural("operator without entries"))?;
        ModuleOperator::new(spec, r.dom, r.cod, r.mat)
    }
}

/// Complex scalar operator `c·I` on `A^m`.
pub fn scalar_operator(spec: &AlgebraSpec, rank: usize, c: f64) -> Result<ModuleOperator> {
    Ok(ModuleOperator::identity(spec, rank)?.scale(c))
}

/// Operator on `A^m` whose realization in every block is the given diagonal
/// pattern: entry `i` of the diagonal is `diag[i] · 1`.
pub fn scalar_diagonal_operator(spec: &AlgebraSpec, diag: &[f64]) -> Result<ModuleOperator> {
    let entries: Vec<AlgebraElement> = diag
        .iter()
        .map(|&v| AlgebraElement::scalar(spec, Complex64::new(v, 0.0)))
        .collect();
    ModuleOperator::diagonal(spec, &entries)
}
