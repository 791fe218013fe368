//! Finite-dimensional C*-algebras `A = M_{d_1}(ℂ) ⊕ … ⊕ M_{d_B}(ℂ)`.
//!
//! Every finite-dimensional C*-algebra has this shape, so an element is just a
//! list of square complex blocks. The involution is the blockwise conjugate
//! transpose, the C*-norm is the largest singular value over all blocks, and
//! positivity and the Loewner order reduce to Hermitian eigenvalue tests.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::linalg::{self, CMat};

/// Block sizes `d_1..d_B` of `A = ⊕_b M_{d_b}(ℂ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AlgebraSpec {
    block_dims: Vec<usize>,
}

impl AlgebraSpec {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(FrameError::structural("algebra needs at least one block"));
        }
        if block_dims.contains(&0) {
            return Err(FrameError::structural("block dimensions must be positive"));
        }
        Ok(AlgebraSpec { block_dims })
    }

    /// `A = ℂ`.
    pub fn scalar() -> Self {
        AlgebraSpec { block_dims: vec![1] }
    }

    /// `A = M_d(ℂ)`.
    pub fn matrix(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn max_block_dim(&self) -> usize {
        self.block_dims.iter().copied().max().unwrap_or(0)
    }

    /// Complex dimension `Σ d_b²`.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().map(|d| d * d).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&d| d == 1)
    }
}

impl TryFrom<Vec<usize>> for AlgebraSpec {
    type Error = FrameError;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        AlgebraSpec::new(dims)
    }
}

impl From<AlgebraSpec> for Vec<usize> {
    fn from(spec: AlgebraSpec) -> Self {
        spec.block_dims
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.block_dims.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for AlgebraSpec {
    type Err = FrameError;

    /// Parses `"d1,d2,..."`.
    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|e| FrameError::Usage(format!("bad block size {part:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraSpec::new(dims)
    }
}

/// An element `a = (a_1, …, a_B)` of the algebra, one square block per summand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct AlgebraElement {
    spec: AlgebraSpec,
    blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn from_blocks(spec: AlgebraSpec, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != spec.num_blocks() {
            return Err(FrameError::structural(format!(
                "expected {} blocks, got {}",
                spec.num_blocks(),
                blocks.len()
            )));
        }
        for (b, (block, &d)) in blocks.iter().zip(spec.block_dims()).enumerate() {
            if block.shape() != (d, d) {
                return Err(FrameError::structural(format!(
                    "block {b} has shape {:?}, expected ({d}, {d})",
                    block.shape()
                )));
            }
        }
        Ok(AlgebraElement { spec, blocks })
    }

    pub fn zero(spec: &AlgebraSpec) -> Self {
        let blocks = spec.block_dims().iter().map(|&d| CMat::zeros(d, d)).collect();
        AlgebraElement {
            spec: spec.clone(),
            blocks,
        }
    }

    pub fn unit(spec: &AlgebraSpec) -> Self {
        Self::scalar(spec, linalg::ONE)
    }

    /// `c · 1`.
    pub fn scalar(spec: &AlgebraSpec, c: Complex64) -> Self {
        let blocks = spec.block_dims().iter().map(|&d| CMat::identity(d, d) * c).collect();
        AlgebraElement {
            spec: spec.clone(),
            blocks,
        }
    }

    /// Blockwise real diagonal element; `diagonals[b]` must have length `d_b`.
    pub fn diagonal(spec: &AlgebraSpec, diagonals: &[&[f64]]) -> Result<Self> {
        let blocks = diagonals
            .iter()
            .map(|diag| {
                let n = diag.len();
                let mut m = CMat::zeros(n, n);
                for (i, &v) in diag.iter().enumerate() {
                    m[(i, i)] = Complex64::new(v, 0.0);
                }
                m
            })
            .collect();
        Self::from_blocks(spec.clone(), blocks)
    }

    /// Matrix unit `E_{ij}` inside block `b` (zero in every other block).
    pub fn matrix_unit(spec: &AlgebraSpec, b: usize, i: usize, j: usize) -> Result<Self> {
        let d = *spec
            .block_dims()
            .get(b)
            .ok_or_else(|| FrameError::structural(format!("no block {b}")))?;
        if i >= d || j >= d {
            return Err(FrameError::structural(format!("index ({i},{j}) outside M_{d}")));
        }
        let mut e = Self::zero(spec);
        e.blocks[b][(i, j)] = linalg::ONE;
        Ok(e)
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &CMat {
        &self.blocks[b]
    }

    pub fn into_blocks(self) -> Vec<CMat> {
        self.blocks
    }

    /// `a*`: blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            spec: self.spec.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.scale_complex(Complex64::new(c, 0.0))
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        AlgebraElement {
            spec: self.spec.clone(),
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    /// Largest absolute entry over all blocks.
    pub fn max_abs_entry(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn cstar_norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// Ascending eigenvalues of the Hermitian part of every block, concatenated
    /// per block.
    pub fn hermitian_spectrum(&self) -> Vec<Vec<f64>> {
        self.blocks.iter().map(linalg::hermitian_eigenvalues).collect()
    }

    /// Smallest eigenvalue of the Hermitian part over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_spectrum()
            .iter()
            .filter_map(|ev| ev.first().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// `a ⪰ 0` up to a tolerance relative to `max(1, ‖a‖)`.
    pub fn is_positive(&self, tol: f64) -> bool {
        let scale = self.cstar_norm().max(1.0);
        let asym = (self - &self.adjoint()).cstar_norm();
        if asym > tol * scale {
            return false;
        }
        self.min_eigenvalue() >= -tol * scale
    }

    /// `self ⪯ other` in the Loewner order.
    pub fn loewner_leq(&self, other: &AlgebraElement, tol: f64) -> Result<bool> {
        self.check_same_spec(other)?;
        Ok((other - self).is_positive(tol))
    }

    /// The positive square root. Eigenvalues that are negative but within
    /// tolerance are clamped to zero.
    pub fn positive_sqrt(&self, tol: f64) -> Result<AlgebraElement> {
        if !self.is_positive(tol) {
            return Err(FrameError::domain("square root of a non-positive element"));
        }
        Ok(AlgebraElement {
            spec: self.spec.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| linalg::hermitian_map(b, |v| v.max(0.0).sqrt()))
                .collect(),
        })
    }

    /// Self-adjoint idempotent of total rank one, i.e. a rank-one projection in
    /// a single block.
    pub fn is_minimal_projection(&self, tol: f64) -> bool {
        if (self * self - self.clone()).cstar_norm() > tol {
            return false;
        }
        if (self - &self.adjoint()).cstar_norm() > tol {
            return false;
        }
        let rank: usize = self
            .hermitian_spectrum()
            .iter()
            .map(|ev| ev.iter().filter(|&&v| v > 0.5).count())
            .sum();
        rank == 1
    }

    pub(crate) fn check_same_spec(&self, other: &AlgebraElement) -> Result<()> {
        if self.spec != other.spec {
            return Err(FrameError::structural(format!(
                "algebra spec mismatch: [{}] vs [{}]",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &AlgebraElement, f: impl Fn(&CMat, &CMat) -> CMat) -> Self {
        assert_eq!(self.spec, other.spec, "algebra spec mismatch");
        AlgebraElement {
            spec: self.spec.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

// Arithmetic panics on spec mismatch, like nalgebra does on shape mismatch.
// Module-level operations check specs up front and return errors instead.

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(-1.0)
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        &self + &rhs
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        &self - &rhs
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        &self * &rhs
    }
}

/// Wire form: `{"spec": [d..], "blocks": [[[ [re, im], .. ] row ..] block ..]}`.
#[derive(Serialize, Deserialize)]
struct ElementRepr {
    spec: AlgebraSpec,
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<AlgebraElement> for ElementRepr {
    fn from(a: AlgebraElement) -> Self {
        let blocks = a
            .blocks
            .iter()
            .map(|m| {
                (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect()
            })
            .collect();
        ElementRepr { spec: a.spec, blocks }
    }
}

impl TryFrom<ElementRepr> for AlgebraElement {
    type Error = FrameError;

    fn try_from(repr: ElementRepr) -> Result<Self> {
        let blocks = repr
            .blocks
            .into_iter()
            .map(|rows| {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(FrameError::structural("algebra block is not square"));
                }
                Ok(CMat::from_row_iterator(
                    n,
                    n,
                    rows.into_iter().flatten().map(|[re, im]| Complex64::new(re, im)),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraElement::from_blocks(repr.spec, blocks)
    }
}
