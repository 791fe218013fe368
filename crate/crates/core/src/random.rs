//! Seeded instance generators.
//!
//! All randomness flows from `ChaCha8Rng` streams so a `u64` seed pins an
//! instance bit for bit on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, AlgebraSpec};
use crate::linalg::{self, CMat};
use crate::module::{ModuleOperator, ModuleVector};

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer; mixes `seed` with a stream label into a fresh seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: real and imaginary parts are `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_element<R: Rng + ?Sized>(spec: &AlgebraSpec, rng: &mut R) -> AlgebraElement {
    let blocks = spec.block_dims().iter().map(|&d| gaussian_matrix(d, d, rng)).collect();
    AlgebraElement::from_blocks(spec.clone(), blocks).expect("generated blocks conform")
}

/// `g g*` for a Gaussian `g`: positive by construction.
pub fn random_positive_element<R: Rng + ?Sized>(spec: &AlgebraSpec, rng: &mut R) -> AlgebraElement {
    let g = random_element(spec, rng);
    &g * &g.adjoint()
}

pub fn random_vector<R: Rng + ?Sized>(spec: &AlgebraSpec, rank: usize, rng: &mut R) -> ModuleVector {
    let entries = (0..rank).map(|_| random_element(spec, rng)).collect();
    ModuleVector::new(spec.clone(), entries).expect("generated entries conform")
}

/// Gaussian vector rescaled to `‖x‖ = 1`.
pub fn random_unit_vector<R: Rng + ?Sized>(spec: &AlgebraSpec, rank: usize, rng: &mut R) -> ModuleVector {
    loop {
        let v = random_vector(spec, rank, rng);
        let n = v.norm();
        if n > 1e-6 {
            return v.scale(1.0 / n);
        }
    }
}

pub fn random_operator<R: Rng + ?Sized>(spec: &AlgebraSpec, dom: usize, cod: usize, rng: &mut R) -> ModuleOperator {
    ModuleOperator::from_fn(spec, dom, cod, |_, _| random_element(spec, rng)).expect("positive ranks")
}

/// `B ∘ A` with `A: A^dom → A^inner`, `B: A^inner → A^cod`; its realization has
/// rank at most `inner · d_b` in block `b`.
pub fn random_factored_operator<R: Rng + ?Sized>(
    spec: &AlgebraSpec,
    dom: usize,
    cod: usize,
    inner: usize,
    rng: &mut R,
) -> ModuleOperator {
    let a = random_operator(spec, dom, inner, rng);
    let b = random_operator(spec, inner, cod, rng);
    b.compose(&a).expect("ranks line up")
}

/// Operator whose realization is zeroed in one algebra block, so it has a
/// kernel even over a one-block algebra when combined with factoring.
pub fn random_block_deficient_operator<R: Rng + ?Sized>(
    spec: &AlgebraSpec,
    dom: usize,
    cod: usize,
    rng: &mut R,
) -> ModuleOperator {
    let t = random_operator(spec, dom, cod, rng);
    let kill = rng.random_range(0..spec.num_blocks());
    let mut real = t.realize();
    let (r, c) = real.blocks[kill].shape();
    // keep a random sub-rank of the block
    let keep = rng.random_range(0..r.min(c));
    let u = gaussian_matrix(r, keep, rng);
    let v = gaussian_matrix(keep, c, rng);
    real.blocks[kill] = u * v;
    ModuleOperator::from_realization(spec, dom, cod, &real).expect("shapes preserved")
}

/// A random vector in the kernel of `op`, or `None` when the kernel is trivial.
///
/// The kernel is read off the eigenvectors of `φ(op)* φ(op)` whose eigenvalues
/// sit below `1e-12 · λ_max`.
pub fn random_kernel_vector<R: Rng + ?Sized>(op: &ModuleOperator, rng: &mut R) -> Option<ModuleVector> {
    let spec = op.spec();
    let real = op.realize();
    let mut coords = Vec::with_capacity(spec.num_blocks());
    let mut nontrivial = false;
    for (blk, &d) in real.blocks.iter().zip(spec.block_dims()) {
        let gram = blk.adjoint() * blk;
        let (values, vectors) = linalg::hermitian_eigen(&gram);
        let top = values.iter().copied().fold(0.0, f64::max);
        let null: Vec<usize> = (0..values.len())
            .filter(|&i| values[i] <= 1e-12 * top.max(1e-300))
            .collect();
        let n = gram.nrows();
        let mut c = CMat::zeros(n, d);
        if !null.is_empty() {
            nontrivial = true;
            for col in 0..d {
                for &k in &null {
                    let w = complex_gaussian(rng);
                    for row in 0..n {
                        c[(row, col)] += vectors[(row, k)] * w;
                    }
                }
            }
        }
        coords.push(c);
    }
    if !nontrivial {
        return None;
    }
    let v = ModuleVector::from_coordinates(spec, op.dom_rank(), &coords).ok()?;
    let n = v.norm();
    (n > 1e-12).then(|| v.scale(1.0 / n))
}
