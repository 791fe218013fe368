//! Finite frames in `A^m`: analysis, synthesis and frame operators, optimal
//! bounds, canonical duals and reconstruction.
//!
//! A sequence `{f_n}` is a frame with bounds `C, D > 0` when
//! `C⟨x,x⟩ ⪯ Σ_n ⟨x,f_n⟩⟨f_n,x⟩ ⪯ D⟨x,x⟩` for every `x`. The middle term is
//! `⟨Sx, x⟩` for the frame operator `S = θ∘T`, so in this finite model the
//! optimal Loewner bounds are the extreme eigenvalues of `φ(S)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraSpec};
use crate::error::{FrameError, Result};
use crate::module::{ModuleOperator, ModuleVector};
use crate::random;

/// Default threshold separating frames from numerically rank-deficient systems.
pub const FRAME_TOL: f64 = 1e-8;

/// Condition number of `S` beyond which dual frames carry a warning.
pub const ILL_CONDITIONED: f64 = 1e12;

/// Which form of the frame inequality a bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundFlavor {
    /// `C⟨x,x⟩ ⪯ Σ⟨x,f_n⟩⟨f_n,x⟩ ⪯ D⟨x,x⟩` in the algebra order.
    Loewner,
    /// `C‖x‖² ≤ ‖Σ⟨x,f_n⟩⟨f_n,x⟩‖ ≤ D‖x‖²`.
    Norm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub flavor: BoundFlavor,
    /// False when the lower bound vanishes (Bessel sequence only).
    pub is_frame: bool,
}

/// Sampling plan for the norm-form check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormSampling {
    pub samples: usize,
    pub seed: u64,
}

impl Default for NormSampling {
    fn default() -> Self {
        NormSampling {
            samples: 1000,
            seed: 0x5EED,
        }
    }
}

/// A finite sequence `f_1..f_N` in `A^m` with its analysis `T`, synthesis
/// `θ = T*` and frame operator `S = θ∘T` computed once at construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct FrameSystem {
    spec: AlgebraSpec,
    module_rank: usize,
    vectors: Vec<ModuleVector>,
    analysis: ModuleOperator,
    synthesis: ModuleOperator,
    frame_op: ModuleOperator,
}

impl PartialEq for FrameSystem {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.module_rank == other.module_rank && self.vectors == other.vectors
    }
}

impl FrameSystem {
    pub fn new(vectors: Vec<ModuleVector>) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| FrameError::structural("a frame needs at least one vector"))?;
        let spec = first.spec().clone();
        let module_rank = first.rank();
        if let Some(bad) = vectors
            .iter()
            .position(|v| v.spec() != &spec || v.rank() != module_rank)
        {
            return Err(FrameError::structural(format!(
                "vector {bad} does not live in the same module as vector 0"
            )));
        }
        let n = vectors.len();
        // M_{i,n} = (f_n)_i*, so (Tx)_n = Σ_i x_i (f_n)_i* = ⟨x, f_n⟩.
        let analysis = ModuleOperator::from_fn(&spec, module_rank, n, |i, k| vectors[k].entry(i).adjoint())?;
        let synthesis = analysis.adjoint();
        let frame_op = synthesis.compose(&analysis)?;
        Ok(FrameSystem {
            spec,
            module_rank,
            vectors,
            analysis,
            synthesis,
            frame_op,
        })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn module_rank(&self) -> usize {
        self.module_rank
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[ModuleVector] {
        &self.vectors
    }

    /// `T: A^m → A^N`, `x ↦ (⟨x, f_n⟩)_n`.
    pub fn analysis_operator(&self) -> &ModuleOperator {
        &self.analysis
    }

    /// `θ = T*: A^N → A^m`, `c ↦ Σ_n c_n f_n`.
    pub fn synthesis_operator(&self) -> &ModuleOperator {
        &self.synthesis
    }

    /// `S = θ∘T`, `x ↦ Σ_n ⟨x, f_n⟩ f_n`.
    pub fn frame_operator(&self) -> &ModuleOperator {
        &self.frame_op
    }

    /// `Σ_n ⟨x, f_n⟩⟨f_n, x⟩`, summed directly from the vectors.
    pub fn frame_sum(&self, x: &ModuleVector) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::zero(&self.spec);
        for f in &self.vectors {
            let c = x.inner(f)?;
            acc = &acc + &(&c * &c.adjoint());
        }
        Ok(acc)
    }

    /// Extreme eigenvalues of `φ(S)`; the lower bound is clamped at zero.
    pub fn optimal_frame_bounds(&self) -> FrameBounds {
        let (lo, hi) = self.frame_op.spectral_bounds();
        let lower = lo.max(0.0);
        FrameBounds {
            lower,
            upper: hi.max(0.0),
            flavor: BoundFlavor::Loewner,
            is_frame: lower > FRAME_TOL,
        }
    }

    /// Checks the frame inequality at the given constants. The Loewner form is
    /// decided exactly (`C·I ⪯ φ(S) ⪯ D·I` blockwise). The norm form is checked
    /// on the default sampling plan: a `false` is a genuine counterexample, a
    /// `true` only means none was found.
    pub fn verify_frame(&self, lower: f64, upper: f64, flavor: BoundFlavor, tol: f64) -> bool {
        match flavor {
            BoundFlavor::Loewner => self.verify_loewner(lower, upper, tol),
            BoundFlavor::Norm => self.verify_norm_sampled(lower, upper, tol, NormSampling::default()),
        }
    }

    fn verify_loewner(&self, lower: f64, upper: f64, tol: f64) -> bool {
        let id = ModuleOperator::identity(&self.spec, self.module_rank).expect("rank ≥ 1");
        let above = self.frame_op.checked_sub(&id.scale(lower)).expect("same shape");
        let below = id.scale(upper).checked_sub(&self.frame_op).expect("same shape");
        above.is_positive_operator(tol).unwrap_or(false) && below.is_positive_operator(tol).unwrap_or(false)
    }

    /// Norm-form check on unit vectors: extreme eigenvectors of `φ(S)` first,
    /// then `plan.samples` seeded Gaussian directions.
    pub fn verify_norm_sampled(&self, lower: f64, upper: f64, tol: f64, plan: NormSampling) -> bool {
        self.worst_norm_violation(lower, upper, plan) <= tol
    }

    /// Largest violation of `C‖x‖² ≤ ‖Σ⟨x,f_n⟩⟨f_n,x⟩‖ ≤ D‖x‖²` over the
    /// sampling plan (negative when every sample holds strictly).
    pub fn worst_norm_violation(&self, lower: f64, upper: f64, plan: NormSampling) -> f64 {
        let mut rng = random::rng_from_seed(plan.seed);
        let probes = self.frame_op.eigenvector_probes();
        let randoms = (0..plan.samples).map(|_| random::random_unit_vector(&self.spec, self.module_rank, &mut rng));
        let mut worst = f64::NEG_INFINITY;
        for x in probes.into_iter().chain(randoms) {
            let nx = x.norm();
            if nx == 0.0 {
                continue;
            }
            let x = x.scale(1.0 / nx);
            let mid = self.frame_sum(&x).expect("same module").cstar_norm();
            worst = worst.max(lower - mid).max(mid - upper);
        }
        worst
    }

    /// `S⁻¹`, failing with "not a frame" when `λ_min(φ(S)) ≤ tol`.
    pub fn inverse_frame_operator(&self, tol: f64) -> Result<ModuleOperator> {
        self.frame_op
            .positive_inverse(tol)
            .map_err(|_| FrameError::domain("not a frame: frame operator is numerically singular"))
    }

    /// The canonical dual `{S⁻¹ f_n}`.
    pub fn canonical_dual(&self, tol: f64) -> Result<FrameSystem> {
        let s_inv = self.inverse_frame_operator(tol)?;
        let dual = self
            .vectors
            .iter()
            .map(|f| s_inv.apply(f))
            .collect::<Result<Vec<_>>>()?;
        FrameSystem::new(dual)
    }

    /// Canonical dual together with bounds and a conditioning warning.
    pub fn dual_report(&self, tol: f64) -> Result<DualReport> {
        let dual = self.canonical_dual(tol)?;
        let primal_bounds = self.optimal_frame_bounds();
        let dual_bounds = dual.optimal_frame_bounds();
        let condition_number = primal_bounds.upper / primal_bounds.lower;
        let mut warnings = Vec::new();
        if condition_number > ILL_CONDITIONED {
            warnings.push(format!(
                "frame operator condition number {condition_number:e} exceeds {ILL_CONDITIONED:e}; \
                 reconstruction tolerances cannot be honored"
            ));
        }
        Ok(DualReport {
            dual,
            primal_bounds,
            dual_bounds,
            condition_number,
            tol,
            warnings,
        })
    }

    /// `x = Σ_n ⟨x, S⁻¹f_n⟩ f_n`.
    pub fn reconstruct(&self, x: &ModuleVector, tol: f64) -> Result<ModuleVector> {
        let dual = self.canonical_dual(tol)?;
        let mut acc = ModuleVector::zero(&self.spec, self.module_rank);
        for (f, g) in self.vectors.iter().zip(dual.vectors()) {
            acc = &acc + &f.left_mul(&x.inner(g)?)?;
        }
        Ok(acc)
    }

    /// `x = Σ_n ⟨x, f_n⟩ S⁻¹f_n`.
    pub fn reconstruct_with_dual_atoms(&self, x: &ModuleVector, tol: f64) -> Result<ModuleVector> {
        let dual = self.canonical_dual(tol)?;
        let mut acc = ModuleVector::zero(&self.spec, self.module_rank);
        for (f, g) in self.vectors.iter().zip(dual.vectors()) {
            acc = &acc + &g.left_mul(&x.inner(f)?)?;
        }
        Ok(acc)
    }

    /// Norm of `φ(S) − I`; zero exactly for Parseval frames.
    pub fn parseval_defect(&self) -> f64 {
        let id = ModuleOperator::identity(&self.spec, self.module_rank).expect("rank ≥ 1");
        self.frame_op.checked_sub(&id).expect("same shape").operator_norm()
    }

    pub fn is_parseval(&self, tol: f64) -> bool {
        self.parseval_defect() <= tol
    }
}

/// Canonical dual frame with the bounds of both frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualReport {
    pub dual: FrameSystem,
    pub primal_bounds: FrameBounds,
    pub dual_bounds: FrameBounds,
    pub condition_number: f64,
    pub tol: f64,
    pub warnings: Vec<String>,
}

/// The generators `e_1..e_m` of `A^m`, a Parseval frame.
pub fn standard_generator_frame(spec: &AlgebraSpec, m: usize) -> Result<FrameSystem> {
    if m == 0 {
        return Err(FrameError::structural("module rank must be at least 1"));
    }
    FrameSystem::new((0..m).map(|i| ModuleVector::generator(spec, m, i)).collect())
}

/// Basic elements (`⟨v,v⟩` a minimal projection) that are mutually orthogonal.
pub fn is_orthonormal_system(vs: &[ModuleVector], tol: f64) -> bool {
    for (i, v) in vs.iter().enumerate() {
        match v.inner(v) {
            Ok(e) if e.is_minimal_projection(tol) => {}
            _ => return false,
        }
        for w in &vs[i + 1..] {
            match v.inner(w) {
                Ok(c) if c.cstar_norm() <= tol => {}
                _ => return false,
            }
        }
    }
    true
}

const FRAME_RETRIES: u64 = 64;

/// `N` vectors in `A^m` with standard complex Gaussian entries. When
/// `min_lower_bound > 0`, redraws (from derived seeds) until
/// `λ_min(φ(S)) ≥ min_lower_bound`.
pub fn random_frame(spec: &AlgebraSpec, m: usize, n: usize, seed: u64, min_lower_bound: f64) -> Result<FrameSystem> {
    if n == 0 || m == 0 {
        return Err(FrameError::structural("need N ≥ 1 vectors in a module of rank ≥ 1"));
    }
    for attempt in 0..FRAME_RETRIES {
        let mut rng = random::rng_from_seed(random::derive_seed(seed, attempt));
        let vectors = (0..n).map(|_| random::random_vector(spec, m, &mut rng)).collect();
        let frame = FrameSystem::new(vectors)?;
        if min_lower_bound <= 0.0 || frame.frame_op.spectral_bounds().0 >= min_lower_bound {
            return Ok(frame);
        }
    }
    Err(FrameError::Generation(format!(
        "no frame with lower bound ≥ {min_lower_bound} after {FRAME_RETRIES} draws \
         (spec [{spec}], m = {m}, N = {n}, seed = {seed})"
    )))
}

#[derive(Serialize, Deserialize)]
struct FrameRepr {
    module_rank: usize,
    vectors: Vec<ModuleVector>,
}

impl From<FrameSystem> for FrameRepr {
    fn from(f: FrameSystem) -> Self {
        FrameRepr {
            module_rank: f.module_rank,
            vectors: f.vectors,
        }
    }
}

impl TryFrom<FrameRepr> for FrameSystem {
    type Error = FrameError;

    fn try_from(r: FrameRepr) -> Result<Self> {
        let frame = FrameSystem::new(r.vectors)?;
        if frame.module_rank != r.module_rank {
            return Err(FrameError::structural(format!(
                "module_rank {} but vectors have rank {}",
                r.module_rank, frame.module_rank
            )));
        }
        Ok(frame)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn scalar_vec(vals: &[f64]) -> ModuleVector {
        let s = AlgebraSpec::scalar();
        ModuleVector::new(
            s.clone(),
            vals.iter()
                .map(|&v| AlgebraElement::scalar(&s, Complex64::new(v, 0.0)))
                .collect(),
        )
        .unwrap()
    }

    fn three_vectors() -> FrameSystem {
        FrameSystem::new(vec![
            scalar_vec(&[1.0, 0.0]),
            scalar_vec(&[0.0, 1.0]),
            scalar_vec(&[1.0, 1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn ones_frame_operators() {
        let f = FrameSystem::new(vec![scalar_vec(&[1.0]), scalar_vec(&[1.0])]).unwrap();
        let x = scalar_vec(&[3.0]);
        let tx = f.analysis_operator().apply(&x).unwrap();
        assert_eq!(tx, scalar_vec(&[3.0, 3.0]));
        let c = scalar_vec(&[2.0, 5.0]);
        assert_eq!(f.synthesis_operator().apply(&c).unwrap(), scalar_vec(&[7.0]));
        assert_eq!(
            f.frame_operator().entry(0, 0).block(0)[(0, 0)],
            Complex64::new(2.0, 0.0)
        );
    }

    #[test]
    fn projection_frame_in_m2() {
        let s = AlgebraSpec::matrix(2).unwrap();
        let p = AlgebraElement::diagonal(&s, &[&[1.0, 0.0]]).unwrap();
        let f = FrameSystem::new(vec![ModuleVector::new(s, vec![p.clone()]).unwrap()]).unwrap();
        assert_eq!(f.frame_operator().realize().blocks[0], p.block(0).clone());
        assert!(f.frame_operator().is_positive_operator(1e-12).unwrap());
    }

    #[test]
    fn optimal_bounds_examples() {
        let b = three_vectors().optimal_frame_bounds();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 3.0).abs() < 1e-12);
        assert!(b.is_frame);
        let single = FrameSystem::new(vec![scalar_vec(&[1.0, 0.0])])
            .unwrap()
            .optimal_frame_bounds();
        assert_eq!(single.lower, 0.0);
        assert!(!single.is_frame);
        assert!((single.upper - 1.0).abs() < 1e-15);
    }

    #[test]
    fn verify_frame_examples() {
        let f = three_vectors();
        assert!(f.verify_frame(1.0, 3.0, BoundFlavor::Loewner, 1e-10));
        assert!(!f.verify_frame(1.1, 3.0, BoundFlavor::Loewner, 1e-10));
        assert!(f.verify_frame(1.0, 3.0, BoundFlavor::Norm, 1e-10));
        assert!(!f.verify_frame(1.1, 3.0, BoundFlavor::Norm, 1e-10));
        let g = standard_generator_frame(&AlgebraSpec::matrix(2).unwrap(), 2).unwrap();
        assert!(g.verify_frame(1.0, 1.0, BoundFlavor::Loewner, 1e-12));
    }

    #[test]
    fn dual_of_ones_frame() {
        let f = FrameSystem::new(vec![scalar_vec(&[1.0]), scalar_vec(&[1.0])]).unwrap();
        let d = f.canonical_dual(FRAME_TOL).unwrap();
        for v in d.vectors() {
            assert!(v.max_abs_diff(&scalar_vec(&[0.5])) < 1e-15);
        }
        let x = scalar_vec(&[5.0]);
        assert!(f.reconstruct(&x, FRAME_TOL).unwrap().max_abs_diff(&x) < 1e-14);
        let bessel = FrameSystem::new(vec![scalar_vec(&[1.0, 0.0])]).unwrap();
        assert!(matches!(bessel.canonical_dual(FRAME_TOL), Err(FrameError::Domain(_))));
        assert!(bessel.reconstruct(&scalar_vec(&[1.0, 1.0]), FRAME_TOL).is_err());
    }

    #[test]
    fn standard_generators_are_parseval() {
        let s = AlgebraSpec::matrix(2).unwrap();
        let g = standard_generator_frame(&s, 1).unwrap();
        assert_eq!(g.vectors()[0].entry(0), &AlgebraElement::unit(&s));
        assert_eq!(g.parseval_defect(), 0.0);
        let b = standard_generator_frame(&s, 3).unwrap().optimal_frame_bounds();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        assert!(standard_generator_frame(&s, 0).is_err());
    }

    #[test]
    fn orthonormal_systems() {
        let m2 = AlgebraSpec::matrix(2).unwrap();
        let e11 = AlgebraElement::matrix_unit(&m2, 0, 0, 0).unwrap();
        let e21 = AlgebraElement::matrix_unit(&m2, 0, 1, 0).unwrap();
        // ⟨v1, v2⟩ = E11 E21* = E11 E12 = E12 ≠ 0
        let v1 = ModuleVector::new(m2.clone(), vec![e11]).unwrap();
        let v2 = ModuleVector::new(m2.clone(), vec![e21]).unwrap();
        assert!(!is_orthonormal_system(&[v1, v2], 1e-12));

        let cc = AlgebraSpec::new(vec![1, 1]).unwrap();
        let a = ModuleVector::new(
            cc.clone(),
            vec![AlgebraElement::diagonal(&cc, &[&[1.0], &[0.0]]).unwrap()],
        )
        .unwrap();
        let b = ModuleVector::new(
            cc.clone(),
            vec![AlgebraElement::diagonal(&cc, &[&[0.0], &[1.0]]).unwrap()],
        )
        .unwrap();
        assert!(is_orthonormal_system(&[a, b], 1e-12));

        let g = standard_generator_frame(&m2, 2).unwrap();
        assert!(!is_orthonormal_system(g.vectors(), 1e-12));
    }

    #[test]
    fn random_frame_generation() {
        let s = AlgebraSpec::new(vec![1, 2]).unwrap();
        let a = random_frame(&s, 2, 5, 17, 0.0).unwrap();
        let b = random_frame(&s, 2, 5, 17, 0.0).unwrap();
        assert_eq!(a, b);
        let f = random_frame(&s, 2, 4, 3, 1e-3).unwrap();
        let d = f.optimal_frame_bounds().upper;
        assert!(f.verify_frame(1e-3, d, BoundFlavor::Loewner, 1e-12));
        let c = AlgebraSpec::scalar();
        assert!(matches!(
            random_frame(&c, 3, 2, 1, 1e-6),
            Err(FrameError::Generation(_))
        ));
    }

    #[test]
    fn mismatched_vectors_rejected() {
        assert!(FrameSystem::new(vec![]).is_err());
        assert!(FrameSystem::new(vec![scalar_vec(&[1.0]), scalar_vec(&[1.0, 2.0])]).is_err());
    }
}
