use rand::{Rng, RngCore};

use crate::algebra::{AlgebraElement, AlgebraSpec};
use crate::error::{FrameError, Result};
use crate::frame::{random_frame, standard_generator_frame, BoundFlavor, FrameSystem};
use crate::module::{ModuleOperator, ModuleVector};
use crate::operator_frames::{
    atomic_system_for, douglas_report, frame_from_kframe, kframe_via_range, optimal_kframe_lower_bound,
    surjectivity_constant, verify_atomic_system, verify_kframe,
};
use crate::random::{self, InstanceRng};

use super::{SuiteConfig, SuiteId, Tolerances};

pub(super) struct Check {
    pub passed: bool,
    pub margin: f64,
    pub note: String,
}

impl Check {
    fn new(passed: bool, margin: f64, note: impl Into<String>) -> Self {
        Check {
            passed,
            margin,
            note: note.into(),
        }
    }
}

const SAMPLES: usize = 1000;
const DEFAULT_SPECS: [&[usize]; 5] = [&[1], &[2], &[3], &[1, 1], &[1, 2]];

struct Scale {
    spec: AlgebraSpec,
    m: usize,
    n: usize,
}

fn draw_scale(rng: &mut InstanceRng, cfg: &SuiteConfig) -> Scale {
    let spec = match &cfg.spec {
        Some(s) => s.clone(),
        None => {
            let dims = DEFAULT_SPECS[rng.random_range(0..DEFAULT_SPECS.len())];
            AlgebraSpec::new(dims.to_vec()).expect("valid default spec")
        }
    };
    let m = cfg.m.unwrap_or_else(|| rng.random_range(1..=4));
    let n = cfg.n.unwrap_or_else(|| rng.random_range(1..=8));
    Scale { spec, m, n }
}

pub(super) fn run(suite: SuiteId, trial_seed: u64, cfg: &SuiteConfig) -> Result<Check> {
    let mut rng = random::rng_from_seed(trial_seed);
    let scale = draw_scale(&mut rng, cfg);
    let tol = &cfg.tolerances;
    match suite {
        SuiteId::ParsevalIdentity => parseval_identity(&mut rng, &scale, tol),
        SuiteId::DualReconstruction => dual_reconstruction(&mut rng, &scale, tol),
        SuiteId::DouglasFourway => douglas_fourway(&mut rng, &scale, tol),
        SuiteId::AtomicEquivalence => atomic_equivalence(&mut rng, &scale, tol),
        SuiteId::AtomicExistence => atomic_existence(&mut rng, &scale, tol),
        SuiteId::AtomicNormBound => atomic_norm_bound(&mut rng, &scale, tol),
        SuiteId::KframePsdCriterion => kframe_psd_criterion(&mut rng, &scale, tol),
        SuiteId::SurjectiveKframe => surjective_kframe(&mut rng, &scale, tol),
        SuiteId::CauchySchwarz => cauchy_schwarz(&mut rng, &scale, tol),
        SuiteId::ScalarRegression => scalar_regression(&mut rng, &scale, tol),
    }
}

/// Range-deficient operator on `A^m`: factored through a smaller module when
/// possible, otherwise with a rank-deficient block.
fn deficient_operator(spec: &AlgebraSpec, dom: usize, cod: usize, rng: &mut InstanceRng) -> ModuleOperator {
    if dom.min(cod) >= 2 && rng.random_bool(0.5) {
        let inner = rng.random_range(1..dom.min(cod));
        random::random_factored_operator(spec, dom, cod, inner, rng)
    } else {
        random::random_block_deficient_operator(spec, dom, cod, rng)
    }
}

fn random_vectors(sc: &Scale, n: usize, rng: &mut InstanceRng) -> Vec<ModuleVector> {
    (0..n).map(|_| random::random_vector(&sc.spec, sc.m, rng)).collect()
}

/// Unit test vectors: the given rank-one eigenvector probes, then Gaussian
/// directions, with every fourth Gaussian replaced by a kernel vector of
/// `kernel_of` when that kernel is nontrivial.
fn sample_vectors(
    sc: &Scale,
    probes: Vec<ModuleVector>,
    kernel_of: Option<&ModuleOperator>,
    rng: &mut InstanceRng,
) -> Vec<ModuleVector> {
    let mut out: Vec<ModuleVector> = probes
        .into_iter()
        .filter_map(|v| {
            let n = v.norm();
            (n > 0.0).then(|| v.scale(1.0 / n))
        })
        .collect();
    let mut kernel_available = kernel_of.is_some();
    for i in 0..SAMPLES {
        if kernel_available && i % 4 == 0 {
            match random::random_kernel_vector(kernel_of.expect("checked"), rng) {
                Some(v) => {
                    out.push(v);
                    continue;
                }
                None => kernel_available = false,
            }
        }
        out.push(random::random_unit_vector(&sc.spec, sc.m, rng));
    }
    out
}

fn parseval_identity(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let g = standard_generator_frame(&sc.spec, sc.m)?;
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let x = random::random_vector(&sc.spec, sc.m, rng);
        let err = (&g.frame_sum(&x)? - &x.inner(&x)?).max_abs_entry();
        worst = worst.max(err);
    }
    Ok(Check::new(
        worst <= tol.get(Tolerances::EXACT),
        worst,
        format!("entrywise error {worst:e}"),
    ))
}

fn dual_reconstruction(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let frame_tol = tol.get(Tolerances::FRAME);
    let frame = random_frame(&sc.spec, sc.m, sc.n.max(sc.m), rng.next_u64(), 1e-3)?;
    let dual = frame.canonical_dual(frame_tol)?;
    let b = frame.optimal_frame_bounds();
    let db = dual.optimal_frame_bounds();
    let bound_err = (db.lower - 1.0 / b.upper).abs().max((db.upper - 1.0 / b.lower).abs());

    let back = dual.canonical_dual(frame_tol)?;
    let dual_dual_err = frame
        .vectors()
        .iter()
        .zip(back.vectors())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let mut recon_err = 0.0_f64;
    for _ in 0..20 {
        let x = random::random_vector(&sc.spec, sc.m, rng);
        let scale = x.norm().max(1.0);
        let r1 = (&frame.reconstruct(&x, frame_tol)? - &x).norm() / scale;
        let r2 = (&frame.reconstruct_with_dual_atoms(&x, frame_tol)? - &x).norm() / scale;
        recon_err = recon_err.max(r1).max(r2);
    }
    let margin = bound_err.max(recon_err).max(dual_dual_err);
    Ok(Check::new(
        margin <= check,
        margin,
        format!("bounds {bound_err:e}, reconstruction {recon_err:e}, dual of dual {dual_dual_err:e}"),
    ))
}

/// Instance mix for the Douglas suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DouglasCase {
    DeficientRandom,
    DeficientEngineered,
    FullEngineered,
    FullRandom,
}

pub(crate) fn douglas_instance(
    spec: &AlgebraSpec,
    h: usize,
    f: usize,
    k: usize,
    case: DouglasCase,
    rng: &mut InstanceRng,
) -> (ModuleOperator, ModuleOperator) {
    let t = match case {
        DouglasCase::DeficientRandom | DouglasCase::DeficientEngineered => deficient_operator(spec, f, h, rng),
        _ => random::random_operator(spec, f, h, rng),
    };
    let s = match case {
        DouglasCase::DeficientEngineered | DouglasCase::FullEngineered => {
            let x0 = random::random_operator(spec, k, f, rng);
            t.compose(&x0).expect("ranks line up")
        }
        _ => random::random_operator(spec, k, h, rng),
    };
    (s, t)
}

fn douglas_fourway(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let case = [
        DouglasCase::DeficientRandom,
        DouglasCase::DeficientEngineered,
        DouglasCase::FullEngineered,
        DouglasCase::FullRandom,
    ][rng.random_range(0..4)];
    let h = sc.m;
    let f = sc.n.min(4);
    let k = rng.random_range(1..=3);
    let (s, t) = douglas_instance(&sc.spec, h, f, k, case, rng);
    let report = douglas_report(&s, &t, check)?;
    let engineered = matches!(case, DouglasCase::DeficientEngineered | DouglasCase::FullEngineered);
    if engineered && !report.cond4_range_included {
        return Ok(Check::new(
            false,
            report.residual,
            format!("{case:?}: engineered inclusion not detected"),
        ));
    }
    if let Some(lambda) = report.cond1_lambda {
        let sss = s.compose(&s.adjoint())?;
        let ttt = t.compose(&t.adjoint())?;
        if !ttt
            .scale(lambda + 1e-8)
            .checked_sub(&sss)?
            .is_positive_operator(check)?
        {
            return Ok(Check::new(
                false,
                report.residual,
                format!("SS* ⪯ (λ+1e-8)TT* fails at λ = {lambda:e}"),
            ));
        }
        if lambda > 1e-6
            && ttt
                .scale(0.99 * lambda)
                .checked_sub(&sss)?
                .is_positive_operator(check)?
        {
            return Ok(Check::new(
                false,
                report.residual,
                format!("λ = {lambda:e} is not least"),
            ));
        }
    }
    let margin = if report.cond4_range_included {
        report.residual
    } else {
        0.0
    };
    Ok(Check::new(
        true,
        margin,
        format!("{case:?}: included = {}", report.cond4_range_included),
    ))
}

/// Largest violation of `C‖K*x‖² ≤ ‖Σ⟨x,f_n⟩⟨f_n,x⟩‖` over unit samples.
fn worst_lower_norm_violation(
    frame: &FrameSystem,
    k: &ModuleOperator,
    c: f64,
    samples: &[ModuleVector],
) -> Result<f64> {
    let k_adj = k.adjoint();
    let mut worst = f64::NEG_INFINITY;
    for x in samples {
        let lhs = c * k_adj.apply(x)?.norm().powi(2);
        let rhs = frame.frame_sum(x)?.cstar_norm();
        worst = worst.max(lhs - rhs);
    }
    Ok(worst)
}

fn atomic_equivalence(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let case = rng.random_range(0..4);
    let base = random_vectors(sc, sc.n, rng);
    let frame = if case == 1 || case == 2 {
        let q = deficient_operator(&sc.spec, sc.m, sc.m, rng);
        FrameSystem::new(base.iter().map(|g| q.apply(g)).collect::<Result<Vec<_>>>()?)?
    } else {
        FrameSystem::new(base)?
    };
    let k = match case {
        2 => {
            let x0 = random::random_operator(&sc.spec, sc.m, sc.n, rng);
            frame.synthesis_operator().compose(&x0)?
        }
        3 => deficient_operator(&sc.spec, sc.m, sc.m, rng),
        _ => random::random_operator(&sc.spec, sc.m, sc.m, rng),
    };
    let cert = verify_atomic_system(&frame, &k, check)?;
    let via_range = kframe_via_range(&frame, &k, check)?;

    let mut probes = frame.frame_operator().eigenvector_probes();
    probes.extend(k.compose(&k.adjoint())?.eigenvector_probes());
    let samples = sample_vectors(sc, probes, Some(frame.analysis_operator()), rng);
    // coeff_bound = 0 only for a zero solution; for an invalid certificate the
    // inequality must then fail for any C, so test C = 1
    let c = if cert.coeff_bound > 0.0 {
        1.0 / cert.coeff_bound
    } else {
        1.0
    };
    let violation = if k.operator_norm() > 0.0 {
        worst_lower_norm_violation(&frame, &k, c, &samples)?
    } else {
        0.0
    };
    let inequality = violation <= check;
    if cert.valid != via_range.valid || via_range.valid != inequality {
        return Ok(Check::new(
            false,
            violation.max(0.0),
            format!(
                "case {case}: atomic {}, range {}, sampled inequality {inequality} (violation {violation:e})",
                cert.valid, via_range.valid
            ),
        ));
    }
    let mut margin = 0.0_f64;
    if cert.valid {
        margin = margin.max(cert.residual).max(violation);
        for _ in 0..5 {
            let x = random::random_vector(&sc.spec, sc.m, rng);
            let a = cert.coefficients(&x)?;
            let mut recon = ModuleVector::zero(&sc.spec, sc.m);
            let mut energy = AlgebraElement::zero(&sc.spec);
            for (an, f) in a.iter().zip(frame.vectors()) {
                recon = &recon + &f.left_mul(an)?;
                energy = &energy + &(an * &an.adjoint());
            }
            let kx = k.apply(&x)?;
            let err = (&recon - &kx).norm() / kx.norm().max(1.0);
            margin = margin.max(err);
            let bounded = x.inner(&x)?.scale(cert.coeff_bound);
            if err > check || !energy.loewner_leq(&bounded, check)? {
                return Ok(Check::new(
                    false,
                    margin,
                    format!("case {case}: coefficient check failed (recon {err:e})"),
                ));
            }
        }
    }
    Ok(Check::new(true, margin, format!("case {case}: atomic {}", cert.valid)))
}

fn atomic_existence(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let k = if rng.random_bool(0.5) {
        random::random_operator(&sc.spec, sc.m, sc.m, rng)
    } else {
        deficient_operator(&sc.spec, sc.m, sc.m, rng)
    };
    let base = standard_generator_frame(&sc.spec, sc.m)?;
    let system = atomic_system_for(&k, &base)?;
    let cert = verify_atomic_system(&system, &k, check)?;
    let knorm2 = k.operator_norm().powi(2);
    let mut margin = (cert.coeff_bound - 1.0)
        .max(cert.bessel_bound - knorm2)
        .max(cert.residual)
        .max(0.0);
    // a_n = ⟨x, x_n⟩ reproduces Kx and has Σ a_n a_n* = ⟨x, x⟩
    for _ in 0..5 {
        let x = random::random_vector(&sc.spec, sc.m, rng);
        let mut recon = ModuleVector::zero(&sc.spec, sc.m);
        let mut energy = AlgebraElement::zero(&sc.spec);
        for (xn, f) in base.vectors().iter().zip(system.vectors()) {
            let a = x.inner(xn)?;
            recon = &recon + &f.left_mul(&a)?;
            energy = &energy + &(&a * &a.adjoint());
        }
        let kx = k.apply(&x)?;
        margin = margin
            .max((&recon - &kx).norm() / kx.norm().max(1.0))
            .max((&energy - &x.inner(&x)?).max_abs_entry() / x.norm().powi(2).max(1.0));
    }
    let passed =
        cert.valid && cert.coeff_bound <= 1.0 + check && cert.bessel_bound <= knorm2 + check && margin <= check;
    Ok(Check::new(
        passed,
        margin,
        format!(
            "coeff bound {:.6}, Bessel {:.6} vs ‖K‖² {knorm2:.6}",
            cert.coeff_bound, cert.bessel_bound
        ),
    ))
}

fn atomic_norm_bound(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let frame = random_frame(&sc.spec, sc.m, sc.n.max(sc.m), rng.next_u64(), 1e-3)?;
    let k = if rng.random_bool(0.5) {
        random::random_operator(&sc.spec, sc.m, sc.m, rng)
    } else {
        deficient_operator(&sc.spec, sc.m, sc.m, rng)
    };
    let b = frame.optimal_frame_bounds();
    let constant = b.lower / k.operator_norm().powi(2);
    let mut probes = frame.frame_operator().eigenvector_probes();
    probes.extend(k.compose(&k.adjoint())?.eigenvector_probes());
    let samples = sample_vectors(sc, probes, None, rng);
    let violation = worst_lower_norm_violation(&frame, &k, constant, &samples)?;
    Ok(Check::new(
        violation <= check,
        violation.max(0.0),
        format!(
            "C = {:.4e}, constant {constant:.4e}, worst violation {violation:e}",
            b.lower
        ),
    ))
}

fn kframe_psd_criterion(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let base = random_vectors(sc, sc.n, rng);
    let frame = if rng.random_bool(1.0 / 3.0) {
        let q = deficient_operator(&sc.spec, sc.m, sc.m, rng);
        FrameSystem::new(base.iter().map(|g| q.apply(g)).collect::<Result<Vec<_>>>()?)?
    } else {
        FrameSystem::new(base)?
    };
    let k = if rng.random_bool(0.5) {
        random::random_operator(&sc.spec, sc.m, sc.m, rng)
    } else {
        deficient_operator(&sc.spec, sc.m, sc.m, rng)
    };
    if k.operator_norm() == 0.0 {
        let refused = matches!(
            optimal_kframe_lower_bound(&frame, &k, check),
            Err(FrameError::Domain(_))
        );
        return Ok(Check::new(refused, 0.0, "K = 0"));
    }
    let c_star = optimal_kframe_lower_bound(&frame, &k, check)?;
    // the range route must agree with the spectral one
    kframe_via_range(&frame, &k, check)?;
    let upper = frame.optimal_frame_bounds().upper * (1.0 + 1e-6);
    if c_star > 1e-6 {
        if !verify_kframe(&frame, &k, c_star * (1.0 - 1e-6), upper, check)?.valid {
            return Ok(Check::new(false, 0.0, format!("rejected just below C* = {c_star:e}")));
        }
        if verify_kframe(&frame, &k, c_star * 1.01, upper, check)?.valid {
            return Ok(Check::new(false, 0.0, format!("accepted above C* = {c_star:e}")));
        }
    }
    let k_adj = k.adjoint();
    let mut probes = frame.frame_operator().eigenvector_probes();
    probes.extend(k.compose(&k_adj)?.eigenvector_probes());
    let samples = sample_vectors(sc, probes, None, rng);
    let mut worst = 0.0_f64;
    for x in &samples {
        let kx = k_adj.apply(x)?;
        let lhs = kx.inner(&kx)?.scale(c_star);
        let rhs = frame.frame_sum(x)?;
        let gap = &rhs - &lhs;
        worst = worst.max(-gap.min_eigenvalue() / gap.cstar_norm().max(1.0));
        if !lhs.loewner_leq(&rhs, check)? {
            return Ok(Check::new(
                false,
                worst,
                format!("sampled counterexample at C* = {c_star:e}"),
            ));
        }
    }
    Ok(Check::new(true, worst, format!("C* = {c_star:e}")))
}

fn surjective_kframe(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let frame = random_frame(&sc.spec, sc.m, sc.n.max(sc.m), rng.next_u64(), 1e-3)?;
    if rng.random_bool(1.0 / 3.0) {
        let k = deficient_operator(&sc.spec, sc.m, sc.m, rng);
        let m = surjectivity_constant(&k)?;
        let refused = frame_from_kframe(&frame, &k, check).is_err();
        return Ok(Check::new(
            m == 0.0 && refused,
            0.0,
            format!("non-surjective K: M = {m:e}"),
        ));
    }
    let k = random::random_operator(&sc.spec, sc.m, sc.m, rng);
    let m = surjectivity_constant(&k)?;
    if m == 0.0 {
        return Ok(Check::new(false, 0.0, "random square K reported non-surjective"));
    }
    let c_k = optimal_kframe_lower_bound(&frame, &k, check)?;
    let bounds = frame_from_kframe(&frame, &k, check)?;
    let lam_min = frame.frame_operator().spectral_bounds().0;
    let gap = m * m * c_k - lam_min;
    let verified = frame.verify_frame(bounds.lower, bounds.upper, BoundFlavor::Loewner, check);
    Ok(Check::new(
        gap <= check && verified,
        gap.max(0.0),
        format!("M² C_K = {:.4e}, λ_min(S) = {lam_min:.4e}", m * m * c_k),
    ))
}

fn cauchy_schwarz(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let check = tol.get(Tolerances::CHECK);
    let t = if rng.random_bool(0.5) {
        random::random_operator(&sc.spec, sc.m, sc.m, rng)
    } else {
        deficient_operator(&sc.spec, sc.m, sc.m, rng)
    };
    let tnorm2 = t.operator_norm().powi(2);
    let mut worst = 0.0_f64;
    let mut ok = true;
    for _ in 0..10 {
        let x = random::random_vector(&sc.spec, sc.m, rng);
        let tx = t.apply(&x)?;
        let gap = &x.inner(&x)?.scale(tnorm2) - &tx.inner(&tx)?;
        worst = worst.max(-gap.min_eigenvalue() / gap.cstar_norm().max(1.0));
        ok &= gap.is_positive(check);
    }
    Ok(Check::new(ok, worst.max(0.0), format!("‖T‖² = {tnorm2:.4e}")))
}

fn scalar_regression(rng: &mut InstanceRng, sc: &Scale, tol: &Tolerances) -> Result<Check> {
    let limit = tol.get(Tolerances::SCALAR);
    let spec = AlgebraSpec::scalar();
    let frame = random_frame(&spec, sc.m, sc.n.max(sc.m), rng.next_u64(), 0.05)?;
    let k = random::random_operator(&spec, sc.m, sc.m, rng);

    let columns = classical::columns(&frame);
    let s_cl = classical::frame_operator(&columns);
    let (lo, hi) = classical::extreme_eigenvalues(&s_cl);
    let b = frame.optimal_frame_bounds();
    let bound_err = (b.lower - lo).abs().max((b.upper - hi).abs());

    let dual_cl = classical::dual_columns(&s_cl, &columns);
    let dual = frame.canonical_dual(tol.get(Tolerances::FRAME))?;
    let dual_err = classical::columns(&dual)
        .iter()
        .zip(&dual_cl)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max);

    let k_cl = classical::operator_matrix(&k);
    let ck_cl = classical::kframe_lower_bound(&s_cl, &k_cl);
    let ck = optimal_kframe_lower_bound(&frame, &k, tol.get(Tolerances::CHECK))?;
    let ck_err = (ck - ck_cl).abs();

    let margin = bound_err.max(dual_err).max(ck_err);
    Ok(Check::new(
        margin <= limit,
        margin,
        format!("bounds {bound_err:e}, dual {dual_err:e}, K-frame bound {ck_err:e}"),
    ))
}

/// Classical Hilbert-space formulas for `A = ℂ`, written directly on complex
/// vectors and matrices without going through the module layer.
pub mod classical {
    use nalgebra::{DMatrix, SymmetricEigen};
    use num_complex::Complex64;

    use crate::frame::FrameSystem;
    use crate::module::ModuleOperator;

    /// Frame vectors as columns of `ℂ^m` (requires `A = ℂ`).
    pub fn columns(frame: &FrameSystem) -> Vec<Vec<Complex64>> {
        frame
            .vectors()
            .iter()
            .map(|v| v.entries().iter().map(|e| e.block(0)[(0, 0)]).collect())
            .collect()
    }

    /// `Σ_n f_n f_n^H`.
    pub fn frame_operator(columns: &[Vec<Complex64>]) -> DMatrix<Complex64> {
        let m = columns[0].len();
        DMatrix::from_fn(m, m, |i, j| columns.iter().map(|f| f[i] * f[j].conj()).sum())
    }

    /// Extreme eigenvalues of a Hermitian matrix through its real symmetric
    /// embedding `[[Re, −Im], [Im, Re]]`, whose spectrum doubles each eigenvalue.
    pub fn extreme_eigenvalues(h: &DMatrix<Complex64>) -> (f64, f64) {
        let n = h.nrows();
        let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = h[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let ev = SymmetricEigen::new(real).eigenvalues;
        (ev.min(), ev.max())
    }

    /// `S^{-1} f_n` by LU solves.
    pub fn dual_columns(s: &DMatrix<Complex64>, columns: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let lu = s.clone().lu();
        columns
            .iter()
            .map(|f| {
                let rhs = nalgebra::DVector::from_column_slice(f);
                lu.solve(&rhs)
                    .expect("frame operator invertible")
                    .iter()
                    .copied()
                    .collect()
            })
            .collect()
    }

    /// The matrix of `x ↦ Kx` on column vectors: `(Kx)_j = Σ_i x_i M_ij`.
    pub fn operator_matrix(k: &ModuleOperator) -> DMatrix<Complex64> {
        DMatrix::from_fn(k.cod_rank(), k.dom_rank(), |j, i| k.entry(i, j).block(0)[(0, 0)])
    }

    /// `sup {C : S ⪰ C KK^H}` for invertible `S`, via the Cholesky factor
    /// `S = LL^H`: `1 / λ_max(L⁻¹ KK^H L^{-H})`.
    pub fn kframe_lower_bound(s: &DMatrix<Complex64>, k: &DMatrix<Complex64>) -> f64 {
        let l = s.clone().cholesky().expect("frame operator positive definite").l();
        let l_inv = l.try_inverse().expect("triangular factor invertible");
        let w = &l_inv * k * k.adjoint() * l_inv.adjoint();
        let (_, top) = extreme_eigenvalues(&((&w + w.adjoint()) * Complex64::new(0.5, 0.0)));
        1.0 / top
    }
}
