use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::frame::{BoundFlavor, FrameBounds, FrameSystem};
use crate::json::fingerprint;
use crate::linalg;
use crate::module::{ModuleOperator, RANK_TOL};

use super::{check_square_on, range_included_by_rank};

/// Witness that `{f_n}` is (or is not) a K-frame with bounds `(C, D)`:
/// `C⟨K*x, K*x⟩ ⪯ Σ⟨x,f_n⟩⟨f_n,x⟩ ⪯ D⟨x,x⟩`, equivalently `S ⪰ C·KK*` and
/// `S ⪯ D·I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KFrameCertificate {
    pub frame_ref: String,
    pub k_ref: String,
    pub lower: f64,
    pub upper: f64,
    /// `λ_min φ(S − C·KK*)` over all blocks.
    pub psd_margin: f64,
    /// `λ_min φ(D·I − S)` over all blocks.
    pub upper_margin: f64,
    /// `L = θ`, so `L e_n = f_n`.
    pub witness_l: ModuleOperator,
    /// `R(K) ⊆ R(L)` by the rank test.
    pub range_included: bool,
    pub valid: bool,
    pub tol: f64,
}

fn kkstar(k: &ModuleOperator) -> Result<ModuleOperator> {
    k.compose(&k.adjoint())
}

fn min_eigenvalue(op: &ModuleOperator) -> f64 {
    op.spectral_bounds().0
}

/// Checks `S − C·KK* ⪰ 0` and `D·I − S ⪰ 0` within `tol`.
pub fn verify_kframe(
    frame: &FrameSystem,
    k: &ModuleOperator,
    lower: f64,
    upper: f64,
    tol: f64,
) -> Result<KFrameCertificate> {
    check_square_on(k, frame.spec(), frame.module_rank())?;
    if !(lower > 0.0 && upper > 0.0) {
        return Err(FrameError::domain(format!(
            "K-frame bounds must be positive, got ({lower}, {upper})"
        )));
    }
    let s = frame.frame_operator();
    let lower_gap = s.checked_sub(&kkstar(k)?.scale(lower))?;
    let id = ModuleOperator::identity(frame.spec(), frame.module_rank())?;
    let upper_gap = id.scale(upper).checked_sub(s)?;
    let valid = lower_gap.is_positive_operator(tol)? && upper_gap.is_positive_operator(tol)?;
    let witness_l = frame.synthesis_operator().clone();
    Ok(KFrameCertificate {
        frame_ref: fingerprint(frame),
        k_ref: fingerprint(k),
        lower,
        upper,
        psd_margin: min_eigenvalue(&lower_gap),
        upper_margin: min_eigenvalue(&upper_gap),
        range_included: range_included_by_rank(&witness_l, k)?,
        witness_l,
        valid,
        tol,
    })
}

/// `sup {C : S ⪰ C·KK*}`: per block the reciprocal of the top eigenvalue of
/// the pencil `(φ(KK*), φ(S))` on the range of `φ(S)`, minimized over blocks.
/// Zero when the range of `φ(KK*)` is not inside the range of `φ(S)`.
pub fn optimal_kframe_lower_bound(frame: &FrameSystem, k: &ModuleOperator, tol: f64) -> Result<f64> {
    check_square_on(k, frame.spec(), frame.module_rank())?;
    if k.operator_norm() == 0.0 {
        return Err(FrameError::domain(
            "K = 0: every Bessel sequence is a K-frame for every C",
        ));
    }
    let p = kkstar(k)?.realize();
    // φ(S) = φ(θ)φ(θ)*, so φ(θ) spans the range of φ(S)
    let theta = frame.synthesis_operator().realize();
    let mut best = f64::INFINITY;
    for (pb, tb) in p.blocks.iter().zip(&theta.blocks) {
        match linalg::pencil_sup(pb, tb, RANK_TOL, tol) {
            None => return Ok(0.0),
            Some(l) if l > 0.0 => best = best.min(1.0 / l),
            Some(_) => {}
        }
    }
    Ok(best)
}

/// Range route: `L = θ` satisfies `L e_n = f_n`; the sequence is a K-frame iff
/// `R(K) ⊆ R(L)`. The verdict is cross-checked against the spectral route
/// (`optimal_kframe_lower_bound > 0`).
pub fn kframe_via_range(frame: &FrameSystem, k: &ModuleOperator, tol: f64) -> Result<KFrameCertificate> {
    check_square_on(k, frame.spec(), frame.module_rank())?;
    let witness_l = frame.synthesis_operator().clone();
    let range_included = range_included_by_rank(&witness_l, k)?;
    let upper = frame.optimal_frame_bounds().upper;
    // any C works for K = 0; record C = 1
    let lower = if k.operator_norm() == 0.0 {
        1.0
    } else {
        optimal_kframe_lower_bound(frame, k, tol)?
    };
    if range_included != (lower > 0.0) {
        return Err(FrameError::Consistency(format!(
            "range test says {range_included}, optimal K-frame bound is {lower:e}"
        )));
    }
    let psd_margin = min_eigenvalue(&frame.frame_operator().checked_sub(&kkstar(k)?.scale(lower))?);
    let id = ModuleOperator::identity(frame.spec(), frame.module_rank())?;
    let upper_margin = min_eigenvalue(&id.scale(upper).checked_sub(frame.frame_operator())?);
    Ok(KFrameCertificate {
        frame_ref: fingerprint(frame),
        k_ref: fingerprint(k),
        lower,
        upper,
        psd_margin,
        upper_margin,
        witness_l,
        range_included,
        valid: range_included,
        tol,
    })
}

/// Largest `M ≥ 0` with `M²·I ⪯ KK*`: the smallest singular value of `φ(K)`
/// over all blocks, reported as zero when it falls under the rank cutoff.
/// `M > 0` exactly when `K` is surjective.
pub fn surjectivity_constant(k: &ModuleOperator) -> Result<f64> {
    if !k.is_square() {
        return Err(FrameError::structural("surjectivity constant needs a square operator"));
    }
    let real = k.realize();
    let smax = real.norm();
    if smax == 0.0 {
        return Ok(0.0);
    }
    let smin = real
        .blocks
        .iter()
        .flat_map(linalg::singular_values)
        .fold(f64::INFINITY, f64::min);
    Ok(if smin <= RANK_TOL * smax { 0.0 } else { smin })
}

/// Frame bounds `(M²·C_K, D)` for a K-frame with surjective `K`, using the
/// optimal K-frame lower bound `C_K` and the optimal upper bound `D`.
pub fn frame_from_kframe(frame: &FrameSystem, k: &ModuleOperator, tol: f64) -> Result<FrameBounds> {
    check_square_on(k, frame.spec(), frame.module_rank())?;
    let m = surjectivity_constant(k)?;
    if m == 0.0 {
        return Err(FrameError::domain("K not surjective"));
    }
    let c = optimal_kframe_lower_bound(frame, k, tol)?;
    if c == 0.0 {
        return Err(FrameError::domain("not a K-frame"));
    }
    let lower = m * m * c;
    Ok(FrameBounds {
        lower,
        upper: frame.optimal_frame_bounds().upper,
        flavor: BoundFlavor::Loewner,
        is_frame: lower > 0.0,
    })
}
