//! Operator-level frame theory: Douglas-type factorization, atomic systems for
//! an operator `K`, and K-frames.

mod atomic;
mod douglas;
mod kframe;

pub use atomic::{atomic_coefficients, atomic_system_for, verify_atomic_system, AtomicCertificate};
pub use douglas::{douglas_factorize, douglas_report, DouglasReport};
pub use kframe::{
    frame_from_kframe, kframe_via_range, optimal_kframe_lower_bound, surjectivity_constant, verify_kframe,
    KFrameCertificate,
};

use nalgebra::DMatrix;

use crate::error::{FrameError, Result};
use crate::linalg;
use crate::module::{ModuleOperator, RANK_TOL};

/// `R(inner) ⊆ R(outer)` decided blockwise by
/// `rank([φ(outer) | φ(inner)]) = rank(φ(outer))`.
pub fn range_included_by_rank(outer: &ModuleOperator, inner: &ModuleOperator) -> Result<bool> {
    if outer.spec() != inner.spec() || outer.cod_rank() != inner.cod_rank() {
        return Err(FrameError::structural("range comparison needs a common codomain"));
    }
    let po = outer.realize();
    let pi = inner.realize();
    Ok(po.blocks.iter().zip(&pi.blocks).all(|(o, i)| {
        let rows = o.nrows();
        let mut aug = DMatrix::zeros(rows, o.ncols() + i.ncols());
        aug.view_mut((0, 0), o.shape()).copy_from(o);
        aug.view_mut((0, o.ncols()), i.shape()).copy_from(i);
        linalg::rank(&aug, RANK_TOL) == linalg::rank(o, RANK_TOL)
    }))
}

pub(crate) fn check_square_on(k: &ModuleOperator, spec: &crate::AlgebraSpec, rank: usize) -> Result<()> {
    if k.spec() != spec {
        return Err(FrameError::structural("operator over a different algebra"));
    }
    if k.dom_rank() != rank || k.cod_rank() != rank {
        return Err(FrameError::structural(format!(
            "operator must act on A^{rank}, got A^{} → A^{}",
            k.dom_rank(),
            k.cod_rank()
        )));
    }
    Ok(())
}
