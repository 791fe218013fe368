use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{FrameError, Result};
use crate::frame::FrameSystem;
use crate::json::fingerprint;
use crate::module::{ModuleOperator, ModuleVector};

use super::check_square_on;
use super::douglas::least_squares_solution;

/// Witness that `{f_n}` is an atomic system for `K`: an adjointable
/// `X: A^m → A^N` with `K = θ∘X`. For every `x` the coefficients
/// `a_n = (Xx)_n` give `Kx = Σ a_n f_n` and
/// `Σ a_n a_n* = ⟨Xx, Xx⟩ ⪯ ‖X‖²⟨x, x⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicCertificate {
    pub frame_ref: String,
    pub k_ref: String,
    pub solution: ModuleOperator,
    /// `‖X‖²`.
    pub coeff_bound: f64,
    /// `‖θ‖²`.
    pub bessel_bound: f64,
    /// `‖θ∘X − K‖`.
    pub residual: f64,
    pub valid: bool,
    pub tol: f64,
}

impl AtomicCertificate {
    /// Coefficients `a_n = (Xx)_n`.
    pub fn coefficients(&self, x: &ModuleVector) -> Result<Vec<AlgebraElement>> {
        if !self.valid {
            return Err(FrameError::domain("not an atomic system for K"));
        }
        Ok(self.solution.apply(x)?.entries().to_vec())
    }
}

/// Factor `K = θ∘X` through the synthesis operator. A failed factorization is
/// an invalid certificate, not an error.
pub fn verify_atomic_system(frame: &FrameSystem, k: &ModuleOperator, tol: f64) -> Result<AtomicCertificate> {
    check_square_on(k, frame.spec(), frame.module_rank())?;
    let theta = frame.synthesis_operator();
    let (x, residual) = least_squares_solution(k, theta)?;
    let valid = residual <= tol * k.operator_norm().max(1.0);
    let coeff_bound = x.operator_norm().powi(2);
    Ok(AtomicCertificate {
        frame_ref: fingerprint(frame),
        k_ref: fingerprint(k),
        solution: x,
        coeff_bound,
        bessel_bound: theta.operator_norm().powi(2),
        residual,
        valid,
        tol,
    })
}

pub fn atomic_coefficients(
    frame: &FrameSystem,
    k: &ModuleOperator,
    x: &ModuleVector,
    tol: f64,
) -> Result<Vec<AlgebraElement>> {
    verify_atomic_system(frame, k, tol)?.coefficients(x)
}

/// `{K x_n}` for a Parseval frame `{x_n}`: an atomic system for `K` with
/// coefficients `a_n = ⟨x, x_n⟩`.
pub fn atomic_system_for(k: &ModuleOperator, base: &FrameSystem) -> Result<FrameSystem> {
    check_square_on(k, base.spec(), base.module_rank())?;
    if !base.is_parseval(1e-8) {
        return Err(FrameError::domain("base frame is not Parseval"));
    }
    let vectors = base.vectors().iter().map(|x| k.apply(x)).collect::<Result<Vec<_>>>()?;
    FrameSystem::new(vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::frame::standard_generator_frame;
    use crate::module::scalar_diagonal_operator;
    use crate::random;

    #[test]
    fn zero_operator_is_trivially_atomic() {
        let s = AlgebraSpec::matrix(2).unwrap();
        let f = random::random_vector(&s, 2, &mut random::rng_from_seed(1));
        let frame = FrameSystem::new(vec![f]).unwrap();
        let zero = ModuleOperator::zero(&s, 2, 2).unwrap();
        let cert = verify_atomic_system(&frame, &zero, 1e-8).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.coeff_bound, 0.0);
    }

    #[test]
    fn deficient_frame_is_not_atomic_for_identity() {
        let s = AlgebraSpec::scalar();
        let e1 = ModuleVector::generator(&s, 2, 0);
        let frame = FrameSystem::new(vec![e1]).unwrap();
        let id = ModuleOperator::identity(&s, 2).unwrap();
        let cert = verify_atomic_system(&frame, &id, 1e-8).unwrap();
        assert!(!cert.valid);
        let x = ModuleVector::generator(&s, 2, 1);
        assert!(matches!(
            atomic_coefficients(&frame, &id, &x, 1e-8),
            Err(FrameError::Domain(_))
        ));
    }

    #[test]
    fn generators_with_identity() {
        let s = AlgebraSpec::matrix(2).unwrap();
        let g = standard_generator_frame(&s, 3).unwrap();
        let id = ModuleOperator::identity(&s, 3).unwrap();
        let x = random::random_vector(&s, 3, &mut random::rng_from_seed(2));
        let a = atomic_coefficients(&g, &id, &x, 1e-8).unwrap();
        for (an, xn) in a.iter().zip(x.entries()) {
            assert!((an - xn).max_abs_entry() < 1e-14);
        }
    }

    #[test]
    fn atomic_system_construction() {
        let s = AlgebraSpec::scalar();
        let g = standard_generator_frame(&s, 2).unwrap();
        let id = ModuleOperator::identity(&s, 2).unwrap();
        assert_eq!(atomic_system_for(&id, &g).unwrap(), g);
        let zero = ModuleOperator::zero(&s, 2, 2).unwrap();
        let z = atomic_system_for(&zero, &g).unwrap();
        assert!(z.vectors().iter().all(|v| v.norm() == 0.0));
        assert!(verify_atomic_system(&z, &zero, 1e-8).unwrap().valid);

        let not_parseval = FrameSystem::new(vec![
            ModuleVector::generator(&s, 2, 0).scale(2.0),
            ModuleVector::generator(&s, 2, 1),
        ])
        .unwrap();
        let k = scalar_diagonal_operator(&s, &[1.0, 2.0]).unwrap();
        assert!(matches!(
            atomic_system_for(&k, &not_parseval),
            Err(FrameError::Domain(_))
        ));
    }
}
