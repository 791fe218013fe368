use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::linalg;
use crate::module::{ModuleOperator, RANK_TOL};
use crate::random;

use super::range_included_by_rank;

/// Number of sampled `z` used to spot-check `‖S*z‖ ≤ μ‖T*z‖`.
const MU_SPOT_CHECKS: usize = 64;

/// Outcome of evaluating the four Douglas conditions for `S: A^k → A^h` and
/// `T: A^f → A^h` independently:
///
/// 1. `SS* ⪯ λ TT*` for some `λ`,
/// 2. `‖S*z‖ ≤ μ‖T*z‖` for all `z`,
/// 3. `TX = S` has an adjointable solution,
/// 4. `R(S) ⊆ R(T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DouglasReport {
    /// Least `λ` with `SS* ⪯ λTT*`; absent when no `λ` exists.
    pub cond1_lambda: Option<f64>,
    /// `√λ`, spot-checked on sampled `z`.
    pub cond2_mu: Option<f64>,
    pub cond2_spot_checks: usize,
    /// `X = T⁺S` when it solves `TX = S`.
    pub cond3_solution: Option<ModuleOperator>,
    pub cond4_range_included: bool,
    /// `‖T∘X − S‖` for `X = T⁺S`, whether or not it is a solution.
    pub residual: f64,
    pub tol: f64,
}

impl DouglasReport {
    /// All conditions hold.
    pub fn holds(&self) -> bool {
        self.cond4_range_included
    }
}

fn check_pair(s: &ModuleOperator, t: &ModuleOperator) -> Result<()> {
    if s.spec() != t.spec() {
        return Err(FrameError::structural("operators over different algebras"));
    }
    if s.cod_rank() != t.cod_rank() {
        return Err(FrameError::structural(format!(
            "codomains differ: S maps into A^{}, T into A^{}",
            s.cod_rank(),
            t.cod_rank()
        )));
    }
    Ok(())
}

/// `X = T⁺S` and the residual `‖T∘X − S‖`.
pub(crate) fn least_squares_solution(s: &ModuleOperator, t: &ModuleOperator) -> Result<(ModuleOperator, f64)> {
    check_pair(s, t)?;
    let x = t.pseudo_inverse(RANK_TOL).compose(s)?;
    let residual = t.compose(&x)?.checked_sub(s)?.operator_norm();
    Ok((x, residual))
}

fn residual_ok(residual: f64, s: &ModuleOperator, tol: f64) -> bool {
    residual <= tol * s.operator_norm().max(1.0)
}

/// Solves `T∘X = S` through the pseudo-inverse of `T`. Fails when the residual
/// exceeds `tol·max(1, ‖S‖)`, i.e. when `R(S) ⊄ R(T)`.
pub fn douglas_factorize(s: &ModuleOperator, t: &ModuleOperator, tol: f64) -> Result<ModuleOperator> {
    let (x, residual) = least_squares_solution(s, t)?;
    if !residual_ok(residual, s, tol) {
        return Err(FrameError::domain(format!(
            "range inclusion fails: ‖TX − S‖ = {residual:e}"
        )));
    }
    Ok(x)
}

/// Least `λ` with `φ(SS*) ⪯ λ φ(TT*)`, blockwise, or `None` if the range of
/// `φ(SS*)` leaks out of the range of `φ(T)`.
fn majorization_constant(s: &ModuleOperator, t: &ModuleOperator, tol: f64) -> Result<Option<f64>> {
    let sss = s.compose(&s.adjoint())?.realize();
    let ft = t.realize();
    let mut lambda = 0.0_f64;
    for (p, f) in sss.blocks.iter().zip(&ft.blocks) {
        match linalg::pencil_sup(p, f, RANK_TOL, tol) {
            Some(l) => lambda = lambda.max(l),
            None => return Ok(None),
        }
    }
    Ok(Some(lambda))
}

/// Evaluates the four conditions by separate routes and insists that they
/// agree.
pub fn douglas_report(s: &ModuleOperator, t: &ModuleOperator, tol: f64) -> Result<DouglasReport> {
    check_pair(s, t)?;
    let lambda = majorization_constant(s, t, tol)?;
    let (x, residual) = least_squares_solution(s, t)?;
    let solved = residual_ok(residual, s, tol);
    let included = range_included_by_rank(t, s)?;

    if lambda.is_some() != solved || solved != included {
        return Err(FrameError::Consistency(format!(
            "Douglas conditions disagree: majorization {}, solvable {solved} (residual {residual:e}), \
             range inclusion {included}",
            lambda.map_or("absent".to_string(), |l| format!("λ = {l:e}"))
        )));
    }

    let mu = lambda.map(f64::sqrt);
    let mut spot_checks = 0;
    if let Some(mu) = mu {
        let mut rng = random::rng_from_seed(random::derive_seed(0x0D00_61A5, s.cod_rank() as u64));
        let s_adj = s.adjoint();
        let t_adj = t.adjoint();
        let slack = tol * s.operator_norm().max(1.0);
        for _ in 0..MU_SPOT_CHECKS {
            let z = random::random_unit_vector(s.spec(), s.cod_rank(), &mut rng);
            let lhs = s_adj.apply(&z)?.norm();
            let rhs = mu * t_adj.apply(&z)?.norm();
            if lhs > rhs + slack {
                return Err(FrameError::Consistency(format!(
                    "‖S*z‖ = {lhs:e} exceeds μ‖T*z‖ = {rhs:e}"
                )));
            }
            spot_checks += 1;
        }
    }

    Ok(DouglasReport {
        cond1_lambda: lambda,
        cond2_mu: mu,
        cond2_spot_checks: spot_checks,
        cond3_solution: solved.then_some(x),
        cond4_range_included: included,
        residual,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::module::{scalar_diagonal_operator, scalar_operator};

    #[test]
    fn scalar_factorization() {
        let s = AlgebraSpec::scalar();
        let t = scalar_operator(&s, 1, 1.0).unwrap();
        let sop = scalar_operator(&s, 1, 2.0).unwrap();
        let x = douglas_factorize(&sop, &t, 1e-8).unwrap();
        assert!(x.max_abs_diff(&sop) < 1e-15);
    }

    #[test]
    fn disjoint_ranges_fail() {
        let s = AlgebraSpec::scalar();
        let t = scalar_diagonal_operator(&s, &[1.0, 0.0]).unwrap();
        let sop = scalar_diagonal_operator(&s, &[0.0, 1.0]).unwrap();
        assert!(matches!(douglas_factorize(&sop, &t, 1e-8), Err(FrameError::Domain(_))));
        let r = douglas_report(&sop, &t, 1e-8).unwrap();
        assert_eq!(r.cond1_lambda, None);
        assert!(r.cond3_solution.is_none());
        assert!(!r.cond4_range_included);
    }

    #[test]
    fn self_and_zero_cases() {
        let spec = AlgebraSpec::matrix(2).unwrap();
        let mut rng = random::rng_from_seed(5);
        let t = random::random_operator(&spec, 2, 2, &mut rng);
        let r = douglas_report(&t, &t, 1e-8).unwrap();
        assert!((r.cond1_lambda.unwrap() - 1.0).abs() < 1e-8);
        let id = crate::module::ModuleOperator::identity(&spec, 2).unwrap();
        assert!(r.cond3_solution.unwrap().max_abs_diff(&id) < 1e-8);
        assert!(r.cond4_range_included);

        let zero = crate::module::ModuleOperator::zero(&spec, 2, 2).unwrap();
        let r = douglas_report(&zero, &t, 1e-8).unwrap();
        assert_eq!(r.cond1_lambda, Some(0.0));
        assert_eq!(r.cond3_solution.unwrap().operator_norm(), 0.0);
        assert!(r.cond4_range_included);
    }

    #[test]
    fn codomains_must_agree() {
        let s = AlgebraSpec::scalar();
        let a = crate::module::ModuleOperator::zero(&s, 1, 2).unwrap();
        let b = crate::module::ModuleOperator::zero(&s, 1, 3).unwrap();
        assert!(matches!(douglas_report(&a, &b, 1e-8), Err(FrameError::Structural(_))));
    }
}
