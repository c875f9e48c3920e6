use std::time::Instant;

use super::{
    check_rank, default_max_outer, iteration_bound, residual_norms, step_search_feasible, Iterate,
    IterationRecord, SolveParams, SolveResult, SolveStatus, StepContext,
};
use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseCholesky, DenseMatrix};
use crate::lp::{LinearProgram, PrimalDualPoint};
use crate::newton::{build_scaled_system, inexact_directions, Mode};
use crate::potential::phi;

/// Checks that `start` lies in the strictly feasible set, up to
/// `1e-9·(1 + ‖b‖)` and `1e-9·(1 + ‖c‖)` in the equality residuals.
pub fn validate_strict_start(lp: &LinearProgram, start: &PrimalDualPoint) -> Result<()> {
    if start.x.len() != lp.num_cols()
        || start.z.len() != lp.num_cols()
        || start.y.len() != lp.num_rows()
    {
        return Err(Error::Precondition(
            "start point dimensions do not match the LP".into(),
        ));
    }
    if start.x.iter().chain(&start.z).any(|&v| !(v > 0.0)) {
        return Err(Error::Precondition(
            "start point is not strictly positive".into(),
        ));
    }
    let rp = norm2(&lp.primal_residual(&start.x)?);
    let rd = norm2(&lp.dual_residual(&start.y, &start.z)?);
    if rp > 1e-9 * (1.0 + norm2(lp.b())) {
        return Err(Error::Precondition(format!(
            "start violates A x = b (residual {rp:e})"
        )));
    }
    if rd > 1e-9 * (1.0 + norm2(lp.c())) {
        return Err(Error::Precondition(format!(
            "start violates Aᵀy + z = c (residual {rd:e})"
        )));
    }
    Ok(())
}

/// The feasible point closest to `(e, ·, e)` in least squares:
/// `x = e + Aᵀ(AAᵀ)⁻¹(b − Ae)`, `y = (AAᵀ)⁻¹A(c − e)`, `z = c − Aᵀy`.
/// Fails with a precondition error when that point is not strictly positive.
pub fn least_squares_start(lp: &LinearProgram) -> Result<PrimalDualPoint> {
    let (m, n) = (lp.num_rows(), lp.num_cols());
    let a = lp.a();
    let mut aat = DenseMatrix::zeros(m, m);
    for j in 0..n {
        let col: Vec<(usize, f64)> = a.col(j).collect();
        for &(i, vi) in &col {
            for &(k, vk) in &col {
                aat.data[i * m + k] += vi * vk;
            }
        }
    }
    let chol = DenseCholesky::factor(&aat)?;
    let ones = vec![1.0; n];
    let ae = a.matvec(&ones)?;
    let rhs: Vec<f64> = lp.b().iter().zip(&ae).map(|(b, v)| b - v).collect();
    let corr = a.matvec_transpose(&chol.solve(&rhs))?;
    let x: Vec<f64> = corr.iter().map(|c| 1.0 + c).collect();
    let c_minus_e: Vec<f64> = lp.c().iter().map(|c| c - 1.0).collect();
    let y = chol.solve(&a.matvec(&c_minus_e)?);
    let aty = a.matvec_transpose(&y)?;
    let z: Vec<f64> = lp.c().iter().zip(&aty).map(|(c, v)| c - v).collect();
    let start = PrimalDualPoint { x, y, z };
    validate_strict_start(lp, &start)?;
    Ok(start)
}

/// Feasible inexact potential reduction from a strictly feasible start.
pub fn run_feasible(
    lp: &LinearProgram,
    start: &PrimalDualPoint,
    params: &SolveParams,
) -> Result<SolveResult> {
    run_feasible_observed(lp, start, params, &mut |_| {})
}

pub fn run_feasible_observed(
    lp: &LinearProgram,
    start: &PrimalDualPoint,
    params: &SolveParams,
    observer: &mut dyn FnMut(&StepContext<'_, '_>),
) -> Result<SolveResult> {
    let started = Instant::now();
    let resolved = params.resolve(Mode::Feasible, lp.num_cols())?;
    check_rank(lp.a(), lp)?;
    validate_strict_start(lp, start)?;

    let mut it = Iterate::new(start.x.clone(), start.y.clone(), start.z.clone());
    let phi0 = phi(&it.x, &it.z, resolved.nu)?.phi;
    let bound = iteration_bound(phi0, resolved.nu, resolved.epsilon, resolved.delta);
    let max_outer = params.max_outer.unwrap_or_else(|| default_max_outer(bound));
    let initial_residuals = residual_norms(lp, &it)?;
    let gap0 = it.gap();
    let mut log = Vec::new();
    let mut message = None;

    let status = loop {
        let pv = match phi(&it.x, &it.z, resolved.nu) {
            Ok(v) => v,
            Err(e) => {
                message = Some(e.to_string());
                break SolveStatus::NumericalFailure;
            }
        };
        if pv.gap <= resolved.epsilon {
            break SolveStatus::Optimal;
        }
        if it.k >= max_outer {
            break SolveStatus::IterationLimit;
        }
        let sys = build_scaled_system(lp, &it.x, &it.y, &it.z, resolved.nu)?.assume_feasible();
        let out = match inexact_directions(&sys, resolved.kappa, Mode::Feasible, &params.inner) {
            Ok(o) => o,
            Err(e) => {
                message = Some(e.to_string());
                break SolveStatus::NumericalFailure;
            }
        };
        let Some(choice) = step_search_feasible(
            &it,
            &out.direction,
            &sys,
            &resolved,
            &params.line_search,
            pv.phi,
        ) else {
            message = Some(format!(
                "iteration {}: guaranteed step failed the potential decrease (cond report {:?})",
                it.k, out.report
            ));
            break SolveStatus::NumericalFailure;
        };
        observer(&StepContext {
            iterate: &it,
            system: &sys,
            outcome: &out,
            choice: &choice,
            params: &resolved,
        });
        log.push(IterationRecord::new(
            &it,
            &sys,
            &out,
            pv.phi,
            &choice,
            residual_norms(lp, &it)?,
        ));

        let dir = &out.direction;
        let a = choice.alpha;
        for (v, d) in it.x.iter_mut().zip(&dir.dx) {
            *v += a * d;
        }
        for (v, d) in it.y.iter_mut().zip(&dir.dy) {
            *v += a * d;
        }
        for (v, d) in it.z.iter_mut().zip(&dir.dz) {
            *v += a * d;
        }
        it.k += 1;
    };

    Ok(SolveResult {
        status,
        params: resolved,
        iterate: it,
        log,
        phi0,
        gap0,
        initial_residuals,
        iteration_bound: bound,
        elapsed: started.elapsed(),
        message,
    })
}
