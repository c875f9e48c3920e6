use std::time::Instant;

use super::{
    check_rank, default_max_outer, iteration_bound, residual_norms, step_search_infeasible,
    Iterate, IterationRecord, SolveParams, SolveResult, SolveStatus, StepContext,
};
use crate::error::Result;
use crate::lp::LinearProgram;
use crate::newton::{build_scaled_system, inexact_directions, Mode};
use crate::potential::phi;

/// Infeasible inexact potential reduction from the cold start `ρ(e, 0, e)`.
///
/// Stops with [`SolveStatus::Optimal`] once `xᵀz ≤ ε`, or with
/// [`SolveStatus::InfeasibilityCertificate`] when no step satisfies both the
/// potential decrease and `(x+αdx)ᵀ(z+αdz) ≥ (1−α)xᵀz`.
pub fn run_infeasible(lp: &LinearProgram, params: &SolveParams) -> Result<SolveResult> {
    run_infeasible_observed(lp, params, &mut |_| {})
}

pub fn run_infeasible_observed(
    lp: &LinearProgram,
    params: &SolveParams,
    observer: &mut dyn FnMut(&StepContext<'_, '_>),
) -> Result<SolveResult> {
    let started = Instant::now();
    let n = lp.num_cols();
    let resolved = params.resolve(Mode::Infeasible, n)?;
    check_rank(lp.a(), lp)?;

    let rho = resolved.rho;
    let mut it = Iterate::new(vec![rho; n], vec![0.0; lp.num_rows()], vec![rho; n]);
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
        let sys = build_scaled_system(lp, &it.x, &it.y, &it.z, resolved.nu)?;
        let out = match inexact_directions(&sys, resolved.kappa, Mode::Infeasible, &params.inner) {
            Ok(o) => o,
            Err(e) => {
                message = Some(e.to_string());
                break SolveStatus::NumericalFailure;
            }
        };
        let Some(choice) = step_search_infeasible(
            &it,
            &out.direction,
            &sys,
            &resolved,
            &params.line_search,
            pv.phi,
        ) else {
            message = Some(format!(
                "iteration {}: no step size satisfies the potential decrease and the gap condition",
                it.k
            ));
            break SolveStatus::InfeasibilityCertificate;
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
        it.theta *= 1.0 - a;
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
