use super::{Iterate, LineSearch, ResolvedParams};
use crate::linalg::{dot, norm2};
use crate::newton::{Direction, ScaledSystem};
use crate::potential::phi;

/// An accepted step size and the potential and gap it leads to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepChoice {
    pub alpha: f64,
    pub phi_new: f64,
    pub gap_new: f64,
    /// The backtracking grid failed and the analytic step was used.
    pub guaranteed: bool,
}

/// Largest `α` keeping `x + α dx ≥ 0` and `z + α dz ≥ 0`; infinite when no
/// component decreases.
pub fn max_interior_step(x: &[f64], dx: &[f64], z: &[f64], dz: &[f64]) -> f64 {
    x.iter()
        .zip(dx)
        .chain(z.iter().zip(dz))
        .filter(|(_, &d)| d < 0.0)
        .map(|(&v, &d)| -v / d)
        .fold(f64::INFINITY, f64::min)
}

/// `(φ, gap)` at `(x + α dx, z + α dz)`, or `None` outside the interior.
pub fn potential_after(it: &Iterate, dir: &Direction, alpha: f64, nu: f64) -> Option<(f64, f64)> {
    let x: Vec<f64> =
        it.x.iter()
            .zip(&dir.dx)
            .map(|(a, b)| a + alpha * b)
            .collect();
    let z: Vec<f64> =
        it.z.iter()
            .zip(&dir.dz)
            .map(|(a, b)| a + alpha * b)
            .collect();
    phi(&x, &z, nu).ok().map(|v| (v.phi, v.gap))
}

/// `α = w_min·(1−κ)³ / (2‖r‖)`, which decreases the potential by at least
/// `0.15·(1−κ)⁴` at a feasible iterate.
pub fn guaranteed_step_feasible(sys: &ScaledSystem<'_>, kappa: f64) -> f64 {
    sys.w_min * (1.0 - kappa).powi(3) / (2.0 * norm2(&sys.r))
}

/// `α = (1−κ)³·w_min² / (200·(n+ν)·xᵀz)`, admissible for the infeasible method
/// whenever a bounded optimal pair exists.
pub fn guaranteed_step_infeasible(sys: &ScaledSystem<'_>, kappa: f64) -> f64 {
    (1.0 - kappa).powi(3) * sys.w_min * sys.w_min / (200.0 * (sys.n() as f64 + sys.nu) * sys.gap)
}

fn trial_steps(
    it: &Iterate,
    dir: &Direction,
    ls: &LineSearch,
    cap: f64,
) -> impl Iterator<Item = f64> {
    let bound = max_interior_step(&it.x, &dir.dx, &it.z, &dir.dz);
    let start = if bound.is_finite() {
        (ls.start_fraction * bound).min(cap)
    } else {
        cap.min(1.0)
    };
    let factor = ls.backtrack;
    (0..ls.max_trials).map(move |t| start * factor.powi(t as i32))
}

/// First step of the backtracking grid with `φ(new) ≤ φ − δ`, otherwise the
/// guaranteed step, which must then pass the same test.
pub fn step_search_feasible(
    it: &Iterate,
    dir: &Direction,
    sys: &ScaledSystem<'_>,
    params: &ResolvedParams,
    ls: &LineSearch,
    phi_now: f64,
) -> Option<StepChoice> {
    let target = phi_now - params.delta;
    for alpha in trial_steps(it, dir, ls, f64::INFINITY) {
        if let Some((p, g)) = potential_after(it, dir, alpha, params.nu) {
            if p <= target {
                return Some(StepChoice {
                    alpha,
                    phi_new: p,
                    gap_new: g,
                    guaranteed: false,
                });
            }
        }
    }
    let alpha = guaranteed_step_feasible(sys, params.kappa);
    let (p, g) = potential_after(it, dir, alpha, params.nu)?;
    (p <= target).then_some(StepChoice {
        alpha,
        phi_new: p,
        gap_new: g,
        guaranteed: true,
    })
}

/// Tests the potential decrease and `(x+αdx)ᵀ(z+αdz) ≥ (1−α)·xᵀz` jointly.
fn admissible_infeasible(
    it: &Iterate,
    dir: &Direction,
    alpha: f64,
    params: &ResolvedParams,
    phi_now: f64,
    gap_now: f64,
) -> Option<(f64, f64)> {
    let (p, g) = potential_after(it, dir, alpha, params.nu)?;
    (p <= phi_now - params.delta && g >= (1.0 - alpha) * gap_now).then_some((p, g))
}

/// Backtracking over `α ≤ 1` plus the guaranteed step; `None` when every
/// candidate fails, which certifies that no optimal pair of norm at most ρ
/// exists.
pub fn step_search_infeasible(
    it: &Iterate,
    dir: &Direction,
    sys: &ScaledSystem<'_>,
    params: &ResolvedParams,
    ls: &LineSearch,
    phi_now: f64,
) -> Option<StepChoice> {
    let gap_now = dot(&it.x, &it.z);
    for alpha in trial_steps(it, dir, ls, 1.0) {
        if let Some((p, g)) = admissible_infeasible(it, dir, alpha, params, phi_now, gap_now) {
            return Some(StepChoice {
                alpha,
                phi_new: p,
                gap_new: g,
                guaranteed: false,
            });
        }
    }
    let alpha = guaranteed_step_infeasible(sys, params.kappa);
    admissible_infeasible(it, dir, alpha, params, phi_now, gap_now).map(|(p, g)| StepChoice {
        alpha,
        phi_new: p,
        gap_new: g,
        guaranteed: true,
    })
}
