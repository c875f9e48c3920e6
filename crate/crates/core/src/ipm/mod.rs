//! The feasible and infeasible inexact potential reduction methods.

mod certify;
mod feasible;
mod infeasible;
mod step;

pub use certify::{certify_output, CertifyCheck, CertifyReport};
pub use feasible::{
    least_squares_start, run_feasible, run_feasible_observed, validate_strict_start,
};
pub use infeasible::{run_infeasible, run_infeasible_observed};
pub use step::{
    guaranteed_step_feasible, guaranteed_step_infeasible, max_interior_step, potential_after,
    step_search_feasible, step_search_infeasible, StepChoice,
};

use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{norm2, SparseMatrix};
use crate::lp::LinearProgram;
use crate::newton::{InexactOutcome, InnerControls, Mode, ScaledSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub k: usize,
    /// Fraction of the initial infeasibility still present (always 1 for
    /// feasible runs).
    pub theta: f64,
}

impl Iterate {
    pub fn new(x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> Self {
        Self {
            x,
            y,
            z,
            k: 0,
            theta: 1.0,
        }
    }

    pub fn gap(&self) -> f64 {
        crate::linalg::dot(&self.x, &self.z)
    }
}

/// Backtracking grid for the step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearch {
    /// First trial is this fraction of the largest interior step.
    pub start_fraction: f64,
    pub backtrack: f64,
    pub max_trials: usize,
}

impl Default for LineSearch {
    fn default() -> Self {
        Self {
            start_fraction: 0.99,
            backtrack: 0.5,
            max_trials: 40,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveParams {
    /// Defaults to `√n`.
    pub nu: Option<f64>,
    pub kappa: f64,
    pub epsilon: f64,
    /// Scale of the infeasible cold start `ρ(e, 0, e)`.
    pub rho: f64,
    /// Defaults to ten times the potential-decrease iteration bound.
    pub max_outer: Option<usize>,
    pub line_search: LineSearch,
    pub inner: InnerControls,
}

impl Default for SolveParams {
    fn default() -> Self {
        Self {
            nu: None,
            kappa: 0.5,
            epsilon: 1e-8,
            rho: 1e4,
            max_outer: None,
            line_search: LineSearch::default(),
            inner: InnerControls::default(),
        }
    }
}

/// Parameters with defaults filled in and the decrease constant derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedParams {
    pub mode: Mode,
    pub nu: f64,
    pub kappa: f64,
    pub epsilon: f64,
    pub rho: f64,
    pub delta: f64,
}

/// `δ = 0.15·(1−κ)⁴`
pub fn delta_feasible(kappa: f64) -> f64 {
    0.15 * (1.0 - kappa).powi(4)
}

/// `δ = (1−κ)⁴ / (1600·(n+ν)²)`
pub fn delta_infeasible(kappa: f64, n: usize, nu: f64) -> f64 {
    (1.0 - kappa).powi(4) / (1600.0 * (n as f64 + nu).powi(2))
}

/// `⌈(φ⁰ − ν·ln ε)/δ⌉`: the number of δ-decreases after which the gap must be
/// below ε, since `φ ≥ ν·ln(xᵀz)`.
pub fn iteration_bound(phi0: f64, nu: f64, epsilon: f64, delta: f64) -> usize {
    let v = ((phi0 - nu * epsilon.ln()) / delta).ceil();
    if v <= 0.0 {
        0
    } else if v >= usize::MAX as f64 {
        usize::MAX
    } else {
        v as usize
    }
}

impl SolveParams {
    pub fn resolve(&self, mode: Mode, n: usize) -> Result<ResolvedParams> {
        let nf = n as f64;
        let nu = self.nu.unwrap_or(nf.sqrt());
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::Parameter(format!(
                "kappa {} not in [0, 1)",
                self.kappa
            )));
        }
        if !(nu >= nf.sqrt() * (1.0 - 1e-12)) {
            return Err(Error::Parameter(format!(
                "nu {nu} below sqrt(n) = {}",
                nf.sqrt()
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Parameter(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        let delta = match mode {
            Mode::Feasible => delta_feasible(self.kappa),
            Mode::Infeasible => {
                if nu > 2.0 * nf {
                    return Err(Error::Parameter(format!(
                        "nu {nu} exceeds 2n = {}",
                        2.0 * nf
                    )));
                }
                if !(self.rho > 0.0) {
                    return Err(Error::Parameter(format!(
                        "rho {} must be positive",
                        self.rho
                    )));
                }
                delta_infeasible(self.kappa, n, nu)
            }
        };
        Ok(ResolvedParams {
            mode,
            nu,
            kappa: self.kappa,
            epsilon: self.epsilon,
            rho: self.rho,
            delta,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    /// `xᵀz ≤ ε`
    Optimal,
    /// No admissible step: there is no optimal pair with `‖(x*, z*)‖∞ ≤ ρ`.
    InfeasibilityCertificate,
    IterationLimit,
    NumericalFailure,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::InfeasibilityCertificate => "infeasibility-certificate",
            SolveStatus::IterationLimit => "iteration-limit",
            SolveStatus::NumericalFailure => "numerical-failure",
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One outer iteration, taken from iterate `k` to `k+1`. The serialized
/// columns form the iteration-log CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    pub gap: f64,
    pub phi: f64,
    pub delta_achieved: f64,
    pub alpha: f64,
    pub theta: f64,
    pub norm_xi: f64,
    pub descent_lhs: f64,
    pub descent_rhs: f64,
    pub size_lhs: f64,
    pub size_rhs: f64,
    pub gap_control_lhs: f64,
    pub gap_control_rhs: f64,
    pub cg_iters: usize,
    pub wmin: f64,
    pub norm_r: f64,
    #[serde(skip)]
    pub mu: f64,
    #[serde(skip)]
    pub primal_residual: f64,
    #[serde(skip)]
    pub dual_residual: f64,
    #[serde(skip)]
    pub gap_after: f64,
    #[serde(skip)]
    pub used_fallback: bool,
    #[serde(skip)]
    pub used_guaranteed_step: bool,
}

impl IterationRecord {
    fn new(
        it: &Iterate,
        sys: &ScaledSystem<'_>,
        out: &InexactOutcome,
        phi: f64,
        choice: &StepChoice,
        residuals: (f64, f64),
    ) -> Self {
        let rep = &out.report;
        Self {
            k: it.k,
            gap: sys.gap,
            phi,
            delta_achieved: phi - choice.phi_new,
            alpha: choice.alpha,
            theta: it.theta,
            norm_xi: norm2(&out.direction.xi),
            descent_lhs: rep.descent.lhs,
            descent_rhs: rep.descent.rhs,
            size_lhs: rep.relative_size.lhs,
            size_rhs: rep.relative_size.rhs,
            gap_control_lhs: rep.gap_control.lhs,
            gap_control_rhs: rep.gap_control.rhs,
            cg_iters: out.stats.cg_iterations,
            wmin: sys.w_min,
            norm_r: norm2(&sys.r),
            mu: sys.mu,
            primal_residual: residuals.0,
            dual_residual: residuals.1,
            gap_after: choice.gap_new,
            used_fallback: out.stats.used_fallback,
            used_guaranteed_step: choice.guaranteed,
        }
    }
}

/// Everything an observer can inspect about one outer iteration.
pub struct StepContext<'c, 'a> {
    pub iterate: &'c Iterate,
    pub system: &'c ScaledSystem<'a>,
    pub outcome: &'c InexactOutcome,
    pub choice: &'c StepChoice,
    pub params: &'c ResolvedParams,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub params: ResolvedParams,
    pub iterate: Iterate,
    pub log: Vec<IterationRecord>,
    pub phi0: f64,
    pub gap0: f64,
    /// `‖A x⁰ − b‖` and `‖Aᵀy⁰ + z⁰ − c‖`.
    pub initial_residuals: (f64, f64),
    /// The potential-decrease iteration bound.
    pub iteration_bound: usize,
    pub elapsed: Duration,
    pub message: Option<String>,
}

impl SolveResult {
    pub fn total_cg_iterations(&self) -> usize {
        self.log.iter().map(|r| r.cg_iters).sum()
    }

    pub fn final_gap(&self) -> f64 {
        self.iterate.gap()
    }

    pub fn write_log_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.log.is_empty() {
            w.write_record([
                "k",
                "gap",
                "phi",
                "delta_achieved",
                "alpha",
                "theta",
                "norm_xi",
                "descent_lhs",
                "descent_rhs",
                "size_lhs",
                "size_rhs",
                "gap_control_lhs",
                "gap_control_rhs",
                "cg_iters",
                "wmin",
                "norm_r",
            ])?;
        }
        for rec in &self.log {
            w.serialize(rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The three blocks `A x − b`, `Aᵀy + z − c` and `X z − μ e`.
pub fn nonlinear_residual(
    lp: &LinearProgram,
    it: &Iterate,
    mu: f64,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let primal = lp.primal_residual(&it.x)?;
    let dual = lp.dual_residual(&it.y, &it.z)?;
    let comp = it.x.iter().zip(&it.z).map(|(x, z)| x * z - mu).collect();
    Ok((primal, dual, comp))
}

fn residual_norms(lp: &LinearProgram, it: &Iterate) -> Result<(f64, f64)> {
    Ok((
        norm2(&lp.primal_residual(&it.x)?),
        norm2(&lp.dual_residual(&it.y, &it.z)?),
    ))
}

fn check_rank(a: &SparseMatrix, lp: &LinearProgram) -> Result<()> {
    let rep = crate::lp::validate_rank(lp);
    if !rep.full_rank {
        return Err(Error::Rank(format!(
            "A ({}x{}) has numerical rank {}",
            a.nrows(),
            a.ncols(),
            rep.rank
        )));
    }
    Ok(())
}

fn default_max_outer(bound: usize) -> usize {
    bound.saturating_mul(10).max(10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseMatrix;

    #[test]
    fn delta_constants() {
        assert_eq!(delta_feasible(0.0), 0.15);
        assert!((delta_feasible(0.5) - 0.009375).abs() < 1e-16);
        let d = delta_infeasible(0.5, 2, 2.0_f64.sqrt());
        assert!((d - 0.0625 / (1600.0 * (2.0 + 2.0_f64.sqrt()).powi(2))).abs() < 1e-18);
    }

    #[test]
    fn parameter_ranges() {
        let p = SolveParams {
            kappa: 1.0,
            ..Default::default()
        };
        assert!(p.resolve(Mode::Feasible, 4).is_err());
        let p = SolveParams {
            nu: Some(1.0),
            ..Default::default()
        };
        assert!(p.resolve(Mode::Feasible, 4).is_err());
        let p = SolveParams {
            nu: Some(8.0),
            ..Default::default()
        };
        assert!(p.resolve(Mode::Infeasible, 4).is_ok());
        assert!(p.resolve(Mode::Feasible, 4).is_ok());
        let p = SolveParams {
            nu: Some(8.5),
            ..Default::default()
        };
        assert!(p.resolve(Mode::Infeasible, 4).is_err());
    }

    #[test]
    fn nonlinear_residual_blocks() {
        let a = SparseMatrix::from_dense(&[vec![1.0, 1.0]]).unwrap();
        let lp = LinearProgram::new("e1", a, vec![2.0], vec![1.0, 1.0]).unwrap();
        let it = Iterate::new(vec![1.0, 1.0], vec![0.0], vec![1.0, 1.0]);
        let (p, d, c) = nonlinear_residual(&lp, &it, 1.0).unwrap();
        assert_eq!(p, vec![0.0]);
        assert_eq!(d, vec![0.0, 0.0]);
        assert_eq!(c, vec![0.0, 0.0]);
        let rho = 3.0;
        let cold = Iterate::new(vec![rho; 2], vec![0.0], vec![rho; 2]);
        let (_, _, c) = nonlinear_residual(&lp, &cold, 2.0).unwrap();
        assert_eq!(c, vec![rho * rho - 2.0; 2]);
    }

    #[test]
    fn bound_formula() {
        assert_eq!(iteration_bound(1.0, 1.0, 1.0, 0.5), 2);
        assert_eq!(iteration_bound(-5.0, 1.0, 1.0, 0.5), 0);
    }
}
