//! Property suites that compare the inexact machinery against the dense
//! exact-direction oracle and check the analytic inequalities the method
//! relies on.
//!
//! Trajectory suites run the solvers on seeded generated instances and
//! inspect every outer iteration through an observer; sampling suites draw
//! random vectors directly. Seeds are processed in parallel and merged in
//! seed order, so reports are deterministic.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ipm::{run_feasible_observed, run_infeasible_observed, SolveParams, StepContext};
use crate::linalg::{dense_spd_solve, dot, norm2, select_basis, SparseMatrix, DEFAULT_PIVOT_TOL};
use crate::lp::{
    generate_bounded_optimal_instance, generate_feasible_instance, GeneratedInstance, LinearProgram,
};
use crate::newton::{build_scaled_system, exact_directions, relative_error_report, ScaledSystem};
use crate::potential::{quadratic_coeffs, wbound_gap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Accepted directions stay within `κ/(1−κ)` of the exact ones.
    RelativeError,
    /// `‖W⁻¹e − (n+ν)/(wᵀw)·w‖ ≥ √3/(2·w_min)` on random `w`.
    Wbound,
    /// The first-order coefficient of the potential agrees across its
    /// closed form, its projected form and the direct formula.
    G1Identity,
    /// Feasible runs decrease the potential by `δ` per iteration and stop
    /// within the iteration bound.
    IterationBound,
    /// `‖r‖ ≥ μ·√3/(2·w_min)` at every solver iterate.
    RLowerBound,
    /// `duᵀdv = 0` for feasible-mode inexact directions.
    Orthogonality,
    /// `‖du*‖² + ‖dv*‖² = ‖r‖²` for exact feasible-mode directions.
    Pythagoras,
    /// The oracle projector is idempotent and nonexpansive.
    Projection,
    /// `ξ` vanishes off the basic columns.
    XiSupport,
    /// The basis lift solves `A t = s`.
    Lift,
    /// Primal and dual rows of inexact directions hold exactly.
    Structure,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::RelativeError,
        Suite::Wbound,
        Suite::G1Identity,
        Suite::IterationBound,
        Suite::RLowerBound,
        Suite::Orthogonality,
        Suite::Pythagoras,
        Suite::Projection,
        Suite::XiSupport,
        Suite::Lift,
        Suite::Structure,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::RelativeError => "relative-error",
            Suite::Wbound => "wbound",
            Suite::G1Identity => "g1-identity",
            Suite::IterationBound => "iteration-bound",
            Suite::RLowerBound => "r-lower-bound",
            Suite::Orthogonality => "orthogonality",
            Suite::Pythagoras => "pythagoras",
            Suite::Projection => "projection",
            Suite::XiSupport => "xi-support",
            Suite::Lift => "lift",
            Suite::Structure => "structure",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    pub suites: Vec<Suite>,
    /// Number of seeded instances for trajectory suites.
    pub seeds: u64,
    /// Random draws for the sampling suites.
    pub samples: usize,
    /// Fault injection: moves part of `ξ` onto a nonbasic column.
    pub break_lift: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            seeds: 100,
            samples: 1000,
            break_lift: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub checked: usize,
    pub failed: usize,
    /// Cases skipped because the property is vacuous there.
    pub excluded: usize,
    /// Largest observed value of the suite's normalized violation measure;
    /// a case fails when it exceeds its tolerance.
    pub worst: f64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, ok: bool, measure: f64, what: impl FnOnce() -> String) {
        self.checked += 1;
        if measure.is_finite() {
            self.worst = self.worst.max(measure);
        } else {
            self.worst = f64::INFINITY;
        }
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn merge(mut self, other: SuiteReport) -> SuiteReport {
        self.checked += other.checked;
        self.failed += other.failed;
        self.excluded += other.excluded;
        self.worst = self.worst.max(other.worst);
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub suites: Vec<(Suite, SuiteReport)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|(_, r)| r.passed())
    }

    pub fn get(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites
            .iter()
            .find(|(s, _)| *s == suite)
            .map(|(_, r)| r)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (suite, r) in &self.suites {
            write!(
                f,
                "{:<16} {} checked={} failed={} excluded={} worst={:.3e}",
                suite.name(),
                if r.passed() { "PASS" } else { "FAIL" },
                r.checked,
                r.failed,
                r.excluded,
                r.worst
            )?;
            if let Some(msg) = &r.first_failure {
                write!(f, "  first failure: {msg}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn run_validation(opts: &ValidateOptions) -> Result<ValidationReport> {
    let mut suites = Vec::new();
    for &suite in &opts.suites {
        let report = match suite {
            Suite::Wbound => wbound_suite(opts.samples),
            Suite::Projection => projection_suite(opts.samples)?,
            Suite::Lift => lift_suite(opts.samples)?,
            _ => per_seed(opts.seeds, |seed| {
                trajectory_suite(suite, seed, opts.break_lift)
            })?,
        };
        suites.push((suite, report));
    }
    Ok(ValidationReport { suites })
}

fn per_seed<F>(seeds: u64, f: F) -> Result<SuiteReport>
where
    F: Fn(u64) -> Result<SuiteReport> + Sync + Send,
{
    let parts: Vec<Result<SuiteReport>> = (0..seeds).into_par_iter().map(&f).collect();
    parts
        .into_iter()
        .try_fold(SuiteReport::default(), |acc, r| Ok(acc.merge(r?)))
}

/// Instance sizes used by the trajectory suites: `m ∈ [2, 10]`, `n ≤ 30`.
pub fn trajectory_dims(seed: u64) -> (usize, usize) {
    let m = 2 + (seed % 9) as usize;
    let n = (m + 2 + ((seed * 7) % (2 * m as u64 + 1)) as usize).min(30);
    (m, n)
}

pub fn trajectory_feasible_instance(seed: u64) -> Result<GeneratedInstance> {
    let (m, n) = trajectory_dims(seed);
    let density = 0.5 + 0.5 * ((seed % 5) as f64 / 4.0);
    generate_feasible_instance(seed, m, n, density)
}

pub fn trajectory_bounded_instance(seed: u64) -> Result<GeneratedInstance> {
    let (m, n) = trajectory_dims(seed);
    generate_bounded_optimal_instance(seed, m, n, 10.0)
}

const KAPPAS: [f64; 3] = [0.3, 0.6, 0.9];

/// Runs feasible solves for each κ and, unless `feasible_only`, infeasible
/// solves from the cold start, calling `visit` on every outer iteration.
fn for_each_iteration(
    seed: u64,
    break_lift: bool,
    feasible_only: bool,
    visit: &mut dyn FnMut(&LinearProgram, &StepContext<'_, '_>),
) -> Result<()> {
    let feas = trajectory_feasible_instance(seed)?;
    let start = feas
        .strict_start
        .clone()
        .expect("feasible generator provides a start");
    for kappa in KAPPAS {
        let mut params = SolveParams {
            kappa,
            ..Default::default()
        };
        params.inner.fault_break_lift = break_lift;
        run_feasible_observed(&feas.lp, &start, &params, &mut |ctx| visit(&feas.lp, ctx))?;
    }
    if feasible_only {
        return Ok(());
    }
    let bounded = trajectory_bounded_instance(seed)?;
    for kappa in KAPPAS {
        let mut params = SolveParams {
            kappa,
            rho: 10.0,
            ..Default::default()
        };
        params.inner.fault_break_lift = break_lift;
        run_infeasible_observed(&bounded.lp, &params, &mut |ctx| visit(&bounded.lp, ctx))?;
    }
    Ok(())
}

fn trajectory_suite(suite: Suite, seed: u64, break_lift: bool) -> Result<SuiteReport> {
    let mut rep = SuiteReport::default();
    match suite {
        Suite::RelativeError => {
            let mut err = None;
            for_each_iteration(seed, break_lift, false, &mut |_, ctx| {
                let out = ctx.outcome;
                if !out.report.relative_size.holds {
                    return;
                }
                let exact = match exact_directions(ctx.system) {
                    Ok(e) => e,
                    Err(e) => {
                        err.get_or_insert(e);
                        return;
                    }
                };
                let r = relative_error_report(&out.direction, &exact, ctx.params.kappa);
                if r.degenerate {
                    rep.excluded += 1;
                    return;
                }
                let measure = r.rel_err_du.max(r.rel_err_dv) - r.bound;
                rep.record(r.within_bound(1e-8), measure, || {
                    format!(
                        "seed {seed} k={} kappa={}: du {:.3e} dv {:.3e} bound {:.3e}",
                        ctx.iterate.k, ctx.params.kappa, r.rel_err_du, r.rel_err_dv, r.bound
                    )
                });
            })?;
            if let Some(e) = err {
                return Err(e);
            }
        }
        Suite::G1Identity => {
            for_each_iteration(seed, break_lift, false, &mut |_, ctx| {
                let (sys, dir, it) = (ctx.system, &ctx.outcome.direction, ctx.iterate);
                let nn = sys.n() as f64 + sys.nu;
                let ww = dot(&sys.w, &sys.w);
                let r_plus_xi: Vec<f64> = sys.r.iter().zip(&dir.xi).map(|(a, b)| a + b).collect();
                let closed = -nn / ww * dot(&sys.r, &r_plus_xi);
                let coeff: Vec<f64> = sys.w.iter().map(|&w| nn / ww * w - 1.0 / w).collect();
                let sum: Vec<f64> = dir.du.iter().zip(&dir.dv).map(|(a, b)| a + b).collect();
                let projected = dot(&coeff, &sum);
                let direct = quadratic_coeffs(&it.x, &it.z, &dir.dx, &dir.dz, sys.nu, 0.5, 0.0)
                    .map(|q| q.g1)
                    .unwrap_or(f64::NAN);
                let scale = nn / ww * dot(&sys.r, &sys.r);
                let measure = (closed - projected).abs().max((closed - direct).abs()) / scale;
                rep.record(measure <= 1e-10, measure, || {
                    format!(
                        "seed {seed} k={}: {closed:e} / {projected:e} / {direct:e}",
                        it.k
                    )
                });
            })?;
        }
        Suite::IterationBound => {
            let feas = trajectory_feasible_instance(seed)?;
            let start = feas
                .strict_start
                .clone()
                .expect("feasible generator provides a start");
            for kappa in KAPPAS {
                let res = crate::ipm::run_feasible(
                    &feas.lp,
                    &start,
                    &SolveParams {
                        kappa,
                        ..Default::default()
                    },
                )?;
                let delta = res.params.delta;
                let worst_short = res
                    .log
                    .iter()
                    .map(|r| delta - r.delta_achieved)
                    .fold(f64::NEG_INFINITY, f64::max);
                let ok = res.status == crate::ipm::SolveStatus::Optimal
                    && res.log.len() <= res.iteration_bound
                    && worst_short <= 1e-10;
                rep.record(ok, res.log.len() as f64 / res.iteration_bound.max(1) as f64, || {
                    format!(
                        "seed {seed} kappa={kappa}: status {} iterations {} bound {} shortfall {worst_short:e}",
                        res.status,
                        res.log.len(),
                        res.iteration_bound
                    )
                });
            }
        }
        Suite::RLowerBound => {
            for_each_iteration(seed, break_lift, false, &mut |_, ctx| {
                let sys = ctx.system;
                let lower = sys.mu * 3.0_f64.sqrt() / (2.0 * sys.w_min);
                let nr = norm2(&sys.r);
                rep.record(nr >= lower - 1e-12, (lower - nr) / lower, || {
                    format!("seed {seed} k={}: |r| {nr:e} < {lower:e}", ctx.iterate.k)
                });
            })?;
        }
        Suite::Orthogonality => {
            for_each_iteration(seed, break_lift, true, &mut |_, ctx| {
                let dir = &ctx.outcome.direction;
                let (nu_, nv) = (norm2(&dir.du), norm2(&dir.dv));
                let nr = norm2(&ctx.system.r);
                if nu_.min(nv) <= ORTHO_DEGENERATE * nr {
                    rep.excluded += 1;
                    return;
                }
                let measure = dot(&dir.du, &dir.dv).abs() / (nu_ * nv);
                rep.record(measure <= 1e-10, measure, || {
                    format!("seed {seed} k={}: cos {measure:e}", ctx.iterate.k)
                });
            })?;
        }
        Suite::Pythagoras => {
            let mut err = None;
            for_each_iteration(seed, break_lift, true, &mut |_, ctx| {
                let sys = ctx.system;
                match exact_directions(sys) {
                    Ok(ex) => {
                        let lhs = dot(&ex.du, &ex.du) + dot(&ex.dv, &ex.dv);
                        let rhs = dot(&sys.r, &sys.r);
                        let measure = (lhs - rhs).abs() / rhs;
                        rep.record(measure <= 1e-10, measure, || {
                            format!("seed {seed} k={}: {lhs:e} vs {rhs:e}", ctx.iterate.k)
                        });
                    }
                    Err(e) => {
                        err.get_or_insert(e);
                    }
                }
            })?;
            if let Some(e) = err {
                return Err(e);
            }
        }
        Suite::XiSupport => {
            for_each_iteration(seed, break_lift, false, &mut |_, ctx| {
                let dir = &ctx.outcome.direction;
                let off = dir.off_support_residual();
                rep.record(off == 0.0, off, || {
                    format!("seed {seed} k={}: |xi| off support {off:e}", ctx.iterate.k)
                });
            })?;
        }
        Suite::Structure => {
            for_each_iteration(seed, break_lift, false, &mut |_, ctx| {
                let sys = ctx.system;
                let br = ctx.outcome.direction.block_residuals(sys);
                let mp = br.primal / (1.0 + norm2(&sys.p));
                let md = br.dual / (1.0 + norm2(&sys.q));
                let mc = br.complementarity / (1.0 + norm2(&sys.r));
                let ok = mp <= 1e-10 && md <= 1e-10 && mc <= 1e-12;
                rep.record(ok, mp.max(md).max(mc), || {
                    format!(
                        "seed {seed} k={}: primal {mp:e} dual {md:e} third row {mc:e}",
                        ctx.iterate.k
                    )
                });
            })?;
        }
        Suite::Wbound | Suite::Projection | Suite::Lift => unreachable!("sampling suite"),
    }
    Ok(rep)
}

/// Directions with `min(‖du‖, ‖dv‖)` below this multiple of `‖r‖` carry
/// no usable angle information: `duᵀdv` is then pure rounding.
pub const ORTHO_DEGENERATE: f64 = 1e-6;

fn wbound_suite(samples: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_3);
    let mut rep = SuiteReport::default();
    for _ in 0..samples {
        let n = rng.gen_range(2..=50);
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(f64::EPSILON..=10.0)).collect();
        let nu = (n as f64).sqrt();
        let (lhs, rhs) = wbound_gap(&w, nu).expect("valid sample");
        rep.record(lhs >= rhs, (rhs - lhs) / rhs, || {
            format!("n={n}: {lhs:e} < {rhs:e}")
        });
    }
    rep
}

fn random_system_data(
    rng: &mut ChaCha8Rng,
) -> Result<(LinearProgram, Vec<f64>, Vec<f64>, Vec<f64>)> {
    let m = rng.gen_range(1..=8);
    let n = m + rng.gen_range(1..=12);
    let seed = rng.gen();
    let inst = generate_feasible_instance(seed, m, n, 1.0)?;
    let x: Vec<f64> = (0..n)
        .map(|_| 10f64.powf(rng.gen_range(-2.0..2.0)))
        .collect();
    let z: Vec<f64> = (0..n)
        .map(|_| 10f64.powf(rng.gen_range(-2.0..2.0)))
        .collect();
    let y = vec![0.0; m];
    Ok((inst.lp, x, y, z))
}

fn project(sys: &ScaledSystem<'_>, v: &[f64]) -> Result<Vec<f64>> {
    let m = sys.dense_normal_matrix()?;
    Ok(sys.dat(&dense_spd_solve(&m, &sys.ad(v))?))
}

fn projection_suite(samples: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e0_1);
    let mut rep = SuiteReport::default();
    for _ in 0..samples {
        let (lp, x, y, z) = random_system_data(&mut rng)?;
        let sys = build_scaled_system(&lp, &x, &y, &z, (lp.num_cols() as f64).sqrt())?;
        let v: Vec<f64> = (0..lp.num_cols())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let nv = norm2(&v);
        let pv = project(&sys, &v)?;
        let ppv = project(&sys, &pv)?;
        let idem = norm2(&crate::linalg::sub(&ppv, &pv)) / nv;
        let np = norm2(&pv) / nv;
        let nq = norm2(&crate::linalg::sub(&v, &pv)) / nv;
        let ok = idem <= 1e-8 && np <= 1.0 + 1e-8 && nq <= 1.0 + 1e-8;
        rep.record(ok, idem.max(np - 1.0).max(nq - 1.0), || {
            format!(
                "n={}: idempotence {idem:e}, |Pv|/|v| {np}, |v-Pv|/|v| {nq}",
                lp.num_cols()
            )
        });
    }
    Ok(rep)
}

fn lift_suite(samples: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11f7);
    let mut rep = SuiteReport::default();
    for _ in 0..samples {
        let m = rng.gen_range(1..=10);
        let n = m + rng.gen_range(1..=15);
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let a = SparseMatrix::from_dense(&rows)?;
        let d: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.gen_range(-4.0..4.0)))
            .collect();
        let s: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let fac = match select_basis(&a, &d, DEFAULT_PIVOT_TOL) {
            Ok(f) => f,
            Err(_) => {
                rep.excluded += 1;
                continue;
            }
        };
        let t = fac.lift(&s, n);
        let at = a.matvec(&t)?;
        let measure = norm2(&crate::linalg::sub(&at, &s)) / norm2(&s);
        rep.record(measure <= 1e-10, measure, || {
            format!("m={m} n={n}: residual {measure:e}")
        });
    }
    Ok(rep)
}
