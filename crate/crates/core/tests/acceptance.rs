//! Acceptance criteria for the solver. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.
//!
//! Every reference quantity (potential values, exact directions, step-size
//! formulas, residual norms, θ products, iteration bounds) is recomputed here
//! from first principles; exact directions come from a nalgebra QR of `DAᵀ`.

use std::process::ExitCode;

use nalgebra::{DMatrix, DVector};

use potred::experiment::{monteiro_thresholds, scaling_study};
use potred::ipm::{
    run_feasible_observed, run_infeasible_observed, SolveParams, SolveResult, SolveStatus,
    StepContext,
};
use potred::linalg::SparseMatrix;
use potred::lp::{
    generate_bounded_optimal_instance, generate_feasible_instance, GeneratedInstance, LinearProgram,
};
use potred::newton::{
    alt_condition_componentwise, alt_condition_monteiro, build_scaled_system, check_conditions,
    direction_with_residual, Mode,
};

// Pinned tolerances.
const DECREASE_SLACK: f64 = 1e-10;
const EPSILON: f64 = 1e-8;
const REL_ERR_SLACK: f64 = 1e-8;
const DEGENERATE_REL: f64 = 1e-8;
const R_BOUND_SLACK: f64 = 1e-12;
const THETA_TOL: f64 = 1e-8;
const BLOCK_TOL: f64 = 1e-10;
/// Allowed disagreement between the solver's `p`, `q` and the recomputed
/// ones, in units of `eps·(sum of absolute terms)`.
const RHS_ULPS: f64 = 64.0;
const ORTHO_TOL: f64 = 1e-10;
const PYTHAGORAS_TOL: f64 = 1e-10;
const KAPPAS: [f64; 4] = [0.0, 0.3, 0.6, 0.9];

// ---------------------------------------------------------------- oracles

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn potential(x: &[f64], z: &[f64], nu: f64) -> f64 {
    let n = x.len() as f64;
    let gap = dot(x, z);
    (n + nu) * gap.ln() - x.iter().zip(z).map(|(a, b)| (a * b).ln()).sum::<f64>() - n * n.ln()
}

fn dense(a: &SparseMatrix) -> DMatrix<f64> {
    let rows = a.to_dense();
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| rows[i][j])
}

/// Scaled quantities recomputed from the iterate.
struct Scaled {
    d: Vec<f64>,
    w: Vec<f64>,
    mu: f64,
    p: Vec<f64>,
    q: Vec<f64>,
    r: Vec<f64>,
}

fn scaled(lp: &LinearProgram, x: &[f64], y: &[f64], z: &[f64], nu: f64) -> Scaled {
    let n = x.len();
    let a = dense(lp.a());
    let d: Vec<f64> = (0..n).map(|i| (x[i] / z[i]).sqrt()).collect();
    let w: Vec<f64> = (0..n).map(|i| (x[i] * z[i]).sqrt()).collect();
    let mu = dot(x, z) / (n as f64 + nu);
    let ax = &a * DVector::from_column_slice(x);
    let p: Vec<f64> = (0..lp.num_rows()).map(|i| lp.b()[i] - ax[i]).collect();
    let aty = a.transpose() * DVector::from_column_slice(y);
    let q: Vec<f64> = (0..n).map(|i| d[i] * (lp.c()[i] - aty[i] - z[i])).collect();
    let r: Vec<f64> = (0..n).map(|i| -w[i] + mu / w[i]).collect();
    Scaled { d, w, mu, p, q, r }
}

/// Exact scaled directions `(du*, dv*)` through a QR factorization of `DAᵀ`.
fn exact(lp: &LinearProgram, s: &Scaled) -> (Vec<f64>, Vec<f64>) {
    let a = dense(lp.a());
    let n = lp.num_cols();
    let dat = DMatrix::from_fn(n, lp.num_rows(), |i, j| s.d[i] * a[(j, i)]);
    let qr = dat.qr();
    let (qm, rm) = (qr.q(), qr.r());
    let project = |v: &[f64]| -> Vec<f64> {
        let v = DVector::from_column_slice(v);
        (&qm * (qm.transpose() * v)).iter().copied().collect()
    };
    let u = rm
        .transpose()
        .solve_lower_triangular(&DVector::from_column_slice(&s.p))
        .expect("nonsingular R");
    let t: Vec<f64> = (&qm * u).iter().copied().collect();
    let pq = project(&s.q);
    let pr = project(&s.r);
    let du = (0..n)
        .map(|i| t[i] - (s.q[i] - pq[i]) + (s.r[i] - pr[i]))
        .collect();
    let dv = (0..n).map(|i| -t[i] + (s.q[i] - pq[i]) + pr[i]).collect();
    (du, dv)
}

// ---------------------------------------------------------------- reporting

struct Criterion {
    id: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

impl Criterion {
    fn print(&self) {
        println!(
            "criterion {:>2} {} {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        );
    }
}

fn fmin(a: f64, b: f64) -> f64 {
    a.min(b)
}

// ---------------------------------------------------------------- feasible sweep

/// Sizes for the 50 feasible instances: `m ≤ 20`, `n ≤ 60`.
fn feasible_instance(seed: u64) -> GeneratedInstance {
    let m = 2 + (seed % 19) as usize;
    let n = (2 * m + 3 + (seed % 17) as usize).min(60);
    generate_feasible_instance(1000 + seed, m, n, 0.6).unwrap()
}

#[derive(Default)]
struct FeasibleStats {
    runs: usize,
    iterations: usize,
    not_optimal: Vec<String>,
    // criterion 1
    min_decrease_slack: f64,
    decrease_failures: usize,
    // criterion 2
    bound_failures: Vec<String>,
    max_bound_ratio: f64,
    // criterion 3
    relerr_checked: usize,
    relerr_degenerate: usize,
    relerr_failures: usize,
    relerr_max_ratio: f64,
    // criterion 4 (solver part)
    r_checked: usize,
    r_failures: usize,
    // criterion 5 (feasible part)
    l4_checked: usize,
    l4_failures: usize,
    l4_min_slack: f64,
    // criterion 8
    structure: StructureStats,
    // criterion 9
    ortho_checked: usize,
    ortho_failures: usize,
    ortho_worst: f64,
    pyth_checked: usize,
    pyth_failures: usize,
    pyth_worst: f64,
}

#[derive(Default)]
struct StructureStats {
    checked: usize,
    failures: usize,
    worst_primal: f64,
    worst_dual: f64,
    off_support: usize,
    worst_rhs: f64,
}

impl StructureStats {
    /// Block residuals are measured against the right-hand side the direction
    /// was computed for. In infeasible mode that right-hand side must agree
    /// with `p`, `q` recomputed here up to the rounding of forming them.
    fn visit(&mut self, lp: &LinearProgram, s: &Scaled, ctx: &StepContext<'_, '_>, mode: Mode) {
        let dir = &ctx.outcome.direction;
        let sys = ctx.system;
        let a = dense(lp.a());
        let n = lp.num_cols();
        let d = DMatrix::from_diagonal(&DVector::from_column_slice(&s.d));
        let ad = &a * &d;
        let primal = &ad * DVector::from_column_slice(&dir.du) - DVector::from_column_slice(&sys.p);
        let dual = ad.transpose() * DVector::from_column_slice(&dir.dy)
            + DVector::from_column_slice(&dir.dv)
            - DVector::from_column_slice(&sys.q);
        let rp = primal.norm() / (1.0 + norm(&sys.p));
        let rd = dual.norm() / (1.0 + norm(&sys.q));
        let basic: Vec<bool> = (0..n).map(|j| dir.basic_support.contains(&j)).collect();
        let off = (0..n).any(|j| !basic[j] && dir.xi[j] != 0.0);
        let support_ok = dir.basic_support.len() <= lp.num_rows();

        let mut rhs_ok = true;
        if mode == Mode::Infeasible {
            let it = ctx.iterate;
            for i in 0..lp.num_rows() {
                let scale: f64 =
                    lp.b()[i].abs() + (0..n).map(|j| (a[(i, j)] * it.x[j]).abs()).sum::<f64>();
                let dev = (sys.p[i] - s.p[i]).abs();
                self.worst_rhs = self.worst_rhs.max(dev / (f64::EPSILON * scale));
                rhs_ok &= dev <= RHS_ULPS * f64::EPSILON * scale;
            }
            for j in 0..n {
                let scale: f64 = s.d[j]
                    * (lp.c()[j].abs()
                        + it.z[j]
                        + (0..lp.num_rows())
                            .map(|i| (a[(i, j)] * it.y[i]).abs())
                            .sum::<f64>());
                let dev = (sys.q[j] - s.q[j]).abs();
                self.worst_rhs = self.worst_rhs.max(dev / (f64::EPSILON * scale));
                rhs_ok &= dev <= RHS_ULPS * f64::EPSILON * scale;
            }
        }

        self.checked += 1;
        self.worst_primal = self.worst_primal.max(rp);
        self.worst_dual = self.worst_dual.max(rd);
        if off {
            self.off_support += 1;
        }
        if rp > BLOCK_TOL || rd > BLOCK_TOL || off || !support_ok || !rhs_ok {
            self.failures += 1;
        }
    }
}

fn feasible_sweep() -> FeasibleStats {
    let mut st = FeasibleStats {
        min_decrease_slack: f64::INFINITY,
        l4_min_slack: f64::INFINITY,
        ..Default::default()
    };
    for seed in 0..50 {
        let inst = feasible_instance(seed);
        let lp = &inst.lp;
        let start = inst.strict_start.clone().unwrap();
        for kappa in KAPPAS {
            let params = SolveParams {
                kappa,
                epsilon: EPSILON,
                ..Default::default()
            };
            let nu = (lp.num_cols() as f64).sqrt();
            let delta = 0.15 * (1.0 - kappa).powi(4);
            let mut observe = |ctx: &StepContext<'_, '_>| {
                let it = ctx.iterate;
                // a feasible iterate: the primal and dual blocks vanish
                let mut s = scaled(lp, &it.x, &it.y, &it.z, nu);
                s.p.iter_mut().chain(s.q.iter_mut()).for_each(|v| *v = 0.0);
                let dir = &ctx.outcome.direction;
                let n = lp.num_cols();
                let phi_now = potential(&it.x, &it.z, nu);

                // criterion 4: ‖r‖ ≥ μ√3/(2 w_min)
                let wmin = s.w.iter().copied().fold(f64::INFINITY, fmin);
                st.r_checked += 1;
                if norm(&s.r) < s.mu * 3f64.sqrt() / (2.0 * wmin) - R_BOUND_SLACK {
                    st.r_failures += 1;
                }

                // criterion 5: α = w_min(1−κ)³/(2‖r‖) decreases φ by δ
                let alpha = wmin * (1.0 - kappa).powi(3) / (2.0 * norm(&s.r));
                let xn: Vec<f64> = (0..n).map(|i| it.x[i] + alpha * dir.dx[i]).collect();
                let zn: Vec<f64> = (0..n).map(|i| it.z[i] + alpha * dir.dz[i]).collect();
                st.l4_checked += 1;
                if xn.iter().chain(&zn).all(|&v| v > 0.0) {
                    let slack = phi_now - potential(&xn, &zn, nu) - delta;
                    st.l4_min_slack = st.l4_min_slack.min(slack);
                    if slack < -DECREASE_SLACK {
                        st.l4_failures += 1;
                    }
                } else {
                    st.l4_failures += 1;
                }

                // criterion 3: relative error against the exact direction
                let (du, dv) = exact(lp, &s);
                if kappa > 0.0 && ctx.outcome.report.relative_size.holds {
                    let (ndu, ndv) = (norm(&du), norm(&dv));
                    if ndu <= DEGENERATE_REL * (ndu + ndv) || ndv <= DEGENERATE_REL * (ndu + ndv) {
                        st.relerr_degenerate += 1;
                    } else {
                        let eu: Vec<f64> = (0..n).map(|i| dir.du[i] - du[i]).collect();
                        let ev: Vec<f64> = (0..n).map(|i| dir.dv[i] - dv[i]).collect();
                        let bound = kappa / (1.0 - kappa);
                        let worst = (norm(&eu) / ndu).max(norm(&ev) / ndv);
                        st.relerr_checked += 1;
                        st.relerr_max_ratio = st.relerr_max_ratio.max(worst / bound);
                        if worst > bound + REL_ERR_SLACK {
                            st.relerr_failures += 1;
                        }
                    }
                }

                // criterion 9: orthogonality of the inexact pair, Pythagoras for the exact one
                let (nu_, nv_) = (norm(&dir.du), norm(&dir.dv));
                let cosine = dot(&dir.du, &dir.dv).abs();
                st.ortho_checked += 1;
                if nu_ * nv_ > 0.0 {
                    st.ortho_worst = st.ortho_worst.max(cosine / (nu_ * nv_));
                }
                if cosine > ORTHO_TOL * nu_ * nv_ {
                    st.ortho_failures += 1;
                }
                let rr = dot(&s.r, &s.r);
                let pyth = (dot(&du, &du) + dot(&dv, &dv) - rr).abs() / rr;
                st.pyth_checked += 1;
                st.pyth_worst = st.pyth_worst.max(pyth);
                if pyth > PYTHAGORAS_TOL {
                    st.pyth_failures += 1;
                }

                st.structure.visit(lp, &s, ctx, Mode::Feasible);
            };
            let res = run_feasible_observed(lp, &start, &params, &mut observe).unwrap();
            st.runs += 1;
            st.iterations += res.log.len();
            if res.status != SolveStatus::Optimal {
                st.not_optimal
                    .push(format!("seed {seed} kappa {kappa}: {}", res.status));
            }

            // criterion 1, from consecutive potential values of the iterates
            let mut phis: Vec<f64> = res.log.iter().map(|r| r.phi).collect();
            phis.push(potential(&res.iterate.x, &res.iterate.z, nu));
            for pair in phis.windows(2) {
                let slack = pair[0] - pair[1] - delta;
                st.min_decrease_slack = st.min_decrease_slack.min(slack);
                if slack < -DECREASE_SLACK {
                    st.decrease_failures += 1;
                }
            }

            // criterion 2
            let phi0 = potential(&start.x, &start.z, nu);
            let bound = ((phi0 - nu * EPSILON.ln()) / delta).ceil() as usize;
            st.max_bound_ratio = st.max_bound_ratio.max(res.log.len() as f64 / bound as f64);
            if res.log.len() > bound || res.status != SolveStatus::Optimal {
                st.bound_failures.push(format!(
                    "seed {seed} kappa {kappa}: {} > {bound}",
                    res.log.len()
                ));
            }
        }
    }
    st
}

// ---------------------------------------------------------------- infeasible sweep

#[derive(Default)]
struct InfeasibleStats {
    runs: usize,
    iterations: usize,
    l6_checked: usize,
    l6_failures: usize,
    l6_min_slack: f64,
    r_checked: usize,
    r_failures: usize,
    theta_checked: usize,
    theta_worst: f64,
    theta_failures: usize,
    final_checked: usize,
    final_failures: Vec<String>,
    not_optimal: Vec<String>,
    structure: StructureStats,
}

fn theta_and_final(
    lp: &LinearProgram,
    res: &SolveResult,
    residuals: &[(f64, f64)],
    st: &mut InfeasibleStats,
) {
    let (rp0, rd0) = residuals[0];
    let mut theta = 1.0;
    for (k, &(rp, rd)) in residuals.iter().enumerate() {
        if k > 0 {
            theta *= 1.0 - res.log[k - 1].alpha;
        }
        for (now, base) in [(rp, rp0), (rd, rd0)] {
            if base > 0.0 {
                let dev = (now / base - theta).abs();
                st.theta_checked += 1;
                st.theta_worst = st.theta_worst.max(dev);
                if dev > THETA_TOL {
                    st.theta_failures += 1;
                }
            }
        }
    }
    if res.status == SolveStatus::Optimal {
        let it = &res.iterate;
        let gap0 = lp.num_cols() as f64 * res.params.rho * res.params.rho;
        let (rp, rd) = *residuals.last().unwrap();
        let bound_p = res.params.epsilon * rp0 / gap0;
        let bound_d = res.params.epsilon * rd0 / gap0;
        st.final_checked += 1;
        if rp > bound_p || rd > bound_d {
            st.final_failures.push(format!(
                "{}: primal {rp:.3e} vs {bound_p:.3e}, dual {rd:.3e} vs {bound_d:.3e} (gap {:.3e})",
                lp.name,
                dot(&it.x, &it.z)
            ));
        }
    }
}

fn residual_norms(lp: &LinearProgram, x: &[f64], y: &[f64], z: &[f64]) -> (f64, f64) {
    (
        norm(&lp.primal_residual(x).unwrap()),
        norm(&lp.dual_residual(y, z).unwrap()),
    )
}

/// Runs the infeasible method and checks the guaranteed step, the ‖r‖ bound,
/// θ-consistency and the final residual bound along the way.
fn infeasible_run(
    lp: &LinearProgram,
    params: &SolveParams,
    st: &mut InfeasibleStats,
    check_l6: bool,
) -> SolveResult {
    let n = lp.num_cols();
    let nu = params.nu.unwrap_or((n as f64).sqrt());
    let kappa = params.kappa;
    let delta = (1.0 - kappa).powi(4) / (1600.0 * (n as f64 + nu).powi(2));
    let mut residuals = Vec::new();
    let mut structure = std::mem::take(&mut st.structure);
    let mut observe = |ctx: &StepContext<'_, '_>| {
        let it = ctx.iterate;
        residuals.push(residual_norms(lp, &it.x, &it.y, &it.z));
        let s = scaled(lp, &it.x, &it.y, &it.z, nu);
        let wmin = s.w.iter().copied().fold(f64::INFINITY, fmin);
        st.r_checked += 1;
        if norm(&s.r) < s.mu * 3f64.sqrt() / (2.0 * wmin) - R_BOUND_SLACK {
            st.r_failures += 1;
        }
        if check_l6 {
            let dir = &ctx.outcome.direction;
            let gap = dot(&it.x, &it.z);
            let alpha = (1.0 - kappa).powi(3) * wmin * wmin / (200.0 * (n as f64 + nu) * gap);
            let xn: Vec<f64> = (0..n).map(|i| it.x[i] + alpha * dir.dx[i]).collect();
            let zn: Vec<f64> = (0..n).map(|i| it.z[i] + alpha * dir.dz[i]).collect();
            st.l6_checked += 1;
            if xn.iter().chain(&zn).all(|&v| v > 0.0) {
                let decrease = potential(&it.x, &it.z, nu) - potential(&xn, &zn, nu) - delta;
                let gap_ok = dot(&xn, &zn) >= (1.0 - alpha) * gap * (1.0 - 1e-15);
                st.l6_min_slack = st.l6_min_slack.min(decrease);
                if decrease < -DECREASE_SLACK || !gap_ok {
                    st.l6_failures += 1;
                }
            } else {
                st.l6_failures += 1;
            }
        }
        structure.visit(lp, &s, ctx, Mode::Infeasible);
    };
    let res = run_infeasible_observed(lp, params, &mut observe).unwrap();
    st.structure = structure;
    residuals.push(residual_norms(
        lp,
        &res.iterate.x,
        &res.iterate.y,
        &res.iterate.z,
    ));
    st.runs += 1;
    st.iterations += res.log.len();
    theta_and_final(lp, &res, &residuals, st);
    res
}

fn bounded_instance(seed: u64) -> (GeneratedInstance, f64) {
    let m = 1 + (seed % 10) as usize;
    let n = (m + 1 + ((seed * 7) % 20) as usize).min(30);
    let rho_target = 2.0 + (seed % 9) as f64;
    (
        generate_bounded_optimal_instance(2000 + seed, m, n, rho_target).unwrap(),
        rho_target,
    )
}

fn primal_infeasible() -> LinearProgram {
    let a = SparseMatrix::from_dense(&[vec![1.0, 1.0]]).unwrap();
    LinearProgram::new("primal-infeasible", a, vec![-1.0], vec![1.0, 1.0]).unwrap()
}

// ---------------------------------------------------------------- criteria

fn main() -> ExitCode {
    let mut results = Vec::new();

    let fs = feasible_sweep();
    let not_opt = if fs.not_optimal.is_empty() {
        String::new()
    } else {
        format!("; not optimal: {:?}", fs.not_optimal)
    };
    results.push(Criterion {
        id: 1,
        title: "per-iteration potential decrease >= 0.15(1-kappa)^4",
        passed: fs.decrease_failures == 0 && fs.runs == 200,
        detail: format!(
            "{} runs, {} iterations, {} violations, min slack {:.3e}{not_opt}",
            fs.runs, fs.iterations, fs.decrease_failures, fs.min_decrease_slack
        ),
    });
    results.push(Criterion {
        id: 2,
        title: "iteration bound ceil((phi0 - nu ln eps)/delta)",
        passed: fs.bound_failures.is_empty(),
        detail: format!(
            "{} runs, max iterations/bound {:.4}, violations {:?}",
            fs.runs, fs.max_bound_ratio, fs.bound_failures
        ),
    });

    // infeasible-mode runs: 100 bounded-optimum instances, ρ = rho_target
    let mut is = InfeasibleStats {
        l6_min_slack: f64::INFINITY,
        ..Default::default()
    };
    for seed in 0..100 {
        let (inst, rho_target) = bounded_instance(seed);
        let kappa = KAPPAS[(seed % 4) as usize];
        let params = SolveParams {
            kappa,
            rho: rho_target,
            epsilon: EPSILON,
            ..Default::default()
        };
        let res = infeasible_run(&inst.lp, &params, &mut is, true);
        if res.status != SolveStatus::Optimal {
            is.not_optimal.push(format!("seed {seed}: {}", res.status));
        }
    }
    let l6_runs = is.runs;

    // criterion 3 draws its directions from the feasible sweep, which
    // accepts well over the required thousand at κ > 0
    results.push(Criterion {
        id: 3,
        title: "relative error <= kappa/(1-kappa) against the exact direction",
        passed: fs.relerr_failures == 0 && fs.relerr_checked >= 1000,
        detail: format!(
            "{} directions checked, {} degenerate excluded, {} violations, max error/bound {:.4}",
            fs.relerr_checked, fs.relerr_degenerate, fs.relerr_failures, fs.relerr_max_ratio
        ),
    });

    // criterion 4: random w plus every solver iteration
    let mut w_fail = 0;
    let mut state = 0x2545f4914f6cdd1d_u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..1000 {
        let n = 2 + (next() * 49.0) as usize;
        let w: Vec<f64> = (0..n).map(|_| 1e-3 + 10.0 * next()).collect();
        let nu = (n as f64).sqrt();
        let scale = (n as f64 + nu) / dot(&w, &w);
        let diff: Vec<f64> = w.iter().map(|&x| 1.0 / x - scale * x).collect();
        let wmin = w.iter().copied().fold(f64::INFINITY, fmin);
        if norm(&diff) < 3f64.sqrt() / (2.0 * wmin) {
            w_fail += 1;
        }
    }
    let r_checked = fs.r_checked + is.r_checked;
    let r_fail = fs.r_failures + is.r_failures;
    results.push(Criterion {
        id: 4,
        title: "||W^-1 e - (n+nu)/(w'w) w|| >= sqrt(3)/(2 w_min) and ||r|| >= mu sqrt(3)/(2 w_min)",
        passed: w_fail == 0 && r_fail == 0,
        detail: format!("1000 random w: {w_fail} violations; {r_checked} solver iterations: {r_fail} violations"),
    });

    let l6_not_opt = if is.not_optimal.is_empty() {
        String::new()
    } else {
        format!("; not optimal: {:?}", is.not_optimal)
    };
    results.push(Criterion {
        id: 5,
        title: "guaranteed steps satisfy the decrease (and gap) conditions",
        passed: fs.l4_failures == 0 && is.l6_failures == 0 && l6_runs == 100 && is.l6_checked > 0,
        detail: format!(
            "feasible: {} iterations, {} violations, min slack {:.3e}; infeasible: {} runs, {} iterations, {} violations, min slack {:.3e}{l6_not_opt}",
            fs.l4_checked, fs.l4_failures, fs.l4_min_slack, l6_runs, is.l6_checked, is.l6_failures, is.l6_min_slack
        ),
    });

    // criterion 6
    let mut c6_bad = Vec::new();
    for seed in 0..20 {
        let (inst, rho_target) = bounded_instance(500 + seed);
        let rho = if seed % 2 == 0 {
            rho_target
        } else {
            10.0 * rho_target
        };
        let kappa = KAPPAS[(seed % 4) as usize];
        let params = SolveParams {
            kappa,
            rho,
            epsilon: EPSILON,
            ..Default::default()
        };
        let res = infeasible_run(&inst.lp, &params, &mut is, false);
        if res.status != SolveStatus::Optimal {
            c6_bad.push(format!("seed {seed} rho {rho}: {}", res.status));
        }
    }
    let pinf = primal_infeasible();
    for rho in [1.0, 10.0, 100.0] {
        let res = infeasible_run(
            &pinf,
            &SolveParams {
                rho,
                epsilon: EPSILON,
                ..Default::default()
            },
            &mut is,
            false,
        );
        if res.status != SolveStatus::InfeasibilityCertificate {
            c6_bad.push(format!("primal infeasible rho {rho}: {}", res.status));
        }
    }
    results.push(Criterion {
        id: 6,
        title: "certificate soundness",
        passed: c6_bad.is_empty(),
        detail: format!("20 bounded instances optimal, primal-infeasible certified for rho 1/10/100; failures {c6_bad:?}"),
    });

    results.push(Criterion {
        id: 7,
        title: "infeasibility decays as theta = prod(1 - alpha)",
        passed: is.theta_failures == 0 && is.final_failures.is_empty() && is.final_checked > 0,
        detail: format!(
            "{} runs, {} iterations, {} ratios checked, max deviation {:.3e}; {} optimal exits checked, final bound failures {:?}",
            is.runs, is.iterations, is.theta_checked, is.theta_worst, is.final_checked, is.final_failures
        ),
    });

    let s_checked = fs.structure.checked + is.structure.checked;
    let s_fail = fs.structure.failures + is.structure.failures;
    results.push(Criterion {
        id: 8,
        title: "primal/dual rows exact, residual on basic indices only",
        passed: s_fail == 0,
        detail: format!(
            "{s_checked} directions, {s_fail} violations, worst primal {:.3e}, worst dual {:.3e}, off-support {}, worst rhs deviation {:.1} eps",
            fs.structure.worst_primal.max(is.structure.worst_primal),
            fs.structure.worst_dual.max(is.structure.worst_dual),
            fs.structure.off_support + is.structure.off_support,
            fs.structure.worst_rhs.max(is.structure.worst_rhs)
        ),
    });

    results.push(Criterion {
        id: 9,
        title: "orthogonality and Pythagoras in feasible mode",
        passed: fs.ortho_failures == 0 && fs.pyth_failures == 0,
        detail: format!(
            "{} directions: |du'dv|/(|du||dv|) worst {:.3e} ({} violations); {} exact: worst {:.3e} ({} violations)",
            fs.ortho_checked, fs.ortho_worst, fs.ortho_failures, fs.pyth_checked, fs.pyth_worst, fs.pyth_failures
        ),
    });

    results.push(criterion_10());
    results.push(criterion_11());

    for c in &results {
        c.print();
    }
    if results.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Threshold scaling of the Monteiro-type bound, and a single-outlier
/// residual that the infinity-norm bound rejects while the Euclidean
/// conditions accept it.
fn criterion_10() -> Criterion {
    let (sigma, gamma) = (0.5, 0.5);
    let ns = [10usize, 40, 160];
    let mut notes = Vec::new();
    let mut ok = true;
    let formula: Vec<f64> = ns
        .iter()
        .map(|&n| (1.0 - gamma) * sigma / (4.0 * (n as f64).sqrt()) * 1.0f64.sqrt())
        .collect();
    let table = monteiro_thresholds(&ns, sigma, gamma, 1.0);
    for (i, &n) in ns.iter().enumerate() {
        let direct = alt_condition_monteiro(&[], sigma, gamma, n, n as f64).rhs;
        ok &= (direct - formula[i]).abs() <= 1e-15 && (table[i].1 - formula[i]).abs() <= 1e-15;
        ok &= (direct * (n as f64).sqrt() - formula[0] * 10f64.sqrt()).abs() <= 1e-14;
    }
    notes.push(format!(
        "thresholds {:.5e} {:.5e} {:.5e} (ratios {:.4}, {:.4})",
        table[0].1,
        table[1].1,
        table[2].1,
        table[0].1 / table[1].1,
        table[1].1 / table[2].1
    ));

    // outlier: w = (5, 1, ..., 1) at a feasible point, one large scaled component
    let (m, n, eta, kappa) = (20usize, 50usize, 0.5, 0.5);
    let base = generate_feasible_instance(77, m, n, 1.0).unwrap().lp;
    let mut x = vec![1.0; n];
    let mut z = vec![1.0; n];
    x[0] = 5.0;
    z[0] = 5.0;
    let y = vec![0.0; m];
    let b = base.a().matvec(&x).unwrap();
    let c = z.clone();
    let lp = LinearProgram::new("outlier", base.a().clone(), b, c).unwrap();
    let nu = (n as f64).sqrt();
    let sys = build_scaled_system(&lp, &x, &y, &z, nu).unwrap();
    let gap = dot(&x, &z);
    let mut xi = vec![0.0; n];
    xi[0] = 1.1 * eta * gap / n as f64 / sys.w[0];
    for (j, v) in xi.iter_mut().enumerate().take(m).skip(1) {
        *v = 0.01 * eta * gap / n as f64 * if j % 2 == 0 { 1.0 } else { -1.0 };
    }
    let dir = direction_with_residual(&sys, &xi).unwrap();
    let support: Vec<usize> = (0..m).collect();
    let w_b: Vec<f64> = support.iter().map(|&j| sys.w[j]).collect();
    let xi_b: Vec<f64> = support.iter().map(|&j| xi[j]).collect();
    let componentwise = alt_condition_componentwise(&w_b, &xi_b, eta, n, gap);
    let lhs_direct = w_b
        .iter()
        .zip(&xi_b)
        .map(|(a, b)| (a * b).abs())
        .fold(0.0, f64::max);
    let report = check_conditions(&sys, &dir, kappa, Mode::Infeasible);
    let outlier_ok = !componentwise.holds
        && (componentwise.lhs - lhs_direct).abs() <= 1e-15
        && report.descent.holds
        && report.relative_size.holds
        && report.gap_control.holds;
    ok &= outlier_ok;
    notes.push(format!(
        "outlier: inf-norm bound {:.4} > {:.4} rejects; descent {:.3}<={:.3}, size {:.3}<={:.3}, gap {:.3}<={:.3}",
        componentwise.lhs,
        componentwise.rhs,
        report.descent.lhs,
        report.descent.rhs,
        report.relative_size.lhs,
        report.relative_size.rhs,
        report.gap_control.lhs,
        report.gap_control.rhs
    ));
    Criterion {
        id: 10,
        title: "alternative acceptance conditions",
        passed: ok,
        detail: notes.join("; "),
    }
}

/// Median feasible iteration counts against `Q = ν(φ⁰ − ν ln ε)/δ` over
/// `n ∈ {10, 20, 40, 80}`, `m = n/2`.
fn criterion_11() -> Criterion {
    let sizes: Vec<(usize, usize)> = [10usize, 20, 40, 80].iter().map(|&n| (n / 2, n)).collect();
    let seeds: Vec<u64> = (0..7).collect();
    let kappa = 0.5;
    let base = SolveParams {
        epsilon: EPSILON,
        ..Default::default()
    };
    let report = scaling_study(&sizes, &seeds, kappa, &base, 0.5).unwrap();
    // recompute Q and the regression independently
    let mut pts = Vec::new();
    let mut q_ok = true;
    for p in &report.points {
        let mut qs: Vec<f64> = seeds
            .iter()
            .map(|&s| {
                let inst = generate_feasible_instance(s, p.m, p.n, 0.5).unwrap();
                let st = inst.strict_start.unwrap();
                let nu = (p.n as f64).sqrt();
                let delta = 0.15 * (1.0 - kappa).powi(4);
                nu * (potential(&st.x, &st.z, nu) - nu * EPSILON.ln()) / delta
            })
            .collect();
        qs.sort_by(f64::total_cmp);
        let q_med = qs[qs.len() / 2];
        q_ok &= (q_med - p.median_q).abs() <= 1e-9 * q_med;
        pts.push((q_med.ln(), p.median_iters.ln()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let all_optimal = report.points.iter().all(|p| p.optimal == p.runs);
    let table: Vec<String> = report
        .points
        .iter()
        .map(|p| format!("n={} iters={} Q={:.3e}", p.n, p.median_iters, p.median_q))
        .collect();
    Criterion {
        id: 11,
        title: "median iterations grow at most linearly in nu(phi0 - nu ln eps)/delta",
        passed: slope <= 1.0 && all_optimal && q_ok && (slope - report.slope).abs() < 1e-9,
        detail: format!("log-log slope {slope:.4}; {}", table.join(", ")),
    }
}
