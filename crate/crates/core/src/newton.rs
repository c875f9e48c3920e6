//! The scaled Newton system
//!
//! ```text
//! [ AD   0    0 ] [du]   [p]       p = b − A x
//! [ 0   DAᵀ   I ] [dy] = [q]       q = D (c − Aᵀy − z)
//! [ I    0    I ] [dv]   [r + ξ]   r = −w + μ W⁻¹ e
//! ```
//!
//! with `D = X^{1/2} Z^{-1/2}`, `W = (XZ)^{1/2}` and `w = W e`. Inexact
//! directions keep the first two rows exact and leave a residual `ξ` in the
//! third one. `ξ` is produced by lifting the normal-equations residual through
//! a basis of `A`, so it is supported on basic columns only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    conjugate_gradients, dot, norm2, select_basis, BasisFactorization, CgControls, CgStop,
    DenseMatrix, HouseholderQr, DEFAULT_PIVOT_TOL,
};
use crate::lp::LinearProgram;

/// Floor under which `‖ξ‖` counts as zero in the residual tests.
pub const XI_FLOOR: f64 = 1e-12;

/// Largest `m` for which the dense oracle is formed.
pub const DENSE_ORACLE_CAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Feasible,
    Infeasible,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Feasible => "feasible",
            Mode::Infeasible => "infeasible",
        })
    }
}

/// Scaling, target and right-hand sides at one iterate.
#[derive(Debug, Clone)]
pub struct ScaledSystem<'a> {
    pub lp: &'a LinearProgram,
    pub d: Vec<f64>,
    pub w: Vec<f64>,
    pub w_min: f64,
    pub mu: f64,
    pub nu: f64,
    pub gap: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
}

pub fn build_scaled_system<'a>(
    lp: &'a LinearProgram,
    x: &[f64],
    y: &[f64],
    z: &[f64],
    nu: f64,
) -> Result<ScaledSystem<'a>> {
    let n = lp.num_cols();
    if x.len() != n || z.len() != n || y.len() != lp.num_rows() {
        return Err(Error::Dimension("iterate does not match the LP".into()));
    }
    if let Some(i) = x
        .iter()
        .zip(z)
        .position(|(&xi, &zi)| !(xi > 0.0 && zi > 0.0))
    {
        return Err(Error::Domain(format!(
            "iterate left the interior at component {i}"
        )));
    }
    let gap = dot(x, z);
    let mu = gap / (n as f64 + nu);
    let d: Vec<f64> = x.iter().zip(z).map(|(xi, zi)| (xi / zi).sqrt()).collect();
    let w: Vec<f64> = x.iter().zip(z).map(|(xi, zi)| (xi * zi).sqrt()).collect();
    let w_min = w.iter().copied().fold(f64::INFINITY, f64::min);
    let p: Vec<f64> = lp.primal_residual(x)?.into_iter().map(|v| -v).collect();
    let q: Vec<f64> = lp
        .dual_residual(y, z)?
        .into_iter()
        .zip(&d)
        .map(|(v, di)| -v * di)
        .collect();
    let r: Vec<f64> = w.iter().map(|&wi| -wi + mu / wi).collect();
    Ok(ScaledSystem {
        lp,
        d,
        w,
        w_min,
        mu,
        nu,
        gap,
        p,
        q,
        r,
    })
}

impl ScaledSystem<'_> {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    /// Drops the primal and dual blocks, leaving the system of a feasible
    /// iterate. Without this, rounding in `b − Ax` and `c − Aᵀy − z`
    /// (amplified by `D`) breaks the orthogonality of `du` and `dv`.
    pub fn assume_feasible(mut self) -> Self {
        self.p.iter_mut().for_each(|v| *v = 0.0);
        self.q.iter_mut().for_each(|v| *v = 0.0);
        self
    }

    /// `A·D·v`
    pub fn ad(&self, v: &[f64]) -> Vec<f64> {
        let dv: Vec<f64> = v.iter().zip(&self.d).map(|(a, b)| a * b).collect();
        self.lp
            .a()
            .matvec(&dv)
            .expect("length checked at construction")
    }

    /// `D·Aᵀ·u`
    pub fn dat(&self, u: &[f64]) -> Vec<f64> {
        let mut t = self
            .lp
            .a()
            .matvec_transpose(u)
            .expect("length checked at construction");
        for (ti, di) in t.iter_mut().zip(&self.d) {
            *ti *= di;
        }
        t
    }

    /// `A·D²·Aᵀ·u`
    pub fn normal(&self, u: &[f64]) -> Vec<f64> {
        self.ad(&self.dat(u))
    }

    /// Right-hand side of the normal equations, `p + AD·q − AD·r`.
    pub fn normal_rhs(&self) -> Vec<f64> {
        let diff: Vec<f64> = self.q.iter().zip(&self.r).map(|(q, r)| q - r).collect();
        let mut g = self.ad(&diff);
        for (gi, pi) in g.iter_mut().zip(&self.p) {
            *gi += pi;
        }
        g
    }

    /// Dense `A·D²·Aᵀ`, for the oracle path.
    pub fn dense_normal_matrix(&self) -> Result<DenseMatrix> {
        let m = self.m();
        if m > DENSE_ORACLE_CAP {
            return Err(Error::Parameter(format!(
                "dense oracle limited to m <= {DENSE_ORACLE_CAP}, got {m}"
            )));
        }
        let a = self.lp.a();
        let mut out = DenseMatrix::zeros(m, m);
        for j in 0..a.ncols() {
            let d2 = self.d[j] * self.d[j];
            let col: Vec<(usize, f64)> = a.col(j).collect();
            for &(i, vi) in &col {
                for &(k, vk) in &col {
                    out[(i, k)] += vi * vk * d2;
                }
            }
        }
        Ok(out)
    }

    /// Diagonal of `A·D²·Aᵀ`.
    pub fn normal_diagonal(&self) -> Vec<f64> {
        let a = self.lp.a();
        let mut diag = vec![0.0; self.m()];
        for j in 0..a.ncols() {
            let d2 = self.d[j] * self.d[j];
            for (i, v) in a.col(j) {
                diag[i] += v * v * d2;
            }
        }
        diag
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub du: Vec<f64>,
    pub dy: Vec<f64>,
    pub dv: Vec<f64>,
    pub dx: Vec<f64>,
    pub dz: Vec<f64>,
    /// Residual in the scaled complementarity row.
    pub xi: Vec<f64>,
    /// Indices where `xi` may be nonzero; empty for an exact direction.
    pub basic_support: Vec<usize>,
}

impl Direction {
    fn from_scaled(
        sys: &ScaledSystem<'_>,
        du: Vec<f64>,
        dy: Vec<f64>,
        dv: Vec<f64>,
        xi: Vec<f64>,
        basic_support: Vec<usize>,
    ) -> Self {
        let dx = du.iter().zip(&sys.d).map(|(u, d)| u * d).collect();
        let dz = dv.iter().zip(&sys.d).map(|(v, d)| v / d).collect();
        Self {
            du,
            dy,
            dv,
            dx,
            dz,
            xi,
            basic_support,
        }
    }

    /// The residual `ξ₀ = W·ξ` of the unscaled complementarity row.
    pub fn unscaled_residual(&self, sys: &ScaledSystem<'_>) -> Vec<f64> {
        self.xi.iter().zip(&sys.w).map(|(x, w)| x * w).collect()
    }

    pub fn block_residuals(&self, sys: &ScaledSystem<'_>) -> BlockResiduals {
        let primal: Vec<f64> = sys
            .ad(&self.du)
            .iter()
            .zip(&sys.p)
            .map(|(a, p)| a - p)
            .collect();
        let dat = sys.dat(&self.dy);
        let dual: Vec<f64> = (0..sys.n())
            .map(|i| dat[i] + self.dv[i] - sys.q[i])
            .collect();
        let comp: Vec<f64> = (0..sys.n())
            .map(|i| self.du[i] + self.dv[i] - sys.r[i] - self.xi[i])
            .collect();
        BlockResiduals {
            primal: norm2(&primal),
            dual: norm2(&dual),
            complementarity: norm2(&comp),
        }
    }

    /// Largest `|ξᵢ|` outside `basic_support`.
    pub fn off_support_residual(&self) -> f64 {
        let mut on = vec![false; self.xi.len()];
        for &j in &self.basic_support {
            on[j] = true;
        }
        self.xi
            .iter()
            .zip(&on)
            .filter(|(_, &b)| !b)
            .fold(0.0_f64, |m, (v, _)| m.max(v.abs()))
    }
}

/// Euclidean norms of the three block-row residuals of a direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockResiduals {
    pub primal: f64,
    pub dual: f64,
    pub complementarity: f64,
}

/// One inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

/// Evaluation of the three residual conditions:
/// descent `−rᵀξ ≤ κ‖r‖²`, relative size `‖ξ‖ ≤ κ·min(‖du‖,‖dv‖)` and
/// gap control `−wᵀξ ≤ κ·n/(n+ν)·‖w‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub kappa: f64,
    pub mode: Mode,
    pub descent: Inequality,
    pub relative_size: Inequality,
    pub gap_control: Inequality,
}

impl ConditionReport {
    /// Whether the conditions that gate `mode` hold; the gap-control test is
    /// only required for infeasible iterates.
    pub fn passes(&self) -> bool {
        self.descent.holds
            && self.relative_size.holds
            && (self.mode == Mode::Feasible || self.gap_control.holds)
    }
}

pub fn check_conditions(
    sys: &ScaledSystem<'_>,
    dir: &Direction,
    kappa: f64,
    mode: Mode,
) -> ConditionReport {
    let n = sys.n() as f64;
    let norm_r = norm2(&sys.r);
    let norm_w2 = dot(&sys.w, &sys.w);
    let norm_xi = norm2(&dir.xi);
    let descent = Inequality::new(
        -dot(&sys.r, &dir.xi),
        kappa * norm_r * norm_r + XI_FLOOR * norm_r,
    );
    let smallest = norm2(&dir.du).min(norm2(&dir.dv));
    let relative_size = Inequality::new(norm_xi, (kappa * smallest).max(XI_FLOOR));
    let gap_control = Inequality::new(
        -dot(&sys.w, &dir.xi),
        kappa * n / (n + sys.nu) * norm_w2 + XI_FLOOR * norm_w2.sqrt(),
    );
    ConditionReport {
        kappa,
        mode,
        descent,
        relative_size,
        gap_control,
    }
}

/// Residual bound `‖ξ_B‖ ≤ (1−γ)σ/(4√n)·√(gap/n)` used by basis-splitting
/// path-following analyses.
pub fn alt_condition_monteiro(
    xi_b: &[f64],
    sigma: f64,
    gamma: f64,
    n: usize,
    gap: f64,
) -> Inequality {
    let n = n as f64;
    let threshold = (1.0 - gamma) * sigma / (4.0 * n.sqrt()) * (gap / n).sqrt();
    Inequality::new(norm2(xi_b), threshold)
}

/// Residual bound `‖W_B ξ_B‖∞ ≤ η·gap/n`.
pub fn alt_condition_componentwise(
    w_b: &[f64],
    xi_b: &[f64],
    eta: f64,
    n: usize,
    gap: f64,
) -> Inequality {
    let lhs = w_b
        .iter()
        .zip(xi_b)
        .fold(0.0_f64, |m, (w, x)| m.max((w * x).abs()));
    Inequality::new(lhs, eta * gap / n as f64)
}

/// Which residual test gates acceptance of a CG iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum AcceptRule {
    /// The descent, relative-size and gap-control conditions.
    Standard,
    Monteiro {
        sigma: f64,
        gamma: f64,
    },
    Componentwise {
        eta: f64,
    },
}

impl AcceptRule {
    pub fn name(&self) -> &'static str {
        match self {
            AcceptRule::Standard => "standard",
            AcceptRule::Monteiro { .. } => "monteiro",
            AcceptRule::Componentwise { .. } => "componentwise",
        }
    }

    fn accepts(&self, sys: &ScaledSystem<'_>, dir: &Direction, report: &ConditionReport) -> bool {
        let xi_b: Vec<f64> = dir.basic_support.iter().map(|&j| dir.xi[j]).collect();
        match *self {
            AcceptRule::Standard => report.passes(),
            AcceptRule::Monteiro { sigma, gamma } => {
                alt_condition_monteiro(&xi_b, sigma, gamma, sys.n(), sys.gap).holds
            }
            AcceptRule::Componentwise { eta } => {
                let w_b: Vec<f64> = dir.basic_support.iter().map(|&j| sys.w[j]).collect();
                alt_condition_componentwise(&w_b, &xi_b, eta, sys.n(), sys.gap).holds
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    /// Diagonal of `A·D²·Aᵀ`.
    Diagonal,
    /// `(A_B D_B² A_Bᵀ)⁻¹` from the maximum-weight basis.
    Basis,
}

/// Controls of the inner iterative solve.
#[derive(Debug, Clone, Copy)]
pub struct InnerControls {
    /// Defaults to `10·m`.
    pub max_iters: Option<usize>,
    /// Defaults to every iteration for `m ≤ 2000`, every 5th above.
    pub check_every: Option<usize>,
    pub preconditioner: Preconditioner,
    pub pivot_tol: f64,
    pub rule: AcceptRule,
    /// Fault injection: moves part of `ξ` onto a nonbasic index. Tests only.
    pub fault_break_lift: bool,
}

impl Default for InnerControls {
    fn default() -> Self {
        Self {
            max_iters: None,
            check_every: None,
            preconditioner: Preconditioner::Diagonal,
            pivot_tol: DEFAULT_PIVOT_TOL,
            rule: AcceptRule::Standard,
            fault_break_lift: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerStats {
    pub cg_iterations: usize,
    pub cg_stop: CgStop,
    /// The accepted direction came from the dense oracle.
    pub used_fallback: bool,
}

#[derive(Debug, Clone)]
pub struct InexactOutcome {
    pub direction: Direction,
    pub report: ConditionReport,
    pub stats: InnerStats,
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::Parameter(format!("kappa {kappa} not in [0, 1)")));
    }
    Ok(())
}

/// Dense oracle built on a Householder QR of `D·Aᵀ`: `P = Q·Qᵀ` is then an
/// orthogonal projector to working precision even when `A·D²·Aᵀ` is badly
/// conditioned, as it is near convergence.
struct Oracle {
    qr: HouseholderQr,
}

impl Oracle {
    fn new(sys: &ScaledSystem<'_>) -> Result<Self> {
        let m = sys.m();
        if m > DENSE_ORACLE_CAP {
            return Err(Error::Parameter(format!(
                "dense oracle limited to m <= {DENSE_ORACLE_CAP}, got {m}"
            )));
        }
        let a = sys.lp.a();
        let mut cols = vec![vec![0.0; sys.n()]; m];
        for j in 0..a.ncols() {
            for (i, v) in a.col(j) {
                cols[i][j] = sys.d[j] * v;
            }
        }
        Ok(Self {
            qr: HouseholderQr::factor(cols)?,
        })
    }

    /// Orthogonal projection onto `range(D Aᵀ)`.
    fn project(&self, v: &[f64]) -> Vec<f64> {
        self.qr.project(v)
    }
}

/// Exact solution of the scaled system through the projection formulas
///
/// ```text
/// du* =  DAᵀ(AD²Aᵀ)⁻¹p − (I−P)q + (I−P)r
/// dy* = (AD²Aᵀ)⁻¹(p + ADq − ADr)
/// dv* = −DAᵀ(AD²Aᵀ)⁻¹p + (I−P)q + P r
/// ```
///
/// with `P = DAᵀ(AD²Aᵀ)⁻¹AD`, evaluated through a dense QR of `DAᵀ`.
pub fn exact_directions(sys: &ScaledSystem<'_>) -> Result<Direction> {
    let oracle = Oracle::new(sys)?;
    let n = sys.n();
    let t = oracle.qr.range_lift(&sys.p);
    let pq = oracle.project(&sys.q);
    let pr = oracle.project(&sys.r);
    let du: Vec<f64> = (0..n)
        .map(|i| t[i] - (sys.q[i] - pq[i]) + (sys.r[i] - pr[i]))
        .collect();
    let dv: Vec<f64> = (0..n).map(|i| -t[i] + (sys.q[i] - pq[i]) + pr[i]).collect();
    let dy = oracle.qr.solve_normal(&sys.normal_rhs());
    Ok(Direction::from_scaled(
        sys,
        du,
        dy,
        dv,
        vec![0.0; n],
        Vec::new(),
    ))
}

/// The solution of the scaled system whose third row carries a prescribed
/// residual `ξ`: `du = du* + (I−P)ξ`, `dv = dv* + Pξ`, `dy = dy* − (AD²Aᵀ)⁻¹ADξ`.
pub fn direction_with_residual(sys: &ScaledSystem<'_>, xi: &[f64]) -> Result<Direction> {
    let exact = exact_directions(sys)?;
    let oracle = Oracle::new(sys)?;
    let pxi = oracle.project(xi);
    let corr = oracle.qr.solve_normal(&sys.ad(xi));
    let n = sys.n();
    let du = (0..n).map(|i| exact.du[i] + xi[i] - pxi[i]).collect();
    let dv = (0..n).map(|i| exact.dv[i] + pxi[i]).collect();
    let dy = exact.dy.iter().zip(&corr).map(|(a, b)| a - b).collect();
    let support = (0..n).filter(|&i| xi[i] != 0.0).collect();
    Ok(Direction::from_scaled(
        sys,
        du,
        dy,
        dv,
        xi.to_vec(),
        support,
    ))
}

/// Builds the direction implied by a normal-equations iterate `dy` with
/// residual `s = g − AD²Aᵀ·dy`: the dual row is solved exactly for `dv`, `s`
/// is lifted through the basis into `ξ` (so that `AD·ξ = s`), and `du`
/// closes the third row, which makes the primal row exact as well.
fn candidate(
    sys: &ScaledSystem<'_>,
    basis: &BasisFactorization,
    dy: &[f64],
    s: &[f64],
    break_lift: bool,
) -> Direction {
    let n = sys.n();
    let dat = sys.dat(dy);
    let dv: Vec<f64> = (0..n).map(|i| sys.q[i] - dat[i]).collect();
    let tb = basis.solve(s);
    let mut xi = vec![0.0; n];
    for (&j, t) in basis.basic().iter().zip(&tb) {
        xi[j] = t / sys.d[j];
    }
    if break_lift {
        let mut on = vec![false; n];
        basis.basic().iter().for_each(|&j| on[j] = true);
        if let (Some(&b), Some(nb)) = (basis.basic().first(), (0..n).find(|&j| !on[j])) {
            xi[nb] = if xi[b] != 0.0 { xi[b] } else { 1.0 };
            xi[b] = 0.0;
        }
    }
    let du: Vec<f64> = (0..n).map(|i| sys.r[i] + xi[i] - dv[i]).collect();
    Direction::from_scaled(sys, du, dy.to_vec(), dv, xi, basis.basic().to_vec())
}

/// Inexact direction by preconditioned CG on `AD²Aᵀ·dy = p + ADq − ADr`,
/// accepting the first CG iterate whose lifted residual passes the gate
/// (`controls.rule`). Falls back to [`exact_directions`] when CG runs out of
/// iterations or breaks down.
pub fn inexact_directions(
    sys: &ScaledSystem<'_>,
    kappa: f64,
    mode: Mode,
    controls: &InnerControls,
) -> Result<InexactOutcome> {
    check_kappa(kappa)?;
    let m = sys.m();
    let basis = select_basis(sys.lp.a(), &sys.d, controls.pivot_tol)?;
    let g = sys.normal_rhs();
    let cg_controls = CgControls {
        max_iters: controls.max_iters.unwrap_or(10 * m),
        check_every: controls
            .check_every
            .unwrap_or(if m <= 2000 { 1 } else { 5 }),
        replace_every: 50,
    };

    let diag = sys.normal_diagonal();
    let precond = |v: &[f64]| -> Vec<f64> {
        match controls.preconditioner {
            Preconditioner::Diagonal => v.iter().zip(&diag).map(|(a, d)| a / d).collect(),
            Preconditioner::Basis => {
                let mut t = basis.solve(v);
                for (tk, &j) in t.iter_mut().zip(basis.basic()) {
                    *tk /= sys.d[j] * sys.d[j];
                }
                basis.solve_transpose(&t)
            }
        }
    };

    let mut accepted: Option<(Direction, ConditionReport)> = None;
    let outcome = conjugate_gradients(
        |v| sys.normal(v),
        &g,
        precond,
        |state| {
            let dir = candidate(
                sys,
                &basis,
                state.solution,
                state.residual,
                controls.fault_break_lift,
            );
            let report = check_conditions(sys, &dir, kappa, mode);
            let ok = controls.rule.accepts(sys, &dir, &report);
            accepted = ok.then_some((dir, report));
            ok
        },
        &cg_controls,
    );

    if outcome.stop == CgStop::Accepted {
        let (direction, report) = accepted.expect("accepted state was recorded");
        return Ok(InexactOutcome {
            direction,
            report,
            stats: InnerStats {
                cg_iterations: outcome.iterations,
                cg_stop: outcome.stop,
                used_fallback: false,
            },
        });
    }

    let direction = exact_directions(sys).map_err(|e| {
        Error::Numerical(format!(
            "inner solve stopped ({:?}) and the exact fallback failed: {e}",
            outcome.stop
        ))
    })?;
    let report = check_conditions(sys, &direction, kappa, mode);
    Ok(InexactOutcome {
        direction,
        report,
        stats: InnerStats {
            cg_iterations: outcome.iterations,
            cg_stop: outcome.stop,
            used_fallback: true,
        },
    })
}

/// Relative errors of an inexact direction against the exact one, and the
/// bound `κ/(1−κ)` they obey whenever the relative-size condition holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeErrorReport {
    pub rel_err_du: f64,
    pub rel_err_dv: f64,
    pub bound: f64,
    /// `‖du*‖ ≥ (1−κ)‖du‖` (up to rounding).
    pub du_lower_holds: bool,
    /// `‖dv*‖ ≥ (1−κ)‖dv‖` (up to rounding).
    pub dv_lower_holds: bool,
    /// `du*` or `dv*` is numerically zero; the ratios are then meaningless.
    pub degenerate: bool,
}

impl RelativeErrorReport {
    pub fn within_bound(&self, slack: f64) -> bool {
        self.degenerate
            || (self.rel_err_du <= self.bound + slack && self.rel_err_dv <= self.bound + slack)
    }
}

/// Relative size below which an exact component counts as zero.
pub const DEGENERATE_TOL: f64 = 1e-8;

pub fn relative_error_report(
    dir: &Direction,
    exact: &Direction,
    kappa: f64,
) -> RelativeErrorReport {
    let n_du = norm2(&exact.du);
    let n_dv = norm2(&exact.dv);
    let scale = n_du + n_dv;
    let degenerate = n_du <= DEGENERATE_TOL * scale || n_dv <= DEGENERATE_TOL * scale;
    let err_du = norm2(&crate::linalg::sub(&dir.du, &exact.du));
    let err_dv = norm2(&crate::linalg::sub(&dir.dv, &exact.dv));
    let slack = 1e-12 * scale;
    RelativeErrorReport {
        rel_err_du: if n_du > 0.0 {
            err_du / n_du
        } else {
            f64::INFINITY
        },
        rel_err_dv: if n_dv > 0.0 {
            err_dv / n_dv
        } else {
            f64::INFINITY
        },
        bound: kappa / (1.0 - kappa),
        du_lower_holds: n_du + slack >= (1.0 - kappa) * norm2(&dir.du),
        dv_lower_holds: n_dv + slack >= (1.0 - kappa) * norm2(&dir.dv),
        degenerate,
    }
}
