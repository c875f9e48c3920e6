//! Seeded parameter sweeps over generated instances.
//!
//! Cells of the grid are independent solves and run in parallel; results are
//! collected in grid order, so the summary CSV is identical across runs when
//! timing is disabled.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ipm::{run_feasible, run_infeasible, SolveParams, SolveResult};
use crate::lp::{generate_bounded_optimal_instance, generate_feasible_instance, GeneratedInstance};
use crate::newton::{alt_condition_monteiro, AcceptRule, Mode};
use crate::potential::phi;

/// Residual test gating the inner solver, before per-instance defaults are
/// filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionVariant {
    Standard,
    /// `σ` defaults to `n/(n+ν)`.
    Monteiro {
        sigma: Option<f64>,
        gamma: f64,
    },
    Componentwise {
        eta: f64,
    },
}

impl ConditionVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ConditionVariant::Standard => "standard",
            ConditionVariant::Monteiro { .. } => "monteiro",
            ConditionVariant::Componentwise { .. } => "componentwise",
        }
    }

    pub fn resolve(&self, n: usize, nu: f64) -> Result<AcceptRule> {
        let unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(v)
            } else {
                Err(Error::Parameter(format!("{name} {v} not in (0, 1)")))
            }
        };
        Ok(match *self {
            ConditionVariant::Standard => AcceptRule::Standard,
            ConditionVariant::Monteiro { sigma, gamma } => AcceptRule::Monteiro {
                sigma: unit("sigma", sigma.unwrap_or(n as f64 / (n as f64 + nu)))?,
                gamma: unit("gamma", gamma)?,
            },
            ConditionVariant::Componentwise { eta } => AcceptRule::Componentwise {
                eta: unit("eta", eta)?,
            },
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// `(m, n)` pairs.
    pub sizes: Vec<(usize, usize)>,
    pub seeds: Vec<u64>,
    pub kappas: Vec<f64>,
    pub conditions: Vec<ConditionVariant>,
    /// Base solver parameters; `kappa` and the inner rule are overridden per cell.
    pub params: SolveParams,
    /// Density of generated feasible instances.
    pub density: f64,
    /// Record wall-clock time; when false `wall_ms` is written as 0.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Feasible,
            sizes: vec![(10, 30)],
            seeds: vec![0],
            kappas: vec![0.0, 0.3, 0.6, 0.9],
            conditions: vec![ConditionVariant::Standard],
            params: SolveParams::default(),
            density: 0.5,
            timing: true,
        }
    }
}

/// One row of the summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub instance: String,
    pub mode: Mode,
    pub condition: String,
    pub kappa: f64,
    pub nu: f64,
    pub status: String,
    pub outer_iters: usize,
    pub total_cg_iters: usize,
    pub final_gap: f64,
    pub wall_ms: u64,
}

pub const SUMMARY_HEADER: [&str; 10] = [
    "instance",
    "mode",
    "condition",
    "kappa",
    "nu",
    "status",
    "outer_iters",
    "total_cg_iters",
    "final_gap",
    "wall_ms",
];

pub fn instance_name(m: usize, n: usize, seed: u64) -> String {
    format!("gen-m{m}-n{n}-s{seed}")
}

/// Bound on the optimal pair used for infeasible-mode instances: the
/// generator target never exceeds the solver's `ρ`.
fn rho_target(rho: f64) -> f64 {
    rho.min(10.0)
}

pub fn generate_for_mode(
    mode: Mode,
    seed: u64,
    m: usize,
    n: usize,
    density: f64,
    rho: f64,
) -> Result<GeneratedInstance> {
    match mode {
        Mode::Feasible => generate_feasible_instance(seed, m, n, density),
        Mode::Infeasible => generate_bounded_optimal_instance(seed, m, n, rho_target(rho)),
    }
}

/// Runs one solve on a generated instance in the given mode.
pub fn solve_generated(
    inst: &GeneratedInstance,
    mode: Mode,
    params: &SolveParams,
) -> Result<SolveResult> {
    match mode {
        Mode::Feasible => {
            let start = inst.strict_start.as_ref().ok_or_else(|| {
                Error::Precondition("instance has no strictly feasible start".into())
            })?;
            run_feasible(&inst.lp, start, params)
        }
        Mode::Infeasible => run_infeasible(&inst.lp, params),
    }
}

struct Cell {
    m: usize,
    n: usize,
    seed: u64,
    kappa: f64,
    condition: ConditionVariant,
}

fn run_cell(cfg: &ExperimentConfig, cell: &Cell) -> SummaryRow {
    let started = Instant::now();
    let nu = cfg.params.nu.unwrap_or((cell.n as f64).sqrt());
    let mut row = SummaryRow {
        instance: instance_name(cell.m, cell.n, cell.seed),
        mode: cfg.mode,
        condition: cell.condition.name().to_string(),
        kappa: cell.kappa,
        nu,
        status: String::new(),
        outer_iters: 0,
        total_cg_iters: 0,
        final_gap: f64::NAN,
        wall_ms: 0,
    };
    let outcome = (|| {
        let rule = cell.condition.resolve(cell.n, nu)?;
        let inst = generate_for_mode(
            cfg.mode,
            cell.seed,
            cell.m,
            cell.n,
            cfg.density,
            cfg.params.rho,
        )?;
        let mut params = cfg.params;
        params.kappa = cell.kappa;
        params.inner.rule = rule;
        solve_generated(&inst, cfg.mode, &params)
    })();
    match outcome {
        Ok(res) => {
            row.status = res.status.to_string();
            row.outer_iters = res.log.len();
            row.total_cg_iters = res.total_cg_iterations();
            row.final_gap = res.final_gap();
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    if cfg.timing {
        row.wall_ms = started.elapsed().as_millis() as u64;
    }
    row
}

/// Runs the grid sizes × κ × condition × seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Vec<SummaryRow> {
    let mut cells = Vec::new();
    for &(m, n) in &cfg.sizes {
        for &kappa in &cfg.kappas {
            for &condition in &cfg.conditions {
                for &seed in &cfg.seeds {
                    cells.push(Cell {
                        m,
                        n,
                        seed,
                        kappa,
                        condition,
                    });
                }
            }
        }
    }
    cells.par_iter().map(|c| run_cell(cfg, c)).collect()
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Median iteration count at one problem size, next to the median of the
/// complexity measure `Q = ν·(φ⁰ − ν·ln ε)/δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub m: usize,
    pub n: usize,
    pub runs: usize,
    pub optimal: usize,
    pub median_iters: f64,
    pub median_q: f64,
    pub median_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub kappa: f64,
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `ln(median_iters)` against `ln(median_q)`.
    pub slope: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

/// Least-squares slope of `y` against `x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Feasible-mode iteration growth over problem sizes.
pub fn scaling_study(
    sizes: &[(usize, usize)],
    seeds: &[u64],
    kappa: f64,
    base: &SolveParams,
    density: f64,
) -> Result<ScalingReport> {
    let mut points = Vec::new();
    for &(m, n) in sizes {
        let runs: Vec<Result<(f64, f64, f64, bool)>> = seeds
            .par_iter()
            .map(|&seed| {
                let inst = generate_feasible_instance(seed, m, n, density)?;
                let params = SolveParams { kappa, ..*base };
                let res = solve_generated(&inst, Mode::Feasible, &params)?;
                let p = &res.params;
                let start = inst.strict_start.as_ref().expect("feasible instance");
                let phi0 = phi(&start.x, &start.z, p.nu)?.phi;
                let q = p.nu * (phi0 - p.nu * p.epsilon.ln()) / p.delta;
                Ok((
                    res.log.len() as f64,
                    q,
                    res.iteration_bound as f64,
                    res.status == crate::ipm::SolveStatus::Optimal,
                ))
            })
            .collect();
        let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
        points.push(ScalingPoint {
            m,
            n,
            runs: runs.len(),
            optimal: runs.iter().filter(|r| r.3).count(),
            median_iters: median(runs.iter().map(|r| r.0).collect()),
            median_q: median(runs.iter().map(|r| r.1).collect()),
            median_bound: median(runs.iter().map(|r| r.2).collect()),
        });
    }
    let slope = log_log_slope(
        &points
            .iter()
            .map(|p| (p.median_q, p.median_iters))
            .collect::<Vec<_>>(),
    );
    Ok(ScalingReport {
        kappa,
        points,
        slope,
    })
}

pub fn write_scaling_csv<W: Write>(report: &ScalingReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in &report.points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// Admissible `‖ξ_B‖` under the Monteiro-type bound for each `n`, with the
/// gap held at `gap_per_n · n`.
pub fn monteiro_thresholds(
    ns: &[usize],
    sigma: f64,
    gamma: f64,
    gap_per_n: f64,
) -> Vec<(usize, f64)> {
    ns.iter()
        .map(|&n| {
            (
                n,
                alt_condition_monteiro(&[], sigma, gamma, n, gap_per_n * n as f64).rhs,
            )
        })
        .collect()
}
