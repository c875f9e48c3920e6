use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use potred::experiment::{
    generate_for_mode, instance_name, monteiro_thresholds, run_experiment, scaling_study,
    write_scaling_csv, write_summary_csv, ConditionVariant, ExperimentConfig, SummaryRow,
};
use potred::ipm::{
    certify_output, least_squares_start, run_feasible_observed, run_infeasible_observed,
    SolveParams, SolveResult, SolveStatus, StepContext,
};
use potred::linalg::norm2;
use potred::lp::{LinearProgram, PrimalDualPoint};
use potred::newton::{
    exact_directions, relative_error_report, Mode, Preconditioner, DENSE_ORACLE_CAP,
};
use potred::validate::{run_validation, Suite, ValidateOptions};

use crate::input::{load_lp, load_start, parse_generate, parse_seeds, parse_sizes};
use crate::{
    ConditionArg, ExperimentArgs, ModeArg, PrecondArg, SolveArgs, SolverArgs, ValidateArgs,
    EXIT_CERTIFICATE, EXIT_INPUT, EXIT_ITERATION_LIMIT, EXIT_NUMERICAL, EXIT_OK,
    EXIT_PROPERTY_FAILED,
};

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

type Outcome = std::result::Result<u8, Failure>;

trait Exit<T> {
    fn exit(self, code: u8) -> std::result::Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Exit<T> for std::result::Result<T, E> {
    fn exit(self, code: u8) -> std::result::Result<T, Failure> {
        self.map_err(|e| Failure {
            code,
            error: e.into(),
        })
    }
}

/// Errors raised by a solve: bad data or parameters are input errors,
/// everything else is numerical.
fn solver_error_code(e: &potred::Error) -> u8 {
    use potred::Error::*;
    match e {
        Parse { .. }
        | InvalidMatrix(_)
        | Dimension(_)
        | Parameter(_)
        | Rank(_)
        | Precondition(_)
        | Generation(_) => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

fn mode_of(arg: ModeArg) -> Mode {
    match arg {
        ModeArg::Feasible => Mode::Feasible,
        ModeArg::Infeasible => Mode::Infeasible,
    }
}

fn variant_of(arg: ConditionArg, s: &SolverArgs) -> ConditionVariant {
    match arg {
        ConditionArg::Standard => ConditionVariant::Standard,
        ConditionArg::Monteiro => ConditionVariant::Monteiro {
            sigma: s.sigma,
            gamma: s.gamma,
        },
        ConditionArg::Componentwise => ConditionVariant::Componentwise { eta: s.eta },
    }
}

fn solve_params(s: &SolverArgs) -> std::result::Result<SolveParams, Failure> {
    let mode = mode_of(s.mode);
    if mode == Mode::Infeasible && s.rho.is_none() {
        return Err(anyhow!("--rho is required in infeasible mode")).exit(EXIT_INPUT);
    }
    let mut p = SolveParams {
        nu: s.nu,
        kappa: s.kappa,
        epsilon: s.eps,
        max_outer: s.max_outer,
        ..Default::default()
    };
    if let Some(rho) = s.rho {
        p.rho = rho;
    }
    p.inner.max_iters = s.cg_max;
    p.inner.preconditioner = match s.preconditioner {
        PrecondArg::Diagonal => Preconditioner::Diagonal,
        PrecondArg::Basis => Preconditioner::Basis,
    };
    p.inner.fault_break_lift = s.break_lift;
    if !(s.density > 0.0 && s.density <= 1.0) {
        return Err(anyhow!("density {} not in (0, 1]", s.density)).exit(EXIT_INPUT);
    }
    Ok(p)
}

fn create(dir: &Path, name: &str) -> std::result::Result<BufWriter<File>, Failure> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .exit(EXIT_PROPERTY_FAILED)?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .with_context(|| format!("creating {}", path.display()))
        .exit(EXIT_PROPERTY_FAILED)
}

struct DiagnosticRow {
    k: usize,
    norm_xi: f64,
    norm_xi0: f64,
    norm_r: f64,
    conds: [f64; 6],
    cg_iters: usize,
    used_fallback: bool,
    rel_err_du: f64,
    rel_err_dv: f64,
    bound: f64,
    degenerate: bool,
}

fn diagnostic_row(ctx: &StepContext<'_, '_>) -> DiagnosticRow {
    let (sys, out) = (ctx.system, ctx.outcome);
    let dir = &out.direction;
    let rep = &out.report;
    let rel = (sys.m() <= DENSE_ORACLE_CAP)
        .then(|| exact_directions(sys).ok())
        .flatten()
        .map(|ex| relative_error_report(dir, &ex, ctx.params.kappa));
    DiagnosticRow {
        k: ctx.iterate.k,
        norm_xi: norm2(&dir.xi),
        norm_xi0: norm2(&dir.unscaled_residual(sys)),
        norm_r: norm2(&sys.r),
        conds: [
            rep.descent.lhs,
            rep.descent.rhs,
            rep.relative_size.lhs,
            rep.relative_size.rhs,
            rep.gap_control.lhs,
            rep.gap_control.rhs,
        ],
        cg_iters: out.stats.cg_iterations,
        used_fallback: out.stats.used_fallback,
        rel_err_du: rel.map_or(f64::NAN, |r| r.rel_err_du),
        rel_err_dv: rel.map_or(f64::NAN, |r| r.rel_err_dv),
        bound: ctx.params.kappa / (1.0 - ctx.params.kappa),
        degenerate: rel.is_some_and(|r| r.degenerate),
    }
}

fn write_diagnostics<W: Write>(rows: &[DiagnosticRow], mut w: W) -> std::io::Result<()> {
    writeln!(
        w,
        "k,norm_xi,norm_xi0,norm_r,descent_lhs,descent_rhs,size_lhs,size_rhs,gap_control_lhs,gap_control_rhs,\
         cg_iters,used_fallback,rel_err_du,rel_err_dv,rel_err_bound,degenerate"
    )?;
    for r in rows {
        write!(w, "{},{},{},{}", r.k, r.norm_xi, r.norm_xi0, r.norm_r)?;
        for c in r.conds {
            write!(w, ",{c}")?;
        }
        writeln!(
            w,
            ",{},{},{},{},{},{}",
            r.cg_iters, r.used_fallback, r.rel_err_du, r.rel_err_dv, r.bound, r.degenerate
        )?;
    }
    w.flush()
}

fn load_problem(
    args: &SolveArgs,
    mode: Mode,
    params: &SolveParams,
) -> std::result::Result<(LinearProgram, Option<PrimalDualPoint>), Failure> {
    match (&args.input, &args.generate) {
        (Some(path), _) => Ok((load_lp(path).exit(EXIT_INPUT)?, None)),
        (None, Some(text)) => {
            let (m, n, seed) = parse_generate(text).exit(EXIT_INPUT)?;
            let inst = generate_for_mode(mode, seed, m, n, args.solver.density, params.rho)
                .exit(EXIT_INPUT)?;
            let mut lp = inst.lp;
            lp.name = instance_name(m, n, seed);
            Ok((lp, inst.strict_start))
        }
        (None, None) => Err(anyhow!("one of --input or --generate is required")).exit(EXIT_INPUT),
    }
}

pub fn solve(args: &SolveArgs) -> Outcome {
    let s = &args.solver;
    let mode = mode_of(s.mode);
    let mut params = solve_params(s)?;
    let (lp, generated_start) = load_problem(args, mode, &params)?;
    let resolved = params.resolve(mode, lp.num_cols()).exit(EXIT_INPUT)?;
    params.inner.rule = variant_of(args.condition, s)
        .resolve(lp.num_cols(), resolved.nu)
        .exit(EXIT_INPUT)?;

    let started = Instant::now();
    let mut diag = Vec::new();
    let mut observer = |ctx: &StepContext<'_, '_>| {
        if args.diagnostics {
            diag.push(diagnostic_row(ctx));
        }
    };
    let result: potred::Result<SolveResult> = match mode {
        Mode::Feasible => {
            let start = match (&args.start, generated_start) {
                (Some(path), _) => load_start(path, &lp).exit(EXIT_INPUT)?,
                (None, Some(start)) => start,
                (None, None) => least_squares_start(&lp)
                    .context(
                        "no --start given and the least-squares start is not strictly feasible",
                    )
                    .exit(EXIT_INPUT)?,
            };
            run_feasible_observed(&lp, &start, &params, &mut observer)
        }
        Mode::Infeasible => run_infeasible_observed(&lp, &params, &mut observer),
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => {
            let code = solver_error_code(&e);
            return Err(Failure {
                code,
                error: e.into(),
            });
        }
    };
    let wall_ms = if s.no_timing {
        0
    } else {
        started.elapsed().as_millis() as u64
    };

    result
        .write_log_csv(create(&s.out, "iterations.csv")?)
        .exit(EXIT_PROPERTY_FAILED)?;
    let row = SummaryRow {
        instance: lp.name.clone(),
        mode,
        condition: args.condition_name().to_string(),
        kappa: resolved.kappa,
        nu: resolved.nu,
        status: result.status.to_string(),
        outer_iters: result.log.len(),
        total_cg_iters: result.total_cg_iterations(),
        final_gap: result.final_gap(),
        wall_ms,
    };
    write_summary_csv(std::slice::from_ref(&row), create(&s.out, "summary.csv")?)
        .exit(EXIT_PROPERTY_FAILED)?;
    if args.diagnostics {
        write_diagnostics(&diag, create(&s.out, "diagnostics.csv")?).exit(EXIT_PROPERTY_FAILED)?;
    }

    println!(
        "status={} iterations={} final_gap={:e} cg_iterations={} wall_ms={}",
        row.status, row.outer_iters, row.final_gap, row.total_cg_iters, row.wall_ms
    );
    for check in certify_output(&result, &lp).checks {
        println!(
            "check {} {}: {}",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            check.detail
        );
    }
    if let Some(msg) = &result.message {
        eprintln!("{msg}");
    }

    Ok(match result.status {
        SolveStatus::Optimal => EXIT_OK,
        SolveStatus::InfeasibilityCertificate => EXIT_CERTIFICATE,
        SolveStatus::IterationLimit => EXIT_ITERATION_LIMIT,
        SolveStatus::NumericalFailure => EXIT_NUMERICAL,
    })
}

impl SolveArgs {
    fn condition_name(&self) -> &'static str {
        variant_of(self.condition, &self.solver).name()
    }
}

pub fn experiment(args: &ExperimentArgs) -> Outcome {
    let s = &args.solver;
    let mode = mode_of(s.mode);
    let params = solve_params(s)?;
    let sizes = parse_sizes(&args.sizes).exit(EXIT_INPUT)?;
    let seeds = parse_seeds(&args.seeds).exit(EXIT_INPUT)?;
    let conditions: Vec<ConditionVariant> =
        args.condition.iter().map(|&c| variant_of(c, s)).collect();

    for &(m, n) in &sizes {
        if m == 0 || m >= n {
            return Err(anyhow!("size {m}x{n}: need 1 <= m < n")).exit(EXIT_INPUT);
        }
        for &kappa in &args.kappas {
            let resolved = SolveParams { kappa, ..params }
                .resolve(mode, n)
                .exit(EXIT_INPUT)?;
            for c in &conditions {
                c.resolve(n, resolved.nu).exit(EXIT_INPUT)?;
            }
        }
    }

    let cfg = ExperimentConfig {
        mode,
        sizes: sizes.clone(),
        seeds: seeds.clone(),
        kappas: args.kappas.clone(),
        conditions: conditions.clone(),
        params,
        density: s.density,
        timing: !s.no_timing,
    };
    let rows = run_experiment(&cfg);
    write_summary_csv(&rows, create(&s.out, "summary.csv")?).exit(EXIT_PROPERTY_FAILED)?;
    let failed = rows.iter().filter(|r| r.status != "optimal").count();
    println!(
        "{} cells, {} not optimal -> {}",
        rows.len(),
        failed,
        s.out.join("summary.csv").display()
    );

    if conditions
        .iter()
        .any(|c| matches!(c, ConditionVariant::Monteiro { .. }))
    {
        let ns: Vec<usize> = sizes.iter().map(|&(_, n)| n).collect();
        let mut w = create(&s.out, "thresholds.csv")?;
        let sigma = s.sigma.unwrap_or(0.5);
        let table = monteiro_thresholds(&ns, sigma, s.gamma, 1.0);
        (|| -> std::io::Result<()> {
            writeln!(w, "n,sigma,gamma,gap_per_n,threshold")?;
            for (n, t) in table {
                writeln!(w, "{n},{sigma},{},1,{t}", s.gamma)?;
            }
            w.flush()
        })()
        .exit(EXIT_PROPERTY_FAILED)?;
    }

    if args.scaling && !seeds.is_empty() && sizes.len() >= 2 {
        let kappa = args.kappas.first().copied().unwrap_or(params.kappa);
        let report =
            scaling_study(&sizes, &seeds, kappa, &params, s.density).exit(EXIT_NUMERICAL)?;
        write_scaling_csv(&report, create(&s.out, "scaling.csv")?).exit(EXIT_PROPERTY_FAILED)?;
        println!(
            "scaling slope of median iterations against nu*(phi0 - nu ln eps)/delta: {:.4}",
            report.slope
        );
    }
    Ok(EXIT_OK)
}

pub fn validate(args: &ValidateArgs) -> Outcome {
    let suites = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<potred::Result<Vec<_>>>()
            .exit(EXIT_INPUT)?
    };
    let opts = ValidateOptions {
        suites,
        seeds: args.seeds,
        samples: args.samples,
        break_lift: args.break_lift,
    };
    let report = run_validation(&opts).exit(EXIT_NUMERICAL)?;
    print!("{report}");
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_PROPERTY_FAILED
    })
}
