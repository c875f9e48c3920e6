use super::{SolveResult, SolveStatus};
use crate::linalg::norm2;
use crate::lp::LinearProgram;
use crate::newton::Mode;

/// Slack on the logged potential decrease.
const DECREASE_SLACK: f64 = 1e-10;
/// Absolute tolerance on `‖A xᵏ − b‖ / ‖A x⁰ − b‖ = θᵏ`.
const THETA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyReport {
    pub checks: Vec<CertifyCheck>,
}

impl CertifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CertifyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Re-checks a finished run against the explicit guarantees: the per-iteration
/// potential decrease, the iteration bound, and in infeasible mode the θ
/// recursion and the final residual bound.
pub fn certify_output(result: &SolveResult, lp: &LinearProgram) -> CertifyReport {
    let delta = result.params.delta;
    let mut checks = Vec::new();

    let worst = result.log.iter().map(|r| (r.k, r.delta_achieved)).fold(
        None::<(usize, f64)>,
        |acc, cur| match acc {
            Some(a) if a.1 <= cur.1 => Some(a),
            _ => Some(cur),
        },
    );
    checks.push(CertifyCheck {
        name: "potential-decrease",
        passed: worst.map_or(true, |(_, d)| d >= delta - DECREASE_SLACK),
        detail: match worst {
            Some((k, d)) => format!("smallest decrease {d:.6e} at k={k}, delta {delta:.6e}"),
            None => "no iterations".into(),
        },
    });

    checks.push(CertifyCheck {
        name: "iteration-bound",
        passed: result.log.len() <= result.iteration_bound,
        detail: format!(
            "{} iterations, bound {}",
            result.log.len(),
            result.iteration_bound
        ),
    });

    if result.params.mode == Mode::Infeasible {
        let (rp0, rd0) = result.initial_residuals;
        let mut worst_theta: f64 = 0.0;
        for rec in &result.log {
            for (now, base) in [(rec.primal_residual, rp0), (rec.dual_residual, rd0)] {
                if base > 0.0 {
                    worst_theta = worst_theta.max((now / base - rec.theta).abs());
                }
            }
        }
        checks.push(CertifyCheck {
            name: "theta-consistency",
            passed: worst_theta <= THETA_TOL,
            detail: format!("max deviation {worst_theta:.3e}"),
        });

        if result.status == SolveStatus::Optimal {
            let it = &result.iterate;
            let rp = lp
                .primal_residual(&it.x)
                .map(|v| norm2(&v))
                .unwrap_or(f64::INFINITY);
            let rd = lp
                .dual_residual(&it.y, &it.z)
                .map(|v| norm2(&v))
                .unwrap_or(f64::INFINITY);
            let scale = result.params.epsilon / result.gap0;
            let (bp, bd) = (scale * rp0, scale * rd0);
            // Rounding in forming A x and Aᵀy + z sets a floor below which
            // the residual cannot be resolved.
            let floor_p = 1e-13 * (1.0 + norm2(lp.b()));
            let floor_d = 1e-13 * (1.0 + norm2(lp.c()));
            checks.push(CertifyCheck {
                name: "final-residual",
                passed: rp <= bp + floor_p && rd <= bd + floor_d,
                detail: format!("primal {rp:.3e} <= {bp:.3e}, dual {rd:.3e} <= {bd:.3e}"),
            });
        }
    }

    CertifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipm::{run_feasible, SolveParams};
    use crate::linalg::SparseMatrix;
    use crate::lp::PrimalDualPoint;

    fn e1_run() -> (LinearProgram, SolveResult) {
        let a = SparseMatrix::from_dense(&[vec![1.0, 1.0]]).unwrap();
        let lp = LinearProgram::new("e1", a, vec![2.0], vec![1.0, 1.0]).unwrap();
        let start = PrimalDualPoint {
            x: vec![1.0, 1.0],
            y: vec![0.0],
            z: vec![1.0, 1.0],
        };
        let res = run_feasible(
            &lp,
            &start,
            &SolveParams {
                kappa: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        (lp, res)
    }

    #[test]
    fn passing_run_certifies() {
        let (lp, res) = e1_run();
        let rep = certify_output(&res, &lp);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.get("iteration-bound").unwrap().passed);
    }

    #[test]
    fn edited_decrease_is_caught() {
        let (lp, mut res) = e1_run();
        res.log[0].delta_achieved = 0.1;
        let rep = certify_output(&res, &lp);
        assert!(!rep.get("potential-decrease").unwrap().passed);
        assert!(rep.get("iteration-bound").unwrap().passed);
    }
}
