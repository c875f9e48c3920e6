use super::{axpy, dot};

/// Why a conjugate gradient run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStop {
    Accepted,
    MaxIterations,
    /// Nonpositive curvature or non-finite values, usually from rounding.
    Breakdown,
}

#[derive(Debug, Clone, Copy)]
pub struct CgControls {
    pub max_iters: usize,
    /// The accept predicate is evaluated every `check_every` iterations (and
    /// always at iteration 0 and at the last iteration).
    pub check_every: usize,
    /// Replace the recursively updated residual by `rhs − A·x` this often.
    pub replace_every: usize,
}

impl CgControls {
    pub fn new(max_iters: usize) -> Self {
        Self {
            max_iters,
            check_every: 1,
            replace_every: 50,
        }
    }
}

/// The current iterate as seen by the accept predicate.
#[derive(Debug, Clone, Copy)]
pub struct CgState<'a> {
    pub solution: &'a [f64],
    pub residual: &'a [f64],
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub solution: Vec<f64>,
    /// `rhs − A·solution`, recomputed explicitly before returning.
    pub residual: Vec<f64>,
    pub iterations: usize,
    pub stop: CgStop,
}

/// Preconditioned conjugate gradients started from zero.
///
/// `accept` is called on candidate iterates; before an acceptance is final the
/// residual is recomputed from the operator and the predicate re-evaluated,
/// so an accepted outcome never carries a drifted residual.
pub fn conjugate_gradients<A, P, F>(
    apply: A,
    rhs: &[f64],
    precond: P,
    mut accept: F,
    controls: &CgControls,
) -> CgOutcome
where
    A: Fn(&[f64]) -> Vec<f64>,
    P: Fn(&[f64]) -> Vec<f64>,
    F: FnMut(&CgState<'_>) -> bool,
{
    let check_every = controls.check_every.max(1);
    let replace_every = controls.replace_every.max(1);
    let explicit_residual = |x: &[f64]| -> Vec<f64> {
        let ax = apply(x);
        rhs.iter().zip(&ax).map(|(b, a)| b - a).collect()
    };

    let mut x = vec![0.0; rhs.len()];
    let mut r = rhs.to_vec();
    if accept(&CgState {
        solution: &x,
        residual: &r,
        iterations: 0,
    }) {
        return CgOutcome {
            solution: x,
            residual: r,
            iterations: 0,
            stop: CgStop::Accepted,
        };
    }

    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut k = 0;
    let stop = loop {
        if k >= controls.max_iters {
            break CgStop::MaxIterations;
        }
        if !(rz > 0.0) || !rz.is_finite() {
            break CgStop::Breakdown;
        }
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) || !pap.is_finite() {
            break CgStop::Breakdown;
        }
        let step = rz / pap;
        axpy(step, &p, &mut x);
        axpy(-step, &ap, &mut r);
        k += 1;

        let mut replaced = false;
        if k % replace_every == 0 {
            r = explicit_residual(&x);
            replaced = true;
        }
        if k % check_every == 0 || k == controls.max_iters {
            if accept(&CgState {
                solution: &x,
                residual: &r,
                iterations: k,
            }) {
                if replaced {
                    break CgStop::Accepted;
                }
                r = explicit_residual(&x);
                if accept(&CgState {
                    solution: &x,
                    residual: &r,
                    iterations: k,
                }) {
                    break CgStop::Accepted;
                }
            }
        }

        z = precond(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
        rz = rz_new;
    };

    let residual = if stop == CgStop::Accepted {
        r
    } else {
        explicit_residual(&x)
    };
    CgOutcome {
        solution: x,
        residual,
        iterations: k,
        stop,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dense_spd_solve, norm2, DenseMatrix};

    fn residual_below(tol: f64) -> impl FnMut(&CgState<'_>) -> bool {
        move |s| norm2(s.residual) <= tol
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let out = conjugate_gradients(
            |v| v.to_vec(),
            &[3.0, 4.0],
            |v| v.to_vec(),
            residual_below(1e-12),
            &CgControls::new(10),
        );
        assert_eq!(out.stop, CgStop::Accepted);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.solution, vec![3.0, 4.0]);
    }

    #[test]
    fn zero_rhs_accepts_immediately() {
        let out = conjugate_gradients(
            |v| v.to_vec(),
            &[0.0, 0.0],
            |v| v.to_vec(),
            residual_below(1e-12),
            &CgControls::new(10),
        );
        assert_eq!(out.stop, CgStop::Accepted);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.solution, vec![0.0, 0.0]);
    }

    #[test]
    fn diagonal_two_by_two_finite_termination() {
        let m = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]);
        let rhs = [2.0, 1.0];
        let out = conjugate_gradients(
            |v| m.matvec(v),
            &rhs,
            |v| v.to_vec(),
            residual_below(1e-12),
            &CgControls::new(10),
        );
        assert_eq!(out.stop, CgStop::Accepted);
        assert!(out.iterations <= 2);
        let direct = dense_spd_solve(&m, &rhs).unwrap();
        for (a, b) in out.solution.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_operator_reports_breakdown() {
        let out = conjugate_gradients(
            |v| v.iter().map(|x| -x).collect(),
            &[1.0, 1.0],
            |v| v.to_vec(),
            residual_below(1e-12),
            &CgControls::new(10),
        );
        assert_eq!(out.stop, CgStop::Breakdown);
    }

    #[test]
    fn max_iterations_returns_explicit_residual() {
        let m = DenseMatrix::from_rows(&[
            vec![4.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ]);
        let rhs = [1.0, 2.0, 3.0];
        let out = conjugate_gradients(
            |v| m.matvec(v),
            &rhs,
            |v| v.to_vec(),
            |_| false,
            &CgControls::new(1),
        );
        assert_eq!(out.stop, CgStop::MaxIterations);
        let explicit: Vec<f64> = m
            .matvec(&out.solution)
            .iter()
            .zip(&rhs)
            .map(|(a, b)| b - a)
            .collect();
        assert_eq!(explicit, out.residual);
    }
}
