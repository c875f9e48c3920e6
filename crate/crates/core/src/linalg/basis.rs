use super::{DenseMatrix, SparseMatrix};
use crate::error::{Error, Result};

/// Relative pivot threshold used by [`select_basis`].
pub const DEFAULT_PIVOT_TOL: f64 = 1e-8;

/// LU factors of a basis `A_B` chosen by greedy maximum-weight selection.
///
/// Elimination is kept in the order columns were accepted: step `t` pivots on
/// row `pivot_rows[t]` and stores its multipliers in `lower[t]`, so that
/// `Π·E·A_B = U` with `E` the product of the elimination steps and `Π` the
/// row permutation.
#[derive(Debug, Clone)]
pub struct BasisFactorization {
    basic: Vec<usize>,
    pivot_rows: Vec<usize>,
    lower: Vec<Vec<f64>>,
    upper: DenseMatrix,
    pivot_tol: f64,
}

/// Greedy maximum-weight basis: columns are visited in decreasing `weights`
/// and accepted when their eliminated pivot is at least `pivot_tol` times the
/// column's largest entry.
pub fn select_basis(
    a: &SparseMatrix,
    weights: &[f64],
    pivot_tol: f64,
) -> Result<BasisFactorization> {
    let m = a.nrows();
    let n = a.ncols();
    if weights.len() != n {
        return Err(Error::Dimension(format!(
            "weights length {} vs {n} columns",
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::Domain("basis weights must be positive".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| weights[j].total_cmp(&weights[i]).then(i.cmp(&j)));

    let mut basic = Vec::with_capacity(m);
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(m);
    let mut pivoted = vec![false; m];
    let mut lower: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut upper = DenseMatrix::zeros(m, m);
    let mut col = vec![0.0; m];

    for &j in &order {
        if basic.len() == m {
            break;
        }
        col.iter_mut().for_each(|v| *v = 0.0);
        let mut scale = 0.0_f64;
        for (i, v) in a.col(j) {
            col[i] = v;
            scale = scale.max(v.abs());
        }
        if scale == 0.0 {
            continue;
        }
        for (t, &pr) in pivot_rows.iter().enumerate() {
            let piv = col[pr];
            if piv != 0.0 {
                for (ci, li) in col.iter_mut().zip(&lower[t]) {
                    *ci -= li * piv;
                }
            }
        }
        let best = (0..m)
            .filter(|&i| !pivoted[i])
            .max_by(|&p, &q| col[p].abs().total_cmp(&col[q].abs()));
        let Some(pr) = best else { break };
        let pivot = col[pr];
        if pivot.abs() < pivot_tol * scale {
            continue;
        }
        let k = basic.len();
        for (t, &r) in pivot_rows.iter().enumerate() {
            upper[(t, k)] = col[r];
        }
        upper[(k, k)] = pivot;
        let mut mult = vec![0.0; m];
        for i in 0..m {
            if !pivoted[i] && i != pr {
                mult[i] = col[i] / pivot;
            }
        }
        pivoted[pr] = true;
        pivot_rows.push(pr);
        lower.push(mult);
        basic.push(j);
    }

    if basic.len() < m {
        return Err(Error::Rank(format!(
            "only {} of {m} independent columns found",
            basic.len()
        )));
    }
    Ok(BasisFactorization {
        basic,
        pivot_rows,
        lower,
        upper,
        pivot_tol,
    })
}

impl BasisFactorization {
    /// Basic column indices, in the order they were accepted.
    pub fn basic(&self) -> &[usize] {
        &self.basic
    }

    pub fn pivot_tol(&self) -> f64 {
        self.pivot_tol
    }

    /// Diagonal of `U`.
    pub fn pivots(&self) -> Vec<f64> {
        (0..self.basic.len()).map(|k| self.upper[(k, k)]).collect()
    }

    pub fn dim(&self) -> usize {
        self.basic.len()
    }

    /// Solves `A_B·t_B = s`; entry `k` of the result belongs to column `basic()[k]`.
    pub fn solve(&self, s: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let mut v = s.to_vec();
        for (t, &pr) in self.pivot_rows.iter().enumerate() {
            let piv = v[pr];
            if piv != 0.0 {
                for (vi, li) in v.iter_mut().zip(&self.lower[t]) {
                    *vi -= li * piv;
                }
            }
        }
        let mut x: Vec<f64> = self.pivot_rows.iter().map(|&pr| v[pr]).collect();
        for k in (0..m).rev() {
            let mut acc = x[k];
            for j in k + 1..m {
                acc -= self.upper[(k, j)] * x[j];
            }
            x[k] = acc / self.upper[(k, k)];
        }
        x
    }

    /// Solves `A_Bᵀ·v = c` where `c[k]` belongs to column `basic()[k]`.
    pub fn solve_transpose(&self, c: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let mut h = c.to_vec();
        for k in 0..m {
            let mut acc = h[k];
            for t in 0..k {
                acc -= self.upper[(t, k)] * h[t];
            }
            h[k] = acc / self.upper[(k, k)];
        }
        let mut v = vec![0.0; m];
        for (t, &pr) in self.pivot_rows.iter().enumerate() {
            v[pr] = h[t];
        }
        for t in (0..m).rev() {
            let pr = self.pivot_rows[t];
            let s: f64 = self.lower[t].iter().zip(&v).map(|(l, x)| l * x).sum();
            v[pr] -= s;
        }
        v
    }

    /// Full-length vector `t` supported on the basic columns with `A·t = s`.
    pub fn lift(&self, s: &[f64], ncols: usize) -> Vec<f64> {
        let tb = self.solve(s);
        let mut t = vec![0.0; ncols];
        for (&j, v) in self.basic.iter().zip(tb) {
            t[j] = v;
        }
        t
    }
}
