//! Sparse kernels, the normal-equations operator, preconditioned conjugate
//! gradients, basis selection and the dense exact-solve oracle.

mod basis;
mod cg;
mod dense;
mod sparse;

pub use basis::{select_basis, BasisFactorization, DEFAULT_PIVOT_TOL};
pub use cg::{conjugate_gradients, CgControls, CgOutcome, CgState, CgStop};
pub use dense::{dense_spd_solve, pivoted_qr_rank, DenseCholesky, DenseMatrix, HouseholderQr};
pub use sparse::SparseMatrix;

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Applies `v ↦ A·diag(d)²·Aᵀ·v` without forming the product.
pub fn normal_apply(a: &SparseMatrix, d: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    if d.len() != a.ncols() {
        return Err(Error::Dimension(format!(
            "scaling has length {}, expected {}",
            d.len(),
            a.ncols()
        )));
    }
    if let Some(i) = d.iter().position(|&di| !(di > 0.0)) {
        return Err(Error::Domain(format!("scaling entry {i} is not positive")));
    }
    let mut t = a.matvec_transpose(v)?;
    for (ti, di) in t.iter_mut().zip(d) {
        *ti *= di * di;
    }
    a.matvec(&t)
}
