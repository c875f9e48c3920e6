//! Standard-form LP data, file formats and seeded instance generators.

mod generate;
mod mps;
mod triplet;

pub use generate::{
    generate_bounded_optimal_instance, generate_feasible_instance, GeneratedInstance,
    PrimalDualPoint,
};
pub use mps::{parse_mps, write_mps};
pub use triplet::{parse_triplet, write_triplet};

use crate::error::{Error, Result};
use crate::linalg::{pivoted_qr_rank, SparseMatrix};

/// Pivot ratio below which a matrix is declared rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// `minimize cᵀx  s.t.  A x = b, x ≥ 0` and its dual
/// `maximize bᵀy  s.t.  Aᵀy + z = c, z ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub name: String,
    a: SparseMatrix,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl LinearProgram {
    pub fn new(name: impl Into<String>, a: SparseMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if b.len() != a.nrows() || c.len() != a.ncols() {
            return Err(Error::Dimension(format!(
                "A is {}x{} but b has {} and c has {} entries",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        if a.nrows() > a.ncols() {
            return Err(Error::Dimension(format!(
                "more rows ({}) than columns ({})",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.iter().chain(&c).any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("b and c must be finite".into()));
        }
        Ok(Self {
            name: name.into(),
            a,
            b,
            c,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn a(&self) -> &SparseMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// `A x − b`
    pub fn primal_residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.a.matvec(x)?;
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        Ok(r)
    }

    /// `Aᵀy + z − c`
    pub fn dual_residual(&self, y: &[f64], z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.num_cols() {
            return Err(Error::Dimension("z length".into()));
        }
        let mut r = self.a.matvec_transpose(y)?;
        for ((ri, zi), ci) in r.iter_mut().zip(z).zip(&self.c) {
            *ri += zi - ci;
        }
        Ok(r)
    }
}

/// Outcome of [`validate_rank`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    pub full_rank: bool,
    pub rank: usize,
    /// Smallest accepted `|R_kk| / |R_00|` of the pivoted QR factorization.
    pub pivot_ratio: f64,
}

/// Numerical row rank of `A` by column-pivoted Householder QR.
pub fn validate_rank(lp: &LinearProgram) -> RankReport {
    let (rank, pivot_ratio) = pivoted_qr_rank(&lp.a.to_dense(), RANK_TOL);
    RankReport {
        full_rank: rank == lp.num_rows(),
        rank,
        pivot_ratio,
    }
}
