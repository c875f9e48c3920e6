use crate::error::{Error, Result};

/// Compressed-column sparse matrix.
///
/// Row indices within a column are strictly increasing and no explicit zeros
/// are stored. A compressed-row mirror can be built with [`SparseMatrix::transpose`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw compressed-column arrays, validating structure.
    pub fn from_csc(
        nrows: usize,
        ncols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if col_ptr.len() != ncols + 1 {
            return Err(Error::InvalidMatrix(format!(
                "column pointer has length {}, expected {}",
                col_ptr.len(),
                ncols + 1
            )));
        }
        if col_ptr[0] != 0 || *col_ptr.last().unwrap() != row_idx.len() {
            return Err(Error::InvalidMatrix("column pointer bounds".into()));
        }
        if row_idx.len() != values.len() {
            return Err(Error::InvalidMatrix("index/value length mismatch".into()));
        }
        for j in 0..ncols {
            let (lo, hi) = (col_ptr[j], col_ptr[j + 1]);
            if lo > hi {
                return Err(Error::InvalidMatrix(format!(
                    "column {j}: decreasing offsets"
                )));
            }
            for k in lo..hi {
                if row_idx[k] >= nrows {
                    return Err(Error::InvalidMatrix(format!(
                        "column {j}: row index {} out of range",
                        row_idx[k]
                    )));
                }
                if k > lo && row_idx[k] <= row_idx[k - 1] {
                    return Err(Error::InvalidMatrix(format!(
                        "column {j}: row indices not strictly increasing"
                    )));
                }
                if values[k] == 0.0 {
                    return Err(Error::InvalidMatrix(format!("column {j}: explicit zero")));
                }
                if !values[k].is_finite() {
                    return Err(Error::InvalidMatrix(format!(
                        "column {j}: non-finite value"
                    )));
                }
            }
        }
        Ok(Self {
            nrows,
            ncols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets. Zeros are dropped,
    /// duplicate positions are rejected.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) outside {nrows}x{ncols}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) is not finite"
                )));
            }
            if v != 0.0 {
                entries.push((i, j, v));
            }
        }
        entries.sort_by_key(|&(i, j, _)| (j, i));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate entry ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut col_ptr = vec![0; ncols + 1];
        for &(_, j, _) in &entries {
            col_ptr[j + 1] += 1;
        }
        for j in 0..ncols {
            col_ptr[j + 1] += col_ptr[j];
        }
        let row_idx = entries.iter().map(|e| e.0).collect();
        let values = entries.iter().map(|e| e.2).collect();
        Self::from_csc(nrows, ncols, col_ptr, row_idx, values)
    }

    /// Builds a matrix from dense rows (mainly for tests and small examples).
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut trip = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::InvalidMatrix("ragged dense rows".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                trip.push((i, j, v));
            }
        }
        Self::from_triplets(nrows, ncols, &trip)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterates the `(row, value)` pairs of column `j`.
    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (lo, hi) = (self.col_ptr[j], self.col_ptr[j + 1]);
        self.row_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// Iterates all entries as `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.ncols).flat_map(move |j| self.col(j).map(move |(i, v)| (i, j, v)))
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.ncols {
            return Err(Error::Dimension(format!(
                "matvec: vector length {} vs {} columns",
                v.len(),
                self.ncols
            )));
        }
        let mut out = vec![0.0; self.nrows];
        for (j, &vj) in v.iter().enumerate() {
            if vj != 0.0 {
                for (i, a) in self.col(j) {
                    out[i] += a * vj;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.nrows {
            return Err(Error::Dimension(format!(
                "matvec_transpose: vector length {} vs {} rows",
                v.len(),
                self.nrows
            )));
        }
        Ok((0..self.ncols)
            .map(|j| self.col(j).map(|(i, a)| a * v[i]).sum())
            .collect())
    }

    /// Compressed-column form of the transpose, i.e. the compressed-row mirror.
    pub fn transpose(&self) -> SparseMatrix {
        let mut col_ptr = vec![0; self.nrows + 1];
        for &i in &self.row_idx {
            col_ptr[i + 1] += 1;
        }
        for i in 0..self.nrows {
            col_ptr[i + 1] += col_ptr[i];
        }
        let mut next = col_ptr.clone();
        let mut row_idx = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for j in 0..self.ncols {
            for (i, a) in self.col(j) {
                let k = next[i];
                row_idx[k] = j;
                values[k] = a;
                next[i] += 1;
            }
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            col_ptr,
            row_idx,
            values,
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v;
        }
        out
    }

    /// Dense copy of the columns listed in `cols`, column order preserved.
    pub fn dense_columns(&self, cols: &[usize]) -> Vec<Vec<f64>> {
        cols.iter()
            .map(|&j| {
                let mut c = vec![0.0; self.nrows];
                for (i, v) in self.col(j) {
                    c[i] = v;
                }
                c
            })
            .collect()
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}
