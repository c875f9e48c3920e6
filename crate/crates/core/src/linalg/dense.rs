use crate::error::{Error, Result};

/// Row-major dense matrix used by the oracle paths.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            data: vec![0.0; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { nrows, ncols, data }
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.nrows)
            .map(|i| {
                self.data[i * self.ncols..(i + 1) * self.ncols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.ncols + j]
    }
}

/// Lower Cholesky factor `L` with `M = L·Lᵀ`.
#[derive(Debug, Clone)]
pub struct DenseCholesky {
    l: DenseMatrix,
}

impl DenseCholesky {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        let n = m.nrows;
        if m.ncols != n {
            return Err(Error::Dimension(format!(
                "{}x{} is not square",
                m.nrows, m.ncols
            )));
        }
        let scale = m.data.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::Domain(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut diag = m[(j, j)];
            for k in 0..j {
                diag -= l[(j, k)] * l[(j, k)];
            }
            if !(diag > 0.0) {
                return Err(Error::NotPositiveDefinite {
                    index: j,
                    pivot: diag,
                });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = ljj;
            for i in j + 1..n {
                let mut s = m[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.l.nrows;
        let l = &self.l;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= l[(k, i)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        y
    }
}

/// Solves a symmetric positive definite system by Cholesky factorization.
pub fn dense_spd_solve(m: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.nrows {
        return Err(Error::Dimension(format!(
            "rhs length {} vs {}",
            rhs.len(),
            m.nrows
        )));
    }
    Ok(DenseCholesky::factor(m)?.solve(rhs))
}

/// Thin Householder QR of a tall `n × m` matrix (`n ≥ m`, full column rank),
/// given by its columns. The reflectors are kept, so `Q` is orthonormal to
/// working precision whatever the conditioning of the matrix.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    n: usize,
    /// Reflector `k` acts on entries `k..n`: `H = I − 2·v·vᵀ/(vᵀv)`.
    reflectors: Vec<Vec<f64>>,
    r: DenseMatrix,
}

impl HouseholderQr {
    pub fn factor(mut cols: Vec<Vec<f64>>) -> Result<Self> {
        let m = cols.len();
        let n = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != n) || n < m {
            return Err(Error::Dimension(format!(
                "QR needs a tall matrix with equal columns, got {n}x{m}"
            )));
        }
        let mut reflectors = Vec::with_capacity(m);
        let mut r = DenseMatrix::zeros(m, m);
        for k in 0..m {
            let alpha = cols[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if alpha == 0.0 {
                return Err(Error::Rank(format!(
                    "column {k} is dependent on the previous ones"
                )));
            }
            let beta = if cols[k][k] >= 0.0 { -alpha } else { alpha };
            let mut v = cols[k][k..].to_vec();
            v[0] -= beta;
            let vnorm2: f64 = v.iter().map(|t| t * t).sum();
            for col in cols.iter_mut().skip(k) {
                let s: f64 = v.iter().zip(&col[k..]).map(|(a, b)| a * b).sum();
                let f = 2.0 * s / vnorm2;
                for (ci, vi) in col[k..].iter_mut().zip(&v) {
                    *ci -= f * vi;
                }
            }
            for (j, col) in cols.iter().enumerate().skip(k) {
                r[(k, j)] = col[k];
            }
            r[(k, k)] = beta;
            reflectors.push(v);
        }
        Ok(Self { n, reflectors, r })
    }

    fn reflect(&self, k: usize, x: &mut [f64]) {
        let v = &self.reflectors[k];
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        let s: f64 = v.iter().zip(&x[k..]).map(|(a, b)| a * b).sum();
        let f = 2.0 * s / vnorm2;
        for (xi, vi) in x[k..].iter_mut().zip(v) {
            *xi -= f * vi;
        }
    }

    /// `Qᵀ·v` with the full orthogonal `Q`.
    pub fn apply_qt(&self, v: &[f64]) -> Vec<f64> {
        let mut x = v.to_vec();
        for k in 0..self.reflectors.len() {
            self.reflect(k, &mut x);
        }
        x
    }

    /// `Q·v` with the full orthogonal `Q`.
    pub fn apply_q(&self, v: &[f64]) -> Vec<f64> {
        let mut x = v.to_vec();
        for k in (0..self.reflectors.len()).rev() {
            self.reflect(k, &mut x);
        }
        x
    }

    /// Orthogonal projection onto the column space.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut t = self.apply_qt(v);
        t[self.reflectors.len()..].iter_mut().for_each(|x| *x = 0.0);
        self.apply_q(&t)
    }

    /// `M·(Mᵀ M)⁻¹·p` for the factored matrix `M`, i.e. `Q·R⁻ᵀ·p`.
    pub fn range_lift(&self, p: &[f64]) -> Vec<f64> {
        let mut t = self.solve_rt(p);
        t.resize(self.n, 0.0);
        self.apply_q(&t)
    }

    /// `(MᵀM)⁻¹·rhs = R⁻¹·R⁻ᵀ·rhs`.
    pub fn solve_normal(&self, rhs: &[f64]) -> Vec<f64> {
        let t = self.solve_rt(rhs);
        self.solve_r(&t)
    }

    fn solve_rt(&self, b: &[f64]) -> Vec<f64> {
        let m = self.reflectors.len();
        let mut y = b.to_vec();
        for i in 0..m {
            let mut s = y[i];
            for k in 0..i {
                s -= self.r[(k, i)] * y[k];
            }
            y[i] = s / self.r[(i, i)];
        }
        y
    }

    fn solve_r(&self, b: &[f64]) -> Vec<f64> {
        let m = self.reflectors.len();
        let mut y = b.to_vec();
        for i in (0..m).rev() {
            let mut s = y[i];
            for k in i + 1..m {
                s -= self.r[(i, k)] * y[k];
            }
            y[i] = s / self.r[(i, i)];
        }
        y
    }
}

/// Numerical rank of a dense `rows.len() × ncols` matrix by Householder QR with
/// column pivoting. Returns `(rank, smallest accepted pivot ratio)`; a pivot is
/// accepted while `|R_kk| / |R_00| ≥ tol`.
pub fn pivoted_qr_rank(rows: &[Vec<f64>], tol: f64) -> (usize, f64) {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    // column-major working copy
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let mut norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|v| v * v).sum()).collect();
    let steps = m.min(n);
    let mut r00 = 0.0;
    let mut rank = 0;
    let mut min_ratio = if steps == 0 { 0.0 } else { 1.0 };
    for k in 0..steps {
        // recompute trailing norms exactly; desk scale, avoids downdating drift
        for j in k..n {
            norms[j] = cols[j][k..].iter().map(|v| v * v).sum();
        }
        let p = (k..n)
            .max_by(|&a, &b| norms[a].total_cmp(&norms[b]))
            .unwrap();
        cols.swap(k, p);
        norms.swap(k, p);
        let alpha = norms[k].sqrt();
        if k == 0 {
            r00 = alpha;
            if r00 == 0.0 {
                return (0, 0.0);
            }
        }
        let ratio = alpha / r00;
        if ratio < tol {
            break;
        }
        rank += 1;
        min_ratio = ratio;
        // Householder reflector annihilating cols[k][k+1..]
        let x0 = cols[k][k];
        let beta = if x0 >= 0.0 { -alpha } else { alpha };
        let mut v: Vec<f64> = cols[k][k..].to_vec();
        v[0] -= beta;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in cols.iter_mut().skip(k) {
            let s: f64 = v.iter().zip(&col[k..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * s / vnorm2;
            for (ci, vi) in col[k..].iter_mut().zip(&v) {
                *ci -= f * vi;
            }
        }
    }
    (rank, min_ratio)
}
