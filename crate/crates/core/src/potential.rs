//! The primal-dual potential
//! `φ(x,z) = (n+ν)·ln(xᵀz) − Σ ln(xᵢzᵢ) − n·ln n`,
//! its quadratic upper bound along a direction, and the centrality norm bound.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};

/// Products `xᵢzᵢ` below this are treated as a loss of interiority.
pub const MIN_PRODUCT: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    pub phi: f64,
    pub gap: f64,
    pub barrier_sum: f64,
    pub nu: f64,
}

pub fn phi(x: &[f64], z: &[f64], nu: f64) -> Result<PotentialValue> {
    if x.len() != z.len() {
        return Err(Error::Dimension("x and z lengths differ".into()));
    }
    let n = x.len() as f64;
    let mut barrier_sum = 0.0;
    let mut gap = 0.0;
    for (i, (&xi, &zi)) in x.iter().zip(z).enumerate() {
        if !(xi > 0.0 && zi > 0.0) {
            return Err(Error::Domain(format!("component {i} is not positive")));
        }
        let p = xi * zi;
        if p < MIN_PRODUCT {
            return Err(Error::Domain(format!(
                "product x_{i}·z_{i} = {p:e} underflows"
            )));
        }
        barrier_sum += p.ln();
        gap += p;
    }
    let phi = (n + nu) * gap.ln() - barrier_sum - n * n.ln();
    Ok(PotentialValue {
        phi,
        gap,
        barrier_sum,
        nu,
    })
}

/// Coefficients of `φ(x+αdx, z+αdz) ≤ φ(x,z) + g1·α + g2·α²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticBound {
    pub g1: f64,
    pub g2: f64,
    pub tau: f64,
    pub alpha: f64,
    /// Whether `‖αX⁻¹dx‖∞ ≤ τ` and `‖αZ⁻¹dz‖∞ ≤ τ`, the bound's hypothesis.
    pub valid: bool,
}

impl QuadraticBound {
    pub fn predicted_change(&self) -> f64 {
        self.g1 * self.alpha + self.g2 * self.alpha * self.alpha
    }
}

pub fn quadratic_coeffs(
    x: &[f64],
    z: &[f64],
    dx: &[f64],
    dz: &[f64],
    nu: f64,
    tau: f64,
    alpha: f64,
) -> Result<QuadraticBound> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Parameter(format!("tau {tau} not in (0, 1)")));
    }
    let n = x.len();
    if z.len() != n || dx.len() != n || dz.len() != n {
        return Err(Error::Dimension("vector lengths differ".into()));
    }
    if x.iter().chain(z).any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("x and z must be positive".into()));
    }
    let gap = dot(x, z);
    let scale = (n as f64 + nu) / gap;
    let mut g1 = 0.0;
    let mut sx = 0.0;
    let mut sz = 0.0;
    let mut worst = 0.0_f64;
    for i in 0..n {
        g1 += (scale - 1.0 / (x[i] * z[i])) * (z[i] * dx[i] + x[i] * dz[i]);
        let rx = dx[i] / x[i];
        let rz = dz[i] / z[i];
        sx += rx * rx;
        sz += rz * rz;
        worst = worst.max(rx.abs()).max(rz.abs());
    }
    let g2 = scale * dot(dx, dz) + (sx + sz) / (2.0 * (1.0 - tau));
    Ok(QuadraticBound {
        g1,
        g2,
        tau,
        alpha,
        valid: alpha.abs() * worst <= tau,
    })
}

/// Both sides of `‖W⁻¹e − (n+ν)/(wᵀw)·w‖ ≥ √3/(2·w_min)`, valid for `ν ≥ √n`.
pub fn wbound_gap(w: &[f64], nu: f64) -> Result<(f64, f64)> {
    let n = w.len() as f64;
    if nu < n.sqrt() {
        return Err(Error::Parameter(format!(
            "nu {nu} below sqrt(n) = {}",
            n.sqrt()
        )));
    }
    if w.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("w must be positive".into()));
    }
    let scale = (n + nu) / dot(w, w);
    let diff: Vec<f64> = w.iter().map(|&wi| 1.0 / wi - scale * wi).collect();
    let wmin = w.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((norm2(&diff), 3.0_f64.sqrt() / (2.0 * wmin)))
}
