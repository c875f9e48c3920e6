//! Seeded instance generators.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)`, so the same
//! arguments always produce a bit-identical instance. Matrix entries are
//! uniform in `[-1, 1]`; a sparse entry is present with probability `density`.

use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{validate_rank, LinearProgram};
use crate::error::{Error, Result};
use crate::linalg::{norm_inf, select_basis, SparseMatrix};

const MAX_RESAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalDualPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub lp: LinearProgram,
    /// A point of the strictly feasible set, when known.
    pub strict_start: Option<PrimalDualPoint>,
    /// A complementary optimal pair, when known.
    pub known_optimum: Option<PrimalDualPoint>,
    /// `max(‖x*‖∞, ‖z*‖∞)` for `known_optimum`.
    pub optimum_bound: Option<f64>,
    pub seed: u64,
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(Error::Parameter(format!(
            "need 1 <= m < n, got m={m}, n={n}"
        )));
    }
    Ok(())
}

fn nonzero_uniform(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v: f64 = rng.gen_range(-1.0..=1.0);
        if v != 0.0 {
            return v;
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> Result<SparseMatrix> {
    let mut trip = Vec::new();
    for j in 0..n {
        for i in 0..m {
            if density >= 1.0 || rng.gen_bool(density) {
                trip.push((i, j, nonzero_uniform(rng)));
            }
        }
    }
    SparseMatrix::from_triplets(m, n, &trip)
}

fn full_rank(a: &SparseMatrix) -> bool {
    let probe = LinearProgram::new("", a.clone(), vec![0.0; a.nrows()], vec![0.0; a.ncols()]);
    probe
        .map(|lp| validate_rank(&lp).full_rank)
        .unwrap_or(false)
}

/// Instance with a known strictly feasible point: `x0, z0 ∈ [0.5, 2]`,
/// `y0 ∈ [-1, 1]`, `b = A x0`, `c = Aᵀy0 + z0`.
pub fn generate_feasible_instance(
    seed: u64,
    m: usize,
    n: usize,
    density: f64,
) -> Result<GeneratedInstance> {
    check_dims(m, n)?;
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Parameter(format!("density {density} not in (0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempt = 0;
    let a = loop {
        let a = random_matrix(&mut rng, m, n, density)?;
        if full_rank(&a) {
            break a;
        }
        attempt += 1;
        if attempt >= MAX_RESAMPLES {
            return Err(Error::Generation(format!(
                "no full-rank {m}x{n} matrix at density {density} after {MAX_RESAMPLES} draws"
            )));
        }
    };
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=2.0)).collect();
    let z: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=2.0)).collect();
    let y: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let b = a.matvec(&x)?;
    let mut c = a.matvec_transpose(&y)?;
    for (ci, zi) in c.iter_mut().zip(&z) {
        *ci += zi;
    }
    let lp = LinearProgram::new(format!("feasible-m{m}-n{n}-s{seed}"), a, b, c)?;
    Ok(GeneratedInstance {
        lp,
        strict_start: Some(PrimalDualPoint { x, y, z }),
        known_optimum: None,
        optimum_bound: None,
        seed,
    })
}

/// Instance with a known complementary optimum supported on a random basis,
/// `x*_B, z*_N ∈ [1, rho_target/2]`, dense `A`.
pub fn generate_bounded_optimal_instance(
    seed: u64,
    m: usize,
    n: usize,
    rho_target: f64,
) -> Result<GeneratedInstance> {
    check_dims(m, n)?;
    if !(rho_target > 1.0) {
        return Err(Error::Parameter(format!(
            "rho_target {rho_target} must exceed 1"
        )));
    }
    // components lie in [1, ρ/2]; for ρ < 2 the floor drops to ρ/2 so the bound still holds
    let hi = rho_target / 2.0;
    let lo = hi.min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<usize> = (0..n).collect();
    cols.shuffle(&mut rng);
    let mut in_basis = vec![false; n];
    for &j in &cols[..m] {
        in_basis[j] = true;
    }

    let mut attempt = 0;
    let a = loop {
        let a = random_matrix(&mut rng, m, n, 1.0)?;
        // the B-columns must form a nonsingular block on their own
        let weights: Vec<f64> = in_basis
            .iter()
            .map(|&b| if b { 2.0 } else { 1.0 })
            .collect();
        let block_ok = select_basis(&a, &weights, 1e-8)
            .map(|f| f.basic().iter().all(|&j| in_basis[j]))
            .unwrap_or(false);
        if block_ok && full_rank(&a) {
            break a;
        }
        attempt += 1;
        if attempt >= MAX_RESAMPLES {
            return Err(Error::Generation(format!(
                "no nonsingular basis block for {m}x{n} after {MAX_RESAMPLES} draws"
            )));
        }
    };

    let mut x = vec![0.0; n];
    let mut z = vec![0.0; n];
    for j in 0..n {
        let v = if hi > lo { rng.gen_range(lo..=hi) } else { hi };
        if in_basis[j] {
            x[j] = v;
        } else {
            z[j] = v;
        }
    }
    let y: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let b = a.matvec(&x)?;
    let mut c = a.matvec_transpose(&y)?;
    for (ci, zi) in c.iter_mut().zip(&z) {
        *ci += zi;
    }
    let bound = norm_inf(&x).max(norm_inf(&z));
    let lp = LinearProgram::new(format!("bounded-m{m}-n{n}-s{seed}"), a, b, c)?;
    Ok(GeneratedInstance {
        lp,
        strict_start: None,
        known_optimum: Some(PrimalDualPoint { x, y, z }),
        optimum_bound: Some(bound),
        seed,
    })
}
