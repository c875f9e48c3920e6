//! Rank validation against singular values from an independent dense SVD.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use potred::linalg::SparseMatrix;
use potred::lp::{validate_rank, LinearProgram, RANK_TOL};

fn lp_of(rows: &[Vec<f64>]) -> LinearProgram {
    let (m, n) = (rows.len(), rows[0].len());
    LinearProgram::new(
        "r",
        SparseMatrix::from_dense(rows).unwrap(),
        vec![0.0; m],
        vec![0.0; n],
    )
    .unwrap()
}

/// Rank from the singular values of A, counted against σ_max. (Going through
/// the eigenvalues of A·Aᵀ would square the conditioning and report rounding
/// noise of order √eps·σ_max as rank.)
fn oracle_rank(rows: &[Vec<f64>]) -> usize {
    let (m, n) = (rows.len(), rows[0].len());
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let sig: Vec<f64> = a.singular_values().iter().copied().collect();
    let smax = sig.iter().cloned().fold(0.0, f64::max);
    sig.iter()
        .filter(|&&s| smax > 0.0 && s >= RANK_TOL * smax)
        .count()
}

#[test]
fn seeded_dense_3x5_is_full_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let rows: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let rep = validate_rank(&lp_of(&rows));
    assert_eq!(oracle_rank(&rows), 3);
    assert!(rep.full_rank);
    assert_eq!(rep.rank, 3);
}

#[test]
fn duplicated_row_is_deficient() {
    let rows = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
    let rep = validate_rank(&lp_of(&rows));
    assert_eq!(oracle_rank(&rows), 1);
    assert!(!rep.full_rank);
    assert_eq!(rep.rank, 1);
}

#[test]
fn random_rank_agrees_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..200 {
        let m = rng.gen_range(1..6);
        let n = m + rng.gen_range(0..5);
        let r = rng.gen_range(1..=m);
        // product of m×r and r×n factors has rank r almost surely
        let left: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let right: Vec<Vec<f64>> = (0..r)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| (0..r).map(|k| left[i][k] * right[k][j]).sum())
                    .collect()
            })
            .collect();
        let rep = validate_rank(&lp_of(&rows));
        assert_eq!(
            rep.rank,
            oracle_rank(&rows),
            "trial {trial}: {m}x{n} rank {r}"
        );
        assert_eq!(rep.full_rank, r == m);
    }
}
