//! Deterministic random generators for experiment batches: nonsingular
//! integer matrices with bounded entries, and unimodular matrices built from
//! elementary operations so their eigenbases stay well conditioned.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::algebra::IntMatrix;

/// Uniform entries in `[-entry_bound, entry_bound]`, rejection-sampled until
/// the determinant is nonzero.
pub fn random_nonsingular_matrix(
    n: usize,
    entry_bound: i64,
    rng: &mut impl Rng,
) -> IntMatrix {
    loop {
        let entries: Vec<i64> = (0..n * n)
            .map(|_| rng.gen_range(-entry_bound..=entry_bound))
            .collect();
        let m = IntMatrix::from_fn(n, |i, j| BigInt::from(entries[i * n + j]));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random element of `GL_n(Z)`: a product of row swaps, sign flips, and
/// unit shear operations. Entries are kept within `entry_cap` by skipping
/// any step that would overflow it, which also keeps the spectral data
/// moderate.
pub fn random_unimodular_matrix(
    n: usize,
    steps: usize,
    entry_cap: i64,
    rng: &mut impl Rng,
) -> IntMatrix {
    assert!(n >= 1);
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut applied = 0;
    let mut attempts = 0;
    while applied < steps && attempts < steps * 20 {
        attempts += 1;
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i != j {
                    rows.swap(i, j);
                    applied += 1;
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                for e in &mut rows[i] {
                    *e = -*e;
                }
                applied += 1;
            }
            _ => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i == j {
                    continue;
                }
                let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
                let candidate: Vec<i64> = (0..n)
                    .map(|k| rows[i][k] + sign * rows[j][k])
                    .collect();
                if candidate.iter().all(|e| e.abs() <= entry_cap) {
                    rows[i] = candidate;
                    applied += 1;
                }
            }
        }
    }
    IntMatrix::from_fn(n, |i, j| BigInt::from(rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nonsingular_matrices_have_nonzero_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let m = random_nonsingular_matrix(4, 2, &mut rng);
            assert!(!m.det().is_zero());
            assert!(m.rows().all(|r| r.iter().all(|e| e.abs() <= BigInt::from(2))));
        }
    }

    #[test]
    fn unimodular_matrices_have_unit_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let m = random_unimodular_matrix(3, 8, 10, &mut rng);
            assert_eq!(m.det().abs(), BigInt::from(1));
        }
    }
}
