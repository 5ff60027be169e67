//! Zariski-closure interpolation: exact kernel dimension of the evaluation
//! pairing between degree-`d` monomials and a point set.
//!
//! A zero kernel for all tested degrees is evidence (never proof) that no
//! hypersurface of those degrees contains the points. Rank is computed
//! modulo large primes first — full column rank modulo any prime already
//! certifies full rank over the rationals — with exact fraction-free
//! elimination as the fallback for the deficient case.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::maps::ProjPointQ;

use super::OrbitsError;

/// Kernel data of the degree-`d` evaluation pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterpolationReport {
    pub degree: u32,
    pub monomial_count: usize,
    pub point_count: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Fewer points than monomials: a zero kernel was impossible a priori.
    pub underdetermined: bool,
}

/// Exact kernel dimension of the space of degree-`d` forms vanishing on all
/// points. Kernel dimension is monotone nonincreasing as points are added.
pub fn orbit_zariski_test(
    points: &[ProjPointQ],
    degree: u32,
) -> Result<InterpolationReport, OrbitsError> {
    if degree == 0 {
        return Err(OrbitsError::DegreeZero);
    }
    let first = points.first().ok_or(OrbitsError::NoPoints)?;
    let nvars = first.coords().len();
    assert!(
        points.iter().all(|p| p.coords().len() == nvars),
        "mixed ambient dimensions"
    );
    let monomials = degree_monomials(nvars, degree);
    let matrix: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| evaluate_monomials(p, &monomials, degree))
        .collect();
    let rank = exact_rank(&matrix, monomials.len());
    Ok(InterpolationReport {
        degree,
        monomial_count: monomials.len(),
        point_count: points.len(),
        rank,
        kernel_dim: monomials.len() - rank,
        underdetermined: points.len() < monomials.len(),
    })
}

/// Exponent vectors of total degree `d` in `nvars` variables, lexicographic.
pub fn degree_monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    (0..nvars)
        .combinations_with_replacement(degree as usize)
        .map(|vars| {
            let mut exps = vec![0u32; nvars];
            for v in vars {
                exps[v] += 1;
            }
            exps
        })
        .collect()
}

fn evaluate_monomials(p: &ProjPointQ, monomials: &[Vec<u32>], degree: u32) -> Vec<BigInt> {
    let coords = p.coords();
    // cache coordinate powers up to the degree
    let powers: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|c| {
            let mut row = Vec::with_capacity(degree as usize + 1);
            row.push(BigInt::from(1));
            for _ in 0..degree {
                let next = row.last().unwrap() * c;
                row.push(next);
            }
            row
        })
        .collect();
    monomials
        .iter()
        .map(|exps| {
            let mut acc = BigInt::from(1);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    acc *= &powers[i][e as usize];
                }
            }
            acc
        })
        .collect()
}

// large primes for the modular rank certificate
const RANK_PRIMES: [u64; 3] = [
    (1 << 61) - 1,
    9_223_372_036_854_775_783, // largest prime below 2^63
    4_611_686_018_427_387_847, // largest prime below 2^62
];

fn exact_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    for &p in &RANK_PRIMES {
        let r = rank_mod_p(rows, cols, p);
        if r == cols.min(rows.len()) {
            // rank modulo a prime never exceeds the rational rank
            return r;
        }
    }
    rank_exact_rational(rows, cols)
}

fn rank_mod_p(rows: &[Vec<BigInt>], cols: usize, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let r = ((e % &pb) + &pb) % &pb;
                    r.to_u64_digits().1.first().copied().unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let powmod = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..m.len()).find(|&r| m[r][col] != 0);
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let inv = powmod(m[rank][col], p - 2);
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = mulmod(m[r][col], inv);
                for c in col..cols {
                    let sub = mulmod(factor, m[rank][c]);
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Exact rational rank by Bareiss fraction-free elimination; the division by
/// the previous pivot is exact (entries stay minors of the input).
fn rank_exact_rational(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let head = m[rank].clone();
        for r in rank + 1..m.len() {
            for c in col + 1..cols {
                let num = &m[r][c] * &head[col] - &head[c] * &m[r][col];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = head[col].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
