//! Randomized property tests for the algebraic substrate and the map
//! pipelines.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitlab::algebra::poly::poly_gcd;
use orbitlab::algebra::spectral::spectral_radius;
use orbitlab::algebra::IntMatrix;
use orbitlab::maps::MonomialMap;
use orbitlab::sampling::{random_nonsingular_matrix, random_unimodular_matrix};
use orbitlab::MultiPoly;

/// Random homogeneous polynomial in `nvars` variables of the given degree.
fn homogeneous_poly(nvars: usize, degree: u32) -> impl Strategy<Value = MultiPoly> {
    let exps = prop::collection::vec(0..=degree, nvars - 1);
    prop::collection::vec((exps, -4i64..=4), 1..6).prop_map(move |terms| {
        MultiPoly::from_terms(
            nvars,
            terms.into_iter().filter_map(|(partial, coeff)| {
                let used: u32 = partial.iter().sum();
                if used > degree {
                    return None;
                }
                let mut exps = partial;
                exps.push(degree - used);
                Some((exps, BigInt::from(coeff)))
            }),
        )
    })
}

fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * n)
        .prop_map(move |entries| IntMatrix::from_fn(n, |i, j| BigInt::from(entries[i * n + j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_divides_both_inputs(
        p in homogeneous_poly(3, 4),
        q in homogeneous_poly(3, 3),
        common in homogeneous_poly(3, 2),
    ) {
        let a = p.mul(&common);
        let b = q.mul(&common);
        let g = poly_gcd(&a, &b);
        if a.is_zero() && b.is_zero() {
            prop_assert!(g.is_zero());
        } else {
            prop_assert!(!g.is_zero());
            prop_assert!(a.div_exact(&g).is_some());
            prop_assert!(b.div_exact(&g).is_some());
            if !a.is_zero() && !b.is_zero() && !common.is_zero() {
                // the planted factor must divide the gcd
                prop_assert!(g.div_exact(&common.primitive_part().normalize_sign()).is_some());
            }
            prop_assert!(g.leading_coeff() > BigInt::zero());
        }
    }

    #[test]
    fn compose_is_associative(
        p in homogeneous_poly(2, 3),
        f0 in homogeneous_poly(2, 2),
        f1 in homogeneous_poly(2, 2),
        g0 in homogeneous_poly(2, 2),
        g1 in homogeneous_poly(2, 2),
    ) {
        let f = [f0, f1];
        let g = [g0, g1];
        let lhs = p.compose(&f).unwrap().compose(&g).unwrap();
        let fg: Vec<MultiPoly> = f.iter().map(|c| c.compose(&g).unwrap()).collect();
        let rhs = p.compose(&fg).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exterior_power_is_multiplicative(
        a in small_matrix(4),
        b in small_matrix(4),
    ) {
        for i in 0..=4usize {
            let lhs = a.mul(&b).exterior_power(i).unwrap();
            let rhs = a.exterior_power(i).unwrap().mul(&b.exterior_power(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degrees_in_compose_multiply(
        p in homogeneous_poly(2, 3),
        s0 in homogeneous_poly(2, 2),
        s1 in homogeneous_poly(2, 2),
    ) {
        let c = p.compose(&[s0, s1]).unwrap();
        if !c.is_zero() {
            prop_assert_eq!(c.homogeneous_degree(), Some(6));
        }
    }
}

#[test]
fn spectral_interval_contains_known_spectra() {
    // permutation, diagonal, companion of t^2 - 3t + 1
    let cases: Vec<(IntMatrix, f64)> = vec![
        (
            IntMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]),
            1.0,
        ),
        (IntMatrix::from_i64_rows(&[&[5, 0], &[0, -3]]), 5.0),
        (
            IntMatrix::from_i64_rows(&[&[3, -1], &[1, 0]]),
            (3.0 + 5.0f64.sqrt()) / 2.0,
        ),
    ];
    for (m, expect) in cases {
        let interval = spectral_radius(&m, 1e-10);
        assert!(
            interval.lower <= expect && expect <= interval.upper,
            "{} not in [{}, {}]",
            expect,
            interval.lower,
            interval.upper
        );
    }
}

#[test]
fn monomial_pipelines_commute() {
    // homogenize(A·B) = homogenize(A) ∘ homogenize(B) as reduced maps
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [2usize, 3] {
        for _ in 0..12 {
            let a = random_unimodular_matrix(n, 6, 8, &mut rng);
            let b = random_unimodular_matrix(n, 6, 8, &mut rng);
            let ma = MonomialMap::new(a.clone()).unwrap();
            let mb = MonomialMap::new(b.clone()).unwrap();
            let via_product = ma.compose(&mb).unwrap().to_rational().unwrap();
            let via_compose = ma
                .to_rational()
                .unwrap()
                .compose(&mb.to_rational().unwrap())
                .unwrap();
            assert_eq!(via_product, via_compose, "n = {}, A = {}, B = {}", n, a, b);
        }
    }
}

#[test]
fn spectral_intervals_certified_on_random_nonsingular() {
    // certified lower <= upper and power-of-interval consistency
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let m = random_nonsingular_matrix(3, 3, &mut rng);
        let i1 = spectral_radius(&m, 1e-9);
        assert!(i1.lower <= i1.upper);
        let i2 = spectral_radius(&m.pow(2), 1e-9);
        let sq = i1.powi(2);
        assert!(
            i2.lower <= sq.upper && sq.lower <= i2.upper,
            "rho(A^2) inconsistent: {:?} vs {:?}",
            i2,
            sq
        );
    }
}

#[test]
fn sequence_upper_bound_dominates_exact_lower_bound() {
    // the Fekete upper bound from the degree sequence can never undercut
    // the certified monomial growth rate on the same map
    use orbitlab::degrees::{degree_sequence, lambda1_estimate, monomial_dyndeg, DEFAULT_TERM_CAP};
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in [2usize, 3] {
        for _ in 0..6 {
            let a = random_unimodular_matrix(n, 6, 6, &mut rng);
            let map = MonomialMap::new(a).unwrap();
            let exact = monomial_dyndeg(&map, 1, 1e-9).unwrap();
            let f = map.to_rational().unwrap();
            let seq = degree_sequence(&f, 8, DEFAULT_TERM_CAP);
            let est = lambda1_estimate(&seq).unwrap();
            assert!(
                est.upper >= exact.lower - 1e-9,
                "map {}: sequence upper {} vs exact lower {}",
                map.matrix(),
                est.upper,
                exact.lower
            );
        }
    }
}

#[test]
fn determinant_sign_agrees_with_exterior_top() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let m = random_nonsingular_matrix(4, 2, &mut rng);
        let top = m.exterior_power(4).unwrap();
        assert_eq!(top.get(0, 0), &m.det());
        assert!(m.det().abs() >= BigInt::one());
    }
}
