//! Degree sequences of iterates, first-dynamical-degree estimation with
//! rigorous upper bounds, exact dynamical degrees of monomial maps, and the
//! density criterion comparing the first and third dynamical degrees.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::spectral::{spectral_radius, SpectralInterval};
use crate::algebra::IntMatrix;
use crate::maps::{MonomialMap, RationalMapPn};

/// Default cap on the total term count of an iterate before a degree
/// sequence computation is truncated.
pub const DEFAULT_TERM_CAP: usize = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegreesError {
    #[error("degree sequence too short: need at least {need} entries, have {have}")]
    SequenceTooShort { need: usize, have: usize },
    #[error("exterior index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("m_max must be at least 2")]
    BadIterateBound,
}

/// Degrees `d_0 = 1, d_1, ..` of the reduced iterates of a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degs: Vec<u64>,
    /// True when the computation stopped early at the term cap.
    pub truncated: bool,
}

impl DegreeSequence {
    /// `d_{m+n} <= d_m * d_n` on all stored pairs (Fekete precondition).
    pub fn is_submultiplicative(&self) -> bool {
        let d = &self.degs;
        (1..d.len()).all(|m| (1..d.len() - m).all(|n| d[m + n] <= d[m] * d[n]))
    }
}

/// Degrees of the reduced compositions `f^0 .. f^N`, stopping early when an
/// iterate's total term count exceeds `term_cap`.
pub fn degree_sequence(f: &RationalMapPn, n_max: usize, term_cap: usize) -> DegreeSequence {
    assert!(n_max >= 1);
    let mut degs = vec![1u64, f.degree() as u64];
    let mut iterate = f.clone();
    for _ in 2..=n_max {
        let next = match iterate.compose(f) {
            Ok(g) => g,
            // composition of valid self-maps only fails through blow-up guards
            Err(_) => {
                return DegreeSequence {
                    degs,
                    truncated: true,
                }
            }
        };
        if next.term_count() > term_cap {
            return DegreeSequence {
                degs,
                truncated: true,
            };
        }
        degs.push(next.degree() as u64);
        iterate = next;
    }
    DegreeSequence {
        degs,
        truncated: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynDegMethod {
    ExactMonomial,
    SequenceLimit,
}

impl DynDegMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DynDegMethod::ExactMonomial => "exact-monomial",
            DynDegMethod::SequenceLimit => "sequence-limit",
        }
    }
}

/// Report for one dynamical degree: a certified interval on the exact
/// monomial path, or a (heuristic lower, rigorous upper) pair from a degree
/// sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynDegReport {
    pub index: usize,
    pub lower: f64,
    pub upper: f64,
    pub method: DynDegMethod,
    /// Both endpoints are rigorous bounds (always true for exact-monomial).
    pub certified: bool,
}

impl DynDegReport {
    pub fn from_interval(index: usize, interval: SpectralInterval) -> Self {
        DynDegReport {
            index,
            lower: interval.lower,
            upper: interval.upper,
            method: DynDegMethod::ExactMonomial,
            certified: interval.converged,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// First dynamical degree from a degree sequence: the upper bound
/// `min_n d_n^{1/n}` is rigorous by Fekete's lemma; the lower entry is the
/// geometric mean of the tail ratios over the final third, clamped into
/// `[1, upper]`.
pub fn lambda1_estimate(seq: &DegreeSequence) -> Result<DynDegReport, DegreesError> {
    let d = &seq.degs;
    if d.len() < 3 {
        return Err(DegreesError::SequenceTooShort {
            need: 3,
            have: d.len(),
        });
    }
    let upper = (1..d.len())
        .map(|n| (d[n] as f64).powf(1.0 / n as f64))
        .fold(f64::INFINITY, f64::min);
    let last = d.len() - 1;
    let window = (last / 3).max(1);
    let start = last - window;
    let raw = ((d[last] as f64).ln() - (d[start] as f64).ln()) / window as f64;
    let estimate = raw.exp().clamp(1.0, upper);
    Ok(DynDegReport {
        index: 1,
        lower: estimate,
        upper,
        method: DynDegMethod::SequenceLimit,
        certified: false,
    })
}

/// Exact dynamical degree `λ_i` of a monomial map: the spectral radius of
/// the `i`-th exterior power of its exponent matrix. `λ_0 = 1` and
/// `λ_n = |det A|` exactly.
pub fn monomial_dyndeg(
    map: &MonomialMap,
    index: usize,
    tol: f64,
) -> Result<DynDegReport, DegreesError> {
    let n = map.dim();
    let wedge = map
        .matrix()
        .exterior_power(index)
        .map_err(|_| DegreesError::IndexOutOfRange { index, dim: n })?;
    Ok(DynDegReport::from_interval(index, spectral_radius(&wedge, tol)))
}

/// One failed check inside `verify_degree_laws`.
#[derive(Debug, Clone, Serialize)]
pub struct LawViolation {
    pub law: String,
    pub index: usize,
    pub iterate: u32,
    pub detail: String,
}

/// Outcome of the power-compatibility and log-concavity property run.
#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub power_checks: usize,
    pub concavity_checks: usize,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check, for all `i <= n` and `m <= m_max`:
/// `∧^i(A^m) = (∧^i A)^m` exactly, the spectral intervals of `ρ(∧^i(A^m))`
/// and `ρ(∧^i A)^m` overlap, and log concavity
/// `λ_{i-1} λ_{i+1} <= λ_i^2 (1 + tol)` on certified interval endpoints.
/// A violation indicates an implementation bug, not a counterexample.
pub fn verify_degree_laws(
    a: &IntMatrix,
    m_max: u32,
    tol: f64,
) -> Result<LawReport, DegreesError> {
    if m_max < 2 {
        return Err(DegreesError::BadIterateBound);
    }
    let n = a.dim();
    let mut violations = Vec::new();
    let mut power_checks = 0;
    let mut concavity_checks = 0;

    let wedges: Vec<IntMatrix> = (0..=n)
        .map(|i| a.exterior_power(i).expect("index in range"))
        .collect();
    let intervals: Vec<SpectralInterval> =
        wedges.iter().map(|w| spectral_radius(w, tol)).collect();

    for i in 0..=n {
        for m in 1..=m_max {
            let lhs = a.pow(m).exterior_power(i).expect("index in range");
            let rhs = wedges[i].pow(m);
            power_checks += 1;
            if lhs != rhs {
                violations.push(LawViolation {
                    law: "exterior-power-of-iterate".into(),
                    index: i,
                    iterate: m,
                    detail: "wedge^i(A^m) != (wedge^i A)^m".into(),
                });
                continue;
            }
            let direct = spectral_radius(&lhs, tol);
            let powered = intervals[i].powi(m as i32);
            if !direct.overlaps(&powered) {
                violations.push(LawViolation {
                    law: "spectral-power-compatibility".into(),
                    index: i,
                    iterate: m,
                    detail: format!(
                        "rho(wedge^i(A^m)) in [{:e}, {:e}] vs rho(wedge^i A)^m in [{:e}, {:e}]",
                        direct.lower, direct.upper, powered.lower, powered.upper
                    ),
                });
            }
        }
    }

    for i in 1..n {
        concavity_checks += 1;
        let lhs = intervals[i - 1].lower * intervals[i + 1].lower;
        let rhs = intervals[i].upper * intervals[i].upper * (1.0 + tol);
        if lhs > rhs {
            violations.push(LawViolation {
                law: "log-concavity".into(),
                index: i,
                iterate: 0,
                detail: format!(
                    "lambda_{}*lambda_{} = {:e} > lambda_{}^2 = {:e}",
                    i - 1,
                    i + 1,
                    lhs,
                    i,
                    rhs
                ),
            });
        }
    }

    Ok(LawReport {
        power_checks,
        concavity_checks,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZdoVerdict {
    CriterionSatisfied,
    CriterionFails,
    Inconclusive,
    CriterionNotApplicable,
}

impl ZdoVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZdoVerdict::CriterionSatisfied => "criterion-satisfied",
            ZdoVerdict::CriterionFails => "criterion-fails",
            ZdoVerdict::Inconclusive => "inconclusive",
            ZdoVerdict::CriterionNotApplicable => "criterion-not-applicable",
        }
    }
}

/// Decision data for the dense-orbit criterion on a birational monomial map:
/// certified comparison of `λ_3` against `λ_1`, plus the invariant-monomial
/// check. The tool certifies only the *monomial*-invariant-free hypothesis;
/// non-monomial invariant functions are outside its reach.
#[derive(Debug, Clone, Serialize)]
pub struct ZdoReport {
    pub dim: usize,
    pub birational: bool,
    pub verdict: ZdoVerdict,
    pub lambda1: DynDegReport,
    pub lambda3: DynDegReport,
    /// For dimension <= 2 the λ3 condition is vacuous; λ3 is pinned to 1.
    pub lambda3_vacuous: bool,
    pub invariant_monomial_basis: Vec<Vec<String>>,
    pub monomial_invariant_free: bool,
}

/// Evaluate the criterion `λ_3 < λ_1` for a monomial map.
///
/// Verdicts come from certified interval comparison: satisfied when the λ1
/// interval lies strictly above the λ3 interval, fails when λ3 provably
/// reaches λ1, inconclusive when the intervals overlap without deciding.
/// Non-birational maps get `CriterionNotApplicable` (the remaining fields
/// are still computed).
pub fn zdo_criterion(map: &MonomialMap, tol: f64) -> ZdoReport {
    let n = map.dim();
    let birational = map.is_birational();
    let lambda1 = monomial_dyndeg(map, 1, tol).expect("index 1 valid");
    let (lambda3, vacuous) = if n >= 3 {
        (monomial_dyndeg(map, 3, tol).expect("index 3 valid"), false)
    } else {
        // vacuous condition: every dynamical degree is >= 1, so pinning
        // λ3 = 1 turns the comparison into "λ1 provably exceeds 1"
        (
            DynDegReport {
                index: 3,
                lower: 1.0,
                upper: 1.0,
                method: DynDegMethod::ExactMonomial,
                certified: true,
            },
            true,
        )
    };

    let basis = map.invariant_monomials();
    let monomial_invariant_free = basis.is_empty();

    let verdict = if !birational {
        ZdoVerdict::CriterionNotApplicable
    } else if lambda1.lower > lambda3.upper {
        ZdoVerdict::CriterionSatisfied
    } else if lambda3.lower >= lambda1.upper {
        ZdoVerdict::CriterionFails
    } else {
        ZdoVerdict::Inconclusive
    };

    ZdoReport {
        dim: n,
        birational,
        verdict,
        lambda1,
        lambda3,
        lambda3_vacuous: vacuous,
        invariant_monomial_basis: basis
            .iter()
            .map(|v| v.iter().map(|e| e.to_string()).collect())
            .collect(),
        monomial_invariant_free,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{cremona_involution, power_map};

    #[test]
    fn cremona_degrees_alternate() {
        let seq = degree_sequence(&cremona_involution(), 10, DEFAULT_TERM_CAP);
        let expect: Vec<u64> = (0..=10).map(|n| if n % 2 == 0 { 1 } else { 2 }).collect();
        assert_eq!(seq.degs, expect);
        assert!(!seq.truncated);
        assert!(seq.is_submultiplicative());
    }

    #[test]
    fn power_map_degrees_multiply() {
        let seq = degree_sequence(&power_map(1, 2), 8, DEFAULT_TERM_CAP);
        assert_eq!(seq.degs, vec![1, 2, 4, 8, 16, 32, 64, 128, 256]);
    }

    #[test]
    fn term_cap_truncates_dense_map() {
        let f = RationalMapPn::from_strings(
            2,
            &[
                "x0^2 + x1*x2".into(),
                "x1^2 + x0*x2".into(),
                "x2^2 + x0*x1".into(),
            ],
        )
        .unwrap();
        let seq = degree_sequence(&f, 12, 50);
        assert!(seq.truncated);
        assert!(seq.degs.len() < 13);
        assert!(seq.is_submultiplicative());
    }

    #[test]
    fn lambda1_power_map_is_exact() {
        let seq = degree_sequence(&power_map(1, 3), 6, DEFAULT_TERM_CAP);
        let report = lambda1_estimate(&seq).unwrap();
        assert!((report.upper - 3.0).abs() < 1e-12);
        assert!((report.lower - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lambda1_cremona_collapses_to_one() {
        let seq = degree_sequence(&cremona_involution(), 10, DEFAULT_TERM_CAP);
        let report = lambda1_estimate(&seq).unwrap();
        assert_eq!(report.upper, 1.0);
        assert_eq!(report.lower, 1.0);
    }

    #[test]
    fn lambda1_fibonacci_estimate_reaches_golden_ratio() {
        let map = MonomialMap::from_i64_rows(&[&[1, 1], &[1, 0]]).unwrap();
        let f = map.to_rational().unwrap();
        let seq = degree_sequence(&f, 15, DEFAULT_TERM_CAP);
        let report = lambda1_estimate(&seq).unwrap();
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((report.lower - phi).abs() <= 1e-2, "estimate {}", report.lower);
        // the Fekete upper bound converges from above much more slowly
        assert!(report.upper >= phi);
    }

    #[test]
    fn lambda1_needs_three_entries() {
        let seq = DegreeSequence {
            degs: vec![1, 2],
            truncated: false,
        };
        assert!(matches!(
            lambda1_estimate(&seq),
            Err(DegreesError::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn monomial_dyndeg_normalization_and_determinant() {
        let map = MonomialMap::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let l0 = monomial_dyndeg(&map, 0, 1e-9).unwrap();
        assert_eq!((l0.lower, l0.upper), (1.0, 1.0));
        let l2 = monomial_dyndeg(&map, 2, 1e-9).unwrap();
        assert_eq!((l2.lower, l2.upper), (1.0, 1.0));
        let l1 = monomial_dyndeg(&map, 1, 1e-9).unwrap();
        let phi2 = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!(l1.lower <= phi2 && phi2 <= l1.upper);
        assert!(l1.upper - l1.lower <= 1e-9);
    }

    #[test]
    fn monomial_dyndeg_top_is_det() {
        let map =
            MonomialMap::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).unwrap();
        let l3 = monomial_dyndeg(&map, 3, 1e-9).unwrap();
        assert_eq!((l3.lower, l3.upper), (2.0, 2.0));
        // the middle exterior power has spectral radius 2 as well
        let l2 = monomial_dyndeg(&map, 2, 1e-9).unwrap();
        assert!(l2.lower <= 2.0 && 2.0 <= l2.upper);
        assert!(l2.upper - l2.lower <= 1e-9);
    }

    #[test]
    fn monomial_dyndeg_rejects_bad_index() {
        let map = MonomialMap::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        assert!(matches!(
            monomial_dyndeg(&map, 5, 1e-9),
            Err(DegreesError::IndexOutOfRange { index: 5, dim: 2 })
        ));
    }

    #[test]
    fn laws_hold_for_diagonal() {
        // λ1 = 3, λ2 = 6: concavity 1·6 <= 9
        let a = IntMatrix::from_i64_rows(&[&[3, 0], &[0, 2]]);
        let report = verify_degree_laws(&a, 3, 1e-9).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.concavity_checks, 1);
    }

    #[test]
    fn laws_hold_for_circulant() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let report = verify_degree_laws(&a, 3, 1e-9).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn laws_reject_m_max_one() {
        let a = IntMatrix::identity(2);
        assert!(matches!(
            verify_degree_laws(&a, 1, 1e-9),
            Err(DegreesError::BadIterateBound)
        ));
    }

    #[test]
    fn zdo_fibonacci_satisfied() {
        let map = MonomialMap::from_i64_rows(&[&[1, 1], &[1, 0]]).unwrap();
        let report = zdo_criterion(&map, 1e-9);
        assert_eq!(report.verdict, ZdoVerdict::CriterionSatisfied);
        assert!(report.lambda3_vacuous);
        assert!(report.monomial_invariant_free);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!(report.lambda1.lower <= phi && phi <= report.lambda1.upper);
    }

    #[test]
    fn zdo_permutations_fail() {
        for rows in [
            vec![vec![0i64, 1], vec![1, 0]],
            vec![vec![0i64, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
            vec![
                vec![0i64, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 0, 0, 0],
            ],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let map = MonomialMap::from_i64_rows(&refs).unwrap();
            let report = zdo_criterion(&map, 1e-9);
            assert_eq!(report.verdict, ZdoVerdict::CriterionFails, "{:?}", rows);
        }
    }

    #[test]
    fn zdo_block_map_reports_invariant_but_satisfied() {
        // λ1 = φ, λ3 = |det| = 1 < φ, but x3 is an invariant monomial
        let map = MonomialMap::from_i64_rows(&[&[1, 1, 0], &[1, 0, 0], &[0, 0, 1]]).unwrap();
        let report = zdo_criterion(&map, 1e-9);
        assert_eq!(report.verdict, ZdoVerdict::CriterionSatisfied);
        assert!(!report.monomial_invariant_free);
        assert_eq!(report.invariant_monomial_basis, vec![vec!["0", "0", "1"]]);
        assert!(!report.lambda3_vacuous);
        assert_eq!((report.lambda3.lower, report.lambda3.upper), (1.0, 1.0));
    }

    #[test]
    fn zdo_not_applicable_for_non_birational() {
        let map = MonomialMap::from_i64_rows(&[&[2, 0], &[0, 2]]).unwrap();
        let report = zdo_criterion(&map, 1e-9);
        assert_eq!(report.verdict, ZdoVerdict::CriterionNotApplicable);
        assert!(!report.birational);
    }
}
