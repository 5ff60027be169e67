//! Orbit iteration and the dynamical invariants read off orbits:
//! arithmetic-degree estimation, the upper-bound check against the first
//! dynamical degree, return-set analysis, Zariski-closure interpolation, the
//! recursive height-gap diagnostic, and stochastic search for seeds of
//! maximal height growth.

pub mod interpolate;
pub mod returns;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use thiserror::Error;

use crate::degrees::DynDegReport;
use crate::heights::{weil_height, HeightValue, HeightsError, TorusExponentOrbit};

pub use crate::heights::DEFAULT_BIT_CAP;
use crate::maps::{MapError, MapInstance, MonomialMap, ProjPointQ, RationalMapPn};

pub use interpolate::{orbit_zariski_test, InterpolationReport};
pub use returns::{return_set, Progression, ReturnSetReport};


#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitsError {
    #[error("orbit record too short: need {need} heights, have {have}")]
    RecordTooShort { need: usize, have: usize },
    #[error("orbit record does not retain points (fast path)")]
    PointsElided,
    #[error("test polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("test polynomial must be homogeneous")]
    NotHomogeneous,
    #[error("variable count mismatch: polynomial has {poly}, points have {points}")]
    VariableMismatch { poly: usize, points: usize },
    #[error("no points supplied")]
    NoPoints,
    #[error("interpolation degree must be at least 1")]
    DegreeZero,
    #[error("gap tracker step must be at least 1")]
    ZeroStep,
    #[error(transparent)]
    Heights(#[from] HeightsError),
}

/// How an orbit computation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    /// Ran to the horizon.
    Complete,
    /// `f^k(x)` lies in the indeterminacy locus; the record holds the
    /// heights of `x .. f^k(x)`.
    IndeterminateAt(usize),
    /// An exact revisit was found: `f^(q+p)(x) = f^q(x)`. The record holds
    /// the `q + p` distinct points.
    Periodic { period: usize, preperiod: usize },
    /// The coordinate bit-size cap stopped the iteration at step `k`.
    TruncatedAt(usize),
}

impl OrbitStatus {
    pub fn is_periodic(&self) -> bool {
        matches!(self, OrbitStatus::Periodic { .. })
    }
}

impl fmt::Display for OrbitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitStatus::Complete => write!(f, "complete"),
            OrbitStatus::IndeterminateAt(k) => write!(f, "indeterminate-at({})", k),
            OrbitStatus::Periodic { period, preperiod } => {
                write!(f, "periodic({}, {})", period, preperiod)
            }
            OrbitStatus::TruncatedAt(k) => write!(f, "truncated-at({})", k),
        }
    }
}

/// Seed of an orbit: a projective point, or an affine torus point on the
/// monomial fast path.
#[derive(Debug, Clone, PartialEq)]
pub enum Seed {
    Projective(ProjPointQ),
    Torus(Vec<BigRational>),
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Projective(p) => write!(f, "{}", p),
            Seed::Torus(t) => {
                write!(f, "(")?;
                for (i, c) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Trajectory data consumed by every estimator: per-step heights, optional
/// materialized points, and the termination status.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub map_id: String,
    pub seed: Seed,
    /// `None` on the fast path, where points are never materialized.
    pub points: Option<Vec<ProjPointQ>>,
    pub heights: Vec<HeightValue>,
    pub status: OrbitStatus,
}

/// Iterate `f` from `x` until the horizon, an indeterminate image, an exact
/// revisit of a normalized point, or the bit-size cap.
pub fn iterate_orbit(f: &RationalMapPn, x: &ProjPointQ, horizon: usize) -> OrbitRecord {
    iterate_orbit_capped(f, x, horizon, DEFAULT_BIT_CAP)
}

pub fn iterate_orbit_capped(
    f: &RationalMapPn,
    x: &ProjPointQ,
    horizon: usize,
    bit_cap: u64,
) -> OrbitRecord {
    let map_id = f.to_string();
    let mut points = vec![x.clone()];
    let mut heights = vec![weil_height(x)];
    let mut seen: HashMap<ProjPointQ, usize> = HashMap::from([(x.clone(), 0)]);
    let mut status = OrbitStatus::Complete;
    let mut current = x.clone();
    for n in 0..horizon {
        match f.evaluate_raw(&current) {
            Ok(values) => {
                // raw bits bound normalized bits; checking first avoids
                // paying a huge gcd for a point that would be dropped
                if values.iter().map(|v| v.bits()).max().unwrap() > bit_cap {
                    status = OrbitStatus::TruncatedAt(n + 1);
                    break;
                }
                let next = ProjPointQ::new(values).expect("nonzero checked");
                if let Some(&first) = seen.get(&next) {
                    status = OrbitStatus::Periodic {
                        period: n + 1 - first,
                        preperiod: first,
                    };
                    break;
                }
                seen.insert(next.clone(), n + 1);
                heights.push(weil_height(&next));
                points.push(next.clone());
                current = next;
            }
            Err(MapError::Indeterminate) => {
                status = OrbitStatus::IndeterminateAt(n);
                break;
            }
            Err(e) => unreachable!("evaluation on validated orbit: {e}"),
        }
    }
    OrbitRecord {
        map_id,
        seed: Seed::Projective(x.clone()),
        points: Some(points),
        heights,
        status,
    }
}

/// Fast-path record for a monomial orbit: heights from exponent data, points
/// elided. Periodicity is still detected exactly, on the exponent-and-sign
/// signature of the torus point.
pub fn monomial_orbit_record(
    map: &MonomialMap,
    seed: &[BigRational],
    horizon: usize,
) -> Result<OrbitRecord, OrbitsError> {
    let mut orbit = TorusExponentOrbit::new(map, seed)?;
    let mut heights = vec![orbit.height()];
    let mut seen = HashMap::from([(orbit.signature(), 0usize)]);
    let mut status = OrbitStatus::Complete;
    for step in 1..=horizon {
        orbit.step();
        let sig = orbit.signature();
        if let Some(&first) = seen.get(&sig) {
            status = OrbitStatus::Periodic {
                period: step - first,
                preperiod: first,
            };
            break;
        }
        seen.insert(sig, step);
        heights.push(orbit.height());
    }
    Ok(OrbitRecord {
        map_id: map.matrix().to_string(),
        seed: Seed::Torus(seed.to_vec()),
        points: None,
        heights,
        status,
    })
}

/// Materialized points of a monomial torus orbit, built from exponent data:
/// the representatives are coprime by construction, so no big-integer gcd is
/// ever taken. Practical when the clearing exponents stay moderate.
pub fn monomial_orbit_points(
    map: &MonomialMap,
    seed: &[BigRational],
    horizon: usize,
) -> Result<Vec<ProjPointQ>, OrbitsError> {
    let mut orbit = TorusExponentOrbit::new(map, seed)?;
    let mut points = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        points.push(orbit.projective_point());
        if n < horizon {
            orbit.step();
        }
    }
    Ok(points)
}

/// The two arithmetic-degree estimators, reported together with the window
/// they were computed on. The slope estimator is primary (it converges
/// geometrically when heights grow like `C·λ^n`); the Cesàro form is the
/// definitional fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaEstimate {
    /// `exp` of the mean clamped-log-height difference over the window.
    pub slope: f64,
    /// `max(1, h_N)^(1/N)`.
    pub cesaro: f64,
    /// Inclusive index range the slope was averaged over.
    pub window: (usize, usize),
}

/// Estimate the arithmetic degree from a record. Periodic orbits have
/// bounded height, so the answer is exactly 1. Otherwise both estimators
/// run over the final third of the record, which must hold at least 8
/// heights.
pub fn alpha_estimate(rec: &OrbitRecord) -> Result<AlphaEstimate, OrbitsError> {
    if rec.status.is_periodic() {
        return Ok(AlphaEstimate {
            slope: 1.0,
            cesaro: 1.0,
            window: (0, rec.heights.len().saturating_sub(1)),
        });
    }
    let len = rec.heights.len();
    if len < 8 {
        return Err(OrbitsError::RecordTooShort { need: 8, have: len });
    }
    let last = len - 1;
    let window = (len / 3).max(2);
    let start = last - window;
    let clamped: Vec<f64> = rec.heights.iter().map(|h| h.clamped()).collect();
    let slope = ((clamped[last].ln() - clamped[start].ln()) / window as f64)
        .exp()
        .max(1.0);
    let cesaro = (clamped[last].ln() / last as f64).exp().max(1.0);
    Ok(AlphaEstimate {
        slope,
        cesaro,
        window: (start, last),
    })
}

/// Result of checking the height-growth upper bound along one orbit.
#[derive(Debug, Clone)]
pub struct AlphaBoundCheck {
    pub map_id: String,
    pub seed: String,
    pub alpha: AlphaEstimate,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Assert the slope estimator stays below `upper(λ1) · (1 + slack)`. This is
/// a property harness: failures indicate bugs or too-small horizons, never
/// counterexamples.
pub fn check_alpha_bound(
    rec: &OrbitRecord,
    lambda1: &DynDegReport,
    slack: f64,
) -> Result<AlphaBoundCheck, OrbitsError> {
    let alpha = alpha_estimate(rec)?;
    let bound = lambda1.upper * (1.0 + slack);
    Ok(AlphaBoundCheck {
        map_id: rec.map_id.clone(),
        seed: rec.seed.to_string(),
        alpha,
        bound,
        slack,
        pass: alpha.slope <= bound,
    })
}

/// Diagnostic mirroring the recursive height inequality: gaps
/// `G_k = h_{(k+1)m} - c·h_{km}`, the first positive index, consecutive
/// growth ratios from there on, and the fraction of ratios at least `beta`.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub c: f64,
    pub step: usize,
    pub beta: f64,
    pub gaps: Vec<f64>,
    pub first_positive: Option<usize>,
    pub ratios: Vec<f64>,
    pub fraction_ge_beta: f64,
}

impl GapReport {
    /// Degenerate outcome: no gap ever went positive at this `(c, m)`.
    pub fn no_positive_gap(&self) -> bool {
        self.first_positive.is_none()
    }
}

/// Track `G_k = h_{(k+1)m} - c·h_{km}` on raw heights. A report with no
/// positive gap is the degenerate outcome, not an error.
pub fn recursive_gap_tracker(
    rec: &OrbitRecord,
    c: f64,
    step: usize,
    beta: f64,
) -> Result<GapReport, OrbitsError> {
    if step == 0 {
        return Err(OrbitsError::ZeroStep);
    }
    let len = rec.heights.len();
    if len < 3 * step {
        return Err(OrbitsError::RecordTooShort {
            need: 3 * step,
            have: len,
        });
    }
    let h: Vec<f64> = rec.heights.iter().map(|v| v.h).collect();
    let k_max = (len - 1) / step;
    let gaps: Vec<f64> = (0..k_max)
        .map(|k| h[(k + 1) * step] - c * h[k * step])
        .collect();
    let first_positive = gaps.iter().position(|&g| g > 0.0);
    let mut ratios = Vec::new();
    if let Some(first) = first_positive {
        for k in first..gaps.len().saturating_sub(1) {
            if gaps[k] > 0.0 {
                ratios.push(gaps[k + 1] / gaps[k]);
            }
        }
    }
    let fraction_ge_beta = if ratios.is_empty() {
        0.0
    } else {
        ratios.iter().filter(|&&r| r >= beta).count() as f64 / ratios.len() as f64
    };
    Ok(GapReport {
        c,
        step,
        beta,
        gaps,
        first_positive,
        ratios,
        fraction_ge_beta,
    })
}

/// Sampler for orbit seeds with bounded coordinate size.
#[derive(Debug, Clone, Copy)]
pub struct SeedSampler {
    pub count: usize,
    pub coord_bound: u64,
}

impl SeedSampler {
    /// Affine torus point: nonzero rationals with numerator and denominator
    /// bounded by `coord_bound`.
    pub fn torus_seed(&self, n: usize, rng: &mut impl Rng) -> Vec<BigRational> {
        (0..n)
            .map(|_| {
                let num = rng.gen_range(1..=self.coord_bound as i64)
                    * if rng.gen_bool(0.5) { 1 } else { -1 };
                let den = rng.gen_range(1..=self.coord_bound as i64);
                BigRational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect()
    }

    /// Projective point with integer coordinates in `[-bound, bound]`, not
    /// all zero.
    pub fn projective_seed(&self, n: usize, rng: &mut impl Rng) -> ProjPointQ {
        loop {
            let coords: Vec<BigInt> = (0..=n)
                .map(|_| {
                    BigInt::from(
                        rng.gen_range(-(self.coord_bound as i64)..=self.coord_bound as i64),
                    )
                })
                .collect();
            if let Ok(p) = ProjPointQ::new(coords) {
                return p;
            }
        }
    }
}

/// One scored seed out of the search.
#[derive(Debug, Clone)]
pub struct RankedSeed {
    pub seed: String,
    pub alpha: AlphaEstimate,
    pub status: OrbitStatus,
}

/// Outcome of the high-growth seed search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub lambda1_upper: f64,
    pub threshold: f64,
    /// Seeds whose slope estimate reaches `(1 - eps) * upper(λ1)`.
    pub hits: Vec<RankedSeed>,
    /// All scored seeds, best first.
    pub ranked: Vec<RankedSeed>,
    /// Seeds skipped because their orbit ended too early to estimate.
    pub skipped: usize,
}

/// Sample seeds, keep orbits that ran long enough to estimate, rank by the
/// slope estimator, and report every seed reaching `(1 - eps)·upper(λ1)`.
/// An empty hit list is a valid outcome.
pub fn high_alpha_search(
    map: &MapInstance,
    sampler: &SeedSampler,
    rng: &mut impl Rng,
    horizon: usize,
    eps: f64,
    lambda1: &DynDegReport,
) -> SearchOutcome {
    let mut ranked = Vec::new();
    let mut skipped = 0usize;
    for _ in 0..sampler.count {
        let rec = match map {
            MapInstance::Monomial(m) => {
                let seed = sampler.torus_seed(m.dim(), rng);
                monomial_orbit_record(m, &seed, horizon).expect("nonzero seed")
            }
            MapInstance::Homogeneous(f) => {
                let seed = sampler.projective_seed(f.dim(), rng);
                iterate_orbit(f, &seed, horizon)
            }
        };
        match alpha_estimate(&rec) {
            Ok(alpha) => ranked.push(RankedSeed {
                seed: rec.seed.to_string(),
                alpha,
                status: rec.status,
            }),
            Err(_) => skipped += 1,
        }
    }
    ranked.sort_by(|a, b| {
        b.alpha
            .slope
            .partial_cmp(&a.alpha.slope)
            .expect("finite estimates")
    });
    let threshold = (1.0 - eps) * lambda1.upper;
    let hits = ranked
        .iter()
        .filter(|r| r.alpha.slope >= threshold)
        .cloned()
        .collect();
    SearchOutcome {
        lambda1_upper: lambda1.upper,
        threshold,
        hits,
        ranked,
        skipped,
    }
}
