//! One function per subcommand: validate the config, run the library
//! pipelines, emit a CSV table or JSON report.

use std::path::Path;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use orbitlab::degrees::{
    degree_sequence, lambda1_estimate, monomial_dyndeg, verify_degree_laws, DynDegReport,
    LawViolation,
};
use orbitlab::heights::monomial_orbit_heights;
use orbitlab::maps::{MapInstance, ProjPointQ, RationalMapPn};
use orbitlab::orbits::{
    alpha_estimate, check_alpha_bound, high_alpha_search, iterate_orbit, monomial_orbit_points,
    monomial_orbit_record, orbit_zariski_test, OrbitRecord, SeedSampler,
};
use orbitlab::sampling::{random_nonsingular_matrix, random_unimodular_matrix};
use orbitlab::MonomialMap;

use crate::config::LoadedConfig;
use crate::output::{emit, fmt_f64, json_bytes, CsvTable};
use crate::CliError;

fn build_map(loaded: &LoadedConfig) -> Result<MapInstance, CliError> {
    let desc = loaded.config.require_map()?;
    desc.build().map_err(CliError::from)
}

/// Projective realization of either map kind.
fn projective_map(instance: &MapInstance) -> Result<RationalMapPn, CliError> {
    match instance {
        MapInstance::Homogeneous(f) => Ok(f.clone()),
        MapInstance::Monomial(m) => m
            .to_rational()
            .map_err(|e| CliError::Usage(format!("homogenization failed: {}", e))),
    }
}

fn torus_seed(loaded: &LoadedConfig, n: usize) -> Result<Vec<BigRational>, CliError> {
    let specs = loaded
        .config
        .seed_point
        .as_ref()
        .ok_or_else(|| CliError::Usage("config requires \"seed_point\"".into()))?;
    if specs.len() != n {
        return Err(CliError::Usage(format!(
            "seed_point needs {} coordinates for this map, got {}",
            n,
            specs.len()
        )));
    }
    specs.iter().map(|s| s.to_rational()).collect()
}

fn projective_seed(loaded: &LoadedConfig, n: usize) -> Result<ProjPointQ, CliError> {
    let specs = loaded
        .config
        .seed_point
        .as_ref()
        .ok_or_else(|| CliError::Usage("config requires \"seed_point\"".into()))?;
    if specs.len() != n + 1 {
        return Err(CliError::Usage(format!(
            "seed_point needs {} homogeneous coordinates, got {}",
            n + 1,
            specs.len()
        )));
    }
    let rationals: Vec<BigRational> = specs
        .iter()
        .map(|s| s.to_rational())
        .collect::<Result<_, _>>()?;
    // scale by the product of denominators; normalization removes the rest
    let scale: num_bigint::BigInt = rationals.iter().map(|r| r.denom()).product();
    let coords = rationals
        .iter()
        .map(|r| r.numer() * (&scale / r.denom()))
        .collect();
    ProjPointQ::new(coords).map_err(|e| CliError::Usage(format!("invalid seed point: {}", e)))
}

/// Orbit record for either map kind: fast path for monomial maps, general
/// iteration otherwise.
fn orbit_record(
    loaded: &LoadedConfig,
    instance: &MapInstance,
    horizon: usize,
) -> Result<OrbitRecord, CliError> {
    match instance {
        MapInstance::Monomial(m) => {
            let seed = torus_seed(loaded, m.dim())?;
            monomial_orbit_record(m, &seed, horizon)
                .map_err(|e| CliError::Usage(format!("orbit failed: {}", e)))
        }
        MapInstance::Homogeneous(f) => {
            let seed = projective_seed(loaded, f.dim())?;
            Ok(iterate_orbit(f, &seed, horizon))
        }
    }
}

// ---------------------------------------------------------------------------
// degrees
// ---------------------------------------------------------------------------

pub fn cmd_degrees(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let instance = build_map(loaded)?;
    let f = projective_map(&instance)?;
    let horizon = loaded.config.horizon_or(12);
    let cap = loaded.config.effective_term_cap();
    let seq = degree_sequence(&f, horizon, cap);

    let mut csv = CsvTable::new(
        &loaded.config_hash,
        loaded.rng_seed,
        &[("map", loaded.config.require_map()?.id())],
    );
    csv.header(&["n", "deg", "deg_root", "ratio"]);
    for (n, &d) in seq.degs.iter().enumerate() {
        let root = if n >= 1 {
            fmt_f64((d as f64).powf(1.0 / n as f64))
        } else {
            String::new()
        };
        let ratio = if n >= 1 {
            fmt_f64(d as f64 / seq.degs[n - 1] as f64)
        } else {
            String::new()
        };
        csv.row(&[n.to_string(), d.to_string(), root, ratio]);
    }
    if seq.truncated {
        csv.comment("truncated: iterate term count exceeded the cap");
        emit(out, &csv.into_bytes())?;
        return Err(CliError::CapExceeded(format!(
            "degree sequence truncated after {} entries (term cap {})",
            seq.degs.len(),
            cap
        )));
    }
    emit(out, &csv.into_bytes())
}

// ---------------------------------------------------------------------------
// dyndeg
// ---------------------------------------------------------------------------

pub fn cmd_dyndeg(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let instance = build_map(loaded)?;
    let tol = loaded.config.tol_or(1e-9);
    let mut rows: Vec<DynDegReport> = Vec::new();
    match &instance {
        MapInstance::Monomial(m) => {
            let indices: Vec<usize> = match loaded.config.index {
                Some(i) => {
                    if i > m.dim() {
                        return Err(CliError::Usage(format!(
                            "index {} out of range for dimension {}",
                            i,
                            m.dim()
                        )));
                    }
                    // one extra report for the ratio column
                    if i >= 1 {
                        vec![i - 1, i]
                    } else {
                        vec![i]
                    }
                }
                None => (0..=m.dim()).collect(),
            };
            for i in indices {
                rows.push(
                    monomial_dyndeg(m, i, tol)
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                );
            }
        }
        MapInstance::Homogeneous(f) => {
            if let Some(i) = loaded.config.index {
                if i >= 2 {
                    return Err(CliError::Usage(
                        "unsupported feature: dynamical degrees of index >= 2 \
                         require a monomial map"
                            .into(),
                    ));
                }
            }
            let horizon = loaded.config.horizon_or(12);
            let cap = loaded.config.effective_term_cap();
            let seq = degree_sequence(f, horizon, cap);
            rows.push(lambda1_estimate(&seq).map_err(|e| CliError::Usage(e.to_string()))?);
        }
    }

    let mut csv = CsvTable::new(
        &loaded.config_hash,
        loaded.rng_seed,
        &[("map", loaded.config.require_map()?.id())],
    );
    csv.header(&["i", "lower", "upper", "method", "mu"]);
    let emitted: Vec<&DynDegReport> = match loaded.config.index {
        Some(i) => rows.iter().filter(|r| r.index == i).collect(),
        None => rows.iter().collect(),
    };
    for report in emitted {
        let mu = rows
            .iter()
            .find(|prev| prev.index + 1 == report.index)
            .map(|prev| fmt_f64(report.midpoint() / prev.midpoint()))
            .unwrap_or_default();
        csv.row(&[
            report.index.to_string(),
            fmt_f64(report.lower),
            fmt_f64(report.upper),
            report.method.as_str().to_string(),
            mu,
        ]);
    }
    emit(out, &csv.into_bytes())
}

// ---------------------------------------------------------------------------
// orbit / alpha
// ---------------------------------------------------------------------------

pub fn cmd_orbit(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let instance = build_map(loaded)?;
    let horizon = loaded.config.horizon_or(50);
    // the fast path suffices here: only heights are reported
    let track = match &instance {
        MapInstance::Monomial(m) => {
            let seed = torus_seed(loaded, m.dim())?;
            monomial_orbit_heights(m, &seed, horizon)
                .map_err(|e| CliError::Usage(format!("orbit failed: {}", e)))?
        }
        MapInstance::Homogeneous(f) => {
            let seed = projective_seed(loaded, f.dim())?;
            orbitlab::heights::orbit_heights(f, &seed, horizon)
        }
    };
    let mut csv = CsvTable::new(
        &loaded.config_hash,
        loaded.rng_seed,
        &[("map", loaded.config.require_map()?.id())],
    );
    csv.header(&["n", "h", "log_h"]);
    for (n, hv) in track.heights.iter().enumerate() {
        let log_h = if hv.h > 0.0 {
            fmt_f64(hv.h.ln())
        } else {
            String::new()
        };
        csv.row(&[n.to_string(), fmt_f64(hv.h), log_h]);
    }
    match track.truncation {
        None => emit(out, &csv.into_bytes()),
        Some(orbitlab::heights::Truncation::Indeterminate { at }) => {
            csv.comment(&format!("status: indeterminate-at({})", at));
            emit(out, &csv.into_bytes())
        }
        Some(orbitlab::heights::Truncation::BitCap { at }) => {
            csv.comment(&format!("status: truncated-at({})", at));
            emit(out, &csv.into_bytes())?;
            Err(CliError::CapExceeded(format!(
                "orbit truncated at step {}: coordinate bit-size cap",
                at
            )))
        }
    }
}

pub fn cmd_alpha(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let instance = build_map(loaded)?;
    let horizon = loaded.config.horizon_or(100);
    let rec = orbit_record(loaded, &instance, horizon)?;
    let alpha = alpha_estimate(&rec).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = CsvTable::new(
        &loaded.config_hash,
        loaded.rng_seed,
        &[
            ("map", loaded.config.require_map()?.id()),
            ("seed", rec.seed.to_string()),
        ],
    );
    csv.header(&[
        "slope_estimate",
        "cesaro_estimate",
        "window_start",
        "window_end",
        "status",
    ]);
    csv.row(&[
        fmt_f64(alpha.slope),
        fmt_f64(alpha.cesaro),
        alpha.window.0.to_string(),
        alpha.window.1.to_string(),
        rec.status.to_string(),
    ]);
    emit(out, &csv.into_bytes())
}

// ---------------------------------------------------------------------------
// zdo
// ---------------------------------------------------------------------------

pub fn cmd_zdo(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let instance = build_map(loaded)?;
    let MapInstance::Monomial(m) = &instance else {
        return Err(CliError::Usage(
            "the density criterion requires a monomial map".into(),
        ));
    };
    let tol = loaded.config.tol_or(1e-9);
    let report = orbitlab::degrees::zdo_criterion(m, tol);
    #[derive(Serialize)]
    struct Payload {
        map: String,
        #[serde(flatten)]
        report: orbitlab::degrees::ZdoReport,
    }
    let payload = Payload {
        map: loaded.config.require_map()?.id(),
        report,
    };
    emit(
        out,
        &json_bytes(&loaded.config_hash, loaded.rng_seed, payload)?,
    )
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VerifyPayload {
    law_matrices: usize,
    law_power_checks: usize,
    law_concavity_checks: usize,
    law_violations: Vec<LawViolation>,
    alpha_orbits: usize,
    alpha_failures: Vec<AlphaFailure>,
}

#[derive(Serialize)]
struct AlphaFailure {
    matrix: String,
    seed: String,
    slope: f64,
    bound: f64,
}

pub fn cmd_verify(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let tol = loaded.config.tol_or(1e-9);
    let m_max = loaded.config.m_max.unwrap_or(3);
    let mut rng = ChaCha8Rng::seed_from_u64(loaded.rng_seed);

    let mut law_matrices = 0;
    let mut law_power_checks = 0;
    let mut law_concavity_checks = 0;
    let mut law_violations = Vec::new();
    if let Some(batch) = loaded.config.matrices {
        for _ in 0..batch.count {
            let a = random_nonsingular_matrix(batch.dim, batch.entry_bound, &mut rng);
            let report = verify_degree_laws(&a, m_max, tol)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            law_matrices += 1;
            law_power_checks += report.power_checks;
            law_concavity_checks += report.concavity_checks;
            law_violations.extend(report.violations);
        }
    }

    let mut alpha_orbits = 0;
    let mut alpha_failures = Vec::new();
    if let Some(checks) = loaded.config.orbit_checks {
        let dim = loaded.config.matrices.map(|b| b.dim).unwrap_or(3);
        let sampler = SeedSampler {
            count: 1,
            coord_bound: 10,
        };
        for _ in 0..checks.count {
            let a = random_unimodular_matrix(dim, 6, 10, &mut rng);
            let map = MonomialMap::new(a).expect("unimodular is nonsingular");
            let seed = sampler.torus_seed(map.dim(), &mut rng);
            let rec = monomial_orbit_record(&map, &seed, checks.horizon)
                .expect("torus seed is nonzero");
            let lambda1 =
                monomial_dyndeg(&map, 1, tol).map_err(|e| CliError::Usage(e.to_string()))?;
            let check = check_alpha_bound(&rec, &lambda1, checks.slack)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            alpha_orbits += 1;
            if !check.pass {
                alpha_failures.push(AlphaFailure {
                    matrix: check.map_id,
                    seed: check.seed,
                    slope: check.alpha.slope,
                    bound: check.bound,
                });
            }
        }
    }

    let failed = !law_violations.is_empty() || !alpha_failures.is_empty();
    let payload = VerifyPayload {
        law_matrices,
        law_power_checks,
        law_concavity_checks,
        law_violations,
        alpha_orbits,
        alpha_failures,
    };
    emit(
        out,
        &json_bytes(&loaded.config_hash, loaded.rng_seed, payload)?,
    )?;
    if failed {
        return Err(CliError::Violation(
            "verification found violations (see report)".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// interpolate
// ---------------------------------------------------------------------------

pub fn cmd_interpolate(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let instance = build_map(loaded)?;
    let horizon = loaded.config.horizon_or(40);
    let d_max = loaded
        .config
        .d_max
        .ok_or_else(|| CliError::Usage("config requires \"d_max\"".into()))?;
    let points = match &instance {
        MapInstance::Monomial(m) => {
            let seed = torus_seed(loaded, m.dim())?;
            monomial_orbit_points(m, &seed, horizon)
                .map_err(|e| CliError::Usage(format!("orbit failed: {}", e)))?
        }
        MapInstance::Homogeneous(f) => {
            let seed = projective_seed(loaded, f.dim())?;
            let rec = iterate_orbit(f, &seed, horizon);
            rec.points.expect("general path retains points")
        }
    };
    let mut csv = CsvTable::new(
        &loaded.config_hash,
        loaded.rng_seed,
        &[
            ("map", loaded.config.require_map()?.id()),
            ("points", points.len().to_string()),
        ],
    );
    csv.header(&[
        "d",
        "monomials",
        "points",
        "rank",
        "kernel_dim",
        "underdetermined",
    ]);
    for d in 1..=d_max {
        let report =
            orbit_zariski_test(&points, d).map_err(|e| CliError::Usage(e.to_string()))?;
        csv.row(&[
            d.to_string(),
            report.monomial_count.to_string(),
            report.point_count.to_string(),
            report.rank.to_string(),
            report.kernel_dim.to_string(),
            report.underdetermined.to_string(),
        ]);
    }
    emit(out, &csv.into_bytes())
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

pub fn cmd_search(loaded: &LoadedConfig, out: Option<&Path>) -> Result<(), CliError> {
    let instance = build_map(loaded)?;
    let horizon = loaded.config.horizon_or(100);
    let eps = loaded.config.eps.unwrap_or(0.05);
    let tol = loaded.config.tol_or(1e-9);
    let sampler_cfg = loaded
        .config
        .sampler
        .ok_or_else(|| CliError::Usage("config requires \"sampler\"".into()))?;
    let sampler = SeedSampler {
        count: sampler_cfg.count,
        coord_bound: sampler_cfg.coord_bound,
    };
    let lambda1 = match &instance {
        MapInstance::Monomial(m) => {
            monomial_dyndeg(m, 1, tol).map_err(|e| CliError::Usage(e.to_string()))?
        }
        MapInstance::Homogeneous(f) => {
            let cap = loaded.config.effective_term_cap();
            let seq = degree_sequence(f, loaded.config.horizon_or(12).min(12), cap);
            lambda1_estimate(&seq).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(loaded.rng_seed);
    let outcome = high_alpha_search(&instance, &sampler, &mut rng, horizon, eps, &lambda1);

    let mut csv = CsvTable::new(
        &loaded.config_hash,
        loaded.rng_seed,
        &[
            ("map", loaded.config.require_map()?.id()),
            ("lambda1_upper", fmt_f64(outcome.lambda1_upper)),
            ("threshold", fmt_f64(outcome.threshold)),
            ("hits", outcome.hits.len().to_string()),
            ("skipped", outcome.skipped.to_string()),
        ],
    );
    csv.header(&["rank", "seed", "slope", "cesaro", "status", "hit"]);
    for (rank, entry) in outcome.ranked.iter().enumerate() {
        let hit = entry.alpha.slope >= outcome.threshold;
        csv.row(&[
            rank.to_string(),
            format!("\"{}\"", entry.seed),
            fmt_f64(entry.alpha.slope),
            fmt_f64(entry.alpha.cesaro),
            entry.status.to_string(),
            hit.to_string(),
        ]);
    }
    emit(out, &csv.into_bytes())
}
