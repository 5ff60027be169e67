//! Weil heights of rational points of projective space, on the natural-log
//! scale, and height streams along orbits.
//!
//! The general path materializes iterates and takes `log max |coordinate|`
//! of the coprime representative. The monomial fast path never materializes
//! coordinates: seed coordinates are split over a pairwise-coprime base, the
//! exponent vectors evolve under the exponent matrix, and the height is
//! reassembled from per-place positive parts plus the archimedean term, so
//! the bit cost grows linearly in the iterate index.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::spectral::ln_big;
use crate::algebra::IntMatrix;
use crate::maps::{MapError, MonomialMap, ProjPointQ, RationalMapPn};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeightsError {
    #[error("torus point must have nonzero coordinates")]
    ZeroCoordinate,
    #[error("seed dimension {got} does not match map dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A Weil height on the natural-log scale; `clamped` is the `max(1, h)`
/// variant entering the arithmetic-degree limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightValue {
    pub h: f64,
}

impl HeightValue {
    pub fn clamped(&self) -> f64 {
        self.h.max(1.0)
    }
}

/// `log max |coordinate|` of the coprime integer representative.
pub fn weil_height(p: &ProjPointQ) -> HeightValue {
    let max = p
        .coords()
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("point has coordinates");
    HeightValue { h: ln_big(&max) }
}

/// Why a height stream stopped before the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// All map coordinates vanished at step `at` (the point `f^at(x)` is in
    /// the indeterminacy locus, so `f^(at+1)(x)` does not exist).
    Indeterminate { at: usize },
    /// A coordinate exceeded the bit-size cap at step `at`.
    BitCap { at: usize },
}

/// Heights along an orbit, index `n` holding `h(f^n(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightTrack {
    pub heights: Vec<HeightValue>,
    pub truncation: Option<Truncation>,
}

/// Coordinate bit-size cap for materialized iteration paths; heights grow
/// geometrically, so these horizons are inherently short.
pub const DEFAULT_BIT_CAP: u64 = 1 << 20;

/// Heights of the normalized iterates `x, f(x), .., f^N(x)`, truncating at
/// indeterminacy or at the coordinate bit-size cap.
pub fn orbit_heights(f: &RationalMapPn, x: &ProjPointQ, horizon: usize) -> HeightTrack {
    orbit_heights_capped(f, x, horizon, DEFAULT_BIT_CAP)
}

pub fn orbit_heights_capped(
    f: &RationalMapPn,
    x: &ProjPointQ,
    horizon: usize,
    bit_cap: u64,
) -> HeightTrack {
    let mut heights = vec![weil_height(x)];
    let mut current = x.clone();
    for n in 0..horizon {
        match f.evaluate_raw(&current) {
            Ok(values) => {
                // raw bits bound normalized bits; checking first avoids
                // paying a huge gcd for a point that would be dropped
                if values.iter().map(|v| v.bits()).max().unwrap() > bit_cap {
                    return HeightTrack {
                        heights,
                        truncation: Some(Truncation::BitCap { at: n + 1 }),
                    };
                }
                let next = ProjPointQ::new(values).expect("nonzero checked");
                heights.push(weil_height(&next));
                current = next;
            }
            Err(MapError::Indeterminate) => {
                return HeightTrack {
                    heights,
                    truncation: Some(Truncation::Indeterminate { at: n }),
                };
            }
            Err(e) => unreachable!("evaluation on validated orbit: {e}"),
        }
    }
    HeightTrack {
        heights,
        truncation: None,
    }
}

// ---------------------------------------------------------------------------
// monomial fast path
// ---------------------------------------------------------------------------

/// Pairwise-coprime base covering every input: repeatedly replace a sharing
/// pair `{x, y}` by `{x/g, y/g, g}`. The inputs' product strictly decreases,
/// so the refinement terminates; every input then factors over the base.
fn coprime_base(values: &[BigUint]) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = values
        .iter()
        .filter(|v| !v.is_one() && !v.is_zero())
        .cloned()
        .collect();
    'outer: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let a = &base[i] / &g;
                    let b = &base[j] / &g;
                    let mut next: Vec<BigUint> = Vec::with_capacity(base.len() + 1);
                    for (k, v) in base.iter().enumerate() {
                        if k != i && k != j {
                            next.push(v.clone());
                        }
                    }
                    for v in [a, b, g] {
                        if !v.is_one() {
                            next.push(v);
                        }
                    }
                    base = next;
                    continue 'outer;
                }
            }
        }
        base.sort();
        base.dedup();
        return base;
    }
}

/// Exponents of `v` over the coprime base; the leftover must be a unit.
fn exponents_over_base(v: &BigUint, base: &[BigUint]) -> Vec<i64> {
    let mut rem = v.clone();
    let mut exps = vec![0i64; base.len()];
    for (k, atom) in base.iter().enumerate() {
        loop {
            let (q, r) = rem.div_rem(atom);
            if r.is_zero() {
                rem = q;
                exps[k] += 1;
            } else {
                break;
            }
        }
    }
    assert!(rem.is_one(), "value does not factor over the coprime base");
    exps
}

/// Exact state of a monomial orbit on the torus: per-coordinate exponent
/// vectors over a pairwise-coprime base, plus sign bits. The base is
/// multiplicatively independent, so two equal states are the same point and
/// conversely — the state doubles as an exact periodicity signature.
#[derive(Debug, Clone)]
pub struct TorusExponentOrbit {
    matrix: IntMatrix,
    base: Vec<BigUint>,
    ln_atoms: Vec<f64>,
    /// Row `i` holds the base exponents of coordinate `i`.
    state: Vec<Vec<BigInt>>,
    /// Bit `i` set when coordinate `i` is negative.
    signs: Vec<u8>,
}

impl TorusExponentOrbit {
    pub fn new(map: &MonomialMap, seed: &[BigRational]) -> Result<Self, HeightsError> {
        let n = map.dim();
        if seed.len() != n {
            return Err(HeightsError::DimensionMismatch {
                expected: n,
                got: seed.len(),
            });
        }
        if seed.iter().any(|t| t.is_zero()) {
            return Err(HeightsError::ZeroCoordinate);
        }
        let mut values = Vec::with_capacity(2 * n);
        for t in seed {
            values.push(t.numer().magnitude().clone());
            values.push(t.denom().magnitude().clone());
        }
        let base = coprime_base(&values);
        let ln_atoms: Vec<f64> = base
            .iter()
            .map(|a| ln_big(&BigInt::from(a.clone())))
            .collect();
        let state: Vec<Vec<BigInt>> = seed
            .iter()
            .map(|t| {
                let num = exponents_over_base(t.numer().magnitude(), &base);
                let den = exponents_over_base(t.denom().magnitude(), &base);
                num.iter()
                    .zip(&den)
                    .map(|(a, b)| BigInt::from(a - b))
                    .collect()
            })
            .collect();
        let signs = seed.iter().map(|t| u8::from(t.is_negative())).collect();
        Ok(TorusExponentOrbit {
            matrix: map.matrix().clone(),
            base,
            ln_atoms,
            state,
            signs,
        })
    }

    /// Height of the projective embedding of the current point.
    pub fn height(&self) -> HeightValue {
        HeightValue {
            h: height_from_exponents(&self.state, &self.ln_atoms),
        }
    }

    /// Advance one step: exponent rows move by the matrix, sign bits by the
    /// matrix parity.
    pub fn step(&mut self) {
        let n = self.matrix.dim();
        let atoms = self.ln_atoms.len();
        let next_state: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..atoms)
                    .map(|k| {
                        (0..n)
                            .map(|j| self.matrix.get(i, j) * &self.state[j][k])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let two = BigInt::from(2);
        let next_signs: Vec<u8> = (0..n)
            .map(|i| {
                (0..n).fold(0u8, |acc, j| {
                    let odd = !(self.matrix.get(i, j) % &two).is_zero();
                    acc ^ (u8::from(odd) & self.signs[j])
                })
            })
            .collect();
        self.state = next_state;
        self.signs = next_signs;
    }

    /// Exact point identity for revisit detection.
    pub fn signature(&self) -> (Vec<Vec<BigInt>>, Vec<u8>) {
        (self.state.clone(), self.signs.clone())
    }

    /// Materialize the current point of `P^n(Q)`. Per-atom valuation shifts
    /// make the coordinates coprime by construction, so no gcd is needed.
    pub fn projective_point(&self) -> ProjPointQ {
        let n = self.state.len();
        let atoms = self.ln_atoms.len();
        let shifts: Vec<BigInt> = (0..atoms)
            .map(|k| {
                let min = self
                    .state
                    .iter()
                    .map(|row| row[k].clone())
                    .min()
                    .unwrap_or_else(BigInt::zero);
                min.min(BigInt::zero())
            })
            .collect();
        let base = self.base_values();
        let monomial = |exps: &dyn Fn(usize) -> BigInt| -> BigInt {
            let mut acc = BigInt::one();
            for (k, atom) in base.iter().enumerate() {
                let e = exps(k);
                debug_assert!(!e.is_negative());
                let e = e.to_u32().expect("clearing exponent fits u32");
                acc *= atom.pow(e);
            }
            acc
        };
        let mut coords: Vec<BigInt> = (0..n)
            .map(|i| monomial(&|k| &self.state[i][k] - &shifts[k]))
            .collect();
        for (i, c) in coords.iter_mut().enumerate() {
            if self.signs[i] == 1 {
                *c = -&*c;
            }
        }
        coords.push(monomial(&|k| -&shifts[k]));
        ProjPointQ::from_coprime_parts(coords)
    }

    fn base_values(&self) -> Vec<BigInt> {
        self.base.iter().map(|a| BigInt::from(a.clone())).collect()
    }
}

/// Height stream of the monomial orbit of a torus point, computed on
/// exponent data alone. Entry `n` equals the Weil height of the projective
/// embedding of `x^(A^n)`, exactly (up to final float rounding).
pub fn monomial_orbit_heights(
    map: &MonomialMap,
    seed: &[BigRational],
    horizon: usize,
) -> Result<HeightTrack, HeightsError> {
    let mut orbit = TorusExponentOrbit::new(map, seed)?;
    let mut heights = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        heights.push(orbit.height());
        if n < horizon {
            orbit.step();
        }
    }
    Ok(HeightTrack {
        heights,
        truncation: None,
    })
}

/// Weil height of `[y_1 : .. : y_n : 1]` where `y_i = ± prod_k atom_k^(e_ik)`:
/// per coprime atom the positive part of the largest denominator exponent,
/// plus the clamped archimedean term.
fn height_from_exponents(state: &[Vec<BigInt>], ln_atoms: &[f64]) -> f64 {
    let mut h = 0.0;
    for (k, ln_a) in ln_atoms.iter().enumerate() {
        let min_exp = state
            .iter()
            .map(|row| row[k].clone())
            .min()
            .unwrap_or_else(BigInt::zero);
        if min_exp.is_negative() {
            let denom_exp = -min_exp;
            h += big_to_f64(&denom_exp) * ln_a;
        }
    }
    let arch = state
        .iter()
        .map(|row| {
            row.iter()
                .zip(ln_atoms)
                .map(|(e, ln_a)| big_to_f64(e) * ln_a)
                .sum::<f64>()
        })
        .fold(0.0f64, f64::max);
    h + arch
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().expect("exponent fits f64 range")
}
