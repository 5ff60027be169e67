//! Self-maps of projective space: gcd-reduced homogeneous coordinate tuples,
//! composition, pointwise evaluation with indeterminacy detection, and the
//! monomial-map subclass.

pub mod monomial;
pub mod point;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::parse::parse_poly;
use crate::algebra::poly::{poly_gcd, MultiPoly, PolyError};
use crate::algebra::ParseError;

pub use monomial::MonomialMap;
pub use point::ProjPointQ;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("coordinates must be homogeneous")]
    NotHomogeneous,
    #[error("coordinates must share one degree (found {0} and {1})")]
    MixedDegrees(u32, u32),
    #[error("all coordinates are zero")]
    AllCoordsZero,
    #[error("map reduces to a constant tuple, not a self-map")]
    ConstantMap,
    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,
    #[error("dimension mismatch: map on P^{map_dim}, point in P^{point_dim}")]
    DimensionMismatch { map_dim: usize, point_dim: usize },
    #[error("point lies in the indeterminacy locus: all coordinates vanish")]
    Indeterminate,
    #[error("exponent matrix must be nonsingular")]
    SingularMatrix,
    #[error("exponent overflow while homogenizing")]
    ExponentOverflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Dominant-rational-map data on `P^n`: `n+1` homogeneous polynomials of one
/// degree `d >= 1` in the variables `x0..xn`, with no common polynomial
/// factor. Integer content is retained: projective coordinates are defined
/// up to scalar, and keeping content makes composition exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMapPn {
    dim: usize,
    degree: u32,
    coords: Vec<MultiPoly>,
}

impl RationalMapPn {
    /// Validate and reduce a raw coordinate tuple. Returns the map together
    /// with the removed common factor (`1` when already reduced).
    pub fn reduce_map(raw: Vec<MultiPoly>) -> Result<(Self, MultiPoly), MapError> {
        let nvars = match raw.first() {
            None => return Err(MapError::AllCoordsZero),
            Some(p) => p.nvars(),
        };
        assert!(raw.iter().all(|p| p.nvars() == nvars), "nvars mismatch");
        assert_eq!(raw.len(), nvars, "P^n needs n+1 coordinates in n+1 variables");
        if raw.iter().all(|p| p.is_zero()) {
            return Err(MapError::AllCoordsZero);
        }
        let mut degree: Option<u32> = None;
        for p in &raw {
            if p.is_zero() {
                continue;
            }
            let d = p.homogeneous_degree().ok_or(MapError::NotHomogeneous)?;
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return Err(MapError::MixedDegrees(prev, d)),
                _ => {}
            }
        }
        let mut g = MultiPoly::zero(nvars);
        for p in &raw {
            g = poly_gcd(&g, p);
        }
        // only the polynomial part of the gcd is divided out
        let removed = g.primitive_part().normalize_sign();
        let coords: Vec<MultiPoly> = if removed.degree().unwrap_or(0) > 0 {
            raw.iter()
                .map(|p| p.div_exact(&removed).expect("gcd divides"))
                .collect()
        } else {
            raw
        };
        let degree = coords
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.degree().unwrap())
            .max()
            .unwrap();
        if degree == 0 {
            return Err(MapError::ConstantMap);
        }
        Ok((
            RationalMapPn {
                dim: nvars - 1,
                degree,
                coords,
            },
            removed,
        ))
    }

    /// Parse coordinates from polynomial strings in `x0..xn`.
    pub fn from_strings(n: usize, coords: &[String]) -> Result<Self, MapBuildError> {
        if coords.len() != n + 1 {
            return Err(MapBuildError::CoordCount {
                expected: n + 1,
                got: coords.len(),
            });
        }
        let mut polys = Vec::with_capacity(coords.len());
        for (i, src) in coords.iter().enumerate() {
            let p = parse_poly(src, n + 1).map_err(|e| MapBuildError::Parse {
                coord: i,
                source: e,
            })?;
            polys.push(p);
        }
        let (map, _) = Self::reduce_map(polys)?;
        Ok(map)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn term_count(&self) -> usize {
        self.coords.iter().map(|p| p.num_terms()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.degree == 1
            && self
                .coords
                .iter()
                .enumerate()
                .all(|(i, p)| *p == MultiPoly::var(self.dim + 1, i))
    }

    /// Coordinatewise substitution without reduction: the raw tuple of
    /// `self ∘ other`, homogeneous of degree `deg(self) * deg(other)`.
    pub fn compose_raw(&self, other: &RationalMapPn) -> Result<Vec<MultiPoly>, MapError> {
        if self.dim != other.dim {
            return Err(MapError::DimensionMismatch {
                map_dim: self.dim,
                point_dim: other.dim,
            });
        }
        self.coords
            .iter()
            .map(|p| p.compose(other.coords()).map_err(MapError::from))
            .collect()
    }

    /// Reduced composition `self ∘ other`.
    pub fn compose(&self, other: &RationalMapPn) -> Result<RationalMapPn, MapError> {
        let raw = self.compose_raw(other)?;
        Ok(Self::reduce_map(raw)?.0)
    }

    /// Raw coordinate values at a point, before normalization;
    /// `Indeterminate` when every coordinate vanishes.
    pub fn evaluate_raw(&self, p: &ProjPointQ) -> Result<Vec<BigInt>, MapError> {
        if p.dim() != self.dim {
            return Err(MapError::DimensionMismatch {
                map_dim: self.dim,
                point_dim: p.dim(),
            });
        }
        let values: Vec<BigInt> = self.coords.iter().map(|c| c.eval(p.coords())).collect();
        if values.iter().all(|v| v.is_zero()) {
            return Err(MapError::Indeterminate);
        }
        Ok(values)
    }

    /// Evaluate at a point; `Indeterminate` when every coordinate vanishes.
    pub fn evaluate(&self, p: &ProjPointQ) -> Result<ProjPointQ, MapError> {
        let values = self.evaluate_raw(p)?;
        Ok(ProjPointQ::new(values).expect("nonzero checked"))
    }
}

impl fmt::Display for RationalMapPn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Errors from building a map out of its external description.
#[derive(Debug, Error)]
pub enum MapBuildError {
    #[error("expected {expected} coordinates, got {got}")]
    CoordCount { expected: usize, got: usize },
    #[error("coordinate {coord}: {source}")]
    Parse {
        coord: usize,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Wire format for a map, as consumed by the command-line driver.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapDescription {
    Homogeneous { n: usize, coords: Vec<String> },
    Monomial { matrix: Vec<Vec<i64>> },
}

/// A built map of either kind.
#[derive(Debug, Clone)]
pub enum MapInstance {
    Homogeneous(RationalMapPn),
    Monomial(MonomialMap),
}

impl MapDescription {
    pub fn build(&self) -> Result<MapInstance, MapBuildError> {
        match self {
            MapDescription::Homogeneous { n, coords } => Ok(MapInstance::Homogeneous(
                RationalMapPn::from_strings(*n, coords)?,
            )),
            MapDescription::Monomial { matrix } => {
                let m = crate::algebra::IntMatrix::from_rows(matrix);
                Ok(MapInstance::Monomial(MonomialMap::new(m)?))
            }
        }
    }

    /// Stable one-line identifier used in reports.
    pub fn id(&self) -> String {
        match self {
            MapDescription::Homogeneous { n, coords } => {
                format!("homogeneous P^{} ({})", n, coords.join(" : "))
            }
            MapDescription::Monomial { matrix } => {
                let rows: Vec<String> = matrix
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                format!("monomial [{}]", rows.join("; "))
            }
        }
    }
}

/// The standard Cremona involution of the plane, `(x:y:z) -> (yz:xz:xy)`.
pub fn cremona_involution() -> RationalMapPn {
    let coords = vec![
        MultiPoly::monomial(3, vec![0, 1, 1], 1),
        MultiPoly::monomial(3, vec![1, 0, 1], 1),
        MultiPoly::monomial(3, vec![1, 1, 0], 1),
    ];
    RationalMapPn::reduce_map(coords).expect("valid map").0
}

/// The coordinate power map `(x0^d : ... : xn^d)`.
pub fn power_map(n: usize, d: u32) -> RationalMapPn {
    assert!(d >= 1);
    let coords = (0..=n)
        .map(|i| {
            let mut exps = vec![0; n + 1];
            exps[i] = d;
            MultiPoly::monomial(n + 1, exps, 1)
        })
        .collect();
    RationalMapPn::reduce_map(coords).expect("valid map").0
}
