//! Points of projective space over the rationals, held as coprime integer
//! coordinates with a sign-normalized representative.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::MapError;

/// A point of `P^n(Q)`: integer coordinates with gcd 1 and the first nonzero
/// coordinate positive, so equality and hashing see the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPointQ {
    coords: Vec<BigInt>,
}

impl ProjPointQ {
    pub fn new(coords: Vec<BigInt>) -> Result<Self, MapError> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(MapError::ZeroPoint);
        }
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        let mut coords: Vec<BigInt> = coords.iter().map(|c| c / &g).collect();
        if coords.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            for c in &mut coords {
                *c = -&*c;
            }
        }
        Ok(ProjPointQ { coords })
    }

    pub fn from_i64s(coords: &[i64]) -> Result<Self, MapError> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Construct from coordinates already known to be coprime, skipping the
    /// gcd pass; only the sign is normalized.
    pub(crate) fn from_coprime_parts(mut coords: Vec<BigInt>) -> Self {
        debug_assert!(!coords.iter().all(|c| c.is_zero()));
        debug_assert!({
            let mut g = BigInt::zero();
            for c in &coords {
                g = g.gcd(c);
            }
            g.is_one()
        });
        if coords.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            for c in &mut coords {
                *c = -&*c;
            }
        }
        ProjPointQ { coords }
    }

    /// Embed an affine rational tuple `(t_1, .., t_n)` as
    /// `[t_1 : ... : t_n : 1]` with cleared denominators.
    pub fn from_affine(point: &[BigRational]) -> Result<Self, MapError> {
        let mut lcm = BigInt::one();
        for t in point {
            lcm = lcm.lcm(t.denom());
        }
        let mut coords: Vec<BigInt> = point
            .iter()
            .map(|t| t.numer() * (&lcm / t.denom()))
            .collect();
        coords.push(lcm);
        Self::new(coords)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Ambient projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Largest coordinate bit size; the iteration cap watches this.
    pub fn max_bits(&self) -> u64 {
        self.coords.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}
