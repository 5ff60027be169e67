//! Monomial self-maps of the torus, `x ↦ x^A` for a nonsingular integer
//! exponent matrix `A`, together with their projective realizations.
//!
//! This is the fast-path map class: all dynamical degrees are exactly
//! computable from exterior powers of `A`, and orbits can be tracked on
//! exponent vectors instead of materialized coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::poly::MultiPoly;
use crate::algebra::IntMatrix;

use super::{MapError, RationalMapPn};

/// Exponent-matrix map acting on the torus by `x^v ↦ x^(Av)` coordinatewise:
/// coordinate `i` of the image is `prod_j x_j^(A[i][j])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    matrix: IntMatrix,
}

impl MonomialMap {
    /// Requires `det A != 0` (dominance).
    pub fn new(matrix: IntMatrix) -> Result<Self, MapError> {
        if matrix.det().is_zero() {
            return Err(MapError::SingularMatrix);
        }
        Ok(MonomialMap { matrix })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, MapError> {
        Self::new(IntMatrix::from_i64_rows(rows))
    }

    /// Torus dimension `n`; the projective realization lives on `P^n`.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Birational on the torus iff the inverse exponent matrix is integral,
    /// i.e. `det A = ±1`.
    pub fn is_birational(&self) -> bool {
        self.matrix.det().abs() == BigInt::from(1)
    }

    /// Composition corresponds to the exponent-matrix product.
    pub fn compose(&self, other: &MonomialMap) -> Result<MonomialMap, MapError> {
        MonomialMap::new(self.matrix.mul(&other.matrix))
    }

    pub fn pow(&self, e: u32) -> Result<MonomialMap, MapError> {
        MonomialMap::new(self.matrix.pow(e))
    }

    /// Basis of the lattice of invariant monomial exponents: `x^v ∘ f_A =
    /// x^(Aᵀv)`, so invariance is the integer kernel of `Aᵀ - I`. An empty
    /// basis means no nonconstant invariant *monomial* function exists;
    /// non-monomial invariants are not ruled out.
    pub fn invariant_monomials(&self) -> Vec<Vec<BigInt>> {
        let n = self.matrix.dim();
        self.matrix
            .transpose()
            .sub(&IntMatrix::identity(n))
            .kernel_basis()
    }

    /// Image of an affine torus point (all coordinates nonzero):
    /// coordinate `i` is `prod_j t_j^(A[i][j])`.
    pub fn apply_affine(&self, point: &[BigRational]) -> Result<Vec<BigRational>, MapError> {
        let n = self.dim();
        assert_eq!(point.len(), n);
        if point.iter().any(|t| t.is_zero()) {
            return Err(MapError::ZeroPoint);
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = BigRational::from(BigInt::from(1));
            for (j, t) in point.iter().enumerate() {
                let e = self.matrix.get(i, j);
                let mag = e
                    .abs()
                    .to_i32()
                    .ok_or(MapError::ExponentOverflow)?;
                let p = t.pow(mag);
                if e.is_negative() {
                    acc /= p;
                } else {
                    acc *= p;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Homogenization to `P^n`: in the chart `t_j = X_{j-1} / X_n`, each
    /// coordinate is cleared by the minimal common monomial in the variables
    /// and the extra coordinate, then the tuple is gcd-reduced.
    pub fn to_rational(&self) -> Result<RationalMapPn, MapError> {
        let n = self.dim();
        let nvars = n + 1;
        let entry = |i: usize, j: usize| -> Result<i64, MapError> {
            self.matrix.get(i, j).to_i64().ok_or(MapError::ExponentOverflow)
        };
        // clearing exponents per variable and for the extra coordinate
        let mut var_clear = vec![0i64; n];
        for j in 0..n {
            let min = (0..n).map(|i| entry(i, j)).collect::<Result<Vec<_>, _>>()?;
            let min = min.into_iter().min().unwrap();
            var_clear[j] = (-min).max(0);
        }
        let row_sums: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|j| entry(i, j)).sum::<Result<i64, _>>())
            .collect::<Result<_, _>>()?;
        let z_clear = row_sums.iter().copied().max().unwrap().max(0);

        let to_u32 = |v: i64| -> Result<u32, MapError> {
            u32::try_from(v).map_err(|_| MapError::ExponentOverflow)
        };
        let mut coords = Vec::with_capacity(nvars);
        for i in 0..n {
            let mut exps = vec![0u32; nvars];
            for j in 0..n {
                exps[j] = to_u32(entry(i, j)? + var_clear[j])?;
            }
            exps[n] = to_u32(z_clear - row_sums[i])?;
            coords.push(MultiPoly::monomial(nvars, exps, 1));
        }
        let mut exps = vec![0u32; nvars];
        for j in 0..n {
            exps[j] = to_u32(var_clear[j])?;
        }
        exps[n] = to_u32(z_clear)?;
        coords.push(MultiPoly::monomial(nvars, exps, 1));

        Ok(RationalMapPn::reduce_map(coords)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::maps::ProjPointQ;

    fn map(rows: &[&[i64]]) -> MonomialMap {
        MonomialMap::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn rejects_singular_matrix() {
        let m = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(MonomialMap::new(m).unwrap_err(), MapError::SingularMatrix);
    }

    #[test]
    fn birationality_is_unit_determinant() {
        assert!(map(&[&[2, 1], &[1, 1]]).is_birational());
        assert!(!map(&[&[2, 0], &[0, 2]]).is_birational());
        assert!(map(&[&[0, 1], &[1, 0]]).is_birational());
        assert!(map(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]).is_birational());
    }

    #[test]
    fn homogenization_hand_oracle() {
        // affine (x, y) -> (x^2 y, x y): (X^2 Y : X Y Z : Z^3) on P^2
        let f = map(&[&[2, 1], &[1, 1]]).to_rational().unwrap();
        assert_eq!(f.degree(), 3);
        let expect = [
            parse_poly("x0^2*x1", 3).unwrap(),
            parse_poly("x0*x1*x2", 3).unwrap(),
            parse_poly("x2^3", 3).unwrap(),
        ];
        assert_eq!(f.coords(), &expect[..]);
    }

    #[test]
    fn homogenization_identity() {
        let f = map(&[&[1, 0], &[0, 1]]).to_rational().unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn homogenization_inversion_swaps() {
        // x -> 1/x on P^1 is the coordinate swap
        let f = map(&[&[-1]]).to_rational().unwrap();
        let expect = [
            parse_poly("x1", 2).unwrap(),
            parse_poly("x0", 2).unwrap(),
        ];
        assert_eq!(f.coords(), &expect[..]);
    }

    #[test]
    fn invariant_monomials_identity_full_lattice() {
        let basis = map(&[&[1, 0], &[0, 1]]).invariant_monomials();
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn invariant_monomials_perron_empty() {
        // det(A^T - I) = -1 for [[2,1],[1,1]]: no invariant monomials
        let basis = map(&[&[2, 1], &[1, 1]]).invariant_monomials();
        assert!(basis.is_empty());
    }

    #[test]
    fn invariant_monomials_swap() {
        // swap fixes xy: kernel spanned by (1, 1)
        let basis = map(&[&[0, 1], &[1, 0]]).invariant_monomials();
        assert_eq!(basis, vec![vec![BigInt::from(1), BigInt::from(1)]]);
    }

    #[test]
    fn invariant_monomial_block_fixed_coordinate() {
        // x3 is invariant: fixed vector (0,0,1)
        let basis = map(&[&[1, 1, 0], &[1, 0, 0], &[0, 0, 1]]).invariant_monomials();
        assert_eq!(basis, vec![vec![BigInt::zero(), BigInt::zero(), BigInt::from(1)]]);
    }

    #[test]
    fn pipelines_commute_on_matrix_product() {
        let a = map(&[&[2, 1], &[1, 1]]);
        let b = map(&[&[0, 1], &[1, 0]]);
        let product = a.compose(&b).unwrap().to_rational().unwrap();
        let composed = a
            .to_rational()
            .unwrap()
            .compose(&b.to_rational().unwrap())
            .unwrap();
        assert_eq!(product, composed);
    }

    #[test]
    fn projective_realization_matches_affine_action() {
        let a = map(&[&[2, 1], &[1, -1]]);
        let f = a.to_rational().unwrap();
        let t = [
            BigRational::new(BigInt::from(2), BigInt::from(3)),
            BigRational::new(BigInt::from(-5), BigInt::from(1)),
        ];
        let image = a.apply_affine(&t).unwrap();
        let via_proj = f.evaluate(&ProjPointQ::from_affine(&t).unwrap()).unwrap();
        assert_eq!(via_proj, ProjPointQ::from_affine(&image).unwrap());
    }
}
