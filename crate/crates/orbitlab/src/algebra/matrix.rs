//! Square matrices over the integers: exact products and powers, Bareiss
//! determinants, exterior powers by minors, and integer kernel bases.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("exterior power index {index} out of range for dimension {dim}")]
    ExteriorIndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
}

/// Row-major square matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        IntMatrix { n, entries }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix::from_fn(n, |i, j| rows[i][j].clone().into())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix::from_fn(n, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::from_fn(n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n)
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        IntMatrix::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        IntMatrix::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        let mut result = IntMatrix::identity(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Maximum absolute row sum (the operator infinity norm).
    pub fn inf_norm(&self) -> BigInt {
        self.rows()
            .map(|r| r.iter().map(|e| e.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }

    /// Fraction-free Bareiss determinant.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self.rows().map(|r| r.to_vec()).collect();
        let mut prev = BigInt::one();
        let mut sign = 1i8;
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = &num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let k = rows.len();
        IntMatrix::from_fn(k, |i, j| self.get(rows[i], cols[j]).clone()).det()
    }

    /// `i`-th exterior power: rows and columns indexed by size-`i` subsets in
    /// lexicographic order, entries the corresponding minors. `∧⁰A = (1)` and
    /// `∧ⁿA = (det A)`.
    pub fn exterior_power(&self, i: usize) -> Result<IntMatrix, MatrixError> {
        if i > self.n {
            return Err(MatrixError::ExteriorIndexOutOfRange {
                index: i,
                dim: self.n,
            });
        }
        if i == 0 {
            return Ok(IntMatrix::from_rows(&[vec![BigInt::one()]]));
        }
        let subsets: Vec<Vec<usize>> = (0..self.n).combinations(i).collect();
        let m = subsets.len();
        Ok(IntMatrix::from_fn(m, |r, c| {
            self.minor(&subsets[r], &subsets[c])
        }))
    }

    /// Basis of the integer kernel lattice `{v : Av = 0}`, computed by
    /// unimodular column reduction of `A` tracked on an identity block.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.n;
        // work columns of A and of the transform U
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|j| (0..n).map(|i| self.get(i, j).clone()).collect())
            .collect();
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let mut pivot_col = 0;
        for row in 0..n {
            if pivot_col >= n {
                break;
            }
            // clear row `row` across columns pivot_col..n down to one entry
            loop {
                let mut nonzero: Vec<usize> = (pivot_col..n)
                    .filter(|&j| !a[j][row].is_zero())
                    .collect();
                if nonzero.len() <= 1 {
                    break;
                }
                // column with smallest nonzero |entry| leads the reduction
                nonzero.sort_by_key(|&j| a[j][row].abs());
                let lead = nonzero[0];
                for &j in &nonzero[1..] {
                    let q = &a[j][row] / &a[lead][row];
                    if !q.is_zero() {
                        for i in 0..n {
                            let t = &a[lead][i] * &q;
                            a[j][i] -= t;
                            let t = &u[lead][i] * &q;
                            u[j][i] -= t;
                        }
                    }
                }
            }
            if let Some(j) = (pivot_col..n).find(|&j| !a[j][row].is_zero()) {
                a.swap(pivot_col, j);
                u.swap(pivot_col, j);
                pivot_col += 1;
            }
        }
        (pivot_col..n)
            .filter(|&j| a[j].iter().all(|e| e.is_zero()))
            .map(|j| normalize_kernel_vector(u[j].clone()))
            .collect()
    }
}

fn normalize_kernel_vector(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in &mut v {
                *e = -&*e;
            }
        }
    }
    v
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", row.iter().map(|e| e.to_string()).join(","))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circulant() -> IntMatrix {
        IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])
    }

    #[test]
    fn identity_and_products() {
        let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let id = IntMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        assert_eq!(a.pow(2), a.mul(&a));
        assert_eq!(a.pow(0), id);
    }

    #[test]
    fn determinants() {
        assert_eq!(circulant().det(), BigInt::from(2));
        let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), BigInt::one());
        let sing = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.det(), BigInt::zero());
    }

    #[test]
    fn exterior_first_is_identity_map() {
        let a = circulant();
        assert_eq!(a.exterior_power(1).unwrap(), a);
    }

    #[test]
    fn exterior_top_is_determinant() {
        // oracle: cofactor expansion gives det = 2
        let a = circulant();
        let top = a.exterior_power(3).unwrap();
        assert_eq!(top.dim(), 1);
        assert_eq!(*top.get(0, 0), BigInt::from(2));
    }

    #[test]
    fn exterior_second_of_circulant() {
        // hand-computed 2x2 minors on subsets {01},{02},{12}
        let a = circulant();
        let e2 = a.exterior_power(2).unwrap();
        let expect = IntMatrix::from_i64_rows(&[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1]]);
        assert_eq!(e2, expect);
    }

    #[test]
    fn exterior_index_out_of_range() {
        let a = circulant();
        assert!(matches!(
            a.exterior_power(4),
            Err(MatrixError::ExteriorIndexOutOfRange { index: 4, dim: 3 })
        ));
    }

    #[test]
    fn exterior_multiplicativity_small() {
        let a = circulant();
        let b = IntMatrix::from_i64_rows(&[&[0, 1, 2], &[1, -1, 0], &[2, 0, 1]]);
        for i in 0..=3 {
            let lhs = a.mul(&b).exterior_power(i).unwrap();
            let rhs = a.exterior_power(i).unwrap().mul(&b.exterior_power(i).unwrap());
            assert_eq!(lhs, rhs, "i = {}", i);
        }
    }

    #[test]
    fn kernel_of_identity_minus_identity() {
        let n = 3;
        let z = IntMatrix::identity(n).sub(&IntMatrix::identity(n));
        let basis = z.kernel_basis();
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn kernel_of_nonsingular_is_empty() {
        let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert!(a.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_swap_fixed_vector() {
        // A^T - I for the 2-variable swap: kernel spanned by (1, 1)
        let swap = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let m = swap.transpose().sub(&IntMatrix::identity(2));
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = IntMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(|e| e.is_zero()));
        }
    }
}
