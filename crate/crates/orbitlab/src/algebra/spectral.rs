//! Certified spectral-radius intervals for integer matrices.
//!
//! Two mechanisms, combined by intersection:
//!
//! * the Gelfand sandwich: for every `k`, `(|tr A^k| / n)^{1/k} <= rho(A) <=
//!   ||A^k||^{1/k}` with the infinity norm — cheap, converges slowly;
//! * for dimension `<= 6`, exact root isolation: `rho(A)^2` is the largest
//!   real root of the monic integer polynomial whose roots are all pairwise
//!   products of eigenvalues of `A` (its power sums are `tr(A^k)^2`), so a
//!   Sturm bisection on that polynomial certifies `rho` to any tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::unipoly::{self, RootBound};

/// Certified enclosure `lower <= rho(A) <= upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralInterval {
    pub lower: f64,
    pub upper: f64,
    /// Highest matrix power inspected.
    pub n_power: u32,
    /// False when the requested tolerance was not reached (dimension > 6
    /// within the iteration cap).
    pub converged: bool,
}

impl SpectralInterval {
    pub fn exact(v: f64, n_power: u32) -> Self {
        SpectralInterval {
            lower: v,
            upper: v,
            n_power,
            converged: true,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    pub fn overlaps(&self, other: &SpectralInterval) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }

    /// Interval for `rho^m` from an interval for `rho`.
    pub fn powi(&self, m: i32) -> SpectralInterval {
        SpectralInterval {
            lower: round_down(self.lower.powi(m)),
            upper: round_up(self.upper.powi(m)),
            n_power: self.n_power,
            converged: self.converged,
        }
    }
}

const ROUNDING_SLACK: f64 = 1e-13;
const SANDWICH_CAP: u32 = 40;
const SANDWICH_SHORT: u32 = 12;
const EXACT_DIM_LIMIT: usize = 6;

fn round_up(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v + v.abs() * ROUNDING_SLACK
    }
}

fn round_down(v: f64) -> f64 {
    (v - v.abs() * ROUNDING_SLACK).max(0.0)
}

/// Natural log of a positive big integer, accurate to a relative 1e-15.
pub(crate) fn ln_big(v: &BigInt) -> f64 {
    debug_assert!(v.is_positive());
    let mag = v.magnitude();
    let bits = mag.bits();
    if bits <= 53 {
        return mag.to_f64().expect("fits f64").ln();
    }
    let shift = bits - 53;
    let top = (mag >> shift).to_f64().expect("53 bits fit");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact f64 value when the integer is small enough to be representable,
/// otherwise a directed-rounded pair.
fn big_to_f64_bounds(v: &BigInt) -> (f64, f64) {
    let abs = v.abs();
    if abs.bits() <= 53 {
        let x = abs.to_f64().expect("fits");
        (x, x)
    } else {
        let x = ln_big(&abs).exp();
        (round_down(x), round_up(x))
    }
}

/// Certified interval containing the spectral radius, of width at most `tol`
/// whenever the matrix dimension allows root isolation.
pub fn spectral_radius(a: &IntMatrix, tol: f64) -> SpectralInterval {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = a.dim();
    assert!(n >= 1, "empty matrix");
    if n == 1 {
        let (lo, hi) = big_to_f64_bounds(a.get(0, 0));
        return SpectralInterval {
            lower: lo,
            upper: hi,
            n_power: 1,
            converged: true,
        };
    }

    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    let mut power = a.clone();
    let mut k_used = 0u32;
    let cap = if n <= EXACT_DIM_LIMIT {
        SANDWICH_SHORT
    } else {
        SANDWICH_CAP
    };
    for k in 1..=cap {
        if k > 1 {
            power = power.mul(a);
        }
        k_used = k;
        let norm = power.inf_norm();
        if norm.is_zero() {
            // nilpotent: rho = 0 exactly
            return SpectralInterval::exact(0.0, k);
        }
        let u_k = if k == 1 {
            big_to_f64_bounds(&norm).1
        } else {
            round_up((ln_big(&norm) / k as f64).exp())
        };
        upper = upper.min(u_k);

        let t = power.trace().abs();
        if !t.is_zero() {
            let n_big = BigInt::from(n);
            let l_k = if (&t % &n_big).is_zero() {
                let q = &t / &n_big;
                let (q_lo, _) = big_to_f64_bounds(&q);
                if k == 1 || q_lo == 1.0 {
                    // k-th roots of exact small integers need no slack at 1
                    q_lo
                } else {
                    round_down(q_lo.powf(1.0 / k as f64))
                }
            } else {
                round_down(((ln_big(&t) - (n as f64).ln()) / k as f64).exp())
            };
            lower = lower.max(l_k);
        }
        if upper - lower <= tol {
            return SpectralInterval {
                lower,
                upper,
                n_power: k,
                converged: true,
            };
        }
    }

    if n > EXACT_DIM_LIMIT {
        return SpectralInterval {
            lower,
            upper,
            n_power: k_used,
            converged: false,
        };
    }

    // Exact path: rho^2 is the largest real root of the composed-square
    // characteristic polynomial, reconstructed from power sums.
    let deg = n * n;
    let mut power_sums = Vec::with_capacity(deg);
    let mut m = a.clone();
    for k in 1..=deg {
        if k > 1 {
            m = m.mul(a);
        }
        let t = m.trace();
        power_sums.push(&t * &t);
    }
    let composed = unipoly::from_power_sums(&power_sums);
    let sqfree = {
        let g = composed.gcd(&composed.derivative());
        composed.div_exact(&g)
    };
    let stop = |lo: &BigRational, hi: &BigRational| {
        let lo_f = rational_to_f64(lo).max(0.0);
        let hi_f = rational_to_f64(hi).max(0.0);
        round_up(hi_f.sqrt()) - round_down(lo_f.sqrt()) <= tol * 0.5
    };
    let (mut lo_f, mut hi_f) = match unipoly::max_real_root(&sqfree, stop) {
        Some(RootBound::Exact(r)) => {
            debug_assert!(!r.is_negative());
            match exact_sqrt(&r) {
                // a point interval is claimed only when the value converts
                // to f64 without the ln/exp detour
                Some(s) if s.numer().bits() <= 53 && s.denom().bits() <= 53 => {
                    let v = rational_to_f64(&s);
                    (v, v)
                }
                _ => {
                    let rf = rational_to_f64(&r).max(0.0);
                    (round_down(rf.sqrt()), round_up(rf.sqrt()))
                }
            }
        }
        Some(RootBound::Interval(lo, hi)) => {
            let lo_f = rational_to_f64(&lo).max(0.0);
            let hi_f = rational_to_f64(&hi).max(0.0);
            (round_down(lo_f.sqrt()), round_up(hi_f.sqrt()))
        }
        // no real root can only mean the zero spectrum was missed upstream
        None => (lower, upper),
    };
    // intersect with the sandwich bounds
    lo_f = lo_f.max(lower);
    hi_f = hi_f.min(upper);
    if lo_f > hi_f {
        // certified bounds disagree only through rounding slack
        let mid = 0.5 * (lo_f + hi_f);
        lo_f = mid;
        hi_f = mid;
    }
    SpectralInterval {
        lower: lo_f,
        upper: hi_f,
        n_power: k_used,
        converged: hi_f - lo_f <= tol,
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    if num.is_zero() {
        return 0.0;
    }
    if num.bits() <= 53 && den.bits() <= 53 {
        // single correctly-rounded division
        return num.to_f64().unwrap() / den.to_f64().unwrap();
    }
    let sign = if num.is_negative() { -1.0 } else { 1.0 };
    sign * (ln_big(&num.abs()) - ln_big(den)).exp()
}

/// Exact square root of a nonnegative rational, when one exists.
fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let num = r.numer();
    let den = r.denom();
    if num.is_negative() {
        return None;
    }
    let sn = num.sqrt();
    let sd = den.sqrt();
    (&sn * &sn == *num && &sd * &sd == *den).then(|| BigRational::new(sn, sd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_exact() {
        let interval = spectral_radius(&IntMatrix::identity(4), 1e-9);
        assert_eq!((interval.lower, interval.upper), (1.0, 1.0));
        assert!(interval.converged);
    }

    #[test]
    fn nilpotent_is_zero() {
        let a = IntMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let interval = spectral_radius(&a, 1e-9);
        assert_eq!((interval.lower, interval.upper), (0.0, 0.0));
    }

    #[test]
    fn companion_of_quadratic() {
        // char poly t^2 - 3t + 1; rho = (3 + sqrt 5)/2
        let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let interval = spectral_radius(&a, 1e-9);
        let expected = (3.0 + 5.0f64.sqrt()) / 2.0;
        assert!(interval.contains(expected), "{:?}", interval);
        assert!(interval.width() <= 1e-9);
        assert!(interval.converged);
    }

    #[test]
    fn permutation_is_exactly_one() {
        let p = IntMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let interval = spectral_radius(&p, 1e-9);
        assert!(interval.contains(1.0));
        assert!(interval.upper <= 1.0 + 1e-12);
        assert!(interval.lower >= 1.0 - 1e-9);
    }

    #[test]
    fn diagonal_dominant_entry() {
        let a = IntMatrix::from_i64_rows(&[&[3, 0], &[0, 2]]);
        let interval = spectral_radius(&a, 1e-9);
        assert!(interval.contains(3.0), "{:?}", interval);
        assert!(interval.width() <= 1e-9);
    }

    #[test]
    fn complex_dominant_pair() {
        // rotation-by-90 block scaled: eigenvalues ±2i, rho = 2
        let a = IntMatrix::from_i64_rows(&[&[0, -2], &[2, 0]]);
        let interval = spectral_radius(&a, 1e-9);
        assert!(interval.contains(2.0), "{:?}", interval);
        assert!(interval.width() <= 1e-9);
    }

    #[test]
    fn fibonacci_golden_ratio() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 0]]);
        let interval = spectral_radius(&a, 1e-12);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!(interval.contains(phi), "{:?}", interval);
        assert!(interval.width() <= 1e-12);
    }

    #[test]
    fn large_dimension_falls_back_to_sandwich() {
        let a = IntMatrix::from_fn(8, |i, j| {
            if i == j {
                BigInt::from(2)
            } else if j == i + 1 {
                BigInt::from(1)
            } else {
                BigInt::zero()
            }
        });
        let interval = spectral_radius(&a, 1e-9);
        assert!(interval.contains(2.0));
        // wide interval is honest: flag reports non-convergence
        assert!(!interval.converged || interval.width() <= 1e-9);
    }
}
