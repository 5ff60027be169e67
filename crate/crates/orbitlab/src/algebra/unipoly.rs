//! Dense univariate integer polynomials: just enough machinery for exact
//! real-root isolation of characteristic polynomials (Sturm chains over
//! primitive integer sequences, rational-endpoint bisection).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients by ascending power, trimmed; zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero")
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.is_zero() || self.degree() == 0 {
            return Self::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by the positive content; sign pattern is preserved.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        UniPoly {
            coeffs: self.coeffs.iter().map(|k| k / &c).collect(),
        }
    }

    fn mul_scalar(&self, k: &BigInt) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..len)
                .map(|i| self.coeff(i) - other.coeff(i))
                .collect(),
        )
    }

    fn shift_mul(&self, k: &BigInt, shift: usize) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); shift];
        coeffs.extend(self.coeffs.iter().map(|c| c * k));
        UniPoly::new(coeffs)
    }

    /// Exact division; panics when the division is not exact.
    pub fn div_exact(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Self::zero();
        }
        let mut rem = self.clone();
        let mut quot = vec![BigInt::zero(); self.degree() + 1];
        while !rem.is_zero() && rem.degree() >= d.degree() {
            let shift = rem.degree() - d.degree();
            let (q, r) = rem.lc().div_rem(d.lc());
            assert!(r.is_zero(), "non-exact univariate division");
            rem = rem.sub(&d.shift_mul(&q, shift));
            quot[shift] = q;
        }
        assert!(rem.is_zero(), "non-exact univariate division");
        UniPoly::new(quot)
    }

    /// Pseudo-remainder scaled by an even power of `lc(d)`, so the sign
    /// pattern matches the rational remainder.
    fn prem_sign_safe(&self, d: &Self) -> Self {
        let db = d.degree();
        let lcd = d.lc().clone();
        let mut r = self.clone();
        let mut scalings = 0u32;
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let lr = r.lc().clone();
            r = r.mul_scalar(&lcd).sub(&d.shift_mul(&lr, shift));
            scalings += 1;
        }
        if scalings % 2 == 1 {
            r = r.mul_scalar(&lcd);
        }
        r
    }

    /// Primitive-PRS gcd, positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        let ic = self.content().gcd(&other.content());
        if a.is_zero() {
            return normalize_lc(b.mul_scalar(&ic));
        }
        if b.is_zero() {
            return normalize_lc(a.mul_scalar(&ic));
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                break;
            }
            if b.degree() == 0 {
                return normalize_lc(UniPoly::new(vec![ic]));
            }
            let r = a.prem_sign_safe(&b).primitive();
            a = b;
            b = r;
        }
        normalize_lc(a.primitive().mul_scalar(&ic))
    }

    /// Sign of the value at the rational point `num/den` (`den > 0`).
    /// Evaluates `den^d * p(num/den)` in integers by Horner.
    pub fn sign_at(&self, num: &BigInt, den: &BigInt) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let d = self.degree();
        let mut den_pow = BigInt::one();
        let mut acc = BigInt::zero();
        for i in (0..=d).rev() {
            acc = acc * num + &self.coeffs[i] * &den_pow;
            if i > 0 {
                den_pow *= den;
            }
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn sign_at_rational(&self, x: &BigRational) -> i8 {
        self.sign_at(x.numer(), x.denom())
    }

    /// Strict bound `B` with every real root in `(-B, B)`.
    pub fn cauchy_bound(&self) -> BigRational {
        let d = self.degree();
        let lc = self.coeffs[d].abs();
        let max_ratio = self.coeffs[..d]
            .iter()
            .map(|c| BigRational::new(c.abs(), lc.clone()))
            .max()
            .unwrap_or_else(BigRational::zero);
        max_ratio + BigRational::one()
    }
}

fn normalize_lc(p: UniPoly) -> UniPoly {
    if !p.is_zero() && p.lc().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Monic polynomial of degree `n` with prescribed power sums, via Newton's
/// identities (divisions are exact over the integers).
pub(crate) fn from_power_sums(power_sums: &[BigInt]) -> UniPoly {
    let n = power_sums.len();
    let mut elementary = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &elementary[k - i] * &power_sums[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        assert!(r.is_zero(), "Newton identity division must be exact");
        elementary.push(q);
    }
    // P(s) = sum_k (-1)^k e_k s^(n-k)
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, e) in elementary.iter().enumerate() {
        let c = if k % 2 == 0 { e.clone() } else { -e };
        coeffs[n - k] = c;
    }
    UniPoly::new(coeffs)
}

pub(crate) fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.primitive()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.primitive());
    loop {
        let k = chain.len();
        let r = chain[k - 2].prem_sign_safe(&chain[k - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg().primitive());
    }
    chain
}

/// Sign variations at `x`, zeros dropped.
fn variations(chain: &[UniPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let s = p.sign_at_rational(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub(crate) fn roots_in(chain: &[UniPoly], a: &BigRational, b: &BigRational) -> usize {
    variations(chain, a).saturating_sub(variations(chain, b))
}

pub(crate) enum RootBound {
    /// The maximum real root exactly.
    Exact(BigRational),
    /// The maximum real root lies in `(lo, hi]`.
    Interval(BigRational, BigRational),
}

/// Isolate the largest real root of a squarefree polynomial by Sturm
/// bisection. `stop` decides when the enclosure `(lo, hi]` is tight enough.
pub(crate) fn max_real_root(
    p: &UniPoly,
    stop: impl Fn(&BigRational, &BigRational) -> bool,
) -> Option<RootBound> {
    assert!(!p.is_zero());
    if p.degree() == 0 {
        return None;
    }
    let chain = sturm_chain(p);
    let bound = p.cauchy_bound();
    let mut lo = -bound.clone();
    let mut hi = bound;
    if roots_in(&chain, &lo, &hi) == 0 {
        return None;
    }
    let two = BigRational::from(BigInt::from(2));
    let mut integer_checked = false;
    for _ in 0..500 {
        // invariant: the max root is in (lo, hi] and nothing lies above hi
        if p.sign_at_rational(&hi) == 0 {
            return Some(RootBound::Exact(hi));
        }
        if !integer_checked && (&hi - &lo) < BigRational::one() {
            integer_checked = true;
            let k = hi.floor();
            if k > lo && p.sign_at_rational(&k) == 0 && roots_in(&chain, &k, &hi) == 0 {
                return Some(RootBound::Exact(k));
            }
        }
        if stop(&lo, &hi) {
            break;
        }
        let mid = (&lo + &hi) / &two;
        if roots_in(&chain, &mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(RootBound::Interval(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (s-1)^2 (s+2) = s^3 - 3s + 2
        let p = poly(&[2, -3, 0, 1]);
        let g = p.gcd(&p.derivative());
        assert_eq!(g, poly(&[-1, 1]));
        let sqf = p.div_exact(&g);
        assert_eq!(sqf.degree(), 2);
    }

    #[test]
    fn newton_reconstructs_coefficients() {
        // roots 1, 2, 3: power sums 6, 14, 36
        let p = from_power_sums(&[BigInt::from(6), BigInt::from(14), BigInt::from(36)]);
        assert_eq!(p, poly(&[-6, 11, -6, 1]));
    }

    #[test]
    fn isolates_golden_ratio_square() {
        // s^2 - 3s + 1 has largest root (3+sqrt5)/2
        let p = poly(&[1, -3, 1]);
        let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000_000i64));
        let result = max_real_root(&p, |lo, hi| (hi - lo) < tol).unwrap();
        match result {
            RootBound::Interval(lo, hi) => {
                let phi2 = (3.0 + 5.0f64.sqrt()) / 2.0;
                let lo_f = lo.numer().to_string().parse::<f64>().unwrap()
                    / lo.denom().to_string().parse::<f64>().unwrap();
                let hi_f = hi.numer().to_string().parse::<f64>().unwrap()
                    / hi.denom().to_string().parse::<f64>().unwrap();
                assert!(lo_f <= phi2 && phi2 <= hi_f);
                assert!(hi_f - lo_f < 1e-9);
            }
            RootBound::Exact(_) => panic!("irrational root reported exact"),
        }
    }

    #[test]
    fn detects_exact_integer_root() {
        // (s-1)(s+3)(s+5): max root exactly 1
        let p = poly(&[-15, 7, 7, 1]);
        let result = max_real_root(&p, |lo, hi| {
            (hi - lo) < BigRational::new(BigInt::one(), BigInt::from(1u64 << 40))
        })
        .unwrap();
        match result {
            RootBound::Exact(r) => assert_eq!(r, BigRational::from(BigInt::one())),
            RootBound::Interval(_, _) => panic!("integer root not sharpened"),
        }
    }

    #[test]
    fn no_real_roots() {
        let p = poly(&[1, 0, 1]); // s^2 + 1
        assert!(max_real_root(&p, |_, _| true).is_none());
    }
}
