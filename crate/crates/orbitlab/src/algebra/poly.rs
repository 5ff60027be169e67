//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under the graded
//! lexicographic order, so every polynomial has a unique canonical form and
//! iteration order is deterministic. Coefficients are arbitrary-precision
//! integers; no zero coefficient is ever stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("substitution arity mismatch: polynomial has {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
}

/// Exponent vector of a single term, ordered by graded lex (total degree
/// first, then lexicographic with `x0` most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise divisibility.
    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `x_idx`.
    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        Self::monomial(nvars, exps, 1)
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, coeff: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        let c = coeff.into();
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (exps, coeff) in terms {
            p.add_term(Monomial(exps), coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// Total degree; `None` for the zero polynomial (its degree is the
    /// `-inf` sentinel).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// `Some(d)` if every term has total degree `d`. The zero polynomial is
    /// homogeneous of every degree; it reports `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = match it.next() {
            None => return Some(0),
            Some(m) => m.total_degree(),
        };
        it.all(|m| m.total_degree() == d).then_some(d)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Leading term in graded lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        // iterate over the smaller operand outside
        let (small, big) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = Self::one(self.nvars);
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

    /// Substitute `subs[i]` for variable `i`. All substituents must share a
    /// common variable count.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let out_nvars = subs.first().map(|p| p.nvars).unwrap_or(0);
        for s in subs {
            if s.nvars != out_nvars {
                return Err(PolyError::NvarsMismatch(s.nvars, out_nvars));
            }
        }
        // cache powers of each substituent as they are needed
        let mut powers: Vec<Vec<MultiPoly>> =
            subs.iter().map(|s| vec![MultiPoly::one(out_nvars), s.clone()]).collect();
        let mut out = MultiPoly::zero(out_nvars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(out_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&subs[i]);
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Evaluate at an integer point.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut powers: Vec<Vec<BigInt>> =
            point.iter().map(|x| vec![BigInt::one(), x.clone()]).collect();
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &point[i];
                    cache.push(next);
                }
                t *= &cache[e as usize];
            }
            acc += t;
        }
        acc
    }

    /// Gcd of all coefficients, nonnegative. Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the integer content, keeping the sign of the leading
    /// coefficient.
    pub fn primitive_part(&self) -> MultiPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_exact_scalar(&c).expect("content divides")
    }

    /// Flip signs so the graded-lex leading coefficient is positive.
    pub fn normalize_sign(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn div_exact_scalar(&self, d: &BigInt) -> Option<MultiPoly> {
        assert!(!d.is_zero());
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Exact division; `None` when `self` is not a multiple of `d`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        debug_assert_eq!(self.nvars, d.nvars);
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            if !dm.divides(rm) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qm = rm.div(&dm);
            let t = MultiPoly::monomial(self.nvars, qm.0.clone(), qc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// View as a univariate polynomial in `var`: coefficient polynomials by
    /// exponent, each free of `var`.
    fn coeffs_in_var(&self, var: usize) -> Vec<MultiPoly> {
        let d = match self.degree_in(var) {
            None => return vec![],
            Some(d) => d as usize,
        };
        let mut coeffs = vec![MultiPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut stripped = m.0.clone();
            stripped[var] = 0;
            coeffs[e].add_term(Monomial(stripped), c.clone());
        }
        coeffs
    }

    /// Leading coefficient with respect to a single variable.
    fn lc_in_var(&self, var: usize) -> MultiPoly {
        self.coeffs_in_var(var).pop().unwrap_or_else(|| MultiPoly::zero(self.nvars))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.total_degree() == 0;
            if !abs.is_one() || is_const {
                write!(f, "{}", abs)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut firstvar = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !firstvar {
                    write!(f, "*")?;
                }
                firstvar = false;
                write!(f, "x{}", i)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// gcd
// ---------------------------------------------------------------------------

/// Pseudo-remainder of `a` by `b` in `var` together with the number of times
/// `a` was scaled by `lc(b)`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, var: usize) -> (MultiPoly, u32) {
    let db = b.degree_in(var).expect("divisor nonzero") as i64;
    let lcb = b.lc_in_var(var);
    let nvars = a.nvars;
    let mut r = a.clone();
    let mut scalings = 0u32;
    loop {
        let dr = match r.degree_in(var) {
            None => break,
            Some(d) => d as i64,
        };
        if dr < db {
            break;
        }
        let lcr = r.lc_in_var(var);
        let mut shift = vec![0u32; nvars];
        shift[var] = (dr - db) as u32;
        let shift = MultiPoly::monomial(nvars, shift, 1);
        // r := lc(b)*r - lc(r)*x^(dr-db)*b
        r = r.mul(&lcb).sub(&lcr.mul(&shift).mul(b));
        scalings += 1;
    }
    (r, scalings)
}

/// Greatest common divisor in Z[x0..x_{n-1}], normalized to a positive
/// graded-lex leading coefficient. `gcd(p, 0) = ±p` normalized.
pub fn poly_gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    assert_eq!(p.nvars(), q.nvars(), "gcd requires equal variable counts");
    gcd_inner(p, q).normalize_sign()
}

fn gcd_inner(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let nvars = p.nvars;
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    let icp = p.content();
    let icq = q.content();
    let ic = icp.gcd(&icq);
    let pp = p.div_exact_scalar(&icp).unwrap();
    let qq = q.div_exact_scalar(&icq).unwrap();
    if pp.is_constant() || qq.is_constant() {
        return MultiPoly::constant(nvars, ic);
    }
    // main variable: first one occurring in either primitive part
    let var = (0..nvars)
        .find(|&v| pp.degree_in(v).unwrap_or(0) > 0 || qq.degree_in(v).unwrap_or(0) > 0)
        .expect("non-constant polynomial has a variable");

    let cont_p = content_in_var(&pp, var);
    let cont_q = content_in_var(&qq, var);
    let cont_g = gcd_inner(&cont_p, &cont_q);
    let a = pp.div_exact(&cont_p).expect("content divides");
    let b = qq.div_exact(&cont_q).expect("content divides");

    let prim_gcd = if a.degree_in(var).unwrap_or(0) == 0 || b.degree_in(var).unwrap_or(0) == 0 {
        // one side is free of var after content removal, hence constant
        MultiPoly::one(nvars)
    } else if probe_coprime(&a, &b, var) {
        MultiPoly::one(nvars)
    } else {
        subresultant_gcd(&a, &b, var)
    };
    MultiPoly::constant(nvars, ic)
        .mul(&cont_g)
        .mul(&prim_gcd)
}

/// Gcd of the coefficients of `p` viewed as univariate in `var`.
fn content_in_var(p: &MultiPoly, var: usize) -> MultiPoly {
    let coeffs = p.coeffs_in_var(var);
    let mut g = MultiPoly::zero(p.nvars);
    for c in &coeffs {
        if c.is_zero() {
            continue;
        }
        g = gcd_inner(&g, c);
        if g.is_constant() && g.leading_coeff().is_one() {
            break;
        }
    }
    g.normalize_sign()
}

/// Subresultant polynomial remainder sequence on primitive inputs; returns
/// the primitive part of the last nonzero remainder.
fn subresultant_gcd(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let nvars = a.nvars;
    let (mut r0, mut r1) = if a.degree_in(var) >= b.degree_in(var) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = MultiPoly::one(nvars);
    let mut h = MultiPoly::one(nvars);
    loop {
        if r1.is_zero() {
            break;
        }
        if r1.degree_in(var).unwrap_or(0) == 0 {
            // nonzero remainder constant in var: primitive parts are coprime
            return MultiPoly::one(nvars);
        }
        let delta = r0.degree_in(var).unwrap() - r1.degree_in(var).unwrap();
        let (mut rem, scalings) = pseudo_rem(&r0, &r1, var);
        // bring the remainder to the standard prem scaling lc(r1)^(delta+1)
        let lc1 = r1.lc_in_var(var);
        for _ in scalings..=delta {
            rem = rem.mul(&lc1);
        }
        let divisor = g.mul(&h.pow(delta));
        r0 = r1;
        r1 = match rem.div_exact(&divisor) {
            Some(q) => q,
            None => unreachable!("subresultant division is exact"),
        };
        g = r0.lc_in_var(var);
        if delta > 0 {
            h = g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant h update");
        }
    }
    let cont = content_in_var(&r0, var);
    r0.div_exact(&cont).expect("content divides")
}

// ---------------------------------------------------------------------------
// modular coprimality probe
// ---------------------------------------------------------------------------

const PROBE_PRIME: u64 = (1 << 61) - 1;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PROBE_PRIME as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % PROBE_PRIME as u128) as u64
}

fn big_mod(c: &BigInt) -> u64 {
    let m = (c % BigInt::from(PROBE_PRIME) + BigInt::from(PROBE_PRIME)) % BigInt::from(PROBE_PRIME);
    let digits = m.to_u64_digits().1;
    digits.first().copied().unwrap_or(0)
}

/// Image of `p` modulo the probe prime with all variables except `var`
/// evaluated at `point`; dense coefficients indexed by the exponent of `var`.
fn eval_to_unimod(p: &MultiPoly, var: usize, point: &[u64]) -> Vec<u64> {
    let d = p.degree_in(var).unwrap_or(0) as usize;
    let mut coeffs = vec![0u64; d + 1];
    for (m, c) in &p.terms {
        let mut val = big_mod(c);
        for (i, &e) in m.0.iter().enumerate() {
            if i == var || e == 0 {
                continue;
            }
            let mut pw = 1u64;
            let mut base = point[i];
            let mut k = e;
            while k > 0 {
                if k & 1 == 1 {
                    pw = mulmod(pw, base);
                }
                base = mulmod(base, base);
                k >>= 1;
            }
            val = mulmod(val, pw);
        }
        let idx = m.0[var] as usize;
        coeffs[idx] = addmod(coeffs[idx], val);
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    coeffs
}

fn unimod_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    fn deg(p: &[u64]) -> usize {
        p.len() - 1
    }
    fn trim(p: &mut Vec<u64>) {
        while p.len() > 1 && *p.last().unwrap() == 0 {
            p.pop();
        }
    }
    fn invmod(a: u64) -> u64 {
        // Fermat inverse modulo the probe prime
        let mut result = 1u64;
        let mut base = a;
        let mut e = PROBE_PRIME - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(result, base);
            }
            base = mulmod(base, base);
            e >>= 1;
        }
        result
    }
    loop {
        if b.len() == 1 && b[0] == 0 {
            return deg(&a);
        }
        let lb_inv = invmod(*b.last().unwrap());
        while deg(&a) >= deg(&b) && !(a.len() == 1 && a[0] == 0) {
            let shift = deg(&a) - deg(&b);
            let factor = mulmod(*a.last().unwrap(), lb_inv);
            for i in 0..b.len() {
                let sub = mulmod(factor, b[i]);
                a[i + shift] = (a[i + shift] + PROBE_PRIME - sub) % PROBE_PRIME;
            }
            trim(&mut a);
            if a.len() == 1 && a[0] == 0 {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Certified coprimality probe: evaluate away every variable but `var` at a
/// random point modulo a large prime. When neither leading coefficient
/// vanishes and the univariate images are coprime, the inputs are coprime in
/// `var` (specialization can only increase the gcd degree). A `false` return
/// is never conclusive.
fn probe_coprime(a: &MultiPoly, b: &MultiPoly, var: usize) -> bool {
    let da = a.degree_in(var).unwrap_or(0) as usize;
    let db = b.degree_in(var).unwrap_or(0) as usize;
    let mut state = 0x6f7262697461626cu64; // fixed seed: probe is deterministic
    for _ in 0..2 {
        let point: Vec<u64> = (0..a.nvars)
            .map(|_| 1 + splitmix64(&mut state) % (PROBE_PRIME - 1))
            .collect();
        let ia = eval_to_unimod(a, var, &point);
        let ib = eval_to_unimod(b, var, &point);
        if ia.len() - 1 != da || ib.len() - 1 != db {
            continue; // a leading coefficient vanished; retry
        }
        if unimod_gcd_degree(ia, ib) == 0 {
            return true;
        }
        return false;
    }
    false
}
