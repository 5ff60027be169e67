//! Return-set analysis: exact membership of orbit points in a hypersurface,
//! and a greedy decomposition of the truncated return set into arithmetic
//! progressions plus a finite residual.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::algebra::MultiPoly;

use super::{OrbitRecord, OrbitsError};

/// One extracted arithmetic progression of return indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progression {
    pub start: usize,
    pub step: usize,
    pub len: usize,
    /// The next term would fall beyond the observed horizon, i.e. the data
    /// is consistent with the progression continuing forever.
    pub open_ended: bool,
}

impl Progression {
    pub fn contains(&self, n: usize) -> bool {
        n >= self.start
            && (n - self.start).is_multiple_of(self.step)
            && (n - self.start) / self.step < self.len
    }
}

/// Decomposition of a truncated return set. The decomposition is a
/// consistency exhibit, not a certificate: truncated data can never prove
/// the infinite structure.
#[derive(Debug, Clone)]
pub struct ReturnSetReport {
    /// Indices `n` with `w(f^n(x)) = 0`, in order.
    pub returns: Vec<usize>,
    pub progressions: Vec<Progression>,
    /// Residual indices not captured by any progression.
    pub finite_set: Vec<usize>,
    /// True when no residual index falls in the last quarter of the horizon
    /// (every late return is explained by a progression).
    pub tail_consistent: bool,
    pub horizon: usize,
}

/// Exact return-set test of the record's points against the hypersurface
/// `w = 0`, followed by greedy progression extraction: repeatedly remove the
/// longest arithmetic progression (ties: smaller step, then smaller start)
/// of length at least 3; the remainder is the finite set.
pub fn return_set(rec: &OrbitRecord, w: &MultiPoly) -> Result<ReturnSetReport, OrbitsError> {
    let points = rec.points.as_ref().ok_or(OrbitsError::PointsElided)?;
    if w.is_zero() {
        return Err(OrbitsError::ZeroPolynomial);
    }
    if w.homogeneous_degree().is_none() {
        return Err(OrbitsError::NotHomogeneous);
    }
    let nvars = points.first().ok_or(OrbitsError::NoPoints)?.coords().len();
    if w.nvars() != nvars {
        return Err(OrbitsError::VariableMismatch {
            poly: w.nvars(),
            points: nvars,
        });
    }
    let returns: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| w.eval(p.coords()).is_zero())
        .map(|(n, _)| n)
        .collect();
    let horizon = points.len() - 1;

    let mut remaining: BTreeSet<usize> = returns.iter().copied().collect();
    let mut progressions = Vec::new();
    while let Some(best) = best_progression(&remaining) {
        if best.len < 3 {
            break;
        }
        for i in 0..best.len {
            remaining.remove(&(best.start + i * best.step));
        }
        progressions.push(Progression {
            open_ended: best.start + best.len * best.step > horizon,
            ..best
        });
    }
    let finite_set: Vec<usize> = remaining.into_iter().collect();
    let tail_cut = horizon - horizon / 4;
    let tail_consistent = finite_set.iter().all(|&n| n < tail_cut);
    Ok(ReturnSetReport {
        returns,
        progressions,
        finite_set,
        tail_consistent,
        horizon,
    })
}

/// Longest progression inside `set` (length may be < 3; the caller decides).
fn best_progression(set: &BTreeSet<usize>) -> Option<Progression> {
    if set.len() < 2 {
        return None;
    }
    let items: Vec<usize> = set.iter().copied().collect();
    let mut best: Option<Progression> = None;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            let start = items[i];
            let step = items[j] - items[i];
            let mut len = 2;
            while set.contains(&(start + len * step)) {
                len += 1;
            }
            let cand = Progression {
                start,
                step,
                len,
                open_ended: false,
            };
            let better = match &best {
                None => true,
                Some(b) => {
                    (cand.len, std::cmp::Reverse(cand.step), std::cmp::Reverse(cand.start))
                        > (b.len, std::cmp::Reverse(b.step), std::cmp::Reverse(b.start))
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best
}
