//! Search over Gaussian-integer coefficient vectors.

mod sphere;

use std::cmp::Ordering;

use crate::channel::{ChannelVector, Snr};
use crate::error::{Error, Result};
use crate::gaussian::{CoefficientVector, GaussInt};
use crate::rates::comp_rate_unchecked;

/// Default ceiling on the number of rotation classes an enumeration may produce.
pub const DEFAULT_CANDIDATE_CEILING: u64 = 10_000_000;

/// Limits applied by the search routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of rotation classes an enumeration may return.
    pub candidate_ceiling: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { candidate_ceiling: DEFAULT_CANDIDATE_CEILING }
    }
}

/// All canonical vectors inside the positive-rate norm ball.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub channel: ChannelVector,
    pub snr: Snr,
    /// Every candidate satisfies `||a||^2 < norm_bound`; this is
    /// `ceil(1 + ||h||^2 SNR)`.
    pub norm_bound: u64,
    /// Canonical representatives in ascending lexicographic order.
    pub candidates: Vec<CoefficientVector>,
}

/// Coefficient vectors sorted by descending rate.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    pub rows: Vec<(CoefficientVector, f64)>,
}

fn norm_ball(h: &ChannelVector, snr: Snr) -> f64 {
    1.0 + h.norm_sqr() * snr.linear()
}

/// Visits every nonzero integer point of dimension `dim` with squared norm
/// strictly below `bound`, in ascending lexicographic order. Stops early when
/// `visit` returns false.
fn for_each_in_ball(dim: usize, bound: f64, mut visit: impl FnMut(&[i64]) -> bool) {
    fn rec(x: &mut Vec<i64>, k: usize, partial: i64, bound: f64, reach: i64, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if k == x.len() {
            if partial == 0 {
                return true;
            }
            return visit(x);
        }
        for v in -reach..=reach {
            let p = partial + v * v;
            if (p as f64) >= bound {
                continue;
            }
            x[k] = v;
            if !rec(x, k + 1, p, bound, reach, visit) {
                return false;
            }
        }
        x[k] = 0;
        true
    }
    let reach = bound.sqrt().ceil() as i64;
    let mut x = vec![0i64; dim];
    rec(&mut x, 0, 0, bound, reach, &mut visit);
}

fn to_vector(x: &[i64]) -> CoefficientVector {
    CoefficientVector::new(x.chunks(2).map(|p| GaussInt::new(p[0], p[1])).collect())
}

/// Enumerates one representative per rotation class of every nonzero
/// Gaussian-integer vector with `||a||^2 < 1 + ||h||^2 SNR`.
pub fn enumerate_candidates(h: &ChannelVector, snr: Snr) -> Result<CandidateSet> {
    enumerate_candidates_with(h, snr, SearchConfig::default())
}

pub fn enumerate_candidates_with(h: &ChannelVector, snr: Snr, cfg: SearchConfig) -> Result<CandidateSet> {
    let bound = norm_ball(h, snr);
    let dim = 2 * h.len();
    // Every class has exactly four distinct members, so count raw points first.
    let raw_limit = cfg.candidate_ceiling.saturating_mul(4);
    let mut raw = 0u64;
    let mut over = false;
    for_each_in_ball(dim, bound, |_| {
        raw += 1;
        if raw > raw_limit {
            over = true;
            return false;
        }
        true
    });
    if over {
        return Err(Error::Budget { what: "candidate enumeration", limit: cfg.candidate_ceiling as u128 });
    }
    let mut candidates = Vec::with_capacity((raw / 4) as usize);
    for_each_in_ball(dim, bound, |x| {
        let a = to_vector(x);
        if a.is_canonical() {
            candidates.push(a);
        }
        true
    });
    Ok(CandidateSet {
        channel: h.clone(),
        snr,
        norm_bound: bound.ceil() as u64,
        candidates,
    })
}

fn validate_required(h: &ChannelVector, required: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; h.len()];
    for &i in required {
        if i >= h.len() {
            return Err(Error::IndexOutOfRange { index: i, len: h.len() });
        }
        mask[i] = true;
    }
    Ok(mask)
}

/// Highest-rate equation, or `None` when no equation has positive rate.
/// Equal rates resolve to the lexicographically larger canonical vector.
pub fn best_equation(h: &ChannelVector, snr: Snr) -> Result<Option<(CoefficientVector, f64)>> {
    best_nonzero_equation(h, snr, &[])
}

/// Highest-rate equation whose entries at the `required` indices are nonzero.
pub fn best_nonzero_equation(
    h: &ChannelVector,
    snr: Snr,
    required: &[usize],
) -> Result<Option<(CoefficientVector, f64)>> {
    let mask = validate_required(h, required)?;
    let leaf_limit = SearchConfig::default().candidate_ceiling.saturating_mul(4);
    sphere::best_by_sphere(h.entries(), snr.linear(), &mask, leaf_limit)
}

/// Descending-rate order with ties resolved toward the lexicographically
/// larger vector.
pub fn rank_order(x: &(CoefficientVector, f64), y: &(CoefficientVector, f64)) -> Ordering {
    y.1.partial_cmp(&x.1).unwrap_or(Ordering::Equal).then_with(|| y.0.lex_cmp(&x.0))
}

/// The `top_k` highest-rate rotation classes.
pub fn rate_profile(h: &ChannelVector, snr: Snr, top_k: usize) -> Result<RateProfile> {
    rate_profile_with(h, snr, top_k, SearchConfig::default())
}

pub fn rate_profile_with(h: &ChannelVector, snr: Snr, top_k: usize, cfg: SearchConfig) -> Result<RateProfile> {
    if top_k == 0 {
        return Err(Error::Domain("top_k must be at least 1".into()));
    }
    let set = enumerate_candidates_with(h, snr, cfg)?;
    let s = snr.linear();
    let mut rows: Vec<(CoefficientVector, f64)> = set
        .candidates
        .into_iter()
        .map(|a| {
            let r = comp_rate_unchecked(h.entries(), &a.to_complex(), s).rate_bits;
            (a, r)
        })
        .collect();
    rows.sort_by(rank_order);
    rows.truncate(top_k);
    Ok(RateProfile { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn scalar_unit_channel_has_two_classes() {
        let h = ChannelVector::from_real(&[1.0]).unwrap();
        let set = enumerate_candidates(&h, Snr::from_linear(3.0).unwrap()).unwrap();
        let want = vec![CoefficientVector::from_real(&[1]), CoefficientVector::new(vec![GaussInt::new(1, 1)])];
        assert_eq!(set.candidates, want);
        assert_eq!(set.norm_bound, 4);
    }

    #[test]
    fn ceiling_is_enforced() {
        let h = ChannelVector::new(vec![Complex64::new(1.0, 0.0); 3]).unwrap();
        let cfg = SearchConfig { candidate_ceiling: 10 };
        let err = enumerate_candidates_with(&h, Snr::from_linear(100.0).unwrap(), cfg).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn required_index_is_validated() {
        let h = ChannelVector::from_real(&[1.0, 2.0]).unwrap();
        assert!(best_nonzero_equation(&h, Snr::from_linear(1.0).unwrap(), &[2]).is_err());
    }
}
