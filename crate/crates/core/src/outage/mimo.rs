use num_complex::Complex64;

use crate::channel::{ChannelVector, Snr};
use crate::error::Result;
use crate::field::GaussianIntMatrix;
use crate::gaussian::CoefficientVector;
use crate::rates::positive_part;
use crate::search::{best_equation, best_nonzero_equation};

/// 2 x 2 channel matrix; row `m` holds the gains seen by relay `m`.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Per-draw rates of the distributed MIMO strategies, clamped to `[0, C]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MimoRates {
    pub comp: f64,
    pub comp_nz: f64,
    pub df: f64,
    pub cf: f64,
    pub upper: f64,
    /// Whether the best equations form an invertible system.
    pub full_rank: bool,
    /// Whether the best equations with nonzero diagonal form an invertible system.
    pub full_rank_nz: bool,
}

fn log2_1p(x: f64) -> f64 {
    (1.0 + x).log2()
}

/// Cut-set bound: both single-transmitter cuts and the joint MIMO cut.
pub fn mimo_cut_set(h: &Matrix2, snr: f64) -> f64 {
    let col1 = h[0][0].norm_sqr() + h[1][0].norm_sqr();
    let col2 = h[0][1].norm_sqr() + h[1][1].norm_sqr();
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let logdet = (1.0 + snr * (col1 + col2) + snr * snr * det.norm_sqr()).log2();
    log2_1p(col1 * snr).min(log2_1p(col2 * snr)).min(0.5 * logdet)
}

fn relay_channel(h: &Matrix2, m: usize) -> Result<ChannelVector> {
    ChannelVector::new(h[m].to_vec())
}

fn stacked_rank(eqs: &[Option<(CoefficientVector, f64)>]) -> bool {
    let rows: Option<Vec<CoefficientVector>> = eqs.iter().map(|e| e.as_ref().map(|(a, _)| a.clone())).collect();
    match rows {
        Some(rows) => GaussianIntMatrix::from_rows(&rows).map(|m| m.complex_full_rank()).unwrap_or(false),
        None => false,
    }
}

fn min_rate(eqs: &[Option<(CoefficientVector, f64)>]) -> f64 {
    eqs.iter().map(|e| e.as_ref().map_or(0.0, |(_, r)| *r)).fold(f64::INFINITY, f64::min)
}

/// Best equations of both relays, unconstrained or with `a_mm != 0`.
pub(crate) fn relay_equations(h: &Matrix2, snr: Snr, constrained: bool) -> Result<[Option<(CoefficientVector, f64)>; 2]> {
    let eq = |m: usize| {
        let hm = relay_channel(h, m)?;
        if constrained {
            best_nonzero_equation(&hm, snr, &[m])
        } else {
            best_equation(&hm, snr)
        }
    };
    Ok([eq(0)?, eq(1)?])
}

/// Whether the relays' chosen equations are singular over C.
pub fn rank_failure(h: &Matrix2, snr: Snr, constrained: bool) -> Result<bool> {
    Ok(!stacked_rank(&relay_equations(h, snr, constrained)?))
}

/// Compute-, decode- and compress-and-forward rates and the cut-set bound
/// for one channel draw with bit pipes of rate `c`.
pub fn mimo_strategy_rates(h: &Matrix2, snr: Snr, c: f64) -> Result<MimoRates> {
    let s = snr.linear();
    let best = relay_equations(h, snr, false)?;
    let nz = relay_equations(h, snr, true)?;
    let full_rank = stacked_rank(&best);
    let full_rank_nz = stacked_rank(&nz);
    let comp = if full_rank { min_rate(&best).min(c) } else { 0.0 };
    let comp_nz = if full_rank_nz { min_rate(&nz).min(c) } else { 0.0 };

    let g = |m: usize, l: usize| h[m][l].norm_sqr();
    let ignore1 = log2_1p(g(0, 0) * s / (1.0 + g(0, 1) * s));
    let ignore2 = log2_1p(g(1, 1) * s / (1.0 + g(1, 0) * s));
    let decode = |m: usize| {
        log2_1p(g(m, 0) * s)
            .min(log2_1p(g(m, 1) * s))
            .min(0.5 * log2_1p((g(m, 0) + g(m, 1)) * s))
    };
    let (decode1, decode2) = (decode(0), decode(1));
    let df = ignore1
        .min(ignore2)
        .max(ignore1.min(decode2))
        .max(decode1.min(ignore2))
        .max(decode1.min(decode2))
        .min(c);

    let pipe = 2f64.powf(c);
    let mut h_cf = *h;
    for (m, row) in h_cf.iter_mut().enumerate() {
        let snr_cf = s * (pipe - 1.0) / (pipe + s * (g(m, 0) + g(m, 1)));
        let scale = snr_cf.sqrt();
        for x in row.iter_mut() {
            *x *= scale;
        }
    }
    // SNR_CF already carries the transmit SNR, so the cut-set formula is
    // evaluated at unit SNR on H_CF.
    let cf = mimo_cut_set(&h_cf, 1.0).min(c);
    let upper = mimo_cut_set(h, s).min(c);

    Ok(MimoRates {
        comp: positive_part(comp),
        comp_nz: positive_part(comp_nz),
        df: positive_part(df),
        cf: positive_part(cf),
        upper: positive_part(upper),
        full_rank,
        full_rank_nz,
    })
}
