use num_complex::Complex64;

use crate::channel::{ChannelVector, Snr};
use crate::error::Result;
use crate::rates::positive_part;
use crate::search::best_nonzero_equation;

/// Per-draw rates of the two-way relay strategies, clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWayRates {
    pub comp: f64,
    pub df: f64,
    pub af: f64,
    pub upper: f64,
    /// Broadcast rate from the relay to both users.
    pub bc: f64,
    /// Best equation rate with both coefficients nonzero.
    pub nz: f64,
    pub corner1: f64,
    pub corner2: f64,
    /// Symmetric rate of decoding both messages at the relay.
    pub decode: f64,
}

fn log2_1p(x: f64) -> f64 {
    (1.0 + x).log2()
}

/// Rates for uplink gains `h11`, `h12` into the relay and downlink gains
/// `h3`, `h4` from the relay.
pub fn twoway_strategy_rates(
    h11: Complex64,
    h12: Complex64,
    h3: Complex64,
    h4: Complex64,
    snr: Snr,
    snr_bc: Snr,
) -> Result<TwoWayRates> {
    let s = snr.linear();
    let sb = snr_bc.linear();
    let (g11, g12, g3, g4) = (h11.norm_sqr(), h12.norm_sqr(), h3.norm_sqr(), h4.norm_sqr());
    let bc = log2_1p(g3.min(g4) * sb);

    let h1 = ChannelVector::new(vec![h11, h12])?;
    let nz = best_nonzero_equation(&h1, snr, &[0, 1])?.map_or(0.0, |(_, r)| r);
    let corner1 = log2_1p(g11 * s / (1.0 + g12 * s)).min(log2_1p(g12 * s));
    let corner2 = log2_1p(g12 * s / (1.0 + g11 * s)).min(log2_1p(g11 * s));
    let comp = bc.min(nz.max(corner1).max(corner2));

    let decode = log2_1p(g11 * s).min(log2_1p(g12 * s)).min(0.5 * log2_1p((g11 + g12) * s));
    let df = bc.min(decode);

    let h1_norm = g11 + g12;
    let af = log2_1p(g12 * g3 * s * sb / (1.0 + h1_norm * s + g3 * sb))
        .min(log2_1p(g11 * g4 * s * sb / (1.0 + h1_norm * s + g4 * sb)));

    let upper = bc.min(log2_1p(g11 * s)).min(log2_1p(g12 * s));

    Ok(TwoWayRates {
        comp: positive_part(comp),
        df: positive_part(df),
        af: positive_part(af),
        upper: positive_part(upper),
        bc: positive_part(bc),
        nz: positive_part(nz),
        corner1: positive_part(corner1),
        corner2: positive_part(corner2),
        decode: positive_part(decode),
    })
}
