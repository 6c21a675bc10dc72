//! Closed-form computation rates and baseline rates.
//!
//! Every rate here is in bits per complex channel use (real-valued variants
//! in bits per real channel use) and is returned unclamped. Callers apply
//! `positive_part` where a physical rate is needed.

use num_complex::Complex64;

use crate::channel::{ChannelVector, Snr};
use crate::error::{check_len, Error, Result};
use crate::gaussian::{CoefficientVector, GaussInt};

/// Output of the rate optimizer for one equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputationResult {
    /// Computation rate, possibly negative.
    pub rate_bits: f64,
    /// Receiver scaling that attains the rate.
    pub alpha: Complex64,
    /// Minimized value of `|alpha|^2 + SNR * ||alpha h - a||^2`.
    pub denom: f64,
}

/// `max(x, 0)`.
pub fn positive_part(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Minimizes `w |beta|^2 + snr * ||beta g - c||^2` over complex `beta`.
///
/// Returns `(q, beta)` where the minimum equals `snr * q`. The value `q` is
/// evaluated through the Lagrange identity
/// `||g||^2 ||c||^2 - |g* c|^2 = sum_{i<j} |g_i c_j - g_j c_i|^2`,
/// which keeps it nonnegative and free of cancellation.
pub(crate) fn quad_min(w: f64, g: &[Complex64], c: &[Complex64], snr: f64) -> (f64, Complex64) {
    let g_norm: f64 = g.iter().map(|x| x.norm_sqr()).sum();
    let c_norm: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let inner: Complex64 = g.iter().zip(c).map(|(gi, ci)| gi.conj() * ci).sum();
    let mut cross = 0.0;
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            cross += (g[i] * c[j] - g[j] * c[i]).norm_sqr();
        }
    }
    let scale = w + snr * g_norm;
    let q = (w * c_norm + snr * cross) / scale;
    let beta = inner * (snr / scale);
    (q, beta)
}

fn rate_from_q(q: f64) -> f64 {
    -q.log2()
}

/// Rate of decoding equation `a` with a fixed receiver scaling `alpha`.
pub fn comp_rate_fixed_alpha(
    h: &ChannelVector,
    a: &CoefficientVector,
    alpha: Complex64,
    snr: Snr,
) -> Result<f64> {
    check_len(h.len(), a.len())?;
    let s = snr.linear();
    let mismatch: f64 = h
        .entries()
        .iter()
        .zip(a.entries())
        .map(|(hi, ai)| (alpha * hi - ai.to_complex()).norm_sqr())
        .sum();
    let denom = alpha.norm_sqr() + s * mismatch;
    if denom == 0.0 {
        return Err(Error::Domain(
            "rate undefined: alpha = 0 with zero SNR or zero coefficients".into(),
        ));
    }
    Ok((s / denom).log2())
}

/// MMSE receiver scaling `SNR h* a / (1 + SNR ||h||^2)`.
pub fn mmse_alpha(h: &ChannelVector, a: &CoefficientVector, snr: Snr) -> Result<Complex64> {
    check_len(h.len(), a.len())?;
    let s = snr.linear();
    let inner: Complex64 = h
        .entries()
        .iter()
        .zip(a.entries())
        .map(|(hi, ai)| hi.conj() * ai.to_complex())
        .sum();
    Ok(inner * (s / (1.0 + s * h.norm_sqr())))
}

/// Optimal computation rate of equation `a` over channel `h`.
pub fn comp_rate(h: &ChannelVector, a: &CoefficientVector, snr: Snr) -> Result<ComputationResult> {
    check_len(h.len(), a.len())?;
    if a.is_zero() {
        return Err(Error::Domain("coefficient vector must be nonzero".into()));
    }
    Ok(comp_rate_unchecked(h.entries(), &a.to_complex(), snr.linear()))
}

pub(crate) fn comp_rate_unchecked(h: &[Complex64], a: &[Complex64], s: f64) -> ComputationResult {
    let (q, alpha) = quad_min(1.0, h, a, s);
    ComputationResult { rate_bits: rate_from_q(q), alpha, denom: s * q }
}

/// Real-channel analogue: half the log of the real-valued quadratic form.
pub fn comp_rate_real(h: &[f64], a: &[i64], snr: Snr) -> Result<ComputationResult> {
    check_len(h.len(), a.len())?;
    if a.iter().all(|&x| x == 0) {
        return Err(Error::Domain("coefficient vector must be nonzero".into()));
    }
    if h.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("channel gains must be finite".into()));
    }
    let s = snr.linear();
    let h_norm: f64 = h.iter().map(|x| x * x).sum();
    let a_norm: f64 = a.iter().map(|&x| (x * x) as f64).sum();
    let inner: f64 = h.iter().zip(a).map(|(hi, &ai)| hi * ai as f64).sum();
    let mut cross = 0.0;
    for i in 0..h.len() {
        for j in (i + 1)..h.len() {
            let d = h[i] * a[j] as f64 - h[j] * a[i] as f64;
            cross += d * d;
        }
    }
    let scale = 1.0 + s * h_norm;
    let q = (a_norm + s * cross) / scale;
    Ok(ComputationResult {
        rate_bits: 0.5 * rate_from_q(q),
        alpha: Complex64::new(inner * s / scale, 0.0),
        denom: s * q,
    })
}

/// Symmetric-rate baseline for computing an equation by decoding every
/// message: `1/2 log2(1 + SNR ||h||^2)`.
pub fn mac_symmetric_rate(h: &ChannelVector, snr: Snr) -> f64 {
    0.5 * (1.0 + snr.linear() * h.norm_sqr()).log2()
}

/// Rate of decoding message `m` while treating every other transmitter as noise.
pub fn interference_as_noise_rate(h: &ChannelVector, m: usize, snr: Snr) -> Result<f64> {
    if m >= h.len() {
        return Err(Error::IndexOutOfRange { index: m, len: h.len() });
    }
    let s = snr.linear();
    let others: f64 = h
        .entries()
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != m)
        .map(|(_, x)| x.norm_sqr())
        .sum();
    Ok((1.0 + s * h[m].norm_sqr() / (1.0 + s * others)).log2())
}

/// Genie-aided bound on the rate of message `ell`: the weakest direct link
/// among relays whose equation involves that message.
pub fn genie_upper_bound(
    h_list: &[ChannelVector],
    a_list: &[CoefficientVector],
    ell: usize,
    snr: Snr,
) -> Result<f64> {
    check_len(h_list.len(), a_list.len())?;
    let mut bound: Option<f64> = None;
    for (h, a) in h_list.iter().zip(a_list) {
        check_len(h.len(), a.len())?;
        if ell >= a.len() {
            return Err(Error::IndexOutOfRange { index: ell, len: a.len() });
        }
        if a[ell].is_zero() {
            continue;
        }
        let r = (1.0 + h[ell].norm_sqr() * snr.linear()).log2();
        bound = Some(bound.map_or(r, |b| b.min(r)));
    }
    bound.ok_or_else(|| Error::Domain(format!("no relay uses message {ell}")))
}

/// Best second-equation rate after successive cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondRate {
    pub rate_bits: f64,
    pub beta: Complex64,
    pub tau: GaussInt,
}

/// Minimizes `w |beta|^2 + snr ||beta g - tau u - v||^2` jointly over complex
/// `beta` and Gaussian-integer `tau`.
///
/// After minimizing over `beta` the objective is an isotropic quadratic in
/// `tau`, so the optimal integer is one of the four lattice points around the
/// real minimizer.
fn best_tau(w: f64, g: &[Complex64], u: &[Complex64], v: &[Complex64], s: f64) -> (f64, Complex64, GaussInt) {
    let scale = w + s * g.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(xi, yi)| xi.conj() * yi).sum()
    };
    let gu = dot(g, u);
    let gv = dot(g, v);
    let umu = dot(u, u).re - s * gu.norm_sqr() / scale;
    let umv = dot(u, v) - gu.conj() * gv * (s / scale);
    let center = if umu > 0.0 { -umv / umu } else { Complex64::new(0.0, 0.0) };

    let mut best: Option<(f64, Complex64, GaussInt)> = None;
    let (re0, im0) = (center.re.floor() as i64, center.im.floor() as i64);
    for tau in [
        GaussInt::new(re0, im0),
        GaussInt::new(re0 + 1, im0),
        GaussInt::new(re0, im0 + 1),
        GaussInt::new(re0 + 1, im0 + 1),
    ] {
        let t = tau.to_complex();
        let c: Vec<Complex64> = u.iter().zip(v).map(|(ui, vi)| t * ui + vi).collect();
        let (q, beta) = quad_min(w, g, &c, s);
        let better = match &best {
            None => true,
            Some((bq, _, bt)) => q < *bq || (q == *bq && tau.norm_sqr() < bt.norm_sqr()),
        };
        if better {
            best = Some((q, beta, tau));
        }
    }
    best.expect("four candidates evaluated")
}

/// Rate of the second equation `b` after the relay has decoded equation `a`.
///
/// When `a` is a unit vector the decoded message is cancelled from the
/// observation; otherwise a Gaussian-integer multiple `tau` of the first
/// equation is subtracted. Returns `+inf` when the residual target vanishes.
pub fn sc_second_rate(
    h: &ChannelVector,
    a: &CoefficientVector,
    b: &CoefficientVector,
    snr: Snr,
) -> Result<SecondRate> {
    check_len(h.len(), a.len())?;
    check_len(h.len(), b.len())?;
    if b.is_zero() {
        return Err(Error::Domain("second coefficient vector must be nonzero".into()));
    }
    let s = snr.linear();
    if let Some(i) = a.unit_index() {
        let g: Vec<Complex64> = h.entries().iter().enumerate().filter(|&(l, _)| l != i).map(|(_, x)| *x).collect();
        let c: Vec<Complex64> = b.to_complex().into_iter().enumerate().filter(|&(l, _)| l != i).map(|(_, x)| x).collect();
        let (q, beta) = quad_min(1.0, &g, &c, s);
        return Ok(SecondRate { rate_bits: rate_from_q(q), beta, tau: GaussInt::ZERO });
    }
    let (q, beta, tau) = best_tau(1.0, h.entries(), &a.to_complex(), &b.to_complex(), s);
    Ok(SecondRate { rate_bits: rate_from_q(q), beta, tau })
}

/// Power split between two superimposed codebooks at every transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionConfig {
    gamma_a: Vec<Complex64>,
    gamma_b: Vec<Complex64>,
}

impl SuperpositionConfig {
    /// Checks `|gamma_A|^2 + |gamma_B|^2 = 1` entrywise within 1e-12.
    pub fn new(gamma_a: Vec<Complex64>, gamma_b: Vec<Complex64>) -> Result<Self> {
        check_len(gamma_a.len(), gamma_b.len())?;
        for (l, (ga, gb)) in gamma_a.iter().zip(&gamma_b).enumerate() {
            let total = ga.norm_sqr() + gb.norm_sqr();
            if !((total - 1.0).abs() <= 1e-12) {
                return Err(Error::InvalidConfig(format!(
                    "power split at transmitter {l} sums to {total}, expected 1"
                )));
            }
        }
        Ok(Self { gamma_a, gamma_b })
    }

    pub fn gamma_a(&self) -> &[Complex64] {
        &self.gamma_a
    }

    pub fn gamma_b(&self) -> &[Complex64] {
        &self.gamma_b
    }
}

/// Rates of level A (equation `a`, decoded first with level B as noise) and
/// level B (equation `b`, decoded second), each clamped at zero.
pub fn superposition_rates(
    h: &ChannelVector,
    cfg: &SuperpositionConfig,
    a: &CoefficientVector,
    b: &CoefficientVector,
    snr: Snr,
) -> Result<(f64, f64)> {
    check_len(h.len(), cfg.gamma_a.len())?;
    check_len(h.len(), a.len())?;
    check_len(h.len(), b.len())?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("coefficient vectors must be nonzero".into()));
    }
    let s = snr.linear();
    let h_a: Vec<Complex64> = h.entries().iter().zip(&cfg.gamma_a).map(|(x, g)| g * x).collect();
    let h_b: Vec<Complex64> = h.entries().iter().zip(&cfg.gamma_b).map(|(x, g)| g * x).collect();
    let hb_norm: f64 = h_b.iter().map(|x| x.norm_sqr()).sum();

    let (q1, _) = quad_min(1.0 + s * hb_norm, &h_a, &a.to_complex(), s);
    let r_a = rate_from_q(q1);

    let q2 = if let Some(i) = a.unit_index() {
        let leak: f64 = h_a.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, x)| x.norm_sqr()).sum();
        quad_min(1.0 + s * leak, &h_b, &b.to_complex(), s).0
    } else {
        let l = h.len();
        let zeros = vec![Complex64::new(0.0, 0.0); l];
        let g: Vec<Complex64> = h_a.iter().chain(&h_b).copied().collect();
        let u: Vec<Complex64> = a.to_complex().into_iter().chain(zeros.iter().copied()).collect();
        let v: Vec<Complex64> = zeros.iter().copied().chain(b.to_complex()).collect();
        best_tau(1.0, &g, &u, &v, s).0
    };
    Ok((positive_part(r_a), positive_part(rate_from_q(q2))))
}

/// Equivalent noise variance per real dimension seen by the lattice decoder.
pub fn equivalent_noise_variance(
    h: &ChannelVector,
    a: &CoefficientVector,
    alpha: Complex64,
    snr: Snr,
) -> Result<f64> {
    check_len(h.len(), a.len())?;
    let mismatch: f64 = h
        .entries()
        .iter()
        .zip(a.entries())
        .map(|(hi, ai)| (alpha * hi - ai.to_complex()).norm_sqr())
        .sum();
    Ok(alpha.norm_sqr() / 2.0 + snr.linear() / 2.0 * mismatch)
}

/// Rates for the M-transmitter, M-relay network whose channel is a Hadamard matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardRates {
    pub comp: f64,
    pub df: f64,
    pub af_cf: f64,
    pub upper: f64,
}

pub fn hadamard_network_rates(m: u32, snr: Snr) -> Result<HadamardRates> {
    if m < 1 {
        return Err(Error::Domain("network size must be at least 1".into()));
    }
    let s = snr.linear();
    let mf = m as f64;
    Ok(HadamardRates {
        comp: (1.0 / mf + s).log2(),
        df: (1.0 + mf * s).log2() / mf,
        af_cf: (1.0 + s * (s / (mf * s + 1.0))).log2(),
        upper: (1.0 + s).log2(),
    })
}
