//! Desk-scale nested lattice encoding and relay decoding.
//!
//! Transmitter `l` maps its real and imaginary message parts to lattice
//! points, subtracts a dither and reduces modulo the coarse lattice. A relay
//! scales its observation, adds back the integer combination of dithers,
//! quantizes to the fine lattice of the finest participating level and maps
//! the result back to a finite-field equation.

mod code;

pub use code::{mod_lattice, mod_scalar, LatticeEquation, NestedLatticeCode, DEFAULT_CODEBOOK_BUDGET};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{ChannelVector, Snr};
use crate::error::{check_len, Error, Result};
use crate::field::coeffs_to_field;
use crate::gaussian::CoefficientVector;
use crate::rates::mmse_alpha;
use crate::streams::{stream, Purpose};

/// Real and imaginary dither vectors of every transmitter, uniform over the
/// coarse cell `[-gamma/2, gamma/2)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dithers {
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}

impl Dithers {
    pub fn zero(code: &NestedLatticeCode) -> Self {
        let l = code.num_levels();
        Self { real: vec![vec![0.0; code.n()]; l], imag: vec![vec![0.0; code.n()]; l] }
    }

    /// Dithers of draw `index` under `seed`; transmitter `l` and component
    /// `c` (0 real, 1 imaginary) read their own stream.
    pub fn draw(code: &NestedLatticeCode, seed: u64, index: u64) -> Self {
        let gamma = code.gamma();
        let component = |l: usize, c: u64| -> Vec<f64> {
            let mut rng = stream(seed, Purpose::Dither, (index << 20) | ((l as u64) << 1) | c);
            (0..code.n()).map(|_| gamma * (rng.random::<f64>() - 0.5)).collect()
        };
        let l = code.num_levels();
        let real = (0..l).map(|t| component(t, 0)).collect();
        let imag = (0..l).map(|t| component(t, 1)).collect();
        Self { real, imag }
    }
}

/// Message pair of one transmitter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub real: Vec<u64>,
    pub imag: Vec<u64>,
}

/// Channel inputs, one row of `n` complex symbols per transmitter.
pub fn transmit(code: &NestedLatticeCode, dithers: &Dithers, messages: &[Message]) -> Result<Vec<Vec<Complex64>>> {
    check_len(code.num_levels(), messages.len())?;
    messages
        .iter()
        .enumerate()
        .map(|(l, m)| {
            let tr = code.encode_phi(l, &m.real)?;
            let ti = code.encode_phi(l, &m.imag)?;
            Ok((0..code.n())
                .map(|i| {
                    Complex64::new(
                        mod_scalar(tr[i] - dithers.real[l][i], code.gamma()),
                        mod_scalar(ti[i] - dithers.imag[l][i], code.gamma()),
                    )
                })
                .collect())
        })
        .collect()
}

/// Finest level whose coefficient is nonzero.
fn decode_level(a: &CoefficientVector) -> Result<usize> {
    a.entries()
        .iter()
        .rposition(|x| !x.is_zero())
        .ok_or_else(|| Error::Domain("coefficient vector must be nonzero".into()))
}

/// Decodes the real and imaginary equations with coefficients `a`.
pub fn relay_decode(
    code: &NestedLatticeCode,
    dithers: &Dithers,
    y: &[Complex64],
    h: &ChannelVector,
    a: &CoefficientVector,
    alpha: Complex64,
) -> Result<(Vec<u64>, Vec<u64>)> {
    check_len(code.num_levels(), h.len())?;
    check_len(h.len(), a.len())?;
    check_len(code.n(), y.len())?;
    let level = decode_level(a)?;
    let n = code.n();
    let mut sr = vec![0.0; n];
    let mut si = vec![0.0; n];
    for i in 0..n {
        let ay = alpha * y[i];
        sr[i] = ay.re;
        si[i] = ay.im;
        for (l, al) in a.entries().iter().enumerate() {
            let (are, aim) = (al.re as f64, al.im as f64);
            sr[i] += are * dithers.real[l][i] - aim * dithers.imag[l][i];
            si[i] += aim * dithers.real[l][i] + are * dithers.imag[l][i];
        }
    }
    let vr = code.quantize_fine(level, &sr)?;
    let vi = code.quantize_fine(level, &si)?;
    Ok((code.decode_phi_inv(level, &vr.v)?, code.decode_phi_inv(level, &vi.v)?))
}

/// The equations a relay wants:
/// `u^R = sum q^R w^R - q^I w^I`, `u^I = sum q^I w^R + q^R w^I` over F_p,
/// with shorter messages zero-padded to the decoding level.
pub fn expected_equations(
    code: &NestedLatticeCode,
    a: &CoefficientVector,
    messages: &[Message],
) -> Result<(Vec<u64>, Vec<u64>)> {
    check_len(code.num_levels(), a.len())?;
    check_len(a.len(), messages.len())?;
    let level = decode_level(a)?;
    let k = code.k_list()[level];
    let f = code.field();
    let (qr, qi) = coeffs_to_field(a, f);
    let mut ur = vec![0u64; k];
    let mut ui = vec![0u64; k];
    for (l, m) in messages.iter().enumerate() {
        for j in 0..m.real.len().min(k) {
            let (wr, wi) = (m.real[j], m.imag[j]);
            ur[j] = f.add(ur[j], f.sub(f.mul(qr[l], wr), f.mul(qi[l], wi)));
            ui[j] = f.add(ui[j], f.add(f.mul(qi[l], wr), f.mul(qr[l], wi)));
        }
    }
    Ok((ur, ui))
}

/// Options for `simulate_equation_error`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimOptions {
    /// Drop the channel noise. The default scaling then becomes the
    /// least-squares value `h* a / ||h||^2`, the MMSE scaling with no noise.
    pub noiseless: bool,
    /// Override the receiver scaling.
    pub alpha: Option<Complex64>,
}

/// Trial count, error count and error fraction of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOutcome {
    pub trials: u64,
    pub errors: u64,
    pub error_rate: f64,
}

/// Receiver scaling used by the simulator.
pub fn sim_alpha(h: &ChannelVector, a: &CoefficientVector, snr: Snr, opts: SimOptions) -> Result<Complex64> {
    if let Some(alpha) = opts.alpha {
        return Ok(alpha);
    }
    if opts.noiseless {
        check_len(h.len(), a.len())?;
        let norm = h.norm_sqr();
        if norm == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let inner: Complex64 = h.entries().iter().zip(a.entries()).map(|(hi, ai)| hi.conj() * ai.to_complex()).sum();
        return Ok(inner / norm);
    }
    mmse_alpha(h, a, snr)
}

fn random_message(code: &NestedLatticeCode, level: usize, rng: &mut impl Rng) -> Vec<u64> {
    (0..code.k_list()[level]).map(|_| rng.random_range(0..code.p())).collect()
}

/// One trial: true when the decoded equations differ from the desired ones.
fn trial_fails(
    code: &NestedLatticeCode,
    h: &ChannelVector,
    a: &CoefficientVector,
    alpha: Complex64,
    seed: u64,
    t: u64,
    noiseless: bool,
) -> Result<bool> {
    let mut msg_rng = stream(seed, Purpose::Message, t);
    let messages: Vec<Message> = (0..code.num_levels())
        .map(|l| Message {
            real: random_message(code, l, &mut msg_rng),
            imag: random_message(code, l, &mut msg_rng),
        })
        .collect();
    let dithers = Dithers::draw(code, seed, t);
    let x = transmit(code, &dithers, &messages)?;
    let mut noise = stream(seed, Purpose::Noise, t);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let y: Vec<Complex64> = (0..code.n())
        .map(|i| {
            let mut yi: Complex64 = h.entries().iter().zip(&x).map(|(hl, xl)| hl * xl[i]).sum();
            if !noiseless {
                let zr: f64 = noise.sample(StandardNormal);
                let zi: f64 = noise.sample(StandardNormal);
                yi += Complex64::new(zr * scale, zi * scale);
            }
            yi
        })
        .collect();
    let want = expected_equations(code, a, &messages)?;
    Ok(match relay_decode(code, &dithers, &y, h, a, alpha) {
        Ok(got) => got != want,
        Err(Error::Corruption(_)) => true,
        Err(e) => return Err(e),
    })
}

/// Fraction of trials in which a relay decodes the wrong equation. The code
/// is rescaled to `snr`; trial `t` reads its own message, dither and noise
/// streams, so the outcome does not depend on thread count.
pub fn simulate_equation_error(
    code: &NestedLatticeCode,
    h: &ChannelVector,
    a: &CoefficientVector,
    snr: Snr,
    trials: u64,
    seed: u64,
    opts: SimOptions,
) -> Result<SimOutcome> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    check_len(code.num_levels(), h.len())?;
    check_len(h.len(), a.len())?;
    decode_level(a)?;
    let code = code.with_snr(snr);
    let alpha = sim_alpha(h, a, snr, opts)?;
    let failures: Result<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| trial_fails(&code, h, a, alpha, seed, t, opts.noiseless))
        .collect();
    let errors = failures?.into_iter().filter(|&f| f).count() as u64;
    Ok(SimOutcome { trials, errors, error_rate: errors as f64 / trials as f64 })
}
