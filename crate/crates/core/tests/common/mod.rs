#![allow(dead_code)]

use compute_forward::{ChannelVector, CoefficientVector, GaussInt, Snr};
use rand_distr::StandardNormal;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn snr(linear: f64) -> Snr {
    Snr::from_linear(linear).unwrap()
}

pub fn snr_db(db: f64) -> Snr {
    Snr::from_db(db).unwrap()
}

pub fn two_user_channel() -> ChannelVector {
    ChannelVector::new(vec![c(-1.1744, 2.1496), c(1.2512, -1.6335)]).unwrap()
}

pub fn real_coeffs(x: &[i64]) -> CoefficientVector {
    CoefficientVector::from_real(x)
}

pub fn coeffs(x: &[(i64, i64)]) -> CoefficientVector {
    CoefficientVector::new(x.iter().map(|&(r, i)| GaussInt::new(r, i)).collect())
}

pub fn random_channel(rng: &mut impl Rng, len: usize, spread: f64) -> ChannelVector {
    let v = (0..len)
        .map(|_| c(rng.random_range(-spread..spread), rng.random_range(-spread..spread)))
        .collect();
    ChannelVector::new(v).unwrap()
}

pub fn random_nonzero_coeffs(rng: &mut impl Rng, len: usize, reach: i64) -> CoefficientVector {
    loop {
        let a = CoefficientVector::new(
            (0..len)
                .map(|_| GaussInt::new(rng.random_range(-reach..=reach), rng.random_range(-reach..=reach)))
                .collect(),
        );
        if !a.is_zero() {
            return a;
        }
    }
}

/// Rate written out term by term: `log2(SNR / (|alpha|^2 + SNR ||alpha h - a||^2))`.
pub fn direct_rate(h: &[Complex64], a: &[Complex64], alpha: Complex64, s: f64) -> f64 {
    let mut mismatch = 0.0;
    for (hi, ai) in h.iter().zip(a) {
        let d = alpha * hi - ai;
        mismatch += d.re * d.re + d.im * d.im;
    }
    (s / (alpha.re * alpha.re + alpha.im * alpha.im + s * mismatch)).log2()
}

/// Best rate over a square grid of `alpha`, refined three times around the
/// running optimum.
pub fn grid_best_alpha(mut objective: impl FnMut(Complex64) -> f64, half_width: f64) -> (f64, Complex64) {
    let mut center = c(0.0, 0.0);
    let mut width = half_width;
    let mut best = (f64::NEG_INFINITY, center);
    for _ in 0..4 {
        let steps = 200;
        for i in 0..=steps {
            for j in 0..=steps {
                let re = center.re - width + 2.0 * width * i as f64 / steps as f64;
                let im = center.im - width + 2.0 * width * j as f64 / steps as f64;
                let z = c(re, im);
                let v = objective(z);
                if v > best.0 {
                    best = (v, z);
                }
            }
        }
        center = best.1;
        width /= 20.0;
    }
    best
}

/// Textbook rate `-log2(||a||^2 - SNR |h* a|^2 / (1 + SNR ||h||^2))`.
pub fn textbook_rate(h: &[Complex64], a: &[Complex64], s: f64) -> f64 {
    let hn: f64 = h.iter().map(|x| x.norm_sqr()).sum();
    let an: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let ip: Complex64 = h.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    -(an - s * ip.norm_sqr() / (1.0 + s * hn)).log2()
}

/// Every integer vector of the box `[-reach, reach]^(2L)`, no pruning.
pub fn for_each_in_box(len: usize, reach: i64, mut f: impl FnMut(&[i64])) {
    let dim = 2 * len;
    let mut x = vec![-reach; dim];
    loop {
        f(&x);
        let mut k = 0;
        loop {
            if k == dim {
                return;
            }
            if x[k] < reach {
                x[k] += 1;
                break;
            }
            x[k] = -reach;
            k += 1;
        }
    }
}

pub fn to_coeffs(x: &[i64]) -> CoefficientVector {
    CoefficientVector::new(x.chunks(2).map(|p| GaussInt::new(p[0], p[1])).collect())
}

pub struct Oracle {
    pub best: Option<(CoefficientVector, f64)>,
    /// Best rate of a vector outside the best class, to detect near ties.
    pub runner_up: f64,
}

pub fn brute_force(h: &ChannelVector, s: Snr, required: &[usize]) -> Oracle {
    let bound = 1.0 + h.norm_sqr() * s.linear();
    let reach = bound.sqrt().ceil() as i64;
    let mut rates: Vec<(CoefficientVector, f64)> = Vec::new();
    for_each_in_box(h.len(), reach, |x| {
        if x.iter().all(|&v| v == 0) {
            return;
        }
        if required.iter().any(|&i| x[2 * i] == 0 && x[2 * i + 1] == 0) {
            return;
        }
        let a = to_coeffs(x);
        let r = textbook_rate(h.entries(), &a.to_complex(), s.linear());
        if r > 0.0 {
            rates.push((a, r));
        }
    });
    rates.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap());
    let Some((top, rate)) = rates.first().cloned() else {
        return Oracle { best: None, runner_up: f64::NEG_INFINITY };
    };
    let class = top.canonical();
    let runner_up = rates.iter().find(|(a, _)| a.canonical() != class).map_or(f64::NEG_INFINITY, |x| x.1);
    Oracle { best: Some((class, rate)), runner_up }
}

pub fn box_size(len: usize, bound: f64) -> f64 {
    let reach = bound.sqrt().ceil();
    (2.0 * reach + 1.0).powi(2 * len as i32)
}

pub fn rayleigh(rng: &mut impl Rng, len: usize) -> ChannelVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ChannelVector::new(
        (0..len)
            .map(|_| c(rng.sample::<f64, _>(StandardNormal) * s, rng.sample::<f64, _>(StandardNormal) * s))
            .collect(),
    )
    .unwrap()
}

/// Random instances with `L <= 3` and `SNR <= 20 dB` whose brute-force box stays small.
pub fn instances(seed: u64, count: usize) -> Vec<(ChannelVector, Snr)> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let len = rng.random_range(1..=3);
        let h = rayleigh(&mut rng, len);
        let s = snr_db(rng.random_range(0.0..20.0));
        if box_size(len, 1.0 + h.norm_sqr() * s.linear()) <= 2.5e6 {
            out.push((h, s));
        }
    }
    out
}

/// Integer rank by Euclidean row reduction, without fractions or Bareiss steps.
pub fn integer_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (rank..rows).filter(|&r| m[r][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    m.swap(rank, r);
                    rank += 1;
                }
                break;
            }
            let piv = *nz.iter().min_by_key(|&&r| m[r][c].abs()).unwrap();
            for &r in &nz {
                if r != piv {
                    let q = m[r][c] / m[piv][c];
                    for k in 0..cols {
                        m[r][k] -= q * m[piv][k];
                    }
                }
            }
        }
    }
    rank
}


/// Same rate to 1e-9 and, unless the oracle has a near tie, the same class.
pub fn compare_with_oracle(h: &ChannelVector, s: Snr, got: Option<(CoefficientVector, f64)>, oracle: Oracle) -> Result<(), String> {
    match (got, oracle.best) {
        (None, None) => Ok(()),
        (Some((a, r)), Some((oa, or))) => {
            if (r - or).abs() >= 1e-9 {
                return Err(format!("rate {r} vs oracle {or} for {h:?} at {s:?}"));
            }
            if !a.is_canonical() {
                return Err(format!("{a:?} is not canonical"));
            }
            if or - oracle.runner_up > 1e-9 && a != oa {
                return Err(format!("class {a:?} vs oracle {oa:?} for {h:?} at {s:?}"));
            }
            Ok(())
        }
        (g, o) => Err(format!("search {g:?} vs oracle {o:?} for {h:?} at {s:?}")),
    }
}
