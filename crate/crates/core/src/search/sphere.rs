//! Schnorr-Euchner enumeration of the rate quadratic form.
//!
//! The rate of `a` is `-log2(a* M a)` with
//! `M = I - SNR h h* / (1 + SNR ||h||^2)`, so a positive rate means
//! `a* M a < 1`. The search runs over the real interleaved coordinates
//! `(Re a1, Im a1, Re a2, ...)` inside the ellipsoid of radius one and shrinks
//! the radius to the best value found so far.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CoefficientVector, GaussInt};
use crate::rates::quad_min;

/// Real 2L x 2L Gram matrix of `M` in interleaved coordinates.
pub(crate) fn real_gram(h: &[Complex64], snr: f64) -> Vec<Vec<f64>> {
    let l = h.len();
    let k = snr / (1.0 + snr * h.iter().map(|x| x.norm_sqr()).sum::<f64>());
    let mut g = vec![vec![0.0; 2 * l]; 2 * l];
    for i in 0..l {
        for j in 0..l {
            let m = h[i] * h[j].conj() * (-k) + if i == j { 1.0 } else { 0.0 };
            g[2 * i][2 * j] = m.re;
            g[2 * i][2 * j + 1] = -m.im;
            g[2 * i + 1][2 * j] = m.im;
            g[2 * i + 1][2 * j + 1] = m.re;
        }
    }
    g
}

/// Upper-triangular `R` with `G = R^T R`.
fn cholesky_upper(g: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let mut r = vec![vec![0.0; n]; n];
    for k in 0..n {
        let d = g[k][k] - (0..k).map(|i| r[i][k] * r[i][k]).sum::<f64>();
        if !(d > 0.0) {
            return None;
        }
        r[k][k] = d.sqrt();
        for j in (k + 1)..n {
            r[k][j] = (g[k][j] - (0..k).map(|i| r[i][k] * r[i][j]).sum::<f64>()) / r[k][k];
        }
    }
    Some(r)
}

struct Search<'a> {
    h: &'a [Complex64],
    snr: f64,
    bound: f64,
    required: &'a [bool],
    r: Vec<Vec<f64>>,
    x: Vec<i64>,
    radius: f64,
    leaves: u64,
    leaf_limit: u64,
    best: Option<(CoefficientVector, f64)>,
}

impl Search<'_> {
    fn center(&self, k: usize) -> f64 {
        let n = self.x.len();
        -((k + 1)..n).map(|j| self.r[k][j] * self.x[j] as f64).sum::<f64>() / self.r[k][k]
    }

    fn skip_zero(&self, k: usize) -> bool {
        k % 2 == 0 && self.required[k / 2] && self.x[k + 1] == 0
    }

    fn descend(&mut self, k: usize, partial: f64) -> Result<()> {
        let c = self.center(k);
        let rkk2 = self.r[k][k] * self.r[k][k];
        let x0 = c.round() as i64;
        let step = if c >= x0 as f64 { 1 } else { -1 };
        // Zig-zag around the center: x0, x0+step, x0-step, x0+2step, ...
        let mut offset = 0i64;
        let (mut up_done, mut down_done) = (false, false);
        let mut toward_step = true;
        loop {
            if up_done && down_done {
                break;
            }
            let candidate = if offset == 0 {
                x0
            } else if toward_step {
                x0 + step * offset
            } else {
                x0 - step * offset
            };
            let side_done = if offset == 0 || toward_step { up_done } else { down_done };
            if !side_done {
                let d = partial + rkk2 * (candidate as f64 - c).powi(2);
                if d > self.radius {
                    if offset == 0 {
                        up_done = true;
                        down_done = true;
                    } else if toward_step {
                        up_done = true;
                    } else {
                        down_done = true;
                    }
                } else if !(candidate == 0 && self.skip_zero(k)) {
                    self.x[k] = candidate;
                    if k == 0 {
                        self.leaf()?;
                    } else {
                        self.descend(k - 1, d)?;
                    }
                }
            }
            if offset == 0 {
                offset = 1;
                toward_step = true;
            } else if toward_step {
                toward_step = false;
            } else {
                offset += 1;
                toward_step = true;
            }
        }
        self.x[k] = 0;
        Ok(())
    }

    fn leaf(&mut self) -> Result<()> {
        if self.x.iter().all(|&v| v == 0) {
            return Ok(());
        }
        self.leaves += 1;
        if self.leaves > self.leaf_limit {
            return Err(Error::Budget { what: "equation search", limit: self.leaf_limit as u128 });
        }
        let a = CoefficientVector::new(self.x.chunks(2).map(|p| GaussInt::new(p[0], p[1])).collect());
        if (a.norm_sqr() as f64) >= self.bound {
            return Ok(());
        }
        let a = a.canonical();
        let (q, _) = quad_min(1.0, self.h, &a.to_complex(), self.snr);
        let rate = -q.log2();
        if !(rate > 0.0) {
            return Ok(());
        }
        let better = match &self.best {
            None => true,
            Some((b, br)) => rate > *br || (rate == *br && a.lex_cmp(b).is_gt()),
        };
        if better {
            self.best = Some((a, rate));
            self.radius = self.radius.min(q * (1.0 + 1e-9) + 1e-15);
        }
        Ok(())
    }
}

/// Highest-rate canonical coefficient vector with positive rate, optionally
/// forcing the flagged entries to be nonzero.
pub(crate) fn best_by_sphere(
    h: &[Complex64],
    snr: f64,
    required: &[bool],
    leaf_limit: u64,
) -> Result<Option<(CoefficientVector, f64)>> {
    let h_norm: f64 = h.iter().map(|x| x.norm_sqr()).sum();
    let bound = 1.0 + h_norm * snr;
    if !(bound > 1.0) {
        return Ok(None);
    }
    let r = cholesky_upper(&real_gram(h, snr))
        .ok_or_else(|| Error::Domain("rate quadratic form is not positive definite".into()))?;
    let n = 2 * h.len();
    let mut search = Search {
        h,
        snr,
        bound,
        required,
        r,
        x: vec![0; n],
        radius: 1.0 + 1e-9,
        leaves: 0,
        leaf_limit,
        best: None,
    };
    search.descend(n - 1, 0.0)?;
    Ok(search.best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_reproduces_quadratic_form() {
        let h = [Complex64::new(0.4, -1.1), Complex64::new(2.0, 0.3)];
        let s = 3.7;
        let g = real_gram(&h, s);
        let a = [GaussInt::new(2, -1), GaussInt::new(-1, 3)];
        let x: Vec<f64> = a.iter().flat_map(|z| [z.re as f64, z.im as f64]).collect();
        let via_gram: f64 = (0..4).map(|i| (0..4).map(|j| x[i] * g[i][j] * x[j]).sum::<f64>()).sum();
        let ac: Vec<Complex64> = a.iter().map(|z| z.to_complex()).collect();
        let hn: f64 = h.iter().map(|v| v.norm_sqr()).sum();
        let ha: Complex64 = h.iter().zip(&ac).map(|(hi, ai)| hi.conj() * ai).sum();
        let direct = ac.iter().map(|v| v.norm_sqr()).sum::<f64>() - s * ha.norm_sqr() / (1.0 + s * hn);
        assert!((via_gram - direct).abs() < 1e-10);
    }

    #[test]
    fn cholesky_factors_gram() {
        let h = [Complex64::new(1.5, 0.2), Complex64::new(-0.3, 0.9), Complex64::new(0.1, 0.1)];
        let g = real_gram(&h, 50.0);
        let r = cholesky_upper(&g).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let v: f64 = (0..6).map(|k| r[k][i] * r[k][j]).sum();
                assert!((v - g[i][j]).abs() < 1e-10);
            }
        }
    }
}
