//! Channel gains and signal-to-noise ratios.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex channel gains seen by one receiver, one entry per transmitter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelVector(Vec<Complex64>);

impl ChannelVector {
    /// Validates that the vector is nonempty and every entry is finite.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("channel vector must be nonempty".into()));
        }
        if entries.iter().any(|h| !h.re.is_finite() || !h.im.is_finite()) {
            return Err(Error::Domain("channel gains must be finite".into()));
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|h| h.norm_sqr()).sum()
    }
}

impl std::ops::Index<usize> for ChannelVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Linear signal-to-noise power ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Snr(f64);

impl Snr {
    pub fn from_linear(linear: f64) -> Result<Self> {
        if !(linear >= 0.0) || !linear.is_finite() {
            return Err(Error::Domain(format!("SNR must be finite and nonnegative, got {linear}")));
        }
        Ok(Self(linear))
    }

    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() {
            return Err(Error::Domain(format!("SNR in dB must be finite, got {db}")));
        }
        Self::from_linear(10f64.powf(db / 10.0))
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }

    /// Scales the ratio by a nonnegative factor.
    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::from_linear(self.0 * factor)
    }
}
