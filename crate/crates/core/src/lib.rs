//! Compute-and-forward toolkit.
//!
//! Relays in a Gaussian network decode integer linear combinations of the
//! transmitted messages instead of the messages themselves. This crate
//! computes the achievable computation rates, searches for the best integer
//! coefficients, solves for messages over finite fields, runs a small
//! nested-lattice simulation of the whole pipeline and estimates outage
//! rates of relaying strategies under Rayleigh fading.
//!
//! ```
//! use compute_forward::{ChannelVector, CoefficientVector, Snr, rates::comp_rate};
//!
//! let h = ChannelVector::from_real(&[1.0, 1.0]).unwrap();
//! let a = CoefficientVector::from_real(&[1, 1]);
//! let r = comp_rate(&h, &a, Snr::from_linear(10.0).unwrap()).unwrap();
//! assert!((r.rate_bits - (0.5f64 + 10.0).log2()).abs() < 1e-12);
//! ```

pub mod channel;
pub mod cli;
pub mod codec;
pub mod error;
pub mod field;
pub mod gaussian;
pub mod outage;
pub mod rates;
pub mod search;
pub mod streams;

pub use channel::{ChannelVector, Snr};
pub use error::{Error, Result};
pub use gaussian::{CoefficientVector, GaussInt};
