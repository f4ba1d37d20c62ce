//! Rejection samplers whose runtime does not leak the data they sample from.
//!
//! The crate covers the runtime privacy accounting of plain rejection
//! sampling ([`accounting`]), three exact samplers with database-free
//! runtime ([`samplers`]), an adaptive sampler for log-Hölder targets
//! ([`adaptive`]), ready-made exponential-mechanism envelopes
//! ([`mechanisms`]) and a statistical harness ([`harness`]).
//!
//! ```
//! use std::sync::Arc;
//! use dp_rejection::distributions::{GaussianLaw, RngStream};
//! use dp_rejection::samplers::{squeeze_reject, Envelope, UnnormalizedTarget};
//!
//! // exp(-x^2) sits between N(0, 1/4) and N(0, 1) up to constants
//! let target = UnnormalizedTarget::new(1, |x| -x[0] * x[0]);
//! let pi2 = 2.0 * std::f64::consts::PI;
//! let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 1.0).unwrap()), 0.5 * pi2.ln())
//!     .with_squeeze(Arc::new(GaussianLaw::new(vec![0.0], 4.0).unwrap()), 0.5 * (pi2 / 4.0).ln());
//! let mut rng = RngStream::new(7, 0);
//! let trace = squeeze_reject(&target, &env, &mut rng).unwrap();
//! assert!(trace.runtime >= 1);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accounting;
pub mod adaptive;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod harness;
pub mod mechanisms;
pub mod samplers;

pub use error::{Error, Result};
