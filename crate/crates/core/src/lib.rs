//! Provider-side cellular fingerprint localization.
//!
//! The pipeline turns event-based provider measurement records into a
//! location service: GPS labels are joined to records by timestamp, a
//! Gaussian-process radio map densifies the labeled set along the trace
//! paths, a virtual grid discretizes the area, a softmax network learns the
//! cell distribution for a scan, and the online estimator fuses the
//! distribution into a continuous position. A synthetic propagation
//! simulator and an evaluation harness round out the crate.

pub mod augment;
pub mod config;
pub mod dataset;
pub mod domain;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod geo;
pub mod grid;
pub mod model;
pub mod sim;
pub mod sync;

pub use error::{Error, Result};
