//! Phase-space toolkit for multimode Gaussian states and their resource
//! quantifiers at fixed energy.
//!
//! States are described by a displacement vector and a covariance matrix
//! over a [`ModeTable`] that groups modes by frequency. On top of that sit
//! symplectic decompositions, state factories, Gaussian channels, the
//! entropic quantifiers (coherence, non-uniformity, discord, pure-state
//! entanglement) and the passive unitaries that maximise coherence.

// `!(x > 0.0)` is used on purpose to reject NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
mod error;
pub mod linalg;
pub mod maximizers;
pub mod phase_space;
pub mod quantifiers;
pub mod states;
pub mod symplectic;

pub use error::{Error, Result};
pub use phase_space::{GaussianState, ModeTable, OccupationProfile, DEFAULT_TOL};
pub use quantifiers::{LogBase, ResourceReport};
