//! Numerical laboratory for bound states created by oscillating potentials.
//!
//! Every problem here reduces to the linear equation `u'' + q(θ) u = 0`:
//!
//! * [`floquet`]: the driven inverted pendulum `φ'' + [κ + a(θ)] φ = 0`, its
//!   one-period monodromy matrix, stability charts and the Kapitza threshold.
//! * [`accordion`]: the one-dimensional Schrödinger equation
//!   `u'' + [η − v(θ)] u = 0` for a potential that oscillates only inside a
//!   window, the period-averaged effective well and the envelope comparison.
//! * [`radial`]: the three-dimensional `l = 0` radial problem, zero-energy
//!   tuning, and the planar anti-centrifugal states built on Bessel functions.
//!
//! [`ode`] holds the shared grids, propagators and diagnostics, and
//! [`special`] the cylinder functions J0, J1, I0 and K0.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accordion;
mod error;
pub mod export;
pub mod floquet;
pub mod ode;
pub mod radial;
mod shooting;
pub mod special;

pub use error::{Error, Result};
