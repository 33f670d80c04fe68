//! Floquet stability of the driven pendulum `φ'' + [κ + a(θ)] φ = 0`.
//!
//! `θ = νt` is the drive phase, `κ = −(Ω/ν)²` the (negative for the inverted
//! pendulum) steepness and `a(θ) = α w(θ)` the scaled foundation
//! acceleration with a zero-mean, `2π`-periodic waveform `w`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ode::{bracket_root, rk_propagate_pair, Grid};

/// Default RK4 steps per drive period.
pub const DEFAULT_STEPS_PER_PERIOD: usize = 4000;

/// Width of the band `||trace| − 2| <= tol` classified as marginal.
pub const MARGINAL_TOLERANCE: f64 = 1e-6;

/// Bisection tolerance on the drive amplitude.
pub const THRESHOLD_TOLERANCE: f64 = 1e-6;

/// One harmonic `amplitude · cos(order·θ + phase)`, `order >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub order: u32,
    pub amplitude: f64,
    pub phase: f64,
}

/// Drive shape `w(θ)`; every variant has zero mean over one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Waveform {
    /// `cos(θ + phase)`.
    Cosine { phase: f64 },
    /// Sum of harmonics of order `>= 1`.
    Fourier(Vec<Harmonic>),
}

impl Default for Waveform {
    fn default() -> Self {
        Waveform::Cosine { phase: 0.0 }
    }
}

impl Waveform {
    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            Waveform::Cosine { phase } => (theta + phase).cos(),
            Waveform::Fourier(terms) => terms
                .iter()
                .map(|h| h.amplitude * (h.order as f64 * theta + h.phase).cos())
                .sum(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Waveform::Fourier(terms) = self {
            if terms.iter().any(|h| h.order == 0) {
                return Err(domain("harmonic of order 0 would add a mean to the drive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendulumParams {
    pub kappa: f64,
    /// Drive amplitude `α`.
    pub alpha: f64,
    pub waveform: Waveform,
}

impl PendulumParams {
    pub fn new(kappa: f64, alpha: f64) -> Self {
        Self {
            kappa,
            alpha,
            waveform: Waveform::default(),
        }
    }

    pub fn with_waveform(mut self, waveform: Waveform) -> Self {
        self.waveform = waveform;
        self
    }

    /// `κ + α w(θ)`.
    pub fn coefficient(&self, theta: f64) -> f64 {
        self.kappa + self.alpha * self.waveform.eval(theta)
    }
}

/// Reduces a physical pendulum of length `length` under gravity `g`, whose
/// foundation moves as `f_amplitude · cos(nu t)`, to dimensionless form.
///
/// `a(θ) = f''(θ)/L = −(f_amplitude/L) cos θ`, so `α = f_amplitude/L` with
/// the sign carried by the waveform phase `π`.
pub fn from_physical(g: f64, length: f64, nu: f64, f_amplitude: f64) -> Result<PendulumParams> {
    for (name, v) in [
        ("g", g),
        ("length", length),
        ("nu", nu),
        ("f_amplitude", f_amplitude),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain(format!("{name} = {v} must be positive")));
        }
    }
    Ok(PendulumParams {
        kappa: -(g / length) / (nu * nu),
        alpha: f_amplitude / length,
        waveform: Waveform::Cosine { phase: PI },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    pub fn from_trace(trace: f64) -> Self {
        if trace.is_nan() {
            return Stability::Unstable;
        }
        let excess = trace.abs() - 2.0;
        if excess < -MARGINAL_TOLERANCE {
            Stability::Stable
        } else if excess > MARGINAL_TOLERANCE {
            Stability::Unstable
        } else {
            Stability::Marginal
        }
    }
}

/// One-period transfer matrix acting on `(φ, φ')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromyResult {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
    pub trace: f64,
    pub determinant: f64,
    pub classification: Stability,
    /// Set when propagation exceeded the overflow cap; the entries are then NaN.
    pub diverged: bool,
}

pub fn monodromy(params: &PendulumParams, steps_per_period: usize) -> Result<MonodromyResult> {
    if steps_per_period < 100 {
        return Err(domain(format!(
            "steps_per_period {steps_per_period} is below 100"
        )));
    }
    params.waveform.validate()?;
    let grid = Grid::new(0.0, 2.0 * PI / steps_per_period as f64, steps_per_period + 1)?;
    let q = |t: f64| params.coefficient(t);
    let first = rk_propagate_pair(&q, &grid, 1.0, 0.0);
    let second = rk_propagate_pair(&q, &grid, 0.0, 1.0);
    match (first, second) {
        (Ok((u1, du1)), Ok((u2, du2))) => {
            let last = |w: &crate::ode::WaveSamples| w.values()[w.len() - 1];
            let (m11, m21, m12, m22) = (last(&u1), last(&du1), last(&u2), last(&du2));
            let trace = m11 + m22;
            Ok(MonodromyResult {
                m11,
                m12,
                m21,
                m22,
                trace,
                determinant: m11 * m22 - m12 * m21,
                classification: Stability::from_trace(trace),
                diverged: false,
            })
        }
        (Err(Error::Diverged { .. }), _) | (_, Err(Error::Diverged { .. })) => {
            Ok(MonodromyResult {
                m11: f64::NAN,
                m12: f64::NAN,
                m21: f64::NAN,
                m22: f64::NAN,
                trace: f64::INFINITY,
                determinant: f64::NAN,
                classification: Stability::Unstable,
                diverged: true,
            })
        }
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// Uniformly spaced axis including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || max < min {
            return Err(domain(format!("invalid range [{min}, {max}]")));
        }
        if count < 2 {
            return Err(domain(format!("resolution {count} is below 2")));
        }
        Ok(Self { min, max, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartCell {
    pub kappa: f64,
    pub alpha: f64,
    pub trace: f64,
    pub determinant: f64,
    pub classification: Stability,
}

impl ChartCell {
    pub fn is_stable(&self) -> bool {
        self.classification == Stability::Stable
    }
}

/// Stability over a `κ × α` lattice; cells are stored κ-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityChart {
    pub kappa_axis: Axis,
    pub alpha_axis: Axis,
    pub cells: Vec<ChartCell>,
}

impl StabilityChart {
    pub fn cell(&self, kappa_index: usize, alpha_index: usize) -> &ChartCell {
        &self.cells[kappa_index * self.alpha_axis.count + alpha_index]
    }

    pub fn stable_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_stable()).count()
    }
}

/// Evaluates every cell independently (in parallel, written to fixed slots).
pub fn stability_chart(
    kappa_axis: Axis,
    alpha_axis: Axis,
    waveform: &Waveform,
    steps_per_period: usize,
) -> Result<StabilityChart> {
    let cells = (0..kappa_axis.count * alpha_axis.count)
        .into_par_iter()
        .map(|idx| {
            let kappa = kappa_axis.value(idx / alpha_axis.count);
            let alpha = alpha_axis.value(idx % alpha_axis.count);
            let params = PendulumParams {
                kappa,
                alpha,
                waveform: waveform.clone(),
            };
            monodromy(&params, steps_per_period).map(|m| ChartCell {
                kappa,
                alpha,
                trace: m.trace,
                determinant: m.determinant,
                classification: m.classification,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityChart {
        kappa_axis,
        alpha_axis,
        cells,
    })
}

/// Drive amplitude at which the inverted pendulum (`κ < 0`) turns stable,
/// located by bisection on `|trace| − 2` between 0 and `alpha_hi`.
pub fn kapitza_threshold(
    kappa: f64,
    alpha_hi: f64,
    waveform: &Waveform,
    steps_per_period: usize,
) -> Result<f64> {
    if !(kappa < 0.0) {
        return Err(domain(format!("kappa {kappa} must be negative")));
    }
    if !(alpha_hi > 0.0) {
        return Err(domain(format!("alpha_hi {alpha_hi} must be positive")));
    }
    let excess = |alpha: f64| -> f64 {
        let params = PendulumParams {
            kappa,
            alpha,
            waveform: waveform.clone(),
        };
        match monodromy(&params, steps_per_period) {
            Ok(m) => m.trace.abs() - 2.0,
            Err(_) => f64::NAN,
        }
    };
    let lo_excess = excess(0.0);
    let hi_excess = excess(alpha_hi);
    if !(lo_excess > MARGINAL_TOLERANCE && hi_excess < -MARGINAL_TOLERANCE) {
        return Err(Error::BracketInvalid);
    }
    bracket_root(excess, 0.0, alpha_hi, THRESHOLD_TOLERANCE)
}
