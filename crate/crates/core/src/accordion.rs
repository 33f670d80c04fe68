//! Bound states of the one-dimensional accordion potential
//! `v(θ) = v0 · μ(θ) · cos(θ + phase)`, a carrier that oscillates only
//! inside the window `μ` and vanishes in flat space outside.
//!
//! Besides the full eigensolver this module carries the envelope
//! description `u ≈ A(θ)[1 − v(θ)]`, where the envelope obeys
//! `A'' + [η − v_eff(θ)] A = 0` with the period-averaged well
//! `v_eff(θ) = −(1/2π) ∫_θ^{θ+2π} v²`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ode::{
    inner_product, normalized, simpson, CoefficientField, Grid, WaveSamples, DEFAULT_STEP,
};
use crate::shooting::{sample_with_steps, LeftEdge, Shooter};

/// Margin beyond the window, in decay lengths.
pub const DECAY_LENGTHS: f64 = 5.0;

/// Ramp of a raised-cosine window when none is given: one carrier period.
pub const DEFAULT_RAMP: f64 = TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowKind {
    Rectangular,
    RaisedCosine,
}

/// Window `μ(θ)`: 1 on the plateau `|θ − center| <= half_width`, 0 outside
/// the support. A rectangular window takes the value 1/2 exactly on its edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub center: f64,
    pub half_width: f64,
    pub ramp: f64,
}

impl WindowSpec {
    pub fn rectangular(center: f64, half_width: f64) -> Self {
        Self {
            kind: WindowKind::Rectangular,
            center,
            half_width,
            ramp: 0.0,
        }
    }

    pub fn raised_cosine(center: f64, half_width: f64, ramp: f64) -> Self {
        Self {
            kind: WindowKind::RaisedCosine,
            center,
            half_width,
            ramp,
        }
    }

    /// Rectangular window over `[start, start + periods·2π]`.
    pub fn periods(start: f64, periods: f64) -> Self {
        let half = 0.5 * periods * TAU;
        Self::rectangular(start + half, half)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(domain(format!("half width {} must be positive", self.half_width)));
        }
        if !(self.ramp >= 0.0 && self.ramp.is_finite()) || !self.center.is_finite() {
            return Err(domain("window ramp must be non-negative and center finite"));
        }
        Ok(())
    }

    /// Half extent of the support about the center.
    pub fn reach(&self) -> f64 {
        match self.kind {
            WindowKind::Rectangular => self.half_width,
            WindowKind::RaisedCosine => self.half_width + self.ramp,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let d = (theta - self.center).abs();
        match self.kind {
            WindowKind::Rectangular => {
                let edge_tol = 1e-9 * (1.0 + self.half_width);
                if (d - self.half_width).abs() <= edge_tol {
                    0.5
                } else if d < self.half_width {
                    1.0
                } else {
                    0.0
                }
            }
            WindowKind::RaisedCosine => {
                if d <= self.half_width {
                    1.0
                } else if d >= self.half_width + self.ramp {
                    0.0
                } else {
                    0.5 * (1.0 + (PI * (d - self.half_width) / self.ramp).cos())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccordionPotential {
    /// Carrier amplitude `v0` in recoil units.
    pub amplitude: f64,
    pub window: WindowSpec,
    pub phase: f64,
}

impl AccordionPotential {
    pub fn new(amplitude: f64, window: WindowSpec) -> Self {
        Self {
            amplitude,
            window,
            phase: 0.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) || !self.phase.is_finite() {
            return Err(domain(format!("amplitude {} must be non-negative", self.amplitude)));
        }
        Ok(())
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mu = self.window.eval(theta);
        if mu == 0.0 {
            0.0
        } else {
            self.amplitude * mu * (theta + self.phase).cos()
        }
    }

    /// Symmetric grid about the window center, with the window edges and the
    /// center on grid points and `margin` of flat space on both sides.
    pub fn domain(&self, margin: f64, step_hint: f64) -> Result<Grid> {
        self.validate()?;
        if !(margin >= 0.0 && step_hint > 0.0) {
            return Err(domain("margin must be non-negative and step positive"));
        }
        let hw = self.window.half_width;
        let step = hw / (hw / step_hint).round().max(1.0);
        let half_points = ((self.window.reach() + margin) / step).ceil() as usize;
        Grid::new(
            self.window.center - half_points as f64 * step,
            step,
            2 * half_points + 1,
        )
    }

    /// [`Self::domain`] with [`DECAY_LENGTHS`] decay lengths of flat space,
    /// estimating the binding energy as half the effective well depth `v0²/2`.
    pub fn default_domain(&self) -> Result<Grid> {
        let depth = 0.25 * self.amplitude * self.amplitude;
        let decay = if depth > 0.0 { 1.0 / depth.sqrt() } else { 10.0 };
        self.domain(DECAY_LENGTHS * decay, DEFAULT_STEP)
    }
}

impl CoefficientField for AccordionPotential {
    fn eval(&self, theta: f64) -> f64 {
        AccordionPotential::eval(self, theta)
    }
}

/// The potential as an evaluation rule `θ ↦ v(θ)`.
pub fn build_potential(spec: &AccordionPotential) -> Result<impl Fn(f64) -> f64> {
    spec.validate()?;
    let spec = *spec;
    Ok(move |theta: f64| spec.eval(theta))
}

/// Forward period average `−(1/2π) ∫_θ^{θ+2π} v²` at each grid point θ with
/// `θ + 2π` still on the grid.
///
/// Whole pairs of grid intervals inside the window are summed with Simpson's
/// rule from stride-2 prefix sums; the remaining sliver shorter than two
/// steps is integrated with three-point Gauss–Legendre on `v` directly.
pub fn effective_potential(v: &impl CoefficientField, grid: &Grid) -> Result<WaveSamples> {
    let h = grid.step();
    let n = grid.count();
    let whole = (TAU / h * (1.0 + 1e-12)).floor() as usize;
    let even = whole - whole % 2;
    let usable = (0..n)
        .take_while(|&i| grid.point(i) + TAU <= grid.end() + 1e-9 * h)
        .count();
    if usable < 3 || even < 2 {
        return Err(domain(format!(
            "grid must extend 2π beyond at least three points (span {})",
            grid.end() - grid.start()
        )));
    }
    let sq: Vec<f64> = grid.points().map(|t| v.eval(t).powi(2)).collect();
    // pair[s] = sq[s] + 4 sq[s+1] + sq[s+2]; prefix[s] sums pair over s, s−2, ...
    let pairs = n - 2;
    let mut prefix = vec![0.0; pairs];
    for s in 0..pairs {
        let p = sq[s] + 4.0 * sq[s + 1] + sq[s + 2];
        prefix[s] = p + if s >= 2 { prefix[s - 2] } else { 0.0 };
    }
    let gauss = [
        (-(0.6_f64).sqrt(), 5.0 / 9.0),
        (0.0, 8.0 / 9.0),
        ((0.6_f64).sqrt(), 5.0 / 9.0),
    ];
    let values = (0..usable)
        .map(|i| {
            let last_pair = i + even - 2;
            let before = if i >= 2 { prefix[i - 2] } else { 0.0 };
            let body = h / 3.0 * (prefix[last_pair] - before);
            let a = grid.point(i + even);
            let b = grid.point(i) + TAU;
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let sliver: f64 = half
                * gauss
                    .iter()
                    .map(|&(x, w)| w * v.eval(mid + half * x).powi(2))
                    .sum::<f64>();
            -(body + sliver) / TAU
        })
        .collect();
    WaveSamples::new(grid.truncated(usable)?, values)
}

/// Converged bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Energy in recoil units, `η = E/E_r`.
    pub eta: f64,
    /// Normalized to `∫ u² dθ = 1`.
    pub wave: WaveSamples,
    pub nodes: usize,
    pub match_defect: f64,
    pub bracket_width: f64,
}

impl From<crate::shooting::Eigenstate> for EigenResult {
    fn from(s: crate::shooting::Eigenstate) -> Self {
        Self {
            eta: s.eta,
            wave: s.wave,
            nodes: s.nodes,
            match_defect: s.match_defect,
            bracket_width: s.bracket_width,
        }
    }
}

/// Bidirectional Numerov shooting for the state with `target_nodes` nodes
/// and energy in `[eta_lo, eta_hi]`.
///
/// Both tails start from the decaying exponential and are matched at the
/// middle of `domain`, so the domain should be centered on the window and
/// reach several decay lengths `1/√|eta_hi|` into flat space.
pub fn shoot_eigenvalue(
    v: &impl CoefficientField,
    eta_lo: f64,
    eta_hi: f64,
    target_nodes: usize,
    domain: &Grid,
) -> Result<EigenResult> {
    let samples = sample_with_steps(v, domain);
    let shooter = Shooter::new(*domain, samples, LeftEdge::Decaying, (domain.count() - 1) / 2)?;
    shooter.solve(eta_lo, eta_hi, target_nodes).map(Into::into)
}

/// Envelope approximation against the full solution for the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub potential: WaveSamples,
    pub v_eff: WaveSamples,
    pub eta_envelope: f64,
    pub eta_full: f64,
    pub relative_gap: f64,
    pub full: WaveSamples,
    /// Envelope ground state `A`, normalized.
    pub envelope: WaveSamples,
    /// `A (1 − v)`, normalized.
    pub reconstructed: WaveSamples,
    /// `|⟨u_full, u_reconstructed⟩|²`.
    pub overlap: f64,
}

/// Solves the envelope equation in the effective well and the full problem,
/// and compares energies and wave functions (ε = +1 throughout).
pub fn envelope_compare(spec: &AccordionPotential, domain: &Grid) -> Result<EnvelopeReport> {
    spec.validate()?;
    if spec.amplitude >= 1.0 {
        return Err(Error::AnsatzOutOfValidity(format!(
            "v0 = {} leaves 1 − v(θ) without a definite sign",
            spec.amplitude
        )));
    }
    let v0 = spec.amplitude;
    let eta_lo = -(v0 + 1e-3);
    let eta_hi = -1e-9;

    let extra = (TAU / domain.step()).ceil() as usize + 2;
    let extended = Grid::new(domain.start(), domain.step(), domain.count() + extra)?;
    let v_eff_all = effective_potential(spec, &extended)?;
    let v_eff = WaveSamples::new(*domain, v_eff_all.values()[..domain.count()].to_vec())?;

    let full = shoot_eigenvalue(spec, eta_lo, eta_hi, 0, domain)?;
    let env = shoot_eigenvalue(&v_eff, eta_lo, eta_hi, 0, domain)?;

    let potential = WaveSamples::from_fn(*domain, |t| spec.eval(t))?;
    let rebuilt: Vec<f64> = env
        .wave
        .values()
        .iter()
        .zip(potential.values())
        .map(|(a, v)| a * (1.0 - v))
        .collect();
    let reconstructed = normalized(&WaveSamples::new(*domain, rebuilt)?)?;
    let overlap = inner_product(&full.wave, &reconstructed)?.powi(2);

    Ok(EnvelopeReport {
        potential,
        v_eff,
        eta_envelope: env.eta,
        eta_full: full.eta,
        relative_gap: ((env.eta - full.eta) / full.eta).abs(),
        full: full.wave,
        envelope: env.wave,
        reconstructed,
        overlap,
    })
}

/// Spatial integral of the potential over the grid (zero for whole periods).
pub fn potential_integral(spec: &AccordionPotential, grid: &Grid) -> Result<f64> {
    let w = WaveSamples::from_fn(*grid, |t| spec.eval(t))?;
    Ok(simpson(w.values(), grid.step()))
}
