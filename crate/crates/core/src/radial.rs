//! Radial problems with vanishing angular momentum.
//!
//! In three dimensions `u = rψ` obeys `u'' + [η − V(r)] u = 0` with
//! `u(0) = 0`. In two dimensions `u = √ρ ψ` picks up the attractive
//! quantum anti-centrifugal term: `u'' + [η − (m² − 1/4)/ρ²] u = 0`.

use serde::{Deserialize, Serialize};

use crate::accordion::EigenResult;
use crate::error::{domain, Error, Result};
use crate::ode::{
    bracket_root, numerov_propagate, ode_residual, simpson, Grid, WaveSamples, DEFAULT_STEP,
};
use crate::shooting::{sample_with_steps, LeftEdge, Shooter};
use crate::special::{bessel_j, bessel_k0, bessel_zeros};

/// Bisection tolerance on the tuned depth.
pub const DEPTH_TOLERANCE: f64 = 1e-10;

/// Smallest radius at which planar states are sampled.
pub const RHO_MIN: f64 = 1e-4;

/// Interval on which the K0 state is checked against its differential equation.
pub const K0_RESIDUAL_WINDOW: (f64, f64) = (0.5, 8.0);

/// Spherically symmetric potential
/// `V(r) = μ(r) [amplitude · cos(r + phase) − depth]`, with `μ = 1` below
/// `r0`, `1/2` at `r0` and `0` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialPotential3D {
    pub amplitude: f64,
    pub phase: f64,
    pub r0: f64,
    /// Uniform well depth inside `r0`.
    pub depth: f64,
}

impl RadialPotential3D {
    pub fn square_well(depth: f64, r0: f64) -> Self {
        Self {
            amplitude: 0.0,
            phase: 0.0,
            r0,
            depth,
        }
    }

    /// Carrier `−amplitude · cos r`: attractive at the origin, and continuous
    /// at `r0` when `r0 = (2n + 1/2)π`.
    pub fn accordion(amplitude: f64, r0: f64) -> Self {
        Self {
            amplitude,
            phase: std::f64::consts::PI,
            r0,
            depth: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(domain(format!("r0 = {} must be positive", self.r0)));
        }
        if !(self.amplitude.is_finite() && self.depth.is_finite() && self.phase.is_finite()) {
            return Err(domain("potential parameters must be finite"));
        }
        Ok(())
    }

    pub fn eval(&self, r: f64) -> f64 {
        let edge_tol = 1e-9 * (1.0 + self.r0);
        let mu = if (r - self.r0).abs() <= edge_tol {
            0.5
        } else if r < self.r0 {
            1.0
        } else {
            return 0.0;
        };
        mu * (self.amplitude * (r + self.phase).cos() - self.depth)
    }

    /// Grid on `[0, r_end]` with `r0` on a grid point.
    pub fn grid(&self, r_end: f64, step_hint: f64) -> Result<Grid> {
        self.validate()?;
        if !(r_end > self.r0) || !(step_hint > 0.0) {
            return Err(domain(format!("r_end {r_end} must exceed r0 = {}", self.r0)));
        }
        let step = self.r0 / (self.r0 / step_hint).round().max(1.0);
        let count = (r_end / step).ceil() as usize + 1;
        Grid::new(0.0, step, count)
    }
}

/// Outer radius `r0 + max(10, 10/√|η|)` for an energy estimate `η`.
pub fn default_r_end(r0: f64, eta_estimate: f64) -> f64 {
    let tail = if eta_estimate < 0.0 {
        10.0 / (-eta_estimate).sqrt()
    } else {
        10.0
    };
    r0 + tail.max(10.0)
}

/// Ground state (`u(0) = 0`, no interior node) with energy in `[eta_lo, eta_hi]`.
pub fn solve_radial_3d(
    potential: &RadialPotential3D,
    eta_lo: f64,
    eta_hi: f64,
    grid: &Grid,
) -> Result<EigenResult> {
    solve_radial_state(potential, eta_lo, eta_hi, 0, grid)
}

/// State with `nodes` interior nodes; matched to the decaying exponential at
/// the outer end of the grid.
pub fn solve_radial_state(
    potential: &RadialPotential3D,
    eta_lo: f64,
    eta_hi: f64,
    nodes: usize,
    grid: &Grid,
) -> Result<EigenResult> {
    potential.validate()?;
    check_origin_grid(grid)?;
    let samples = sample_with_steps(&|r: f64| potential.eval(r), grid);
    let shooter = Shooter::new(*grid, samples, LeftEdge::Origin, grid.count() - 2)?;
    shooter.solve(eta_lo, eta_hi, nodes).map(Into::into)
}

/// Outward solution with `u(0) = 0, u(h) = h` at any energy (used for the
/// zero- and positive-energy radial states).
pub fn radial_outward(potential: &RadialPotential3D, eta: f64, grid: &Grid) -> Result<WaveSamples> {
    potential.validate()?;
    check_origin_grid(grid)?;
    numerov_propagate(
        &|r: f64| eta - potential.eval(r),
        grid,
        0.0,
        grid.step(),
    )
}

fn check_origin_grid(grid: &Grid) -> Result<()> {
    if grid.start() != 0.0 {
        return Err(domain("radial grids start at the origin"));
    }
    Ok(())
}

/// `ψ = u/r` on the grid points with `r > 0`.
pub fn psi_from_u(u: &WaveSamples) -> Result<WaveSamples> {
    let shifted = u.grid().shifted(1)?;
    let values = u.iter().skip(1).map(|(r, x)| x / r).collect();
    WaveSamples::new(shifted, values)
}

/// Zero-energy state whose depth parameter was tuned so that the exterior
/// solution is flat.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroEnergyResult {
    pub tuned_depth: f64,
    pub potential: RadialPotential3D,
    /// Radial function, scaled to `u(r_end) = 1`.
    pub u: WaveSamples,
    /// `u/r` for `r > 0`.
    pub psi: WaveSamples,
    /// `max |u(r) − u(r_end)| / |u(r_end)|` over `[r0 + 1, r_end]`.
    pub tail_flatness: f64,
    /// Growth rate of `∫₀^R u² dr` beyond `r0 + 1`.
    pub density_growth_slope: f64,
}

/// Tunes the family parameter so that a quarter period of the interior
/// solution meets a constant exterior: bisection on the end slope `u'(r_end)`
/// of the `E = 0` outward solution.
pub fn tune_zero_energy(
    family: impl Fn(f64) -> RadialPotential3D,
    depth_lo: f64,
    depth_hi: f64,
    grid: &Grid,
) -> Result<ZeroEnergyResult> {
    check_origin_grid(grid)?;
    let n = grid.count();
    let h = grid.step();
    let end_slope = |depth: f64| -> f64 {
        match radial_outward(&family(depth), 0.0, grid) {
            Ok(u) => (u.values()[n - 1] - u.values()[n - 2]) / h,
            Err(_) => f64::NAN,
        }
    };
    let tuned = bracket_root(end_slope, depth_lo, depth_hi, DEPTH_TOLERANCE)?;
    let potential = family(tuned);
    if potential.r0 + 1.0 >= grid.end() {
        return Err(domain("grid must extend at least one unit beyond r0"));
    }
    let raw = radial_outward(&potential, 0.0, grid)?;
    let tail = raw.values()[n - 1];
    if tail == 0.0 {
        return Err(Error::DegenerateSamples);
    }
    let u = raw.scaled(1.0 / tail)?;
    let psi = psi_from_u(&u)?;

    let from = grid
        .nearest_index(potential.r0 + 1.0)
        .ok_or_else(|| domain("r0 + 1 outside the grid"))?;
    let tail_flatness = u.values()[from..]
        .iter()
        .map(|x| (x - 1.0).abs())
        .fold(0.0, f64::max);
    let r_a = grid.point(from);
    let density_growth_slope =
        (cumulative_norm(&u, grid.end())? - cumulative_norm(&u, r_a)?) / (grid.end() - r_a);

    Ok(ZeroEnergyResult {
        tuned_depth: tuned,
        potential,
        u,
        psi,
        tail_flatness,
        density_growth_slope,
    })
}

/// `∫₀^R u² dr`: Simpson up to the last grid point below `R`, then a
/// trapezoid on the remainder with the sample linearly interpolated.
pub fn cumulative_norm(u: &WaveSamples, radius: f64) -> Result<f64> {
    let grid = u.grid();
    if radius < grid.start() || radius > grid.end() + 1e-9 * grid.step() {
        return Err(domain(format!("radius {radius} outside the grid")));
    }
    let x = (radius - grid.start()) / grid.step();
    let mut k = x.floor() as usize;
    if x - k as f64 > 1.0 - 1e-9 {
        k += 1;
    }
    let k = k.min(grid.count() - 1);
    let sq: Vec<f64> = u.values()[..=k].iter().map(|v| v * v).collect();
    let mut total = simpson(&sq, grid.step());
    let rest = radius - grid.point(k);
    if rest > 1e-12 * grid.step() && k + 1 < grid.count() {
        let t = rest / grid.step();
        let v = u.values();
        let at_r = v[k] * (1.0 - t) + v[k + 1] * t;
        total += 0.5 * rest * (v[k] * v[k] + at_r * at_r);
    }
    Ok(total)
}

/// Growth of the integrated density `N(R) = ∫₀^R |ψ|² r² dr` of a zero-energy state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrowth {
    pub radii: Vec<f64>,
    pub cumulative: Vec<f64>,
    /// Mean of the successive shell slopes `ΔN/ΔR` among radii beyond `r0`.
    pub slope: f64,
    /// Largest relative deviation of a shell slope from `slope`.
    pub slope_flatness: f64,
    /// Radius where `|ψ|²` peaks.
    pub argmax_radius: f64,
    /// Index of that radius in the `ψ` samples (0 is the smallest radius).
    pub argmax_index: usize,
}

pub fn localized_density_report(z: &ZeroEnergyResult, radii: &[f64]) -> Result<DensityGrowth> {
    let cumulative = radii
        .iter()
        .map(|&r| cumulative_norm(&z.u, r))
        .collect::<Result<Vec<_>>>()?;
    let outer: Vec<(f64, f64)> = radii
        .iter()
        .copied()
        .zip(cumulative.iter().copied())
        .filter(|&(r, _)| r >= z.potential.r0)
        .collect();
    let slopes: Vec<f64> = outer
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    let (slope, slope_flatness) = if slopes.is_empty() {
        (z.density_growth_slope, 0.0)
    } else {
        let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
        let worst = slopes
            .iter()
            .map(|s| ((s - mean) / mean).abs())
            .fold(0.0, f64::max);
        (mean, worst)
    };
    let (argmax_index, _) = z
        .psi
        .values()
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &p)| {
            if p * p > best.1 {
                (i, p * p)
            } else {
                best
            }
        });
    Ok(DensityGrowth {
        radii: radii.to_vec(),
        cumulative,
        slope,
        slope_flatness,
        argmax_radius: z.psi.grid().point(argmax_index),
        argmax_index,
    })
}

/// Effective planar centrifugal term `(m² − 1/4)/ρ²` for the reduced radial function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarCentrifugal {
    pub m: u32,
}

impl PlanarCentrifugal {
    pub fn new(m: u32) -> Self {
        Self { m }
    }

    /// `m² − 1/4`; negative (attractive) only for `m = 0`.
    pub fn coefficient(&self) -> f64 {
        (self.m * self.m) as f64 - 0.25
    }

    /// `η − (m² − 1/4)/ρ²`.
    pub fn q(&self, rho: f64, eta: f64) -> f64 {
        eta - self.coefficient() / (rho * rho)
    }
}

/// Quantum anti-centrifugal potential `−1/(4ρ²)` in units of `ħ²k²/2M`.
pub fn quantum_anticentrifugal(rho: f64) -> f64 {
    -0.25 / (rho * rho)
}

/// Free planar state `√ρ J_m(ρ)`.
pub fn planar_free_state(m: u32, grid: &Grid) -> Result<WaveSamples> {
    if !(grid.start() > 0.0) {
        return Err(domain("planar grids must start at ρ > 0"));
    }
    let values = grid
        .points()
        .map(|rho| bessel_j(m, rho).map(|j| rho.sqrt() * j))
        .collect::<Result<Vec<_>>>()?;
    WaveSamples::new(*grid, values)
}

/// Node spacing of free planar states relative to the free-space spacing `π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BunchingSeries {
    pub m: u32,
    /// `j_{m,1}, …, j_{m,n_max}`.
    pub zeros: Vec<f64>,
    /// `Δ_m(n) = j_{m,n+1} − j_{m,n}` for `n = 1..n_max−1`.
    pub gaps: Vec<f64>,
    /// `g_m(n) = π / Δ_m(n)`.
    pub g: Vec<f64>,
}

impl BunchingSeries {
    /// `g_m(n)` with 1-based `n`.
    pub fn g_at(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.g.get(i).copied())
    }
}

pub fn bunching_series(m: u32, n_max: usize) -> Result<BunchingSeries> {
    if n_max < 2 {
        return Err(domain(format!("n_max {n_max} is below 2")));
    }
    let table = bessel_zeros(m, n_max)?;
    let gaps = table.gaps();
    let g = gaps.iter().map(|d| std::f64::consts::PI / d).collect();
    Ok(BunchingSeries {
        m,
        zeros: table.zeros,
        gaps,
        g,
    })
}

/// Diagnostics of the planar bound state `√(ρ/π) K0(ρ)` (units with `k = 1`, `η = −1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K0Report {
    /// Residual against `q = −1 + 1/(4ρ²)` on [`K0_RESIDUAL_WINDOW`] ∩ grid.
    pub ode_residual: f64,
    /// `∫₀^∞ u² dρ`.
    pub norm: f64,
    /// Where the ring density `u²` (probability per unit radius) peaks on the grid.
    pub band_peak_rho: f64,
    /// `u/√ρ` at the innermost grid point.
    pub steepness_inner: f64,
    /// `u/√ρ` at the grid point nearest `ρ = 0.1`.
    pub steepness_reference: f64,
}

/// Samples of `√(ρ/π) K0(ρ)` and their diagnostics.
pub fn k0_bound_state(grid: &Grid) -> Result<(WaveSamples, K0Report)> {
    if grid.start() < RHO_MIN {
        return Err(domain(format!(
            "ρ_min = {} is below {RHO_MIN}",
            grid.start()
        )));
    }
    let u = WaveSamples::new(
        *grid,
        grid.points()
            .map(|rho| bessel_k0(rho).map(|k| (rho / std::f64::consts::PI).sqrt() * k))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let q = |rho: f64| -1.0 + 0.25 / (rho * rho);
    let (lo, hi) = K0_RESIDUAL_WINDOW;
    let ode_residual = match u.window(lo, hi) {
        Ok(part) => ode_residual(&part, &q),
        Err(_) => ode_residual(&u, &q),
    };
    let band_peak = u
        .iter()
        .fold((grid.start(), f64::NEG_INFINITY), |best, (rho, x)| {
            if x * x > best.1 {
                (rho, x * x)
            } else {
                best
            }
        })
        .0;
    let ratio = |i: usize| u.values()[i] / grid.point(i).sqrt();
    let reference = grid.nearest_index(0.1).unwrap_or(if 0.1 < grid.start() {
        0
    } else {
        grid.count() - 1
    });
    let report = K0Report {
        ode_residual,
        norm: k0_norm()?,
        band_peak_rho: band_peak,
        steepness_inner: ratio(0),
        steepness_reference: ratio(reference),
    };
    Ok((u, report))
}

/// `∫₀^∞ (ρ/π) K0(ρ)² dρ`, integrated in `t = ln ρ` where the integrand
/// `ρ² K0² / π` is smooth and decays at both ends.
pub fn k0_norm() -> Result<f64> {
    let (t_lo, t_hi) = ((1e-12f64).ln(), 60f64.ln());
    let grid = Grid::spanning(t_lo, t_hi, 1e-3)?;
    let values = grid
        .points()
        .map(|t| {
            let rho = t.exp();
            bessel_k0(rho).map(|k| rho * rho * k * k / std::f64::consts::PI)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(simpson(&values, grid.step()))
}

/// Ground state of an accordion carrier combined with the planar
/// anti-centrifugal term, on a grid starting at `rho_min > 0` with a hard wall there.
///
/// The grid step must resolve `1/(4ρ_min²)`; `h²/(4ρ_min²) ≪ 1`.
pub fn solve_planar_accordion(
    carrier: &RadialPotential3D,
    eta_lo: f64,
    eta_hi: f64,
    grid: &Grid,
) -> Result<EigenResult> {
    carrier.validate()?;
    let rho_min = grid.start();
    if !(rho_min > 0.0) {
        return Err(domain("planar grids must start at ρ > 0"));
    }
    if grid.step().powi(2) * quantum_anticentrifugal(rho_min).abs() > 1e-2 {
        return Err(domain("grid step does not resolve the anti-centrifugal term"));
    }
    let samples = sample_with_steps(
        &|rho: f64| carrier.eval(rho) + quantum_anticentrifugal(rho),
        grid,
    );
    let shooter = Shooter::new(*grid, samples, LeftEdge::Origin, grid.count() - 2)?;
    shooter.solve(eta_lo, eta_hi, 0).map(Into::into)
}

/// Default planar grid `[ρ_min, ρ_max]` at the default step.
pub fn planar_grid(rho_min: f64, rho_max: f64) -> Result<Grid> {
    Grid::spanning(rho_min, rho_max, DEFAULT_STEP)
}
