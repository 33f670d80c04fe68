//! Uniform grids, propagators and diagnostics for `u''(θ) + q(θ) u(θ) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Default step in dimensionless units.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Magnitude above which propagation is aborted.
pub const OVERFLOW_CAP: f64 = 1e150;

/// Relative dead band used when counting nodes.
pub const DEFAULT_DEAD_BAND: f64 = 1e-10;

/// Uniform lattice `start + i * step` for `i < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::InvalidGrid(format!("start {start} is not finite")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("step {step} must be positive")));
        }
        if count < 3 {
            return Err(Error::InvalidGrid(format!("count {count} is below 3")));
        }
        Ok(Self { start, step, count })
    }

    /// Grid covering `[start, end]` with the step adjusted so that `end` is
    /// the last point and the spacing is as close to `step_hint` as possible.
    pub fn spanning(start: f64, end: f64, step_hint: f64) -> Result<Self> {
        if !(end > start) || !(step_hint > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "cannot span [{start}, {end}] with step {step_hint}"
            )));
        }
        let intervals = ((end - start) / step_hint).round().max(2.0) as usize;
        Self::new(start, (end - start) / intervals as f64, intervals + 1)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }

    /// Index of the grid point nearest to `theta`, if it lies on the grid.
    pub fn nearest_index(&self, theta: f64) -> Option<usize> {
        let x = (theta - self.start) / self.step;
        if x < -0.5 || x > self.count as f64 - 0.5 {
            return None;
        }
        Some((x.round().max(0.0) as usize).min(self.count - 1))
    }

    /// The first `count` points of this grid.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        if count > self.count {
            return Err(Error::InvalidGrid(format!(
                "cannot truncate {} points to {count}",
                self.count
            )));
        }
        Self::new(self.start, self.step, count)
    }

    /// Same spacing, starting `offset` points later.
    pub fn shifted(&self, offset: usize) -> Result<Self> {
        if offset >= self.count {
            return Err(Error::InvalidGrid(format!("offset {offset} past the grid")));
        }
        Self::new(self.point(offset), self.step, self.count - offset)
    }
}

/// Values of a real function on a [`Grid`]. All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSamples {
    grid: Grid,
    values: Vec<f64>,
}

impl WaveSamples {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(domain(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.count()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(domain(format!("non-finite sample at index {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pairs `(θ_i, u_i)`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.grid.point(i), v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|v| v * factor).collect())
    }

    /// Samples `from..to` (exclusive) on the corresponding sub-grid.
    pub fn slice(&self, from: usize, to: usize) -> Result<Self> {
        if to > self.len() || to < from + 3 {
            return Err(Error::InvalidGrid(format!("bad slice {from}..{to}")));
        }
        let grid = Grid::new(self.grid.point(from), self.grid.step(), to - from)?;
        Self::new(grid, self.values[from..to].to_vec())
    }

    /// Restriction to the points with `lo <= θ <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> Result<Self> {
        let eps = 1e-9 * self.grid.step();
        let from = (0..self.len())
            .find(|&i| self.grid.point(i) >= lo - eps)
            .unwrap_or(self.len());
        let to = (0..self.len())
            .rev()
            .find(|&i| self.grid.point(i) <= hi + eps)
            .map_or(0, |i| i + 1);
        self.slice(from, to)
    }
}

/// A coefficient `θ ↦ q(θ)`; evaluation must be deterministic.
pub trait CoefficientField {
    fn eval(&self, theta: f64) -> f64;
}

impl<F: Fn(f64) -> f64> CoefficientField for F {
    fn eval(&self, theta: f64) -> f64 {
        self(theta)
    }
}

/// Piecewise-linear interpolation of the samples, constant beyond the ends.
impl CoefficientField for WaveSamples {
    fn eval(&self, theta: f64) -> f64 {
        let x = (theta - self.grid.start()) / self.grid.step();
        if x <= 0.0 {
            return self.values[0];
        }
        let last = self.len() - 1;
        if x >= last as f64 {
            return self.values[last];
        }
        let i = x.floor() as usize;
        let t = x - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}

/// Numerov integration from the first two samples, aborting above [`OVERFLOW_CAP`].
pub fn numerov_propagate(
    q: &impl CoefficientField,
    grid: &Grid,
    u0: f64,
    u1: f64,
) -> Result<WaveSamples> {
    numerov_propagate_capped(q, grid, u0, u1, OVERFLOW_CAP)
}

/// Runs the recurrence in summed form: with `y = (1 + h²q/12) u` and
/// `d_n = y_n − y_{n−1}`, `d_{n+1} = d_n − h² q_n u_n`. This avoids the
/// roundoff of the coefficient `2(1 − 5h²q/12)`, which would otherwise shift
/// the frequency by `O(ε/h²)`.
pub fn numerov_propagate_capped(
    q: &impl CoefficientField,
    grid: &Grid,
    u0: f64,
    u1: f64,
    cap: f64,
) -> Result<WaveSamples> {
    let n = grid.count();
    let h2 = grid.step() * grid.step();
    let c = h2 / 12.0;
    let mut u = Vec::with_capacity(n);
    u.push(u0);
    u.push(u1);
    let q0 = q.eval(grid.point(0));
    let mut q_cur = q.eval(grid.point(1));
    let mut y = (1.0 + c * q_cur) * u1;
    let mut d = y - (1.0 + c * q0) * u0;
    for i in 1..n - 1 {
        let q_next = q.eval(grid.point(i + 1));
        d -= h2 * q_cur * u[i];
        y += d;
        let next = y / (1.0 + c * q_next);
        if !next.is_finite() || next.abs() > cap {
            return Err(Error::Diverged { index: i + 1 });
        }
        u.push(next);
        q_cur = q_next;
    }
    WaveSamples::new(*grid, u)
}

/// Classical RK4 on `(u, u')`, returning both trajectories.
pub fn rk_propagate_pair(
    q: &impl CoefficientField,
    grid: &Grid,
    u: f64,
    du: f64,
) -> Result<(WaveSamples, WaveSamples)> {
    let n = grid.count();
    let h = grid.step();
    let mut us = Vec::with_capacity(n);
    let mut dus = Vec::with_capacity(n);
    let (mut y, mut dy) = (u, du);
    us.push(y);
    dus.push(dy);
    for i in 0..n - 1 {
        let t = grid.point(i);
        let q0 = q.eval(t);
        let qm = q.eval(t + 0.5 * h);
        let q1 = q.eval(t + h);

        let k1y = dy;
        let k1d = -q0 * y;
        let k2y = dy + 0.5 * h * k1d;
        let k2d = -qm * (y + 0.5 * h * k1y);
        let k3y = dy + 0.5 * h * k2d;
        let k3d = -qm * (y + 0.5 * h * k2y);
        let k4y = dy + h * k3d;
        let k4d = -q1 * (y + h * k3y);

        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        if !(y.is_finite() && dy.is_finite()) || y.abs().max(dy.abs()) > OVERFLOW_CAP {
            return Err(Error::Diverged { index: i + 1 });
        }
        us.push(y);
        dus.push(dy);
    }
    Ok((WaveSamples::new(*grid, us)?, WaveSamples::new(*grid, dus)?))
}

/// Number of strict sign alternations among the interior samples, ignoring
/// values with `|u| <= dead_band * max|u|`.
pub fn count_sign_changes(w: &WaveSamples, dead_band: f64) -> Result<usize> {
    if !(dead_band >= 0.0) {
        return Err(domain("dead band must be non-negative"));
    }
    let peak = w.max_abs();
    if peak == 0.0 {
        return Err(Error::DegenerateSamples);
    }
    let threshold = dead_band * peak;
    let v = w.values();
    let mut last = 0.0_f64;
    let mut changes = 0;
    for &x in &v[1..v.len() - 1] {
        if x.abs() <= threshold {
            continue;
        }
        if last != 0.0 && (x > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = x;
    }
    Ok(changes)
}

/// Centered differences inside, second-order one-sided differences at the ends.
pub fn derivative(w: &WaveSamples) -> Vec<f64> {
    let v = w.values();
    let n = v.len();
    let h = w.grid().step();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d
}

/// Largest relative deviation of the Wronskian `u1 u2' − u1' u2` over the
/// interior points, measured against its value at the first interior point.
pub fn wronskian_drift(w1: &WaveSamples, w2: &WaveSamples) -> Result<f64> {
    if w1.grid() != w2.grid() {
        return Err(Error::GridMismatch);
    }
    let (a, b) = (w1.values(), w2.values());
    let (da, db) = (derivative(w1), derivative(w2));
    let n = a.len();
    let wr = |i: usize| a[i] * db[i] - da[i] * b[i];
    let w0 = wr(1);
    if w0.abs() < 1e-14 {
        return Err(Error::DependentSolutions);
    }
    Ok((1..n - 1)
        .map(|i| ((wr(i) - w0) / w0).abs())
        .fold(0.0, f64::max))
}

/// `max |u_{n+1} − 2u_n + u_{n−1} + h² q_n u_n| / (h² max|u|)` over interior points.
pub fn ode_residual(w: &WaveSamples, q: &impl CoefficientField) -> f64 {
    let v = w.values();
    let grid = w.grid();
    let h2 = grid.step() * grid.step();
    let scale = h2 * w.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    (1..v.len() - 1)
        .map(|i| (v[i + 1] - 2.0 * v[i] + v[i - 1] + h2 * q.eval(grid.point(i)) * v[i]).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Bisection for a root of `f` in `[lo, hi]`, stopping once the bracket is
/// no wider than `tol`.
pub fn bracket_root(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::BracketInvalid);
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(Error::BracketInvalid);
    }
    let tol = tol.max(0.0);
    // 200 halvings exhaust any double-precision bracket.
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Composite Simpson rule over equally spaced values; an odd number of
/// intervals closes with the 3/8 rule on the last three.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let even = if intervals.is_multiple_of(2) { intervals } else { intervals - 3 };
            let mut s = 0.0;
            for k in (0..even).step_by(2) {
                s += values[k] + 4.0 * values[k + 1] + values[k + 2];
            }
            let mut total = h / 3.0 * s;
            if even != intervals {
                let t = &values[even..];
                total += 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
            }
            total
        }
    }
}

/// `∫ u dθ` over the whole grid.
pub fn integrate(w: &WaveSamples) -> f64 {
    simpson(w.values(), w.grid().step())
}

/// `∫ u² dθ` over the whole grid.
pub fn norm_squared(w: &WaveSamples) -> f64 {
    let sq: Vec<f64> = w.values().iter().map(|v| v * v).collect();
    simpson(&sq, w.grid().step())
}

/// `∫ u v dθ` for samples on the same grid.
pub fn inner_product(a: &WaveSamples, b: &WaveSamples) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let prod: Vec<f64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x * y)
        .collect();
    Ok(simpson(&prod, a.grid().step()))
}

/// Rescales the samples to unit `∫ u² dθ`.
pub fn normalized(w: &WaveSamples) -> Result<WaveSamples> {
    let n2 = norm_squared(w);
    if !(n2 > 0.0) {
        return Err(Error::DegenerateSamples);
    }
    w.scaled(1.0 / n2.sqrt())
}
