//! Numerov shooting for `u'' + [η − v(θ)] u = 0` on a sampled potential.
//!
//! The left solution starts either with the discrete decaying exponential
//! or with `u(0) = 0, u(h) = h`; the right solution always starts with the
//! discrete decaying exponential. Outward node counts bracket the requested
//! state (the oscillation theorem for a wall at the far end interlaces with
//! the decaying problem), then bisection on the normalized Casoratian at the
//! matching point converges the eigenvalue.

use crate::error::{domain, Error, Result};
use crate::ode::{
    count_sign_changes, normalized, CoefficientField, Grid, WaveSamples, DEFAULT_DEAD_BAND,
};

/// Bisection stops once the eigenvalue bracket is narrower than this.
pub(crate) const ETA_TOLERANCE: f64 = 1e-12;

const RESCALE_ABOVE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LeftEdge {
    Decaying,
    Origin,
}

/// Converged eigenstate as produced by [`Shooter::solve`].
#[derive(Debug, Clone)]
pub(crate) struct Eigenstate {
    pub eta: f64,
    pub wave: WaveSamples,
    pub nodes: usize,
    pub match_defect: f64,
    pub bracket_width: f64,
}

/// Samples of `v` on the grid together with the step `v(θ⁺) − v(θ⁻)` at
/// each point. The step is read off the difference stencil
/// `2[v(θ+ε) − v(θ−ε)] − [v(θ+2ε) − v(θ−2ε)]`, which vanishes for smooth
/// and piecewise-linear fields.
pub(crate) fn sample_with_steps(v: &impl CoefficientField, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    let eps = 0.01 * grid.step();
    grid.points()
        .map(|t| {
            let step = 2.0 * (v.eval(t + eps) - v.eval(t - eps))
                - (v.eval(t + 2.0 * eps) - v.eval(t - 2.0 * eps));
            (v.eval(t), step)
        })
        .unzip()
}

pub(crate) struct Shooter {
    grid: Grid,
    potential: Vec<f64>,
    steps: Vec<f64>,
    left: LeftEdge,
    match_index: usize,
    c: f64,
}

impl Shooter {
    pub fn new(
        grid: Grid,
        (potential, steps): (Vec<f64>, Vec<f64>),
        left: LeftEdge,
        match_index: usize,
    ) -> Result<Self> {
        if potential.len() != grid.count() || steps.len() != grid.count() {
            return Err(domain("potential samples do not match the grid"));
        }
        if match_index == 0 || match_index + 1 >= grid.count() {
            return Err(domain(format!("match index {match_index} outside the grid interior")));
        }
        if potential.iter().chain(&steps).any(|v| !v.is_finite()) {
            return Err(domain("potential has non-finite samples"));
        }
        let h = grid.step();
        Ok(Self {
            grid,
            potential,
            steps,
            left,
            match_index,
            c: h * h / 12.0,
        })
    }

    #[inline]
    fn a(&self, eta: f64, i: usize) -> f64 {
        1.0 + self.c * (eta - self.potential[i])
    }

    /// Growth ratio `r > 1` of the discrete exponential for the local
    /// coefficient at `i`, or `None` where the solution oscillates.
    fn growth_ratio(&self, eta: f64, i: usize) -> Option<f64> {
        let a = self.a(eta, i);
        let b = 2.0 * (1.0 - 5.0 * self.c * (eta - self.potential[i]));
        let disc = b * b - 4.0 * a * a;
        if disc <= 0.0 || a <= 0.0 {
            return None;
        }
        Some((b + disc.sqrt()) / (2.0 * a))
    }

    fn left_start(&self, eta: f64) -> (f64, f64) {
        match self.left {
            LeftEdge::Origin => (0.0, self.grid.step()),
            LeftEdge::Decaying => match self.growth_ratio(eta, 0) {
                Some(r) => (1.0, r),
                None => (0.0, self.grid.step()),
            },
        }
    }

    fn right_start(&self, eta: f64) -> (f64, f64) {
        let last = self.grid.count() - 1;
        match self.growth_ratio(eta, last) {
            Some(r) => (1.0, r),
            None => (0.0, self.grid.step()),
        }
    }

    /// Numerov recurrence in summed form along the grid indices `at(0), at(1), ...`,
    /// rescaling the whole trajectory whenever it exceeds `RESCALE_ABOVE`.
    fn march(&self, eta: f64, len: usize, at: impl Fn(usize) -> usize, u0: f64, u1: f64) -> Vec<f64> {
        let h2 = 12.0 * self.c;
        let h = self.grid.step();
        let mut u = Vec::with_capacity(len);
        u.push(u0);
        u.push(u1);
        let mut y = self.a(eta, at(1)) * u1;
        let mut d = y - self.a(eta, at(0)) * u0;
        for k in 1..len - 1 {
            let i = at(k);
            d -= h2 * (eta - self.potential[i]) * u[k];
            // a step in v at a grid point leaves O(h^2) errors in the three
            // stencils that touch it; their leading terms are added back here
            let dir = if at(k + 1) > i { 1.0 } else { -1.0 };
            let ahead = self.steps[at(k + 1)];
            if ahead != 0.0 && k + 1 < len - 1 {
                let u_next = 2.0 * u[k] - u[k - 1];
                d -= h2 * dir * ahead * u_next / 24.0;
            }
            let jump = self.steps[i];
            if jump != 0.0 {
                let slope = if k >= 2 {
                    (3.0 * u[k] - 4.0 * u[k - 1] + u[k - 2]) / (2.0 * h)
                } else {
                    (u[k] - u[k - 1]) / h
                };
                d += h2 * h * dir * jump * slope / 12.0;
            }
            let behind = self.steps[at(k - 1)];
            if behind != 0.0 && k >= 2 {
                d += h2 * dir * behind * u[k - 1] / 24.0;
            }
            y += d;
            let next = y / self.a(eta, at(k + 1));
            u.push(next);
            if next.abs() > RESCALE_ABOVE {
                u.iter_mut().for_each(|x| *x /= RESCALE_ABOVE);
                y /= RESCALE_ABOVE;
                d /= RESCALE_ABOVE;
            }
        }
        u
    }

    /// Sign changes of the outward solution over the grid interior.
    pub fn outward_nodes(&self, eta: f64) -> usize {
        let n = self.grid.count();
        let (u0, u1) = self.left_start(eta);
        let u = self.march(eta, n, |k| k, u0, u1);
        let mut last = 0.0_f64;
        let mut nodes = 0;
        for &x in &u[1..n - 1] {
            if x != 0.0 {
                if last != 0.0 && (x > 0.0) != (last > 0.0) {
                    nodes += 1;
                }
                last = x;
            }
        }
        nodes
    }

    /// Left solution on `0..=m+1`.
    fn left_solution(&self, eta: f64) -> Vec<f64> {
        let (u0, u1) = self.left_start(eta);
        self.march(eta, self.match_index + 2, |k| k, u0, u1)
    }

    /// Right solution on `m..n`, indexed from `m`.
    fn right_solution(&self, eta: f64) -> Vec<f64> {
        let last = self.grid.count() - 1;
        let (e0, e1) = self.right_start(eta);
        let mut u = self.march(eta, last + 1 - self.match_index, |k| last - k, e0, e1);
        u.reverse();
        u
    }

    /// Normalized Casoratian of the left and right solutions at the match
    /// point: the sine of the angle between their `(u, u')` vectors.
    pub fn defect(&self, eta: f64) -> f64 {
        let m = self.match_index;
        let h = self.grid.step();
        let left = self.left_solution(eta);
        let right = self.right_solution(eta);
        let (l0, l1) = (left[m], left[m + 1]);
        let (r0, r1) = (right[0], right[1]);
        let cas = self.a(eta, m) * self.a(eta, m + 1) * (l0 * r1 - l1 * r0) / h;
        let norm_l = l0.hypot((l1 - l0) / h);
        let norm_r = r0.hypot((r1 - r0) / h);
        cas / (norm_l * norm_r)
    }

    /// Finds `x` in `(lo, hi]` where the outward node count first reaches
    /// `at_least`, returning a point just above that transition.
    fn count_transition(&self, mut lo: f64, mut hi: f64, at_least: usize) -> f64 {
        while hi - lo > ETA_TOLERANCE * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.outward_nodes(mid) >= at_least {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    pub fn solve(&self, eta_lo: f64, eta_hi: f64, target: usize) -> Result<Eigenstate> {
        if !(eta_lo < eta_hi && eta_hi < 0.0) {
            return Err(domain(format!(
                "energy bracket [{eta_lo}, {eta_hi}] must satisfy eta_lo < eta_hi < 0"
            )));
        }
        let nodes_lo = self.outward_nodes(eta_lo);
        let nodes_hi = self.outward_nodes(eta_hi);
        if nodes_lo > target {
            return Err(Error::EmptyBracket);
        }
        let lo = if nodes_lo == target {
            eta_lo
        } else if nodes_hi < target {
            return Err(Error::EmptyBracket);
        } else {
            self.count_transition(eta_lo, eta_hi, target)
        };
        let hi = if self.outward_nodes(eta_hi) <= target {
            eta_hi
        } else {
            self.count_transition(lo, eta_hi, target + 1)
        };

        let (mut a, mut b) = (lo, hi);
        let mut fa = self.defect(a);
        let fb = self.defect(b);
        if fa == 0.0 {
            b = a;
        } else if fb == 0.0 {
            a = b;
        } else if (fa > 0.0) == (fb > 0.0) {
            return Err(Error::EmptyBracket);
        }
        while b - a > ETA_TOLERANCE {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.defect(mid);
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if (fm > 0.0) == (fa > 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        let eta = 0.5 * (a + b);
        let wave = self.eigenfunction(eta)?;
        let nodes = count_sign_changes(&wave, DEFAULT_DEAD_BAND)?;
        if nodes != target {
            return Err(Error::WrongStateIndex {
                expected: target,
                found: nodes,
            });
        }
        Ok(Eigenstate {
            eta,
            wave,
            nodes,
            match_defect: self.defect(eta).abs(),
            bracket_width: b - a,
        })
    }

    /// Glued and normalized solution at `eta`; the largest-magnitude sample is positive.
    pub fn eigenfunction(&self, eta: f64) -> Result<WaveSamples> {
        let m = self.match_index;
        let left = self.left_solution(eta);
        let right = self.right_solution(eta);
        let k = if right[0].abs() >= right[1].abs() { 0 } else { 1 };
        let scale = left[m + k] / right[k];
        let mut values = Vec::with_capacity(self.grid.count());
        values.extend_from_slice(&left[..=m]);
        values.extend(right[1..].iter().map(|x| x * scale));
        let peak = values
            .iter()
            .copied()
            .fold(0.0_f64, |p, x| if x.abs() > p.abs() { x } else { p });
        if peak < 0.0 {
            values.iter_mut().for_each(|x| *x = -*x);
        }
        normalized(&WaveSamples::new(self.grid, values)?)
    }
}
