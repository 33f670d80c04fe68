//! Reference implementations shared by the integration tests. None of them
//! call into the library.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `J_m(x) = (1/2π) ∫₀^{2π} cos(mτ − x sin τ) dτ`; the trapezoid rule is
/// spectrally accurate for the periodic integrand.
pub fn bessel_j_integral(m: u32, x: f64) -> f64 {
    let n = 64 + 2 * x.ceil() as usize;
    let sum: f64 = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            (m as f64 * t - x * t.sin()).cos()
        })
        .sum();
    sum / n as f64
}

/// `K0(x) = ∫₀^∞ exp(−x cosh t) dt` by the trapezoid rule, which converges
/// geometrically for this doubly decaying integrand.
pub fn bessel_k0_integral(x: f64) -> f64 {
    let h = 0.01;
    let mut sum = 0.5 * (-x).exp();
    let mut k = 1;
    loop {
        let term = (-x * (k as f64 * h).cosh()).exp();
        sum += term;
        if term < 1e-300 || (term < 1e-18 * sum && k > 10) {
            break;
        }
        k += 1;
    }
    sum * h
}

/// Power series for `I0`, summed term by term.
pub fn bessel_i0_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= (x / 2.0).powi(2) / (k * k) as f64;
        sum += term;
    }
    sum
}

/// Interval halving on a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros of `J_m` from the integral representation.
pub fn bessel_zero_oracle(m: u32, n: usize) -> f64 {
    let mut found = 0;
    let mut x = 0.05;
    loop {
        let y = x + 0.05;
        if bessel_j_integral(m, x) * bessel_j_integral(m, y) < 0.0 {
            found += 1;
            if found == n {
                return bisect(|t| bessel_j_integral(m, t), x, y);
            }
        }
        x = y;
    }
}

/// Classical RK4 on `φ'' = −(κ + α cos(θ + phase)) φ` over one period;
/// returns the monodromy trace.
pub fn monodromy_trace_oracle(kappa: f64, alpha: f64, phase: f64, steps: usize) -> f64 {
    let h = 2.0 * PI / steps as f64;
    let q = |t: f64| kappa + alpha * (t + phase).cos();
    let run = |mut y: [f64; 2]| {
        for i in 0..steps {
            let t = i as f64 * h;
            let f = |t: f64, y: [f64; 2]| [y[1], -q(t) * y[0]];
            let k1 = f(t, y);
            let k2 = f(t + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
            let k3 = f(t + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
            let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for j in 0..2 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        y
    };
    run([1.0, 0.0])[0] + run([0.0, 1.0])[1]
}

/// Even ground state of the 1D well `−v0` on `|θ| < half_width`:
/// `k tan(k w) = √|η|`, `k = √(v0 − |η|)`.
pub fn finite_well_ground(v0: f64, half_width: f64) -> f64 {
    let f = |e: f64| {
        let k = (v0 - e).sqrt();
        k * (k * half_width).sin() - e.sqrt() * (k * half_width).cos()
    };
    let k_max = (PI / 2.0 / half_width).min(v0.sqrt());
    let e_lo = (v0 - k_max * k_max).max(0.0) + 1e-15;
    -bisect(f, e_lo, v0 - 1e-15)
}

/// Ground state of the 3D `l = 0` well: `k cot(k r0) = −√|η|`.
pub fn spherical_well_ground(v0: f64, r0: f64) -> f64 {
    let f = |e: f64| {
        let k = (v0 - e).sqrt();
        k * (k * r0).cos() + e.sqrt() * (k * r0).sin()
    };
    // k r0 ∈ (π/2, π) for the ground state
    let e_hi = v0 - (PI / 2.0 / r0).powi(2);
    let e_lo = (v0 - (PI / r0).powi(2)).max(0.0) + 1e-15;
    -bisect(f, e_lo, e_hi - 1e-15)
}
