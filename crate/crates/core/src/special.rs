//! Cylinder functions J0, J1, I0 and K0 in double precision, plus zeros of J0 and J1.
//!
//! * `J_m`: power series for `x <= 12`, Hankel amplitude–phase expansion
//!   truncated at its smallest term beyond.
//! * `I0`: power series (all terms positive, no cancellation).
//! * `K0`: logarithmic series for `x <= 2`, Steed's continued fraction for
//!   `K0(x) e^x` beyond.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ode::bracket_root;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest argument accepted by [`bessel_j`].
pub const J_MAX_ARG: f64 = 1e4;

/// Largest argument accepted by [`bessel_i0`].
pub const I0_MAX_ARG: f64 = 700.0;

const J_SERIES_LIMIT: f64 = 12.0;
const K0_SERIES_LIMIT: f64 = 2.0;
const ZERO_SCAN_STEP: f64 = 0.1;

/// Bessel function of the first kind `J_m(x)` for `m ∈ {0, 1}`.
pub fn bessel_j(m: u32, x: f64) -> Result<f64> {
    if m > 1 {
        return Err(domain(format!("order {m} is not supported")));
    }
    if !(0.0..=J_MAX_ARG).contains(&x) {
        return Err(domain(format!("J{m} argument {x} outside [0, {J_MAX_ARG}]")));
    }
    if x <= J_SERIES_LIMIT {
        Ok(j_series(m, x))
    } else {
        Ok(j_hankel(m, x))
    }
}

pub fn bessel_j0(x: f64) -> Result<f64> {
    bessel_j(0, x)
}

pub fn bessel_j1(x: f64) -> Result<f64> {
    bessel_j(1, x)
}

fn j_series(m: u32, x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = if m == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -y / (k * (k + m as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > y.sqrt() {
            return sum;
        }
        if term == 0.0 {
            return sum;
        }
    }
}

fn j_hankel(m: u32, x: f64) -> f64 {
    let mu = 4.0 * (m * m) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut previous = f64::INFINITY;
    for k in 1..64u32 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= previous {
            break;
        }
        term = next;
        previous = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * m as f64) * PI - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Modified Bessel function `I0(x)` for `0 <= x <= 700`.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(domain(format!("I0 argument {x} is negative")));
    }
    if x > I0_MAX_ARG {
        return Err(Error::Overflow(format!("I0({x}) exceeds double range")));
    }
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= y / (k * k);
        sum += term;
        if term <= 1e-17 * sum {
            return Ok(sum);
        }
    }
}

/// Modified Bessel function of the second kind `K0(x)` for `x > 0`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("K0 argument {x} must be positive")));
    }
    if x <= K0_SERIES_LIMIT {
        Ok(k0_series(x))
    } else {
        Ok(k0_continued_fraction(x))
    }
}

// K0 = −(ln(x/2) + γ) I0(x) + Σ (x²/4)^k / (k!)² H_k
fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= y / (k * k);
        harmonic += 1.0 / k;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic <= 1e-17 * tail.abs().max(i0) {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

// Steed's CF2 (Thompson–Barnett) evaluated at order zero.
fn k0_continued_fraction(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() / s
}

/// Ascending zeros `j_{m,1} < j_{m,2} < ...` of `J_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselZeroTable {
    pub order: u32,
    pub zeros: Vec<f64>,
}

impl BesselZeroTable {
    /// `j_{m,n}` with 1-based `n`.
    pub fn zero(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.zeros.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// First `n_max` positive zeros of `J_m`, located by scanning at step 0.1
/// and refined by bisection.
pub fn bessel_zeros(m: u32, n_max: usize) -> Result<BesselZeroTable> {
    if m > 1 {
        return Err(domain(format!("order {m} is not supported")));
    }
    if !(1..=1000).contains(&n_max) {
        return Err(domain(format!("n_max {n_max} outside 1..=1000")));
    }
    let f = |x: f64| j_unchecked(m, x);
    let mut zeros = Vec::with_capacity(n_max);
    let mut i = 1u64;
    let mut lo = ZERO_SCAN_STEP;
    let mut f_lo = f(lo);
    while zeros.len() < n_max {
        i += 1;
        let hi = ZERO_SCAN_STEP * i as f64;
        let f_hi = f(hi);
        if f_lo == 0.0 {
            zeros.push(lo);
        } else if (f_lo > 0.0) != (f_hi > 0.0) && f_hi != 0.0 {
            zeros.push(bracket_root(f, lo, hi, 1e-13)?);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(BesselZeroTable { order: m, zeros })
}

fn j_unchecked(m: u32, x: f64) -> f64 {
    if x <= J_SERIES_LIMIT {
        j_series(m, x)
    } else {
        j_hankel(m, x)
    }
}
