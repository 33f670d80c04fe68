mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use accordion_core::accordion::{
    effective_potential, envelope_compare, shoot_eigenvalue, AccordionPotential, WindowSpec,
};
use accordion_core::floquet::{
    from_physical, kapitza_threshold, monodromy, stability_chart, Axis, PendulumParams, Stability,
    Waveform, DEFAULT_STEPS_PER_PERIOD,
};
use accordion_core::ode::{
    bracket_root, count_sign_changes, numerov_propagate, ode_residual, rk_propagate_pair,
    wronskian_drift, Grid, WaveSamples,
};
use accordion_core::radial::{
    bunching_series, k0_bound_state, planar_free_state, radial_outward, solve_radial_3d,
    tune_zero_energy, RadialPotential3D,
};
use accordion_core::special::{
    bessel_i0, bessel_j, bessel_j0, bessel_j1, bessel_k0, bessel_zeros, EULER_GAMMA,
};
use accordion_core::Error;
use common::*;

// ode

#[test]
fn numerov_closed_forms() {
    let g = Grid::spanning(0.0, 1.0, 1e-3).unwrap();
    let w = numerov_propagate(&|_: f64| -1.0, &g, 0.0, g.step().sinh()).unwrap();
    assert!((w.values()[g.count() - 1] - 1f64.sinh()).abs() < 1e-8);

    let g = Grid::spanning(0.0, FRAC_PI_2, 1e-3).unwrap();
    let w = numerov_propagate(&|_: f64| 1.0, &g, 0.0, g.step().sin()).unwrap();
    assert!((w.values()[g.count() - 1] - 1.0).abs() < 1e-8);
}

#[test]
fn rk_closed_forms() {
    let g = Grid::spanning(0.0, TAU, 1e-3).unwrap();
    let (u, du) = rk_propagate_pair(&|_: f64| 1.0, &g, 1.0, 0.0).unwrap();
    assert!((u.values()[g.count() - 1] - 1.0).abs() < 1e-7);
    assert!(du.values()[g.count() - 1].abs() < 1e-7);

    let g = Grid::spanning(0.0, 1.0, 1e-3).unwrap();
    let (u, _) = rk_propagate_pair(&|_: f64| -1.0, &g, 1.0, 1.0).unwrap();
    assert!((u.values()[g.count() - 1] - 1f64.exp()).abs() < 1e-7);
}

#[test]
fn sign_changes_of_known_functions() {
    let g = Grid::spanning(0.0, 3.5 * PI, 1e-3).unwrap();
    let w = WaveSamples::from_fn(g, f64::sin).unwrap();
    assert_eq!(count_sign_changes(&w, 1e-12).unwrap(), 3);

    let g = Grid::spanning(0.1, 12.0, 1e-3).unwrap();
    let w = WaveSamples::from_fn(g, |x| bessel_j_integral(0, x)).unwrap();
    // j_{0,4} ≈ 11.79 lies inside the interval, so four zeros are crossed
    assert!(bessel_zero_oracle(0, 4) < 12.0);
    assert_eq!(count_sign_changes(&w, 1e-10).unwrap(), 4);
}

#[test]
fn wronskian_examples() {
    let g = Grid::spanning(0.0, 10.0, 1e-3).unwrap();
    let s = WaveSamples::from_fn(g, f64::sin).unwrap();
    let c = WaveSamples::from_fn(g, f64::cos).unwrap();
    assert!(wronskian_drift(&s, &c).unwrap() < 1e-6);
    assert!(matches!(
        wronskian_drift(&s, &s.scaled(2.0).unwrap()),
        Err(Error::DependentSolutions)
    ));

    let g = Grid::spanning(0.0, TAU, 1e-3).unwrap();
    let q = |_: f64| 0.25;
    let (a, _) = rk_propagate_pair(&q, &g, 1.0, 0.0).unwrap();
    let (b, _) = rk_propagate_pair(&q, &g, 0.0, 1.0).unwrap();
    assert!(wronskian_drift(&a, &b).unwrap() < 1e-6);
}

#[test]
fn residual_examples() {
    let g = Grid::spanning(0.0, 10.0, 1e-3).unwrap();
    let s = WaveSamples::from_fn(g, f64::sin).unwrap();
    assert!(ode_residual(&s, &|_: f64| 1.0) < 1e-5);
    let g = Grid::new(0.0, 1.0 / 1024.0, 1025).unwrap();
    let line = WaveSamples::from_fn(g, |x| 2.0 * x - 1.0).unwrap();
    assert_eq!(ode_residual(&line, &|_: f64| 0.0), 0.0);

    let g = Grid::spanning(0.5, 8.0, 1e-3).unwrap();
    let k0 = WaveSamples::from_fn(g, |x| x.sqrt() * bessel_k0_integral(x)).unwrap();
    assert!(ode_residual(&k0, &|x: f64| -1.0 + 0.25 / (x * x)) < 1e-4);
}

#[test]
fn bracket_root_examples() {
    let r = bracket_root(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-11);
    let r = bracket_root(|x| bessel_j_integral(0, x), 2.0, 3.0, 1e-12).unwrap();
    assert!((r - 2.4048255577).abs() < 1e-9);
    assert!(bracket_root(|x| x, -1.0, 1.0, 1e-12).unwrap().abs() < 1e-12);
    assert!(matches!(
        bracket_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
        Err(Error::BracketInvalid)
    ));
}

// special functions

#[test]
fn j_against_integral_representation() {
    for m in 0..2 {
        for i in 0..=400 {
            let x = 0.05 * i as f64;
            let reference = bessel_j_integral(m, x);
            let got = bessel_j(m, x).unwrap();
            assert!((got - reference).abs() < 1e-12, "J{m}({x}): {got} vs {reference}");
        }
        for &x in &[25.0, 37.5, 60.0, 99.9] {
            let reference = bessel_j_integral(m, x);
            assert!((bessel_j(m, x).unwrap() - reference).abs() < 1e-10, "J{m}({x})");
        }
    }
}

#[test]
fn j_reference_values() {
    assert!(bessel_j0(2.4048255577).unwrap().abs() < 1e-9);
    assert!((bessel_j1(1.0).unwrap() - 0.4400505857).abs() < 1e-9);
    assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
}

#[test]
fn i0_against_series() {
    assert!((bessel_i0(1.0).unwrap() - 1.2660658778).abs() < 1e-9);
    for &x in &[0.5, 2.0, 7.0, 30.0] {
        let reference = bessel_i0_series(x);
        assert!((bessel_i0(x).unwrap() / reference - 1.0).abs() < 1e-12);
    }
    assert!(bessel_i0(20.0).unwrap() / bessel_i0(10.0).unwrap() > 9f64.exp());
}

#[test]
fn k0_against_quadrature() {
    assert!((bessel_k0_integral(1.0) - 0.4210244382).abs() < 1e-10);
    assert!((bessel_k0(1.0).unwrap() - bessel_k0_integral(1.0)).abs() < 1e-8);
    for &x in &[1e-3, 0.1, 0.7, 1.9, 2.0, 2.1, 3.0, 8.0, 20.0, 50.0] {
        let reference = bessel_k0_integral(x);
        let rel = (bessel_k0(x).unwrap() / reference - 1.0).abs();
        assert!(rel < 1e-9, "K0({x}) relative error {rel}");
    }
    assert!(bessel_k0(10.0).unwrap() / bessel_k0(5.0).unwrap() < (-4.9f64).exp());
}

#[test]
fn k0_small_argument_leading_term() {
    // The leading term alone misses K0(0.01) by the next series term,
    // (x²/4)(1 − ln(x/2) − γ) ≈ 1.4e-4.
    let x = 0.01f64;
    let leading = -(0.5 * x).ln() - EULER_GAMMA;
    let next = 0.25 * x * x * (1.0 - (0.5 * x).ln() - EULER_GAMMA);
    let diff = bessel_k0(x).unwrap() - leading;
    assert!((diff - next).abs() < 1e-8, "difference {diff}");
}

#[test]
fn zeros_against_bisection_oracle() {
    let z0 = bessel_zeros(0, 2).unwrap();
    let z1 = bessel_zeros(1, 2).unwrap();
    for n in 1..=2 {
        assert!((z0.zero(n).unwrap() - bessel_zero_oracle(0, n)).abs() < 1e-10);
        assert!((z1.zero(n).unwrap() - bessel_zero_oracle(1, n)).abs() < 1e-10);
    }
    assert!((z0.zeros[1] - 5.5200781103).abs() < 1e-9);
    assert!((z1.zeros[1] - 7.0155866698).abs() < 1e-9);
    let z = bessel_zeros(0, 30).unwrap();
    let last_gap = z.gaps()[28];
    assert!(last_gap > PI - 0.01 && last_gap < PI);
    assert!((z.zeros[29] - bessel_zero_oracle(0, 30)).abs() < 1e-10);
}

#[test]
fn bessel_ode_consistency() {
    let g = Grid::spanning(0.5, 20.0, 1e-3).unwrap();
    let u0 = WaveSamples::from_fn(g, |x| x.sqrt() * bessel_j0(x).unwrap()).unwrap();
    let u1 = WaveSamples::from_fn(g, |x| x.sqrt() * bessel_j1(x).unwrap()).unwrap();
    assert!(ode_residual(&u0, &|x: f64| 1.0 + 0.25 / (x * x)) < 1e-4);
    assert!(ode_residual(&u1, &|x: f64| 1.0 - 0.75 / (x * x)) < 1e-4);
}

#[test]
fn j1_is_minus_j0_derivative() {
    let h = 1e-4;
    for i in 0..=199 {
        let x = 0.1 + 0.1 * i as f64;
        let d = (bessel_j0(x + h).unwrap() - bessel_j0(x - h).unwrap()) / (2.0 * h);
        assert!((bessel_j1(x).unwrap() + d).abs() < 1e-8, "x = {x}");
    }
}

#[test]
fn zeros_interleave() {
    let z0 = bessel_zeros(0, 40).unwrap().zeros;
    let z1 = bessel_zeros(1, 40).unwrap().zeros;
    for n in 0..39 {
        assert!(z0[n] < z1[n] && z1[n] < z0[n + 1]);
    }
}

#[test]
fn k0_i0_product_decreases() {
    let mut prev = f64::INFINITY;
    for i in 1..=1000 {
        let x = 0.01 * i as f64;
        let p = bessel_k0(x).unwrap() * bessel_i0(x).unwrap();
        assert!(p < prev, "x = {x}");
        prev = p;
    }
}

// floquet

#[test]
fn physical_reduction_examples() {
    let p = from_physical(9.81, 0.1, 99.045, 0.01).unwrap();
    assert!((p.kappa + 0.01).abs() < 1e-6);
    assert!((p.alpha - 0.1).abs() < 1e-15);
    let fast = from_physical(9.81, 0.1, 1e6, 0.01).unwrap();
    assert!(fast.kappa < 0.0 && fast.kappa > -1e-9);
    assert!(from_physical(0.0, 0.1, 1.0, 0.01).is_err());
}

#[test]
fn monodromy_constant_coefficient_examples() {
    let m = monodromy(&PendulumParams::new(0.25, 0.0), DEFAULT_STEPS_PER_PERIOD).unwrap();
    assert!((m.trace + 2.0).abs() < 1e-6);
    assert_eq!(m.classification, Stability::Marginal);
    let m = monodromy(&PendulumParams::new(-0.25, 0.0), DEFAULT_STEPS_PER_PERIOD).unwrap();
    assert!((m.trace - 2.0 * PI.cosh()).abs() < 1e-6);
    assert_eq!(m.classification, Stability::Unstable);
    let m = monodromy(&PendulumParams::new(1.0, 0.0), DEFAULT_STEPS_PER_PERIOD).unwrap();
    assert!((m.trace - 2.0).abs() < 1e-6);
    assert_eq!(m.classification, Stability::Marginal);
}

#[test]
fn monodromy_matches_independent_integrator() {
    for &(kappa, alpha) in &[(-0.01, 0.05), (-0.01, 0.3), (-0.01, 0.5), (0.3, 0.7), (1.3, 0.9)] {
        let reference = monodromy_trace_oracle(kappa, alpha, 0.0, 20_000);
        let m = monodromy(&PendulumParams::new(kappa, alpha), DEFAULT_STEPS_PER_PERIOD).unwrap();
        assert!((m.trace - reference).abs() < 1e-7, "({kappa}, {alpha})");
        assert_eq!(m.classification, Stability::from_trace(reference));
    }
}

#[test]
fn chart_cells_near_the_inverted_position() {
    let cell = |alpha: f64| {
        monodromy(&PendulumParams::new(-0.01, alpha), DEFAULT_STEPS_PER_PERIOD)
            .unwrap()
            .classification
    };
    assert_eq!(cell(0.05), Stability::Unstable);
    assert_eq!(cell(0.3), Stability::Stable);
    // α = 0.5 lies inside the first instability tongue (trace ≈ −2.55)
    assert!(monodromy_trace_oracle(-0.01, 0.5, 0.0, 20_000) < -2.5);
    assert_eq!(cell(0.5), Stability::Unstable);
}

#[test]
fn undriven_chart_row() {
    let chart = stability_chart(
        Axis::new(-0.5, 1.5, 41).unwrap(),
        Axis::new(0.0, 0.0, 2).unwrap(),
        &Waveform::default(),
        DEFAULT_STEPS_PER_PERIOD,
    )
    .unwrap();
    for c in chart.cells.iter() {
        let expected = if c.kappa < 0.0 {
            Stability::from_trace(2.0 * (TAU * (-c.kappa).sqrt()).cosh())
        } else {
            Stability::from_trace(2.0 * (TAU * c.kappa.sqrt()).cos())
        };
        assert_eq!(c.classification, expected, "kappa = {}", c.kappa);
        if c.kappa > 0.0 {
            assert_ne!(c.classification, Stability::Unstable);
        } else if c.kappa < 0.0 {
            assert_eq!(c.classification, Stability::Unstable);
        }
    }
}

#[test]
fn kapitza_thresholds() {
    let w = Waveform::default();
    let steps = DEFAULT_STEPS_PER_PERIOD;
    let a1 = kapitza_threshold(-0.0025, 0.2, &w, steps).unwrap();
    assert!((a1 / 0.0025f64.mul_add(2.0, 0.0).sqrt() - 1.0).abs() < 0.1, "{a1}");
    let a2 = kapitza_threshold(-0.01, 0.3, &w, steps).unwrap();
    let a3 = kapitza_threshold(-0.04, 0.4, &w, steps).unwrap();
    let avg = 0.08f64.sqrt();
    assert!(a3 > avg && a3 < 2.0 * avg, "{a3}");
    assert!(a1 < a2 && a2 < a3);
    assert!(matches!(
        kapitza_threshold(-0.01, 0.05, &w, steps),
        Err(Error::BracketInvalid)
    ));
}

// accordion

#[test]
fn potential_examples() {
    let spec = AccordionPotential::new(0.3, WindowSpec::periods(0.0, 10.0));
    assert!((spec.eval(PI) + 0.3).abs() < 1e-15);
    assert_eq!(spec.eval(-1.0), 0.0);
    let flat = AccordionPotential::new(0.0, WindowSpec::periods(0.0, 10.0));
    assert!((-50..50).all(|i| flat.eval(i as f64) == 0.0));
}

#[test]
fn effective_well_plateau() {
    let spec = AccordionPotential::new(0.3, WindowSpec::periods(0.0, 10.0));
    let grid = spec.domain(10.0, 1e-3).unwrap();
    let v_eff = effective_potential(&spec, &grid).unwrap();
    let mid = 10.0 * PI - PI;
    let i = v_eff.grid().nearest_index(mid).unwrap();
    assert!((v_eff.values()[i] + 0.045).abs() < 1e-6);
    assert!(v_eff.values().iter().all(|&x| x <= 0.0));
}

#[test]
fn finite_well_matches_transcendental_root() {
    let (v0, half) = (0.045, 10.0 * PI);
    let oracle = finite_well_ground(v0, half);
    let well = move |t: f64| {
        let d = t.abs();
        if (d - half).abs() < 1e-9 {
            -0.5 * v0
        } else if d < half {
            -v0
        } else {
            0.0
        }
    };
    let margin = 5.0 / oracle.abs().sqrt() + 10.0;
    let step = half / (half / 1e-3).round();
    let points = ((half + margin) / step).ceil() as usize;
    let grid = Grid::new(-(points as f64) * step, step, 2 * points + 1).unwrap();
    let r = shoot_eigenvalue(&well, -v0, -1e-9, 0, &grid).unwrap();
    assert!((r.eta - oracle).abs() < 1e-9, "{} vs {oracle}", r.eta);
    assert_eq!(r.nodes, 0);
}

#[test]
fn accordion_ground_state_bounds() {
    let spec = AccordionPotential::new(0.3, WindowSpec::periods(0.0, 10.0));
    let grid = spec.default_domain().unwrap();
    let r = shoot_eigenvalue(&spec, -0.301, -1e-9, 0, &grid).unwrap();
    assert!(r.eta > -0.045 && r.eta < 0.0, "{}", r.eta);
    assert!(r.match_defect < 1e-6);
}

#[test]
fn envelope_gap_shrinks_with_amplitude() {
    let coarse = AccordionPotential::new(0.05, WindowSpec::periods(0.0, 30.0));
    let r = envelope_compare(&coarse, &coarse.default_domain().unwrap()).unwrap();
    assert!(r.relative_gap < 0.1);
    assert!(r.overlap > 0.95);
}

// radial

#[test]
fn spherical_well_matches_transcendental_root() {
    let p = RadialPotential3D::square_well(2.8, 1.0);
    let oracle = spherical_well_ground(2.8, 1.0);
    let grid = p.grid(1.0 + 10.0 / oracle.abs().sqrt(), 1e-3).unwrap();
    let r = solve_radial_3d(&p, -2.8, -1e-9, &grid).unwrap();
    assert!((r.eta - oracle).abs() < 1e-9, "{} vs {oracle}", r.eta);
    assert_eq!(r.nodes, 0);
}

#[test]
fn shallow_spherical_well_has_no_state() {
    let p = RadialPotential3D::square_well(2.0, 1.0);
    let grid = p.grid(30.0, 1e-3).unwrap();
    assert!(matches!(
        solve_radial_3d(&p, -2.0, -1e-9, &grid),
        Err(Error::EmptyBracket)
    ));
}

#[test]
fn quarter_period_depths() {
    for (r0, expected) in [(1.0, PI * PI / 4.0), (2.0, PI * PI / 16.0)] {
        let grid = RadialPotential3D::square_well(0.0, r0).grid(r0 + 10.0, 1e-3).unwrap();
        let z = tune_zero_energy(|d| RadialPotential3D::square_well(d, r0), 0.3, 4.0, &grid)
            .unwrap();
        assert!((z.tuned_depth - expected).abs() < 1e-6, "r0 = {r0}");
        assert!(z.tail_flatness < 1e-6);
        // ψ = u/r decays like 1/r outside
        let r_a = r0 + 2.0;
        let i = z.psi.grid().nearest_index(r_a).unwrap();
        let j = z.psi.grid().nearest_index(2.0 * r_a).unwrap();
        assert!((z.psi.values()[i] / z.psi.values()[j] - 2.0).abs() < 1e-5);
    }
}

#[test]
fn free_radial_nodes_are_equally_spaced() {
    let free = RadialPotential3D::square_well(0.0, 1.0);
    let grid = free.grid(40.0, 1e-3).unwrap();
    let u = radial_outward(&free, 1.0, &grid).unwrap();
    let v = u.values();
    let zeros: Vec<f64> = (2..v.len())
        .filter(|&i| v[i - 1] * v[i] < 0.0)
        .map(|i| {
            let (a, b) = (v[i - 1], v[i]);
            grid.point(i - 1) + grid.step() * a / (a - b)
        })
        .collect();
    assert!(zeros.len() >= 10);
    for (n, z) in zeros.iter().enumerate() {
        assert!((z - (n + 1) as f64 * PI).abs() < 1e-6);
    }
}

// planar

#[test]
fn planar_free_states() {
    let j01 = bessel_zero_oracle(0, 1);
    let g = Grid::new(j01, 1e-3, 3).unwrap();
    assert!(planar_free_state(0, &g).unwrap().values()[0].abs() < 1e-8);

    let g = Grid::new(1e-4, 1e-4, 3).unwrap();
    let u0 = planar_free_state(0, &g).unwrap();
    let u1 = planar_free_state(1, &g).unwrap();
    for (i, rho) in g.points().enumerate() {
        assert!((u0.values()[i] / rho.sqrt() - 1.0).abs() < 1e-7);
        assert!((u1.values()[i] / (0.5 * rho.powf(1.5)) - 1.0).abs() < 1e-7);
    }

    let g = Grid::spanning(0.5, 30.0, 1e-3).unwrap();
    for m in 0..2u32 {
        let u = planar_free_state(m, &g).unwrap();
        let c = (m * m) as f64 - 0.25;
        assert!(ode_residual(&u, &|r: f64| 1.0 - c / (r * r)) < 1e-4);
    }
}

#[test]
fn bunching_reference_values() {
    let g0 = bunching_series(0, 60).unwrap();
    let g1 = bunching_series(1, 2).unwrap();
    let expect0 = PI / (bessel_zero_oracle(0, 2) - bessel_zero_oracle(0, 1));
    let expect1 = PI / (bessel_zero_oracle(1, 2) - bessel_zero_oracle(1, 1));
    assert!((g0.g[0] - expect0).abs() < 1e-9);
    assert!((g1.g[0] - expect1).abs() < 1e-9);
    assert!((g0.g[0] - 1.008456).abs() < 1e-5);
    assert!((g1.g[0] - 0.986717).abs() < 1e-5);
    let g50 = g0.g_at(50).unwrap();
    assert!(g50 > 1.0 && g50 < 1.0001);
}

#[test]
fn k0_state_profile() {
    let g = Grid::spanning(1e-3, 20.0, 1e-3).unwrap();
    let (u, report) = k0_bound_state(&g).unwrap();
    for (rho, x) in u.iter().step_by(97) {
        let reference = (rho / PI).sqrt() * bessel_k0_integral(rho);
        assert!((x - reference).abs() < 1e-9 * reference.abs().max(1e-12));
    }
    assert!(report.ode_residual < 1e-4);
    assert!(report.steepness_inner > report.steepness_reference);
    assert!(report.band_peak_rho > 0.1 && report.band_peak_rho < 1.0);
    // ln u + rho flattens toward -ln(2)/2 as the 1/(8 rho) correction dies out
    let envelope: Vec<f64> = u
        .window(5.0, 20.0)
        .unwrap()
        .iter()
        .map(|(rho, x)| x.ln() + rho)
        .collect();
    let hi = envelope.iter().cloned().fold(f64::MIN, f64::max);
    let lo = envelope.iter().cloned().fold(f64::MAX, f64::min);
    assert!(hi - lo < 0.04);
    assert!((0.5 * (hi + lo) + 0.5 * 2f64.ln()).abs() < 0.02);
}

#[test]
fn k0_norm_by_independent_quadrature() {
    // ∫ x K0² dx on [1e-6, 40] by Simpson in t = ln x, plus the small-x
    // part ∫₀^ε x (c − ln x)² dx with c = ln 2 − γ.
    let (a, b) = ((1e-6f64).ln(), 40f64.ln());
    let n = 4000;
    let h = (b - a) / n as f64;
    let f = |t: f64| {
        let x = t.exp();
        x * x * bessel_k0_integral(x).powi(2)
    };
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    let bulk = s * h / 3.0;
    let eps = 1e-6f64;
    let l = 2f64.ln() - EULER_GAMMA - eps.ln();
    let head = 0.5 * eps * eps * (l * l + l + 0.5);
    let integral = bulk + head;
    assert!((integral - 0.5).abs() < 1e-6, "{integral}");

    let g = Grid::spanning(1e-3, 20.0, 1e-3).unwrap();
    let (_, report) = k0_bound_state(&g).unwrap();
    assert!((report.norm - integral / PI).abs() < 1e-6);
}
