use std::f64::consts::{PI, TAU};
use std::fmt;

use accordion_core::accordion::{
    envelope_compare, shoot_eigenvalue, AccordionPotential, EigenResult, EnvelopeReport,
    WindowSpec, DECAY_LENGTHS, DEFAULT_RAMP,
};
use accordion_core::export;
use accordion_core::floquet::{
    from_physical, kapitza_threshold, stability_chart, Axis, Waveform, DEFAULT_STEPS_PER_PERIOD,
};
use accordion_core::ode::{ode_residual, Grid, DEFAULT_STEP};
use accordion_core::radial::{
    bunching_series, k0_bound_state, localized_density_report, radial_outward, solve_radial_3d,
    tune_zero_energy, RadialPotential3D, ZeroEnergyResult,
};
use clap::ValueEnum;
use serde_json::json;

use crate::config::{Params, UsageError};
use crate::Format;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    PendulumChart,
    PendulumThreshold,
    AccordionSolve,
    AccordionEnvelope,
    RadialSolve,
    RadialZeroEnergy,
    PlanarBunching,
    PlanarK0,
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(accordion_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<accordion_core::Error> for CliError {
    fn from(e: accordion_core::Error) -> Self {
        use accordion_core::Error as E;
        match e {
            E::Domain(m) | E::InvalidGrid(m) => CliError::Usage(m),
            other => CliError::Solver(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type Res<T> = Result<T, CliError>;

pub struct Output {
    pub body: String,
    pub summary: Vec<String>,
}

pub fn dispatch(command: Command, p: &Params, format: Format, physical: bool) -> Res<Output> {
    if physical && !matches!(command, Command::PendulumChart | Command::PendulumThreshold) {
        return Err(CliError::Usage("--physical applies to pendulum commands only".into()));
    }
    let figure = matches!(command, Command::Fig1 | Command::Fig2 | Command::Fig3 | Command::Fig4);
    if figure && format == Format::Json {
        return Err(CliError::Usage("figure commands emit CSV only".into()));
    }
    match command {
        Command::PendulumChart => pendulum_chart(p, format, physical),
        Command::PendulumThreshold => pendulum_threshold(p, format, physical),
        Command::AccordionSolve => accordion_solve(p, format),
        Command::AccordionEnvelope => accordion_envelope(p, format),
        Command::RadialSolve => radial_solve(p, format),
        Command::RadialZeroEnergy => radial_zero_energy(p, format),
        Command::PlanarBunching => planar_bunching(p, format),
        Command::PlanarK0 => planar_k0(p, format),
        Command::Fig1 => fig1(p),
        Command::Fig2 => fig2(p),
        Command::Fig3 => fig3(p),
        Command::Fig4 => fig4(p),
    }
}

fn csv(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Res<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))
}

fn json_body(value: serde_json::Value) -> Res<String> {
    let mut text = serde_json::to_string_pretty(&export::round_json(value))
        .map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn n12(x: f64) -> String {
    export::fmt_num(x)
}

// Pendulum

const CHART_KEYS: &[&str] = &[
    "kappa_min",
    "kappa_max",
    "kappa_count",
    "alpha_min",
    "alpha_max",
    "alpha_count",
    "phase",
    "steps",
];
const CHART_PHYSICAL_KEYS: &[&str] = &[
    "g",
    "length",
    "nu_min",
    "nu_max",
    "kappa_count",
    "f_min",
    "f_max",
    "alpha_count",
    "steps",
];

fn pendulum_chart(p: &Params, format: Format, physical: bool) -> Res<Output> {
    let steps = p.usize_or("steps", DEFAULT_STEPS_PER_PERIOD)?;
    let (kappa_axis, alpha_axis, waveform) = if physical {
        p.check_keys("pendulum-chart --physical", CHART_PHYSICAL_KEYS)?;
        let g = p.f64_or("g", 9.81)?;
        let length = p.f64_or("length", 1.0)?;
        let nu_min = p.f64_or("nu_min", 20.0)?;
        let nu_max = p.f64_or("nu_max", 200.0)?;
        let f_min = p.f64_or("f_min", 0.0)?;
        let f_max = p.f64_or("f_max", 0.5)?;
        let lo = from_physical(g, length, nu_min, f_min)?;
        let hi = from_physical(g, length, nu_max, f_max)?;
        (
            Axis::new(lo.kappa, hi.kappa, p.usize_or("kappa_count", 50)?)?,
            Axis::new(lo.alpha, hi.alpha, p.usize_or("alpha_count", 50)?)?,
            lo.waveform,
        )
    } else {
        p.check_keys("pendulum-chart", CHART_KEYS)?;
        (
            Axis::new(
                p.f64_or("kappa_min", -0.1)?,
                p.f64_or("kappa_max", 0.5)?,
                p.usize_or("kappa_count", 50)?,
            )?,
            Axis::new(
                p.f64_or("alpha_min", 0.0)?,
                p.f64_or("alpha_max", 1.0)?,
                p.usize_or("alpha_count", 50)?,
            )?,
            Waveform::Cosine {
                phase: p.f64_or("phase", 0.0)?,
            },
        )
    };
    let chart = stability_chart(kappa_axis, alpha_axis, &waveform, steps)?;
    let stable = chart.stable_count();
    let unstable = chart.cells.len() - stable;
    let body = match format {
        Format::Csv => csv(|b| export::write_chart_csv(b, &chart))?,
        Format::Json => json_body(json!({
            "kappa_axis": chart.kappa_axis,
            "alpha_axis": chart.alpha_axis,
            "stable": stable,
            "unstable": unstable,
            "cells": chart.cells.iter().map(|c| json!({
                "kappa": c.kappa,
                "alpha": c.alpha,
                "trace": if c.trace.is_finite() { json!(c.trace) } else { json!(null) },
                "stable": u8::from(c.is_stable()),
            })).collect::<Vec<_>>(),
        }))?,
    };
    Ok(Output {
        body,
        summary: vec![format!(
            "cells: {} stable, {} unstable or marginal",
            stable, unstable
        )],
    })
}

fn pendulum_threshold(p: &Params, format: Format, physical: bool) -> Res<Output> {
    let steps = p.usize_or("steps", DEFAULT_STEPS_PER_PERIOD)?;
    let (kappa, alpha_hi, waveform, length) = if physical {
        p.check_keys("pendulum-threshold --physical", &["g", "length", "nu", "f_max", "steps"])?;
        let length = p.f64_or("length", 1.0)?;
        let params = from_physical(
            p.f64_or("g", 9.81)?,
            length,
            p.f64_or("nu", 100.0)?,
            p.f64_or("f_max", 0.5)?,
        )?;
        (params.kappa, params.alpha, params.waveform, Some(length))
    } else {
        p.check_keys("pendulum-threshold", &["kappa", "alpha_max", "phase", "steps"])?;
        (
            p.f64_or("kappa", -0.01)?,
            p.f64_or("alpha_max", 0.3)?,
            Waveform::Cosine {
                phase: p.f64_or("phase", 0.0)?,
            },
            None,
        )
    };
    let alpha_c = kapitza_threshold(kappa, alpha_hi, &waveform, steps)?;
    let estimate = (2.0 * kappa.abs()).sqrt();
    let body = match format {
        Format::Csv => {
            let mut text = String::from("kappa,alpha_c,averaging_estimate");
            text.push_str(if length.is_some() { ",f_c\n" } else { "\n" });
            text.push_str(&format!("{},{},{}", n12(kappa), n12(alpha_c), n12(estimate)));
            if let Some(l) = length {
                text.push_str(&format!(",{}", n12(alpha_c * l)));
            }
            text.push('\n');
            text
        }
        Format::Json => {
            let mut doc = json!({
                "kappa": kappa,
                "alpha_c": alpha_c,
                "averaging_estimate": estimate,
            });
            if let Some(l) = length {
                doc["f_c"] = json!(alpha_c * l);
            }
            json_body(doc)?
        }
    };
    Ok(Output {
        body,
        summary: vec![format!(
            "threshold alpha_c = {} (averaging estimate {})",
            n12(alpha_c),
            n12(estimate)
        )],
    })
}

// Accordion

const ACCORDION_KEYS: &[&str] = &["v0", "periods", "window", "ramp", "phase", "step", "margin"];

fn accordion_spec(p: &Params) -> Res<(AccordionPotential, Grid)> {
    let v0 = p.f64_or("v0", 0.2)?;
    let periods = p.f64_or("periods", 30.0)?;
    let half = 0.5 * periods * TAU;
    let window = match p.choice_or("window", "rectangular", &["rectangular", "raised-cosine"])? {
        "rectangular" => WindowSpec::rectangular(half, half),
        _ => WindowSpec::raised_cosine(half, half, p.f64_or("ramp", DEFAULT_RAMP)?),
    };
    let spec = AccordionPotential::new(v0, window).with_phase(p.f64_or("phase", 0.0)?);
    let default_margin = if v0 > 0.0 {
        DECAY_LENGTHS * 2.0 / v0
    } else {
        DECAY_LENGTHS * 10.0
    };
    let grid = spec.domain(
        p.f64_or("margin", default_margin)?,
        p.f64_or("step", DEFAULT_STEP)?,
    )?;
    Ok((spec, grid))
}

fn eigen_csv(result: &EigenResult, v: impl Fn(f64) -> f64, first: &str) -> Res<String> {
    let mut text = format!("{first},v,u\n");
    for (x, u) in result.wave.iter() {
        text.push_str(&format!("{},{},{}\n", n12(x), n12(v(x)), n12(u)));
    }
    Ok(text)
}

fn accordion_solve(p: &Params, format: Format) -> Res<Output> {
    let mut keys = ACCORDION_KEYS.to_vec();
    keys.extend(["nodes", "eta_lo", "eta_hi"]);
    p.check_keys("accordion-solve", &keys)?;
    let (spec, grid) = accordion_spec(p)?;
    let result = shoot_eigenvalue(
        &spec,
        p.f64_or("eta_lo", -(spec.amplitude + 1e-3))?,
        p.f64_or("eta_hi", -1e-9)?,
        p.usize_or("nodes", 0)?,
        &grid,
    )?;
    let body = match format {
        Format::Json => json_body(export::eigen_json(&result))?,
        Format::Csv => eigen_csv(&result, |t| spec.eval(t), "theta")?,
    };
    Ok(Output {
        body,
        summary: vec![format!(
            "eta = {} with {} nodes on {} points",
            n12(result.eta),
            result.nodes,
            grid.count()
        )],
    })
}

fn envelope(p: &Params, command: &str) -> Res<EnvelopeReport> {
    p.check_keys(command, ACCORDION_KEYS)?;
    let (spec, grid) = accordion_spec(p)?;
    Ok(envelope_compare(&spec, &grid)?)
}

fn envelope_summary(r: &EnvelopeReport) -> Vec<String> {
    vec![
        format!("eta_full = {}, eta_envelope = {}", n12(r.eta_full), n12(r.eta_envelope)),
        format!("relative gap = {}, overlap = {}", n12(r.relative_gap), n12(r.overlap)),
    ]
}

fn accordion_envelope(p: &Params, format: Format) -> Res<Output> {
    let report = envelope(p, "accordion-envelope")?;
    let body = match format {
        Format::Csv => csv(|b| export::write_envelope_csv(b, &report))?,
        Format::Json => json_body(json!({
            "eta_full": report.eta_full,
            "eta_envelope": report.eta_envelope,
            "relative_gap": report.relative_gap,
            "overlap": report.overlap,
            "v_eff_min": report.v_eff.values().iter().copied().fold(f64::INFINITY, f64::min),
        }))?,
    };
    Ok(Output {
        body,
        summary: envelope_summary(&report),
    })
}

fn fig1(p: &Params) -> Res<Output> {
    let report = envelope(p, "fig1")?;
    let body = csv(|b| export::write_fig1_csv(b, &report))?;
    Ok(Output {
        body,
        summary: envelope_summary(&report),
    })
}

// Radial

const ACCORDION_R0: f64 = 4.5 * PI;

fn radial_potential(p: &Params) -> Res<RadialPotential3D> {
    Ok(
        match p.choice_or("potential", "square-well", &["square-well", "accordion"])? {
            "square-well" => RadialPotential3D::square_well(
                p.f64_or("depth", 2.8)?,
                p.f64_or("r0", 1.0)?,
            ),
            _ => RadialPotential3D::accordion(
                p.f64_or("amplitude", 0.09)?,
                p.f64_or("r0", ACCORDION_R0)?,
            ),
        },
    )
}

fn radial_solve(p: &Params, format: Format) -> Res<Output> {
    p.check_keys(
        "radial-solve",
        &["potential", "depth", "amplitude", "r0", "eta_lo", "eta_hi", "step", "tail"],
    )?;
    let pot = radial_potential(p)?;
    let grid = pot.grid(pot.r0 + p.f64_or("tail", 30.0)?, p.f64_or("step", DEFAULT_STEP)?)?;
    let deepest = pot.depth.abs() + pot.amplitude.abs();
    let result = solve_radial_3d(
        &pot,
        p.f64_or("eta_lo", -(deepest + 1e-3))?,
        p.f64_or("eta_hi", -1e-9)?,
        &grid,
    )?;
    let body = match format {
        Format::Json => json_body(export::eigen_json(&result))?,
        Format::Csv => csv(|b| export::write_radial_csv(b, &result.wave))?,
    };
    Ok(Output {
        body,
        summary: vec![format!("eta = {} on {} points", n12(result.eta), grid.count())],
    })
}

fn zero_energy(p: &Params) -> Res<(ZeroEnergyResult, f64)> {
    let family = p.choice_or("potential", "square-well", &["square-well", "accordion"])?;
    let tail = p.f64_or("tail", 30.0)?;
    let step = p.f64_or("step", DEFAULT_STEP)?;
    let z = if family == "square-well" {
        let r0 = p.f64_or("r0", 1.0)?;
        let quarter = PI * PI / (4.0 * r0 * r0);
        let grid = RadialPotential3D::square_well(0.0, r0).grid(r0 + tail, step)?;
        tune_zero_energy(
            |d| RadialPotential3D::square_well(d, r0),
            p.f64_or("lo", 0.5 * quarter)?,
            p.f64_or("hi", 1.5 * quarter)?,
            &grid,
        )?
    } else {
        let r0 = p.f64_or("r0", ACCORDION_R0)?;
        let grid = RadialPotential3D::accordion(0.0, r0).grid(r0 + tail, step)?;
        tune_zero_energy(
            |a| RadialPotential3D::accordion(a, r0),
            p.f64_or("lo", 0.01)?,
            p.f64_or("hi", 0.1)?,
            &grid,
        )?
    };
    Ok((z, tail))
}

fn radial_zero_energy(p: &Params, format: Format) -> Res<Output> {
    p.check_keys("radial-zero-energy", &["potential", "r0", "lo", "hi", "step", "tail"])?;
    let (z, tail) = zero_energy(p)?;
    let r0 = z.potential.r0;
    let radii: Vec<f64> = (1..=4).map(|k| r0 + 0.25 * tail * k as f64).collect();
    let growth = localized_density_report(&z, &radii)?;
    let body = match format {
        Format::Json => json_body(export::zero_energy_json(&z, Some(&growth)))?,
        Format::Csv => csv(|b| export::write_radial_csv(b, &z.u))?,
    };
    Ok(Output {
        body,
        summary: vec![
            format!("tuned parameter = {}", n12(z.tuned_depth)),
            format!(
                "tail flatness = {}, density slope = {}",
                n12(z.tail_flatness),
                n12(growth.slope)
            ),
        ],
    })
}

fn fig2(p: &Params) -> Res<Output> {
    let mode = p.choice_or("mode", "zero", &["negative", "zero", "positive"])?;
    let (u, summary) = match mode {
        "zero" => {
            p.check_keys("fig2", &["mode", "r0", "lo", "hi", "step", "tail"])?;
            let mut zp = p.clone();
            zp.set_pair("potential=accordion")?;
            let (z, _) = zero_energy(&zp)?;
            let line = format!(
                "tuned amplitude = {}, tail flatness = {}",
                n12(z.tuned_depth),
                n12(z.tail_flatness)
            );
            (z.u, line)
        }
        "negative" => {
            p.check_keys("fig2", &["mode", "r0", "amplitude", "step", "tail"])?;
            let pot = RadialPotential3D::accordion(
                p.f64_or("amplitude", 0.09)?,
                p.f64_or("r0", ACCORDION_R0)?,
            );
            let grid = pot.grid(pot.r0 + p.f64_or("tail", 30.0)?, p.f64_or("step", DEFAULT_STEP)?)?;
            let r = solve_radial_3d(&pot, -(pot.amplitude + 1e-3), -1e-9, &grid)?;
            let line = format!("eta = {}", n12(r.eta));
            (r.wave, line)
        }
        _ => {
            p.check_keys("fig2", &["mode", "r0", "amplitude", "eta", "step", "tail"])?;
            let pot = RadialPotential3D::accordion(
                p.f64_or("amplitude", 0.03)?,
                p.f64_or("r0", ACCORDION_R0)?,
            );
            let eta = p.f64_or("eta", 0.01)?;
            if !(eta > 0.0) {
                return Err(CliError::Usage(format!("eta = {eta} must be positive")));
            }
            let grid = pot.grid(pot.r0 + p.f64_or("tail", 30.0)?, p.f64_or("step", DEFAULT_STEP)?)?;
            let raw = radial_outward(&pot, eta, &grid)?;
            let u = raw.scaled(1.0 / raw.max_abs())?;
            (u, format!("eta = {}", n12(eta)))
        }
    };
    let body = csv(|b| export::write_fig2_csv(b, &u))?;
    Ok(Output {
        body,
        summary: vec![format!("mode {mode}: {summary}")],
    })
}

// Planar

fn planar_bunching(p: &Params, format: Format) -> Res<Output> {
    p.check_keys("planar-bunching", &["m", "n_max"])?;
    let m = p.usize_or("m", 0)?;
    if m > 1 {
        return Err(CliError::Usage(format!("m = {m} must be 0 or 1")));
    }
    let series = bunching_series(m as u32, p.usize_or("n_max", 30)?)?;
    let body = match format {
        Format::Csv => csv(|b| export::write_bunching_csv(b, &series))?,
        Format::Json => json_body(serde_json::to_value(&series).map_err(|e| CliError::Io(e.to_string()))?)?,
    };
    Ok(Output {
        body,
        summary: vec![format!(
            "g_{m}(1) = {}, g_{m}({}) = {}",
            n12(series.g[0]),
            series.g.len(),
            n12(series.g[series.g.len() - 1])
        )],
    })
}

fn rho_grid(p: &Params, default_max: f64) -> Res<Grid> {
    Ok(Grid::spanning(
        p.f64_or("rho_min", 1e-3)?,
        p.f64_or("rho_max", default_max)?,
        p.f64_or("step", DEFAULT_STEP)?,
    )?)
}

fn planar_k0(p: &Params, format: Format) -> Res<Output> {
    p.check_keys("planar-k0", &["rho_min", "rho_max", "step"])?;
    let grid = rho_grid(p, 20.0)?;
    let (u, report) = k0_bound_state(&grid)?;
    let body = match format {
        Format::Json => json_body(export::k0_json(&report))?,
        Format::Csv => {
            let mut text = String::from("rho,u0,u0_over_sqrt_rho\n");
            for (rho, x) in u.iter() {
                text.push_str(&format!("{},{},{}\n", n12(rho), n12(x), n12(x / rho.sqrt())));
            }
            text
        }
    };
    Ok(Output {
        body,
        summary: vec![
            format!("ode residual = {}", n12(report.ode_residual)),
            format!("norm = {} (1/2pi = {})", n12(report.norm), n12(1.0 / TAU)),
        ],
    })
}

fn fig3(p: &Params) -> Res<Output> {
    p.check_keys("fig3", &["n_max"])?;
    let n_max = p.usize_or("n_max", 25)?;
    let series = [bunching_series(0, n_max)?, bunching_series(1, n_max)?];
    let body = csv(|b| export::write_fig3_csv(b, &series))?;
    Ok(Output {
        body,
        summary: vec![format!("{} rows", 2 * (n_max - 1))],
    })
}

fn fig4(p: &Params) -> Res<Output> {
    p.check_keys("fig4", &["rho_min", "rho_max", "step"])?;
    let grid = rho_grid(p, 10.0)?;
    let (u, _) = k0_bound_state(&grid)?;
    let q = |rho: f64| -1.0 + 0.25 / (rho * rho);
    let residual = match u.window(0.5, 8.0) {
        Ok(w) => ode_residual(&w, &q),
        Err(_) => ode_residual(&u, &q),
    };
    let body = csv(|b| export::write_fig4_csv(b, &u))?;
    Ok(Output {
        body,
        summary: vec![format!("ode residual = {}", n12(residual))],
    })
}
