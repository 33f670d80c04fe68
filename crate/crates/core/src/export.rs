//! CSV and JSON writers. Every number is printed with 12 significant digits.

use std::io::{self, Write};

use serde::Serialize;

use crate::accordion::{EigenResult, EnvelopeReport};
use crate::floquet::StabilityChart;
use crate::ode::{Grid, WaveSamples};
use crate::radial::{BunchingSeries, DensityGrowth, K0Report, ZeroEnergyResult};

/// Scientific notation with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn row(out: &mut impl Write, fields: &[f64]) -> io::Result<()> {
    let line: Vec<String> = fields.iter().map(|&x| fmt_num(x)).collect();
    writeln!(out, "{}", line.join(","))
}

fn check_aligned(columns: &[&WaveSamples]) -> io::Result<()> {
    let first = columns[0].grid();
    if columns.iter().any(|c| c.grid() != first) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "columns are sampled on different grids",
        ));
    }
    Ok(())
}

/// `kappa,alpha,stable` with `stable` in {0, 1}; κ-major order.
pub fn write_chart_csv(out: &mut impl Write, chart: &StabilityChart) -> io::Result<()> {
    writeln!(out, "kappa,alpha,stable")?;
    for c in &chart.cells {
        writeln!(
            out,
            "{},{},{}",
            fmt_num(c.kappa),
            fmt_num(c.alpha),
            u8::from(c.is_stable())
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EigenJson<'a> {
    eta: f64,
    nodes: usize,
    match_defect: f64,
    grid: &'a Grid,
    values: &'a [f64],
}

/// `{eta, nodes, match_defect, grid: {start, step, count}, values: [...]}`.
pub fn eigen_json(result: &EigenResult) -> serde_json::Value {
    let doc = EigenJson {
        eta: result.eta,
        nodes: result.nodes,
        match_defect: result.match_defect,
        grid: result.wave.grid(),
        values: result.wave.values(),
    };
    round_json(serde_json::to_value(doc).expect("plain data serializes"))
}

/// `theta,v,v_eff,u_full,u_reconstructed`.
pub fn write_envelope_csv(out: &mut impl Write, report: &EnvelopeReport) -> io::Result<()> {
    check_aligned(&[
        &report.potential,
        &report.v_eff,
        &report.full,
        &report.reconstructed,
    ])?;
    writeln!(out, "theta,v,v_eff,u_full,u_reconstructed")?;
    for i in 0..report.potential.len() {
        row(
            out,
            &[
                report.potential.grid().point(i),
                report.potential.values()[i],
                report.v_eff.values()[i],
                report.full.values()[i],
                report.reconstructed.values()[i],
            ],
        )?;
    }
    Ok(())
}

/// `theta,v,v_eff,u_full,envelope`.
pub fn write_fig1_csv(out: &mut impl Write, report: &EnvelopeReport) -> io::Result<()> {
    check_aligned(&[&report.potential, &report.v_eff, &report.full, &report.envelope])?;
    writeln!(out, "theta,v,v_eff,u_full,envelope")?;
    for i in 0..report.potential.len() {
        row(
            out,
            &[
                report.potential.grid().point(i),
                report.potential.values()[i],
                report.v_eff.values()[i],
                report.full.values()[i],
                report.envelope.values()[i],
            ],
        )?;
    }
    Ok(())
}

/// `r,u,psi,density` with `psi = u/r` and `density = psi²`, for `r > 0`.
pub fn write_radial_csv(out: &mut impl Write, u: &WaveSamples) -> io::Result<()> {
    writeln!(out, "r,u,psi,density")?;
    for (r, x) in u.iter().filter(|&(r, _)| r > 0.0) {
        let psi = x / r;
        row(out, &[r, x, psi, psi * psi])?;
    }
    Ok(())
}

/// `r,u,|psi|^2` for `r > 0`.
pub fn write_fig2_csv(out: &mut impl Write, u: &WaveSamples) -> io::Result<()> {
    writeln!(out, "r,u,|psi|^2")?;
    for (r, x) in u.iter().filter(|&(r, _)| r > 0.0) {
        let psi = x / r;
        row(out, &[r, x, psi * psi])?;
    }
    Ok(())
}

/// `n,j_mn,gap,g`, one row per gap.
pub fn write_bunching_csv(out: &mut impl Write, series: &BunchingSeries) -> io::Result<()> {
    writeln!(out, "n,j_mn,gap,g")?;
    for (i, (gap, g)) in series.gaps.iter().zip(&series.g).enumerate() {
        let j = series.zeros[i];
        writeln!(out, "{},{},{},{}", i + 1, fmt_num(j), fmt_num(*gap), fmt_num(*g))?;
    }
    Ok(())
}

/// `m,n,j,gap,g` for several orders.
pub fn write_fig3_csv(out: &mut impl Write, series: &[BunchingSeries]) -> io::Result<()> {
    writeln!(out, "m,n,j,gap,g")?;
    for s in series {
        for (i, (gap, g)) in s.gaps.iter().zip(&s.g).enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                s.m,
                i + 1,
                fmt_num(s.zeros[i]),
                fmt_num(*gap),
                fmt_num(*g)
            )?;
        }
    }
    Ok(())
}

/// `rho,u0,VQ`.
pub fn write_fig4_csv(out: &mut impl Write, u0: &WaveSamples) -> io::Result<()> {
    writeln!(out, "rho,u0,VQ")?;
    for (rho, x) in u0.iter() {
        row(out, &[rho, x, crate::radial::quantum_anticentrifugal(rho)])?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ZeroEnergyJson<'a> {
    tuned_depth: f64,
    r0: f64,
    amplitude: f64,
    tail_flatness: f64,
    density_growth_slope: f64,
    growth: Option<&'a DensityGrowth>,
    grid: &'a Grid,
    u: &'a [f64],
}

pub fn zero_energy_json(z: &ZeroEnergyResult, growth: Option<&DensityGrowth>) -> serde_json::Value {
    let doc = ZeroEnergyJson {
        tuned_depth: z.tuned_depth,
        r0: z.potential.r0,
        amplitude: z.potential.amplitude,
        tail_flatness: z.tail_flatness,
        density_growth_slope: z.density_growth_slope,
        growth,
        grid: z.u.grid(),
        u: z.u.values(),
    };
    round_json(serde_json::to_value(doc).expect("plain data serializes"))
}

pub fn k0_json(report: &K0Report) -> serde_json::Value {
    round_json(serde_json::to_value(report).expect("plain data serializes"))
}

/// Rounds every float in a JSON tree to 12 significant digits so JSON and
/// CSV outputs carry the same precision.
pub fn round_json(value: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            fmt_num(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}
