//! Command-line front end. Subcommands sample the closed-form dispersion
//! relations, run the finite-element rod, and solve the static problems,
//! emitting plot-ready CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 2 validation error, 3 solver failure, 4 I/O.
//! Grid points are evaluated in parallel; results are reassembled in
//! index order, so artifacts are byte-identical across thread counts
//! (cap the pool with FINDISP_THREADS).

mod config;
mod emit;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use findisp_core::beam::jf_omission_error;
use findisp_core::curve::{self, CurvePoint};
use findisp_core::fem::{self, ExcitationKind};
use findisp_core::rod::invert_rod_dispersion;
use findisp_core::statics::{solve_beam_static, solve_rod_static};
use findisp_core::{Error, ModelKind, Result};
use rayon::prelude::*;
use serde_json::json;

use config::{
    BeamDispersionArgs, DeviationArgs, GroupVelocityArgs, JfErrorArgs, RodDispersionArgs,
    SimulateRodArgs, StaticArgs,
};
use emit::{fmt, Artifacts};

#[derive(Parser)]
#[command(
    name = "findisp",
    version,
    about = "Finite-amplitude dispersion, rod finite elements, and nonlinear statics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the finite-amplitude rod dispersion relation over a wavenumber grid
    RodDispersion(RodDispersionArgs),
    /// Sample a beam dispersion relation (conventional or inextensional)
    BeamDispersion(BeamDispersionArgs),
    /// Sample group-velocity curves for any model
    GroupVelocity(GroupVelocityArgs),
    /// Sweep amplitude at a fixed wavenumber and report percent deviation
    Deviation(DeviationArgs),
    /// Quantify the fourth-area-moment omission error across slenderness ratios
    JfError(JfErrorArgs),
    /// Run the finite-element rod and extract wave features
    SimulateRod(SimulateRodArgs),
    /// Solve a static finite-deformation problem
    Static(StaticArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_thread_pool() {
        eprintln!("findisp: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("findisp: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn init_thread_pool() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("FINDISP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("FINDISP_THREADS must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err("FINDISP_THREADS must be >= 1".to_string());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Domain(_) => 2,
        Error::Io(_) => 4,
        _ => 3,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::invalid(format!("config echo: {e}")))
}

fn run(cmd: Command) -> Result<String> {
    match cmd {
        Command::RodDispersion(a) => {
            let (filled, plan) = a.resolve()?;
            sweep("rod-dispersion", plan, to_value(&filled)?)
        }
        Command::BeamDispersion(a) => {
            let (filled, plan) = a.resolve()?;
            sweep("beam-dispersion", plan, to_value(&filled)?)
        }
        Command::GroupVelocity(a) => {
            let (filled, plan) = a.resolve()?;
            sweep("group-velocity", plan, to_value(&filled)?)
        }
        Command::Deviation(a) => {
            let (filled, plan) = a.resolve()?;
            deviation(plan, to_value(&filled)?)
        }
        Command::JfError(a) => {
            let (filled, plan) = a.resolve()?;
            jf_error(plan, to_value(&filled)?)
        }
        Command::SimulateRod(a) => {
            let (filled, plan) = a.resolve()?;
            simulate_rod(plan, to_value(&filled)?)
        }
        Command::Static(a) => {
            let (filled, plan) = a.resolve()?;
            run_static(plan, to_value(&filled)?)
        }
    }
}

/// Evaluate one curve row per wavenumber; first error in grid order wins
/// so failures are as deterministic as successes.
fn curve_rows(
    model: ModelKind,
    c0: f64,
    b: f64,
    kappas: &[f64],
    params: Option<&findisp_core::BeamModelParams>,
) -> Result<Vec<CurvePoint>> {
    let rows: Vec<Result<CurvePoint>> = kappas
        .par_iter()
        .map(|&k| match model {
            ModelKind::Rod => curve::rod_point(c0, b, k),
            m => curve::beam_point(m, b, k, params.expect("beam params")),
        })
        .collect();
    rows.into_iter().collect()
}

fn sweep(name: &'static str, plan: config::SweepPlan, filled: serde_json::Value) -> Result<String> {
    let mut art = Artifacts::new(&plan.out)?;
    let result = (|| {
        let c0 = plan.material.bar_wave_speed();
        let rows = plan.kappas.len();
        let mut files = Vec::new();
        for &b in &plan.b_values {
            let points = curve_rows(plan.model, c0, b, &plan.kappas, plan.params.as_ref())?;
            let file = if plan.b_values.len() == 1 {
                "curve.csv".to_string()
            } else {
                format!("curve_B{b}.csv")
            };
            art.write_text(&file, &emit::curve_csv(&points)?)?;
            files.push(file);
        }
        art.write_text("config.resolved.json", &emit::json_text(&filled))?;
        Ok(format!(
            "{name}: wrote {} ({rows} rows each, model {}) to {}",
            files.join(", "),
            plan.model,
            art.dir().display()
        ))
    })();
    if result.is_err() {
        art.discard();
    }
    result
}

fn deviation(plan: config::DeviationPlan, filled: serde_json::Value) -> Result<String> {
    let mut art = Artifacts::new(&plan.out)?;
    let result = (|| {
        let c0 = plan.material.bar_wave_speed();
        let rows: Vec<Result<CurvePoint>> = plan
            .b_values
            .par_iter()
            .map(|&b| match plan.model {
                ModelKind::Rod => curve::rod_point(c0, b, plan.kappa),
                m => curve::beam_point(m, b, plan.kappa, plan.params.as_ref().expect("beam params")),
            })
            .collect();
        let points: Vec<CurvePoint> = rows.into_iter().collect::<Result<_>>()?;
        art.write_text("curve.csv", &emit::curve_csv(&points)?)?;
        art.write_text("config.resolved.json", &emit::json_text(&filled))?;
        Ok(format!(
            "deviation: wrote curve.csv ({} amplitude rows at kappa = {}, model {}) to {}",
            points.len(),
            plan.kappa,
            plan.model,
            art.dir().display()
        ))
    })();
    if result.is_err() {
        art.discard();
    }
    result
}

fn jf_error(plan: config::JfPlan, filled: serde_json::Value) -> Result<String> {
    let mut art = Artifacts::new(&plan.out)?;
    let result = (|| {
        let rows: Vec<Result<f64>> = plan
            .ratios
            .par_iter()
            .map(|&r| jf_omission_error(r, plan.model, plan.kappa, plan.b, &plan.material))
            .collect();
        let mut csv = String::from("a_over_b,kappa,b,error_pct\n");
        for (i, row) in rows.into_iter().enumerate() {
            let err = row?;
            csv.push_str(&format!(
                "{},{},{},{}\n",
                fmt(plan.ratios[i]),
                fmt(plan.kappa),
                fmt(plan.b),
                fmt(err)
            ));
        }
        art.write_text("jf_error.csv", &csv)?;
        art.write_text("config.resolved.json", &emit::json_text(&filled))?;
        Ok(format!(
            "jf-error: wrote jf_error.csv ({} slenderness rows, model {}) to {}",
            plan.ratios.len(),
            plan.model,
            art.dir().display()
        ))
    })();
    if result.is_err() {
        art.discard();
    }
    result
}

fn simulate_rod(plan: config::SimPlan, filled: serde_json::Value) -> Result<String> {
    let mut art = Artifacts::new(&plan.out)?;
    let result = (|| {
        let rec = fem::simulate(&plan.mesh, &plan.material, &plan.section, &plan.protocol)?;

        let n_nodes = rec.node_positions.len();
        let mut csv = String::from("t");
        for i in 0..n_nodes {
            csv.push_str(&format!(",s_{i}"));
        }
        csv.push('\n');
        for (ti, t) in rec.times.iter().enumerate() {
            csv.push_str(&fmt(*t));
            for u in &rec.displacements[ti] {
                csv.push(',');
                csv.push_str(&fmt(*u));
            }
            csv.push('\n');
        }
        art.write_text("simulation.csv", &csv)?;

        // Extraction is best effort: the field data stays useful even when
        // the crossing-pair readout cannot lock on.
        let (extracted, extraction_error, note) = match rec.protocol.kind {
            ExcitationKind::TipSinusoid { amplitude, frequency } => {
                match fem::extract_wavelength(&rec, None) {
                    Ok(kappa) => {
                        let closed = invert_rod_dispersion(frequency, amplitude, rec.c0)?;
                        (
                            json!({ "kappa_measured": kappa, "kappa_closed_form": closed }),
                            serde_json::Value::Null,
                            format!("kappa {} vs closed form {}", fmt(kappa), fmt(closed)),
                        )
                    }
                    Err(e) => (
                        serde_json::Value::Null,
                        json!(e.to_string()),
                        format!("extraction failed: {e}"),
                    ),
                }
            }
            ExcitationKind::InitialField { .. } => match fem::extract_frequency(&rec) {
                Ok(omega) => (
                    json!({ "omega_measured": omega }),
                    serde_json::Value::Null,
                    format!("omega {}", fmt(omega)),
                ),
                Err(e) => (
                    serde_json::Value::Null,
                    json!(e.to_string()),
                    format!("extraction failed: {e}"),
                ),
            },
        };

        let sidecar = json!({
            "protocol": rec.protocol,
            "mesh": plan.mesh,
            "c0": rec.c0,
            "node_positions": rec.node_positions,
            "energy": rec.energy,
            "energy_drift": rec.energy_drift().ok(),
            "extracted": extracted,
            "extraction_error": extraction_error,
        });
        art.write_text("simulation.json", &emit::json_text(&sidecar))?;
        art.write_text("config.resolved.json", &emit::json_text(&filled))?;
        Ok(format!(
            "simulate-rod: wrote {} snapshots x {n_nodes} nodes to {}; {note}",
            rec.times.len(),
            art.dir().display()
        ))
    })();
    if result.is_err() {
        art.discard();
    }
    result
}

fn run_static(plan: config::StaticPlan, filled: serde_json::Value) -> Result<String> {
    let mut art = Artifacts::new(&plan.out)?;
    let result = (|| {
        let case = plan.case;
        let sol = match case.model {
            ModelKind::Rod => solve_rod_static(&case)?,
            _ => solve_beam_static(&case)?,
        };

        let mut csv = String::from("s_over_L,u_over_L,v_over_L\n");
        for i in 0..sol.s_over_l.len() {
            csv.push_str(&format!(
                "{},{},{}\n",
                fmt(sol.s_over_l[i]),
                fmt(sol.u_over_l[i]),
                fmt(sol.v_over_l[i])
            ));
        }
        art.write_text("static.csv", &csv)?;

        let sidecar = json!({
            "model": case.model,
            "length": case.length,
            "load": case.load,
            "gravity": case.gravity,
            "resolution": case.resolution,
            "tip_u_over_L": sol.tip_u_over_l,
            "tip_v_over_L": sol.tip_v_over_l,
            "tip_state": sol.tip_state,
            "report": sol.report,
        });
        art.write_text("static_report.json", &emit::json_text(&sidecar))?;
        art.write_text("config.resolved.json", &emit::json_text(&filled))?;
        Ok(format!(
            "static: wrote static.csv ({} points, model {}, tip u/L = {:.6}, v/L = {:.6}) to {}",
            sol.s_over_l.len(),
            case.model,
            sol.tip_u_over_l,
            sol.tip_v_over_l,
            art.dir().display()
        ))
    })();
    if result.is_err() {
        art.discard();
    }
    result
}
