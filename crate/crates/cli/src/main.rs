// Copyright 2026 The PSTLab Authors
// SPDX-License-Identifier: Apache-2.0

//! `pstlab` command-line front end.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pstlab_core::config::{Format, RunConfig};
use pstlab_core::liouville::NoiseKind;
use pstlab_core::{experiments, magnus, pauli, pst, Error};
use serde_json::json;

const MAX_QUBITS_VAR: &str = "PSTLAB_MAX_QUBITS";

#[derive(Parser, Debug)]
#[command(
    name = "pstlab",
    version,
    about = "Pseudo-twirling simulator in Liouville space"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Quadrature tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Number of qubits.
    #[arg(long, global = true)]
    qubits: Option<usize>,

    /// Print the resolved configuration as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Effective Hamiltonian coefficients with and without PST.
    Table1 {
        #[arg(long)]
        tau: Option<f64>,
        /// Global error scale.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        noise: Option<NoiseKind>,
        #[arg(long)]
        zeta: Option<f64>,
    },
    /// Error of the PST channel against the ideal gate over a symmetric δ grid.
    ParitySweep {
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        zeta: Option<f64>,
        /// Noise kinds to sweep (repeatable).
        #[arg(long = "noise")]
        kinds: Vec<NoiseKind>,
    },
    /// Second-order Magnus term by quadrature against the closed form.
    MagnusCheck {
        /// Drive durations (repeatable).
        #[arg(long = "tau")]
        taus: Vec<f64>,
    },
    /// Commutation signs of the n-qubit Pauli group.
    SignTable,
    /// Drive amplification factor under PST.
    Overrotation {
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        sum_h2: Option<f64>,
    },
    /// Drive duration giving a target rotation angle under PST.
    Calibrate {
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        sum_h2: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pstlab: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn apply_max_qubits() -> Result<(), Error> {
    if let Ok(value) = std::env::var(MAX_QUBITS_VAR) {
        let n = value
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "{MAX_QUBITS_VAR} must be a positive integer, got {value:?}"
                ))
            })?;
        pauli::set_max_qubits(n);
    }
    Ok(())
}

fn load_config(global: &GlobalArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &global.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(n) = global.qubits {
        cfg.n_qubits = n;
    }
    if let Some(tol) = global.tolerance {
        cfg.tolerances.quadrature = tol;
    }
    if let Some(path) = &global.output {
        cfg.output.path = Some(path.clone());
    }
    if let Some(format) = global.format {
        cfg.output.format = Some(format.into());
    }
    Ok(cfg)
}

fn apply_command_overrides(cfg: &mut RunConfig, command: &Command) {
    match command {
        Command::Table1 {
            tau,
            delta,
            noise,
            zeta,
        } => {
            if let Some(t) = tau {
                cfg.drive.tau = *t;
            }
            if let Some(d) = delta {
                cfg.delta = *d;
            }
            if let Some(k) = noise {
                cfg.noise.kind = *k;
            }
            if let Some(z) = zeta {
                cfg.noise.zeta = *z;
            }
        }
        Command::ParitySweep { tau, zeta, kinds } => {
            if let Some(t) = tau {
                cfg.sweep.tau = *t;
            }
            if let Some(z) = zeta {
                cfg.sweep.zeta = *z;
            }
            if !kinds.is_empty() {
                cfg.sweep.kinds = kinds.clone();
            }
        }
        Command::MagnusCheck { taus } => {
            if !taus.is_empty() {
                cfg.magnus.taus = taus.clone();
            }
        }
        Command::SignTable => {}
        Command::Overrotation { tau, sum_h2 } => {
            if let Some(t) = tau {
                cfg.drive.tau = *t;
            }
            if sum_h2.is_some() {
                cfg.sum_h2 = *sum_h2;
            }
        }
        Command::Calibrate { theta, sum_h2 } => {
            if let Some(t) = theta {
                cfg.theta = *t;
            }
            if sum_h2.is_some() {
                cfg.sum_h2 = *sum_h2;
            }
        }
    }
}

/// Six decimals with trailing zeros removed.
fn scalar(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    apply_max_qubits()?;
    let mut cfg = load_config(&cli.global)?;
    apply_command_overrides(&mut cfg, &cli.command);

    if cli.global.dump_config {
        print!("{}", to_json(&cfg));
        return Ok(ExitCode::SUCCESS);
    }

    let format = |default: Format| cfg.output.format.unwrap_or(default);
    let mut code = ExitCode::SUCCESS;
    let report = match &cli.command {
        Command::Table1 { .. } => {
            let report = experiments::run_table1(&cfg)?;
            match format(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => report.to_csv(),
            }
        }
        Command::ParitySweep { .. } => {
            let report = experiments::parity_sweep_report(&cfg)?;
            match format(Format::Csv) {
                Format::Json => to_json(&report),
                Format::Csv => experiments::sweep_to_csv(&report.rows),
            }
        }
        Command::MagnusCheck { .. } => {
            let report = experiments::run_magnus_crosscheck(&cfg)?;
            if !report.all_passed {
                eprintln!("pstlab: quadrature and closed form disagree beyond tolerance");
                code = ExitCode::from(2);
            }
            match format(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => report.to_csv(),
            }
        }
        Command::SignTable => {
            let table = pauli::sign_table(cfg.n_qubits)?;
            match format(Format::Csv) {
                Format::Json => to_json(&json!({
                    "labels": table.labels().iter().map(|p| p.label()).collect::<Vec<_>>(),
                    "signs": table.rows(),
                })),
                Format::Csv => table.to_csv(),
            }
        }
        Command::Overrotation { .. } => {
            let tau = cfg.drive.tau;
            let sum_h2 = cfg.resolved_sum_h2()?;
            let factor = magnus::over_rotation_factor(tau, sum_h2)?;
            scalar_report(
                format(Format::Csv),
                &[("tau", tau), ("sum_h2", sum_h2), ("factor", factor)],
            )
        }
        Command::Calibrate { .. } => {
            let theta = cfg.theta;
            let sum_h2 = cfg.resolved_sum_h2()?;
            let tau = pst::calibrate_tau(theta, sum_h2)?;
            scalar_report(
                format(Format::Csv),
                &[("theta", theta), ("sum_h2", sum_h2), ("tau", tau)],
            )
        }
    };

    match &cfg.output.path {
        Some(path) => fs::write(path, report)
            .map_err(|e| Error::InvalidSpec(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{report}"),
    }
    Ok(code)
}

/// Plain value of the last field, or every field as a JSON object when JSON
/// output is requested explicitly.
fn scalar_report(format: Format, fields: &[(&str, f64)]) -> String {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            to_json(&map)
        }
        Format::Csv => {
            let (_, value) = fields.last().expect("at least one field");
            format!("{}\n", scalar(*value))
        }
    }
}
