//! Command-line front end for `orbitdim-core`: state files, report rendering and subcommands.
//!
//! Exit codes: 0 success, 1 a reported check failed, 2 invalid input, 3 picture/state-kind
//! mismatch, 4 truncation leakage during time evolution.

// Negated float comparisons deliberately treat NaN as a failed check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod report;
pub mod state_file;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use orbitdim_core::dynamics::EvolutionConfig;
use orbitdim_core::{GroupKind, PictureKind};

use crate::commands::verdict;
use crate::error::{exit, CliError};
use crate::report::{Context, TolerancePolicy};
use crate::state_file::read_state;

fn parse_group(s: &str) -> Result<GroupKind, String> {
    s.parse().map_err(|_| format!("unknown group `{s}` (expected plo, dplo, alo or go)"))
}

fn parse_picture(s: &str) -> Result<PictureKind, String> {
    s.parse().map_err(|_| format!("unknown picture `{s}` (expected ket, ketbra or mixed)"))
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got `{s}`")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "orbitdim", version, about = "Orbit dimensions of optical states under linear and Gaussian optics")]
pub struct Cli {
    /// Print a structured JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Absolute rank threshold; the default is 1e-8 * max(1, largest eigenvalue).
    #[arg(long, global = true, value_parser = parse_tolerance)]
    pub tol: Option<f64>,
    /// Seed for commands that sample states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit dimension of the state in a file.
    Dim {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_parser = parse_group)]
        group: GroupKind,
        #[arg(long, value_parser = parse_picture, default_value = "ket")]
        picture: PictureKind,
    },
    /// Full Gram matrix with basis labels and spectrum.
    Gram {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_parser = parse_group)]
        group: GroupKind,
        #[arg(long, value_parser = parse_picture, default_value = "ket")]
        picture: PictureKind,
    },
    /// Numerical regeneration of the closed-form table for Fock, NOON and one-mode superposition states.
    Table2 {
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Dimensions of random sphere states against the generic value.
    Generic {
        #[arg(long, value_parser = parse_group)]
        group: GroupKind,
        #[arg(long)]
        m: usize,
        /// Photon-number cutoff.
        #[arg(long = "N", alias = "n")]
        n: u32,
        #[arg(long, value_parser = parse_picture, default_value = "ket")]
        picture: PictureKind,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// First seed; defaults to --seed.
        #[arg(long)]
        seed0: Option<u64>,
    },
    /// Numerical check that the basis commutators close.
    Closure {
        #[arg(long, value_parser = parse_group)]
        group: GroupKind,
        #[arg(long)]
        m: usize,
    },
    /// Gaussian-optics non-Gaussianity witness of a pure state.
    Witness {
        #[arg(long)]
        state: PathBuf,
    },
    /// Gram matrix from second time derivatives of evolved-copy overlaps, against the direct value.
    Estimate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_parser = parse_group)]
        group: GroupKind,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Photons above the state's support kept in the truncation.
        #[arg(long, default_value_t = 16)]
        buffer: u32,
        /// Largest accepted trace or boundary-shell leakage.
        #[arg(long, default_value_t = 1e-6)]
        leakage_tol: f64,
        /// Print every entry.
        #[arg(long)]
        detail: bool,
    },
    /// Random state on the unit sphere of states with at most N photons.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long = "N", alias = "n")]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit dimensions of two dual-rail states related by a logical CNOT.
    CnotDemo {
        #[arg(long, value_parser = parse_group, default_value = "go")]
        group: GroupKind,
    },
}

/// Text to print and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs a parsed command line; `args` is echoed in structured reports.
pub fn run(cli: Cli, args: Vec<String>) -> Outcome {
    match execute(&cli, args) {
        Ok((stdout, code)) => Outcome { stdout, stderr: String::new(), code },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn execute(cli: &Cli, args: Vec<String>) -> Result<(String, i32), CliError> {
    let start = Instant::now();
    let mut ctx = Context { command: args, json: cli.json, tolerance: TolerancePolicy::from_flag(cli.tol), input_sha256: None };
    let tol = cli.tol;
    let mut load = |path: &PathBuf| -> Result<_, CliError> {
        let input = read_state(path)?;
        ctx.input_sha256 = Some(input.sha256);
        Ok(input.state)
    };
    let (text, code) = match &cli.command {
        Command::Dim { state, group, picture } => {
            let state = load(state)?;
            let r = commands::dim(&state, *group, *picture, tol)?;
            (ctx.render(&r, start.elapsed()), exit::OK)
        }
        Command::Gram { state, group, picture } => {
            let state = load(state)?;
            let r = commands::gram_matrix(&state, *group, *picture, tol)?;
            (ctx.render(&r, start.elapsed()), exit::OK)
        }
        Command::Table2 { m_max, format } => {
            let r = commands::table2(*m_max, tol)?;
            let text = if *format == TableFormat::Csv && !cli.json { r.csv() } else { ctx.render(&r, start.elapsed()) };
            (text, verdict(r.pass()))
        }
        Command::Generic { group, m, n, picture, seeds, seed0 } => {
            let r = commands::generic(*group, *m, *n, *picture, *seeds, seed0.unwrap_or(cli.seed), tol)?;
            (ctx.render(&r, start.elapsed()), verdict(r.pass()))
        }
        Command::Closure { group, m } => {
            let r = commands::closure(*group, *m)?;
            (ctx.render(&r, start.elapsed()), verdict(r.pass))
        }
        Command::Witness { state } => {
            let state = load(state)?;
            let r = commands::witness(&state, tol)?;
            (ctx.render(&r, start.elapsed()), exit::OK)
        }
        Command::Estimate { state, group, h, buffer, leakage_tol, detail } => {
            let state = load(state)?;
            let cfg = EvolutionConfig { buffer: *buffer, leakage_tolerance: *leakage_tol, step: *h };
            let r = commands::estimate(&state, *group, &cfg, *detail)?;
            (ctx.render(&r, start.elapsed()), verdict(r.within_tolerance))
        }
        Command::Sample { m, n, out } => {
            let r = commands::sample(*m, *n, cli.seed, out.as_deref())?;
            (ctx.render(&r, start.elapsed()), exit::OK)
        }
        Command::CnotDemo { group } => {
            let r = commands::cnot(*group, tol)?;
            (ctx.render(&r, start.elapsed()), verdict(r.pass))
        }
    };
    Ok((text, code))
}
