use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod csv;

/// Exit codes: 0 success, 1 invariant/condition failure, 2 usage/parse
/// error (clap uses 2 for bad arguments on its own).
#[derive(Parser)]
#[command(name = "chartlab", version, about = "Tangency-cascade laboratory runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FamilyArg {
    /// Family definition file.
    #[arg(long)]
    family: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family definition file deterministically from a seed.
    Synth {
        /// Tangency type: elliptic or hyperbolic.
        #[arg(long = "type", value_parser = ["elliptic", "hyperbolic"])]
        kind: String,
        #[arg(long, default_value_t = 4.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path for the family file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure the generic conditions and print per-condition witnesses.
    Check {
        #[command(flatten)]
        family: FamilyArg,
        /// Tolerance on the genericity witnesses.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Also write the report to a file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// C2 convergence table of the iterated strand (CSV).
    Converge {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu0: f64,
        /// Iterate range, e.g. 0..20 (inclusive).
        #[arg(long = "m-range", default_value = "0..20", value_parser = parse_range)]
        m_range: (usize, usize),
        /// Curvature threshold reported alongside the table.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the tangency cascade and verify generic unfolding (CSV +
    /// summary).
    Cascade {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, allow_negative_numbers = true)]
        mu0: f64,
        #[arg(long = "m-range", default_value = "7..16", value_parser = parse_range)]
        m_range: (usize, usize),
        /// Strip height; defaults to half the smallest strand height.
        #[arg(long)]
        h0: Option<f64>,
        /// Initial sweep bound; defaults to half the chart width.
        #[arg(long = "nu-bar")]
        nu_bar: Option<f64>,
        /// Residual tolerance of the tangency solver.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run even when the sign of mu0 contradicts the tangency type.
        #[arg(long, default_value_t = false)]
        force: bool,
    },
    /// Dump strand polylines, sheet sections, strip extents and tangency
    /// points as whitespace-separated columns for plotting.
    Plotdata {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, allow_negative_numbers = true)]
        mu0: f64,
        #[arg(long = "m-range", default_value = "7..16", value_parser = parse_range)]
        m_range: (usize, usize),
        #[arg(long)]
        h0: Option<f64>,
        /// Output directory for the dump files.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got '{s}'"))?;
    let lo: usize = a.trim().parse().map_err(|_| format!("bad range start '{a}'"))?;
    let hi: usize = b.trim().parse().map_err(|_| format!("bad range end '{b}'"))?;
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Synth {
            kind,
            alpha,
            beta,
            gamma,
            seed,
            out,
        } => commands::synth(&kind, alpha, beta, gamma, seed, &out),
        Command::Check { family, tol, out } => commands::check(&family.family, tol, out.as_deref()),
        Command::Converge {
            family,
            mu0,
            m_range,
            eps,
            out,
        } => commands::converge(&family.family, mu0, m_range, eps, out.as_deref()),
        Command::Cascade {
            family,
            mu0,
            m_range,
            h0,
            nu_bar,
            tol,
            out,
            force,
        } => commands::cascade(&family.family, mu0, m_range, h0, nu_bar, tol, out.as_deref(), force),
        Command::Plotdata {
            family,
            mu0,
            m_range,
            h0,
            out,
        } => commands::plotdata(&family.family, mu0, m_range, h0, &out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
