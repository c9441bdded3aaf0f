mod check;
mod demo;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orthobound::experiments::{fuzz_campaign, sharpness_sweep, FuzzConfig, SweepTarget};
use orthobound::family::FamilyKind;
use orthobound::Field;
use serde_json::json;

/// Exit status for a run whose hypotheses held and whose chains all held.
pub const EXIT_OK: u8 = 0;
/// I/O, parse or validation failure.
pub const EXIT_INVALID: u8 = 1;
/// A corridor hypothesis failed on the given input.
pub const EXIT_HYPOTHESIS: u8 = 2;
/// A chain was violated although its hypotheses held.
pub const EXIT_VIOLATED: u8 = 3;

#[derive(Parser)]
#[command(name = "orthobound", version, about = "Check Bessel-counterpart and Grüss-type bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one bound on an instance file.
    Check {
        #[arg(long)]
        instance: PathBuf,
        /// thm1.1, thm2, thm2.1, eq2.6, eq2.11:max, eq2.11:holder:P, eq2.11:sum,
        /// cor2.3, cor2.5, thm3.1, cor3.3 or thm4.1:LAMBDA
        #[arg(long)]
        bound: String,
        /// Evaluate even if a hypothesis fails (exit status stays 2).
        #[arg(long)]
        force: bool,
        /// Relative hypothesis tolerance; defaults to one derived from the
        /// family's Gram residual.
        #[arg(long, env = "ORTHOBOUND_TOL")]
        tolerance: Option<f64>,
    },
    /// Run random admissible instances through every bound.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// Largest ambient dimension.
        #[arg(long, default_value_t = 8)]
        dim: usize,
        /// Largest family size.
        #[arg(long, default_value_t = 4)]
        family: usize,
        #[arg(long, value_enum, default_value_t = Mode::Real)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = CorridorSign::Positive)]
        corridor: CorridorSign,
    },
    /// Write defect/bound ratios of an extremal construction to CSV.
    Sweep {
        #[arg(long, value_enum)]
        target: Target,
        /// Comma-separated values in (0, 1).
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sandwich-checked integral instance on a built-in family.
    IntegralDemo {
        #[arg(long, value_enum)]
        family: DemoFamily,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Real,
    Complex,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorridorSign {
    Positive,
    Signed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Thm21,
    Cor23,
    Cor32,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoFamily {
    Trig,
    Legendre,
}

fn print_json(value: &serde_json::Value) {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn fail(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_INVALID
}

fn fuzz(seed: u64, count: u64, dim: usize, family: usize, mode: Mode, corridor: CorridorSign) -> u8 {
    let cfg = FuzzConfig {
        seed,
        count,
        dim,
        family_size: family,
        field: match mode {
            Mode::Real => Field::Real,
            Mode::Complex => Field::Complex,
        },
        signed: matches!(corridor, CorridorSign::Signed),
    };
    match fuzz_campaign(&cfg) {
        Ok(summary) => {
            let violations = summary.total_violations();
            print_json(&json!({ "config": cfg, "summary": summary, "total_violations": violations }));
            if violations == 0 {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            }
        }
        Err(e) => fail(e),
    }
}

fn sweep(target: Target, eps: &str, out: &PathBuf) -> u8 {
    let grid: Result<Vec<f64>, _> = eps
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse::<f64>)
        .collect();
    let grid = match grid {
        Ok(g) => g,
        Err(e) => return fail(format!("--eps: {e}")),
    };
    let target = match target {
        Target::Thm21 => SweepTarget::Thm21,
        Target::Cor23 => SweepTarget::Cor23,
        Target::Cor32 => SweepTarget::Cor32,
    };
    let rows = match sharpness_sweep(target, &grid) {
        Ok(rows) => rows,
        Err(e) => return fail(e),
    };
    let write = || -> Result<(), Box<dyn std::error::Error>> {
        let mut w = csv::Writer::from_path(out)?;
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    };
    match write() {
        Ok(()) => {
            print_json(&json!({ "target": target, "rows": rows.len(), "out": out }));
            EXIT_OK
        }
        Err(e) => fail(format!("{}: {e}", out.display())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Check {
            instance,
            bound,
            force,
            tolerance,
        } => check::run(&instance, &bound, force, tolerance),
        Command::Fuzz {
            seed,
            count,
            dim,
            family,
            mode,
            corridor,
        } => fuzz(seed, count, dim, family, mode, corridor),
        Command::Sweep { target, eps, out } => sweep(target, &eps, &out),
        Command::IntegralDemo { family, nodes, count } => demo::run(
            match family {
                DemoFamily::Trig => FamilyKind::Trig,
                DemoFamily::Legendre => FamilyKind::Legendre,
            },
            nodes,
            count,
        ),
    };
    ExitCode::from(code)
}
