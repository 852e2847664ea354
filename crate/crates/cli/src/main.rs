use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hadamard_cli::{cmd_check, cmd_run, cmd_sweep, Overrides, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "hadamard-iter", version, about = "Fixed-point iteration experiments on Hadamard spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment, check or sweep config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the iteration budget.
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scheme; writes a trace CSV and a summary.
    Run(Common),
    /// Run diagnostic checks; exits 0 iff all pass.
    Check(Common),
    /// Run a parameter grid; writes one aggregate row per cell.
    Sweep(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (Command::Run(c) | Command::Check(c) | Command::Sweep(c)) = &cli.command;
    let ov = Overrides {
        out: c.out.clone(),
        seed: c.seed,
        max_iters: c.max_iters,
    };
    let code = match &cli.command {
        Command::Run(_) => cmd_run(&c.config, &ov).map(|o| {
            let s = &o.summary;
            println!(
                "{}: {} after {} iterations, residual {:e}",
                s.scheme.as_str(),
                s.stop_reason,
                s.iterations,
                s.final_residual
            );
            if let Some(detail) = &s.stop_detail {
                eprintln!("solver error at step {}: {detail}", s.solver_error_step.unwrap_or(0));
            }
            o.exit_code()
        }),
        Command::Check(_) => cmd_check(&c.config, &ov).map(|(b, path)| {
            for e in &b.checks {
                let mark = if e.passed { "pass" } else { "FAIL" };
                match (&e.report, &e.error) {
                    (Some(r), _) => println!(
                        "{mark} {} ({} samples, {} violations, max {:e})",
                        e.label, r.samples_tested, r.violation_count, r.max_violation
                    ),
                    (None, err) => println!("{mark} {}: {}", e.label, err.as_deref().unwrap_or("")),
                }
            }
            println!("report: {}", path.display());
            b.exit_code()
        }),
        Command::Sweep(_) => cmd_sweep(&c.config, &ov).map(|o| {
            println!("{} cells, aggregate: {}", o.cells.len(), o.aggregate_path.display());
            o.exit_code()
        }),
    };
    match code {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
