use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nscert::certify::{
    bnw_modes, check_inequalities, figures_from_run_dir, run_batch, run_scenario, write_run, Scenario,
};
use nscert::control::Verdict;
use nscert::spectral::{InequalityConstants, Mode};
use nscert::{Error, Result};

#[derive(Parser)]
#[command(name = "certify", version, about = "A-posteriori existence certificates for Euler/Navier-Stokes on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more scenario files.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        /// Run the scenarios in parallel (worker count from CERTIFY_THREADS).
        #[arg(long)]
        batch: bool,
        /// Output directory; overrides the scenario's output_dir (single scenario only).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the bnw datum on its 150-mode set.
    Bnw {
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract figure CSVs from a run directory.
    Figures {
        run_dir: PathBuf,
        /// Semicolon-separated modes, e.g. "1,1,0;0,0,2".
        #[arg(long, default_value = "1,1,0;0,0,2;0,1,-3")]
        modes: String,
        /// Defaults to the run directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test both nonlinear inequalities on random pairs over the 150-mode set.
    CheckInequalities {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 3.0)]
        n: f64,
    },
}

fn parse_modes(spec: &str) -> Result<Vec<Mode>> {
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let comps = s
                .split(',')
                .map(|c| c.trim().parse::<i32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidArgument(format!("bad mode {s:?}: {e}")))?;
            Mode::new(&comps)
        })
        .collect()
}

fn threads() -> usize {
    std::env::var("CERTIFY_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn certify(scenario: &Scenario, out: Option<&Path>) -> Result<Verdict> {
    let mut outcome = run_scenario(scenario)?;
    if let Some(dir) = out.or(scenario.output_dir.as_deref()) {
        write_run(&mut outcome, dir)?;
    }
    println!("{}", serde_json::to_string_pretty(&outcome.certificate)?);
    Ok(outcome.certificate.verdict)
}

fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Run { scenarios, batch, out } => {
            if scenarios.len() == 1 && !batch {
                let s = Scenario::load(&scenarios[0])?;
                return Ok(certify(&s, out.as_deref())?.exit_code() as u8);
            }
            if out.is_some() {
                return Err(Error::InvalidArgument("--out applies to a single scenario".into()));
            }
            let mut worst = 0u8;
            let mut failed = false;
            for (path, result) in run_batch(&scenarios, threads())? {
                match result {
                    Ok(o) => {
                        let c = &o.certificate;
                        println!("{}\t{}\tTc={}", path.display(), c.verdict, c.tc);
                        worst = worst.max(c.verdict.exit_code() as u8);
                    }
                    Err(e) => {
                        eprintln!("{}\terror: {e}", path.display());
                        failed = true;
                    }
                }
            }
            Ok(if failed { 1 } else { worst })
        }
        Command::Bnw { nu, horizon, out } => {
            let s = Scenario::bnw(nu, horizon);
            Ok(certify(&s, out.as_deref())?.exit_code() as u8)
        }
        Command::Figures { run_dir, modes, out } => {
            let modes = parse_modes(&modes)?;
            let files = figures_from_run_dir(&run_dir, &modes, out.as_deref().unwrap_or(&run_dir))?;
            println!("{}", files.modes_csv.display());
            println!("{}", files.estimators_csv.display());
            Ok(0)
        }
        Command::CheckInequalities { seed, pairs, n } => {
            let report = check_inequalities(&bnw_modes(), n, InequalityConstants::D3_N3, seed, pairs)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.all_hold() { 0 } else { 20 })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
