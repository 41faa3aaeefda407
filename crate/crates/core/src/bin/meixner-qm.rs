use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use meixner_qm::meixner::PrecisionGuard;
use meixner_qm::reconstruct::Column;
use meixner_qm::run::{self, Output};
use meixner_qm::scenario::{Grid, Scenario};
use meixner_qm::verify;
use meixner_qm::Error;

const GUARD_VAR: &str = "MEIXNER_QM_PRECISION_GUARD";

/// Tridiagonal Meixner Hamiltonians: spectra, reconstructed potentials and
/// bound states for the built-in scenarios or a scenario file.
#[derive(Parser)]
#[command(name = "meixner-qm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write spectrum, potential and state tables plus the manifest.
    Run(Common),
    /// Write the energy levels.
    Spectrum(Common),
    /// Write the reconstructed potential.
    Potential(Common),
    /// Write the bound-state wavefunctions.
    States(Common),
    /// Run the invariant checks and print a JSON report.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Preset (fig1, fig2, fig3, fig4) or path to a scenario file.
    scenario: String,
    /// Output directory [default: ./<scenario name>]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of basis functions / Meixner terms.
    #[arg(long)]
    terms: Option<usize>,
    /// Coordinate grid as lo:hi:points.
    #[arg(long)]
    grid: Option<Grid>,
    /// Reconstruction column: an index or `auto`.
    #[arg(long)]
    column: Option<Column>,
    /// Comma-separated levels, e.g. 0,1,2,3.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Accuracy(_) => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn load(c: &Common) -> Result<Scenario, Error> {
    let mut sc = Scenario::load(&c.scenario)?;
    if let Some(n) = c.terms {
        sc.terms = n;
    }
    if let Some(g) = c.grid {
        sc.grid = g;
    }
    if let Some(col) = c.column {
        sc.column = col;
    }
    if let Some(l) = &c.levels {
        sc.levels = l.clone();
    }
    sc.validate()?;
    Ok(sc)
}

fn guard() -> Result<PrecisionGuard, Error> {
    match std::env::var(GUARD_VAR) {
        Ok(v) => v.parse(),
        Err(std::env::VarError::NotPresent) => Ok(PrecisionGuard::Strict),
        Err(e) => Err(Error::InvalidParameter(format!("{GUARD_VAR}: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn real_main(cli: Cli) -> Result<u8, Error> {
    let guard = guard()?;
    let (common, outputs) = match &cli.command {
        Command::Run(c) => (c, Output::ALL.to_vec()),
        Command::Spectrum(c) => (c, vec![Output::Spectrum]),
        Command::Potential(c) => (c, vec![Output::Potential]),
        Command::States(c) => (c, vec![Output::States]),
        Command::Verify(c) => {
            let sc = load(c)?;
            let opts = verify::Options {
                stability_base: c.terms.unwrap_or(verify::DEFAULT_STABILITY_BASE),
                guard,
            };
            let report = verify::verify(&sc, &opts)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            for f in report.failed() {
                eprintln!("FAIL {}: measured {:e}, threshold {:e}", f.name, f.measured, f.threshold);
            }
            return Ok(if report.passed { 0 } else { 3 });
        }
    };
    let sc = load(common)?;
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from(&sc.name));
    let manifest = run::run_scenario(&sc, &outputs, &dir, guard)?;
    for f in &manifest.files {
        println!("{}", dir.join(&f.file).display());
    }
    println!("{}", dir.join(run::MANIFEST).display());
    Ok(0)
}
