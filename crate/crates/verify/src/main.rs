use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charsums::make_field;
use charsums_verify::gen::{gen_poly, parse_constraint_spec, trial_rng};
use charsums_verify::identities::{self, IdentityReport};
use charsums_verify::output::{write_csv, write_file};
use charsums_verify::{run, ExperimentConfig, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "charsums-verify",
    version,
    about = "Brute-force character sums against Weil-type bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Overrides the enumeration cap.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Output file; `.json` selects JSON, anything else CSV. Defaults to CSV on stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write 0 in the seconds column so reruns are byte-identical.
    #[arg(long, global = true)]
    zero_time: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment config.
    Run { config: PathBuf },
    /// Check one of the underlying identities exhaustively.
    CheckIdentity { kind: Identity },
    /// Print a random polynomial, e.g. `gen p=13,d=3,splits,roots_sum_zero`.
    Gen { constraints: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Gauss,
    Counting,
    DoubleSum,
    Descent,
}

fn run_config(cli: &Cli, path: &Path) -> Result<bool> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(cap) = cli.cap {
        cfg.cap = cap;
    }
    let rows = run(&cfg)?;
    match &cli.out {
        Some(path) => write_file(&rows, path, cli.zero_time)?,
        None => write_csv(&rows, std::io::stdout().lock(), cli.zero_time)?,
    }
    let counted = rows.iter().filter(|r| r.applicable).count();
    let failed = rows.iter().filter(|r| !r.ok()).count();
    eprintln!("{} rows, {counted} applicable, {failed} failed", rows.len());
    Ok(failed == 0)
}

fn check_identity(cli: &Cli, kind: Identity) -> Result<bool> {
    let seed = cli.seed.unwrap_or(0);
    let rep: IdentityReport = match kind {
        Identity::Gauss => identities::gauss(100)?,
        Identity::Counting => identities::counting(10_000)?,
        Identity::DoubleSum => identities::double_sum(seed, 50, &[5, 7], &[1, 2])?,
        Identity::Descent => identities::descent(seed, 20)?,
    };
    for f in &rep.failures {
        eprintln!("  {f}");
    }
    println!(
        "{}: {} checked, {} failed, max error {:.3e}",
        rep.name,
        rep.checked,
        rep.failures.len(),
        rep.max_error
    );
    Ok(rep.pass())
}

fn gen(cli: &Cli, spec: &str) -> Result<bool> {
    let (p, s, d, c) = parse_constraint_spec(spec)?;
    let k = make_field(p, s, 0)?;
    let g = gen_poly(&k, d, &c, &mut trial_rng(cli.seed.unwrap_or(0), d, 0))?;
    println!("{}", g.to_text());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Run { config } => run_config(&cli, config),
        Cmd::CheckIdentity { kind } => check_identity(&cli, *kind),
        Cmd::Gen { constraints } => gen(&cli, constraints),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
