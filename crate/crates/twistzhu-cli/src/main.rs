//! Batch command-line front end: builds contexts from flags or a JSON
//! config file, runs identity/axiom suites, and emits schema-versioned
//! JSON reports.
//!
//! Exit codes: 0 success, 2 verification failure, 3 resource/cutoff
//! failure, 64 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twistzhu::{Error, Report, RunConfig};

#[derive(Parser)]
#[command(name = "twistzhu", version, about = "exact twisted Zhu algebra and bimodule verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the combinatorial identity suite up to a maximum telescope length.
    Identities {
        #[arg(long)]
        lmax: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the level-n quotients at a weight cutoff and report dimensions
    /// and structure constants.
    Build(RunArgs),
    /// Run verification suites and aggregate pass/fail verdicts.
    Verify(RunArgs),
    /// Re-render a stored report.
    Report {
        #[arg(long, name = "in")]
        input: PathBuf,
        #[arg(long, default_value = "table")]
        format: String,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Automorphism tag: id or theta.
    #[arg(long)]
    aut: Option<String>,
    /// Level index, as a rational ("3/2") or split form ("l=1,i=1,T=2").
    #[arg(long)]
    n: Option<String>,
    /// Weight cutoff for the ambient window.
    #[arg(long)]
    cutoff: Option<u32>,
    /// Suite names (verify only); repeatable; "all" selects every suite.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Seed for the sampled checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker pool size (0 = library default).
    #[arg(long)]
    threads: Option<usize>,
    /// Maximum telescope length for the identity suite.
    #[arg(long)]
    lmax: Option<u32>,
    /// Verify the product layer during build.
    #[arg(long)]
    verify: bool,
    /// JSON config file with the same keys as the flags; flags override.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report JSON here (stdout summary is printed either way).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_config(args: &RunArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &args.config {
        None => RunConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("config {path:?}: {e}")))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::InvalidArgument(format!("config {path:?}: {e}")))?
        }
    };
    if let Some(aut) = &args.aut {
        cfg.aut = aut.clone();
    }
    if let Some(n) = &args.n {
        cfg.n = n.clone();
    }
    if let Some(c) = args.cutoff {
        cfg.cutoff = c;
    }
    if !args.suites.is_empty() {
        cfg.suites = args.suites.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    if let Some(l) = args.lmax {
        cfg.lmax = l;
    }
    if args.verify {
        cfg.verify = true;
    }
    // validate eagerly so bad input is a usage error before any computation
    cfg.aut_tag()?;
    cfg.mod_index()?;
    Ok(cfg)
}

fn emit(report: &Report, out: &Option<PathBuf>) -> Result<(), Error> {
    if let Some(path) = out {
        std::fs::write(path, report.to_json())
            .map_err(|e| Error::InvalidArgument(format!("writing {path:?}: {e}")))?;
    }
    for (name, suite) in &report.suites {
        println!("{name}: {} ({} checks)", suite.verdict(), suite.checks);
        for f in suite.failures.iter().take(3) {
            println!("  witness: {f}");
        }
    }
    if let Some(ids) = &report.identities {
        let ok = ids.telescoping_unit.iter().all(|&b| b)
            && ids.binom_vanish_ok
            && ids.bivariate_cancellation.iter().all(|&b| b);
        println!("identities: {} (lmax={})", if ok { "pass" } else { "fail" }, ids.lmax);
    }
    for b in &report.builds {
        println!(
            "build g={} n={} cutoff={} dim_upper={} generators={}",
            b.g, b.n, b.cutoff, b.dim_upper, b.generators
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Identities { lmax, out } => {
            if lmax < 0 {
                return Err(Error::InvalidArgument("lmax must be nonnegative".into()));
            }
            let report = twistzhu::run_identities(lmax as u32);
            emit(&report, &out)?;
            Ok(if report.all_pass() { 0 } else { 2 })
        }
        Command::Build(args) => {
            let cfg = load_config(&args)?;
            let report = twistzhu::run_build(&cfg)?;
            emit(&report, &args.out)?;
            Ok(if report.all_pass() { 0 } else { 2 })
        }
        Command::Verify(args) => {
            let cfg = load_config(&args)?;
            if cfg.suites.is_empty() {
                return Err(Error::InvalidArgument(
                    "verify needs at least one --suite (or \"all\")".into(),
                ));
            }
            let report = twistzhu::run_verify(&cfg)?;
            emit(&report, &args.out)?;
            Ok(if report.all_pass() { 0 } else { 2 })
        }
        Command::Report { input, format } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::InvalidArgument(format!("reading {input:?}: {e}")))?;
            let report: Report = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidArgument(format!("parsing {input:?}: {e}")))?;
            match format.as_str() {
                "json" => println!("{}", report.to_json()),
                "table" => print!("{}", report.to_table()),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown format {other:?} (expected json|table)"
                    )))
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::CutoffOverflow { .. } | Error::UncertifiedResidue { .. } => 3,
                Error::InvalidArgument(_) | Error::InvalidModeIndex { .. } | Error::SectorMismatch(_) => 64,
                Error::ChainContainment(_) => 2,
            };
            ExitCode::from(code)
        }
    }
}
