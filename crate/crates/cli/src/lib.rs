//! Experiment harness for the `maxavg` library: configuration, the seven
//! subcommands and CSV output.

pub mod commands;
pub mod config;

pub use commands::{Command, Table};
pub use config::ExperimentConfig;

use anyhow::{Context, Result};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit status for a run whose checks all pass.
pub const EXIT_OK: u8 = 0;
/// Exit status when a verification or oracle check fails.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for unusable arguments or configuration.
pub const EXIT_BAD_INVOCATION: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "maxavg", version, about = "Directional maximal operator experiments")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML configuration file; missing keys take their defaults.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "INT")]
    pub seed: Option<u64>,
    /// Directory for the CSV output.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Raster side used by this command.
    #[arg(long, value_name = "INT")]
    pub grid: Option<usize>,
    /// Worker threads, 0 for one per core.
    #[arg(long, value_name = "INT")]
    pub threads: Option<usize>,
    /// Checks to run for `verify`, replacing the configured list.
    #[arg(long = "check", value_name = "NAME")]
    pub checks: Vec<String>,
}

impl Cli {
    /// The configuration file (or defaults) with the flags applied on top.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(grid) = self.grid {
            self.command.set_grid(&mut cfg, grid);
        }
        if let Some(threads) = self.threads {
            cfg.threads = threads;
        }
        if !self.checks.is_empty() {
            cfg.verify.checks = self.checks.clone();
        }
        Ok(cfg)
    }
}

/// Runs `command` on a pool of `cfg.threads` workers.
pub fn execute(command: Command, cfg: &ExperimentConfig) -> Result<Table> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    pool.install(|| command.run(cfg))
}

/// Writes `<out>/<command>.csv` and returns its path.
pub fn write_table(command: Command, cfg: &ExperimentConfig, table: &Table) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let path = cfg.out.join(format!("{}.csv", command.name()));
    std::fs::write(&path, table.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Parses `args`, runs the command and maps the outcome to an exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_BAD_INVOCATION } else { EXIT_OK });
        }
    };
    let outcome = cli.resolve().and_then(|cfg| {
        let table = execute(cli.command, &cfg)?;
        let path = write_table(cli.command, &cfg, &table)?;
        Ok((table, path))
    });
    match outcome {
        Ok((table, path)) => {
            print!("{}", table.to_csv());
            for note in &table.notes {
                eprintln!("{note}");
            }
            eprintln!("wrote {}", path.display());
            ExitCode::from(if table.failed { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_BAD_INVOCATION)
        }
    }
}
