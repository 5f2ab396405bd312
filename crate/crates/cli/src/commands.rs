//! One function per subcommand, each producing a CSV table.

use crate::config::ExperimentConfig;
use anyhow::{bail, Result};
use maxavg::experiments::{
    adversarial_fields, avs_sweep, direction_sweep, eccentricity_sweep, grand_maximal_ratios,
    SweepKind,
};
use maxavg::families::AngleRange;
use maxavg::geometry::{AnchorRule, DirectionKind};
use maxavg::oracle::run_oracles;
use maxavg::verify::{run_checks, CSV_HEADER};
use maxavg::DirectionSet;

pub const LOGN_HEADER: &str = "N,norm_est,seconds";
pub const LACUNARY_HEADER: &str = LOGN_HEADER;
pub const AVS_HEADER: &str = "config_id,norm_omega,sup_sector,norm_anchor,implied_C";
pub const GM_HEADER: &str = "delta0,family,ratio";
pub const SHARPNESS_HEADER: &str = "delta,norm_est";
pub const VERIFY_HEADER: &str = CSV_HEADER;
pub const ORACLE_HEADER: &str = "oracle,deviation,tolerance,pass";

/// Rows of one CSV file plus whether any row records a failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: &'static str,
    pub rows: Vec<String>,
    pub failed: bool,
    /// Human-readable remarks that are not part of the CSV.
    pub notes: Vec<String>,
}

impl Table {
    fn new(header: &'static str, rows: Vec<String>) -> Self {
        Self { header, rows, failed: false, notes: Vec::new() }
    }

    /// Header and rows, each line terminated by a newline.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Logn,
    Lacunary,
    Avs,
    Gm,
    Sharpness,
    Verify,
    Oracle,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Logn,
        Command::Lacunary,
        Command::Avs,
        Command::Gm,
        Command::Sharpness,
        Command::Verify,
        Command::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Logn => "logn",
            Command::Lacunary => "lacunary",
            Command::Avs => "avs",
            Command::Gm => "gm",
            Command::Sharpness => "sharpness",
            Command::Verify => "verify",
            Command::Oracle => "oracle",
        }
    }

    pub fn run(&self, cfg: &ExperimentConfig) -> Result<Table> {
        match self {
            Command::Logn => cmd_logn(cfg),
            Command::Lacunary => cmd_lacunary(cfg),
            Command::Avs => cmd_avs(cfg),
            Command::Gm => cmd_gm(cfg),
            Command::Sharpness => cmd_sharpness(cfg),
            Command::Verify => cmd_verify(cfg),
            Command::Oracle => cmd_oracle(cfg),
        }
    }

    /// Sets the raster side this command reads from the configuration.
    pub fn set_grid(&self, cfg: &mut ExperimentConfig, n: usize) {
        match self {
            Command::Verify => cfg.verify.grid = n,
            Command::Oracle => cfg.oracle.grid = n,
            _ => cfg.grid = n,
        }
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 4 {
        bail!("grid must be at least 4, got {n}");
    }
    Ok(())
}

fn check_counts(counts: &[usize]) -> Result<()> {
    if counts.is_empty() || counts.contains(&0) {
        bail!("direction counts must be a nonempty list of positive integers");
    }
    Ok(())
}

fn sweep(cfg: &ExperimentConfig, kind: SweepKind, counts: &[usize], header: &'static str) -> Result<Table> {
    check_grid(cfg.grid)?;
    check_counts(counts)?;
    let rows = direction_sweep(
        cfg.grid,
        kind,
        counts,
        &cfg.scales.grid()?,
        &cfg.power.options(cfg.seed),
        cfg.timing,
    )?;
    let rows = rows.iter().map(|r| format!("{},{},{}", r.count, r.estimate, r.seconds)).collect();
    Ok(Table::new(header, rows))
}

/// Norm estimates for `uniform(N)` over the configured counts.
pub fn cmd_logn(cfg: &ExperimentConfig) -> Result<Table> {
    sweep(cfg, SweepKind::Uniform, &cfg.logn.counts, LOGN_HEADER)
}

/// Norm estimates for `lacunary(ratio, N)` with every slope an anchor.
pub fn cmd_lacunary(cfg: &ExperimentConfig) -> Result<Table> {
    let ratio = cfg.lacunary.ratio;
    if !(ratio > 0.0 && ratio < 1.0) {
        bail!("lacunary ratio must lie in (0, 1), got {ratio}");
    }
    sweep(cfg, SweepKind::Lacunary(ratio), &cfg.lacunary.counts, LACUNARY_HEADER)
}

/// Implied constants over random sector decompositions.
pub fn cmd_avs(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg.grid)?;
    let spec = &cfg.avs;
    if spec.configs == 0 {
        bail!("avs.configs must be positive");
    }
    let rows = avs_sweep(
        cfg.grid,
        spec.configs,
        spec.max_dirs,
        &spec.scales.grid()?,
        &spec.power.options(cfg.seed),
        cfg.seed,
    )?;
    let rows = rows
        .iter()
        .map(|r| {
            format!("{},{},{},{},{}", r.config_id, r.norm_omega, r.sup_sector, r.norm_anchor, r.implied_c)
        })
        .collect();
    Ok(Table::new(AVS_HEADER, rows))
}

/// Truncated grand maximal ratios for every `δ₀` and test field.
pub fn cmd_gm(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg.grid)?;
    let spec = &cfg.gm;
    if spec.slopes == 0 || !(spec.max_slope > 0.0 && spec.max_slope <= 1.0) {
        bail!("gm needs at least one slope and max_slope in (0, 1]");
    }
    let dirs = DirectionSet::new(DirectionKind::Explicit(spec.slope_list()), AnchorRule::All)?;
    let fields = adversarial_fields(
        cfg.grid,
        spec.samples_per_family.max(1),
        cfg.seed,
        AngleRange::slopes_up_to(spec.max_slope),
    );
    let rows = grand_maximal_ratios(&fields, &spec.delta0s, &dirs, &spec.heights(), spec.offsets_per_axis)?;
    let rows = rows.iter().map(|r| format!("{},{},{}", r.delta0, r.family, r.ratio)).collect();
    Ok(Table::new(GM_HEADER, rows))
}

/// Norm estimates of the fixed-eccentricity maximal operators.
pub fn cmd_sharpness(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg.grid)?;
    let spec = &cfg.sharpness;
    if spec.deltas.iter().any(|d| !(*d > 0.0 && *d <= 1.0)) {
        bail!("sharpness deltas must lie in (0, 1]");
    }
    let dirs = DirectionSet::uniform(spec.directions)?;
    let rows = eccentricity_sweep(
        cfg.grid,
        &spec.deltas,
        &dirs,
        &spec.heights(),
        spec.offsets_per_axis,
        &spec.power.options(cfg.seed),
    )?;
    let rows = rows.iter().map(|r| format!("{},{}", r.delta, r.estimate)).collect();
    Ok(Table::new(SHARPNESS_HEADER, rows))
}

/// The named checks; the table fails when any check does.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg.verify.grid)?;
    let reports = run_checks(&cfg.verify.checks, &cfg.verify.config(), cfg.seed)?;
    let mut table = Table::new(VERIFY_HEADER, reports.iter().map(|r| r.csv_row()).collect());
    table.failed = reports.iter().any(|r| !r.pass);
    table.notes = reports.iter().map(|r| format!("{}: max at {}", r.name, r.location)).collect();
    Ok(table)
}

/// Brute-force oracle comparisons; the table fails when any oracle does.
pub fn cmd_oracle(cfg: &ExperimentConfig) -> Result<Table> {
    check_grid(cfg.oracle.grid)?;
    let rows = run_oracles(&cfg.oracle.config(cfg.seed))?;
    let mut table = Table::new(
        ORACLE_HEADER,
        rows.iter().map(|r| format!("{},{},{},{}", r.name, r.deviation, r.tolerance, r.pass())).collect(),
    );
    table.failed = rows.iter().any(|r| !r.pass());
    Ok(table)
}
