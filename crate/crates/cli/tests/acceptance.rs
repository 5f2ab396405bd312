//! End-to-end acceptance run. Prints one PASS or FAIL line per criterion
//! and exits nonzero when any criterion fails.
//!
//! Every threshold the criteria use is a named constant below.

use maxavg::experiments::{linear_fit, max_halving_growth, GmRow};
use maxavg::kernels::{composition_matrix, ttstar_matrix, Assembly};
use maxavg::normest::PowerOptions;
use maxavg::oracle::{eigen_extremes, geometric_tolerance, oracle_selector, power_vs_dense, random_psd};
use maxavg::verify::{run_checks, CHECKS};
use maxavg_cli::commands::{cmd_avs, cmd_gm, cmd_lacunary, cmd_logn, cmd_sharpness, cmd_verify};
use maxavg_cli::config::{AvsSpec, GmSpec, OracleSpec, PowerSpec, ScaleSpec, SharpnessSpec};
use maxavg_cli::{Command, ExperimentConfig, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Raster side of the dense kernel criteria.
const DENSE_N: usize = 16;
/// Selectors drawn for the kernel and spectral criteria.
const DENSE_SEEDS: [u64; 3] = [1, 2, 3];
/// Relative Frobenius gap between the pixelated kernel and `T T*`.
const KERNEL_TOL: f64 = 1e-9;
/// Geometric assembly gap, as a multiple of `spacing / smallest side`.
const GEOMETRIC_FACTOR: f64 = 3.0;
const KERNEL_SECONDS: f64 = 60.0;
/// Smallest eigenvalue allowed, relative to the largest.
const PSD_TOL: f64 = 1e-8;
/// Power iteration against the dense eigensolver, relative.
const SPECTRAL_TOL: f64 = 1e-6;
/// Random 50 x 50 PSD oracles.
const PSD_ORACLES: u64 = 5;
const POWER: PowerOptions = PowerOptions { tol: 1e-12, max_iter: 20_000, precheck: true };
/// The pointwise checks with their pass rule taken from the catalog bounds.
const POINTWISE: [&str; 9] =
    ["eq5", "eq6", "eq7", "geom10", "tt11", "thm2_18", "case1_20", "case2_23", "gg24"];
const POINTWISE_SECONDS: f64 = 300.0;
/// Raster side and configuration count of the sector-decomposition sweep.
const AVS_N: usize = 256;
const AVS_CONFIGS: usize = 20;
const AVS_SEEDS: [u64; 2] = [0, 1];
/// 1.25 times the largest implied constant of the first seed-0 run (0.1684).
const AVS_BOUND: f64 = 1.25 * 0.1684;
const SWEEP_N: usize = 256;
const SWEEP_COUNTS: [usize; 6] = [2, 4, 8, 16, 32, 64];
/// Smallest coefficient of determination of `estimate ~ a log N + b`.
const LOGN_R2: f64 = 0.9;
/// Largest relative growth over the last lacunary doubling.
const LACUNARY_GROWTH: f64 = 0.10;
/// Relative slack when testing that estimates do not decrease.
const MONOTONE_SLACK: f64 = 1e-9;
const SWEEP_SECONDS: f64 = 600.0;
/// Largest growth of the kakeya-fan ratios per halving of `δ₀`.
const GM_GROWTH: f64 = 1.10;
/// Sharpness fit over `δ ∈ {2^-2, ..., 2^-6}`.
const SHARPNESS_DELTAS: [f64; 5] = [0.25, 0.125, 0.0625, 0.03125, 0.015625];
const SHARPNESS_R2: f64 = 0.9;
const GM_SHARPNESS_SECONDS: f64 = 600.0;
/// Raster side of the determinism reruns.
const DETERMINISM_N: usize = 64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn column(table: &Table, index: usize) -> Vec<f64> {
    table.rows.iter().map(|r| r.split(',').nth(index).expect("column").parse().expect("number")).collect()
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0] * (1.0 - MONOTONE_SLACK))
}

fn kernel_consistency() -> anyhow::Result<Outcome> {
    let clock = Instant::now();
    let (mut worst_pix, mut worst_geo) = (0.0f64, 0.0f64);
    for seed in DENSE_SEEDS {
        let phi = oracle_selector(DENSE_N, seed)?;
        let pix = ttstar_matrix(&phi, Assembly::Pixelated)?;
        let comp = composition_matrix(&phi.operator())?;
        worst_pix = worst_pix.max(pix.relative_gap(&comp));
        let geo = ttstar_matrix(&phi, Assembly::Geometric)?;
        // geometric_tolerance is 3 · spacing / smallest side
        let allowed = geometric_tolerance(&phi) * GEOMETRIC_FACTOR / 3.0;
        worst_geo = worst_geo.max(geo.relative_gap(&pix) / allowed);
    }
    let secs = clock.elapsed().as_secs_f64();
    let pass = worst_pix <= KERNEL_TOL && worst_geo <= 1.0 && secs <= KERNEL_SECONDS;
    Ok(outcome(
        pass,
        format!(
            "pixelated gap {worst_pix:.3e} (tol {KERNEL_TOL:e}), geometric gap {worst_geo:.3} of its tolerance, {secs:.1}s"
        ),
    ))
}

fn spectral_soundness() -> anyhow::Result<Outcome> {
    let mut worst_psd = 0.0f64;
    let mut worst_power = 0.0f64;
    for seed in DENSE_SEEDS {
        let phi = oracle_selector(DENSE_N, seed)?;
        let k = ttstar_matrix(&phi, Assembly::Pixelated)?;
        let symmetric = k.asymmetry() <= PSD_TOL;
        let m = k.to_dmatrix();
        let (lo, hi) = eigen_extremes(&m);
        worst_psd = worst_psd.max(if symmetric { (-lo / hi).max(0.0) } else { f64::INFINITY });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start: Vec<f64> = (0..m.nrows()).map(|_| rng.gen_range(0.5..1.5)).collect();
        worst_power = worst_power.max(power_vs_dense(&m, &start, &POWER)?);
    }
    for seed in 0..PSD_ORACLES {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let m = random_psd(50, &mut rng);
        let start: Vec<f64> = (0..50).map(|_| rng.gen_range(0.5..1.5)).collect();
        worst_power = worst_power.max(power_vs_dense(&m, &start, &POWER)?);
    }
    let pass = worst_psd <= PSD_TOL && worst_power <= SPECTRAL_TOL;
    Ok(outcome(
        pass,
        format!("min eigenvalue -{worst_psd:.2e}·‖K‖, power vs dense {worst_power:.2e} (tol {SPECTRAL_TOL:e})"),
    ))
}

fn pointwise_suite() -> anyhow::Result<Outcome> {
    let cfg = ExperimentConfig::default();
    let names: Vec<String> = CHECKS.iter().map(|c| c.to_string()).collect();
    let clock = Instant::now();
    let first = run_checks(&names, &cfg.verify.config(), cfg.seed)?;
    let secs = clock.elapsed().as_secs_f64();
    let second = run_checks(&names, &cfg.verify.config(), cfg.seed)?;
    let reproducible = first.iter().zip(&second).all(|(a, b)| a.csv_row() == b.csv_row() && a.location == b.location);
    let mut pass = reproducible && secs <= POINTWISE_SECONDS;
    let mut parts = Vec::new();
    for r in first.iter().filter(|r| POINTWISE.contains(&r.name.as_str())) {
        let exact = r.name != "eq6" || r.bound == 1.0;
        pass &= r.pass && r.max_ratio.is_finite() && exact;
        parts.push(format!("{}={:.4}/{:.4}", r.name, r.max_ratio, r.bound));
    }
    Ok(outcome(
        pass,
        format!("{}; reproducible {reproducible}; full catalog {secs:.1}s", parts.join(" ")),
    ))
}

fn sector_constant() -> anyhow::Result<Outcome> {
    let mut parts = Vec::new();
    let mut pass = true;
    for seed in AVS_SEEDS {
        let cfg = ExperimentConfig {
            seed,
            grid: AVS_N,
            avs: AvsSpec { configs: AVS_CONFIGS, ..AvsSpec::default() },
            ..Default::default()
        };
        let clock = Instant::now();
        let table = cmd_avs(&cfg)?;
        let c = column(&table, 4);
        let max = c.iter().copied().fold(0.0f64, f64::max);
        let finite = c.iter().all(|v| v.is_finite()) && c.len() == AVS_CONFIGS;
        pass &= finite && max <= AVS_BOUND;
        parts.push(format!("seed {seed}: max C {max:.4} ({:.0}s)", clock.elapsed().as_secs_f64()));
    }
    Ok(outcome(pass, format!("{} against bound {AVS_BOUND:.4}", parts.join(", "))))
}

fn log_n_growth() -> anyhow::Result<Outcome> {
    let mut cfg = ExperimentConfig { grid: SWEEP_N, ..Default::default() };
    cfg.logn.counts = SWEEP_COUNTS.to_vec();
    cfg.lacunary.counts = SWEEP_COUNTS.to_vec();
    let clock = Instant::now();
    let uniform = column(&cmd_logn(&cfg)?, 1);
    let lacunary = column(&cmd_lacunary(&cfg)?, 1);
    let secs = clock.elapsed().as_secs_f64();
    let logs: Vec<f64> = SWEEP_COUNTS.iter().map(|&n| (n as f64).ln()).collect();
    let (slope, _, r2) = linear_fit(&logs, &uniform);
    let last = lacunary.len() - 1;
    let growth = (lacunary[last] - lacunary[last - 1]) / lacunary[last - 1];
    let pass = nondecreasing(&uniform)
        && r2 >= LOGN_R2
        && growth <= LACUNARY_GROWTH
        && secs <= SWEEP_SECONDS;
    Ok(outcome(
        pass,
        format!(
            "uniform {uniform:.4?} fit slope {slope:.4} R² {r2:.4}; lacunary {lacunary:.4?} last growth {:.2}%; {secs:.0}s",
            100.0 * growth
        ),
    ))
}

fn grand_maximal_and_sharpness() -> anyhow::Result<Outcome> {
    let cfg = ExperimentConfig { grid: SWEEP_N, ..Default::default() };
    let clock = Instant::now();
    let gm = cmd_gm(&cfg)?;
    let rows: Vec<GmRow> = gm
        .rows
        .iter()
        .map(|r| {
            let p: Vec<&str> = r.split(',').collect();
            GmRow { delta0: p[0].parse().unwrap(), family: p[1].to_string(), ratio: p[2].parse().unwrap() }
        })
        .collect();
    let (growth, at) = max_halving_growth(&rows, "kakeya-fan");
    let gm_pass = growth <= GM_GROWTH;

    let mut sharp_cfg = cfg.clone();
    sharp_cfg.sharpness.deltas = SHARPNESS_DELTAS.to_vec();
    let sharp = column(&cmd_sharpness(&sharp_cfg)?, 1);
    let secs = clock.elapsed().as_secs_f64();
    let logs: Vec<f64> = SHARPNESS_DELTAS.iter().map(|d| (1.0 / d).ln()).collect();
    let (slope, _, r2) = linear_fit(&logs, &sharp);
    let sharp_pass = slope > 0.0 && r2 >= SHARPNESS_R2;
    Ok(outcome(
        gm_pass && sharp_pass && secs <= GM_SHARPNESS_SECONDS,
        format!(
            "grand maximal plateau {} (largest kakeya-fan growth {growth:.4} at {at}); sharpness {} (estimates {sharp:.4?}, slope {slope:.4}, R² {r2:.4}); {secs:.0}s",
            if gm_pass { "pass" } else { "fail" },
            if sharp_pass { "pass" } else { "fail" },
        ),
    ))
}

/// A reduced configuration in which every command runs in seconds.
fn determinism_config(out: &std::path::Path) -> ExperimentConfig {
    let scales = ScaleSpec { levels: 3, ecc_levels: 4, ..ScaleSpec::default() };
    let power = PowerSpec { rounds: 3, ..PowerSpec::default() };
    let mut cfg = ExperimentConfig {
        seed: 5,
        out: out.to_path_buf(),
        grid: DETERMINISM_N,
        threads: 0,
        scales: scales.clone(),
        power: power.clone(),
        ..Default::default()
    };
    cfg.logn.counts = vec![1, 2, 4, 8];
    cfg.lacunary.counts = vec![1, 2, 4, 8];
    cfg.avs = AvsSpec { configs: 3, max_dirs: 4, scales, power: power.clone() };
    cfg.gm = GmSpec { delta0s: vec![0.25, 0.125, 0.0625], samples_per_family: 1, ..GmSpec::default() };
    cfg.sharpness = SharpnessSpec { deltas: vec![0.5, 0.25, 0.125], directions: 8, levels: 3, power, ..SharpnessSpec::default() };
    cfg.verify.grid = DETERMINISM_N;
    cfg.oracle = OracleSpec { mc_pairs: 1000, ..OracleSpec::default() };
    cfg
}

fn determinism() -> anyhow::Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let cfg = determinism_config(dir.path());
    let config_path = dir.path().join("config.toml");
    std::fs::write(&config_path, cfg.to_toml()?)?;
    let mut differing = Vec::new();
    for command in Command::ALL {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("run{run}"));
            let status = std::process::Command::new(env!("CARGO_BIN_EXE_maxavg"))
                .arg(command.name())
                .arg("--config")
                .arg(&config_path)
                .arg("--out")
                .arg(&out)
                .output()?;
            if !matches!(status.status.code(), Some(0) | Some(1)) {
                anyhow::bail!("{} failed: {}", command.name(), String::from_utf8_lossy(&status.stderr));
            }
            outputs.push(std::fs::read(out.join(format!("{}.csv", command.name())))?);
        }
        if outputs[0] != outputs[1] {
            differing.push(command.name());
        }
    }
    // the full-scale verify table is compared as well
    let full = ExperimentConfig::default();
    let same_verify = cmd_verify(&full)?.to_csv() == cmd_verify(&full)?.to_csv();
    Ok(outcome(
        differing.is_empty() && same_verify,
        format!(
            "{} commands rerun at n = {DETERMINISM_N}, differing: {:?}; default verify identical: {same_verify}",
            Command::ALL.len(),
            differing
        ),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> anyhow::Result<Outcome>); 7] = [
        ("kernel consistency", kernel_consistency),
        ("spectral soundness", spectral_soundness),
        ("pointwise inequality suite", pointwise_suite),
        ("sector decomposition constant", sector_constant),
        ("log N growth and lacunary plateau", log_n_growth),
        ("grand maximal plateau and sharpness", grand_maximal_and_sharpness),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let result = run().unwrap_or_else(|e| outcome(false, format!("error: {e:#}")));
        if !result.pass {
            failures += 1;
        }
        println!("{} {name}: {}", if result.pass { "PASS" } else { "FAIL" }, result.detail);
    }
    println!("{failures} of {} criteria failed", criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
