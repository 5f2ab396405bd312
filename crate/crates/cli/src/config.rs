//! Experiment configuration: a TOML file whose every key has a default.

use anyhow::{Context, Result};
use maxavg::normest::{MaximalNormOptions, PowerOptions};
use maxavg::operators::ScaleGrid;
use maxavg::oracle::OracleConfig;
use maxavg::verify::{VerifyConfig, CHECKS};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Dyadic scale grid: heights `max_height · 2^-k` for `k < levels`,
/// eccentricities `2^-k` for `k < ecc_levels`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleSpec {
    pub max_height: f64,
    pub levels: u32,
    pub ecc_levels: u32,
    /// Odd number of translates per rectangle axis.
    pub offsets_per_axis: usize,
}

impl Default for ScaleSpec {
    fn default() -> Self {
        Self { max_height: 2.0 / 3.0, levels: 5, ecc_levels: 8, offsets_per_axis: 3 }
    }
}

impl ScaleSpec {
    pub fn grid(&self) -> Result<ScaleGrid> {
        if self.ecc_levels == 0 {
            anyhow::bail!("ecc_levels must be positive");
        }
        Ok(ScaleGrid::dyadic(self.max_height, self.levels, 0..=self.ecc_levels - 1, self.offsets_per_axis)?)
    }

    /// Heights alone, longest first.
    pub fn heights(&self) -> Vec<f64> {
        (0..self.levels).map(|k| self.max_height / f64::from(1u32 << k)).collect()
    }
}

/// Alternating linearization and power iteration settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerSpec {
    pub rounds: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Test self-adjointness before the first power iteration.
    pub precheck: bool,
}

impl Default for PowerSpec {
    fn default() -> Self {
        Self { rounds: 6, tol: 1e-6, max_iter: 200, precheck: false }
    }
}

impl PowerSpec {
    pub fn options(&self, seed: u64) -> MaximalNormOptions {
        MaximalNormOptions {
            rounds: self.rounds,
            power: PowerOptions { tol: self.tol, max_iter: self.max_iter, precheck: self.precheck },
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LognSpec {
    pub counts: Vec<usize>,
}

impl Default for LognSpec {
    fn default() -> Self {
        Self { counts: vec![2, 4, 8, 16, 32, 64] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LacunarySpec {
    pub ratio: f64,
    pub counts: Vec<usize>,
}

impl Default for LacunarySpec {
    fn default() -> Self {
        Self { ratio: 0.5, counts: vec![2, 4, 8, 16, 32, 64] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AvsSpec {
    pub configs: usize,
    /// Largest slope count of a random configuration (at least 3).
    pub max_dirs: usize,
    pub scales: ScaleSpec,
    pub power: PowerSpec,
}

impl Default for AvsSpec {
    fn default() -> Self {
        Self {
            configs: 20,
            max_dirs: 6,
            scales: ScaleSpec { levels: 4, ecc_levels: 5, ..ScaleSpec::default() },
            power: PowerSpec { rounds: 2, tol: 1e-3, max_iter: 30, precheck: false },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GmSpec {
    /// Truncation points `δ₀`, each in `(0, 1/4]`.
    pub delta0s: Vec<f64>,
    /// Number of equally spaced slopes in `(0, max_slope]`.
    pub slopes: usize,
    pub max_slope: f64,
    pub max_height: f64,
    pub levels: u32,
    pub offsets_per_axis: usize,
    pub samples_per_family: usize,
}

impl Default for GmSpec {
    fn default() -> Self {
        Self {
            delta0s: dyadic_list(2..=6),
            slopes: 16,
            max_slope: 0.1,
            max_height: 2.0 / 3.0,
            levels: 6,
            offsets_per_axis: 3,
            samples_per_family: 3,
        }
    }
}

impl GmSpec {
    pub fn slope_list(&self) -> Vec<f64> {
        (1..=self.slopes).rev().map(|k| self.max_slope * k as f64 / self.slopes as f64).collect()
    }

    pub fn heights(&self) -> Vec<f64> {
        (0..self.levels).map(|k| self.max_height / f64::from(1u32 << k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharpnessSpec {
    pub deltas: Vec<f64>,
    /// Uniform slope count on `[0, 1]`.
    pub directions: usize,
    pub max_height: f64,
    pub levels: u32,
    pub offsets_per_axis: usize,
    pub power: PowerSpec,
}

impl Default for SharpnessSpec {
    fn default() -> Self {
        Self {
            deltas: dyadic_list(1..=6),
            directions: 64,
            max_height: 2.0 / 3.0,
            levels: 5,
            offsets_per_axis: 3,
            power: PowerSpec { rounds: 4, ..PowerSpec::default() },
        }
    }
}

impl SharpnessSpec {
    pub fn heights(&self) -> Vec<f64> {
        (0..self.levels).map(|k| self.max_height / f64::from(1u32 << k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySpec {
    pub checks: Vec<String>,
    pub grid: usize,
    pub dense_grid: usize,
    pub samples_per_family: usize,
    pub pair_samples: usize,
    pub composition_samples: usize,
    pub thm1_configs: usize,
    /// Per-check bound overrides.
    pub bounds: BTreeMap<String, f64>,
}

impl Default for VerifySpec {
    fn default() -> Self {
        let d = VerifyConfig::default();
        Self {
            checks: CHECKS.iter().map(|c| c.to_string()).collect(),
            grid: d.n,
            dense_grid: d.dense_n,
            samples_per_family: d.samples_per_family,
            pair_samples: d.pair_samples,
            composition_samples: d.composition_samples,
            thm1_configs: d.thm1_configs,
            bounds: d.bounds,
        }
    }
}

impl VerifySpec {
    pub fn config(&self) -> VerifyConfig {
        VerifyConfig {
            n: self.grid,
            dense_n: self.dense_grid,
            samples_per_family: self.samples_per_family,
            pair_samples: self.pair_samples,
            composition_samples: self.composition_samples,
            thm1_configs: self.thm1_configs,
            bounds: self.bounds.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSpec {
    pub grid: usize,
    pub mc_pairs: usize,
    pub mc_samples: usize,
    pub fast_pairs: usize,
}

impl Default for OracleSpec {
    fn default() -> Self {
        let d = OracleConfig::default();
        Self { grid: d.n, mc_pairs: d.mc_pairs, mc_samples: d.mc_samples, fast_pairs: d.fast_pairs }
    }
}

impl OracleSpec {
    pub fn config(&self, seed: u64) -> OracleConfig {
        OracleConfig {
            n: self.grid,
            seed,
            mc_pairs: self.mc_pairs,
            mc_samples: self.mc_samples,
            fast_pairs: self.fast_pairs,
        }
    }
}

/// Everything a command needs; the file form is TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Directory the CSV files are written to.
    pub out: PathBuf,
    /// Raster side for the norm experiments.
    pub grid: usize,
    /// Worker threads; 0 picks one per core.
    pub threads: usize,
    /// Fill the `seconds` column with wall-clock time. Off by default so
    /// that reruns are byte-identical.
    pub timing: bool,
    pub scales: ScaleSpec,
    pub power: PowerSpec,
    pub logn: LognSpec,
    pub lacunary: LacunarySpec,
    pub avs: AvsSpec,
    pub gm: GmSpec,
    pub sharpness: SharpnessSpec,
    pub verify: VerifySpec,
    pub oracle: OracleSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out: PathBuf::from("out"),
            grid: 256,
            threads: 0,
            timing: false,
            scales: ScaleSpec::default(),
            power: PowerSpec::default(),
            logn: LognSpec::default(),
            lacunary: LacunarySpec::default(),
            avs: AvsSpec::default(),
            gm: GmSpec::default(),
            sharpness: SharpnessSpec::default(),
            verify: VerifySpec::default(),
            oracle: OracleSpec::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// `[2^-k for k in exps]`.
fn dyadic_list(exps: std::ops::RangeInclusive<u32>) -> Vec<f64> {
    exps.map(|k| 1.0 / f64::from(1u32 << k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn customized_config_round_trips() {
        let mut cfg = ExperimentConfig { seed: 17, grid: 96, timing: true, ..Default::default() };
        cfg.verify.bounds.insert("eq5".into(), 3.5);
        cfg.verify.checks = vec!["eq6".into(), "tt11".into()];
        cfg.gm.delta0s = vec![0.25, 0.1];
        cfg.power.tol = 1.0 / 3.0;
        let text = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn missing_keys_take_defaults() {
        let cfg = ExperimentConfig::from_toml("seed = 4\n[logn]\ncounts = [1, 2]\n").unwrap();
        assert_eq!(cfg.seed, 4);
        assert_eq!(cfg.logn.counts, vec![1, 2]);
        assert_eq!(cfg.lacunary, LacunarySpec::default());
        assert_eq!(cfg.grid, 256);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml("sead = 4\n").is_err());
        assert!(ExperimentConfig::from_toml("[logn]\ncount = [1]\n").is_err());
    }

    #[test]
    fn default_scales_match_the_documented_grid() {
        let g = ScaleSpec::default().grid().unwrap();
        assert_eq!(g.heights.len(), 5);
        assert_eq!(g.eccs.len(), 8);
        assert!((g.heights[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(GmSpec::default().slope_list().len(), 16);
        assert!((GmSpec::default().slope_list()[0] - 0.1).abs() < 1e-15);
    }
}
