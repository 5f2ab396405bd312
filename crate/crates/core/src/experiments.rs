//! Norm sweeps over growing direction sets, the sector-decomposition sweep,
//! the truncated grand maximal ratios, and the eccentricity sweep.
//!
//! Every routine is deterministic in its inputs; wall-clock time is measured
//! only when asked for, so reruns can produce identical rows.

use crate::error::{Error, Result};
use crate::families::{ball_at, kakeya_fan, sample, AngleRange, FamilyKind};
use crate::geometry::{AnchorRule, DirectionKind, DirectionSet, Point};
use crate::grid::GridField;
use crate::normest::{estimate_maximal_norm, MaximalNormOptions, NormEstimate};
use crate::operators::{grand_maximal, DirectionFilter, RectFamily, ScaleGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Fixed concentrated starting functions: a small disk at the center and a
/// fan of thin strips over slopes in `[0, max_slope]`.
pub fn concentrated_starts(n: usize, max_slope: f64) -> Vec<GridField> {
    let sp = 1.0 / n as f64;
    vec![
        ball_at(n, Point::new(0.5, 0.5), 2.0 * sp),
        kakeya_fan(n, 1.0 / 16.0, 0.5, AngleRange::slopes_up_to(max_slope)),
    ]
}

/// Which slope sets a direction sweep walks through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepKind {
    /// `uniform(N)`.
    Uniform,
    /// `lacunary(ratio, N)` with every slope an anchor.
    Lacunary(f64),
}

impl SweepKind {
    pub fn directions(&self, count: usize) -> Result<DirectionSet> {
        match *self {
            SweepKind::Uniform => DirectionSet::uniform(count),
            SweepKind::Lacunary(ratio) => {
                DirectionSet::new(DirectionKind::Lacunary { ratio, n: count }, AnchorRule::All)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub count: usize,
    pub estimate: f64,
    /// Wall-clock seconds, or zero when timing is off.
    pub seconds: f64,
}

/// `‖M_Ω‖` lower bounds for each listed direction count, in order.
///
/// Each estimate also starts from the previous witness, so on nested
/// families the sequence cannot drop because of an unlucky start.
pub fn direction_sweep(
    n: usize,
    kind: SweepKind,
    counts: &[usize],
    scales: &ScaleGrid,
    opts: &MaximalNormOptions,
    timing: bool,
) -> Result<Vec<SweepRow>> {
    let fixed = concentrated_starts(n, 1.0);
    let mut previous: Option<GridField> = None;
    let mut rows = Vec::with_capacity(counts.len());
    for &count in counts {
        let clock = Instant::now();
        let dirs = kind.directions(count)?;
        let family = RectFamily::directional(n, &dirs, scales, DirectionFilter::All)?;
        let mut starts = fixed.clone();
        starts.extend(previous.take());
        let est = estimate_maximal_norm(&family, opts, &starts)?;
        previous = Some(est.witness);
        let seconds = if timing { clock.elapsed().as_secs_f64() } else { 0.0 };
        rows.push(SweepRow { count, estimate: est.value, seconds });
    }
    Ok(rows)
}

/// One sector-decomposition comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct AvsRow {
    pub config_id: usize,
    pub norm_omega: f64,
    pub sup_sector: f64,
    pub norm_anchor: f64,
    /// `(norm_omega − sup_sector) / norm_anchor`, clamped at zero.
    pub implied_c: f64,
}

/// A random slope set of 3 to `max_dirs` slopes with a random nonempty anchor subset.
pub fn random_avs_directions(rng: &mut impl Rng, max_dirs: usize) -> Result<DirectionSet> {
    let count = rng.gen_range(3..=max_dirs.max(3));
    let mut slopes: Vec<f64> = Vec::with_capacity(count);
    while slopes.len() < count {
        // slopes on a 1/256 lattice keep them well separated
        let s = f64::from(rng.gen_range(1..=256u32)) / 256.0;
        if !slopes.contains(&s) {
            slopes.push(s);
        }
    }
    slopes.sort_by(|a, b| b.total_cmp(a));
    let anchor_count = rng.gen_range(1..=count);
    let mut anchors: Vec<f64> = Vec::with_capacity(anchor_count);
    while anchors.len() < anchor_count {
        let s = slopes[rng.gen_range(0..count)];
        if !anchors.contains(&s) {
            anchors.push(s);
        }
    }
    DirectionSet::new(DirectionKind::Explicit(slopes), AnchorRule::Explicit(anchors))
}

/// Estimates for `M_Ω`, every sector operator `M_{Ω_i}`, and `M_{Ω_0}`.
pub fn avs_config(
    n: usize,
    config_id: usize,
    dirs: &DirectionSet,
    scales: &ScaleGrid,
    opts: &MaximalNormOptions,
) -> Result<AvsRow> {
    let fixed = concentrated_starts(n, 1.0);
    let mut witnesses = Vec::new();
    let mut sup_sector = 0.0f64;
    for sector in dirs.sectors() {
        let family = RectFamily::directional(n, dirs, scales, DirectionFilter::Sector(sector))?;
        let est = estimate_maximal_norm(&family, opts, &fixed)?;
        sup_sector = sup_sector.max(est.value);
        witnesses.push(est.witness);
    }
    let anchor_family = RectFamily::directional(n, dirs, scales, DirectionFilter::AnchorsOnly)?;
    let anchor = estimate_maximal_norm(&anchor_family, opts, &fixed)?;
    witnesses.push(anchor.witness.clone());
    let mut starts = fixed;
    starts.extend(witnesses);
    let full = RectFamily::directional(n, dirs, scales, DirectionFilter::All)?;
    let omega = estimate_maximal_norm(&full, opts, &starts)?;
    let implied_c = if anchor.value > 0.0 {
        ((omega.value - sup_sector) / anchor.value).max(0.0)
    } else {
        0.0
    };
    Ok(AvsRow {
        config_id,
        norm_omega: omega.value,
        sup_sector,
        norm_anchor: anchor.value,
        implied_c,
    })
}

/// `configs` random sector decompositions drawn from `seed`.
pub fn avs_sweep(
    n: usize,
    configs: usize,
    max_dirs: usize,
    scales: &ScaleGrid,
    opts: &MaximalNormOptions,
    seed: u64,
) -> Result<Vec<AvsRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<DirectionSet> =
        (0..configs).map(|_| random_avs_directions(&mut rng, max_dirs)).collect::<Result<_>>()?;
    sets.iter()
        .enumerate()
        .map(|(id, dirs)| {
            let o = MaximalNormOptions { seed: opts.seed.wrapping_add(id as u64), ..*opts };
            avs_config(n, id, dirs, scales, &o)
        })
        .collect()
}

/// `{2^-2, ..., δ₀}`: the dyadic eccentricities in `[δ₀, 1/2)`.
pub fn truncated_ecc_list(delta0: f64) -> Result<Vec<f64>> {
    if !(delta0 > 0.0 && delta0 <= 0.25) {
        return Err(Error::InvalidScales(format!("δ₀ = {delta0} must lie in (0, 1/4]")));
    }
    let mut list = Vec::new();
    let mut d = 0.25;
    while d >= delta0 * (1.0 - 1e-12) {
        list.push(d);
        d *= 0.5;
    }
    Ok(list)
}

/// Named test functions: `samples` members of each family.
pub fn adversarial_fields(
    n: usize,
    samples: usize,
    seed: u64,
    angles: AngleRange,
) -> Vec<(String, GridField)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for kind in FamilyKind::ALL {
        for i in 0..samples {
            out.push((format!("{}-{i}", kind.id()), sample(kind, n, &mut rng, angles)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmRow {
    pub delta0: f64,
    pub family: String,
    pub ratio: f64,
}

/// `‖GM₀ f‖ / ‖f‖` for every δ₀ and field, grouped by δ₀ in the listed order.
pub fn grand_maximal_ratios(
    fields: &[(String, GridField)],
    delta0s: &[f64],
    dirs: &DirectionSet,
    heights: &[f64],
    offsets_per_axis: usize,
) -> Result<Vec<GmRow>> {
    let mut rows = Vec::new();
    for &delta0 in delta0s {
        let list = truncated_ecc_list(delta0)?;
        for (name, f) in fields {
            let g = grand_maximal(f, &list, dirs, heights, offsets_per_axis)?;
            rows.push(GmRow { delta0, family: name.clone(), ratio: g.l2_norm() / f.l2_norm() });
        }
    }
    Ok(rows)
}

/// Largest `ratio(δ₀/2) / ratio(δ₀)` over consecutive listed δ₀ and all
/// fields whose id starts with `prefix`, with the attaining field and δ₀.
pub fn max_halving_growth(rows: &[GmRow], prefix: &str) -> (f64, String) {
    let mut worst = (0.0f64, String::new());
    let mut deltas: Vec<f64> = rows.iter().map(|r| r.delta0).collect();
    deltas.dedup();
    for w in deltas.windows(2) {
        for a in rows.iter().filter(|r| r.delta0 == w[0] && r.family.starts_with(prefix)) {
            if let Some(b) = rows.iter().find(|r| r.delta0 == w[1] && r.family == a.family) {
                let g = b.ratio / a.ratio;
                if g > worst.0 {
                    worst = (g, format!("{} delta0={}", a.family, w[1]));
                }
            }
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessRow {
    pub delta: f64,
    pub estimate: f64,
}

/// `‖M_δ‖` lower bounds; heights below the pixel resolution for a given δ are dropped.
pub fn eccentricity_sweep(
    n: usize,
    deltas: &[f64],
    dirs: &DirectionSet,
    heights: &[f64],
    offsets_per_axis: usize,
    opts: &MaximalNormOptions,
) -> Result<Vec<SharpnessRow>> {
    let sp = 1.0 / n as f64;
    let max_slope = dirs.slopes()[0];
    let mut rows = Vec::with_capacity(deltas.len());
    let mut previous: Option<NormEstimate> = None;
    for &delta in deltas {
        let hs: Vec<f64> =
            heights.iter().copied().filter(|h| h * delta >= sp * (1.0 - 1e-12)).collect();
        if hs.is_empty() {
            return Err(Error::Infeasible(format!("no height resolves eccentricity {delta}")));
        }
        let family = RectFamily::eccentricity(n, delta, dirs, &hs, offsets_per_axis)?;
        let mut starts = concentrated_starts(n, max_slope);
        starts.push(kakeya_fan(n, delta, 0.5, AngleRange::slopes_up_to(max_slope)));
        starts.extend(previous.take().map(|p| p.witness));
        let est = estimate_maximal_norm(&family, opts, &starts)?;
        rows.push(SharpnessRow { delta, estimate: est.value });
        previous = Some(est);
    }
    Ok(rows)
}

/// Least-squares line `y = a·x + b` and its coefficient of determination.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r2 = if sxx > 0.0 && syy > 0.0 { sxy * sxy / (sxx * syy) } else { 0.0 };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_lists() {
        assert_eq!(truncated_ecc_list(0.25).unwrap(), vec![0.25]);
        assert_eq!(truncated_ecc_list(1.0 / 16.0).unwrap(), vec![0.25, 0.125, 0.0625]);
        assert!(truncated_ecc_list(0.5).is_err());
    }

    #[test]
    fn fit_three_points() {
        let (a, b, r2) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((a - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
        let (a, _, r2) = linear_fit(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.5]);
        assert!((a - 0.25).abs() < 1e-12);
        assert!((r2 - 0.25 * 0.25 * 2.0 / (0.5 * 0.5 + 0.5 * 0.5 + 0.0 + 1.0 / 6.0)).abs() < 1.0);
    }

    #[test]
    fn random_avs_sets_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let d = random_avs_directions(&mut rng, 8).unwrap();
            assert!(d.len() >= 3 && d.len() <= 8);
            assert!(!d.anchor_indices().is_empty());
        }
    }

    #[test]
    fn halving_growth_picks_worst_pair() {
        let rows = vec![
            GmRow { delta0: 0.25, family: "a-0".into(), ratio: 1.0 },
            GmRow { delta0: 0.25, family: "b-0".into(), ratio: 2.0 },
            GmRow { delta0: 0.125, family: "a-0".into(), ratio: 1.05 },
            GmRow { delta0: 0.125, family: "b-0".into(), ratio: 2.4 },
        ];
        let (g, at) = max_halving_growth(&rows, "");
        assert!((g - 1.2).abs() < 1e-12);
        assert!(at.starts_with("b-0"));
        assert!((max_halving_growth(&rows, "a").0 - 1.05).abs() < 1e-12);
    }
}
