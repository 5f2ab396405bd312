//! Checks on rectangle pairs, dense kernels and norm estimates:
//! `geom10`, `tt9`, `thm1` and `gm_bounded`.

use super::{pointwise_directions, pointwise_scales, sample_fields, VerifyConfig, Worst};
use crate::error::{Error, Result};
use crate::experiments::{
    avs_sweep, concentrated_starts, grand_maximal_ratios, max_halving_growth,
};
use crate::geometry::{rect_intersection_area, DirectionKind, AnchorRule, DirectionSet, Point, Rect};
use crate::kernels::{split_k, ttstar_matrix, Assembly};
use crate::normest::{estimate_maximal_norm, MaximalNormOptions, PowerOptions};
use crate::operators::{DirectionFilter, RectFamily, ScaleGrid, Selector};
use crate::oracle::eigen_extremes;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Rejection-sampling budget for intersecting pairs, per requested pair.
const PAIR_TRIES: usize = 100;

fn kernel(a: &Rect, b: &Rect) -> f64 {
    rect_intersection_area(a, b) / (a.area() * b.area())
}

/// `|R_x ∩ R_z| / (|R_x||R_z|)` over the best replacement of one rectangle by
/// its doubled anchor-slope version and the other by its doubled copy,
/// maximizing over both anchors bounding each sector.
fn geom10_ratio(dirs: &DirectionSet, rx: &Rect, sx: usize, rz: &Rect, sz: usize) -> Result<f64> {
    let k = kernel(rx, rz);
    let (ax, bx) = dirs.sector_endpoint_angles(sx)?;
    let (az, bz) = dirs.sector_endpoint_angles(sz)?;
    let mut best = 0.0f64;
    for tz in [az, bz] {
        best = best.max(kernel(&rx.doubled(), &rz.reslope(tz)));
    }
    for tx in [ax, bx] {
        best = best.max(kernel(&rx.reslope(tx), &rz.doubled()));
    }
    Ok(if best > 0.0 { k / best } else { f64::INFINITY })
}

pub(super) fn geom10(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Worst> {
    let dirs = pointwise_directions()?;
    let scales = pointwise_scales()?;
    let shapes = scales.admissible(1.0 / cfg.n as f64);
    let mut worst = Worst::new();
    let mut tries = 0usize;
    while worst.samples < cfg.pair_samples {
        tries += 1;
        if tries > PAIR_TRIES * cfg.pair_samples.max(1) {
            return Err(Error::Infeasible("too few intersecting cross-sector pairs".into()));
        }
        let (dx, dz) = (rng.gen_range(0..dirs.len()), rng.gen_range(0..dirs.len()));
        let (sx, sz) = (dirs.sector_of(dx), dirs.sector_of(dz));
        if sx == sz {
            continue;
        }
        let (hx, ex) = shapes[rng.gen_range(0..shapes.len())];
        let (hz, ez) = shapes[rng.gen_range(0..shapes.len())];
        let cx = Point::new(rng.gen_range(0.25..0.75), rng.gen_range(0.25..0.75));
        let reach = 0.5 * (scales.heights[hx] + scales.heights[hz]);
        let cz = Point::new(cx.x + rng.gen_range(-reach..reach), cx.y + rng.gen_range(-reach..reach));
        let rx = Rect::new(cx, scales.heights[hx], scales.eccs[ex], dirs.angles()[dx])?;
        let rz = Rect::new(cz, scales.heights[hz], scales.eccs[ez], dirs.angles()[dz])?;
        if rect_intersection_area(&rx, &rz) <= 0.0 {
            continue;
        }
        let k = worst.samples;
        let r = geom10_ratio(&dirs, &rx, sx, &rz, sz)?;
        worst.offer(r, || format!("pair={k} slopes=({},{})", dirs.slopes()[dx], dirs.slopes()[dz]));
        worst.samples += 1;
    }
    Ok(worst)
}

fn sector_norm_options(seed: u64) -> MaximalNormOptions {
    MaximalNormOptions { rounds: 4, power: PowerOptions { tol: 1e-8, max_iter: 500, precheck: true }, seed }
}

/// `‖𝕋₁‖` from the dense block kernel against `sup_i ‖M_{Ω_i}‖²` estimated
/// independently by alternating linearization and power iteration.
pub(super) fn tt9(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Worst> {
    let n = cfg.dense_n;
    let dirs = pointwise_directions()?;
    let scales = ScaleGrid::dyadic(2.0 / 3.0, 2, 0..=1, 3)?;
    let family = RectFamily::directional(n, &dirs, &scales, DirectionFilter::All)?;
    let fields = sample_fields(n, cfg.samples_per_family, rng.gen(), 1.0);
    let mut starts = concentrated_starts(n, 1.0);
    starts.extend(fields.iter().map(|(_, f)| f.clone()));
    let opts = sector_norm_options(rng.gen());
    let mut sup_sq = 0.0f64;
    for s in dirs.sectors() {
        let fam = RectFamily::directional(n, &dirs, &scales, DirectionFilter::Sector(s))?;
        let est = estimate_maximal_norm(&fam, &opts, &starts)?;
        sup_sq = sup_sq.max(est.value * est.value);
    }
    let mut worst = Worst::new();
    for (k, (id, f)) in fields.iter().enumerate() {
        let selectors =
            [("argmax", Selector::from_sup(&family, &family.sup(f))), ("random", Selector::random(&family, rng))];
        for (kind, phi) in &selectors {
            let kmat = ttstar_matrix(phi, Assembly::Pixelated)?;
            let (k1, _) = split_k(phi, &kmat);
            let (_, top) = eigen_extremes(&k1.to_dmatrix());
            worst.offer(top / sup_sq, || format!("sample={k} field={id} selector={kind}"));
            worst.samples += 1;
        }
    }
    Ok(worst)
}

/// Largest implied constant over random sector decompositions.
pub(super) fn thm1(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Worst> {
    let scales = ScaleGrid::dyadic(2.0 / 3.0, 3, 0..=2, 3)?;
    let opts = MaximalNormOptions {
        rounds: 2,
        power: PowerOptions { tol: 1e-4, max_iter: 50, precheck: true },
        seed: rng.gen(),
    };
    let rows = avs_sweep(cfg.n, cfg.thm1_configs, 6, &scales, &opts, rng.gen())?;
    let mut worst = Worst::new();
    for row in &rows {
        worst.offer(row.implied_c, || format!("config={}", row.config_id));
        worst.samples += 1;
    }
    Ok(worst)
}

/// Largest growth of `‖GM₀ f‖/‖f‖` when `δ₀` halves, over all test fields.
pub(super) fn gm_bounded(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Worst> {
    let n = cfg.n;
    let slopes: Vec<f64> = (1..=16).rev().map(|k| 0.1 * f64::from(k) / 16.0).collect();
    let dirs = DirectionSet::new(DirectionKind::Explicit(slopes), AnchorRule::All)?;
    let heights: Vec<f64> = (0..6).map(|k| (2.0 / 3.0) / f64::from(1u32 << k)).collect();
    let fields = sample_fields(n, cfg.samples_per_family, rng.gen(), 0.1);
    let delta0s: Vec<f64> = (2..=6).map(|k| 1.0 / f64::from(1u32 << k)).collect();
    let rows = grand_maximal_ratios(&fields, &delta0s, &dirs, &heights, 3)?;
    let (growth, at) = max_halving_growth(&rows, "");
    let mut worst = Worst::new();
    worst.samples = fields.len();
    worst.offer(growth, || at);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_pair_ratio_is_finite() {
        let dirs = pointwise_directions().unwrap();
        let r = Rect::new(Point::new(0.5, 0.5), 0.2, 0.25, dirs.angles()[1]).unwrap();
        let q = r.reslope(dirs.angles()[4]).with_center(Point::new(0.52, 0.5));
        let q = Rect::new(q.center(), 0.2, 0.25, q.theta()).unwrap();
        let v = geom10_ratio(&dirs, &r, dirs.sector_of(1), &q, dirs.sector_of(4)).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }
}
