//! Bounds for the composition `T_m T_n` of two centered weighted averages:
//! `thm2_18`, `case1_20`, `case2_23` and `gg24`.
//!
//! Parameters are drawn with `h > k`, slopes in `[0, 1/10]`, dyadic
//! eccentricities, and both short sides at least one pixel.

use super::{sample_fields, VerifyConfig, Worst};
use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};
use crate::grid::{GridField, Stencil};
use crate::operators::{sm_operator, tm_operator, wn_operator, AveragingOperator, RectParam};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Longest sides available to `m` and `n`.
const HEIGHTS: [f64; 3] = [1.0 / 6.0, 1.0 / 12.0, 1.0 / 24.0];
/// Largest slope of either rectangle.
const MAX_SLOPE: f64 = 0.1;
/// Rejection-sampling budget per accepted pair.
const MAX_TRIES: usize = 10_000;

/// `w = max{ηk, δh, k·sin|θ − β|}` and which term attains it.
fn width(m: &RectParam, p: &RectParam) -> (f64, bool) {
    let slope_term = p.h * (m.theta - p.theta).abs().sin();
    let other = (p.ecc * p.h).max(slope_term);
    let own = m.ecc * m.h;
    (own.max(other), own >= other)
}

fn random_param(rng: &mut ChaCha8Rng, heights: &[f64], spacing: f64) -> Result<RectParam> {
    let h = heights[rng.gen_range(0..heights.len())];
    let eccs: Vec<f64> = (1..=4)
        .map(|e| 1.0 / f64::from(1u32 << e))
        .filter(|e| e * h >= spacing * (1.0 - 1e-12))
        .collect();
    if eccs.is_empty() {
        return Err(Error::Infeasible(format!("height {h} has no resolvable eccentricity")));
    }
    let ecc = eccs[rng.gen_range(0..eccs.len())];
    RectParam::new(h, rng.gen_range(0.0..=MAX_SLOPE).atan(), ecc)
}

/// A pair `(m, n)` with `h > k` that satisfies the case filter of `name`.
fn random_pair(name: &str, rng: &mut ChaCha8Rng, spacing: f64) -> Result<(RectParam, RectParam)> {
    for _ in 0..MAX_TRIES {
        let hi = rng.gen_range(0..HEIGHTS.len() - 1);
        let m = random_param(rng, &HEIGHTS[hi..=hi], spacing)?;
        let p = random_param(rng, &HEIGHTS[hi + 1..], spacing)?;
        let (_, own) = width(&m, &p);
        let keep = match name {
            "case1_20" => own,
            "case2_23" => !own,
            _ => true,
        };
        if keep {
            return Ok((m, p));
        }
    }
    Err(Error::Infeasible(format!("no parameter pair satisfies the `{name}` case")))
}

/// `(l_m l_n)⁻¹ · average over the 2h × 2w rectangle of slope θ centered at x`.
fn enclosing_operator(n: usize, m: &RectParam, p: &RectParam) -> Result<AveragingOperator> {
    let (w, _) = width(m, p);
    let shape = Rect::new(Point::default(), 2.0 * m.h, w / m.h, m.theta)?;
    let st = Stencil::for_rect(&shape, 1.0 / n as f64);
    Ok(AveragingOperator::centered(n, vec![(Arc::new(st), 1.0 / (m.weight() * p.weight()))]))
}

fn sum(a: GridField, b: &GridField) -> GridField {
    a.zip_with(b, |x, y| x + y)
}

pub(super) fn run(name: &str, cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Worst> {
    let n = cfg.n;
    let spacing = 1.0 / n as f64;
    let fields = sample_fields(n, cfg.samples_per_family, rng.gen(), MAX_SLOPE);
    let mask = GridField::zeros(n).interior_mask(HEIGHTS[0]);
    let mut worst = Worst::new();
    for k in 0..cfg.composition_samples.max(fields.len()) {
        let (id, f) = &fields[k % fields.len()];
        let (m, p) = random_pair(name, rng, spacing)?;
        let lhs = tm_operator(n, &m).apply(&tm_operator(n, &p).apply(f));
        let rhs = match name {
            "thm2_18" => enclosing_operator(n, &m, &p)?.apply(f),
            "case1_20" => sm_operator(n, &m).apply(f),
            "case2_23" => sm_operator(n, &m).apply(&wn_operator(n, &p).apply(f)),
            _ => {
                let (sm, sn) = (sm_operator(n, &m), sm_operator(n, &p));
                let mut total = sm.apply(f);
                total = sum(total, &sn.apply(f));
                total = sum(total, &sm.apply(&wn_operator(n, &p).apply(f)));
                sum(total, &wn_operator(n, &m).apply(&sn.apply(f)))
            }
        };
        let tag = format!(
            "sample={k} field={id} m=(h={},slope={:.4},ecc={}) n=(h={},slope={:.4},ecc={})",
            m.h,
            m.theta.tan(),
            m.ecc,
            p.h,
            p.theta.tan(),
            p.ecc
        );
        worst.offer_fields(&lhs, &rhs, &mask, &tag);
        worst.samples += 1;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn case_filters_select_the_width_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (m, p) = random_pair("case1_20", &mut rng, 1.0 / 64.0).unwrap();
            assert!(m.h > p.h);
            assert!(width(&m, &p).1);
            let (m, p) = random_pair("case2_23", &mut rng, 1.0 / 64.0).unwrap();
            assert!(!width(&m, &p).1);
            assert!(m.ecc * m.h >= 1.0 / 64.0 - 1e-15 && p.ecc * p.h >= 1.0 / 64.0 - 1e-15);
        }
    }
}
