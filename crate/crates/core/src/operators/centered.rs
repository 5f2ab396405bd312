//! Centered, weighted averages `T_m`, `S_m`, the vertical averages `H_{n,j}`,
//! their mean `W_n`, and the vertical maximal function `M^y`.

use super::averaging::AveragingOperator;
use super::family::RectParam;
use super::selector::StencilCache;
use crate::error::{Error, Result};
use crate::grid::{GridField, Stencil};
use std::sync::Arc;

/// `T_m f(x) = l_m⁻¹ · average of f over the h × δh rectangle centered at x`.
pub fn tm_operator(n: usize, m: &RectParam) -> AveragingOperator {
    let mut cache = StencilCache::new(n);
    cache.id(&m.shape());
    let st = cache.into_stencils().remove(0);
    AveragingOperator::centered(n, vec![(st, 1.0 / m.weight())])
}

/// `S_m`: like `T_m` over the doubled rectangle.
pub fn sm_operator(n: usize, m: &RectParam) -> AveragingOperator {
    let doubled = RectParam { h: 2.0 * m.h, ..*m };
    let mut cache = StencilCache::new(n);
    cache.id(&doubled.shape());
    let st = cache.into_stencils().remove(0);
    AveragingOperator::centered(n, vec![(st, 1.0 / m.weight())])
}

/// Number of vertical scales averaged by `W_n`: `⌊2 l_n⌋`.
pub fn wn_scale_count(n_param: &RectParam) -> usize {
    ((2.0 * n_param.weight()).floor() as usize).max(1)
}

/// Half-length `η k 2^j` of the segment in `H_{n,j}`, clamped to the domain size.
pub fn hnj_half_length(n_param: &RectParam, j: usize) -> f64 {
    (n_param.ecc * n_param.h * (1u64 << j) as f64).min(1.0)
}

/// `H_{n,j} f(x) = (2L)⁻¹ ∫_{-L}^{L} f(x + t e₂) dt` with `L = η k 2^j`.
pub fn hnj_operator(n: usize, n_param: &RectParam, j: usize) -> Result<AveragingOperator> {
    if j == 0 || j > wn_scale_count(n_param) {
        return Err(Error::Infeasible(format!(
            "scale index {j} outside 1..={}",
            wn_scale_count(n_param)
        )));
    }
    let st = Stencil::vertical(hnj_half_length(n_param, j), 1.0 / n as f64);
    Ok(AveragingOperator::centered(n, vec![(Arc::new(st), 1.0)]))
}

/// `W_n = mean over j = 1..⌊2 l_n⌋ of H_{n,j}`.
pub fn wn_operator(n: usize, n_param: &RectParam) -> AveragingOperator {
    let count = wn_scale_count(n_param);
    let sp = 1.0 / n as f64;
    let parts = (1..=count)
        .map(|j| (Arc::new(Stencil::vertical(hnj_half_length(n_param, j), sp)), 1.0 / count as f64))
        .collect();
    AveragingOperator::centered(n, parts)
}

/// `M^y f(x) = max over radii r of the centered vertical average of |f| over [-r, r]`.
pub fn maximal_y(f: &GridField, radii: &[f64]) -> Result<GridField> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidScales("radii must be positive and nonempty".into()));
    }
    let af = f.abs();
    let sp = f.spacing();
    let mut best = GridField::constant(f.n(), f64::NEG_INFINITY);
    for &r in radii {
        let op = AveragingOperator::centered(f.n(), vec![(Arc::new(Stencil::vertical(r, sp)), 1.0)]);
        best = best.zip_with(&op.apply(&af), f64::max);
    }
    Ok(best)
}

pub fn apply_tm(m: &RectParam, f: &GridField) -> GridField {
    tm_operator(f.n(), m).apply(f)
}

pub fn apply_sm(m: &RectParam, f: &GridField) -> GridField {
    sm_operator(f.n(), m).apply(f)
}

pub fn apply_hnj(n_param: &RectParam, j: usize, f: &GridField) -> Result<GridField> {
    Ok(hnj_operator(f.n(), n_param, j)?.apply(f))
}

pub fn apply_wn(n_param: &RectParam, f: &GridField) -> GridField {
    wn_operator(f.n(), n_param).apply(f)
}
