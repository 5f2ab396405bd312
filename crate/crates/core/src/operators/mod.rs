//! Maximal operators over rectangle families and the linear averaging
//! operators obtained by fixing one rectangle per pixel.

mod averaging;
mod centered;
mod family;
mod selector;

pub use averaging::{AveragingOperator, Term};
pub use centered::{
    apply_hnj, apply_sm, apply_tm, apply_wn, hnj_half_length, hnj_operator, maximal_y,
    sm_operator, tm_operator, wn_operator, wn_scale_count,
};
pub use family::{DirectionFilter, Member, RectFamily, RectParam, ScaleGrid, SupResult};
pub use selector::Selector;

use crate::error::Result;
use crate::geometry::DirectionSet;
use crate::grid::GridField;

/// `M_Ω |f|` over the (optionally filtered) family; `x ∈ R` is realized by the translate grid.
pub fn maximal_directional(
    f: &GridField,
    dirs: &DirectionSet,
    scales: &ScaleGrid,
    filter: DirectionFilter,
) -> Result<GridField> {
    let family = RectFamily::directional(f.n(), dirs, scales, filter)?;
    Ok(family.sup(&f.abs()).values)
}

/// `M_δ |f|`: all directions, fixed eccentricity `ecc`.
pub fn maximal_eccentricity(
    f: &GridField,
    ecc: f64,
    dirs: &DirectionSet,
    heights: &[f64],
    offsets_per_axis: usize,
) -> Result<GridField> {
    let family = RectFamily::eccentricity(f.n(), ecc, dirs, heights, offsets_per_axis)?;
    Ok(family.sup(&f.abs()).values)
}

/// `max_δ M_δ |f| / |ln δ|` over the listed `δ ∈ (0, 1/2)`.
pub fn grand_maximal(
    f: &GridField,
    ecc_list: &[f64],
    dirs: &DirectionSet,
    heights: &[f64],
    offsets_per_axis: usize,
) -> Result<GridField> {
    let family = RectFamily::grand(f.n(), ecc_list, dirs, heights, offsets_per_axis)?;
    Ok(family.sup(&f.abs()).values)
}

/// The selector attaining the discrete supremum of `M_Ω f` at every pixel (`f >= 0`).
pub fn linearize(f: &GridField, dirs: &DirectionSet, scales: &ScaleGrid) -> Result<Selector> {
    let family = RectFamily::directional(f.n(), dirs, scales, DirectionFilter::All)?;
    Ok(Selector::from_sup(&family, &family.sup(f)))
}

pub fn apply_t(phi: &Selector, f: &GridField) -> GridField {
    phi.operator().apply(f)
}

pub fn apply_t_adjoint(phi: &Selector, g: &GridField) -> GridField {
    phi.operator().adjoint(g)
}

pub fn apply_ttilde(phi: &Selector, f: &GridField) -> GridField {
    phi.doubled_operator().apply(f)
}

pub fn apply_t0(phi: &Selector, f: &GridField) -> Result<GridField> {
    Ok(phi.anchor_operator()?.apply(f))
}
