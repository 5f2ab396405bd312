//! Finite rectangle families and the pointwise supremum of their averages.

use crate::error::{Error, Result};
use crate::geometry::{DirectionSet, Point, Rect};
use crate::grid::{GridField, PaddedPrefix, Stencil};
use rayon::prelude::*;
use std::sync::Arc;

/// Lengths, eccentricities and the translate count realizing `x ∈ R`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleGrid {
    pub heights: Vec<f64>,
    pub eccs: Vec<f64>,
    /// Odd number of translates per rectangle axis; 1 means centered only.
    pub offsets_per_axis: usize,
}

impl ScaleGrid {
    pub fn new(mut heights: Vec<f64>, mut eccs: Vec<f64>, offsets_per_axis: usize) -> Result<Self> {
        if heights.is_empty() || eccs.is_empty() {
            return Err(Error::InvalidScales("heights and eccentricities must be nonempty".into()));
        }
        if heights.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidScales("heights must be positive".into()));
        }
        if eccs.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
            return Err(Error::InvalidScales("eccentricities must lie in (0, 1]".into()));
        }
        if offsets_per_axis == 0 || offsets_per_axis % 2 == 0 {
            return Err(Error::InvalidScales("offsets_per_axis must be odd".into()));
        }
        heights.sort_by(|a, b| b.total_cmp(a));
        heights.dedup();
        eccs.sort_by(|a, b| b.total_cmp(a));
        eccs.dedup();
        Ok(Self { heights, eccs, offsets_per_axis })
    }

    /// Heights `h_max · 2^{-k}`, `k < levels`, and eccentricities `2^{-k}` for `k` in `ecc_exps`.
    pub fn dyadic(
        h_max: f64,
        levels: u32,
        ecc_exps: std::ops::RangeInclusive<u32>,
        offsets_per_axis: usize,
    ) -> Result<Self> {
        let heights = (0..levels).map(|k| h_max / f64::from(1u32 << k)).collect();
        let eccs = ecc_exps.map(|k| 1.0 / f64::from(1u32 << k)).collect();
        Self::new(heights, eccs, offsets_per_axis)
    }

    pub fn max_height(&self) -> f64 {
        self.heights[0]
    }

    /// `(height index, ecc index)` pairs whose short side covers at least one pixel.
    pub fn admissible(&self, spacing: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (hi, &h) in self.heights.iter().enumerate() {
            for (ei, &e) in self.eccs.iter().enumerate() {
                if e * h >= spacing * (1.0 - 1e-12) {
                    out.push((hi, ei));
                }
            }
        }
        out
    }

    /// Adds `2h` for every listed `h`, so doubled rectangles stay in the family.
    pub fn with_doubled_heights(&self) -> ScaleGrid {
        let mut heights = self.heights.clone();
        heights.extend(self.heights.iter().map(|h| 2.0 * h));
        Self::new(heights, self.eccs.clone(), self.offsets_per_axis).expect("valid by construction")
    }
}

/// `m = (h, θ, δ)` with weight `l_m = 1 + |ln δ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectParam {
    pub h: f64,
    pub theta: f64,
    pub ecc: f64,
}

impl RectParam {
    pub fn new(h: f64, theta: f64, ecc: f64) -> Result<Self> {
        Rect::new(Point::default(), h, ecc, theta)?;
        Ok(Self { h, theta, ecc })
    }

    pub fn weight(&self) -> f64 {
        1.0 + self.ecc.ln().abs()
    }

    pub fn shape(&self) -> Rect {
        Rect::new(Point::default(), self.h, self.ecc, self.theta).expect("validated")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionFilter {
    All,
    Sector(usize),
    AnchorsOnly,
}

/// One rectangle shape of a family, with its stencil and admissible translates.
#[derive(Debug, Clone)]
pub struct Member {
    pub dir: usize,
    pub h_idx: usize,
    pub ecc_idx: usize,
    /// Geometry centered at the origin.
    pub shape: Rect,
    /// Multiplier on the average (1 for plain maximal operators).
    pub coeff: f64,
    pub stencil: Arc<Stencil>,
    /// Anchor shifts `o` such that pixel `x` lies in the copy anchored at `x + o`.
    pub offsets: Vec<(i32, i32)>,
}

/// A finite family of rectangles on an `n × n` raster, ordered by
/// `(direction, height, eccentricity)`.
#[derive(Debug, Clone)]
pub struct RectFamily {
    n: usize,
    dirs: Arc<DirectionSet>,
    members: Arc<Vec<Member>>,
}

/// Pointwise supremum and the attaining `(member, offset)` per pixel.
#[derive(Debug, Clone)]
pub struct SupResult {
    pub values: GridField,
    pub member: Vec<u32>,
    pub offset: Vec<u16>,
}

impl RectFamily {
    /// `B_Ω` (optionally restricted to one sector or to the anchors) at the given scales.
    pub fn directional(
        n: usize,
        dirs: &DirectionSet,
        scales: &ScaleGrid,
        filter: DirectionFilter,
    ) -> Result<Self> {
        let dir_idx: Vec<usize> = (0..dirs.len())
            .filter(|&d| match filter {
                DirectionFilter::All => true,
                DirectionFilter::Sector(s) => dirs.sector_of(d) == s,
                DirectionFilter::AnchorsOnly => dirs.is_anchor(d),
            })
            .collect();
        let sp = 1.0 / n as f64;
        let pairs: Vec<(usize, usize, f64)> =
            scales.admissible(sp).into_iter().map(|(h, e)| (h, e, 1.0)).collect();
        Self::assemble(n, dirs, &dir_idx, scales, &pairs)
    }

    /// All `h × δh` rectangles for one `δ`.
    pub fn eccentricity(
        n: usize,
        ecc: f64,
        dirs: &DirectionSet,
        heights: &[f64],
        offsets_per_axis: usize,
    ) -> Result<Self> {
        let scales = ScaleGrid::new(heights.to_vec(), vec![ecc], offsets_per_axis)?;
        let sp = 1.0 / n as f64;
        let min_h = scales.heights.last().copied().unwrap_or(0.0);
        if ecc * min_h < sp * (1.0 - 1e-12) {
            return Err(Error::Infeasible(format!(
                "short side {} of the smallest rectangle is below the pixel size {sp}",
                ecc * min_h
            )));
        }
        let pairs: Vec<_> = (0..scales.heights.len()).map(|h| (h, 0, 1.0)).collect();
        Self::assemble(n, dirs, &(0..dirs.len()).collect::<Vec<_>>(), &scales, &pairs)
    }

    /// Members `(1/|ln δ|) · average` for every listed `δ < 1/2`.
    pub fn grand(
        n: usize,
        ecc_list: &[f64],
        dirs: &DirectionSet,
        heights: &[f64],
        offsets_per_axis: usize,
    ) -> Result<Self> {
        if ecc_list.is_empty() {
            return Err(Error::InvalidScales("empty eccentricity list".into()));
        }
        if let Some(bad) = ecc_list.iter().find(|&&d| !(d > 0.0 && d < 0.5)) {
            return Err(Error::InvalidScales(format!("eccentricity {bad} is not in (0, 1/2)")));
        }
        let scales = ScaleGrid::new(heights.to_vec(), ecc_list.to_vec(), offsets_per_axis)?;
        let sp = 1.0 / n as f64;
        let pairs: Vec<_> = scales
            .admissible(sp)
            .into_iter()
            .map(|(h, e)| (h, e, 1.0 / scales.eccs[e].ln().abs()))
            .collect();
        Self::assemble(n, dirs, &(0..dirs.len()).collect::<Vec<_>>(), &scales, &pairs)
    }

    fn assemble(
        n: usize,
        dirs: &DirectionSet,
        dir_idx: &[usize],
        scales: &ScaleGrid,
        pairs: &[(usize, usize, f64)],
    ) -> Result<Self> {
        if dir_idx.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if pairs.is_empty() {
            return Err(Error::Infeasible(
                "no (height, eccentricity) pair resolves at this grid size".into(),
            ));
        }
        let sp = 1.0 / n as f64;
        let mut members = Vec::with_capacity(dir_idx.len() * pairs.len());
        for &d in dir_idx {
            let theta = dirs.angles()[d];
            for &(h_idx, ecc_idx, coeff) in pairs {
                let shape =
                    Rect::new(Point::default(), scales.heights[h_idx], scales.eccs[ecc_idx], theta)?;
                let stencil = Arc::new(Stencil::for_rect(&shape, sp));
                let offsets = translates(&shape, &stencil, scales.offsets_per_axis, sp);
                members.push(Member { dir: d, h_idx, ecc_idx, shape, coeff, stencil, offsets });
            }
        }
        Ok(Self { n, dirs: Arc::new(dirs.clone()), members: Arc::new(members) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.dirs
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn member(&self, k: usize) -> &Member {
        &self.members[k]
    }

    pub fn sector_of_member(&self, k: usize) -> usize {
        self.dirs.sector_of(self.members[k].dir)
    }

    pub fn max_height(&self) -> f64 {
        self.members.iter().map(|m| m.shape.length()).fold(0.0, f64::max)
    }

    /// Pointwise maximum over members and translates of `coeff · average(f)`.
    /// Ties keep the first attaining `(member, offset)` in family order.
    pub fn sup(&self, f: &GridField) -> SupResult {
        assert_eq!(f.n(), self.n, "grid size mismatch");
        let n = self.n;
        let pads: Vec<i32> = self
            .members
            .iter()
            .map(|m| m.offsets.iter().map(|&(x, y)| x.abs().max(y.abs())).max().unwrap_or(0))
            .collect();
        let margin = self
            .members
            .iter()
            .zip(&pads)
            .map(|(m, &pad)| (pad + m.stencil.reach().0 + 2) as usize)
            .max()
            .unwrap_or(2);
        let prefix = PaddedPrefix::build(f, margin);
        let mut best = vec![f64::NEG_INFINITY; n * n];
        let mut arg_member = vec![0u32; n * n];
        let mut arg_offset = vec![0u16; n * n];
        for (mi, m) in self.members.iter().enumerate() {
            let pad = pads[mi];
            let w = n + 2 * pad as usize;
            let mut avg = vec![0.0; w * w];
            let scale = m.stencil.weight();
            avg.par_chunks_mut(w).enumerate().for_each(|(r, row)| {
                m.stencil.row_sums(&prefix, -pad, r as i32 - pad, row);
                for v in row.iter_mut() {
                    *v = m.coeff * (scale * *v);
                }
            });
            best.par_chunks_mut(n)
                .zip(arg_member.par_chunks_mut(n))
                .zip(arg_offset.par_chunks_mut(n))
                .enumerate()
                .for_each(|(j, ((brow, mrow), orow))| {
                    for (oi, &(ox, oy)) in m.offsets.iter().enumerate() {
                        let base = (j as i32 + oy + pad) as usize * w;
                        for i in 0..n {
                            let v = avg[base + (i as i32 + ox + pad) as usize];
                            if v > brow[i] {
                                brow[i] = v;
                                mrow[i] = mi as u32;
                                orow[i] = oi as u16;
                            }
                        }
                    }
                });
        }
        SupResult { values: GridField::from_values(n, best), member: arg_member, offset: arg_offset }
    }
}

/// Translates along both rectangle axes at fractions `k / ((c+1)/2)` of the
/// half-sides, rounded to whole pixels and kept only when the pixel stays inside.
fn translates(shape: &Rect, stencil: &Stencil, count: usize, sp: f64) -> Vec<(i32, i32)> {
    let half = (count as i32 - 1) / 2;
    let denom = (half + 1) as f64;
    let (u, v) = shape.axes();
    let (a, b) = (0.5 * shape.length() / sp, 0.5 * shape.width() / sp);
    let mut out: Vec<(i32, i32)> = Vec::with_capacity(count * count);
    for ka in -half..=half {
        for kb in -half..=half {
            let (ta, tb) = (ka as f64 / denom, kb as f64 / denom);
            let ox = (ta * a * u[0] + tb * b * v[0]).round() as i32;
            let oy = (ta * a * u[1] + tb * b * v[1]).round() as i32;
            if stencil.contains(-ox, -oy) && !out.contains(&(ox, oy)) {
                out.push((ox, oy));
            }
        }
    }
    out
}
