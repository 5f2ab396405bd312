//! The per-pixel rectangle choice `x ↦ R_x` and the linear operators it induces.

use super::averaging::{AveragingOperator, Term};
use super::family::{RectFamily, SupResult};
use crate::error::Result;
use crate::geometry::{Point, Rect};
use crate::grid::Stencil;
use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;

/// Pixel `p` uses family member `member[p]` anchored at pixel `anchor[p]`.
#[derive(Debug, Clone)]
pub struct Selector {
    family: RectFamily,
    member: Vec<u32>,
    anchor: Vec<(i32, i32)>,
}

impl Selector {
    /// The argmax selector of a supremum computed over `family`.
    pub fn from_sup(family: &RectFamily, sup: &SupResult) -> Self {
        let n = family.n();
        let mut anchor = Vec::with_capacity(n * n);
        for p in 0..n * n {
            let m = family.member(sup.member[p] as usize);
            let (ox, oy) = m.offsets[sup.offset[p] as usize];
            anchor.push(((p % n) as i32 + ox, (p / n) as i32 + oy));
        }
        Self { family: family.clone(), member: sup.member.clone(), anchor }
    }

    /// Independent uniform choice of member and translate at every pixel.
    pub fn random(family: &RectFamily, rng: &mut impl Rng) -> Self {
        let n = family.n();
        let mut member = Vec::with_capacity(n * n);
        let mut anchor = Vec::with_capacity(n * n);
        for p in 0..n * n {
            let k = rng.gen_range(0..family.members().len());
            let offs = &family.member(k).offsets;
            let (ox, oy) = offs[rng.gen_range(0..offs.len())];
            member.push(k as u32);
            anchor.push(((p % n) as i32 + ox, (p / n) as i32 + oy));
        }
        Self { family: family.clone(), member, anchor }
    }

    /// Every pixel takes member `k` centered at itself.
    pub fn constant(family: &RectFamily, k: usize) -> Self {
        let n = family.n();
        let anchor = (0..n * n).map(|p| ((p % n) as i32, (p / n) as i32)).collect();
        Self { family: family.clone(), member: vec![k as u32; n * n], anchor }
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    pub fn family(&self) -> &RectFamily {
        &self.family
    }

    pub fn member_index(&self, p: usize) -> usize {
        self.member[p] as usize
    }

    pub fn anchor(&self, p: usize) -> (i32, i32) {
        self.anchor[p]
    }

    /// Multiplier of the average taken at pixel `p`.
    pub fn coeff(&self, p: usize) -> f64 {
        self.family.member(self.member[p] as usize).coeff
    }

    /// Points pixel `p` at member `k` anchored at pixel `anchor`.
    pub fn assign(&mut self, p: usize, k: usize, anchor: (i32, i32)) {
        assert!(k < self.family.members().len(), "member index out of range");
        self.member[p] = k as u32;
        self.anchor[p] = anchor;
    }

    pub fn set_anchor(&mut self, p: usize, anchor: (i32, i32)) {
        self.anchor[p] = anchor;
    }

    /// `R_x` for pixel `p`.
    pub fn rect(&self, p: usize) -> Rect {
        let sp = 1.0 / self.n() as f64;
        let (ai, aj) = self.anchor[p];
        let c = Point::new((ai as f64 + 0.5) * sp, (aj as f64 + 0.5) * sp);
        self.family.member(self.member[p] as usize).shape.with_center(c)
    }

    /// Sector label of pixel `p` (the set `A_j` it belongs to).
    pub fn sector(&self, p: usize) -> usize {
        self.family.sector_of_member(self.member[p] as usize)
    }

    pub fn sectors(&self) -> Vec<usize> {
        (0..self.member.len()).map(|p| self.sector(p)).collect()
    }

    /// `T f(x) = average of f over R_x` (times the member coefficient).
    pub fn operator(&self) -> AveragingOperator {
        let stencils: Vec<Arc<Stencil>> =
            self.family.members().iter().map(|m| m.stencil.clone()).collect();
        AveragingOperator::from_terms(self.n(), stencils, |p| {
            let k = self.member[p];
            let (ai, aj) = self.anchor[p];
            vec![Term { stencil: k, ai, aj, coeff: self.family.member(k as usize).coeff }]
        })
    }

    /// `T̃`: same centers and slopes, doubled sides.
    pub fn doubled_operator(&self) -> AveragingOperator {
        let mut cache = StencilCache::new(self.n());
        let ids: Vec<u32> = self
            .member
            .iter()
            .map(|&k| {
                let shape = self.family.member(k as usize).shape.doubled();
                cache.id(&shape)
            })
            .collect();
        AveragingOperator::from_terms(self.n(), cache.into_stencils(), |p| {
            let (ai, aj) = self.anchor[p];
            let coeff = self.family.member(self.member[p] as usize).coeff;
            vec![Term { stencil: ids[p], ai, aj, coeff }]
        })
    }

    /// `T₀`: sum of the doubled averages turned to the two anchor slopes bounding the sector.
    pub fn anchor_operator(&self) -> Result<AveragingOperator> {
        let dirs = self.family.directions();
        let mut cache = StencilCache::new(self.n());
        let mut per_member: HashMap<u32, (u32, u32)> = HashMap::new();
        for &k in &self.member {
            if per_member.contains_key(&k) {
                continue;
            }
            let m = self.family.member(k as usize);
            let (upper, lower) = dirs.sector_endpoint_angles(dirs.sector_of(m.dir))?;
            let a = cache.id(&m.shape.reslope(upper));
            let b = cache.id(&m.shape.reslope(lower));
            per_member.insert(k, (a, b));
        }
        Ok(AveragingOperator::from_terms(self.n(), cache.into_stencils(), |p| {
            let (ai, aj) = self.anchor[p];
            let k = self.member[p];
            let coeff = self.family.member(k as usize).coeff;
            let (a, b) = per_member[&k];
            vec![Term { stencil: a, ai, aj, coeff }, Term { stencil: b, ai, aj, coeff }]
        }))
    }
}

/// Deduplicates stencils of centered shapes by their exact parameters.
pub(crate) struct StencilCache {
    spacing: f64,
    index: HashMap<(u64, u64, u64), u32>,
    stencils: Vec<Arc<Stencil>>,
}

impl StencilCache {
    pub(crate) fn new(n: usize) -> Self {
        Self { spacing: 1.0 / n as f64, index: HashMap::new(), stencils: Vec::new() }
    }

    pub(crate) fn id(&mut self, shape: &Rect) -> u32 {
        let key = (shape.length().to_bits(), shape.ecc().to_bits(), shape.theta().to_bits());
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.stencils.len() as u32;
        self.stencils.push(Arc::new(Stencil::for_rect(shape, self.spacing)));
        self.index.insert(key, id);
        id
    }

    pub(crate) fn into_stencils(self) -> Vec<Arc<Stencil>> {
        self.stencils
    }
}
