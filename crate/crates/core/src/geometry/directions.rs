//! Finite slope sets with a distinguished anchor subset and the sectors it induces.
//!
//! Slopes live in `[0, 1]` and are kept strictly descending. The anchors
//! `a_1 > a_2 > ... > a_K` cut the slopes into sectors: anchor `a_k` opens
//! sector `k`, which holds `a_k` itself and every slope strictly between
//! `a_{k+1}` and `a_k`. Slopes above `a_1` form sector 0, which only exists
//! when such slopes are present.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DirectionKind {
    /// `{k/N : k = N, ..., 1}`
    Uniform(usize),
    /// `{ratio^k : k = 1, ..., N}`
    Lacunary { ratio: f64, n: usize },
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnchorRule {
    /// Slopes at indices `0, k, 2k, ...` of the descending list.
    EveryKth(usize),
    /// Anchor slopes given by value; each must be one of the slopes.
    Explicit(Vec<f64>),
    /// Every slope is an anchor, so every sector is a singleton.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    slopes: Vec<f64>,
    angles: Vec<f64>,
    anchor_indices: Vec<usize>,
    sector_of: Vec<usize>,
}

impl DirectionSet {
    pub fn new(kind: DirectionKind, anchors: AnchorRule) -> Result<Self> {
        let slopes = match kind {
            DirectionKind::Uniform(n) => {
                if n == 0 {
                    return Err(Error::InvalidDirections("uniform set needs N >= 1".into()));
                }
                (1..=n).rev().map(|k| k as f64 / n as f64).collect()
            }
            DirectionKind::Lacunary { ratio, n } => {
                if n == 0 {
                    return Err(Error::InvalidDirections("lacunary set needs N >= 1".into()));
                }
                if !(ratio > 0.0 && ratio < 1.0) {
                    return Err(Error::InvalidDirections(format!(
                        "lacunary ratio must lie in (0, 1), got {ratio}"
                    )));
                }
                (1..=n as i32).map(|k| ratio.powi(k)).collect()
            }
            DirectionKind::Explicit(list) => normalize_explicit(list)?,
        };
        let anchor_indices = resolve_anchors(&slopes, anchors)?;
        let sector_of = assign_sectors(slopes.len(), &anchor_indices);
        let angles = slopes.iter().map(|s| s.atan()).collect();
        Ok(Self { slopes, angles, anchor_indices, sector_of })
    }

    /// Convenience for the common `uniform(N)` with every slope an anchor.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(DirectionKind::Uniform(n), AnchorRule::All)
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// `atan(slope)` for each slope, in the same order.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn anchor_indices(&self) -> &[usize] {
        &self.anchor_indices
    }

    pub fn is_anchor(&self, idx: usize) -> bool {
        self.anchor_indices.binary_search(&idx).is_ok()
    }

    pub fn sector_of(&self, idx: usize) -> usize {
        self.sector_of[idx]
    }

    /// Sector labels that actually occur, ascending.
    pub fn sectors(&self) -> Vec<usize> {
        let mut s = self.sector_of.clone();
        s.dedup();
        s
    }

    pub fn sector_members(&self, sector: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.sector_of[i] == sector).collect()
    }

    /// Angles of the two anchors bounding `sector` (upper, lower). Outermost
    /// sectors reuse their single anchor for both ends.
    pub fn sector_endpoint_angles(&self, sector: usize) -> Result<(f64, f64)> {
        let k = self.anchor_indices.len();
        if k == 0 {
            return Err(Error::NoAnchors);
        }
        let angle = |a: usize| self.angles[self.anchor_indices[a]];
        Ok(match sector {
            0 => (angle(0), angle(0)),
            s if s >= k => (angle(k - 1), angle(k - 1)),
            s => (angle(s - 1), angle(s)),
        })
    }

    /// The same slopes with only the anchors kept, every one its own anchor.
    pub fn anchors_only(&self) -> Result<DirectionSet> {
        if self.anchor_indices.is_empty() {
            return Err(Error::NoAnchors);
        }
        let list = self.anchor_indices.iter().map(|&i| self.slopes[i]).collect();
        DirectionSet::new(DirectionKind::Explicit(list), AnchorRule::All)
    }
}

fn normalize_explicit(mut list: Vec<f64>) -> Result<Vec<f64>> {
    if list.is_empty() {
        return Err(Error::InvalidDirections("empty slope list".into()));
    }
    if let Some(bad) = list.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::InvalidDirections(format!("slope {bad} outside [0, 1]")));
    }
    if list.len() > 1 && list[0] < list[1] {
        list.reverse();
    }
    if list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidDirections("slopes must be strictly monotone".into()));
    }
    Ok(list)
}

fn resolve_anchors(slopes: &[f64], rule: AnchorRule) -> Result<Vec<usize>> {
    let idx = match rule {
        AnchorRule::All => (0..slopes.len()).collect(),
        AnchorRule::EveryKth(k) => {
            if k == 0 {
                return Err(Error::InvalidDirections("anchor stride must be >= 1".into()));
            }
            (0..slopes.len()).step_by(k).collect()
        }
        AnchorRule::Explicit(values) => {
            let mut idx = Vec::with_capacity(values.len());
            for v in values {
                let i = slopes
                    .iter()
                    .position(|&s| (s - v).abs() <= 1e-12)
                    .ok_or_else(|| Error::InvalidDirections(format!("anchor {v} is not a slope")))?;
                idx.push(i);
            }
            idx.sort_unstable();
            idx.dedup();
            idx
        }
    };
    Ok(idx)
}

fn assign_sectors(len: usize, anchors: &[usize]) -> Vec<usize> {
    // slopes are descending, so walking the indices upward meets anchors in order a_1, a_2, ...
    let mut sector = 0;
    let mut next = anchors.iter().peekable();
    (0..len)
        .map(|i| {
            if next.peek() == Some(&&i) {
                next.next();
                sector += 1;
            }
            sector
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_slopes() {
        let d = DirectionSet::uniform(4).unwrap();
        assert_eq!(d.slopes(), &[1.0, 0.75, 0.5, 0.25]);
        assert_eq!(d.anchor_indices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn lacunary_slopes() {
        let d = DirectionSet::new(DirectionKind::Lacunary { ratio: 0.5, n: 3 }, AnchorRule::All)
            .unwrap();
        assert_eq!(d.slopes(), &[0.5, 0.25, 0.125]);
    }

    #[test]
    fn middle_slope_joins_sector_of_larger_anchor() {
        let d = DirectionSet::new(
            DirectionKind::Explicit(vec![0.9, 0.5, 0.1]),
            AnchorRule::Explicit(vec![0.9, 0.1]),
        )
        .unwrap();
        assert_eq!(d.sector_of(1), d.sector_of(0));
        assert_ne!(d.sector_of(2), d.sector_of(0));
    }

    #[test]
    fn slopes_above_first_anchor_form_sector_zero() {
        let d = DirectionSet::new(
            DirectionKind::Explicit(vec![0.9, 0.5, 0.1]),
            AnchorRule::Explicit(vec![0.5]),
        )
        .unwrap();
        assert_eq!(d.sector_of(0), 0);
        assert_eq!(d.sector_of(1), 1);
        assert_eq!(d.sector_of(2), 1);
        let a = 0.5f64.atan();
        assert_eq!(d.sector_endpoint_angles(0).unwrap(), (a, a));
        assert_eq!(d.sector_endpoint_angles(1).unwrap(), (a, a));
    }

    #[test]
    fn interior_sector_endpoints() {
        let d = DirectionSet::new(DirectionKind::Uniform(8), AnchorRule::EveryKth(3)).unwrap();
        // anchors at slopes 1, 5/8, 2/8
        let (hi, lo) = d.sector_endpoint_angles(1).unwrap();
        assert_eq!(hi, 1f64.atan());
        assert_eq!(lo, 0.625f64.atan());
        assert_eq!(d.sector_members(1), vec![0, 1, 2]);
        assert_eq!(d.sector_members(3), vec![6, 7]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DirectionSet::new(DirectionKind::Explicit(vec![]), AnchorRule::All).is_err());
        assert!(DirectionSet::new(DirectionKind::Explicit(vec![1.2]), AnchorRule::All).is_err());
        assert!(
            DirectionSet::new(DirectionKind::Explicit(vec![0.5, 0.5, 0.1]), AnchorRule::All)
                .is_err()
        );
        assert!(
            DirectionSet::new(DirectionKind::Explicit(vec![0.5, 0.1, 0.3]), AnchorRule::All)
                .is_err()
        );
        assert!(DirectionSet::new(DirectionKind::Uniform(0), AnchorRule::All).is_err());
        assert!(DirectionSet::new(
            DirectionKind::Lacunary { ratio: 1.0, n: 3 },
            AnchorRule::All
        )
        .is_err());
        assert!(DirectionSet::new(
            DirectionKind::Explicit(vec![0.5, 0.1]),
            AnchorRule::Explicit(vec![0.3])
        )
        .is_err());
    }

    #[test]
    fn ascending_explicit_list_is_accepted() {
        let d = DirectionSet::new(DirectionKind::Explicit(vec![0.1, 0.4]), AnchorRule::All)
            .unwrap();
        assert_eq!(d.slopes(), &[0.4, 0.1]);
    }

    #[test]
    fn no_anchor_set_refuses_endpoints() {
        let d = DirectionSet::new(DirectionKind::Uniform(3), AnchorRule::Explicit(vec![]))
            .unwrap();
        assert_eq!(d.sector_endpoint_angles(0), Err(Error::NoAnchors));
    }
}
