//! Nonnegative test functions: smooth bumps, balls, thin strips, and a
//! Kakeya-style fan of strips through a common point.
//!
//! Every generated field is scaled to unit L² norm.

use crate::geometry::{Point, Rect};
use crate::grid::GridField;
use rand::Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    Bump,
    Ball,
    Strip,
    KakeyaFan,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] =
        [FamilyKind::Bump, FamilyKind::Ball, FamilyKind::Strip, FamilyKind::KakeyaFan];

    pub fn id(&self) -> &'static str {
        match self {
            FamilyKind::Bump => "bump",
            FamilyKind::Ball => "ball",
            FamilyKind::Strip => "strip",
            FamilyKind::KakeyaFan => "kakeya-fan",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Angle window (radians) that strip and fan directions are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRange {
    pub lo: f64,
    pub hi: f64,
}

impl AngleRange {
    /// Angles of slopes in `[0, max_slope]`.
    pub fn slopes_up_to(max_slope: f64) -> Self {
        Self { lo: 0.0, hi: max_slope.atan() }
    }
}

fn normalize(f: GridField) -> GridField {
    f.normalized().unwrap_or_else(|| {
        // a sub-pixel feature missed every center; fall back to the middle pixel
        let n = f.n();
        let mut g = GridField::zeros(n);
        g.set(n / 2, n / 2, 1.0);
        g.normalized().expect("nonzero")
    })
}

/// Sum of one to three Gaussian bumps.
pub fn bump(n: usize, rng: &mut impl Rng) -> GridField {
    let count = rng.gen_range(1..=3);
    let bumps: Vec<(f64, f64, f64, f64)> = (0..count)
        .map(|_| {
            (rng.gen_range(0.25..0.75), rng.gen_range(0.25..0.75), rng.gen_range(0.03..0.12), rng.gen_range(0.5..1.0))
        })
        .collect();
    normalize(GridField::from_fn(n, |x, y| {
        bumps
            .iter()
            .map(|&(cx, cy, s, a)| a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * s * s)).exp())
            .sum()
    }))
}

/// Indicator of a disk of radius `radius` at `center`.
pub fn ball_at(n: usize, center: Point, radius: f64) -> GridField {
    normalize(GridField::from_fn(n, |x, y| {
        if (x - center.x).powi(2) + (y - center.y).powi(2) <= radius * radius {
            1.0
        } else {
            0.0
        }
    }))
}

pub fn ball(n: usize, rng: &mut impl Rng) -> GridField {
    let sp = 1.0 / n as f64;
    let radius = rng.gen_range((1.5 * sp).min(0.1)..=0.1);
    ball_at(n, Point::new(rng.gen_range(0.3..0.7), rng.gen_range(0.3..0.7)), radius)
}

/// Indicator of a thin rotated rectangle.
pub fn strip(n: usize, rng: &mut impl Rng, angles: AngleRange) -> GridField {
    let sp = 1.0 / n as f64;
    let length = rng.gen_range(0.3..0.7);
    let ecc = rng.gen_range((sp / length).min(0.1)..=0.1);
    let theta = rng.gen_range(angles.lo..=angles.hi);
    let c = Point::new(rng.gen_range(0.35..0.65), rng.gen_range(0.35..0.65));
    let r = Rect::new(c, length, ecc, theta).expect("valid strip");
    normalize(GridField::from_fn(n, |x, y| if r.contains(Point::new(x, y)) { 1.0 } else { 0.0 }))
}

/// `K ≈ 1/δ` strips of eccentricity `δ` and length `length` through the domain
/// center, at equally spaced angles across `angles`; their sum, normalized.
pub fn kakeya_fan(n: usize, delta: f64, length: f64, angles: AngleRange) -> GridField {
    let sp = 1.0 / n as f64;
    let width = (delta * length).max(sp);
    let ecc = (width / length).min(1.0);
    let k = (1.0 / delta).round().max(1.0) as usize;
    let c = Point::new(0.5, 0.5);
    let strips: Vec<Rect> = (0..k)
        .map(|i| {
            let t = if k == 1 { 0.5 } else { i as f64 / (k - 1) as f64 };
            Rect::new(c, length, ecc, angles.lo + t * (angles.hi - angles.lo)).expect("valid strip")
        })
        .collect();
    normalize(GridField::from_fn(n, |x, y| {
        strips.iter().filter(|r| r.contains(Point::new(x, y))).count() as f64
    }))
}

/// A fan with random eccentricity in `[2^-6, 2^-3]` (limited by the pixel size).
pub fn random_fan(n: usize, rng: &mut impl Rng, angles: AngleRange) -> GridField {
    let exp = rng.gen_range(3..=6);
    kakeya_fan(n, 1.0 / f64::from(1u32 << exp), rng.gen_range(0.4..0.8), angles)
}

pub fn sample(kind: FamilyKind, n: usize, rng: &mut impl Rng, angles: AngleRange) -> GridField {
    match kind {
        FamilyKind::Bump => bump(n, rng),
        FamilyKind::Ball => ball(n, rng),
        FamilyKind::Strip => strip(n, rng, angles),
        FamilyKind::KakeyaFan => random_fan(n, rng, angles),
    }
}
