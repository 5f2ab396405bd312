//! Sutherland–Hodgman clipping of a convex polygon by half-planes.

use super::{Point, GEOM_EPS};

/// `{p : normal · p <= offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl HalfPlane {
    pub const fn new(normal: [f64; 2], offset: f64) -> Self {
        Self { normal, offset }
    }

    #[inline]
    fn signed_excess(&self, p: Point) -> f64 {
        self.normal[0] * p.x + self.normal[1] * p.y - self.offset
    }
}

/// Clips `subject` successively against each half-plane.
pub fn clip_polygon(subject: &[Point], planes: &[HalfPlane]) -> Vec<Point> {
    let mut poly: Vec<Point> = subject.to_vec();
    let mut next = Vec::with_capacity(poly.len() + planes.len());
    for plane in planes {
        if poly.is_empty() {
            break;
        }
        next.clear();
        let m = poly.len();
        for i in 0..m {
            let cur = poly[i];
            let prev = poly[(i + m - 1) % m];
            let dc = plane.signed_excess(cur);
            let dp = plane.signed_excess(prev);
            let cur_in = dc <= GEOM_EPS;
            let prev_in = dp <= GEOM_EPS;
            if cur_in {
                if !prev_in {
                    next.push(crossing(prev, cur, dp, dc));
                }
                next.push(cur);
            } else if prev_in {
                next.push(crossing(prev, cur, dp, dc));
            }
        }
        std::mem::swap(&mut poly, &mut next);
    }
    poly
}

fn crossing(a: Point, b: Point, da: f64, db: f64) -> Point {
    let denom = da - db;
    if denom.abs() < f64::MIN_POSITIVE {
        return a;
    }
    let t = da / denom;
    Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

/// Shoelace area (positive for counter-clockwise input).
pub fn polygon_area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        twice += a.x * b.y - b.x * a.y;
    }
    0.5 * twice
}
