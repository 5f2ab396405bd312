//! Rotated rectangles, their intersections, and direction sets.

mod clip;
mod directions;

pub use clip::{clip_polygon, polygon_area, HalfPlane};
pub use directions::{AnchorRule, DirectionKind, DirectionSet};

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Absolute slack applied to containment and clipping predicates.
pub const GEOM_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// A closed rectangle with longest side `h` pointing along `theta`.
///
/// The short side is `ecc * h`, so `ecc` must lie in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    center: Point,
    h: f64,
    ecc: f64,
    theta: f64,
}

impl Rect {
    /// Builds a rectangle, reducing `theta` into `[0, π)`.
    pub fn new(center: Point, h: f64, ecc: f64, theta: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidRect(format!("length must be positive, got {h}")));
        }
        if !(ecc > 0.0 && ecc <= 1.0) {
            return Err(Error::InvalidRect(format!("eccentricity must lie in (0, 1], got {ecc}")));
        }
        if !(theta.is_finite() && center.x.is_finite() && center.y.is_finite()) {
            return Err(Error::InvalidRect("non-finite center or angle".into()));
        }
        let mut theta = theta.rem_euclid(PI);
        if theta >= PI {
            theta = 0.0;
        }
        Ok(Self { center, h, ecc, theta })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn length(&self) -> f64 {
        self.h
    }

    pub fn ecc(&self) -> f64 {
        self.ecc
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn width(&self) -> f64 {
        self.ecc * self.h
    }

    pub fn area(&self) -> f64 {
        self.ecc * self.h * self.h
    }

    /// Unit vectors along the long and the short side.
    pub fn axes(&self) -> ([f64; 2], [f64; 2]) {
        let (s, c) = self.theta.sin_cos();
        ([c, s], [-s, c])
    }

    /// Coordinates of `center + (dx, dy)` in the rectangle's own frame.
    #[inline]
    pub fn local(&self, dx: f64, dy: f64) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (dx * c + dy * s, -dx * s + dy * c)
    }

    /// Containment of the displacement `(dx, dy)` measured from the center.
    #[inline]
    pub fn contains_offset(&self, dx: f64, dy: f64) -> bool {
        let (u, v) = self.local(dx, dy);
        u.abs() <= 0.5 * self.h + GEOM_EPS && v.abs() <= 0.5 * self.width() + GEOM_EPS
    }

    pub fn contains(&self, p: Point) -> bool {
        self.contains_offset(p.x - self.center.x, p.y - self.center.y)
    }

    /// Corners in counter-clockwise order.
    pub fn vertices(&self) -> [Point; 4] {
        let (u, v) = self.axes();
        let (a, b) = (0.5 * self.h, 0.5 * self.width());
        let c = self.center;
        let at = |su: f64, sv: f64| {
            Point::new(c.x + su * a * u[0] + sv * b * v[0], c.y + su * a * u[1] + sv * b * v[1])
        };
        [at(-1.0, -1.0), at(1.0, -1.0), at(1.0, 1.0), at(-1.0, 1.0)]
    }

    /// The four inward half-planes bounding the rectangle.
    pub fn half_planes(&self) -> [HalfPlane; 4] {
        let (u, v) = self.axes();
        let cu = u[0] * self.center.x + u[1] * self.center.y;
        let cv = v[0] * self.center.x + v[1] * self.center.y;
        let (a, b) = (0.5 * self.h, 0.5 * self.width());
        [
            HalfPlane::new([u[0], u[1]], cu + a),
            HalfPlane::new([-u[0], -u[1]], -cu + a),
            HalfPlane::new([v[0], v[1]], cv + b),
            HalfPlane::new([-v[0], -v[1]], -cv + b),
        ]
    }

    /// Same center and slope, both sides doubled.
    pub fn doubled(&self) -> Rect {
        Rect { h: 2.0 * self.h, ..*self }
    }

    /// Same center, both sides doubled, long side turned to `theta`.
    pub fn reslope(&self, theta: f64) -> Rect {
        Rect { h: 2.0 * self.h, ..*self }.with_theta(theta)
    }

    pub fn with_center(&self, center: Point) -> Rect {
        Rect { center, ..*self }
    }

    fn with_theta(self, theta: f64) -> Rect {
        let mut theta = theta.rem_euclid(PI);
        if theta >= PI {
            theta = 0.0;
        }
        Rect { theta, ..self }
    }
}

/// Area of `r1 ∩ r2`, by clipping the corners of `r1` against the sides of `r2`.
pub fn rect_intersection_area(r1: &Rect, r2: &Rect) -> f64 {
    let dx = r1.center.x - r2.center.x;
    let dy = r1.center.y - r2.center.y;
    let reach = 0.5 * (r1.h + r2.h) * std::f64::consts::SQRT_2;
    if dx * dx + dy * dy > reach * reach {
        return 0.0;
    }
    let poly = clip_polygon(&r1.vertices(), &r2.half_planes());
    let area = polygon_area(&poly);
    area.clamp(0.0, r1.area().min(r2.area()))
}

/// Area of `r ∩ [0,1]²`.
pub fn rect_domain_area(r: &Rect) -> f64 {
    let planes = unit_square_planes();
    polygon_area(&clip_polygon(&r.vertices(), &planes)).max(0.0)
}

/// Area of `r1 ∩ r2 ∩ [0,1]²`.
pub fn rect_intersection_area_in_domain(r1: &Rect, r2: &Rect) -> f64 {
    if rect_intersection_area(r1, r2) <= 0.0 {
        return 0.0;
    }
    let poly = clip_polygon(&r1.vertices(), &r2.half_planes());
    polygon_area(&clip_polygon(&poly, &unit_square_planes())).max(0.0)
}

fn unit_square_planes() -> [HalfPlane; 4] {
    [
        HalfPlane::new([1.0, 0.0], 1.0),
        HalfPlane::new([-1.0, 0.0], 0.0),
        HalfPlane::new([0.0, 1.0], 1.0),
        HalfPlane::new([0.0, -1.0], 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    fn rect(cx: f64, cy: f64, h: f64, ecc: f64, theta: f64) -> Rect {
        Rect::new(Point::new(cx, cy), h, ecc, theta).unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(Rect::new(Point::default(), 0.0, 0.5, 0.0).is_err());
        assert!(Rect::new(Point::default(), 1.0, 0.0, 0.0).is_err());
        assert!(Rect::new(Point::default(), 1.0, 1.5, 0.0).is_err());
        assert!(Rect::new(Point::default(), f64::NAN, 0.5, 0.0).is_err());
    }

    #[test]
    fn area_is_ecc_h_squared() {
        let r = rect(0.3, 0.2, 0.8, 0.25, 1.1);
        assert_eq!(r.area(), 0.25 * 0.8 * 0.8);
    }

    #[test]
    fn containment_axis_aligned() {
        let r = rect(0.0, 0.0, 2.0, 0.5, 0.0);
        assert!(r.contains(Point::new(0.0, 0.0)));
        assert!(!r.contains(Point::new(1.01, 0.0)));
        assert!(r.contains(Point::new(1.0, 0.5)));
    }

    #[test]
    fn containment_rotated_quarter_turn() {
        let r = rect(0.0, 0.0, 2.0, 0.5, std::f64::consts::FRAC_PI_2);
        // long side is now vertical with half-length 1, horizontal half-extent 0.5
        assert!(r.contains(Point::new(0.4, 0.0)));
        assert!(!r.contains(Point::new(0.6, 0.0)));
        assert!(r.contains(Point::new(0.0, 0.9)));
        assert!(!r.contains(Point::new(0.0, 1.1)));
    }

    #[test]
    fn theta_is_reduced_mod_pi() {
        let r = rect(0.0, 0.0, 1.0, 0.5, std::f64::consts::PI + 0.25);
        assert!(close(r.theta(), 0.25, 1e-12));
    }

    #[test]
    fn self_intersection_is_area() {
        let r = rect(0.4, 0.6, 0.7, 0.3, 0.9);
        assert!(close(rect_intersection_area(&r, &r), r.area(), 1e-12));
        let sq = rect(0.0, 0.0, 1.0, 1.0, 0.0);
        assert!(close(rect_intersection_area(&sq, &sq), 1.0, 1e-12));
    }

    #[test]
    fn disjoint_rects_have_zero_overlap() {
        let a = rect(0.0, 0.0, 1.0, 1.0, 0.0);
        let b = rect(10.0, 0.0, 1.0, 1.0, 0.0);
        assert_eq!(rect_intersection_area(&a, &b), 0.0);
    }

    #[test]
    fn edge_touching_rects_have_zero_overlap() {
        let a = rect(0.0, 0.0, 1.0, 1.0, 0.0);
        let b = rect(1.0, 0.0, 1.0, 1.0, 0.0);
        assert!(rect_intersection_area(&a, &b).abs() < 1e-12);
    }

    #[test]
    fn square_and_rotated_square_form_octagon() {
        let a = rect(0.0, 0.0, 1.0, 1.0, 0.0);
        let b = rect(0.0, 0.0, 1.0, 1.0, std::f64::consts::FRAC_PI_4);
        let expected = 2.0 * (std::f64::consts::SQRT_2 - 1.0);
        assert!(close(rect_intersection_area(&a, &b), expected, 1e-12));
    }

    #[test]
    fn doubling_keeps_center_and_slope() {
        let r = rect(0.1, 0.2, 1.0, 0.5, 0.7);
        let d = r.doubled();
        assert_eq!(d.center(), r.center());
        assert_eq!(d.theta(), r.theta());
        assert_eq!(d.length(), 2.0);
        assert_eq!(d.ecc(), 0.5);
        assert!(close(d.area(), 4.0 * r.area(), 1e-15));
        assert!(close(rect_intersection_area(&r, &d), r.area(), 1e-12));
    }

    #[test]
    fn reslope_doubles_and_turns() {
        let r = rect(0.5, 0.5, 0.2, 0.25, 0.3);
        let s = r.reslope(0.1);
        assert_eq!(s.center(), r.center());
        assert_eq!(s.length(), 0.4);
        assert_eq!(s.theta(), 0.1);
        assert_eq!(r.reslope(r.theta()), r.doubled());
        let back = r.reslope(0.1).reslope(0.3);
        assert_ne!(back, r);
        assert_eq!(back.length(), 4.0 * r.length());
    }

    #[test]
    fn domain_restricted_area() {
        let r = rect(0.0, 0.5, 0.5, 1.0, 0.0);
        assert!(close(rect_domain_area(&r), 0.125, 1e-12));
        let inside = rect(0.5, 0.5, 0.2, 0.5, 0.4);
        assert!(close(rect_intersection_area_in_domain(&inside, &inside), inside.area(), 1e-12));
    }
}
