//! Pixel-center membership patterns of shapes anchored at a pixel center.
//!
//! A stencil lists, row by row, the contiguous runs of pixel offsets whose
//! centers lie in the shape. Sums over a placed stencil cost one prefix
//! difference per row, and the transpose scatter costs the same.

use super::GridField;
use crate::geometry::Rect;

/// Offsets `lo..=hi` along x in row `dy`, relative to the anchor pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub dy: i32,
    pub lo: i32,
    pub hi: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    runs: Vec<Run>,
    weight: f64,
}

impl Stencil {
    pub fn new(runs: Vec<Run>, weight: f64) -> Self {
        Self { runs, weight }
    }

    /// Pixel centers inside `shape` translated to a pixel center; the weight is
    /// `spacing² / area`. The center of `shape` is ignored.
    pub fn for_rect(shape: &Rect, spacing: f64) -> Self {
        let (s, c) = shape.theta().sin_cos();
        let ext_x = 0.5 * (shape.length() * c.abs() + shape.width() * s.abs());
        let ext_y = 0.5 * (shape.length() * s.abs() + shape.width() * c.abs());
        let rx = (ext_x / spacing).ceil() as i32 + 1;
        let ry = (ext_y / spacing).ceil() as i32 + 1;
        let mut runs = Vec::new();
        for dy in -ry..=ry {
            let y = dy as f64 * spacing;
            let mut first = None;
            let mut last = None;
            for dx in -rx..=rx {
                if shape.contains_offset(dx as f64 * spacing, y) {
                    first.get_or_insert(dx);
                    last = Some(dx);
                }
            }
            if let (Some(lo), Some(hi)) = (first, last) {
                runs.push(Run { dy, lo, hi });
            }
        }
        // the anchor itself is always inside, so `runs` is never empty
        Self { runs, weight: spacing * spacing / shape.area() }
    }

    /// Centered vertical segment `{|t| <= half_len}` with weight `spacing / (2 half_len)`.
    pub fn vertical(half_len: f64, spacing: f64) -> Self {
        let r = (half_len / spacing + 1e-9).floor() as i32;
        let runs = (-r..=r).map(|dy| Run { dy, lo: 0, hi: 0 }).collect();
        Self { runs, weight: spacing / (2.0 * half_len) }
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn pixel_count(&self) -> usize {
        self.runs.iter().map(|r| (r.hi - r.lo + 1) as usize).sum()
    }

    /// Largest `|dx|` and `|dy|` reached.
    pub fn reach(&self) -> (i32, i32) {
        self.runs.iter().fold((0, 0), |(ax, ay), r| {
            (ax.max(r.lo.abs()).max(r.hi.abs()), ay.max(r.dy.abs()))
        })
    }

    pub fn contains(&self, dx: i32, dy: i32) -> bool {
        self.runs.iter().any(|r| r.dy == dy && r.lo <= dx && dx <= r.hi)
    }

    /// Unweighted sum of the field over the stencil anchored at pixel `(ai, aj)`.
    #[inline]
    pub fn sum_at(&self, prefix: &RowPrefix, ai: i32, aj: i32) -> f64 {
        let n = prefix.n as i32;
        let w = prefix.n + 1;
        let mut s = 0.0;
        for r in &self.runs {
            let row = aj + r.dy;
            if row < 0 || row >= n {
                continue;
            }
            let lo = (ai + r.lo).max(0);
            let hi = (ai + r.hi).min(n - 1);
            if lo > hi {
                continue;
            }
            let base = row as usize * w;
            s += prefix.data[base + hi as usize + 1] - prefix.data[base + lo as usize];
        }
        s
    }

    #[inline]
    pub fn average_at(&self, prefix: &RowPrefix, ai: i32, aj: i32) -> f64 {
        self.weight * self.sum_at(prefix, ai, aj)
    }

    /// Sums for the anchors `(ai0 + k, aj)`, `k < out.len()`, written into `out`.
    ///
    /// Each entry equals [`Stencil::sum_at`] bit for bit: out-of-domain runs
    /// contribute an exact zero difference of the padded prefix.
    pub fn row_sums(&self, prefix: &PaddedPrefix, ai0: i32, aj: i32, out: &mut [f64]) {
        let n = prefix.n as i32;
        out.iter_mut().for_each(|v| *v = 0.0);
        let len = out.len();
        for r in &self.runs {
            let row = aj + r.dy;
            if row < 0 || row >= n {
                continue;
            }
            let hi_start = prefix.index(row, ai0 + r.hi + 1);
            let lo_start = prefix.index(row, ai0 + r.lo);
            let his = &prefix.data[hi_start..hi_start + len];
            let los = &prefix.data[lo_start..lo_start + len];
            for ((o, h), l) in out.iter_mut().zip(his).zip(los) {
                *o += h - l;
            }
        }
    }

    /// Adds `c` to every in-domain pixel of the stencil anchored at `(ai, aj)`.
    #[inline]
    pub fn scatter(&self, acc: &mut RowAccumulator, ai: i32, aj: i32, c: f64) {
        let n = acc.n as i32;
        let w = acc.n + 1;
        for r in &self.runs {
            let row = aj + r.dy;
            if row < 0 || row >= n {
                continue;
            }
            let lo = (ai + r.lo).max(0);
            let hi = (ai + r.hi).min(n - 1);
            if lo > hi {
                continue;
            }
            let base = row as usize * w;
            acc.data[base + lo as usize] += c;
            acc.data[base + hi as usize + 1] -= c;
        }
    }
}

/// Per-row prefix sums: entry `(j, i)` is `Σ_{i' < i} f(i', j)`.
#[derive(Debug, Clone)]
pub struct RowPrefix {
    n: usize,
    data: Vec<f64>,
}

impl RowPrefix {
    pub fn build(f: &GridField) -> Self {
        let n = f.n();
        let w = n + 1;
        let mut data = vec![0.0; n * w];
        for (j, row) in f.values().chunks_exact(n).enumerate() {
            let out = &mut data[j * w..(j + 1) * w];
            let mut acc = 0.0;
            for (i, &v) in row.iter().enumerate() {
                acc += v;
                out[i + 1] = acc;
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Row prefix sums extended by `margin` columns on both sides: zero to the
/// left of the row and the row total to the right, so clamping is implicit.
#[derive(Debug, Clone)]
pub struct PaddedPrefix {
    n: usize,
    margin: usize,
    stride: usize,
    data: Vec<f64>,
}

impl PaddedPrefix {
    pub fn build(f: &GridField, margin: usize) -> Self {
        let n = f.n();
        let stride = n + 1 + 2 * margin;
        let mut data = vec![0.0; n * stride];
        for (j, row) in f.values().chunks_exact(n).enumerate() {
            let out = &mut data[j * stride..(j + 1) * stride];
            let mut acc = 0.0;
            for (i, &v) in row.iter().enumerate() {
                acc += v;
                out[margin + i + 1] = acc;
            }
            out[margin + n + 1..].iter_mut().for_each(|x| *x = acc);
        }
        Self { n, margin, stride, data }
    }

    /// Position of the prefix `Σ_{i' < x} f(i', row)`, for `x` within the margin.
    #[inline]
    fn index(&self, row: i32, x: i32) -> usize {
        let col = x + self.margin as i32;
        debug_assert!(col >= 0 && (col as usize) < self.stride);
        row as usize * self.stride + col as usize
    }

    pub fn margin(&self) -> usize {
        self.margin
    }
}

/// Row-wise difference array collecting scattered runs.
#[derive(Debug, Clone)]
pub struct RowAccumulator {
    n: usize,
    data: Vec<f64>,
}

impl RowAccumulator {
    pub fn new(n: usize) -> Self {
        Self { n, data: vec![0.0; n * (n + 1)] }
    }

    pub fn finish(self) -> GridField {
        let n = self.n;
        let w = n + 1;
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += self.data[j * w + i];
                values.push(acc);
            }
        }
        GridField::from_values(n, values)
    }
}
