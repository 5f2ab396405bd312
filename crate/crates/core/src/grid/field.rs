use crate::geometry::Point;

/// Nonnegative samples on an `n × n` raster over `[0,1]²`.
///
/// Pixel `(i, j)` covers `[i/n, (i+1)/n) × [j/n, (j+1)/n)`; `i` runs along x.
/// Storage is row-major with row index `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    n: usize,
    values: Vec<f64>,
}

impl GridField {
    pub fn zeros(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    pub fn constant(n: usize, value: f64) -> Self {
        assert!(n > 0, "grid side must be positive");
        Self { n, values: vec![value; n * n] }
    }

    /// Samples `f` at the pixel centers.
    pub fn from_fn(n: usize, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        assert!(n > 0, "grid side must be positive");
        let sp = 1.0 / n as f64;
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                values.push(f((i as f64 + 0.5) * sp, (j as f64 + 0.5) * sp));
            }
        }
        Self { n, values }
    }

    pub fn from_values(n: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n * n, "value count must be n²");
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[j * self.n + i] = v;
    }

    pub fn pixel_center(&self, i: usize, j: usize) -> Point {
        let sp = self.spacing();
        Point::new((i as f64 + 0.5) * sp, (j as f64 + 0.5) * sp)
    }

    /// `Σ f g · spacing²`
    pub fn dot(&self, other: &GridField) -> f64 {
        debug_assert_eq!(self.n, other.n);
        let sp = self.spacing();
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() * sp * sp
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridField {
        GridField { n: self.n, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn abs(&self) -> GridField {
        self.map(f64::abs)
    }

    pub fn scaled(&self, c: f64) -> GridField {
        self.map(|v| c * v)
    }

    pub fn zip_with(&self, other: &GridField, f: impl Fn(f64, f64) -> f64) -> GridField {
        assert_eq!(self.n, other.n, "grid sizes differ");
        GridField {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Rescaled to unit L² norm; `None` for the zero field.
    pub fn normalized(&self) -> Option<GridField> {
        let norm = self.l2_norm();
        (norm > 0.0 && norm.is_finite()).then(|| self.scaled(1.0 / norm))
    }

    /// Keeps values on pixels whose centers lie at distance `>= margin` from the boundary.
    pub fn interior_mask(&self, margin: f64) -> Vec<bool> {
        let n = self.n;
        let sp = self.spacing();
        let mut mask = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let x = (i as f64 + 0.5) * sp;
                let y = (j as f64 + 0.5) * sp;
                let d = x.min(y).min(1.0 - x).min(1.0 - y);
                mask.push(d >= margin);
            }
        }
        mask
    }

    /// Bilinear interpolation between pixel centers, zero beyond the raster.
    pub fn bilinear(&self, p: Point) -> f64 {
        let n = self.n as i64;
        let gx = p.x * self.n as f64 - 0.5;
        let gy = p.y * self.n as f64 - 0.5;
        let (fx, fy) = (gx.floor(), gy.floor());
        let (tx, ty) = (gx - fx, gy - fy);
        let (i0, j0) = (fx as i64, fy as i64);
        let at = |i: i64, j: i64| {
            if (0..n).contains(&i) && (0..n).contains(&j) {
                self.values[(j * n + i) as usize]
            } else {
                0.0
            }
        };
        (1.0 - ty) * ((1.0 - tx) * at(i0, j0) + tx * at(i0 + 1, j0))
            + ty * ((1.0 - tx) * at(i0, j0 + 1) + tx * at(i0 + 1, j0 + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_constant() {
        let f = GridField::constant(16, 2.0);
        assert!((f.l2_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bilinear_hits_pixel_values() {
        let f = GridField::from_fn(8, |x, y| x * 3.0 + y);
        assert_eq!(f.bilinear(f.pixel_center(3, 5)), f.get(3, 5));
        let mid = Point::new(4.0 / 8.0, 5.5 / 8.0);
        let expected = 0.5 * (f.get(3, 5) + f.get(4, 5));
        assert!((f.bilinear(mid) - expected).abs() < 1e-12);
    }

    #[test]
    fn interior_mask_counts() {
        let f = GridField::zeros(10);
        let mask = f.interior_mask(0.2);
        assert_eq!(mask.iter().filter(|&&m| m).count(), 36);
    }
}
