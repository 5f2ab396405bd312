//! Dense `T T*` kernels for a fixed selector and their split by sector.
//!
//! For `T f(x) = c_x · average of f over R_x`, the composition `T T*` is the
//! integral operator with kernel `c_x c_z |R_x ∩ R_z| / (|R_x| |R_z|)`. A
//! [`KernelMatrix`] stores that kernel times `spacing²`, so that its action on
//! the pixel values of `g` is exactly the discrete `T T* g`.

use crate::error::{Error, Result};
use crate::geometry::{rect_intersection_area, rect_intersection_area_in_domain};
use crate::grid::GridField;
use crate::operators::{AveragingOperator, Selector};
use rayon::prelude::*;
use std::io::Write;

/// Largest raster side accepted by dense assembly (matrix side `32² = 1024`).
pub const DENSE_CAP: usize = 32;

/// How `|R_x ∩ R_z|` is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assembly {
    /// Shared in-domain pixel centers times `spacing²`.
    Pixelated,
    /// Polygon-clipped area of the intersection inside the unit square.
    Geometric,
}

/// Dense square matrix indexed by pixels `p = j·n + i`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    grid: usize,
    data: Vec<f64>,
}

impl KernelMatrix {
    pub fn from_data(grid: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), grid.pow(4), "matrix side must be grid²");
        Self { grid, data }
    }

    pub fn zeros(grid: usize) -> Self {
        Self { grid, data: vec![0.0; grid.pow(4)] }
    }

    /// Raster side `n`; the matrix side is `n²`.
    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn side(&self) -> usize {
        self.grid * self.grid
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.side() + col]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let s = self.side();
        &self.data[r * s..(r + 1) * s]
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F / ‖other‖_F` (absolute gap when `other` vanishes).
    pub fn relative_gap(&self, other: &KernelMatrix) -> f64 {
        assert_eq!(self.grid, other.grid);
        let diff: f64 =
            self.data.iter().zip(&other.data).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let base = other.frobenius();
        if base == 0.0 {
            diff
        } else {
            diff / base
        }
    }

    /// Largest `|K(x,z) − K(z,x)|` relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let s = self.side();
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for r in 0..s {
            for c in r + 1..s {
                worst = worst.max((self.get(r, c) - self.get(c, r)).abs());
            }
        }
        worst / scale
    }

    pub fn min_entry(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Matrix-vector product on pixel values.
    pub fn apply(&self, g: &GridField) -> GridField {
        assert_eq!(g.n(), self.grid);
        let v = g.values();
        let out = (0..self.side())
            .into_par_iter()
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        GridField::from_values(self.grid, out)
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        let s = self.side();
        nalgebra::DMatrix::from_row_slice(s, s, &self.data)
    }

    /// Writes every nonzero entry as a `row col value` line.
    pub fn write_triplets(&self, mut w: impl Write) -> Result<()> {
        let s = self.side();
        for r in 0..s {
            for c in 0..s {
                let v = self.get(r, c);
                if v != 0.0 {
                    writeln!(w, "{r} {c} {v:e}")?;
                }
            }
        }
        Ok(())
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > DENSE_CAP {
        Err(Error::TooLarge { n, cap: DENSE_CAP })
    } else {
        Ok(())
    }
}

/// `c_x c_z |R_x ∩ R_z| / (|R_x| |R_z|)` for the rectangles chosen at pixels `x` and `z`.
pub fn ttstar_kernel(phi: &Selector, x: usize, z: usize) -> f64 {
    let (rx, rz) = (phi.rect(x), phi.rect(z));
    phi.coeff(x) * phi.coeff(z) * rect_intersection_area(&rx, &rz) / (rx.area() * rz.area())
}

/// Same as [`ttstar_kernel`] with the intersection restricted to the unit square.
pub fn ttstar_kernel_in_domain(phi: &Selector, x: usize, z: usize) -> f64 {
    let (rx, rz) = (phi.rect(x), phi.rect(z));
    phi.coeff(x) * phi.coeff(z) * rect_intersection_area_in_domain(&rx, &rz)
        / (rx.area() * rz.area())
}

/// In-domain pixels whose centers lie in `R_x`, as a bitset over `n²` pixels.
fn membership_bits(phi: &Selector, x: usize) -> Vec<u64> {
    let n = phi.n();
    let mut bits = vec![0u64; (n * n).div_ceil(64)];
    let r = phi.rect(x);
    let sp = 1.0 / n as f64;
    for j in 0..n {
        for i in 0..n {
            let c = crate::geometry::Point::new((i as f64 + 0.5) * sp, (j as f64 + 0.5) * sp);
            if r.contains(c) {
                let p = j * n + i;
                bits[p / 64] |= 1 << (p % 64);
            }
        }
    }
    bits
}

/// Dense `spacing² · K` over all pixel pairs.
pub fn ttstar_matrix(phi: &Selector, assembly: Assembly) -> Result<KernelMatrix> {
    let n = phi.n();
    check_cap(n)?;
    let side = n * n;
    let sp2 = 1.0 / (side as f64);
    let mut data = vec![0.0; side * side];
    match assembly {
        Assembly::Pixelated => {
            let bits: Vec<Vec<u64>> = (0..side).into_par_iter().map(|x| membership_bits(phi, x)).collect();
            let scale: Vec<f64> = (0..side).map(|x| phi.coeff(x) / phi.rect(x).area()).collect();
            data.par_chunks_mut(side).enumerate().for_each(|(x, row)| {
                for (z, slot) in row.iter_mut().enumerate() {
                    let shared: u32 =
                        bits[x].iter().zip(&bits[z]).map(|(a, b)| (a & b).count_ones()).sum();
                    *slot = scale[x] * scale[z] * f64::from(shared) * sp2 * sp2;
                }
            });
        }
        Assembly::Geometric => {
            data.par_chunks_mut(side).enumerate().for_each(|(x, row)| {
                for (z, slot) in row.iter_mut().enumerate() {
                    *slot = ttstar_kernel_in_domain(phi, x, z) * sp2;
                }
            });
        }
    }
    Ok(KernelMatrix { grid: n, data })
}

/// The dense matrix of `A A*` built column by column from the operator actions.
pub fn composition_matrix(op: &AveragingOperator) -> Result<KernelMatrix> {
    let n = op.n();
    check_cap(n)?;
    let side = n * n;
    let cols: Vec<Vec<f64>> = (0..side)
        .into_par_iter()
        .map(|z| {
            let mut e = GridField::zeros(n);
            e.values_mut()[z] = 1.0;
            op.apply(&op.adjoint(&e)).into_values()
        })
        .collect();
    let mut data = vec![0.0; side * side];
    for (z, col) in cols.iter().enumerate() {
        for (x, v) in col.iter().enumerate() {
            data[x * side + z] = *v;
        }
    }
    Ok(KernelMatrix { grid: n, data })
}

/// `K₁ = K` on same-sector pixel pairs and zero elsewhere; `K₂ = K − K₁`.
pub fn split_k(phi: &Selector, k: &KernelMatrix) -> (KernelMatrix, KernelMatrix) {
    assert_eq!(phi.n(), k.grid);
    let sectors = phi.sectors();
    let side = k.side();
    let mut k1 = vec![0.0; side * side];
    let mut k2 = vec![0.0; side * side];
    for x in 0..side {
        for z in 0..side {
            let v = k.get(x, z);
            if sectors[x] == sectors[z] {
                k1[x * side + z] = v;
            } else {
                k2[x * side + z] = v;
            }
        }
    }
    (KernelMatrix { grid: k.grid, data: k1 }, KernelMatrix { grid: k.grid, data: k2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DirectionSet;
    use crate::operators::{DirectionFilter, RectFamily, ScaleGrid};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(n: usize) -> RectFamily {
        let dirs = DirectionSet::uniform(4).unwrap();
        let scales = ScaleGrid::dyadic(2.0 / 3.0, 2, 0..=1, 3).unwrap();
        RectFamily::directional(n, &dirs, &scales, DirectionFilter::All).unwrap()
    }

    #[test]
    fn identical_rectangles_give_inverse_area() {
        let fam = family(8);
        let phi = Selector::constant(&fam, 0);
        let mut other = phi.clone();
        other.set_anchor(3, phi.anchor(0));
        let r = phi.rect(0);
        assert!((ttstar_kernel(&other, 0, 3) - 1.0 / r.area()).abs() < 1e-9 / r.area());
    }

    #[test]
    fn kernel_is_symmetric() {
        let fam = family(12);
        let phi = Selector::random(&fam, &mut ChaCha8Rng::seed_from_u64(4));
        for (x, z) in [(0, 5), (17, 140), (100, 3)] {
            let (a, b) = (ttstar_kernel(&phi, x, z), ttstar_kernel(&phi, z, x));
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} {b}");
        }
    }

    #[test]
    fn pixelated_kernel_matches_composition() {
        let fam = family(10);
        let phi = Selector::random(&fam, &mut ChaCha8Rng::seed_from_u64(9));
        let a = ttstar_matrix(&phi, Assembly::Pixelated).unwrap();
        let b = composition_matrix(&phi.operator()).unwrap();
        assert!(a.relative_gap(&b) < 1e-12, "{}", a.relative_gap(&b));
    }

    #[test]
    fn split_sums_back() {
        let fam = family(8);
        let phi = Selector::random(&fam, &mut ChaCha8Rng::seed_from_u64(1));
        let k = ttstar_matrix(&phi, Assembly::Pixelated).unwrap();
        let (k1, k2) = split_k(&phi, &k);
        for i in 0..k.data().len() {
            assert_eq!(k1.data()[i] + k2.data()[i], k.data()[i]);
        }
        let single = Selector::constant(&fam, 2);
        let (_, k2) = split_k(&single, &ttstar_matrix(&single, Assembly::Pixelated).unwrap());
        assert!(k2.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cap_is_enforced() {
        let fam = family(40);
        let phi = Selector::constant(&fam, 0);
        assert_eq!(
            ttstar_matrix(&phi, Assembly::Geometric).unwrap_err(),
            Error::TooLarge { n: 40, cap: DENSE_CAP }
        );
    }

    #[test]
    fn triplet_dump() {
        let k = KernelMatrix::from_data(1, vec![0.5]);
        let mut out = Vec::new();
        k.write_triplets(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 0 5e-1\n");
    }
}
