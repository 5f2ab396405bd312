//! Raster functions on the unit square, zero-extended outside it.

mod field;
mod io;
mod rotated;
mod sat;
mod stencil;

pub use field::GridField;
pub use io::{read_field, write_field_binary, write_field_text};
pub use rotated::{RotatedSatBundle, RotatedTable};
pub use sat::SummedAreaTable;
pub use stencil::{PaddedPrefix, RowAccumulator, RowPrefix, Run, Stencil};

use crate::geometry::{Point, Rect};

/// Mean of `f` over the pixel centers inside `r`, divided by the continuous area of `r`.
///
/// Pixels outside the domain count as zero. When no lattice center falls
/// inside `r`, the bilinear interpolant of `f` at the center of `r` is returned.
pub fn rect_average_exact(f: &GridField, r: &Rect) -> f64 {
    let n = f.n() as i64;
    let sp = f.spacing();
    let c = r.center();
    let reach = 0.5 * (r.length() + r.width()) / sp + 2.0;
    let ci = c.x / sp - 0.5;
    let cj = c.y / sp - 0.5;
    let (i0, i1) = ((ci - reach).floor() as i64, (ci + reach).ceil() as i64);
    let (j0, j1) = ((cj - reach).floor() as i64, (cj + reach).ceil() as i64);
    let mut sum = 0.0;
    let mut hit = false;
    for j in j0..=j1 {
        let y = (j as f64 + 0.5) * sp;
        for i in i0..=i1 {
            let x = (i as f64 + 0.5) * sp;
            if r.contains(Point::new(x, y)) {
                hit = true;
                if (0..n).contains(&i) && (0..n).contains(&j) {
                    sum += f.get(i as usize, j as usize);
                }
            }
        }
    }
    if hit {
        sum * sp * sp / r.area()
    } else {
        f.bilinear(c)
    }
}
