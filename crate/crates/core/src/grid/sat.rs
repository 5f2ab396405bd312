use super::GridField;

/// Summed-area table: `S(i, j) = Σ_{i' < i, j' < j} f(i', j')`.
#[derive(Debug, Clone)]
pub struct SummedAreaTable {
    n: usize,
    table: Vec<f64>,
}

impl SummedAreaTable {
    pub fn build(f: &GridField) -> Self {
        let n = f.n();
        let w = n + 1;
        let mut table = vec![0.0; w * w];
        for j in 0..n {
            let mut row = 0.0;
            for i in 0..n {
                row += f.get(i, j);
                table[(j + 1) * w + i + 1] = table[j * w + i + 1] + row;
            }
        }
        Self { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.table[j * (self.n + 1) + i]
    }

    /// Sum over pixels `i0 <= i < i1`, `j0 <= j < j1` (clamped to the raster).
    pub fn box_sum(&self, i0: usize, i1: usize, j0: usize, j1: usize) -> f64 {
        let (i1, j1) = (i1.min(self.n), j1.min(self.n));
        if i0 >= i1 || j0 >= j1 {
            return 0.0;
        }
        self.at(i1, j1) - self.at(i0, j1) - self.at(i1, j0) + self.at(i0, j0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn whole_domain_of_ones() {
        let sat = SummedAreaTable::build(&GridField::constant(20, 1.0));
        assert_eq!(sat.box_sum(0, 20, 0, 20), 400.0);
    }

    #[test]
    fn single_pixel_indicator() {
        let mut f = GridField::zeros(12);
        f.set(4, 7, 1.0);
        let sat = SummedAreaTable::build(&f);
        assert_eq!(sat.box_sum(4, 5, 7, 8), 1.0);
        assert_eq!(sat.box_sum(0, 12, 0, 7), 0.0);
        assert_eq!(sat.box_sum(3, 9, 5, 12), 1.0);
        assert_eq!(sat.box_sum(5, 12, 0, 12), 0.0);
    }

    #[test]
    fn random_boxes_match_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 40;
        let f = GridField::from_fn(n, |_, _| rng.gen::<f64>());
        let sat = SummedAreaTable::build(&f);
        for _ in 0..100 {
            let (a, b) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
            let (c, d) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
            let (i0, i1) = (a.min(b), a.max(b));
            let (j0, j1) = (c.min(d), c.max(d));
            let mut direct = 0.0;
            for j in j0..j1 {
                for i in i0..i1 {
                    direct += f.get(i, j);
                }
            }
            let got = sat.box_sum(i0, i1, j0, j1);
            assert!((got - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        }
    }
}
