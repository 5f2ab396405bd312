//! Brute-force references for the fast paths: Monte Carlo intersection
//! areas, dense operator matrices from direct membership tests, a dense
//! symmetric eigensolver, and exact-versus-fast rectangle averages.

use crate::error::Result;
use crate::geometry::{rect_intersection_area, DirectionSet, Point, Rect};
use crate::grid::{rect_average_exact, GridField, RotatedSatBundle};
use crate::kernels::{composition_matrix, ttstar_matrix, Assembly, KernelMatrix};
use crate::normest::{power_iteration, PowerOptions};
use crate::operators::{DirectionFilter, RectFamily, ScaleGrid, Selector};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monte Carlo estimate of `|r1 ∩ r2|` from `samples` uniform points of `r1`,
/// with its standard error.
pub fn monte_carlo_intersection(
    r1: &Rect,
    r2: &Rect,
    samples: usize,
    rng: &mut impl Rng,
) -> (f64, f64) {
    let (u, v) = r1.axes();
    let (a, b) = (0.5 * r1.length(), 0.5 * r1.width());
    let c = r1.center();
    let mut hits = 0usize;
    for _ in 0..samples {
        let s: f64 = rng.gen_range(-a..=a);
        let t: f64 = rng.gen_range(-b..=b);
        let p = Point::new(c.x + s * u[0] + t * v[0], c.y + s * u[1] + t * v[1]);
        hits += r2.contains(p) as usize;
    }
    let m = samples as f64;
    let p = hits as f64 / m;
    let area = r1.area();
    // a one-sample floor keeps the error positive when every sample agrees
    let se = area * (p * (1.0 - p) / m).sqrt().max(1.0 / m);
    (area * p, se)
}

/// Dense `n² × n²` matrix of `f ↦ Σ_terms coeff · (1/|R|) Σ_{y ∈ R} f(y) spacing²`,
/// where `rects_of(p)` lists the `(rectangle, coeff)` terms of pixel `p`.
pub fn dense_averaging_matrix(n: usize, rects_of: impl Fn(usize) -> Vec<(Rect, f64)>) -> DMatrix<f64> {
    let side = n * n;
    let sp = 1.0 / n as f64;
    let mut m = DMatrix::zeros(side, side);
    for x in 0..side {
        for (r, coeff) in rects_of(x) {
            let w = coeff * sp * sp / r.area();
            for y in 0..side {
                let c = Point::new(((y % n) as f64 + 0.5) * sp, ((y / n) as f64 + 0.5) * sp);
                if r.contains(c) {
                    m[(x, y)] += w;
                }
            }
        }
    }
    m
}

/// Dense `T` of a selector.
pub fn dense_t(phi: &Selector) -> DMatrix<f64> {
    dense_averaging_matrix(phi.n(), |p| vec![(phi.rect(p), phi.coeff(p))])
}

/// Dense `T̃` (doubled rectangles).
pub fn dense_ttilde(phi: &Selector) -> DMatrix<f64> {
    dense_averaging_matrix(phi.n(), |p| vec![(phi.rect(p).doubled(), phi.coeff(p))])
}

/// Dense `T₀` (doubled rectangles turned to both sector endpoint slopes).
pub fn dense_t0(phi: &Selector) -> Result<DMatrix<f64>> {
    let dirs = phi.family().directions();
    let mut rects = Vec::with_capacity(phi.n() * phi.n());
    for p in 0..phi.n() * phi.n() {
        let (upper, lower) = dirs.sector_endpoint_angles(phi.sector(p))?;
        let r = phi.rect(p);
        rects.push(vec![(r.reslope(upper), phi.coeff(p)), (r.reslope(lower), phi.coeff(p))]);
    }
    Ok(dense_averaging_matrix(phi.n(), |p| rects[p].clone()))
}

/// Smallest and largest eigenvalues of a symmetric matrix.
pub fn eigen_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    let eig = SymmetricEigen::new(m.clone());
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `A Aᵀ` for a `dim × dim` matrix `A` of uniform entries in `[-1, 1)`.
pub fn random_psd(dim: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    &a * a.transpose()
}

/// Relative gap between power iteration and the dense top eigenvalue.
pub fn power_vs_dense(m: &DMatrix<f64>, start: &[f64], opts: &PowerOptions) -> Result<f64> {
    let (_, top) = eigen_extremes(m);
    let eig = power_iteration(
        |v| (m * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec(),
        start,
        opts,
    )?;
    Ok((eig.value - top).abs() / top.abs().max(f64::MIN_POSITIVE))
}

/// One line of the oracle report.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl OracleRow {
    pub fn pass(&self) -> bool {
        self.deviation.is_finite() && self.deviation <= self.tolerance
    }
}

/// Parameters of the oracle suite.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Raster side for the dense kernel oracles (at most the dense cap).
    pub n: usize,
    pub seed: u64,
    /// Random rectangle pairs for the Monte Carlo intersection oracle.
    pub mc_pairs: usize,
    pub mc_samples: usize,
    /// Random `(field, rectangle)` pairs for the fast-average oracle.
    pub fast_pairs: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { n: 16, seed: 1, mc_pairs: 10_000, mc_samples: 2_000, fast_pairs: 200 }
    }
}

/// The selector family used by the dense kernel oracles.
pub fn oracle_selector(n: usize, seed: u64) -> Result<Selector> {
    let dirs = DirectionSet::uniform(4)?;
    let scales = ScaleGrid::dyadic(2.0 / 3.0, 2, 0..=1, 3)?;
    let family = RectFamily::directional(n, &dirs, &scales, DirectionFilter::All)?;
    Ok(Selector::random(&family, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn random_rect(rng: &mut impl Rng, near: Option<Point>) -> Rect {
    let c = match near {
        Some(p) => Point::new(p.x + rng.gen_range(-0.3..0.3), p.y + rng.gen_range(-0.3..0.3)),
        None => Point::new(rng.gen_range(0.2..0.8), rng.gen_range(0.2..0.8)),
    };
    Rect::new(c, rng.gen_range(0.05..0.6), rng.gen_range(0.05..1.0), rng.gen_range(0.0..std::f64::consts::PI))
        .expect("valid random rectangle")
}

/// Aggregate z-score and the fraction of pairs beyond three standard errors.
pub fn monte_carlo_agreement(pairs: usize, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut var, mut outliers) = (0.0, 0.0, 0usize);
    for _ in 0..pairs {
        let r1 = random_rect(&mut rng, None);
        let r2 = random_rect(&mut rng, Some(r1.center()));
        let exact = rect_intersection_area(&r1, &r2);
        let (mc, se) = monte_carlo_intersection(&r1, &r2, samples, &mut rng);
        sum += exact - mc;
        var += se * se;
        if (exact - mc).abs() > 3.0 * se {
            outliers += 1;
        }
    }
    let z = if var > 0.0 { sum.abs() / var.sqrt() } else { 0.0 };
    (z, outliers as f64 / pairs.max(1) as f64)
}

/// Largest `|fast − exact| / exact` divided by the documented bound
/// `3 · spacing / short side`, over random smooth fields and rectangles
/// whose short side covers at least four pixels.
pub fn fast_average_deviation(pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 64;
    let sp = 1.0 / n as f64;
    let mut worst = 0.0f64;
    let fields = 4;
    for _ in 0..fields {
        let (a, b, c) = (rng.gen_range(1.0..4.0), rng.gen_range(1.0..4.0), rng.gen_range(0.0..6.0));
        let f = GridField::from_fn(n, |x, y| 2.0 + (a * x + c).sin() * (b * y).cos());
        let mut rects = Vec::new();
        for _ in 0..pairs / fields {
            let h = rng.gen_range(0.2..0.45);
            let ecc = rng.gen_range((4.0 * sp / h)..=1.0);
            let center = Point::new(rng.gen_range(0.3..0.7), rng.gen_range(0.3..0.7));
            rects.push(Rect::new(center, h, ecc, rng.gen_range(0.0..std::f64::consts::PI))?);
        }
        let thetas: Vec<f64> = rects.iter().map(Rect::theta).collect();
        let bundle = RotatedSatBundle::prepare(&f, &thetas);
        for r in &rects {
            let exact = rect_average_exact(&f, r);
            let fast = bundle.rect_average_fast(r)?;
            let bound = 3.0 * sp / r.width();
            worst = worst.max((fast - exact).abs() / exact.abs() / bound);
        }
    }
    Ok(worst)
}

/// Runs every oracle; rows come in a fixed order.
pub fn run_oracles(cfg: &OracleConfig) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    let (z, outliers) = monte_carlo_agreement(cfg.mc_pairs, cfg.mc_samples, cfg.seed);
    rows.push(OracleRow { name: "mc_intersection_z", deviation: z, tolerance: 3.0 });
    rows.push(OracleRow { name: "mc_intersection_outliers", deviation: outliers, tolerance: 0.01 });

    let phi = oracle_selector(cfg.n, cfg.seed)?;
    let f = GridField::from_fn(cfg.n, |x, y| 1.0 + x * (7.0 * y).sin().abs());
    let t_dense = dense_t(&phi);
    let t_fast = phi.operator().apply(&f);
    let t_ref = &t_dense * nalgebra::DVector::from_column_slice(f.values());
    rows.push(OracleRow {
        name: "dense_t",
        deviation: relative_vector_gap(t_fast.values(), t_ref.as_slice()),
        tolerance: 1e-12,
    });
    let t_adj = phi.operator().adjoint(&f);
    let t_adj_ref = t_dense.transpose() * nalgebra::DVector::from_column_slice(f.values());
    rows.push(OracleRow {
        name: "dense_t_adjoint",
        deviation: relative_vector_gap(t_adj.values(), t_adj_ref.as_slice()),
        tolerance: 1e-12,
    });

    let pix = ttstar_matrix(&phi, Assembly::Pixelated)?;
    let comp = composition_matrix(&phi.operator())?;
    rows.push(OracleRow { name: "ttstar_pixelated", deviation: comp.relative_gap(&pix), tolerance: 1e-9 });
    let geo = ttstar_matrix(&phi, Assembly::Geometric)?;
    rows.push(OracleRow {
        name: "ttstar_geometric",
        deviation: geo.relative_gap(&pix),
        tolerance: geometric_tolerance(&phi),
    });
    let k = pix.to_dmatrix();
    let (lo, hi) = eigen_extremes(&k);
    rows.push(OracleRow { name: "ttstar_psd", deviation: (-lo / hi).max(0.0), tolerance: 1e-8 });

    let opts = PowerOptions { tol: 1e-12, max_iter: 20_000, precheck: true };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let psd = random_psd(50, &mut rng);
    let start: Vec<f64> = (0..50).map(|_| rng.gen_range(0.5..1.5)).collect();
    rows.push(OracleRow {
        name: "power_vs_dense_50",
        deviation: power_vs_dense(&psd, &start, &opts)?,
        tolerance: 1e-6,
    });
    let start: Vec<f64> = (0..k.nrows()).map(|_| rng.gen_range(0.5..1.5)).collect();
    rows.push(OracleRow {
        name: "power_vs_dense_ttstar",
        deviation: power_vs_dense(&k, &start, &opts)?,
        tolerance: 1e-6,
    });
    rows.push(OracleRow {
        name: "fast_vs_exact_average",
        deviation: fast_average_deviation(cfg.fast_pairs, cfg.seed)?,
        tolerance: 1.0,
    });
    Ok(rows)
}

/// `3 · spacing / smallest side` over the selector's rectangles.
pub fn geometric_tolerance(phi: &Selector) -> f64 {
    let n = phi.n();
    let min_side = (0..n * n).map(|p| phi.rect(p).width()).fold(f64::INFINITY, f64::min);
    3.0 / (n as f64 * min_side)
}

fn relative_vector_gap(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let base: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if base == 0.0 {
        diff
    } else {
        diff / base
    }
}

/// Dense `T T*` of a selector as a kernel matrix.
pub fn dense_ttstar(phi: &Selector) -> KernelMatrix {
    let t = dense_t(phi);
    let m = &t * t.transpose();
    let side = m.nrows();
    let mut data = Vec::with_capacity(side * side);
    for r in 0..side {
        for c in 0..side {
            data.push(m[(r, c)]);
        }
    }
    KernelMatrix::from_data(phi.n(), data)
}
