use maxavg::geometry::{AnchorRule, DirectionKind};
use maxavg::operators::{apply_t, apply_t_adjoint, DirectionFilter, RectFamily, ScaleGrid, Selector};
use maxavg::{rect_average_exact, rect_intersection_area, DirectionSet, GridField, Point, Rect, SummedAreaTable};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const N: usize = 16;

fn rect() -> impl Strategy<Value = Rect> {
    (0.1f64..0.9, 0.1f64..0.9, 0.05f64..0.6, 0.05f64..=1.0, 0.0f64..PI)
        .prop_map(|(x, y, h, e, t)| Rect::new(Point::new(x, y), h, e, t).unwrap())
}

fn field(n: usize) -> impl Strategy<Value = GridField> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| GridField::from_values(n, v))
}

fn nonneg_field(n: usize) -> impl Strategy<Value = GridField> {
    prop::collection::vec(0.0f64..1.0, n * n).prop_map(move |v| GridField::from_values(n, v))
}

fn family() -> RectFamily {
    let dirs = DirectionSet::new(DirectionKind::Uniform(4), AnchorRule::EveryKth(2)).unwrap();
    let scales = ScaleGrid::dyadic(1.0 / 3.0, 2, 0..=1, 3).unwrap();
    RectFamily::directional(N, &dirs, &scales, DirectionFilter::All).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_is_symmetric_and_bounded(a in rect(), b in rect()) {
        let ab = rect_intersection_area(&a, &b);
        let ba = rect_intersection_area(&b, &a);
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!(ab >= 0.0);
        prop_assert!(ab <= a.area().min(b.area()) + 1e-12);
    }

    #[test]
    fn self_intersection_is_the_area(a in rect()) {
        prop_assert!((rect_intersection_area(&a, &a) - a.area()).abs() <= 1e-12 * a.area().max(1.0));
    }

    #[test]
    fn doubling_contains_the_original(a in rect(), theta in 0.0f64..PI) {
        prop_assert!((rect_intersection_area(&a, &a.doubled()) - a.area()).abs() <= 1e-10);
        let r = a.reslope(theta);
        prop_assert!((r.area() - 4.0 * a.area()).abs() <= 1e-12);
        prop_assert!((r.length() - 2.0 * a.length()).abs() <= 1e-15);
    }

    #[test]
    fn sectors_partition_the_directions(count in 1usize..40, every in 1usize..6) {
        let dirs = DirectionSet::new(DirectionKind::Uniform(count), AnchorRule::EveryKth(every)).unwrap();
        let mut seen = vec![0usize; dirs.len()];
        for s in dirs.sectors() {
            for i in dirs.sector_members(s) {
                seen[i] += 1;
                prop_assert_eq!(dirs.sector_of(i), s);
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn exact_average_is_linear_and_monotone(
        f in nonneg_field(N),
        g in nonneg_field(N),
        a in -2.0f64..2.0,
        r in rect(),
    ) {
        let combo = f.zip_with(&g, |x, y| a * x + y);
        let lhs = rect_average_exact(&combo, &r);
        let rhs = a * rect_average_exact(&f, &r) + rect_average_exact(&g, &r);
        prop_assert!((lhs - rhs).abs() <= 1e-9);
        let bigger = f.zip_with(&g, |x, y| x + y);
        prop_assert!(rect_average_exact(&bigger, &r) >= rect_average_exact(&f, &r) - 1e-12);
    }

    #[test]
    fn summed_area_table_matches_direct_sums(f in field(N), i0 in 0usize..N, j0 in 0usize..N, di in 0usize..N, dj in 0usize..N) {
        let sat = SummedAreaTable::build(&f);
        let (i1, j1) = ((i0 + di).min(N), (j0 + dj).min(N));
        let mut direct = 0.0;
        for j in j0..j1 {
            for i in i0..i1 {
                direct += f.get(i, j);
            }
        }
        prop_assert!((sat.box_sum(i0, i1, j0, j1) - direct).abs() <= 1e-10);
    }

    #[test]
    fn maximal_operator_is_sublinear_and_monotone(f in field(N), g in field(N), c in -3.0f64..3.0) {
        let fam = family();
        let mf = fam.sup(&f.abs()).values;
        let mg = fam.sup(&g.abs()).values;
        let sum = fam.sup(&f.zip_with(&g, |x, y| x + y).abs()).values;
        let scaled = fam.sup(&f.scaled(c).abs()).values;
        for p in 0..N * N {
            prop_assert!(sum.values()[p] <= mf.values()[p] + mg.values()[p] + 1e-12);
            prop_assert!((scaled.values()[p] - c.abs() * mf.values()[p]).abs() <= 1e-12 * (1.0 + mf.values()[p]));
        }
        let bigger = fam.sup(&f.abs().zip_with(&g.abs(), |x, y| x + y)).values;
        for p in 0..N * N {
            prop_assert!(bigger.values()[p] >= mf.values()[p] - 1e-12);
        }
    }

    #[test]
    fn linearized_operator_is_adjoint(f in field(N), g in field(N), seed in 0u64..1000) {
        let phi = Selector::random(&family(), &mut ChaCha8Rng::seed_from_u64(seed));
        let lhs = apply_t(&phi, &f).dot(&g);
        let rhs = f.dot(&apply_t_adjoint(&phi, &g));
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }
}
