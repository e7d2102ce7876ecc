use proptest::prelude::*;

use qwvd_core::grid::GridGeometry;
use qwvd_core::oracle::{oracle_qolct, oracle_wvd};
use qwvd_core::qft::{natural_frequency_grid, qft_forward};
use qwvd_core::qolct::{olct_frequency_grid, qolct_fast, qolct_forward, qolct_inverse, qolct_plancherel_check};
use qwvd_core::signals::{random_quaternion_grid, random_smooth};
use qwvd_core::theorems::{heisenberg_qolct, heisenberg_wvd};
use qwvd_core::wvd::{wvd_frequency_grid, wvd_inverse, wvd_qolct_refined, wvd_via_qft};
use qwvd_core::{AxisPair, OffsetParams, Quaternion};

fn params() -> impl Strategy<Value = OffsetParams> {
    (0.4f64..2.5, 0.3f64..2.0, any::<bool>(), -1.5f64..1.5, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b, neg, c, tau, eta)| {
        let b = if neg { -b } else { b };
        OffsetParams::new(a, b, c, (1.0 + b * c) / a, tau, eta).unwrap()
    })
}

fn degenerate() -> impl Strategy<Value = OffsetParams> {
    (0.4f64..2.5, any::<bool>(), -1.5f64..1.5, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, neg, c, tau, eta)| {
        let a = if neg { -a } else { a };
        OffsetParams::new(a, 0.0, c, 1.0 / a, tau, eta).unwrap()
    })
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(Quaternion::from_array)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn qft_commutes_with_side_subalgebras(seed in 0u64..1000, a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0)) {
        let geom = GridGeometry::centered(8, 3.0).unwrap();
        let f = random_quaternion_grid(geom, seed);
        let left = Quaternion::new(a.0, a.1, 0.0, 0.0);
        let right = Quaternion::new(b.0, 0.0, b.1, 0.0);
        let fg = natural_frequency_grid(&geom);
        let lhs = qft_forward(&f.left_mul(left).right_mul(right), AxisPair::default(), &fg);
        let rhs = qft_forward(&f, AxisPair::default(), &fg).left_mul(left).right_mul(right);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn qolct_is_real_linear(s1 in 0u64..1000, s2 in 0u64..1000, x in -3.0f64..3.0, y in -3.0f64..3.0, p1 in params(), p2 in params()) {
        let geom = GridGeometry::centered(8, 3.0).unwrap();
        let (f, g) = (random_quaternion_grid(geom, s1), random_quaternion_grid(geom, s2 + 1000));
        let fg = olct_frequency_grid(&geom, &p1, &p2);
        let ax = AxisPair::default();
        let lhs = qolct_forward(&f.scale(x).add(&g.scale(y)).unwrap(), &p1, &p2, ax, &fg);
        let rhs = qolct_forward(&f, &p1, &p2, ax, &fg).scale(x).add(&qolct_forward(&g, &p1, &p2, ax, &fg).scale(y)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-11);
    }

    #[test]
    fn qolct_round_trip_and_plancherel(seed in 0u64..1000, p1 in params(), p2 in params()) {
        let geom = GridGeometry::centered(12, 4.0).unwrap();
        let f = random_quaternion_grid(geom, seed);
        let fg = olct_frequency_grid(&geom, &p1, &p2);
        let ax = AxisPair::default();
        let back = qolct_inverse(&qolct_forward(&f, &p1, &p2, ax, &fg), &p1, &p2, ax, &geom);
        prop_assert!(back.relative_l2_error(&f).unwrap() < 1e-10);
        let (lhs, rhs) = qolct_plancherel_check(&f, &p1, &p2, ax);
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_branches_are_exact(seed in 0u64..1000, p1 in degenerate(), p2 in params()) {
        let geom = GridGeometry::centered(8, 3.0).unwrap();
        let f = random_quaternion_grid(geom, seed);
        let ax = AxisPair::default();
        for (a, b) in [(p1, p2), (p2, p1), (p1, p1)] {
            let fg = olct_frequency_grid(&geom, &a, &b);
            let o = qolct_forward(&f, &a, &b, ax, &fg);
            prop_assert!(o.max_abs_diff(&oracle_qolct(&f, &a, &b, ax, &fg, false).unwrap()) < 1e-11);
            let back = qolct_inverse(&o, &a, &b, ax, &geom);
            prop_assert!(back.relative_l2_error(&f).unwrap() < 1e-10);
        }
    }

    #[test]
    fn fast_paths_match_oracles(seed in 0u64..1000, p1 in params(), p2 in params(), h in prop::array::uniform2(0.2f64..0.7)) {
        let geom = GridGeometry::new(6, 5, h[0], h[1], -1.1, -0.9).unwrap();
        let f = random_quaternion_grid(geom, seed);
        let g = random_quaternion_grid(geom, seed + 1);
        let ax = AxisPair::default();
        let fg = olct_frequency_grid(&geom, &p1, &p2);
        prop_assert!(qolct_fast(&f, &p1, &p2, &fg).unwrap().max_abs_diff(&oracle_qolct(&f, &p1, &p2, ax, &fg, false).unwrap()) < 1e-10);
        let wg = wvd_frequency_grid(&geom, &p1, &p2);
        prop_assert!(wvd_via_qft(&f, &g, &p1, &p2, &wg).unwrap().max_abs_diff(&oracle_wvd(&f, &g, &p1, &p2, ax, &wg, false).unwrap()) < 1e-10);
    }

    #[test]
    fn wvd_inversion_recovers_signal(seed in 0u64..1000, p1 in params(), p2 in params(), amp in quaternion()) {
        let geom = GridGeometry::centered(6, 2.5).unwrap();
        let f = random_quaternion_grid(geom, seed);
        let g = random_smooth(geom, seed).left_mul(amp);
        prop_assume!(g.energy() > 1e-6);
        let ax = AxisPair::default();
        let w = wvd_qolct_refined(&f, &g, &p1, &p2, ax, &wvd_frequency_grid(&geom, &p1, &p2)).unwrap();
        prop_assert!(wvd_inverse(&w, &g, &p1, &p2, ax).unwrap().relative_l2_error(&f).unwrap() < 1e-9);
    }

    #[test]
    fn heisenberg_holds_for_smooth_signals(seed in 0u64..1000, p1 in params(), p2 in params(), k in 1usize..=2) {
        let geom = GridGeometry::centered(24, 6.0).unwrap();
        let f = random_smooth(geom, seed);
        let g = random_smooth(geom, seed + 7);
        let ax = AxisPair::default();
        let q = heisenberg_qolct(&f, &p1, &p2, ax, k).unwrap();
        prop_assert!(q.satisfied, "{q:?}");
        let w = heisenberg_wvd(&f, &g, &p1, &p2, ax, k).unwrap();
        prop_assert!(w.satisfied, "{w:?}");
    }
}
