use cclt_core::constants::{kappa_objective, taylor_remainder_check, v_of_w, KAPPA};
use cclt_core::identity::{beta_pair, beta_quadruple};
use cclt_core::normal::normal_cdf;
use cclt_core::permanent::CfContext;
use cclt_core::stats::{b_diff, b_diff_centered, center, g_clip, gamma, gamma_tilde, variance_quadruple};
use cclt_core::{Complex64, ComplexScoreMatrix, ScoreMatrix};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = ScoreMatrix> {
    (2usize..=6, prop_oneof![Just(0.1), Just(1.0), Just(10.0)]).prop_flat_map(|(n, scale)| {
        proptest::collection::vec(-1.0f64..1.0, n * n)
            .prop_map(move |v| ScoreMatrix::new(n, v.into_iter().map(|x| x * scale).collect()).unwrap())
    })
}

fn nondegenerate() -> impl Strategy<Value = ScoreMatrix> {
    matrix().prop_filter("positive variance", |m| center(m).sigma2 > 1e-8 * m.max_abs().powi(2))
}

fn complex_matrix() -> impl Strategy<Value = ComplexScoreMatrix> {
    (2usize..=6).prop_flat_map(|n| {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
            ComplexScoreMatrix::new(n, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn variance_two_ways(m in matrix()) {
        let s1 = center(&m).sigma2;
        let s2 = variance_quadruple(&m);
        prop_assert!((s1 - s2).abs() <= 1e-10 * s1.max(1e-12 * m.max_abs().powi(2)));
    }

    #[test]
    fn centered_margins_vanish(m in matrix()) {
        let c = center(&m);
        let n = m.n();
        let tol = 1e-10 * m.max_abs().max(1.0);
        for j in 0..n {
            let row: f64 = (0..n).map(|r| c.a_tilde_at(j, r)).sum();
            let col: f64 = (0..n).map(|r| c.a_tilde_at(r, j)).sum();
            prop_assert!(row.abs() <= tol && col.abs() <= tol);
        }
    }

    #[test]
    fn centered_entries_from_differences(m in matrix()) {
        let c = center(&m);
        let n = m.n();
        for j in 1..=n {
            for r in 1..=n {
                let mut acc = 0.0;
                for k in 1..=n {
                    for s in 1..=n {
                        acc += b_diff(&m, j, k, r, s).unwrap();
                    }
                }
                let want = c.a_tilde_at(j - 1, r - 1);
                prop_assert!((acc / (n * n) as f64 - want).abs() <= 1e-10 * m.max_abs().max(1.0));
            }
        }
    }

    #[test]
    fn differences_antisymmetric_and_centering_free(m in matrix(), idx in proptest::array::uniform4(0usize..6)) {
        let n = m.n();
        let [j, k, r, s] = idx.map(|i| i % n + 1);
        let b = b_diff(&m, j, k, r, s).unwrap();
        prop_assert_eq!(b, -b_diff(&m, k, j, r, s).unwrap());
        prop_assert_eq!(b_diff(&m, j, j, r, s).unwrap(), 0.0);
        let bc = b_diff_centered(&center(&m), j, k, r, s).unwrap();
        prop_assert!((b - bc).abs() <= 1e-10 * m.max_abs().max(1.0));
    }

    #[test]
    fn gamma_sandwich(m in nondegenerate(), xs in 0.01f64..20.0, y in 0.01f64..0.99) {
        let c = center(&m);
        let n = m.n() as f64;
        let x = xs / c.sigma();
        let g = gamma(&m, x);
        let gt = gamma_tilde(&m, x);
        let slack = 1e-12 * (1.0 + 16.0 * gt);
        let f = (n - 1.0) / n;
        prop_assert!((1.0 - y * y * f * f) * gamma_tilde(&m, x * y) <= g + slack);
        prop_assert!(g <= 16.0 * gt + slack);
        prop_assert!(4.0 * (c.sigma2 - (n - 1.0) / (27.0 * x * x)) <= g + slack);
        prop_assert!(g <= (4.0 * c.sigma2).min(x * c.delta) + slack);
    }

    #[test]
    fn gamma_monotone_in_abs(m in matrix(), x in -5.0f64..5.0, extra in 0.0f64..3.0) {
        prop_assert_eq!(gamma(&m, 0.0), 0.0);
        let g = gamma(&m, x);
        prop_assert!(g <= gamma(&m, x.abs() + extra) * (1.0 + 1e-12));
        prop_assert!((g - gamma(&m, -x)).abs() <= 1e-12 * g.max(1e-300));
    }

    #[test]
    fn gamma_tilde_scaling(m in matrix(), x in 0.0f64..10.0, y in 0.0f64..1.0) {
        prop_assert!(y * gamma_tilde(&m, x) <= gamma_tilde(&m, x * y) * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn mixing_fact(m in matrix(), x1 in 0.0f64..5.0, x2 in 0.01f64..5.0, y1 in 0.0f64..5.0, y2 in 0.0f64..5.0) {
        let lhs = x1 * gamma(&m, y1) + x2 * gamma(&m, y2);
        let rhs = (x1 + x2) * gamma(&m, (x1 * y1 + x2 * y2) / (x1 + x2));
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn g_clip_properties(x in -10.0f64..10.0, y in -10.0f64..10.0, z in -10.0f64..10.0, c in -10.0f64..10.0) {
        let eps = 1e-12 * (1.0 + x * x + y * y);
        let split = g_clip(x, y) + g_clip(x, z);
        prop_assert!(g_clip(x, y + z) <= split + eps);
        prop_assert!(split <= 2.0 * g_clip(x, (y.abs() + z.abs()) / 2.0) + eps);
        prop_assert!(g_clip(x, c * y) + g_clip(y, c * x) <= g_clip(x, c * x) + g_clip(y, c * y) + eps);
        if c != 0.0 {
            prop_assert!(x * x - 4.0 / (27.0 * c * c) <= g_clip(x, c * x) + eps);
        }
    }

    #[test]
    fn taylor_remainder(x in -20.0f64..20.0, k in 0u32..=6) {
        let (lhs, rhs) = taylor_remainder_check(x, k);
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn normal_cdf_symmetry(x in -40.0f64..40.0) {
        prop_assert!((normal_cdf(-x) - (1.0 - normal_cdf(x))).abs() <= 1e-15);
    }

    #[test]
    fn beta_pair_equals_quadruple(y in complex_matrix()) {
        let (p, q) = (beta_pair(&y), beta_quadruple(&y));
        prop_assert!((p - q).norm() <= 1e-10 * p.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_ell_bounds(m in nondegenerate(), ts in -10.0f64..10.0, ell in 0u32..=7) {
        let ctx = CfContext::new(&m);
        let c = ctx.stats();
        let t = ts / c.sigma();
        let h = ctx.h_ell(t, ell as f64);
        let n = m.n() as f64;
        prop_assert!(h.reduced_variance >= -1e-12 * c.sigma2);
        prop_assert!((0.0..=1.0).contains(&h.value));
        if n < ell as f64 {
            prop_assert_eq!(h.value, 0.0);
        } else {
            let ell = ell as f64;
            let cap = (ell - (n - ell - 1.0) / (4.0 * (n - 1.0)) * t * t * h.reduced_variance).exp();
            prop_assert!(h.value <= cap + 1e-12);
        }
        if t == 0.0 && n >= ell as f64 {
            prop_assert_eq!(h.value, 1.0);
        }
    }
}

#[test]
fn kappa_inequality_on_dense_grid() {
    for i in -500_000..=500_000 {
        let x = i as f64 * 1e-4;
        assert!(x.cos() - 1.0 + 0.5 * x * x <= KAPPA * x.abs().powi(3) + 1e-12, "x = {x}");
        assert!(kappa_objective(x) <= KAPPA + 1e-15);
    }
}

#[test]
fn v_increasing_in_w() {
    let grid: Vec<f64> = (1..=9).map(|i| v_of_w(i as f64 / 10.0).unwrap()).collect();
    assert!(grid.windows(2).all(|w| w[0] < w[1]));
    // (2/pi) int_0^v sinc^2 = 1/2 near w = 0
    let v0 = v_of_w(1e-9).unwrap();
    let half = cclt_core::constants::sinc2_cdf(v0, 1e-12).unwrap();
    assert!((half - 0.5).abs() < 1e-8);
}
