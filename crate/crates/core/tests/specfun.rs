use approx::assert_abs_diff_eq;
use fodamp::specfun::{g_series, g_series_coefficients, log_gamma, mittag_leffler, r_series, SeriesQuery};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mittag_leffler_one_one_is_exp(z in -5.0f64..5.0) {
        let r = mittag_leffler(1.0, 1.0, z).unwrap();
        prop_assert!(r.reliable);
        prop_assert!((r.value - z.exp()).abs() < 1e-9);
    }

    #[test]
    fn mittag_leffler_two_one_is_cos(t in 0.0f64..5.0) {
        let r = mittag_leffler(2.0, 1.0, -t * t).unwrap();
        prop_assert!((r.value - t.cos()).abs() < 1e-9);
    }

    #[test]
    fn mittag_leffler_one_two_is_expm1_over_z(z in -5.0f64..5.0) {
        prop_assume!(z.abs() > 1e-6);
        let r = mittag_leffler(1.0, 2.0, z).unwrap();
        prop_assert!((r.value - z.exp_m1() / z).abs() < 1e-9);
    }

    #[test]
    fn unit_multiplicity_g_equals_r(alpha in 1.01f64..1.99, t in 0.01f64..20.0, impulse in any::<bool>()) {
        let nu = if impulse { 0.0 } else { -1.0 };
        let r = r_series(&SeriesQuery::r_function(alpha, nu, -1.0, t)).unwrap();
        let g = g_series(&SeriesQuery::g_function(alpha, 1.0, nu, -1.0, t)).unwrap();
        prop_assert!((r.value - g.value).abs() < 1e-12, "{} vs {}", r.value, g.value);
    }

    #[test]
    fn terms_used_at_least_one(alpha in 0.2f64..2.0, t in 1e-3f64..10.0) {
        let r = r_series(&SeriesQuery::r_function(alpha, 0.0, -1.0, t)).unwrap();
        prop_assert!(r.terms_used >= 1);
    }
}

#[test]
fn green_function_and_r_series_agree() {
    for k in 1..=9 {
        let alpha = 1.0 + k as f64 / 10.0;
        for t in [0.01, 0.1, 1.0, 5.0, 10.0, 20.0] {
            let r = r_series(&SeriesQuery::r_function(alpha, 0.0, -1.0, t)).unwrap().value;
            let ml = mittag_leffler(alpha, alpha, -t.powf(alpha)).unwrap().value;
            let green = t.powf(alpha - 1.0) * ml;
            assert!((r - green).abs() < 1e-6, "alpha={alpha} t={t}: {r} vs {green}");
        }
    }
}

#[test]
fn mittag_leffler_frozen_high_precision_value() {
    // 50-digit direct summation.
    let r = mittag_leffler(1.5, 1.5, -1.0).unwrap();
    assert_abs_diff_eq!(r.value, 0.706_528_037_064_175_8, epsilon = 1e-14);
}

#[test]
fn integer_order_degenerations() {
    for i in 1..=2000 {
        let t = i as f64 * 0.01;
        let step = g_series(&SeriesQuery::g_function(1.0, 2.0, -1.0, -1.0, t)).unwrap().value;
        assert_abs_diff_eq!(step, 1.0 - (-t).exp() * (1.0 + t), epsilon = 1e-9);
        let imp = g_series(&SeriesQuery::g_function(1.0, 2.0, 0.0, -1.0, t)).unwrap().value;
        assert_abs_diff_eq!(imp, t * (-t).exp(), epsilon = 1e-9);
    }
    for i in 1..=2000 {
        let t = i as f64 * 0.01;
        let cosine = r_series(&SeriesQuery::r_function(2.0, -1.0, -1.0, t)).unwrap().value;
        assert_abs_diff_eq!(cosine, 1.0 - t.cos(), epsilon = 1e-8);
    }
    let at_pi = r_series(&SeriesQuery::r_function(2.0, -1.0, -1.0, std::f64::consts::PI)).unwrap();
    assert_abs_diff_eq!(at_pi.value, 2.0, epsilon = 1e-12);
}

#[test]
fn binomial_coefficient_identity() {
    for r in [1.05, 2.0 / 1.5, 2.0] {
        let c = g_series_coefficients(r, -1.0, 51);
        let ln_gamma_r = log_gamma(r).unwrap();
        for (j, cj) in c.iter().enumerate() {
            let ln_mag = log_gamma(r + j as f64).unwrap() - ln_gamma_r - log_gamma(j as f64 + 1.0).unwrap();
            let expected = if j % 2 == 0 { ln_mag.exp() } else { -ln_mag.exp() };
            assert!(((cj - expected) / expected).abs() < 1e-10, "r={r} j={j}: {cj} vs {expected}");
        }
    }
}

#[test]
fn g_series_frozen_high_precision_value() {
    // (s^0.5 + 1)^-4 impulse response at t = 1, 40-digit summation. The tail
    // dropped by the 1e-10 truncation rule is about 1e-12 here.
    let r = g_series(&SeriesQuery::g_function(0.5, 4.0, 0.0, -1.0, 1.0)).unwrap();
    assert_abs_diff_eq!(r.value, 0.075_144_592_430_581_69, epsilon = 1e-11);
}

/// Grünwald–Letnikov weights of order `beta`, `n` of them.
fn gl_weights(beta: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n);
    w.push(1.0);
    for j in 1..n {
        let prev = w[j - 1];
        w.push(prev * (1.0 - (beta + 1.0) / j as f64));
    }
    w
}

/// Step response of `(s^0.5 + 1)^4 y = u` by Grünwald–Letnikov time stepping,
/// using the binomial expansion s² + 4s^1.5 + 6s + 4s^0.5 + 1.
fn gl_step_response(t_end: f64, h: f64) -> f64 {
    let n = (t_end / h).round() as usize;
    let terms = [(2.0, 1.0), (1.5, 4.0), (1.0, 6.0), (0.5, 4.0)];
    let weights: Vec<(Vec<f64>, f64)> = terms
        .iter()
        .map(|&(beta, c)| (gl_weights(beta, n + 1), c * h.powf(-beta)))
        .collect();
    let diag: f64 = weights.iter().map(|(w, s)| s * w[0]).sum::<f64>() + 1.0;
    let mut y = vec![0.0; n + 1];
    for k in 1..=n {
        let mut history = 0.0;
        for (w, s) in &weights {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += w[j] * y[k - j];
            }
            history += s * acc;
        }
        y[k] = (1.0 - history) / diag;
    }
    y[n]
}

#[test]
fn g_series_matches_grunwald_letnikov_oracle() {
    let series = g_series(&SeriesQuery::g_function(0.5, 4.0, -1.0, -1.0, 1.0)).unwrap().value;
    let coarse = gl_step_response(1.0, 2e-4);
    let fine = gl_step_response(1.0, 1e-4);
    // First-order scheme: Richardson extrapolation removes the O(h) term.
    let extrapolated = 2.0 * fine - coarse;
    assert!((fine - series).abs() < 2e-3, "GL {fine} vs series {series}");
    assert!((extrapolated - series).abs() < 2e-4, "GL {extrapolated} vs series {series}");
}

#[test]
fn reliability_is_monotone_in_time() {
    for (alpha, r) in [(1.1, 2.0 / 1.1), (1.3, 2.0 / 1.3), (1.1, 1.0 / 1.1)] {
        let mut seen_unreliable = false;
        for i in 1..=400 {
            let t = i as f64 * 0.1;
            let res = g_series(&SeriesQuery::g_function(alpha, r, -1.0, -1.0, t)).unwrap();
            if seen_unreliable {
                assert!(!res.reliable, "alpha={alpha} r={r} reliable again at t={t}");
            }
            seen_unreliable |= !res.reliable;
        }
    }
    let mut seen_unreliable = false;
    for i in 1..=600 {
        let t = i as f64 * 0.1;
        let res = r_series(&SeriesQuery::r_function(1.2, -1.0, -1.0, t)).unwrap();
        if seen_unreliable {
            assert!(!res.reliable);
        }
        seen_unreliable |= !res.reliable;
    }
    assert!(seen_unreliable, "60 s should be past the breakdown point");
}

#[test]
fn log_gamma_accuracy_on_half_integers() {
    // Γ(n + 1/2) = (2n)! √π / (4^n n!)
    let mut ln_fact = vec![0.0f64; 301];
    for k in 1..=300 {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    for n in 0..150usize {
        let expected = ln_fact[2 * n] + 0.5 * std::f64::consts::PI.ln() - n as f64 * 4f64.ln() - ln_fact[n];
        let got = log_gamma(n as f64 + 0.5).unwrap();
        assert!((got - expected).abs() < 1e-10 * expected.abs().max(1.0), "n={n}");
    }
}
