use std::f64::consts::PI;

use mascheroni::gfamily::{
    eval_integral, g_sequence, genfunc_closed, genfunc_partial, ladder_delta,
};
use mascheroni::numerics::{
    bernoulli_even, cot_partial, harmonic, zeta_even_bernoulli, zeta_even_direct,
};
use mascheroni::quadrature::{integrate_de, log_sin_kernel};
use mascheroni::{Accuracy, GenfuncPoint, GridPoint};
use num_traits::Signed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_step_is_reciprocal(n in 1u32..100_000) {
        let d = harmonic(n + 1).unwrap() - harmonic(n).unwrap();
        let ulp = f64::EPSILON * harmonic(n + 1).unwrap();
        prop_assert!((d - 1.0 / f64::from(n + 1)).abs() <= ulp);
    }

    #[test]
    fn cot_expansion_converges_on_half_disc(z in 1e-3f64..=0.5, neg in any::<bool>()) {
        let z = if neg { -z } else { z };
        let direct = PI * (PI * z).cos() / (PI * z).sin();
        prop_assert!((cot_partial(z, 40).unwrap() - direct).abs() <= 1e-10);
    }

    #[test]
    fn bernoulli_sign_alternates(m in 1u32..=64) {
        prop_assert_eq!(bernoulli_even(m).unwrap().is_positive(), m % 2 == 1);
    }

    #[test]
    fn polynomial_quadrature_is_exact(coeffs in prop::collection::vec(-5.0f64..5.0, 1..=11)) {
        let exact: f64 = coeffs.iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)).sum();
        let r = integrate_de(|u| coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c), &Accuracy::default()).unwrap();
        prop_assert!((r.value - exact).abs() <= 1e-12);
    }

    #[test]
    fn log_sin_kernel_small_angle(x in 0.05f64..=1.0) {
        for u in [1e-6, 1e-8] {
            let d = log_sin_kernel(x, u).unwrap() - (2.0 * PI * x * u).ln();
            prop_assert!(d.abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ladder_step_matches_difference(n in 1u32..=20, x in 0.01f64..=1.0) {
        let acc = Accuracy::default();
        let g = |n| eval_integral(GridPoint::new(n, x).unwrap(), &acc).unwrap().value;
        let d = ladder_delta(n, x, &acc).unwrap().value;
        prop_assert!((g(n + 1) - g(n) - d).abs() <= 1e-8);
    }

    #[test]
    fn evaluation_is_bit_reproducible(n in 1u32..=30, x in 0.01f64..=1.0) {
        let acc = Accuracy::default();
        let again = f64::from_bits(x.to_bits());
        let a = eval_integral(GridPoint::new(n, x).unwrap(), &acc).unwrap();
        let b = eval_integral(GridPoint::new(n, again).unwrap(), &acc).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.err_estimate.to_bits(), b.err_estimate.to_bits());
    }

    #[test]
    fn generating_function_matches_partial_sum(x in 0.05f64..=1.0, z in -0.6f64..=0.6) {
        let acc = Accuracy::default();
        let closed = genfunc_closed(GenfuncPoint::new(x, z).unwrap(), &acc).unwrap().value;
        let partial = genfunc_partial(x, z, 60, &acc).unwrap().value;
        let gs: Vec<f64> = g_sequence(x, 80, &acc).unwrap().iter().map(|e| e.value).collect();
        let tail = mascheroni::gfamily::genfunc_tail_bound(&gs, z, 60);
        prop_assert!((closed - partial).abs() <= 1e-8 + tail);
    }
}

#[test]
fn zeta_routes_agree() {
    let acc = Accuracy::default();
    for m in 1..=30 {
        let direct = zeta_even_direct(m, &acc).unwrap();
        let rel = (zeta_even_bernoulli(m).unwrap() - direct).abs() / direct;
        assert!(rel <= 1e-12, "m = {m}: {rel:e}");
    }
}
