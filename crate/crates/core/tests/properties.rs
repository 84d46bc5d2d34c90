use num_complex::Complex64;
use proptest::prelude::*;
use scatpoles::counting::CountingFunction;
use scatpoles::olvermap::{radial_crossing, rho, rho_prime};
use scatpoles::specfun::{spherical_h, spherical_j, HankelKind};
use scatpoles::transparent::transmission_det;

fn upper(r: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(r, theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rho_derivative_matches_differences(r in 0.2f64..3.0, theta in 0.05f64..3.09) {
        let z = upper(r, theta);
        prop_assume!((z - 1.0).norm() > 0.05 && (z + 1.0).norm() > 0.05);
        let h = 1e-6;
        let fd = (rho(z + h).unwrap() - rho(z - h).unwrap()) / (2.0 * h);
        let d = rho_prime(z).unwrap();
        prop_assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0), "{z}: {fd} vs {d}");
    }

    #[test]
    fn re_rho_sign_follows_the_eye(theta in 0.05f64..3.09, t in 0.1f64..3.0) {
        prop_assume!((t - 1.0).abs() > 0.03);
        let z = upper(t * radial_crossing(theta), theta);
        let re = rho(z).unwrap().re;
        if t < 1.0 {
            prop_assert!(re > 0.0, "{z}: {re}");
        } else {
            prop_assert!(re < 0.0, "{z}: {re}");
        }
    }

    #[test]
    fn re_rho_is_even_under_reflection(r in 0.2f64..3.0, theta in 0.05f64..3.09) {
        let z = upper(r, theta);
        let a = rho(z).unwrap().re;
        let b = rho(-z.conj()).unwrap().re;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn spherical_bessel_recurrence(l in 1u32..40, r in 0.5f64..60.0, theta in -1.2f64..1.2) {
        let z = Complex64::from_polar(r, theta);
        let f = |k: u32| spherical_j(k, z).unwrap().unscaled().unwrap().value;
        let (a, b, c) = (f(l - 1), f(l), f(l + 1));
        let lhs = a + c;
        let rhs = b * (2.0 * f64::from(l) + 1.0) / z;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (a.norm() + c.norm()), "l = {l}, z = {z}");
    }

    #[test]
    fn hankel_wronskian(l in 0u32..40, r in 0.5f64..60.0, theta in -1.0f64..1.0) {
        let z = Complex64::from_polar(r, theta);
        let j = spherical_j(l, z).unwrap();
        // pair j with the Hankel function that decays in this half-plane;
        // the other pair, like W(h¹, h²) at small z, cancels badly
        let (kind, sign) = if theta >= 0.0 {
            (HankelKind::First, 1.0)
        } else {
            (HankelKind::Second, -1.0)
        };
        let h = spherical_h(kind, l, z).unwrap();
        let w = (j.value * h.derivative - j.derivative * h.value) * (j.log_scale + h.log_scale).exp();
        let want = Complex64::new(0.0, sign) / (z * z);
        prop_assert!((w - want).norm() <= 1e-9 * want.norm(), "l = {l}, z = {z}: {w}");
    }

    #[test]
    fn determinant_modulus_is_reflection_invariant(
        l in 0u32..20, c in prop_oneof![0.3f64..0.9, 1.2f64..4.0], re in 0.5f64..30.0, im in 0.0f64..5.0,
    ) {
        let z = Complex64::new(re, im);
        let a = transmission_det(l, 3, c, z).unwrap().norm();
        let b = transmission_det(l, 3, c, -z.conj()).unwrap().norm();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(b));
    }

    #[test]
    fn counting_functions_are_monotone(
        entries in prop::collection::vec((0.1f64..50.0, 1u64..20), 0..60),
        mut radii in prop::collection::vec(0.0f64..60.0, 2..20),
    ) {
        let cf = CountingFunction::new(3, entries).unwrap();
        radii.sort_by(f64::total_cmp);
        for w in radii.windows(2) {
            prop_assert!(cf.count_n(w[0]) <= cf.count_n(w[1]));
            prop_assert!(cf.regularized_m(w[0]) <= cf.regularized_m(w[1]) + 1e-9);
        }
    }
}
