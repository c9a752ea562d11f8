use kasym_core::kernel::{coeff_table, tkn_eval, FormMode, TknForm};
use kasym_core::pairing::{leading_pairing, moment_delta_pairing, rough_expansion};
use kasym_core::quad::{inner_t_integral, integrate_pv, prescription_imag, Extent, PrescriptionMode, QuadratureSpec};
use kasym_core::testfn::{axis_moment, make_gaussian_hermite, Monomial, TestFunction};
use proptest::prelude::*;

fn monomials() -> impl Strategy<Value = Vec<Monomial>> {
    prop::collection::vec((0u32..4, 0u32..4, -2.0f64..2.0).prop_map(|(p1, p2, c)| Monomial::new(p1, p2, c)), 1..4)
}

fn test_function() -> impl Strategy<Value = TestFunction> {
    (-1.0f64..1.0, -1.0f64..1.0, 0.6f64..1.5, monomials())
        .prop_map(|(c1, c2, s, poly)| make_gaussian_hermite((c1, c2), s, &poly).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn odd_k_vanishes(k in 0u32..6, n in 2.0f64..50.0, frac in 0.05f64..0.95, mode in prop::sample::select(FormMode::ALL.to_vec())) {
        let v = tkn_eval(&TknForm::new(2 * k + 1, Extent::Finite(n), mode), frac * n).unwrap();
        prop_assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn derived_real_part_is_even(k in 0u32..6, n in 2.0f64..50.0, frac in 0.05f64..0.95) {
        let form = TknForm::new(2 * k, Extent::Finite(n), FormMode::Derived);
        let x = frac * n;
        prop_assert_eq!(tkn_eval(&form, x).unwrap().re, tkn_eval(&form, -x).unwrap().re);
    }

    #[test]
    fn coefficients_decay_in_a(a in 1.0f64..100.0, order in 0u32..9) {
        for mode in FormMode::ALL {
            let near = coeff_table(a, order, mode).unwrap();
            let far = coeff_table(2.0 * a, order, mode).unwrap();
            for (x, y) in near.entries.iter().zip(&far.entries) {
                prop_assert!(y.value.norm() < x.value.norm());
            }
        }
    }

    #[test]
    fn prescriptions_are_conjugate(f in test_function(), xi1 in 0.1f64..3.0, b in 0.01f64..1.0) {
        let spec = QuadratureSpec::default();
        let plus = inner_t_integral(&f, xi1, b, Extent::Finite(40.0), PrescriptionMode::PlusI0, &spec).unwrap().value;
        let minus = inner_t_integral(&f, xi1, b, Extent::Finite(40.0), PrescriptionMode::MinusI0, &spec).unwrap().value;
        prop_assert_eq!(plus.re, minus.re);
        prop_assert_eq!(plus.im, -minus.im);
        prop_assert_eq!(prescription_imag(&f, xi1, b, PrescriptionMode::Pv), 0.0);
    }

    #[test]
    fn pv_of_odd_integrands_vanishes(c in 0.1f64..3.0, s in 0.3f64..2.0, half in 5.0f64..20.0) {
        let spec = QuadratureSpec::default();
        // even numerator over an odd denominator
        let g = |t: f64| libm::exp(-(t / s) * (t / s)) * (c + t * t) / t;
        let r = integrate_pv(g, &[0.0], (-half, half), &spec).unwrap();
        prop_assert!(r.value.abs() <= 1e-10);
    }

    #[test]
    fn pairings_are_linear(f in test_function(), g in test_function(), w in -2.0f64..2.0) {
        let spec = QuadratureSpec::default();
        let combo = TestFunction::combine(vec![(1.0, f.clone()), (w, g.clone())]);
        let lf = leading_pairing(&f, &spec).unwrap();
        let lg = leading_pairing(&g, &spec).unwrap();
        let lc = leading_pairing(&combo, &spec).unwrap();
        let tol = 10.0 * (lf.error_estimate + w.abs() * lg.error_estimate + lc.error_estimate) + 1e-12;
        prop_assert!((lc.value - lf.value - lg.value * w).norm() <= tol);

        let mf = moment_delta_pairing(&f, 2, 1, &spec).unwrap();
        let mg = moment_delta_pairing(&g, 2, 1, &spec).unwrap();
        let mc = moment_delta_pairing(&combo, 2, 1, &spec).unwrap();
        let tol = 10.0 * (mf.error_estimate + w.abs() * mg.error_estimate + mc.error_estimate) + 1e-12;
        prop_assert!((mc.value - mf.value - mg.value * w).norm() <= tol);

        let rf = rough_expansion(&f, 5.0, 2, &spec).unwrap();
        let rg = rough_expansion(&g, 5.0, 2, &spec).unwrap();
        let rc = rough_expansion(&combo, 5.0, 2, &spec).unwrap();
        let tol = 10.0 * (rf.error_estimate + w.abs() * rg.error_estimate + rc.error_estimate) + 1e-12;
        prop_assert!((rc.value - rf.value - rg.value * w).norm() <= tol);
    }

    #[test]
    fn quadrature_moments_match_closed_forms(f in test_function(), m in 0usize..5, n in 0usize..5) {
        let spec = QuadratureSpec::default();
        let q = axis_moment(&f, m, n, &spec).unwrap().value;
        let exact = f.exact_axis_moment(m, n).unwrap();
        prop_assert!((q - exact).abs() <= 1e-9 * exact.abs().max(1.0), "{} vs {}", q, exact);
    }

    #[test]
    fn sum_of_terms_is_value(f in test_function(), a in 2.0f64..50.0) {
        let spec = QuadratureSpec::default();
        for mode in FormMode::ALL {
            let r = kasym_core::pairing::sharp_expansion(&f, a, 4, mode, &spec).unwrap();
            let sum = r.terms.iter().fold(kasym_core::Complex64::new(0.0, 0.0), |acc, (_, z)| acc + z);
            prop_assert_eq!(sum, r.value);
            prop_assert!(r.error_estimate >= 0.0);
        }
    }
}
