mod common;

use caustics::special::{complete_k, incomplete_f, jacobi_am_sn_cn, Modulus};
use proptest::prelude::*;

fn m(k: f64) -> Modulus<f64> {
    Modulus::new(k).unwrap()
}

#[test]
fn complete_integral_matches_agm_oracle() {
    let want = common::k_by_agm(0.5);
    assert!((complete_k(m(0.5)) - want).abs() < 1e-13 * want);
}

#[test]
fn complete_integral_matches_quadrature() {
    let want = common::f_by_quadrature(std::f64::consts::FRAC_PI_2, 0.9);
    assert!((complete_k(m(0.9)) - want).abs() < 1e-12 * want);
}

#[test]
fn incomplete_integral_matches_quadrature() {
    let want = common::f_by_quadrature(1.0, 0.8);
    let got = incomplete_f(1.0, m(0.8)).unwrap();
    assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
    for (phi, k) in [(0.3, 0.2), (2.5, 0.6), (-4.0, 0.95), (7.0, 0.5)] {
        let want = if phi < 0.0 {
            -common::f_by_quadrature(-phi, k)
        } else {
            common::f_by_quadrature(phi, k)
        };
        let got = incomplete_f(phi, m(k)).unwrap();
        assert!((got - want).abs() < 1e-12 * want.abs(), "phi={phi} k={k}");
    }
}

#[test]
fn amplitude_inverts_quadrature() {
    let t = jacobi_am_sn_cn(0.8, m(0.7)).unwrap();
    let back = common::f_by_quadrature(t.am, 0.7);
    assert!((back - 0.8).abs() < 1e-12);
}

#[test]
fn round_trip_on_reference_grid() {
    for ki in 0..10 {
        let k = ki as f64 / 10.0;
        for i in 0..=200 {
            let phi = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / 200.0;
            let u = incomplete_f(phi, m(k)).unwrap();
            let am = jacobi_am_sn_cn(u, m(k)).unwrap().am;
            assert!((am - phi).abs() < 1e-12, "k={k} phi={phi}");
        }
    }
}

#[test]
fn pythagorean_identity_on_grid() {
    for i in 0..40 {
        for j in 0..25 {
            let u = -20.0 + 40.0 * i as f64 / 39.0;
            let k = 0.98 * j as f64 / 24.0;
            let t = jacobi_am_sn_cn(u, m(k)).unwrap();
            assert!((t.sn * t.sn + t.cn * t.cn - 1.0).abs() < 1e-13);
        }
    }
}

proptest! {
    #[test]
    fn f_increasing_in_amplitude(phi in -6.0f64..6.0, d in 1e-3f64..1.0, k in 0.0f64..0.99) {
        prop_assert!(incomplete_f(phi + d, m(k)).unwrap() > incomplete_f(phi, m(k)).unwrap());
    }

    #[test]
    fn f_increasing_in_modulus(phi in 0.05f64..6.0, k in 0.0f64..0.9, dk in 1e-3f64..0.09) {
        prop_assert!(incomplete_f(phi, m(k + dk)).unwrap() > incomplete_f(phi, m(k)).unwrap());
    }

    #[test]
    fn quasi_periodicity(phi in -10.0f64..10.0, k in 0.0f64..0.99) {
        let f = incomplete_f(phi, m(k)).unwrap();
        let g = incomplete_f(phi + std::f64::consts::PI, m(k)).unwrap();
        prop_assert!((g - f - 2.0 * complete_k(m(k))).abs() < 1e-12 * (1.0 + g.abs()));
    }

    #[test]
    fn amplitude_round_trip(phi in -3.1f64..3.1, k in 0.0f64..0.9) {
        let u = incomplete_f(phi, m(k)).unwrap();
        prop_assert!((jacobi_am_sn_cn(u, m(k)).unwrap().am - phi).abs() < 1e-12);
    }
}
