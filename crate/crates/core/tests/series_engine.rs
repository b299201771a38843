use caustics::series::*;
use caustics::special::{am_uniform, Modulus};
use num_rational::BigRational;
use proptest::prelude::*;

fn sines(list: &[(u32, i64, i64)]) -> RationalTrigPoly {
    let mut p = RationalTrigPoly::zero();
    for &(h, n, d) in list {
        p.add_term(h, Basis::Sin, rat(n, d));
    }
    p
}

fn poly(cs: &[(i64, i64)]) -> Vec<BigRational> {
    cs.iter().map(|&(n, d)| rat(n, d)).collect()
}

#[test]
fn printed_amplitude_coefficients() {
    let ex = expand_action_angle(6).unwrap();
    let want = [
        sines(&[(2, 1, 8)]),
        sines(&[(2, 16, 256), (4, 1, 256)]),
        sines(&[(2, 83, 2048), (4, 1, 256), (6, 1, 6144)]),
        sines(&[(2, 121, 4096), (4, 29, 8192), (6, 1, 4096), (8, 1, 131072)]),
        sines(&[(2, 12071, 524288), (4, 13, 4096), (6, 37, 131072), (8, 1, 65536), (10, 1, 2621440)]),
        sines(&[
            (2, 19651, 1048576),
            (4, 47955, 16777216),
            (6, 235, 786432),
            (8, 45, 2097152),
            (10, 1, 1048576),
            (12, 1, 50331648),
        ]),
    ];
    for (j, w) in want.iter().enumerate() {
        assert_eq!(ex.phi(j + 1), w, "phi_{}", j + 1);
    }
}

#[test]
fn printed_xi_values() {
    let xi = xi_polynomials(6).unwrap();
    let get = |j, l| xi_lookup(&xi, j, l).unwrap().poly.clone();
    assert_eq!(get(2, -2), poly(&[(0, 1), (-1, 512), (1, 512)]));
    assert_eq!(get(2, -1), poly(&[(0, 1), (-16, 512)]));
    assert_eq!(get(2, 1), poly(&[(0, 1), (16, 512)]));
    assert_eq!(get(3, -3), poly(&[(0, 1), (-1, 12288), (1, 8192), (-1, 24576)]));
    assert_eq!(get(3, -2), poly(&[(0, 1), (-1, 512), (1, 512)]));
    assert_eq!(get(3, -1), poly(&[(0, 1), (-83, 4096), (-1, 8192), (1, 8192)]));
    assert_eq!(get(3, 0), poly(&[(0, 1), (0, 1), (-1, 256)]));
    assert_eq!(get(3, 1), poly(&[(0, 1), (83, 4096), (-1, 8192), (-1, 8192)]));
    assert_eq!(get(3, 2), poly(&[(0, 1), (1, 512), (1, 512)]));
    assert_eq!(get(3, 3), poly(&[(0, 1), (1, 12288), (1, 8192), (1, 24576)]));
    assert_eq!(get(4, 4), poly(&[(0, 1), (1, 262144), (11, 1572864), (1, 262144), (1, 1572864)]));
    assert_eq!(
        get(5, 5),
        poly(&[(0, 1), (1, 5242880), (5, 12582912), (7, 25165824), (1, 12582912), (1, 125829120)])
    );
    assert_eq!(
        get(6, 6),
        poly(&[
            (0, 1),
            (1, 100663296),
            (137, 6039797760),
            (15, 805306368),
            (17, 2415919104),
            (1, 805306368),
            (1, 12079595520),
        ])
    );
}

// Oracle: Taylor composition of the tabulated φ_j against cos kθ, projected
// onto cos((k+12)θ) by 40-digit quadrature for k = 30..35 and fitted. The
// cubic coefficient is 15/805306368; the published table lists 11/805306368.
#[test]
fn xi_six_six_cubic_coefficient() {
    let xi = xi_polynomials(6).unwrap();
    let c3 = &xi_lookup(&xi, 6, 6).unwrap().poly[3];
    assert_eq!(*c3, rat(15, 805306368));
    assert_ne!(*c3, rat(11, 805306368));
}

#[test]
fn structural_bounds() {
    let ex = expand_action_angle(8).unwrap();
    for j in 1..=8 {
        for (h, b, _) in ex.phi(j).terms() {
            assert_eq!(b, Basis::Sin);
            assert!(h % 2 == 0 && h >= 2 && h <= 2 * j as u32);
        }
    }
    for x in xi_polynomials(8).unwrap() {
        assert!(x.degree().is_none_or(|d| d <= x.j));
    }
}

// The computed tables show ξ_{j,0} with only even powers of k; recorded here.
#[test]
fn xi_zero_has_even_powers() {
    for x in xi_polynomials(8).unwrap().iter().filter(|x| x.l == 0) {
        for (d, c) in x.poly.iter().enumerate() {
            if d % 2 == 1 {
                assert_eq!(*c, rat(0, 1), "xi_{},0 degree {d}", x.j);
            }
        }
    }
}

#[test]
fn single_mode_first_order() {
    for k in 3..8u32 {
        let mu = RationalTrigPoly::single(k, Basis::Cos, rat(1, 1));
        let p = compose_mu_expansion(&mu, 1).unwrap();
        let kk = k as i64;
        let mut want = RationalTrigPoly::zero();
        want.add_signed(kk + 2, Basis::Cos, rat(kk, 16));
        want.add_signed(kk - 2, Basis::Cos, rat(-kk, 16));
        assert_eq!(p[1], want);
    }
}

#[test]
fn sine_branch_uses_same_coefficients() {
    let xi = xi_polynomials(3).unwrap();
    let mu = RationalTrigPoly::single(3, Basis::Sin, rat(1, 1));
    let p = compose_mu_expansion(&mu, 3).unwrap();
    for j in 1..=3usize {
        let mut want = RationalTrigPoly::zero();
        for l in -(j as i64)..=(j as i64) {
            want.add_signed(3 + 2 * l, Basis::Sin, xi_lookup(&xi, j, l).unwrap().eval(3));
        }
        assert_eq!(p[j], want, "P_{j}");
    }
}

#[test]
fn amplitude_series_matches_elliptic_functions() {
    let ex = expand_action_angle(6).unwrap();
    let kappa = 0.15f64;
    let exact = am_uniform(1.0, Modulus::new(kappa).unwrap()).unwrap();
    let approx = ex.eval(1.0, kappa * kappa);
    assert!((exact - approx).abs() <= 10.0 * kappa.powi(14), "{}", (exact - approx).abs());
}

#[test]
fn truncation_error_order() {
    let ex = expand_action_angle(4).unwrap();
    let ks = [0.08f64, 0.12, 0.16, 0.2];
    let errs: Vec<f64> = ks
        .iter()
        .map(|&k| {
            (0..16)
                .map(|i| {
                    let t = 0.2 + 0.37 * i as f64;
                    (am_uniform(t, Modulus::new(k).unwrap()).unwrap() - ex.eval(t, k * k)).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let lk: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let le: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let slope = (le[3] - le[0]) / (lk[3] - lk[0]);
    assert!(slope > 9.5, "slope {slope}");
}

#[test]
fn order_twelve_is_fast() {
    let t = std::time::Instant::now();
    let ex = expand_action_angle(12).unwrap();
    let _ = xi_from(&ex);
    assert!(t.elapsed().as_secs_f64() < 10.0);
    assert_eq!(ex.phi(12).max_harmonic(), 24);
}

proptest! {
    #[test]
    fn phi_is_odd(theta in -3.0f64..3.0) {
        let ex = expand_action_angle(5).unwrap();
        for j in 1..=5 {
            prop_assert!((ex.phi(j).eval(theta) + ex.phi(j).eval(-theta)).abs() < 1e-15);
        }
    }

    #[test]
    fn composition_respects_reflection(k in 1u32..9, c in -5i64..5, sin in any::<bool>()) {
        let b = if sin { Basis::Sin } else { Basis::Cos };
        let mu = RationalTrigPoly::single(k, b, rat(c, 3));
        let p = compose_mu_expansion(&mu, 3).unwrap();
        for q in &p {
            let r = q.reflect();
            if sin { prop_assert_eq!(r, q.scale(&rat(-1, 1))); } else { prop_assert_eq!(&r, q); }
        }
    }
}

#[test]
fn diagonal_recursion_matches_full_expansion() {
    let full = xi_polynomials(12).unwrap();
    for d in caustics::series::xi_diagonal(12) {
        let f = xi_lookup(&full, d.j, d.j as i64).unwrap();
        assert_eq!(f.poly, d.poly, "j = {}", d.j);
    }
}
