//! Legendre elliptic integral of the first kind and the Jacobi amplitude.
//!
//! `K` and `F` use the descending Landen (Gauss/AGM) transformation; the
//! amplitude is recovered with the AGM backward recurrence and polished by
//! Newton steps on `F(φ) = u`. All routines are generic over [`Real`].

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

const MAX_AGM_STEPS: usize = 64;

/// Elliptic modulus `k` with `0 ≤ k < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Modulus<T>(T);

impl<T: Real> Modulus<T> {
    pub fn new(k: T) -> Result<Self> {
        if !k.is_finite() || k < T::zero() || k >= T::one() {
            return domain(format!("modulus must satisfy 0 <= k < 1, got {k:?}"));
        }
        Ok(Self(k))
    }

    pub fn k(self) -> T {
        self.0
    }

    /// Complementary modulus `√(1 − k²)`.
    pub fn complement(self) -> T {
        ((T::one() - self.0) * (T::one() + self.0)).sqrt()
    }
}

/// Amplitude together with `sn = sin am` and `cn = cos am`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiTriple<T> {
    pub am: T,
    pub sn: T,
    pub cn: T,
}

fn tol<T: Real>() -> T {
    T::epsilon() * T::lit(4.0)
}

/// Complete integral `K(k) = F(π/2; k)`.
pub fn complete_k<T: Real>(k: Modulus<T>) -> T {
    if k.k().is_zero() {
        return T::FRAC_PI_2();
    }
    let mut a = T::one();
    let mut b = k.complement();
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= tol::<T>() * a {
            break;
        }
        let an = (a + b) * T::lit(0.5);
        b = (a * b).sqrt();
        a = an;
    }
    T::PI() / (T::lit(2.0) * a)
}

/// `F(φ; k)` for `φ ∈ [0, π/2]`.
fn f_first_quadrant<T: Real>(phi: T, k: Modulus<T>) -> T {
    if phi.is_zero() {
        return T::zero();
    }
    let mut a = T::one();
    let mut b = k.complement();
    let mut ph = phi;
    let mut scale = T::one();
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= tol::<T>() * a {
            break;
        }
        let d = (b / a * ph.tan()).atan();
        let turns = ((ph - d) / T::PI()).round();
        ph = ph + d + turns * T::PI();
        let an = (a + b) * T::lit(0.5);
        b = (a * b).sqrt();
        a = an;
        scale = scale * T::lit(2.0);
    }
    ph / (scale * a)
}

/// Incomplete integral `F(φ; k) = ∫₀^φ (1 − k² sin²τ)^{−1/2} dτ`.
///
/// The amplitude is first reduced to `[−π/2, π/2]` with
/// `F(φ + nπ) = F(φ) + 2nK`.
pub fn incomplete_f<T: Real>(phi: T, k: Modulus<T>) -> Result<T> {
    if !phi.is_finite() {
        return domain("amplitude must be finite");
    }
    if k.k().is_zero() {
        return Ok(phi);
    }
    let n = (phi / T::PI()).round();
    let r = phi - n * T::PI();
    let base = f_first_quadrant(r.abs().min(T::FRAC_PI_2()), k);
    let base = if r < T::zero() { -base } else { base };
    if n.is_zero() {
        Ok(base)
    } else {
        Ok(T::lit(2.0) * n * complete_k(k) + base)
    }
}

/// Amplitude for `|u| ≤ K` by the AGM backward recurrence.
fn am_reduced<T: Real>(u: T, k: Modulus<T>) -> T {
    let mut a = vec![T::one()];
    let mut c = vec![k.k()];
    let mut b = k.complement();
    for _ in 0..MAX_AGM_STEPS {
        let (an, cn) = (*a.last().unwrap(), *c.last().unwrap());
        if cn.abs() <= tol::<T>() * an {
            break;
        }
        let next = (an + b) * T::lit(0.5);
        c.push((an - b) * T::lit(0.5));
        b = (an * b).sqrt();
        a.push(next);
    }
    let n = a.len() - 1;
    let mut phi = T::lit(2.0).powi(n as i32) * a[n] * u;
    for i in (1..=n).rev() {
        let s = (c[i] / a[i] * phi.sin()).max(-T::one()).min(T::one());
        phi = (phi + s.asin()) * T::lit(0.5);
    }
    phi
}

/// Jacobi amplitude `am(u; k)` with `sn` and `cn`.
///
/// The AGM estimate is refined by Newton iterations on `F(φ) − u`; failure
/// to reach a residual of a few ulps reports [`Error::NonConvergence`].
pub fn jacobi_am_sn_cn<T: Real>(u: T, k: Modulus<T>) -> Result<JacobiTriple<T>> {
    if !u.is_finite() {
        return domain("argument must be finite");
    }
    if k.k().is_zero() {
        return Ok(JacobiTriple { am: u, sn: u.sin(), cn: u.cos() });
    }
    let kk = complete_k(k);
    let n = (u / (T::lit(2.0) * kk)).round();
    let v = u - T::lit(2.0) * n * kk;
    let mut phi = am_reduced(v, k);
    let k2 = k.k() * k.k();
    let limit = T::lit(16.0) * T::epsilon() * v.abs().max(T::one());
    let mut residual = T::infinity();
    for _ in 0..6 {
        let f = incomplete_f(phi, k)? - v;
        residual = f.abs();
        if residual <= limit {
            break;
        }
        let s = phi.sin();
        phi = phi - f * (T::one() - k2 * s * s).sqrt();
    }
    if residual > limit {
        let f = (incomplete_f(phi, k)? - v).abs();
        if f > limit {
            return Err(Error::NonConvergence { what: "amplitude inversion", residual: f.to_f64_lossy() });
        }
    }
    let am = phi + n * T::PI();
    Ok(JacobiTriple { am, sn: am.sin(), cn: am.cos() })
}

/// `am(u; k)` alone.
pub fn jacobi_am<T: Real>(u: T, k: Modulus<T>) -> Result<T> {
    jacobi_am_sn_cn(u, k).map(|t| t.am)
}

/// Amplitude in the uniformising angle: `am(2K(k)·θ/π; k)`.
///
/// This is the map whose expansion in `k²` the series engine computes; it
/// fixes multiples of `π/2` and commutes with `θ ↦ θ + π`.
pub fn am_uniform<T: Real>(theta: T, k: Modulus<T>) -> Result<T> {
    let kk = complete_k(k);
    jacobi_am(T::lit(2.0) * kk * theta / T::PI(), k)
}

/// `dn(u) = √(1 − k² sn²)` from an amplitude.
pub fn delta_amplitude<T: Real>(am: T, k: Modulus<T>) -> T {
    let s = am.sin();
    (T::one() - k.k() * k.k() * s * s).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DoubleDouble;
    use num_traits::Float;

    fn m(k: f64) -> Modulus<f64> {
        Modulus::new(k).unwrap()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(incomplete_f(0.7, m(0.0)).unwrap(), 0.7);
        assert_eq!(complete_k(m(0.0)), std::f64::consts::FRAC_PI_2);
        for k in [0.1, 0.5, 0.9, 0.99] {
            let kk = complete_k(m(k));
            let f = incomplete_f(std::f64::consts::FRAC_PI_2, m(k)).unwrap();
            assert!((f - kk).abs() <= 1e-14 * kk);
        }
        let t = jacobi_am_sn_cn(1.3, m(0.0)).unwrap();
        assert_eq!(t.am, 1.3);
        let kk = complete_k(m(0.6));
        let t = jacobi_am_sn_cn(kk, m(0.6)).unwrap();
        assert!((t.am - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!((t.sn - 1.0).abs() < 1e-15 && t.cn.abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(Modulus::new(1.0).is_err());
        assert!(Modulus::new(-0.1).is_err());
        assert!(incomplete_f(f64::NAN, m(0.3)).is_err());
        assert!(jacobi_am_sn_cn(f64::INFINITY, m(0.3)).is_err());
    }

    #[test]
    fn quasi_periodicity_and_oddness() {
        for k in [0.2, 0.7, 0.95] {
            let kk = complete_k(m(k));
            for phi in [-2.0, -0.3, 0.4, 1.2, 5.0] {
                let f = incomplete_f(phi, m(k)).unwrap();
                let g = incomplete_f(phi + std::f64::consts::PI, m(k)).unwrap();
                assert!((g - f - 2.0 * kk).abs() < 1e-12);
                let h = incomplete_f(-phi, m(k)).unwrap();
                assert!((h + f).abs() < 1e-14 * f.abs().max(1.0));
            }
        }
    }

    #[test]
    fn generic_over_f32() {
        let k = Modulus::new(0.5f32).unwrap();
        let kk = complete_k(k);
        assert!((kk - 1.685_750_4).abs() < 1e-5);
        let t = jacobi_am_sn_cn(0.8f32, k).unwrap();
        assert!((incomplete_f(t.am, k).unwrap() - 0.8).abs() < 1e-5);
    }

    // reference values frozen from a 45-digit arbitrary-precision evaluation
    #[test]
    fn extended_precision_reaches_thirty_digits() {
        let dd = |s: &str| s.parse::<DoubleDouble>().unwrap();
        let k = Modulus::new(dd("0.5")).unwrap();
        let kk = complete_k(k);
        let want = dd("1.685750354812596042871203657799076989");
        assert!(((kk - want) / want).abs() < dd("1e-30"));
        let k8 = Modulus::new(dd("0.8")).unwrap();
        let f = incomplete_f(dd("1.0"), k8).unwrap();
        let want = dd("1.114267714667189784561698904931596104");
        assert!(((f - want) / want).abs() < dd("1e-30"));
        let t = jacobi_am_sn_cn(dd("0.8"), Modulus::new(dd("0.7")).unwrap()).unwrap();
        let back = incomplete_f(t.am, Modulus::new(dd("0.7")).unwrap()).unwrap();
        assert!((back - dd("0.8")).abs() < dd("1e-30"));
    }
}
