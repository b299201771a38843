use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Centered, axis-aligned ellipse `x²/a² + y²/b² = 1` with `a ≥ b > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse<T> {
    a: T,
    b: T,
}

/// Point in elliptic-polar coordinates `(μ, φ)` of some frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticPoint<T> {
    pub mu: T,
    pub phi: T,
}

impl<T: Real> Ellipse<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || !(b > T::zero()) || a < b {
            return domain(format!("ellipse needs a >= b > 0, got a={a:?}, b={b:?}"));
        }
        Ok(Self { a, b })
    }

    /// Circle of radius `r`.
    pub fn circle(r: T) -> Result<Self> {
        Self::new(r, r)
    }

    /// Ellipse with semi-major axis `a` and eccentricity `e`.
    pub fn from_eccentricity(a: T, e: T) -> Result<Self> {
        if !(e >= T::zero() && e < T::one()) {
            return domain(format!("eccentricity must lie in [0, 1), got {e:?}"));
        }
        Self::new(a, a * ((T::one() - e) * (T::one() + e)).sqrt())
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Semi-focal distance `c = √(a² − b²)`.
    pub fn c(&self) -> T {
        ((self.a - self.b) * (self.a + self.b)).sqrt()
    }

    pub fn eccentricity(&self) -> T {
        self.c() / self.a
    }

    /// Coordinate `μ₀` of the ellipse itself: `atanh(b/a) = cosh⁻¹(1/e)`.
    /// At `e = 0` the chart is polar with `μ = ln r`, so `μ₀ = ln a`.
    pub fn mu0(&self) -> T {
        if self.a == self.b {
            self.a.ln()
        } else {
            (self.b / self.a).atanh()
        }
    }

    /// Cartesian point at offset `δ = μ − μ₀` from the ellipse along the
    /// confocal family: `((a cosh δ + b sinh δ) cos φ, (b cosh δ + a sinh δ) sin φ)`.
    ///
    /// This equals `(c cosh μ cos φ, c sinh μ sin φ)` and stays regular at `e = 0`.
    pub fn chart(&self, delta: T, phi: T) -> (T, T) {
        let (ch, sh) = (delta.cosh(), delta.sinh());
        ((self.a * ch + self.b * sh) * phi.cos(), (self.b * ch + self.a * sh) * phi.sin())
    }

    pub fn to_cartesian(&self, p: EllipticPoint<T>) -> (T, T) {
        self.chart(p.mu - self.mu0(), p.phi)
    }

    /// Inverse of [`to_cartesian`](Self::to_cartesian) with `φ ∈ [0, 2π)`.
    ///
    /// Refused for circles, where the chart is polar rather than elliptic, and
    /// on the focal segment, where `φ` is not determined.
    pub fn from_cartesian(&self, x: T, y: T) -> Result<EllipticPoint<T>> {
        if self.a == self.b {
            return Err(Error::Geometry(
                "elliptic chart degenerates at e = 0; use polar coordinates".into(),
            ));
        }
        let c = self.c();
        if y == T::zero() && x.abs() <= c {
            return Err(Error::Geometry(format!(
                "point ({x:?}, 0) lies on the focal segment [-c, c], where the angle is undefined"
            )));
        }
        let (mu, phi) = elliptic_coords(c, x, y);
        Ok(EllipticPoint { mu, phi })
    }

    /// `(δ, φ)` with `δ = μ − μ₀`; polar `(ln(r/a), arg)` for circles.
    pub fn offset_coords(&self, x: T, y: T) -> (T, T) {
        if self.a == self.b {
            let r = x.hypot(y);
            return ((r / self.a).ln(), wrap(y.atan2(x)));
        }
        let (mu, phi) = elliptic_coords(self.c(), x, y);
        (mu - self.mu0(), phi)
    }

    /// Confocal caustic `C_λ` with semi-axes `√(a² − λ²)`, `√(b² − λ²)`.
    pub fn confocal_caustic(&self, lambda: T) -> Result<Self> {
        if !(lambda > T::zero() && lambda < self.b) {
            return domain(format!("caustic parameter must satisfy 0 < lambda < b, got {lambda:?}"));
        }
        let l2 = lambda * lambda;
        Self::new((self.a * self.a - l2).sqrt(), (self.b * self.b - l2).sqrt())
    }

    /// Squared modulus `k_λ² = c²/(a² − λ²)` of the caustic orbit.
    pub fn caustic_modulus_sq(&self, lambda: T) -> T {
        let c = self.c();
        c * c / (self.a * self.a - lambda * lambda)
    }

    /// Support function `h(u) = √(a²u_x² + b²u_y²)` for a unit normal `u`.
    pub fn support(&self, ux: T, uy: T) -> T {
        (self.a * self.a * ux * ux + self.b * self.b * uy * uy).sqrt()
    }
}

fn wrap<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let r = x - (x / tau).floor() * tau;
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// `(μ, φ)` for focal distance `c`, via `s = sinh²μ` solving
/// `c²s² + (c² − x² − y²)s − y² = 0` in a cancellation-free form.
fn elliptic_coords<T: Real>(c: T, x: T, y: T) -> (T, T) {
    let c2 = c * c;
    let p = x * x + y * y - c2;
    let disc = (p * p + T::lit(4.0) * c2 * y * y).sqrt();
    let s = if p >= T::zero() {
        (p + disc) / (T::lit(2.0) * c2)
    } else {
        T::lit(2.0) * y * y / (disc - p)
    };
    let mu = s.sqrt().asinh();
    let phi = (y / mu.sinh()).atan2(x / mu.cosh());
    (mu, wrap(phi))
}

#[derive(Serialize, Deserialize)]
struct EllipseRepr {
    #[serde(with = "crate::json::num")]
    a: f64,
    #[serde(with = "crate::json::num")]
    b: f64,
}

impl Serialize for Ellipse<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EllipseRepr { a: self.a, b: self.b }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ellipse<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EllipseRepr::deserialize(d)?;
        Ellipse::new(r.a, r.b).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertices() {
        let e: Ellipse<f64> = Ellipse::new(1.0, 0.8).unwrap();
        let m0 = e.mu0();
        let (x, y) = e.to_cartesian(EllipticPoint { mu: m0, phi: 0.0 });
        assert!((x - 1.0).abs() < 1e-15 && y.abs() < 1e-15);
        let (x, y) = e.to_cartesian(EllipticPoint { mu: m0, phi: std::f64::consts::FRAC_PI_2 });
        assert!(x.abs() < 1e-15 && (y - 0.8).abs() < 1e-15);
        assert!(((1.0 / e.eccentricity()).acosh() - m0).abs() < 1e-14);
    }

    #[test]
    fn chart_errors() {
        let e = Ellipse::new(1.0, 0.8).unwrap();
        assert!(e.from_cartesian(0.3, 0.0).is_err());
        assert!(Ellipse::circle(1.0).unwrap().from_cartesian(0.3, 0.1).is_err());
        assert!(Ellipse::new(0.5, 1.0).is_err());
        assert!(e.confocal_caustic(0.8).is_err());
        assert!(e.confocal_caustic(0.0).is_err());
    }

    #[test]
    fn circle_chart_is_polar() {
        let c = Ellipse::circle(2.0).unwrap();
        let (x, y) = c.chart(0.1, 0.7);
        assert!((x - 2.0 * 0.1f64.exp() * 0.7f64.cos()).abs() < 1e-15);
        assert!((y - 2.0 * 0.1f64.exp() * 0.7f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn generic_over_f32() {
        let e: Ellipse<f32> = Ellipse::new(1.0, 0.6).unwrap();
        assert!((e.c() - 0.8).abs() < 1e-6);
        let p = e.from_cartesian(0.5f32, 0.4).unwrap();
        let (x, y) = e.to_cartesian(p);
        assert!((x - 0.5).abs() < 1e-5 && (y - 0.4).abs() < 1e-5);
    }
}
