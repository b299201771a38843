use super::{Ellipse, FourierSeries, PerturbedDomain};
use crate::error::Result;
use crate::numeric::{bracketed_root, find_bracket};
use serde::{Deserialize, Serialize};

/// An ellipse placed in the plane: body frame rotated by `angle` and
/// centered at `center`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    #[serde(flatten)]
    pub ellipse: Ellipse<f64>,
    #[serde(with = "center_serde")]
    pub center: [f64; 2],
    #[serde(with = "crate::json::num")]
    pub angle: f64,
}

mod center_serde {
    pub fn serialize<S: serde::Serializer>(c: &[f64; 2], s: S) -> Result<S::Ok, S::Error> {
        crate::json::num_vec::serialize(c, s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
        let v = crate::json::num_vec::deserialize(d)?;
        <[f64; 2]>::try_from(v).map_err(|_| serde::de::Error::custom("center needs two entries"))
    }
}

impl Placement {
    /// The ellipse at the origin with axes along the coordinate axes.
    pub fn canonical(ellipse: Ellipse<f64>) -> Self {
        Self { ellipse, center: [0.0, 0.0], angle: 0.0 }
    }

    pub fn translated(ellipse: Ellipse<f64>, dx: f64, dy: f64) -> Self {
        Self { ellipse, center: [dx, dy], angle: 0.0 }
    }

    pub fn to_world(&self, x: f64, y: f64) -> (f64, f64) {
        let (s, c) = self.angle.sin_cos();
        (self.center[0] + c * x - s * y, self.center[1] + s * x + c * y)
    }

    pub fn to_body(&self, x: f64, y: f64) -> (f64, f64) {
        let (s, c) = self.angle.sin_cos();
        let (dx, dy) = (x - self.center[0], y - self.center[1]);
        (c * dx + s * dy, -s * dx + c * dy)
    }

    /// World point at elliptic offset `δ` and angle `φ` of this frame.
    pub fn chart(&self, delta: f64, phi: f64) -> (f64, f64) {
        let (x, y) = self.ellipse.chart(delta, phi);
        self.to_world(x, y)
    }

    /// Level function of the placed ellipse (its own elliptic offset).
    pub fn level(&self, x: f64, y: f64) -> f64 {
        let (u, v) = self.to_body(x, y);
        self.ellipse.offset_coords(u, v).0
    }

    /// `(cx, cy, angle, a, b)`.
    pub fn params(&self) -> [f64; 5] {
        [self.center[0], self.center[1], self.angle, self.ellipse.a(), self.ellipse.b()]
    }

    /// Inverse of [`params`](Self::params), normalizing to `a ≥ b` and
    /// `angle ∈ [−π/2, π/2)`.
    pub fn from_params(p: &[f64]) -> Result<Self> {
        let (mut a, mut b, mut angle) = (p[3].abs(), p[4].abs(), p[2]);
        if b > a {
            std::mem::swap(&mut a, &mut b);
            angle += std::f64::consts::FRAC_PI_2;
        }
        let pi = std::f64::consts::PI;
        angle = (angle + 0.5 * pi).rem_euclid(pi) - 0.5 * pi;
        Ok(Self { ellipse: Ellipse::new(a, b)?, center: [p[0], p[1]], angle })
    }
}

impl From<Ellipse<f64>> for Placement {
    fn from(e: Ellipse<f64>) -> Self {
        Self::canonical(e)
    }
}

/// Represents the zero set of `level` as `frame + μ̄(φ̄)`.
///
/// For each of `8·K` angles `φ̄` the offset `δ̄` with
/// `level(chart(δ̄, φ̄)) = 0` is found by a bracketed solve (bisection, then
/// Newton); the samples are projected onto `K` modes.
pub fn represent(level: &dyn Fn(f64, f64) -> f64, frame: &Placement, k_max: usize) -> Result<FourierSeries> {
    let n = 8 * k_max.max(4);
    let floor = if frame.ellipse.a() == frame.ellipse.b() { -30.0 } else { -0.999 * frame.ellipse.mu0() };
    let mut samples = Vec::with_capacity(n);
    let mut guess = 0.0;
    for j in 0..n {
        let phi = std::f64::consts::TAU * j as f64 / n as f64;
        let g = |d: f64| {
            let (x, y) = frame.chart(d, phi);
            level(x, y)
        };
        let d = match secant(&g, guess, floor) {
            Some(d) => d,
            None => {
                let (lo, hi) = find_bracket(&g, guess, 1e-3, floor)?;
                bracketed_root(g, lo, hi, 1e-15)?
            }
        };
        samples.push(d);
        guess = d;
    }
    Ok(FourierSeries::from_samples(&samples, k_max))
}

/// Secant iteration from `x0`; `None` unless it settles to machine precision.
fn secant(g: &impl Fn(f64) -> f64, x0: f64, floor: f64) -> Option<f64> {
    let (mut x_prev, mut x) = (x0, x0 + 1e-6);
    let (mut f_prev, mut fx) = (g(x_prev), g(x));
    for _ in 0..30 {
        if fx == 0.0 {
            return Some(x);
        }
        let denom = fx - f_prev;
        if denom == 0.0 || !denom.is_finite() {
            return None;
        }
        let next = x - fx * (x - x_prev) / denom;
        if !next.is_finite() || next <= floor || (next - x0).abs() > 0.5 {
            return None;
        }
        if (next - x).abs() <= 1e-15 * (1.0 + next.abs()) {
            return Some(next);
        }
        x_prev = x;
        f_prev = fx;
        x = next;
        fx = g(x);
    }
    None
}

/// `μ̄` with `∂Ω = new_frame + μ̄` in the elliptic coordinates of `new_frame`.
pub fn reframe_perturbation(domain: &PerturbedDomain, new_frame: &Placement, k_max: usize) -> Result<FourierSeries> {
    if *new_frame == Placement::canonical(domain.frame) && domain.mu.k_max() <= k_max {
        let mut mu = FourierSeries::zero(k_max);
        mu = mu.add(&domain.mu);
        return Ok(mu);
    }
    represent(&|x, y| domain.level(x, y), new_frame, k_max)
}

/// Two-sided comparison constant of a frame change: with
/// `∂Ω = E + μ`, `Ē = E + μ_Ē` and `∂Ω = Ē + μ̄`, returns the ratio
/// `‖μ̄‖ / ‖μ − μ_Ē‖` in the spectral `C^n` proxy (a fitted `C′` is
/// `max(ratio, 1/ratio)`).
pub fn norm_comparison(domain: &PerturbedDomain, new_frame: &Placement, n: u32, k_max: usize) -> Result<f64> {
    let bar = reframe_perturbation(domain, new_frame, k_max)?;
    let mu_e = represent(&|x, y| new_frame.level(x, y), &Placement::canonical(domain.frame), k_max)?;
    let diff = domain.mu.sub(&mu_e);
    Ok(bar.weighted_norm(n) / diff.weighted_norm(n))
}

/// Upper estimate of the Hausdorff distance between a placed ellipse and the
/// canonical frame: `max_φ |chart(δ(φ), φ) − chart(0, φ)|` over 64 angles,
/// where `δ(φ)` places the point on the other ellipse.
pub fn hausdorff_to_frame(frame: &Ellipse<f64>, other: &Placement) -> Result<f64> {
    let canon = Placement::canonical(*frame);
    let floor = if frame.a() == frame.b() { -30.0 } else { -0.999 * frame.mu0() };
    let mut dist: f64 = 0.0;
    for j in 0..64 {
        let phi = std::f64::consts::TAU * j as f64 / 64.0;
        let g = |d: f64| {
            let (x, y) = canon.chart(d, phi);
            other.level(x, y)
        };
        let (lo, hi) = find_bracket(&g, 0.0, 1e-3, floor)?;
        let d = bracketed_root(g, lo, hi, 1e-12)?;
        let (x1, y1) = canon.chart(d, phi);
        let (x0, y0) = canon.chart(0.0, phi);
        dist = dist.max((x1 - x0).hypot(y1 - y0));
    }
    Ok(dist)
}
