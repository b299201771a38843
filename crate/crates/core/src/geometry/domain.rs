use super::{Ellipse, FourierSeries};
use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// Boundary `∂Ω = E + μ(φ)`: the point at elliptic offset `μ(φ)` from the
/// frame ellipse `E` along the confocal family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbedDomain {
    pub frame: Ellipse<f64>,
    pub mu: FourierSeries,
}

impl PerturbedDomain {
    /// Validates that the boundary stays inside the coordinate chart,
    /// `μ₀ + min μ > 0` (checked on `8·K` samples), for non-circular frames.
    pub fn new(frame: Ellipse<f64>, mu: FourierSeries) -> Result<Self> {
        if frame.a() != frame.b() {
            let n = 8 * mu.k_max().max(16);
            let min = mu.samples(n).into_iter().fold(f64::INFINITY, f64::min);
            if frame.mu0() + min <= 0.0 {
                return domain(format!(
                    "perturbation reaches the focal segment: mu0 + min mu = {}",
                    frame.mu0() + min
                ));
            }
        }
        Ok(Self { frame, mu })
    }

    /// The frame ellipse itself.
    pub fn ellipse(frame: Ellipse<f64>, k_max: usize) -> Self {
        Self { frame, mu: FourierSeries::zero(k_max) }
    }

    pub fn point(&self, phi: f64) -> (f64, f64) {
        self.frame.chart(self.mu.eval(phi), phi)
    }

    /// `P(φ)`, `P′(φ)`, `P″(φ)` from the chart identities `A′ = B`, `B′ = A`
    /// with `A = a cosh δ + b sinh δ`, `B = b cosh δ + a sinh δ`.
    pub fn point_derivatives(&self, phi: f64) -> [[f64; 2]; 3] {
        let [d, d1, d2] = self.mu.eval_with_derivatives(phi);
        let (a, b) = (self.frame.a(), self.frame.b());
        let (ch, sh) = (d.cosh(), d.sinh());
        let big_a = a * ch + b * sh;
        let big_b = b * ch + a * sh;
        let (s, c) = phi.sin_cos();
        [
            [big_a * c, big_b * s],
            [big_b * d1 * c - big_a * s, big_a * d1 * s + big_b * c],
            [
                (big_a * d1 * d1 + big_b * d2 - big_a) * c - 2.0 * big_b * d1 * s,
                (big_b * d1 * d1 + big_a * d2 - big_b) * s + 2.0 * big_a * d1 * c,
            ],
        ]
    }

    /// Signed curvature `(P′ × P″)/|P′|³`.
    pub fn curvature(&self, phi: f64) -> f64 {
        let [_, p1, p2] = self.point_derivatives(phi);
        let n = p1[0].hypot(p1[1]);
        (p1[0] * p2[1] - p1[1] * p2[0]) / (n * n * n)
    }

    /// Sampling density used for quadratures on this boundary.
    pub fn grid_size(&self) -> usize {
        (8 * self.mu.k_max()).max(512)
    }

    /// Level function, negative inside, zero on the boundary.
    pub fn level(&self, x: f64, y: f64) -> f64 {
        let (d, phi) = self.frame.offset_coords(x, y);
        let v = d - self.mu.eval_fast(phi);
        if v.is_finite() {
            v
        } else {
            -1.0
        }
    }
}

#[derive(Deserialize)]
struct DomainRepr {
    frame: Ellipse<f64>,
    mu: FourierSeries,
}

impl<'de> Deserialize<'de> for PerturbedDomain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DomainRepr::deserialize(d)?;
        PerturbedDomain::new(r.frame, r.mu).map_err(serde::de::Error::custom)
    }
}
