use crate::error::{domain, Error, Result};
use crate::geometry::PerturbedDomain;
use crate::numeric::{bracketed_root, wrap_angle};

/// Impact state: boundary angle `φ` and the angle `θ ∈ (0, π)` between the
/// outgoing velocity and the positively oriented tangent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryState {
    pub phi: f64,
    pub theta: f64,
}

/// Billiard table on a strictly convex perturbed domain.
#[derive(Clone, Debug)]
pub struct Billiard {
    domain: PerturbedDomain,
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn dot(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

impl Billiard {
    /// Checks strict convexity by sampling the curvature on `8·K` points.
    pub fn new(domain: PerturbedDomain) -> Result<Self> {
        let n = domain.grid_size();
        for j in 0..n {
            let phi = std::f64::consts::TAU * j as f64 / n as f64;
            let k = domain.curvature(phi);
            if !(k > 0.0) {
                return Err(Error::Convexity(format!("curvature {k:e} at phi = {phi}")));
            }
        }
        Ok(Self { domain })
    }

    pub fn domain(&self) -> &PerturbedDomain {
        &self.domain
    }

    pub fn point(&self, phi: f64) -> [f64; 2] {
        let (x, y) = self.domain.point(phi);
        [x, y]
    }

    fn tangent(&self, phi: f64) -> [f64; 2] {
        self.domain.point_derivatives(phi)[1]
    }

    /// Next impact. The chord end solves `(P(ψ) − P(φ)) × v = 0` for
    /// `ψ ∈ (φ, φ + 2π)`, bracketed around the circular guess `φ + 2θ`.
    pub fn step(&self, s: BoundaryState) -> Result<BoundaryState> {
        if !(s.theta > 0.0 && s.theta < std::f64::consts::PI) {
            return domain(format!("incidence angle must lie in (0, pi), got {}", s.theta));
        }
        let p0 = self.point(s.phi);
        let t = self.tangent(s.phi);
        let tn = t[0].hypot(t[1]);
        let (st, ct) = s.theta.sin_cos();
        let v = [(ct * t[0] - st * t[1]) / tn, (st * t[0] + ct * t[1]) / tn];
        let f = |psi: f64| {
            let p = self.point(psi);
            cross([p[0] - p0[0], p[1] - p0[1]], v)
        };
        let tau = std::f64::consts::TAU;
        let (lo_lim, hi_lim) = (s.phi, s.phi + tau);
        let guess = s.phi + 2.0 * s.theta;
        let mut h = 0.25 * (2.0 * s.theta).min(tau - 2.0 * s.theta);
        let mut bracket = None;
        for _ in 0..80 {
            let lo = (guess - h).max(lo_lim + 0.5 * (guess - lo_lim).min(h));
            let hi = (guess + h).min(hi_lim - 0.5 * (hi_lim - guess).min(h));
            if f(lo) * f(hi) <= 0.0 {
                bracket = Some((lo, hi));
                break;
            }
            h *= 1.6;
        }
        let (lo, hi) = bracket.ok_or(Error::NonConvergence { what: "chord bracket", residual: f(guess).abs() })?;
        let psi = bracketed_root(f, lo, hi, 1e-16)?;
        // v leaves through the tangent at ψ; the reflected velocity makes the
        // mirrored angle with it
        let t2 = self.tangent(psi);
        let theta = cross(v, t2).atan2(dot(t2, v));
        Ok(BoundaryState { phi: wrap_angle(psi), theta })
    }

    /// Chord length `ℓ(φ, ψ)` and its first and second partial derivatives
    /// `[ℓ, ∂φ, ∂ψ, ∂φφ, ∂φψ, ∂ψψ]`.
    pub fn chord_derivatives(&self, phi: f64, psi: f64) -> [f64; 6] {
        let [p, p1, p2] = self.domain.point_derivatives(phi);
        let [q, q1, q2] = self.domain.point_derivatives(psi);
        let d = [q[0] - p[0], q[1] - p[1]];
        let l = d[0].hypot(d[1]);
        let u = [d[0] / l, d[1] / l];
        let (up, uq) = (dot(u, p1), dot(u, q1));
        [
            l,
            -up,
            uq,
            (dot(p1, p1) - up * up) / l - dot(u, p2),
            -(dot(p1, q1) - up * uq) / l,
            (dot(q1, q1) - uq * uq) / l + dot(u, q2),
        ]
    }

    /// State leaving `P(φ₁)` toward `P(φ₂)`.
    pub fn state_from_chord(&self, phi1: f64, phi2: f64) -> BoundaryState {
        let (p, q) = (self.point(phi1), self.point(phi2));
        let v = [q[0] - p[0], q[1] - p[1]];
        let t = self.tangent(phi1);
        BoundaryState { phi: wrap_angle(phi1), theta: cross(t, v).atan2(dot(t, v)) }
    }

    /// Reverses the velocity at an impact: the time-reversed state.
    pub fn reverse(&self, s: BoundaryState) -> BoundaryState {
        BoundaryState { phi: s.phi, theta: std::f64::consts::PI - s.theta }
    }
}
