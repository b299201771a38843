use super::{caustic_modulus, lambda_from_rotation, RotationNumber};
use crate::special::{complete_k, jacobi_am, Modulus};
use crate::error::{Error, Result};
use crate::geometry::{Ellipse, FourierSeries, PerturbedDomain};

/// Lazutkin coordinate `x = C_Ω ∫ ρ^{−2/3} ds` as a function of the
/// boundary angle, normalized so that `x(2π) = 2π`.
///
/// With `g(φ) = κ^{2/3}|P′(φ)|`, `x(φ) = φ + C_Ω ∫₀^φ (g − ḡ)` and
/// `C_Ω = 1/ḡ`; the periodic part is integrated spectrally.
#[derive(Clone, Debug)]
pub struct LazutkinMap {
    c_omega: f64,
    /// `x(φ) − φ`.
    periodic: FourierSeries,
    /// `s(φ) − (|∂Ω|/2π)·φ`.
    arc_periodic: FourierSeries,
    perimeter: f64,
}

fn antiderivative(f: &FourierSeries, scale: f64) -> FourierSeries {
    // ∫₀^φ Σ a cos kt + b sin kt = Σ (a/k) sin kφ + (b/k)(1 − cos kφ)
    let mut out = FourierSeries::zero(f.k_max());
    for k in 1..=f.k_max() {
        let (a, b) = f.coeff(k);
        let kf = k as f64;
        out.sin_coeffs[k - 1] = scale * a / kf;
        out.cos_coeffs[k - 1] = -scale * b / kf;
        out.mean += scale * b / kf;
    }
    out
}

/// Drops trailing modes below `2ε` of the largest (FFT round-off), which keeps
/// evaluation cheap for analytic boundaries.
fn trimmed(mut f: FourierSeries) -> FourierSeries {
    let big = f.cos_coeffs.iter().chain(&f.sin_coeffs).fold(0.0f64, |m, c| m.max(c.abs()));
    let keep = (1..=f.k_max()).rev().find(|&k| {
        let (a, b) = f.coeff(k);
        a.abs().max(b.abs()) > 2.0 * f64::EPSILON * big
    });
    let keep = keep.unwrap_or(0);
    f.cos_coeffs.truncate(keep);
    f.sin_coeffs.truncate(keep);
    f
}

impl LazutkinMap {
    /// Samples on `max(8·K, 512)` points (or `grid` when given).
    pub fn new(domain: &PerturbedDomain, grid: Option<usize>) -> Result<Self> {
        let n = grid.unwrap_or_else(|| domain.grid_size());
        let mut g = Vec::with_capacity(n);
        let mut speed = Vec::with_capacity(n);
        for j in 0..n {
            let phi = std::f64::consts::TAU * j as f64 / n as f64;
            let k = domain.curvature(phi);
            if !(k > 0.0) {
                return Err(Error::Convexity(format!("curvature {k:e} at phi = {phi}")));
            }
            let t = domain.point_derivatives(phi)[1];
            let v = t[0].hypot(t[1]);
            speed.push(v);
            g.push(k.cbrt().powi(2) * v);
        }
        let kmax = n / 2 - 1;
        let gs = FourierSeries::from_samples(&g, kmax);
        let vs = FourierSeries::from_samples(&speed, kmax);
        let c_omega = 1.0 / gs.mean;
        Ok(Self {
            c_omega,
            periodic: trimmed(antiderivative(&gs, c_omega)),
            arc_periodic: trimmed(antiderivative(&vs, 1.0)),
            perimeter: std::f64::consts::TAU * vs.mean,
        })
    }

    pub fn c_omega(&self) -> f64 {
        self.c_omega
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn x_of_phi(&self, phi: f64) -> f64 {
        phi + self.periodic.eval_fast(phi)
    }

    /// `dx/dφ = C_Ω·g(φ)`.
    pub fn dx_dphi(&self, phi: f64) -> f64 {
        1.0 + self.periodic.eval_with_derivatives(phi)[1]
    }

    /// `φ_L(x)`: the boundary angle with Lazutkin coordinate `x`.
    pub fn phi_of_x(&self, x: f64) -> f64 {
        let mut phi = x;
        for _ in 0..50 {
            let d = self.periodic.eval_with_derivatives(phi);
            let step = (phi + d[0] - x) / (1.0 + d[1]);
            phi -= step;
            if step.abs() < 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        phi
    }

    pub fn arclength(&self, phi: f64) -> f64 {
        self.perimeter / std::f64::consts::TAU * phi + self.arc_periodic.eval_fast(phi)
    }

    /// Boundary angle at arclength `s` from `φ = 0`.
    pub fn phi_of_s(&self, s: f64) -> f64 {
        let rate = self.perimeter / std::f64::consts::TAU;
        let mut phi = s / rate;
        for _ in 0..50 {
            let d = self.arc_periodic.eval_with_derivatives(phi);
            let step = (rate * phi + d[0] - s) / (rate + d[1]);
            phi -= step;
            if step.abs() < 1e-16 * (1.0 + phi.abs()) {
                break;
            }
        }
        phi
    }

    pub fn x_of_s(&self, s: f64) -> f64 {
        self.x_of_phi(self.phi_of_s(s))
    }
}

/// `X_q(θ) = φ_L⁻¹(φ_{λ_{1/q}}(θ))` for the frame ellipse.
#[derive(Clone, Debug)]
pub struct XqMap {
    lambda: f64,
    modulus: Modulus<f64>,
    /// `2K(k_λ)/π`.
    rate: f64,
    lazutkin: LazutkinMap,
}

impl XqMap {
    pub fn new(frame: &Ellipse<f64>, q: u64) -> Result<Self> {
        if q <= 2 {
            return crate::error::domain(format!("X_q needs q > 2, got {q}"));
        }
        let lazutkin = LazutkinMap::new(&PerturbedDomain::ellipse(*frame, 8), Some(1024))?;
        Self::with_lazutkin(frame, q, lazutkin)
    }

    /// Shares one Lazutkin map across several `q`.
    pub fn with_lazutkin(frame: &Ellipse<f64>, q: u64, lazutkin: LazutkinMap) -> Result<Self> {
        let lambda = lambda_from_rotation(frame, &RotationNumber::from_fraction(1, q)?)?;
        let modulus = caustic_modulus(frame, lambda)?;
        let rate = 2.0 * complete_k(modulus) / std::f64::consts::PI;
        Ok(Self { lambda, modulus, rate, lazutkin })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lazutkin(&self) -> &LazutkinMap {
        &self.lazutkin
    }

    fn phi(&self, theta: f64) -> Result<f64> {
        Ok(std::f64::consts::FRAC_PI_2 + jacobi_am(self.rate * (theta - std::f64::consts::FRAC_PI_2), self.modulus)?)
    }

    pub fn eval(&self, theta: f64) -> Result<f64> {
        Ok(self.lazutkin.x_of_phi(self.phi(theta)?))
    }

    /// `X_q′(θ) = x′(φ)·dφ_λ/dθ` with `dφ_λ/dθ = (2K/π)·√(1 − k² cos²φ)`.
    pub fn derivative(&self, theta: f64) -> Result<f64> {
        Ok(self.eval_with_derivative(theta)?.1)
    }

    /// `(X_q(θ), X_q′(θ))` from one amplitude evaluation.
    pub fn eval_with_derivative(&self, theta: f64) -> Result<(f64, f64)> {
        let phi = self.phi(theta)?;
        let d = self.lazutkin.periodic.eval_with_derivatives(phi);
        let k = self.modulus.k();
        let c = phi.cos();
        let slope = self.rate * (1.0 - k * k * c * c).sqrt();
        Ok((phi + d[0], (1.0 + d[1]) * slope))
    }

    /// Inverse map `x ↦ θ` by safeguarded Newton from `θ = x`.
    pub fn inverse(&self, x: f64) -> Result<f64> {
        let mut th = x;
        for _ in 0..60 {
            let (v, d) = self.eval_with_derivative(th)?;
            let step = (v - x) / d;
            th -= step;
            if step.abs() < 1e-15 * (1.0 + x.abs()) {
                return Ok(th);
            }
        }
        let res = (self.eval(th)? - x).abs();
        if res < 1e-13 {
            Ok(th)
        } else {
            Err(Error::NonConvergence { what: "X_q inversion", residual: res })
        }
    }

    /// `sup|X_q − Id| + sup|X_q′ − 1|` on `n` equispaced angles.
    pub fn c1_deviation(&self, n: usize) -> Result<f64> {
        let (mut d0, mut d1): (f64, f64) = (0.0, 0.0);
        for j in 0..n {
            let th = std::f64::consts::TAU * j as f64 / n as f64;
            d0 = d0.max((self.eval(th)? - th).abs());
            d1 = d1.max((self.derivative(th)? - 1.0).abs());
        }
        Ok(d0 + d1)
    }
}
