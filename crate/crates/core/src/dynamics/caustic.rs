use crate::error::{domain, Result};
use crate::geometry::Ellipse;
use crate::scalar::Real;
use crate::special::{complete_k, incomplete_f, jacobi_am, Modulus};

/// Orbit tangent to the confocal caustic `C_λ`, sampled `count + 1` times
/// from Jacobi parameter `t0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CausticOrbitSpec<T> {
    pub lambda: T,
    pub t0: T,
    pub count: usize,
}

/// Rotation number in `(0, 1/2)`, optionally known as a reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationNumber<T> {
    pub value: T,
    pub fraction: Option<(u64, u64)>,
}

impl<T: Real> RotationNumber<T> {
    pub fn new(value: T) -> Result<Self> {
        if !(value > T::zero() && value < T::lit(0.5)) {
            return domain(format!("rotation number must lie in (0, 1/2), got {value:?}"));
        }
        Ok(Self { value, fraction: None })
    }

    pub fn from_fraction(p: u64, q: u64) -> Result<Self> {
        if q == 0 || num_integer::gcd(p, q) != 1 {
            return domain(format!("{p}/{q} is not a reduced fraction"));
        }
        let mut r = Self::new(T::lit(p as f64) / T::lit(q as f64))?;
        r.fraction = Some((p, q));
        Ok(r)
    }
}

fn check_lambda<T: Real>(frame: &Ellipse<T>, lambda: T) -> Result<()> {
    if !(lambda > T::zero() && lambda < frame.b()) {
        return domain(format!("caustic parameter must satisfy 0 < lambda < b, got {lambda:?}"));
    }
    Ok(())
}

/// Modulus `k_λ = c/√(a² − λ²)`.
pub fn caustic_modulus<T: Real>(frame: &Ellipse<T>, lambda: T) -> Result<Modulus<T>> {
    check_lambda(frame, lambda)?;
    Modulus::new(frame.caustic_modulus_sq(lambda).sqrt())
}

/// Jacobi-parameter advance per bounce, `δ_λ = 2F(arcsin(λ/b); k_λ)`.
pub fn caustic_step<T: Real>(frame: &Ellipse<T>, lambda: T) -> Result<T> {
    let k = caustic_modulus(frame, lambda)?;
    Ok(T::lit(2.0) * incomplete_f((lambda / frame.b()).asin(), k)?)
}

/// Boundary angle `φ(t) = π/2 + am(t − K; k_λ)` of the caustic orbit.
///
/// The point `(a cos φ, b sin φ)` equals `(a·sn(t), b·cn(t))` up to the shift
/// `t ↦ t − K`, which puts `t = 0` at the vertex `(a, 0)`. Chords between
/// parameters `t` and `t + δ_λ` are tangent to `C_λ`.
pub fn orbit_angle<T: Real>(frame: &Ellipse<T>, lambda: T, t: T) -> Result<T> {
    let k = caustic_modulus(frame, lambda)?;
    Ok(T::FRAC_PI_2() + jacobi_am(t - complete_k(k), k)?)
}

/// Cartesian points `q_λ(t0 + jδ_λ)` for `j = 0..=count`.
pub fn ellipse_caustic_orbit<T: Real>(frame: &Ellipse<T>, spec: &CausticOrbitSpec<T>) -> Result<Vec<(T, T)>> {
    let delta = caustic_step(frame, spec.lambda)?;
    (0..=spec.count)
        .map(|j| {
            let phi = orbit_angle(frame, spec.lambda, spec.t0 + T::lit(j as f64) * delta)?;
            Ok((frame.a() * phi.cos(), frame.b() * phi.sin()))
        })
        .collect()
}

/// `ω(λ) = F(arcsin(λ/b); k_λ) / (2K(k_λ))`.
pub fn caustic_rotation_number<T: Real>(frame: &Ellipse<T>, lambda: T) -> Result<RotationNumber<T>> {
    let k = caustic_modulus(frame, lambda)?;
    let w = incomplete_f((lambda / frame.b()).asin(), k)? / (T::lit(2.0) * complete_k(k));
    Ok(RotationNumber { value: w.min(T::lit(0.5) - T::epsilon()).max(T::epsilon()), fraction: None })
}

/// Inverse of [`caustic_rotation_number`] by bisection on `(0, b)`.
pub fn lambda_from_rotation<T: Real>(frame: &Ellipse<T>, omega: &RotationNumber<T>) -> Result<T> {
    let target = omega.value;
    if frame.a() == frame.b() {
        return Ok(frame.b() * (T::PI() * target).sin());
    }
    let (mut lo, mut hi) = (T::zero(), frame.b());
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if caustic_rotation_number(frame, mid)?.value < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // near λ = b one ulp of λ moves ω by more than 1e−12; keep the closer end
    if lo > T::zero() && (caustic_rotation_number(frame, lo)?.value - target).abs() <= (caustic_rotation_number(frame, hi)?.value - target).abs() {
        Ok(lo)
    } else {
        Ok(hi)
    }
}

/// Action-angle parametrization `θ ↦ φ_λ(θ) = π/2 + am(4K(θ − π/2)/2π; k_λ)`.
///
/// Fixes `0` and `π/2`, is the identity at `e = 0`, and conjugates the
/// caustic orbit to the rotation `θ ↦ θ + 2πω(λ)`.
pub fn action_angle_phi<T: Real>(theta: T, lambda: T, frame: &Ellipse<T>) -> Result<T> {
    let k = caustic_modulus(frame, lambda)?;
    let kk = complete_k(k);
    let u = T::lit(2.0) * kk * (theta - T::FRAC_PI_2()) / T::PI();
    Ok(T::FRAC_PI_2() + jacobi_am(u, k)?)
}

/// `dφ_λ/dθ = (2K/π)·√(1 − k² cos²φ)` at `φ = φ_λ(θ)`.
pub fn action_angle_slope<T: Real>(phi: T, lambda: T, frame: &Ellipse<T>) -> Result<T> {
    let k = caustic_modulus(frame, lambda)?;
    let c = phi.cos();
    Ok(T::lit(2.0) * complete_k(k) / T::PI() * (T::one() - k.k() * k.k() * c * c).sqrt())
}

/// Inverse of [`action_angle_phi`]: `θ = π/2 + (π/2K)·F(φ − π/2; k)`.
pub fn action_angle_theta<T: Real>(phi: T, lambda: T, frame: &Ellipse<T>) -> Result<T> {
    let k = caustic_modulus(frame, lambda)?;
    Ok(T::FRAC_PI_2() + T::PI() / (T::lit(2.0) * complete_k(k)) * incomplete_f(phi - T::FRAC_PI_2(), k)?)
}

/// Signed distance from the line through `p1`, `p2` to the caustic: the
/// line's distance from the center minus the caustic's support value in
/// the line's normal direction.
pub fn tangency_defect<T: Real>(caustic: &Ellipse<T>, p1: (T, T), p2: (T, T)) -> T {
    let (dx, dy) = (p2.0 - p1.0, p2.1 - p1.1);
    let n = dx.hypot(dy);
    let (nx, ny) = (dy / n, -dx / n);
    let dist = (nx * p1.0 + ny * p1.1).abs();
    dist - caustic.support(nx, ny)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_rotation_number() {
        let c = Ellipse::circle(1.0_f64).unwrap();
        let w = caustic_rotation_number(&c, 0.5).unwrap().value;
        assert!((w - 1.0 / 6.0).abs() < 1e-15);
        let e = Ellipse::new(1.0_f64, 0.8).unwrap();
        assert!(caustic_rotation_number(&e, 0.8).is_err());
    }

    #[test]
    fn action_angle_fixed_points() {
        let e = Ellipse::new(1.0_f64, 0.7).unwrap();
        assert!(action_angle_phi(0.0, 0.3, &e).unwrap().abs() < 1e-15);
        assert!((action_angle_phi(std::f64::consts::FRAC_PI_2, 0.3, &e).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let c = Ellipse::circle(1.0_f64).unwrap();
        assert!((action_angle_phi(1.1, 0.3, &c).unwrap() - 1.1).abs() < 1e-15);
        let phi = action_angle_phi(2.3, 0.3, &e).unwrap();
        assert!((action_angle_theta(phi, 0.3, &e).unwrap() - 2.3).abs() < 1e-14);
    }

    #[test]
    fn orbit_starts_at_vertex() {
        let e = Ellipse::new(1.0_f64, 0.8).unwrap();
        let pts = ellipse_caustic_orbit(&e, &CausticOrbitSpec { lambda: 0.3, t0: 0.0, count: 1 }).unwrap();
        assert!((pts[0].0 - 1.0).abs() < 1e-15 && pts[0].1.abs() < 1e-15);
    }
}
