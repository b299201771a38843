use super::{action_angle_phi, lambda_from_rotation, RotationNumber};
use crate::error::Result;
use crate::geometry::PerturbedDomain;
use rayon::prelude::*;

/// Profile of `S(θ) = λ Σ_{k=1}^{q} μ(φ_λ(θ + 2πkp/q))` at `λ = λ_{p/q}`.
#[derive(Clone, Debug)]
pub struct IntegrabilityResidual {
    pub lambda: f64,
    /// `max S − min S` over the grid.
    pub oscillation: f64,
    pub profile: Vec<f64>,
}

/// Integrable-caustic test: a rationally integrable `p/q` caustic forces
/// `S` to be constant up to quadratic terms in `μ`.
pub fn integrability_residual(domain: &PerturbedDomain, p: u64, q: u64, grid: usize) -> Result<IntegrabilityResidual> {
    let frame = domain.frame;
    let lambda = lambda_from_rotation(&frame, &RotationNumber::from_fraction(p, q)?)?;
    let tau = std::f64::consts::TAU;
    let profile = (0..grid)
        .into_par_iter()
        .map(|j| {
            let theta = tau * j as f64 / grid as f64;
            let mut s = 0.0;
            for k in 1..=q {
                let phi = action_angle_phi(theta + tau * (k * p) as f64 / q as f64, lambda, &frame)?;
                s += domain.mu.eval(phi);
            }
            Ok(lambda * s)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = profile.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = profile.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(IntegrabilityResidual { lambda, oscillation: max - min, profile })
}
