//! Billiard map on perturbed ellipses, caustic orbits and rotation numbers
//! of the ellipse, action-angle and Lazutkin parametrizations, periodic
//! orbits and the integrable-caustic residual.

mod billiard;
mod caustic;
mod integrability;
mod lazutkin;
mod pqgon;

pub use billiard::{Billiard, BoundaryState};
pub use caustic::{
    action_angle_phi, action_angle_slope, action_angle_theta, caustic_modulus, caustic_rotation_number, caustic_step,
    ellipse_caustic_orbit, lambda_from_rotation, orbit_angle, tangency_defect, CausticOrbitSpec, RotationNumber,
};
pub use integrability::{integrability_residual, IntegrabilityResidual};
pub use lazutkin::{LazutkinMap, XqMap};
pub use pqgon::{max_pq_gon, PqGon};
