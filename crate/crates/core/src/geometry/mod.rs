//! Ellipses, elliptic-polar coordinates, confocal caustics, perturbed
//! domains, elliptic motions, frame changes and best-approximating ellipses.

mod domain;
mod ellipse;
mod fit;
mod fourier;
mod motion;
mod reframe;

pub use domain::PerturbedDomain;
pub use ellipse::{Ellipse, EllipticPoint};
pub use fit::{best_fit_ellipse, BestFit, FIT_K_MAX};
pub use fourier::FourierSeries;
pub use motion::{elliptic_motion_mu, EllipticMotion, MotionOrder};
pub use reframe::{hausdorff_to_frame, norm_comparison, reframe_perturbation, represent, Placement};

/// Default Fourier truncation.
pub const DEFAULT_K_MAX: usize = 128;
