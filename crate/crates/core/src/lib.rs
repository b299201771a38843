//! Elliptic billiards and the computational side of local rigidity near
//! ellipses: elliptic integrals, caustic dynamics, exact eccentricity
//! expansions of the action-angle parametrization, certified
//! non-degeneracy matrices, and deformed Fourier modes.

pub mod dd;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod json;
pub mod modes;
pub mod nondeg;
pub mod numeric;
pub mod scalar;
pub mod series;
pub mod special;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use scalar::Real;

/// Binary64 instances of the generic types.
pub type Ellipse64 = geometry::Ellipse<f64>;
pub type Modulus64 = special::Modulus<f64>;
pub type RotationNumber64 = dynamics::RotationNumber<f64>;

/// Double-double instances, for cancellation-sensitive evaluations.
pub type EllipseDD = geometry::Ellipse<DoubleDouble>;
pub type ModulusDD = special::Modulus<DoubleDouble>;
pub type RotationNumberDD = dynamics::RotationNumber<DoubleDouble>;
