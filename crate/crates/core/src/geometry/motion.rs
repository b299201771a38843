use super::{represent, Ellipse, FourierSeries, Placement};
use crate::error::{Error, Result};

/// Small affine motion of the frame ellipse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EllipticMotion {
    /// Scaling by `exp(λ)`.
    Homothety(f64),
    /// Translation by `(α₁, α₂)`.
    Translation(f64, f64),
    /// `exp([[β₁, β₂], [β₂, −β₁]])`.
    HyperbolicRotation(f64, f64),
}

/// Which representation [`elliptic_motion_mu`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MotionOrder {
    Leading,
    Exact,
}

impl EllipticMotion {
    pub fn magnitude(&self) -> f64 {
        match *self {
            EllipticMotion::Homothety(l) => l.abs(),
            EllipticMotion::Translation(x, y) | EllipticMotion::HyperbolicRotation(x, y) => x.hypot(y),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            EllipticMotion::Homothety(l) => EllipticMotion::Homothety(s * l),
            EllipticMotion::Translation(x, y) => EllipticMotion::Translation(s * x, s * y),
            EllipticMotion::HyperbolicRotation(x, y) => EllipticMotion::HyperbolicRotation(s * x, s * y),
        }
    }

    /// Linear part `M` and offset `t` of `p ↦ Mp + t`.
    pub fn affine(&self) -> ([[f64; 2]; 2], [f64; 2]) {
        match *self {
            EllipticMotion::Homothety(l) => ([[l.exp(), 0.0], [0.0, l.exp()]], [0.0, 0.0]),
            EllipticMotion::Translation(x, y) => ([[1.0, 0.0], [0.0, 1.0]], [x, y]),
            EllipticMotion::HyperbolicRotation(b1, b2) => {
                // the generator squares to s²·I, so exp = cosh s·I + (sinh s/s)·B
                let s = b1.hypot(b2);
                let (ch, shs) = if s == 0.0 { (1.0, 1.0) } else { (s.cosh(), s.sinh() / s) };
                ([[ch + shs * b1, shs * b2], [shs * b2, ch - shs * b1]], [0.0, 0.0])
            }
        }
    }
}

/// Image of the frame ellipse under the motion, as a zero set.
struct MovedEllipse {
    inv: [[f64; 2]; 2],
    t: [f64; 2],
    a: f64,
    b: f64,
}

impl MovedEllipse {
    fn new(frame: &Ellipse<f64>, motion: &EllipticMotion) -> Self {
        let (m, t) = motion.affine();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        Self { inv, t, a: frame.a(), b: frame.b() }
    }

    fn level(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.t[0], y - self.t[1]);
        let u = self.inv[0][0] * dx + self.inv[0][1] * dy;
        let v = self.inv[1][0] * dx + self.inv[1][1] * dy;
        ((u / self.a).powi(2) + (v / self.b).powi(2)).sqrt() - 1.0
    }
}

/// Perturbation `μ` representing the moved frame ellipse in the frame's own
/// elliptic coordinates.
///
/// `Leading` is the first-order closed form: `λ`, `(α₁/a) cos φ + (α₂/a) sin φ`,
/// or `β₁ cos 2φ + β₂ sin 2φ`. `Exact` solves for `μ(φ)` pointwise on `8·K`
/// angles and truncates to `K` modes.
pub fn elliptic_motion_mu(
    frame: &Ellipse<f64>,
    motion: &EllipticMotion,
    order: MotionOrder,
    k_max: usize,
) -> Result<FourierSeries> {
    let k_max = k_max.max(2);
    match order {
        MotionOrder::Leading => {
            let mut s = FourierSeries::zero(k_max);
            match *motion {
                EllipticMotion::Homothety(l) => s.mean = l,
                EllipticMotion::Translation(x, y) => {
                    s.cos_coeffs[0] = x / frame.a();
                    s.sin_coeffs[0] = y / frame.a();
                }
                EllipticMotion::HyperbolicRotation(b1, b2) => {
                    s.cos_coeffs[1] = b1;
                    s.sin_coeffs[1] = b2;
                }
            }
            Ok(s)
        }
        MotionOrder::Exact => {
            if motion.magnitude() > 0.25 * frame.b() {
                return Err(Error::Geometry("motion too large for the frame chart".into()));
            }
            let moved = MovedEllipse::new(frame, motion);
            represent(&|x, y| moved.level(x, y), &Placement::canonical(*frame), k_max)
        }
    }
}
