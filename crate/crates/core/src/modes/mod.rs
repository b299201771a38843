//! Deformed Fourier modes and the `H^r` geometry around them.
//!
//! `v_0 = 1`, `v_k = cos(kx)/√π`, `v_{−k} = sin(kx)/√π`. For `|k| > q0`,
//! `c_{±k}` is `v_{±k}` transported through `X_k = φ_L⁻¹ ∘ φ_{λ_{1/k}}`:
//! `c_k(x) = cos(kθ)/(√π X_k′(θ))` at `θ = X_k⁻¹(x)`. `𝒱_k`, `𝒞_k` are the
//! zero-average `r`-th antiderivatives of `v_k`, `c_k`.

mod periodic;

pub use periodic::PeriodicFunction;

use crate::dynamics::{action_angle_phi, lambda_from_rotation, LazutkinMap, RotationNumber, XqMap};
use crate::error::{domain, Error, Result};
use crate::geometry::{Ellipse, PerturbedDomain};
use crate::numeric::bracketed_root;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Tabulation size used unless a caller overrides it.
pub const DEFAULT_GRID: usize = 4096;
/// Default bound on `|k|`.
pub const DEFAULT_K_MAX: u64 = 1024;

/// `k > 0` cosine type, `k < 0` sine type, `0` the constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModeIndex(i64);

impl ModeIndex {
    pub fn new(k: i64, k_max: u64) -> Result<Self> {
        if k.unsigned_abs() > k_max {
            return domain(format!("mode index {k} exceeds K_max = {k_max}"));
        }
        Ok(Self(k))
    }

    pub fn k(self) -> i64 {
        self.0
    }

    pub fn harmonic(self) -> u64 {
        self.0.unsigned_abs()
    }

    pub fn is_sine(self) -> bool {
        self.0 < 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SobolevOrder(u32);

impl SobolevOrder {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 {
            return domain("Sobolev order must be at least 1");
        }
        Ok(Self(r))
    }

    pub fn r(self) -> u32 {
        self.0
    }
}

/// Trigonometric mode `v_k` on an `n`-point grid.
pub fn trig_mode(k: ModeIndex, n: usize) -> Result<PeriodicFunction> {
    let h = k.harmonic() as f64;
    let s = 1.0 / PI.sqrt();
    match k.k() {
        0 => PeriodicFunction::from_fn(n, |_| 1.0),
        kk if kk > 0 => PeriodicFunction::from_fn(n, |x| s * (h * x).cos()),
        _ => PeriodicFunction::from_fn(n, |x| s * (h * x).sin()),
    }
}

/// `𝒱_k` in closed form: `𝒱_0 = 1`, otherwise `v_k` shifted by `−rπ/2` and
/// divided by `|k|^r`.
pub fn capital_v_mode(k: ModeIndex, r: SobolevOrder, n: usize) -> Result<PeriodicFunction> {
    if k.k() == 0 {
        return PeriodicFunction::from_fn(n, |_| 1.0);
    }
    let h = k.harmonic() as f64;
    let shift = r.r() as f64 * PI / 2.0;
    let s = 1.0 / (PI.sqrt() * h.powi(r.r() as i32));
    if k.is_sine() {
        PeriodicFunction::from_fn(n, |x| s * (h * x - shift).sin())
    } else {
        PeriodicFunction::from_fn(n, |x| s * (h * x - shift).cos())
    }
}

/// The deformed modes of one frame ellipse, sharing its Lazutkin map.
#[derive(Clone, Debug)]
pub struct DeformedBasis {
    frame: Ellipse<f64>,
    q0: u64,
    grid: usize,
    lazutkin: Option<LazutkinMap>,
}

impl DeformedBasis {
    pub fn new(frame: &Ellipse<f64>, q0: u64, grid: usize) -> Result<Self> {
        if q0 < 2 {
            return domain(format!("q0 must be at least 2, got {q0}"));
        }
        let lazutkin = if frame.a() == frame.b() {
            None
        } else {
            Some(LazutkinMap::new(&PerturbedDomain::ellipse(*frame, 8), Some(1024))?)
        };
        Ok(Self { frame: *frame, q0, grid, lazutkin })
    }

    pub fn frame(&self) -> &Ellipse<f64> {
        &self.frame
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// `φ_L`, or the identity on a circle.
    pub fn phi_of_x(&self, x: f64) -> f64 {
        self.lazutkin.as_ref().map_or(x, |l| l.phi_of_x(x))
    }

    /// `c_k`; exactly `v_k` for `|k| ≤ q0` and on a circle.
    pub fn c(&self, k: ModeIndex) -> Result<PeriodicFunction> {
        if k.k() == 0 {
            return domain("deformed modes need |k| >= 1");
        }
        let h = k.harmonic();
        let lz = match &self.lazutkin {
            Some(l) if h > self.q0 => l,
            _ => return trig_mode(k, self.grid),
        };
        let xq = XqMap::with_lazutkin(&self.frame, h, lz.clone())?;
        let n = self.grid;
        let values = (0..n)
            .into_par_iter()
            .map(|j| {
                let x = TAU * j as f64 / n as f64;
                let th = invert(&xq, x)?;
                let arg = h as f64 * th;
                let trig = if k.is_sine() { arg.sin() } else { arg.cos() };
                Ok(trig / (PI.sqrt() * xq.derivative(th)?))
            })
            .collect::<Result<Vec<f64>>>()?;
        PeriodicFunction::from_samples(values)
    }

    /// `𝒞_k`: zero-average with `𝒞_k^{(r)} = c_k`; equals `𝒱_k` for `|k| ≤ q0`.
    pub fn capital_c(&self, k: ModeIndex, r: SobolevOrder) -> Result<PeriodicFunction> {
        if k.harmonic() <= self.q0 || self.lazutkin.is_none() {
            return capital_v_mode(k, r, self.grid);
        }
        Ok(self.c(k)?.antiderivative(r.r()))
    }
}

/// `X_k⁻¹(x)` by Newton, falling back to bisection on the monotone bracket
/// `[x − 1, x + 1]`.
fn invert(xq: &XqMap, x: f64) -> Result<f64> {
    match xq.inverse(x) {
        Ok(t) => Ok(t),
        Err(_) => {
            let f = |t: f64| xq.eval(t).map_or(f64::NAN, |v| v - x);
            bracketed_root(f, x - 1.0, x + 1.0, 1e-13)
        }
    }
}

pub fn deformed_mode(frame: &Ellipse<f64>, k: ModeIndex, q0: u64) -> Result<PeriodicFunction> {
    DeformedBasis::new(frame, q0, DEFAULT_GRID)?.c(k)
}

pub fn capital_c_mode(frame: &Ellipse<f64>, k: ModeIndex, r: SobolevOrder, q0: u64) -> Result<PeriodicFunction> {
    DeformedBasis::new(frame, q0, DEFAULT_GRID)?.capital_c(k, r)
}

/// `⟨u, v⟩_r` with an accuracy flag.
#[derive(Clone, Debug, Serialize)]
pub struct InnerProduct {
    #[serde(with = "crate::json::num")]
    pub value: f64,
    /// Set when either spectrum has not decayed below `1e−12` near the band edge.
    pub warning: Option<String>,
}

fn check_pair(u: &PeriodicFunction, v: &PeriodicFunction) -> Result<()> {
    if u.n() != v.n() {
        return Err(Error::Domain(format!("grid sizes differ: {} vs {}", u.n(), v.n())));
    }
    Ok(())
}

fn resolution_warning(fs: &[&PeriodicFunction]) -> Option<String> {
    let worst = fs.iter().map(|f| f.spectral_tail()).fold(0.0, f64::max);
    (worst > 1e-12).then(|| format!("spectrum not resolved: band-edge coefficients at {worst:.1e} of the peak"))
}

/// `⟨u, v⟩_r = (∫u)(∫v) + ∫ u^{(r)} v^{(r)}`, computed spectrally.
pub fn sobolev_inner(u: &PeriodicFunction, v: &PeriodicFunction, r: SobolevOrder) -> Result<InnerProduct> {
    check_pair(u, v)?;
    let (su, sv) = (u.spectrum(), v.spectrum());
    let n = u.n();
    let mut acc = 0.0;
    for j in 1..n / 2 {
        let w = (j as f64).powi(2 * r.r() as i32);
        // bins j and n − j are conjugate; together they give 2·Re(U_j·conj V_j)
        acc += 2.0 * w * (su[j] * sv[j].conj()).re;
    }
    let value = u.integral() * v.integral() + TAU * acc;
    Ok(InnerProduct { value, warning: resolution_warning(&[u, v]) })
}

/// `‖u‖_r² = Σ (|k|^{2r} ∨ 1) û_k²` with `û_k = ∫ u v_k`.
pub fn sobolev_norm_sq(u: &PeriodicFunction, r: SobolevOrder) -> f64 {
    let s = u.spectrum();
    let n = u.n();
    let mut acc = u.integral().powi(2);
    for (j, c) in s.iter().enumerate().take(n / 2).skip(1) {
        let (a, b) = (2.0 * c.re, -2.0 * c.im);
        let (ua, ub) = (PI.sqrt() * a, PI.sqrt() * b);
        acc += (j as f64).powi(2 * r.r() as i32).max(1.0) * (ua * ua + ub * ub);
    }
    acc
}

pub fn sobolev_norm(u: &PeriodicFunction, r: SobolevOrder) -> f64 {
    sobolev_norm_sq(u, r).sqrt()
}

/// Deviation of one deformed mode from its trigonometric counterpart.
#[derive(Clone, Debug, Serialize)]
pub struct ModeDeviation {
    pub k: i64,
    /// `‖c_k − v_k‖_{C⁰}` on the grid.
    #[serde(with = "crate::json::num")]
    pub c0: f64,
    /// `‖𝒞_k − 𝒱_k‖_r`.
    #[serde(with = "crate::json::num")]
    pub hr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisDefect {
    /// `[Σ_{q0<|k|≤K} ‖𝒞_k − 𝒱_k‖_r² + tail]^{1/2}`.
    #[serde(with = "crate::json::num")]
    pub defect: f64,
    pub threshold_ok: bool,
    /// Sobolev order; the defect is the same for every `r ≥ 1`.
    pub r: u32,
    /// Measured `sup_k k·‖c_k − v_k‖_{C⁰}`.
    #[serde(with = "crate::json::num")]
    pub c_e: f64,
    /// Measured `sup_k k·‖𝒞_k − 𝒱_k‖_r`, the envelope used for the tail.
    #[serde(with = "crate::json::num")]
    pub c_r: f64,
    /// `2·c_r²/K ≥ Σ_{|k|>K} c_r²/k²`.
    #[serde(with = "crate::json::num")]
    pub tail: f64,
    pub per_k_deviation: Vec<ModeDeviation>,
}

/// Computable bound on `‖ℒ − Id‖` for the deformed basis.
pub fn basis_defect(frame: &Ellipse<f64>, q0: u64, r: SobolevOrder, k_max: u64) -> Result<BasisDefect> {
    basis_defect_on(&DeformedBasis::new(frame, q0, DEFAULT_GRID)?, r, k_max)
}

pub fn basis_defect_on(basis: &DeformedBasis, r: SobolevOrder, k_max: u64) -> Result<BasisDefect> {
    if k_max < 4 * basis.q0 {
        return domain(format!("K must be at least 4·q0 = {}, got {k_max}", 4 * basis.q0));
    }
    let ks: Vec<i64> = (basis.q0 as i64 + 1..=k_max as i64).flat_map(|k| [k, -k]).collect();
    let per_k = ks
        .iter()
        .map(|&k| {
            let idx = ModeIndex::new(k, k_max)?;
            let c = basis.c(idx)?;
            let v = trig_mode(idx, basis.grid)?;
            // 𝒞_k − 𝒱_k has zero mean and r-th derivative c_k − v_k, so its
            // H^r norm is the L² norm of c_k − v_k
            let diff = c.sub(&v);
            Ok(ModeDeviation { k, c0: diff.sup_norm(), hr: diff.l2_norm() })
        })
        .collect::<Result<Vec<_>>>()?;
    let c_e = per_k.iter().map(|d| d.k.unsigned_abs() as f64 * d.c0).fold(0.0, f64::max);
    let c_r = per_k.iter().map(|d| d.k.unsigned_abs() as f64 * d.hr).fold(0.0, f64::max);
    let partial: f64 = per_k.iter().map(|d| d.hr * d.hr).sum();
    let tail = 2.0 * c_r * c_r / k_max as f64;
    let defect = (partial + tail).sqrt();
    Ok(BasisDefect { defect, threshold_ok: defect < 1.0, r: r.r(), c_e, c_r, tail, per_k_deviation: per_k })
}

/// `D(q0) = [Σ_{|k|>q0} 1/k²]^{1/2}`.
pub fn d_q0(q0: u64) -> f64 {
    // direct sum plus the integral tail 1/(n + 1/2)
    let n = 100_000u64;
    let s: f64 = (q0 + 1..=n).map(|k| 1.0 / (k as f64 * k as f64)).sum::<f64>() + 1.0 / (n as f64 + 0.5);
    (2.0 * s).sqrt()
}

/// `f_μ(x) = μ(φ_L(x))` on the basis grid.
pub fn lazutkin_pullback(basis: &DeformedBasis, domain: &PerturbedDomain) -> Result<PeriodicFunction> {
    let n = basis.grid;
    let vals = (0..n).into_par_iter().map(|j| domain.mu.eval_fast(basis.phi_of_x(TAU * j as f64 / n as f64))).collect();
    PeriodicFunction::from_samples(vals)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Annihilation {
    /// `⟨f_μ, 𝒞_q⟩_r`.
    #[serde(with = "crate::json::num")]
    pub plus: f64,
    /// `⟨f_μ, 𝒞_{−q}⟩_r`.
    #[serde(with = "crate::json::num")]
    pub minus: f64,
    /// `π^{−1/2} ∫ D^r[μ∘φ_λ](θ) cos qθ dθ` with `λ = λ_{1/q}`: the same
    /// pairing with the derivative taken after the change of variables.
    #[serde(with = "crate::json::num")]
    pub theta_plus: f64,
    /// As `theta_plus` against `sin qθ`.
    #[serde(with = "crate::json::num")]
    pub theta_minus: f64,
}

/// `⟨f_μ, 𝒞_{±q}⟩_r` for the frame of `domain`.
pub fn annihilation_test(domain: &PerturbedDomain, q: u64, r: SobolevOrder, q0: u64) -> Result<Annihilation> {
    if q <= q0 {
        return crate::error::domain(format!("annihilation needs q > q0 = {q0}, got {q}"));
    }
    let basis = DeformedBasis::new(&domain.frame, q0, DEFAULT_GRID)?;
    annihilation_on(&basis, domain, q, r)
}

pub fn annihilation_on(basis: &DeformedBasis, domain: &PerturbedDomain, q: u64, r: SobolevOrder) -> Result<Annihilation> {
    let f = lazutkin_pullback(basis, domain)?;
    let k_max = q.max(DEFAULT_K_MAX);
    let plus = sobolev_inner(&f, &basis.capital_c(ModeIndex::new(q as i64, k_max)?, r)?, r)?.value;
    let minus = sobolev_inner(&f, &basis.capital_c(ModeIndex::new(-(q as i64), k_max)?, r)?, r)?.value;

    let frame = &domain.frame;
    let theta_side = if frame.a() == frame.b() {
        f.clone()
    } else {
        let lambda = lambda_from_rotation(frame, &RotationNumber::from_fraction(1, q)?)?;
        let n = basis.grid;
        let vals = (0..n)
            .into_par_iter()
            .map(|j| Ok(domain.mu.eval_fast(action_angle_phi(TAU * j as f64 / n as f64, lambda, frame)?)))
            .collect::<Result<Vec<f64>>>()?;
        PeriodicFunction::from_samples(vals)?
    };
    // ∫ g cos qθ = π·a_q for the real series coefficient a_q
    let (a, b) = theta_side.derivative(r.r()).series(q as usize).coeff(q as usize);
    Ok(Annihilation { plus, minus, theta_plus: PI.sqrt() * a, theta_minus: PI.sqrt() * b })
}

/// `max_{s ≤ r} sup |D^s(φ_L − Id)|` on the basis grid.
pub fn lazutkin_deviation(basis: &DeformedBasis, r: u32) -> Result<f64> {
    let n = basis.grid;
    let dev = PeriodicFunction::from_samples(
        (0..n)
            .map(|j| {
                let x = TAU * j as f64 / n as f64;
                crate::numeric::wrap_angle(basis.phi_of_x(x) - x + PI) - PI
            })
            .collect(),
    )?;
    Ok((0..=r).map(|s| dev.derivative(s).sup_norm()).fold(dev.sup_norm(), f64::max))
}
