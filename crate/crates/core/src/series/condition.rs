use super::expand::{xi_lookup, xi_polynomials, XiPolynomial};
use super::trig::rational_to;
use crate::dynamics::{caustic_modulus, lambda_from_rotation, RotationNumber};
use crate::error::{domain, Result};
use crate::geometry::Ellipse;
use num_rational::BigRational;
use num_traits::Zero;

/// Coefficient of `a_{q−2l}` in the Fourier condition of a `p/q` caustic.
#[derive(Clone, Debug)]
pub struct ConditionTerm {
    pub l: i64,
    pub harmonic: i64,
    /// `ξ_{n,l}(q − 2l)` for `n = 1..=N` (zero when `n < |l|`).
    pub xi: Vec<BigRational>,
    /// `[l = 0] + Σ_n ξ_{n,l}(q − 2l)·κ^{2n}` with `κ² = c²/(a² − λ_{p/q}²)`.
    pub exact: f64,
    /// The same with `κ²` replaced by `e²/cos²(πp/q)`.
    pub leading: f64,
}

/// Linear functional `a_q + Σ_{n≤N} Σ_{|l|≤n} ξ_{n,l}(q−2l)·a_{q−2l}·κ^{2n}`,
/// which vanishes up to `O(e^{2N+2})` when the domain has an integrable
/// `p/q` caustic.
///
/// The coefficients act on the Fourier coefficients of `μ(ψ + π/2)`, the
/// perturbation read from the minor-axis vertex where the amplitude series
/// is centred. [`ConditionRow::boundary_signs`] converts to the coefficients
/// of `μ` itself.
#[derive(Clone, Debug)]
pub struct ConditionRow {
    pub p: u64,
    pub q: u64,
    pub order: usize,
    pub kappa_sq: f64,
    pub leading_weight: f64,
    /// Power of `e` in the remainder.
    pub remainder_order: usize,
    /// Terms for `l = −N..=N`.
    pub terms: Vec<ConditionTerm>,
}

impl ConditionRow {
    pub fn term(&self, l: i64) -> Option<&ConditionTerm> {
        self.terms.iter().find(|t| t.l == l)
    }

    /// Coefficients on the Fourier coefficients of `μ` in the boundary angle
    /// `φ = ψ + π/2`. Shifting harmonic `k` by `π/2` multiplies it by
    /// `i^k`, so relative to harmonic `q` the term `q − 2l` picks up `(−1)^l`.
    pub fn boundary_signs(&self) -> Vec<(i64, f64)> {
        self.terms
            .iter()
            .map(|t| (t.harmonic, if t.l % 2 == 0 { t.exact } else { -t.exact }))
            .collect()
    }

    /// Applies the exact row to coefficients `a(k)`.
    pub fn apply(&self, a: impl Fn(i64) -> f64) -> f64 {
        self.terms.iter().map(|t| t.exact * a(t.harmonic)).sum()
    }
}

fn weight_sum(xi: &[BigRational], w: f64, unit: bool) -> f64 {
    let mut acc = if unit { 1.0 } else { 0.0 };
    let mut wn = 1.0;
    for c in xi {
        wn *= w;
        acc += rational_to::<f64>(c) * wn;
    }
    acc
}

/// The `p/q` condition row truncated at order `N`, with `λ_{p/q}` from the
/// frame's rotation-number inverse.
pub fn fourier_condition_row(p: u64, q: u64, n: usize, frame: &Ellipse<f64>) -> Result<ConditionRow> {
    if q <= 2 * n as u64 {
        return domain(format!("the condition needs q > 2N, got q = {q}, N = {n}"));
    }
    let table: Vec<XiPolynomial> = if n == 0 { Vec::new() } else { xi_polynomials(n)? };
    fourier_condition_row_with(&table, p, q, n, frame)
}

/// As [`fourier_condition_row`] with a precomputed `ξ` table of order `≥ N`.
pub fn fourier_condition_row_with(
    table: &[XiPolynomial],
    p: u64,
    q: u64,
    n: usize,
    frame: &Ellipse<f64>,
) -> Result<ConditionRow> {
    if q <= 2 * n as u64 {
        return domain(format!("the condition needs q > 2N, got q = {q}, N = {n}"));
    }
    let rot = RotationNumber::from_fraction(p, q)?;
    let lambda = lambda_from_rotation(frame, &rot)?;
    let kappa_sq = if frame.a() == frame.b() { 0.0 } else { caustic_modulus(frame, lambda)?.k().powi(2) };
    let e = frame.eccentricity();
    let leading_weight = e * e / (std::f64::consts::PI * rot.value).cos().powi(2);
    let ni = n as i64;
    let terms = (-ni..=ni)
        .map(|l| {
            let harmonic = q as i64 - 2 * l;
            let xi: Vec<BigRational> = (1..=n)
                .map(|j| {
                    if (l.unsigned_abs() as usize) > j {
                        BigRational::zero()
                    } else {
                        xi_lookup(table, j, l).map(|x| x.eval(harmonic)).unwrap_or_else(BigRational::zero)
                    }
                })
                .collect();
            ConditionTerm {
                l,
                harmonic,
                exact: weight_sum(&xi, kappa_sq, l == 0),
                leading: weight_sum(&xi, leading_weight, l == 0),
                xi,
            }
        })
        .collect();
    Ok(ConditionRow { p, q, order: n, kappa_sq, leading_weight, remainder_order: 2 * n + 2, terms })
}
