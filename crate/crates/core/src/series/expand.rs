//! Expansion of the amplitude in the squared modulus.
//!
//! Writing `F(φ; κ) = A(κ²)·φ + G(φ; κ²)` with `A = 2K/π`, the amplitude
//! `φ = am(2Kθ/π; κ) = θ + Δ` solves `A·Δ + G(θ + Δ) = 0`. Since `G = O(κ²)`
//! the coefficient of `κ^{2j}` in `G(θ + Δ)` involves only `Δ_1..Δ_{j−1}`, so
//! the `Δ_j` are obtained order by order with a table of powers of `Δ`.

use super::trig::{rat, Basis, RationalTrigPoly};
use crate::error::{domain, Result};
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest supported truncation order.
pub const MAX_ORDER: usize = 12;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn central(n: usize) -> BigRational {
    BigRational::new(binomial(big(2 * n as i64), big(n as i64)), big(4).pow(n as u32))
}

fn factorial(r: usize) -> BigRational {
    BigRational::from_integer((1..=r as i64).map(big).product())
}

/// Coefficients of the power series `A(m) = Σ (C(2n,n)/4ⁿ)² mⁿ`.
fn linear_part(n_max: usize) -> Vec<BigRational> {
    (0..=n_max).map(|n| central(n) * central(n)).collect()
}

/// Periodic part `G_n(φ)` multiplying `mⁿ` in `F(φ)`.
fn periodic_part(n: usize) -> RationalTrigPoly {
    let mut g = RationalTrigPoly::zero();
    let pre = central(n) / BigRational::from_integer(big(4).pow(n as u32));
    for l in 1..=n {
        let sign = if l % 2 == 1 { -1 } else { 1 };
        let c = BigRational::from_integer(binomial(big(2 * n as i64), big((n - l) as i64)) * sign)
            / BigRational::from_integer(big(l as i64));
        g.add_term(2 * l as u32, Basis::Sin, &pre * c);
    }
    g
}

/// Reciprocal of a power series with unit constant term.
fn reciprocal(a: &[BigRational]) -> Vec<BigRational> {
    let mut inv = vec![BigRational::one() / &a[0]];
    for j in 1..a.len() {
        let mut s = BigRational::zero();
        for i in 1..=j {
            s += &a[i] * &inv[j - i];
        }
        inv.push(-s / &a[0]);
    }
    inv
}

/// The coefficients `φ_1..φ_N` of `am(2Kθ/π; κ) = θ + Σ φ_j κ^{2j}`, together
/// with the table of truncated powers of `Δ = Σ φ_j κ^{2j}`.
#[derive(Clone, Debug)]
pub struct ExpansionSeries {
    order: usize,
    phi: Vec<RationalTrigPoly>,
    /// `powers[r][s]` is the coefficient of `κ^{2s}` in `Δ^r`.
    powers: Vec<Vec<RationalTrigPoly>>,
}

impl ExpansionSeries {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ_j` for `1 ≤ j ≤ N`.
    pub fn phi(&self, j: usize) -> &RationalTrigPoly {
        &self.phi[j]
    }

    /// Coefficient of `κ^{2s}` in `Δ^r`.
    pub fn power(&self, r: usize, s: usize) -> &RationalTrigPoly {
        &self.powers[r][s]
    }

    /// `θ + Σ_j φ_j(θ) m^j` in floating point.
    pub fn eval<T: crate::Real>(&self, theta: T, m: T) -> T {
        let mut acc = T::zero();
        for j in (1..=self.order).rev() {
            acc = (acc + self.phi[j].eval(theta)) * m;
        }
        theta + acc
    }
}

fn power_entry(phi: &[RationalTrigPoly], powers: &[Vec<RationalTrigPoly>], r: usize, s: usize) -> RationalTrigPoly {
    // [Δ^r]_s = Σ_i Δ_i · [Δ^{r−1}]_{s−i}
    let mut acc = RationalTrigPoly::zero();
    for i in 1..=s + 1 - r {
        if !powers[r - 1][s - i].is_zero() {
            acc.add_assign(&phi[i].mul(&powers[r - 1][s - i]));
        }
    }
    acc
}

/// Exact `φ_1..φ_N` for `1 ≤ N ≤ 12`.
pub fn expand_action_angle(n: usize) -> Result<ExpansionSeries> {
    if n == 0 || n > MAX_ORDER {
        return domain(format!("expansion order must lie in 1..={MAX_ORDER}, got {n}"));
    }
    let inv_a = reciprocal(&linear_part(n));
    let g: Vec<RationalTrigPoly> = (0..=n).map(|k| if k == 0 { RationalTrigPoly::zero() } else { periodic_part(k) }).collect();
    // g_derivs[k][r] = G_k^{(r)} / r!
    let g_derivs: Vec<Vec<RationalTrigPoly>> = g
        .iter()
        .map(|gk| {
            let mut out = vec![gk.clone()];
            for r in 1..n {
                let d = out[r - 1].derivative();
                out.push(d.scale(&(BigRational::one() / BigRational::from_integer(big(r as i64)))));
            }
            out
        })
        .collect();

    let mut phi = vec![RationalTrigPoly::zero(); n + 1];
    let mut powers = vec![vec![RationalTrigPoly::zero(); n + 1]; n + 1];
    powers[0][0] = RationalTrigPoly::constant(BigRational::one());
    let mut e = vec![RationalTrigPoly::zero(); n + 1];

    for j in 1..=n {
        // complete the power table in column s = j − 1
        let s = j - 1;
        for r in 1..=s {
            powers[r][s] = power_entry(&phi, &powers, r, s);
        }
        // E_j = Σ_k Σ_r G_k^{(r)}/r! · [Δ^r]_{j−k}
        let mut ej = RationalTrigPoly::zero();
        for k in 1..=j {
            let s = j - k;
            for r in 0..=s {
                if !powers[r][s].is_zero() {
                    ej.add_assign(&g_derivs[k][r].mul(&powers[r][s]));
                }
            }
        }
        e[j] = ej;
        let mut dj = RationalTrigPoly::zero();
        for i in 0..j {
            dj.add_scaled(&e[j - i], &-inv_a[i].clone());
        }
        phi[j] = dj;
    }
    for r in 1..=n {
        powers[r][n] = power_entry(&phi, &powers, r, n);
    }
    Ok(ExpansionSeries { order: n, phi, powers })
}

/// `P_1..P_N` for an exact trigonometric `μ`: the coefficient of `κ^{2j}` in
/// `μ(θ + Δ) = Σ_r μ^{(r)}(θ) Δ^r / r!`. Index 0 of the result holds `μ`.
pub fn compose_mu_expansion(mu: &RationalTrigPoly, n: usize) -> Result<Vec<RationalTrigPoly>> {
    let ex = expand_action_angle(n)?;
    Ok(compose_with(&ex, mu))
}

/// As [`compose_mu_expansion`] with a precomputed expansion.
pub fn compose_with(ex: &ExpansionSeries, mu: &RationalTrigPoly) -> Vec<RationalTrigPoly> {
    let n = ex.order();
    let mut derivs = vec![mu.clone()];
    for r in 1..=n {
        derivs.push(derivs[r - 1].derivative());
    }
    let mut out = vec![mu.clone()];
    for j in 1..=n {
        let mut pj = RationalTrigPoly::zero();
        for r in 1..=j {
            let term = derivs[r].mul(ex.power(r, j));
            pj.add_scaled(&term, &(BigRational::one() / factorial(r)));
        }
        out.push(pj);
    }
    out
}

/// Exact polynomial in the mode index `k`, coefficients by ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiPolynomial {
    pub j: usize,
    pub l: i64,
    pub poly: Vec<BigRational>,
}

impl XiPolynomial {
    pub fn eval(&self, k: i64) -> BigRational {
        let kk = BigRational::from_integer(big(k));
        self.poly.iter().rev().fold(BigRational::zero(), |acc, c| acc * &kk + c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.iter().rposition(|c| !c.is_zero())
    }
}

/// Trigonometric polynomial in `(k + h)θ` with polynomial-in-`k` coefficients.
type ModePoly = std::collections::BTreeMap<(i64, Basis), Vec<BigRational>>;

fn add_poly(target: &mut Vec<BigRational>, deg: usize, c: BigRational) {
    if target.len() <= deg {
        target.resize(deg + 1, BigRational::zero());
    }
    target[deg] += c;
}

/// All `ξ_{j,l}(k)` for `1 ≤ j ≤ N`, `|l| ≤ j`, from a formal single mode
/// `μ = cos kφ`: `ξ_{j,l}` is the coefficient of `cos((k + 2l)θ)` in `P_j`.
///
/// Each derivative `μ^{(r)} = k^r·(cos, −sin, −cos, sin)[r mod 4](kθ)` raises
/// the degree in `k`, so the coefficients are polynomials of degree `≤ j`.
pub fn xi_polynomials(n: usize) -> Result<Vec<XiPolynomial>> {
    let ex = expand_action_angle(n)?;
    Ok(xi_from(&ex))
}

/// As [`xi_polynomials`] with a precomputed expansion.
pub fn xi_from(ex: &ExpansionSeries) -> Vec<XiPolynomial> {
    let n = ex.order();
    let half = rat(1, 2);
    let mut out = Vec::new();
    for j in 1..=n {
        let mut acc: ModePoly = ModePoly::new();
        for r in 1..=j {
            let (basis, sign) = match r % 4 {
                0 => (Basis::Cos, 1),
                1 => (Basis::Sin, -1),
                2 => (Basis::Cos, -1),
                _ => (Basis::Sin, 1),
            };
            let pre = BigRational::from_integer(big(sign)) / factorial(r);
            for (h, b, c) in ex.power(r, j).terms() {
                let c = c * &pre * &half;
                let h = h as i64;
                // basis(kθ) · b(hθ), reduced in the shifted harmonics k ± h
                let pieces: [(i64, Basis, i64); 2] = match (basis, b) {
                    (Basis::Cos, Basis::Cos) => [(h, Basis::Cos, 1), (-h, Basis::Cos, 1)],
                    (Basis::Sin, Basis::Sin) => [(-h, Basis::Cos, 1), (h, Basis::Cos, -1)],
                    (Basis::Sin, Basis::Cos) => [(h, Basis::Sin, 1), (-h, Basis::Sin, 1)],
                    (Basis::Cos, Basis::Sin) => [(h, Basis::Sin, 1), (-h, Basis::Sin, -1)],
                };
                for (off, bb, s) in pieces {
                    let entry = acc.entry((off, bb)).or_default();
                    add_poly(entry, r, &c * BigRational::from_integer(big(s)));
                }
            }
        }
        for l in -(j as i64)..=(j as i64) {
            let mut poly = acc.get(&(2 * l, Basis::Cos)).cloned().unwrap_or_default();
            while poly.last().is_some_and(|c| c.is_zero()) {
                poly.pop();
            }
            out.push(XiPolynomial { j, l, poly });
        }
        debug_assert!(acc
            .iter()
            .all(|((_, b), p)| *b == Basis::Cos || p.iter().all(|c| c.is_zero())));
    }
    out
}

/// Looks up `ξ_{j,l}` in a table produced by [`xi_polynomials`].
pub fn xi_lookup(table: &[XiPolynomial], j: usize, l: i64) -> Option<&XiPolynomial> {
    table.iter().find(|x| x.j == j && x.l == l)
}
