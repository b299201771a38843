//! Exact trigonometric polynomials with rational coefficients.

use crate::scalar::Real;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Trigonometric basis function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Cos,
    Sin,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Cos => "cos",
            Basis::Sin => "sin",
        }
    }
}

/// `Σ c·cos(nθ) + s·sin(nθ)` over finitely many `n ≥ 0`, kept canonical:
/// no zero coefficients and no `sin 0θ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalTrigPoly {
    terms: BTreeMap<(u32, Basis), BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RationalTrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(0, Basis::Cos, c);
        p
    }

    pub fn single(harm: u32, basis: Basis, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(harm, basis, c);
        p
    }

    /// Adds `c·basis(nθ)` for a signed harmonic, folding `n < 0` by parity.
    pub fn add_signed(&mut self, n: i64, basis: Basis, c: BigRational) {
        let h = n.unsigned_abs() as u32;
        let c = if n < 0 && basis == Basis::Sin { -c } else { c };
        self.add_term(h, basis, c);
    }

    pub fn add_term(&mut self, harm: u32, basis: Basis, c: BigRational) {
        if c.is_zero() || (harm == 0 && basis == Basis::Sin) {
            return;
        }
        let key = (harm, basis);
        let v = self.terms.entry(key).or_insert_with(BigRational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, harm: u32, basis: Basis) -> BigRational {
        self.terms.get(&(harm, basis)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in canonical order (ascending harmonic, cosine first).
    pub fn terms(&self) -> impl Iterator<Item = (u32, Basis, &BigRational)> {
        self.terms.iter().map(|(&(h, b), c)| (h, b, c))
    }

    pub fn max_harmonic(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (&(h, b), c) in &other.terms {
            self.add_term(h, b, c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &BigRational) {
        if s.is_zero() {
            return;
        }
        for (&(h, b), c) in &other.terms {
            self.add_term(h, b, c * s);
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    /// Product reduced with the product-to-sum identities.
    pub fn mul(&self, other: &Self) -> Self {
        let half = rat(1, 2);
        let mut out = Self::zero();
        for (&(h1, b1), c1) in &self.terms {
            for (&(h2, b2), c2) in &other.terms {
                let c = c1 * c2 * &half;
                let (s, d) = (h1 as i64 + h2 as i64, h1 as i64 - h2 as i64);
                match (b1, b2) {
                    (Basis::Cos, Basis::Cos) => {
                        out.add_signed(s, Basis::Cos, c.clone());
                        out.add_signed(d, Basis::Cos, c);
                    }
                    (Basis::Sin, Basis::Sin) => {
                        out.add_signed(d, Basis::Cos, c.clone());
                        out.add_signed(s, Basis::Cos, -c);
                    }
                    (Basis::Sin, Basis::Cos) => {
                        out.add_signed(s, Basis::Sin, c.clone());
                        out.add_signed(d, Basis::Sin, c);
                    }
                    (Basis::Cos, Basis::Sin) => {
                        out.add_signed(s, Basis::Sin, c.clone());
                        out.add_signed(d, Basis::Sin, -c);
                    }
                }
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&(h, b), c) in &self.terms {
            let f = BigRational::from_integer(BigInt::from(h));
            match b {
                Basis::Cos => out.add_term(h, Basis::Sin, -(c * f)),
                Basis::Sin => out.add_term(h, Basis::Cos, c * f),
            }
        }
        out
    }

    /// Image under `θ ↦ −θ`.
    pub fn reflect(&self) -> Self {
        let mut out = Self::zero();
        for (&(h, b), c) in &self.terms {
            let c = if b == Basis::Sin { -c.clone() } else { c.clone() };
            out.add_term(h, b, c);
        }
        out
    }

    pub fn eval<T: Real>(&self, theta: T) -> T {
        let mut acc = T::zero();
        for (&(h, b), c) in &self.terms {
            let x = T::lit(h as f64) * theta;
            let f = match b {
                Basis::Cos => x.cos(),
                Basis::Sin => x.sin(),
            };
            acc = acc + rational_to::<T>(c) * f;
        }
        acc
    }
}

/// Nearest representable value of an exact rational in `T`.
///
/// Numerator and denominator are accumulated in base `2³²` before the single
/// division, so precision is limited by `T` rather than by `f64`.
pub fn rational_to<T: Real>(r: &BigRational) -> T {
    fn big<T: Real>(n: &BigInt) -> T {
        let (sign, digits) = n.to_u32_digits();
        let base = T::lit(4294967296.0);
        let mut acc = T::zero();
        for d in digits.iter().rev() {
            acc = acc * base + T::lit(*d as f64);
        }
        if sign == num_bigint::Sign::Minus {
            -acc
        } else {
            acc
        }
    }
    big::<T>(r.numer()) / big::<T>(r.denom())
}

/// Renders as `"num/den"`, or `"num"` for integers.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for RationalTrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&(h, b), c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let mag = rational_string(&c.abs());
            if h == 0 {
                write!(f, "{sign}{mag}")?;
            } else {
                write!(f, "{sign}{mag}*{}({h}t)", b.name())?;
            }
            if i + 1 < self.terms.len() {
                write!(f, " ")?;
            }
        }
        Ok(())
    }
}
