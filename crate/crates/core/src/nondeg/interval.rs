//! Outward-rounded dyadic intervals with a fixed `2^{−PREC}` grid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const PREC: u32 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
}

fn unit() -> BigInt {
    BigInt::one() << PREC
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Interval {
    pub fn from_rational(r: &BigRational) -> Self {
        let n = r.numer() * unit();
        Self { lo: floor_div(&n, r.denom()), hi: ceil_div(&n, r.denom()) }
    }

    /// Encloses `[a, b]` for rationals `a ≤ b`.
    pub fn hull(a: &BigRational, b: &BigRational) -> Self {
        Self { lo: Self::from_rational(a).lo, hi: Self::from_rational(b).hi }
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), unit())
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), unit())
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, unit() * 2)
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, unit() * 2)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prods = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        let u = unit();
        Self { lo: floor_div(min, &u), hi: ceil_div(max, &u) }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::from_rational(&BigRational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reciprocal of an interval not containing zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let u2 = unit() * unit();
        Some(Self { lo: floor_div(&u2, &self.hi), hi: ceil_div(&u2, &self.lo) })
    }
}

/// Alternating series with terms of decreasing magnitude: the partial sum
/// is within the first omitted term.
fn alternating(terms: impl Iterator<Item = BigRational>, tol: &BigRational) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut prev: Option<BigRational> = None;
    for t in terms {
        if let Some(p) = &prev {
            if t.abs() <= *tol && t.abs() <= p.abs() {
                return (sum, t.abs());
            }
        }
        sum += &t;
        prev = Some(t);
    }
    unreachable!("alternating series iterator is infinite")
}

fn tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << (PREC + 8))
}

fn arctan_inv(x: i64, tol: &BigRational) -> (BigRational, BigRational) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let terms = (0u64..).scan(x.clone(), move |pow, n| {
        let t = BigRational::new(if n % 2 == 0 { BigInt::one() } else { -BigInt::one() }, &*pow * BigInt::from(2 * n + 1));
        *pow *= &x2;
        Some(t)
    });
    alternating(terms, tol)
}

/// `π` by Machin's formula `16 arctan(1/5) − 4 arctan(1/239)`.
pub fn pi() -> Interval {
    let tol = tolerance();
    let (a, ea) = arctan_inv(5, &tol);
    let (b, eb) = arctan_inv(239, &tol);
    let mid = a * BigRational::from_integer(16.into()) - b * BigRational::from_integer(4.into());
    let err = ea * BigRational::from_integer(16.into()) + eb * BigRational::from_integer(4.into());
    Interval::hull(&(&mid - &err), &(&mid + &err))
}

fn cos_point(x: &BigRational) -> (BigRational, BigRational) {
    let x2 = x * x;
    let terms = (0u64..).scan(BigRational::one(), move |t, n| {
        let out = t.clone();
        *t = -&*t * &x2 / BigRational::from_integer(((2 * n + 1) * (2 * n + 2)).into());
        Some(out)
    });
    alternating(terms, &tolerance())
}

/// `cos(pπ/q)` for `0 ≤ p/q ≤ 1/2`, where cosine is decreasing.
pub fn cos_pi_fraction(p: u64, q: u64) -> Interval {
    assert!(2 * p <= q && q > 0, "argument outside [0, pi/2]");
    let x = pi().mul(&Interval::from_rational(&BigRational::new(p.into(), q.into())));
    let (chi, ehi) = cos_point(&x.lo());
    let (clo, elo) = cos_point(&x.hi());
    Interval::hull(&(clo - elo), &(chi + ehi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational_to;

    #[test]
    fn pi_enclosure() {
        let p = pi();
        assert!(rational_to::<f64>(&p.lo()) <= std::f64::consts::PI);
        assert!(rational_to::<f64>(&p.hi()) >= std::f64::consts::PI);
        assert!(rational_to::<f64>(&(p.hi() - p.lo())) < 1e-70);
    }

    #[test]
    fn cos_enclosure() {
        let c = cos_pi_fraction(1, 3);
        let half = BigRational::new(1.into(), 2.into());
        assert!(c.lo() <= half && c.hi() >= half);
        let z = cos_pi_fraction(1, 2);
        assert!(z.contains_zero());
        assert!(z.recip().is_none());
    }
}
