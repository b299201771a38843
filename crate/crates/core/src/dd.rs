#![allow(clippy::excessive_precision)]
//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`
//! carrying about 31 significant decimal digits.
//!
//! Transcendental functions reduce to `exp`, `sin`/`cos` (Taylor series on a
//! reduced argument) and Newton refinement of the `f64` result for the
//! inverse functions.

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::num::FpCategory;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};
use std::str::FromStr;

/// Extended-precision real with roughly 106 bits of mantissa.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

// Double-double split constants; the high parts equal the std values.
const PI_HI: f64 = std::f64::consts::PI;
const PI_LO: f64 = 1.224646799147353207e-16;
const HALF_PI_1: f64 = std::f64::consts::FRAC_PI_2;
const HALF_PI_2: f64 = 6.123233995736766036e-17;
const HALF_PI_3: f64 = -1.497384904859169778e-33;
const E_HI: f64 = std::f64::consts::E;
const E_LO: f64 = 1.445646891729250158e-16;
const LN2_HI: f64 = std::f64::consts::LN_2;
const LN2_LO: f64 = 2.319046813846299558e-17;
const LN10_HI: f64 = std::f64::consts::LN_10;
const LN10_LO: f64 = -2.170756223382249351e-16;

impl DoubleDouble {
    /// Builds the normalized value of `hi + lo`.
    pub fn new(hi: f64, lo: f64) -> Self {
        if !hi.is_finite() {
            return Self { hi, lo: 0.0 };
        }
        let (h, l) = quick_two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    /// Exact embedding of an `f64`.
    pub const fn from_f64_exact(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Leading component.
    pub fn hi(self) -> f64 {
        self.hi
    }

    /// Trailing component.
    pub fn lo(self) -> f64 {
        self.lo
    }

    fn scale_pow2(self, k: i32) -> Self {
        // split the exponent so neither factor overflows
        let mut r = self;
        let mut k = k;
        while k != 0 {
            let step = k.clamp(-1000, 1000);
            let f = 2f64.powi(step);
            r = Self { hi: r.hi * f, lo: r.lo * f };
            k -= step;
        }
        r
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        Self::new(p1, p2)
    }

    fn sqr(self) -> Self {
        self * self
    }

    /// `exp(r) - 1` for small `|r|` by Taylor series after halving.
    fn expm1_small(r: Self) -> Self {
        const HALVINGS: i32 = 10;
        let s = r.scale_pow2(-HALVINGS);
        let mut term = s;
        let mut sum = s;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = term * s / Self::from_f64_exact(n);
            sum += term;
            if term.hi.abs() < 1e-36 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        let two = Self::from_f64_exact(2.0);
        for _ in 0..HALVINGS {
            sum = sum * (sum + two);
        }
        sum
    }

    fn ln2() -> Self {
        Self { hi: LN2_HI, lo: LN2_LO }
    }

    fn reduce_half_pi(self) -> (Self, i64) {
        let k = (self.hi / HALF_PI_1).round();
        let kd = Self::from_f64_exact(k);
        let r = self - kd * Self { hi: HALF_PI_1, lo: HALF_PI_2 } - kd.mul_f64(HALF_PI_3);
        (r, k as i64)
    }

    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        let r2 = r.sqr();
        let mut term = r;
        let mut s = r;
        let mut n = 1.0;
        loop {
            term = -term * r2 / Self::from_f64_exact((n + 1.0) * (n + 2.0));
            n += 2.0;
            s += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        let mut term = Self::one();
        let mut c = Self::one();
        let mut n = 0.0;
        loop {
            term = -term * r2 / Self::from_f64_exact((n + 1.0) * (n + 2.0));
            n += 2.0;
            c += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        (s, c)
    }

    fn digits(self, sig: usize) -> (bool, Vec<u8>, i32) {
        let neg = self.hi < 0.0;
        let mut v = self.abs();
        let mut e = v.hi.log10().floor() as i32;
        v /= Self::from_f64_exact(10.0).powi(e);
        while v.hi >= 10.0 {
            v /= Self::from_f64_exact(10.0);
            e += 1;
        }
        while v.hi < 1.0 {
            v *= Self::from_f64_exact(10.0);
            e -= 1;
        }
        let mut out = Vec::with_capacity(sig + 1);
        for _ in 0..=sig {
            let d = v.hi.floor().clamp(0.0, 9.0);
            out.push(d as u8);
            v = (v - Self::from_f64_exact(d)) * Self::from_f64_exact(10.0);
        }
        // round half up on the guard digit
        let guard = out.pop().unwrap_or(0);
        if guard >= 5 {
            let mut i = out.len();
            loop {
                if i == 0 {
                    out.insert(0, 1);
                    out.pop();
                    e += 1;
                    break;
                }
                i -= 1;
                if out[i] == 9 {
                    out[i] = 0;
                } else {
                    out[i] += 1;
                    break;
                }
            }
        }
        (neg, out, e)
    }

    /// Decimal rendering with `sig` significant digits in scientific form.
    pub fn to_sci_string(self, sig: usize) -> String {
        if self.hi.is_nan() {
            return "NaN".into();
        }
        if self.hi.is_infinite() {
            return if self.hi > 0.0 { "inf".into() } else { "-inf".into() };
        }
        let sig = sig.max(1);
        if self.hi == 0.0 {
            return format!("{:.*}e0", sig - 1, 0.0);
        }
        let (neg, d, e) = self.digits(sig);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push((b'0' + d[0]) as char);
        if d.len() > 1 {
            s.push('.');
            for &x in &d[1..] {
                s.push((b'0' + x) as char);
            }
        }
        s.push('e');
        s.push_str(&e.to_string());
        s
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64_exact(x)
    }
}

impl From<i32> for DoubleDouble {
    fn from(x: i32) -> Self {
        Self::from_f64_exact(x as f64)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, y: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, y.hi);
        if !s1.is_finite() {
            return Self { hi: s1, lo: 0.0 };
        }
        let (t1, t2) = two_sum(self.lo, y.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        Self::new(s1, s2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, y: Self) -> Self {
        self + (-y)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, y: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, y.hi);
        if !p1.is_finite() {
            return Self { hi: p1, lo: 0.0 };
        }
        let p2 = p2 + (self.hi * y.lo + self.lo * y.hi);
        Self::new(p1, p2)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, y: Self) -> Self {
        let q1 = self.hi / y.hi;
        if !q1.is_finite() || y.hi.is_infinite() {
            return Self { hi: q1, lo: 0.0 };
        }
        let r = self - y.mul_f64(q1);
        let q2 = r.hi / y.hi;
        let r = r - y.mul_f64(q2);
        let q3 = r.hi / y.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from_f64_exact(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, y: Self) -> Self {
        self - (self / y).trunc() * y
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DoubleDouble {
            fn $m(&mut self, y: Self) {
                *self = *self $op y;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /, RemAssign rem_assign %);

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::from_f64_exact(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::from_f64_exact(1.0)
    }
}

/// Error returned when parsing a decimal string fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDoubleDoubleError;

impl fmt::Display for ParseDoubleDoubleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid decimal literal")
    }
}

impl std::error::Error for ParseDoubleDoubleError {}

impl FromStr for DoubleDouble {
    type Err = ParseDoubleDoubleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "NaN" | "nan" => return Ok(Self::nan()),
            "inf" | "+inf" => return Ok(Self::infinity()),
            "-inf" => return Ok(Self::neg_infinity()),
            _ => {}
        }
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = body[i + 1..].parse().map_err(|_| ParseDoubleDoubleError)?;
                (&body[..i], e)
            }
            None => (body, 0),
        };
        let mut v = Self::zero();
        let mut scale = 0i32;
        let mut seen_dot = false;
        let mut any = false;
        let ten = Self::from_f64_exact(10.0);
        for ch in mant.chars() {
            match ch {
                '0'..='9' => {
                    any = true;
                    v = v * ten + Self::from_f64_exact((ch as u8 - b'0') as f64);
                    if seen_dot {
                        scale -= 1;
                    }
                }
                '.' if !seen_dot => seen_dot = true,
                _ => return Err(ParseDoubleDoubleError),
            }
        }
        if !any {
            return Err(ParseDoubleDoubleError);
        }
        let e = exp + scale;
        let p = ten.powi(e.abs());
        v = if e >= 0 { v * p } else { v / p };
        Ok(if neg { -v } else { v })
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = ParseDoubleDoubleError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(ParseDoubleDoubleError);
        }
        s.parse()
    }
}

impl ToPrimitive for DoubleDouble {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        if !t.hi.is_finite() || t.hi.abs() > 9.2e18 {
            return None;
        }
        Some(t.hi as i64 + t.lo as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        let t = self.trunc();
        if !t.hi.is_finite() || t.hi < 0.0 || t.hi > 1.8e19 {
            return None;
        }
        Some((t.hi as i128 + t.lo as i128) as u64)
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl FromPrimitive for DoubleDouble {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::new(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(Self::new(hi, lo))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Self::from_f64_exact(n))
    }
}

impl NumCast for DoubleDouble {
    fn from<T: ToPrimitive>(n: T) -> Option<Self> {
        if let Some(i) = n.to_i64() {
            if let Some(f) = n.to_f64() {
                if f.fract() == 0.0 && f.abs() < 9.0e18 {
                    return Self::from_i64(i);
                }
                return Some(Self::from_f64_exact(f));
            }
        }
        n.to_f64().map(Self::from_f64_exact)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().map(|p| p + 1).unwrap_or(32);
        f.write_str(&self.to_sci_string(sig))
    }
}

impl FloatConst for DoubleDouble {
    fn E() -> Self {
        Self { hi: E_HI, lo: E_LO }
    }
    fn FRAC_1_PI() -> Self {
        Self::one() / Self::PI()
    }
    fn FRAC_1_SQRT_2() -> Self {
        Self::one() / Self::SQRT_2()
    }
    fn FRAC_2_PI() -> Self {
        Self::from_f64_exact(2.0) / Self::PI()
    }
    fn FRAC_2_SQRT_PI() -> Self {
        Self::from_f64_exact(2.0) / Self::PI().sqrt()
    }
    fn FRAC_PI_2() -> Self {
        Self { hi: PI_HI / 2.0, lo: PI_LO / 2.0 }
    }
    fn FRAC_PI_3() -> Self {
        Self::PI() / Self::from_f64_exact(3.0)
    }
    fn FRAC_PI_4() -> Self {
        Self { hi: PI_HI / 4.0, lo: PI_LO / 4.0 }
    }
    fn FRAC_PI_6() -> Self {
        Self::PI() / Self::from_f64_exact(6.0)
    }
    fn FRAC_PI_8() -> Self {
        Self { hi: PI_HI / 8.0, lo: PI_LO / 8.0 }
    }
    fn LN_10() -> Self {
        Self { hi: LN10_HI, lo: LN10_LO }
    }
    fn LN_2() -> Self {
        Self::ln2()
    }
    fn LOG10_E() -> Self {
        Self::one() / Self::LN_10()
    }
    fn LOG2_E() -> Self {
        Self::one() / Self::ln2()
    }
    fn PI() -> Self {
        Self { hi: PI_HI, lo: PI_LO }
    }
    fn SQRT_2() -> Self {
        Self::from_f64_exact(2.0).sqrt()
    }
}

impl Float for DoubleDouble {
    fn nan() -> Self {
        Self::from_f64_exact(f64::NAN)
    }
    fn infinity() -> Self {
        Self::from_f64_exact(f64::INFINITY)
    }
    fn neg_infinity() -> Self {
        Self::from_f64_exact(f64::NEG_INFINITY)
    }
    fn neg_zero() -> Self {
        Self::from_f64_exact(-0.0)
    }
    fn min_value() -> Self {
        Self::from_f64_exact(f64::MIN)
    }
    fn min_positive_value() -> Self {
        Self::from_f64_exact(f64::MIN_POSITIVE)
    }
    fn epsilon() -> Self {
        Self::from_f64_exact(2f64.powi(-104))
    }
    fn max_value() -> Self {
        Self::from_f64_exact(f64::MAX)
    }
    fn is_nan(self) -> bool {
        self.hi.is_nan()
    }
    fn is_infinite(self) -> bool {
        self.hi.is_infinite()
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite()
    }
    fn is_normal(self) -> bool {
        self.hi.is_normal()
    }
    fn classify(self) -> FpCategory {
        self.hi.classify()
    }
    fn floor(self) -> Self {
        let f = self.hi.floor();
        if f == self.hi {
            Self::new(f, self.lo.floor())
        } else {
            Self::from_f64_exact(f)
        }
    }
    fn ceil(self) -> Self {
        let c = self.hi.ceil();
        if c == self.hi {
            Self::new(c, self.lo.ceil())
        } else {
            Self::from_f64_exact(c)
        }
    }
    fn round(self) -> Self {
        let half = Self::from_f64_exact(0.5);
        if self.hi >= 0.0 {
            (self + half).floor()
        } else {
            -((-self) + half).floor()
        }
    }
    fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            self.ceil()
        }
    }
    fn fract(self) -> Self {
        self - self.trunc()
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.hi.is_sign_negative()) {
            -self
        } else {
            self
        }
    }
    fn signum(self) -> Self {
        Self::from_f64_exact(self.hi.signum())
    }
    fn is_sign_positive(self) -> bool {
        self.hi.is_sign_positive()
    }
    fn is_sign_negative(self) -> bool {
        self.hi.is_sign_negative()
    }
    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }
    fn powf(self, n: Self) -> Self {
        if n.is_zero() {
            return Self::one();
        }
        if self.is_zero() {
            return if n.hi > 0.0 { Self::zero() } else { Self::infinity() };
        }
        if self.hi < 0.0 {
            if n.fract().is_zero() && n.hi.abs() < 2.0e9 {
                return self.powi(n.hi as i32);
            }
            return Self::nan();
        }
        (n * self.ln()).exp()
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::zero() } else { Self::nan() };
        }
        if self.hi.is_infinite() {
            return self;
        }
        let a = self.hi.sqrt();
        let ad = Self::from_f64_exact(a);
        let (p, e) = two_prod(a, a);
        let r = (self - Self::new(p, e)).hi / (2.0 * a);
        ad + Self::from_f64_exact(r)
    }
    fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Self::infinity();
        }
        if self.hi < -745.0 {
            return Self::zero();
        }
        let k = (self.hi / LN2_HI).round();
        let r = self - Self::ln2().mul_f64(k);
        (Self::expm1_small(r) + Self::one()).scale_pow2(k as i32)
    }
    fn exp2(self) -> Self {
        (self * Self::ln2()).exp()
    }
    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Self::neg_infinity() } else { Self::nan() };
        }
        if self.hi.is_infinite() {
            return self;
        }
        let mut y = Self::from_f64_exact(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::one();
        }
        y
    }
    fn log(self, base: Self) -> Self {
        self.ln() / base.ln()
    }
    fn log2(self) -> Self {
        self.ln() / Self::ln2()
    }
    fn log10(self) -> Self {
        self.ln() / Self::LN_10()
    }
    fn max(self, other: Self) -> Self {
        if self.is_nan() || other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if self.is_nan() || other < self {
            other
        } else {
            self
        }
    }
    fn abs_sub(self, other: Self) -> Self {
        if self > other {
            self - other
        } else {
            Self::zero()
        }
    }
    fn cbrt(self) -> Self {
        if self.is_zero() || !self.is_finite() {
            return self;
        }
        let mut y = Self::from_f64_exact(self.hi.cbrt());
        let three = Self::from_f64_exact(3.0);
        for _ in 0..2 {
            y = y - (y * y * y - self) / (three * y * y);
        }
        y
    }
    fn hypot(self, other: Self) -> Self {
        (self * self + other * other).sqrt()
    }
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
    fn tan(self) -> Self {
        let (s, c) = self.sin_cos();
        s / c
    }
    fn asin(self) -> Self {
        if self.abs() > Self::one() {
            return Self::nan();
        }
        let one = Self::one();
        self.atan2(((one - self) * (one + self)).sqrt())
    }
    fn acos(self) -> Self {
        if self.abs() > Self::one() {
            return Self::nan();
        }
        let one = Self::one();
        ((one - self) * (one + self)).sqrt().atan2(self)
    }
    fn atan(self) -> Self {
        self.atan2(Self::one())
    }
    fn atan2(self, other: Self) -> Self {
        let (y, x) = (self, other);
        if y.is_nan() || x.is_nan() {
            return Self::nan();
        }
        if y.is_infinite() || x.is_infinite() || (y.is_zero() && x.is_zero()) {
            return Self::from_f64_exact(y.hi.atan2(x.hi));
        }
        if y.is_zero() {
            return if x.hi > 0.0 { Self::zero() } else { Self::PI() * Self::from_f64_exact(y.hi.signum()) };
        }
        let mut t = Self::from_f64_exact(y.hi.atan2(x.hi));
        for _ in 0..2 {
            let (s, c) = t.sin_cos();
            let f = x * s - y * c;
            let fp = x * c + y * s;
            t -= f / fp;
        }
        t
    }
    fn sin_cos(self) -> (Self, Self) {
        if !self.is_finite() {
            return (Self::nan(), Self::nan());
        }
        if self.is_zero() {
            return (self, Self::one());
        }
        let (r, k) = self.reduce_half_pi();
        let (s, c) = Self::sin_cos_reduced(r);
        match k.rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
    fn exp_m1(self) -> Self {
        if self.hi.abs() < 0.34 {
            Self::expm1_small(self)
        } else {
            self.exp() - Self::one()
        }
    }
    fn ln_1p(self) -> Self {
        if self.hi <= -1.0 {
            return if self.hi == -1.0 { Self::neg_infinity() } else { Self::nan() };
        }
        if self.hi.abs() > 0.25 {
            return (Self::one() + self).ln();
        }
        let mut y = Self::from_f64_exact(self.hi.ln_1p());
        for _ in 0..2 {
            let em = y.exp_m1();
            y -= (em - self) / (em + Self::one());
        }
        y
    }
    fn sinh(self) -> Self {
        if self.hi.abs() < 0.34 {
            let em = self.exp_m1();
            let half = Self::from_f64_exact(0.5);
            return half * (em + em / (em + Self::one()));
        }
        let e = self.exp();
        (e - e.recip()) * Self::from_f64_exact(0.5)
    }
    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()) * Self::from_f64_exact(0.5)
    }
    fn tanh(self) -> Self {
        if self.hi.abs() > 40.0 {
            return Self::from_f64_exact(self.hi.signum());
        }
        self.sinh() / self.cosh()
    }
    fn asinh(self) -> Self {
        let a = self.abs();
        let one = Self::one();
        let r = (a + a * a / (one + (a * a + one).sqrt())).ln_1p();
        if self.hi < 0.0 {
            -r
        } else {
            r
        }
    }
    fn acosh(self) -> Self {
        if self < Self::one() {
            return Self::nan();
        }
        (self + (self * self - Self::one()).sqrt()).ln()
    }
    fn atanh(self) -> Self {
        let one = Self::one();
        Self::from_f64_exact(0.5) * (Self::from_f64_exact(2.0) * self / (one - self)).ln_1p()
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        self.hi.integer_decode()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(s: &str) -> DoubleDouble {
        s.parse().unwrap()
    }

    fn close(a: DoubleDouble, b: DoubleDouble, tol: f64) -> bool {
        ((a - b).abs() / b.abs().max(DoubleDouble::one())).hi < tol
    }

    // reference digits frozen from a 40-digit arbitrary-precision evaluation
    #[test]
    fn constants_match_reference_digits() {
        assert!(close(DoubleDouble::PI(), dd("3.14159265358979323846264338327950288"), 1e-31));
        assert!(close(DoubleDouble::E(), dd("2.71828182845904523536028747135266250"), 1e-31));
        assert!(close(DoubleDouble::LN_2(), dd("0.693147180559945309417232121458176568"), 1e-31));
        assert!(close(DoubleDouble::LN_10(), dd("2.30258509299404568401799145468436421"), 1e-31));
    }

    #[test]
    fn elementary_functions_reach_extended_precision() {
        let x = dd("0.7");
        assert!(close(x.sin(), dd("0.644217687237691053672614351398720183"), 2e-31));
        assert!(close(x.cos(), dd("0.764842187284488426255859990191864909"), 2e-31));
        assert!(close(x.exp(), dd("2.01375270747047652162454938858306527"), 2e-31));
        assert!(close(x.ln(), dd("-0.356674943938732378912638711241184477"), 2e-31));
        assert!(close(x.atan(), dd("0.610725964389208616543758876490236093"), 2e-31));
        assert!(close(x.asin(), dd("0.775397496610753063740353352714987112"), 2e-31));
        assert!(close(dd("2").sqrt(), dd("1.41421356237309504880168872420969808"), 2e-31));
        assert!(close(dd("100.25").sin(), dd("-0.277282856454851303353672057019435887"), 1e-29));
    }

    #[test]
    fn parse_and_print_round_trip() {
        let x = dd("-1.2345678901234567890123456789012e-7");
        let s = x.to_sci_string(32);
        assert_eq!(s, "-1.2345678901234567890123456789012e-7");
        assert_eq!(dd("1").to_sci_string(3), "1.00e0");
    }

    #[test]
    fn rounding_helpers() {
        let x = dd("2.5");
        assert_eq!(x.floor(), dd("2"));
        assert_eq!(x.ceil(), dd("3"));
        assert_eq!((-x).round(), dd("-3"));
        let big = DoubleDouble::new(1e17, 0.25);
        assert_eq!(big.floor(), DoubleDouble::new(1e17, 0.0));
    }
}
