use crate::error::{domain, Result};
use crate::series::RationalTrigPoly;
use num_rational::BigRational;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

/// Truncated real Fourier series `mean + Σ_{k=1}^{K} cos_k cos kφ + sin_k sin kφ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    #[serde(with = "crate::json::num")]
    pub mean: f64,
    #[serde(rename = "cos", with = "crate::json::num_vec")]
    pub cos_coeffs: Vec<f64>,
    #[serde(rename = "sin", with = "crate::json::num_vec")]
    pub sin_coeffs: Vec<f64>,
}

impl FourierSeries {
    pub fn zero(k_max: usize) -> Self {
        Self { mean: 0.0, cos_coeffs: vec![0.0; k_max], sin_coeffs: vec![0.0; k_max] }
    }

    pub fn new(mean: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        if cos_coeffs.len() != sin_coeffs.len() {
            return domain("cosine and sine coefficient lists must have equal length");
        }
        if !mean.is_finite() || cos_coeffs.iter().chain(&sin_coeffs).any(|c| !c.is_finite()) {
            return domain("Fourier coefficients must be finite");
        }
        Ok(Self { mean, cos_coeffs, sin_coeffs })
    }

    /// `amp·cos kφ` (or `amp·sin kφ` when `sine`) truncated at `k_max ≥ k`.
    pub fn mode(k: usize, amp: f64, sine: bool, k_max: usize) -> Self {
        let mut s = Self::zero(k_max.max(k));
        if k == 0 {
            s.mean = amp;
        } else if sine {
            s.sin_coeffs[k - 1] = amp;
        } else {
            s.cos_coeffs[k - 1] = amp;
        }
        s
    }

    pub fn k_max(&self) -> usize {
        self.cos_coeffs.len()
    }

    /// Coefficients `(a_k, b_k)` for `k ≥ 1`; zero beyond truncation.
    pub fn coeff(&self, k: usize) -> (f64, f64) {
        if k == 0 {
            (self.mean, 0.0)
        } else if k <= self.k_max() {
            (self.cos_coeffs[k - 1], self.sin_coeffs[k - 1])
        } else {
            (0.0, 0.0)
        }
    }

    pub fn eval(&self, phi: f64) -> f64 {
        self.eval_derivative(phi, 0)
    }

    /// `r`-th derivative at `φ`.
    pub fn eval_derivative(&self, phi: f64, r: u32) -> f64 {
        let mut acc = if r == 0 { self.mean } else { 0.0 };
        for k in 1..=self.k_max() {
            let (a, b) = (self.cos_coeffs[k - 1], self.sin_coeffs[k - 1]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let kf = k as f64;
            let (s, c) = (kf * phi).sin_cos();
            let f = kf.powi(r as i32);
            // d^r/dφ^r of (a cos + b sin) cycles through (a,b) → (b,−a) → (−a,−b) → (−b,a)
            let (p, q) = match r % 4 {
                0 => (a, b),
                1 => (b, -a),
                2 => (-a, -b),
                _ => (-b, a),
            };
            acc += f * (p * c + q * s);
        }
        acc
    }

    /// Values, first and second derivative at once.
    ///
    /// `cos kφ`, `sin kφ` come from the angle-addition recurrence, which keeps
    /// the error near `k·ε` for the truncations used here.
    pub fn eval_with_derivatives(&self, phi: f64) -> [f64; 3] {
        let mut out = [self.mean, 0.0, 0.0];
        let (s1, c1) = phi.sin_cos();
        let (mut s, mut c) = (s1, c1);
        for k in 1..=self.k_max() {
            let (a, b) = (self.cos_coeffs[k - 1], self.sin_coeffs[k - 1]);
            let kf = k as f64;
            let v = a * c + b * s;
            out[0] += v;
            out[1] += kf * (b * c - a * s);
            out[2] -= kf * kf * v;
            let cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
        out
    }

    /// Value only, by the same recurrence.
    pub fn eval_fast(&self, phi: f64) -> f64 {
        let (s1, c1) = phi.sin_cos();
        let (mut s, mut c) = (s1, c1);
        let mut acc = self.mean;
        for k in 0..self.k_max() {
            acc += self.cos_coeffs[k] * c + self.sin_coeffs[k] * s;
            let cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
        }
        acc
    }

    /// Series interpolating equispaced samples `f(2πj/n)`, truncated at `k_max < n/2`.
    pub fn from_samples(samples: &[f64], k_max: usize) -> Self {
        let n = samples.len();
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let nf = n as f64;
        let mut s = Self::zero(k_max);
        s.mean = buf[0].re / nf;
        for k in 1..=k_max.min((n - 1) / 2) {
            s.cos_coeffs[k - 1] = 2.0 * buf[k].re / nf;
            s.sin_coeffs[k - 1] = -2.0 * buf[k].im / nf;
        }
        s
    }

    /// Projects `f` onto modes `≤ k_max` from `8·k_max` samples.
    pub fn from_fn(f: impl Fn(f64) -> f64, k_max: usize) -> Self {
        let n = 8 * k_max.max(4);
        let samples: Vec<f64> = (0..n).map(|j| f(std::f64::consts::TAU * j as f64 / n as f64)).collect();
        Self::from_samples(&samples, k_max)
    }

    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n).map(|j| self.eval(std::f64::consts::TAU * j as f64 / n as f64)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.k_max().max(other.k_max());
        let mut out = Self::zero(k);
        out.mean = self.mean + other.mean;
        for j in 1..=k {
            let (a1, b1) = self.coeff(j);
            let (a2, b2) = other.coeff(j);
            out.cos_coeffs[j - 1] = a1 + a2;
            out.sin_coeffs[j - 1] = b1 + b2;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mean: self.mean * s,
            cos_coeffs: self.cos_coeffs.iter().map(|c| c * s).collect(),
            sin_coeffs: self.sin_coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Translated argument: `φ ↦ μ(φ + shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = Self::zero(self.k_max());
        out.mean = self.mean;
        for k in 1..=self.k_max() {
            let (a, b) = self.coeff(k);
            let (s, c) = (k as f64 * shift).sin_cos();
            out.cos_coeffs[k - 1] = a * c + b * s;
            out.sin_coeffs[k - 1] = b * c - a * s;
        }
        out
    }

    /// `[mean² + Σ (k^{2n} ∨ 1)(a_k² + b_k²)]^{1/2}`, the spectral `C^n` proxy.
    pub fn weighted_norm(&self, n: u32) -> f64 {
        let mut acc = self.mean * self.mean;
        for k in 1..=self.k_max() {
            let (a, b) = self.coeff(k);
            acc += (k as f64).powi(2 * n as i32).max(1.0) * (a * a + b * b);
        }
        acc.sqrt()
    }

    /// `max_{r ≤ n} sup |μ^{(r)}|` sampled on `8·K` points.
    pub fn cn_norm(&self, n: u32) -> f64 {
        let m = 8 * self.k_max().max(8);
        (0..=n)
            .map(|r| {
                (0..m)
                    .map(|j| self.eval_derivative(std::f64::consts::TAU * j as f64 / m as f64, r).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Exact rational copy (each binary64 coefficient is a dyadic rational).
    pub fn to_rational(&self) -> RationalTrigPoly {
        use crate::series::Basis;
        let r = |x: f64| BigRational::from_float(x).expect("finite coefficient");
        let mut p = RationalTrigPoly::constant(r(self.mean));
        for k in 1..=self.k_max() {
            let (a, b) = self.coeff(k);
            p.add_term(k as u32, Basis::Cos, r(a));
            p.add_term(k as u32, Basis::Sin, r(b));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_recovers_coefficients() {
        let s = FourierSeries::new(0.3, vec![0.1, 0.0, -0.2], vec![0.0, 0.05, 0.0]).unwrap();
        let back = FourierSeries::from_fn(|p| s.eval(p), 6);
        assert!((back.mean - 0.3).abs() < 1e-15);
        for k in 1..=3 {
            let (a, b) = back.coeff(k);
            let (a0, b0) = s.coeff(k);
            assert!((a - a0).abs() < 1e-15 && (b - b0).abs() < 1e-15);
        }
        assert!((s.eval(1.0) - s.eval(1.0 + std::f64::consts::TAU)).abs() < 1e-14);
    }

    #[test]
    fn derivatives_by_finite_differences() {
        let s = FourierSeries::new(0.0, vec![0.1, 0.3], vec![-0.2, 0.05]).unwrap();
        let h = 1e-5;
        let fd = (s.eval(0.4 + h) - s.eval(0.4 - h)) / (2.0 * h);
        assert!((fd - s.eval_derivative(0.4, 1)).abs() < 1e-9);
        let d = s.eval_with_derivatives(0.4);
        assert!((d[2] - s.eval_derivative(0.4, 2)).abs() < 1e-14);
        let sh = s.shifted(0.3);
        assert!((sh.eval(0.1) - s.eval(0.4)).abs() < 1e-15);
    }

    #[test]
    fn json_uses_decimal_strings() {
        let s = FourierSeries::new(0.5, vec![0.25], vec![0.0]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"mean":"5.0000000000000000e-1","cos":["2.5000000000000000e-1"],"sin":["0"]}"#);
        assert_eq!(serde_json::from_str::<FourierSeries>(&j).unwrap(), s);
    }
}
