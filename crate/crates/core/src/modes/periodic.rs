use crate::error::{domain, Result};
use crate::geometry::FourierSeries;
use rustfft::{num_complex::Complex, FftPlanner};
use std::f64::consts::TAU;

/// A `2π`-periodic function tabulated on `n` equispaced points, read
/// between nodes by trigonometric interpolation.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicFunction {
    values: Vec<f64>,
}

fn fft(values: &[f64]) -> Vec<Complex<f64>> {
    let n = values.len();
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf.iter().map(|c| c / n as f64).collect()
}

fn ifft(spec: Vec<Complex<f64>>) -> Vec<f64> {
    let n = spec.len();
    let mut buf = spec;
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Signed harmonic of FFT bin `j`; the Nyquist bin maps to `None`.
fn harmonic(j: usize, n: usize) -> Option<i64> {
    if 2 * j == n {
        None
    } else if 2 * j < n {
        Some(j as i64)
    } else {
        Some(j as i64 - n as i64)
    }
}

impl PeriodicFunction {
    pub fn from_samples(values: Vec<f64>) -> Result<Self> {
        if values.len() < 8 || !values.len().is_multiple_of(2) {
            return domain(format!("grid size must be even and at least 8, got {}", values.len()));
        }
        Ok(Self { values })
    }

    /// Samples `f(2πj/n)`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_samples((0..n).map(|j| f(TAU * j as f64 / n as f64)).collect())
    }

    pub fn from_series(s: &FourierSeries, n: usize) -> Result<Self> {
        Self::from_samples(s.samples(n))
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n() as f64
    }

    /// Complex coefficients `U_k` of `u = Σ U_k e^{ikx}` in FFT order.
    pub fn spectrum(&self) -> Vec<Complex<f64>> {
        fft(&self.values)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.n() as f64
    }

    /// `∫_𝕋 u`.
    pub fn integral(&self) -> f64 {
        TAU * self.mean()
    }

    /// Real series up to `k_max < n/2`.
    pub fn series(&self, k_max: usize) -> FourierSeries {
        FourierSeries::from_samples(&self.values, k_max.min(self.n() / 2 - 1))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.series(self.n() / 2 - 1).eval_fast(x)
    }

    fn map_spectrum(&self, f: impl Fn(i64, Complex<f64>) -> Complex<f64>) -> Self {
        let n = self.n();
        let spec = self
            .spectrum()
            .into_iter()
            .enumerate()
            .map(|(j, c)| harmonic(j, n).map_or(Complex::new(0.0, 0.0), |k| f(k, c)))
            .collect();
        Self { values: ifft(spec) }
    }

    /// `u^{(r)}`, by multiplying harmonic `k` with `(ik)^r`. Bins below
    /// `4ε` of the peak are round-off and are dropped before the `k^r` gain.
    pub fn derivative(&self, r: u32) -> Self {
        let floor = 4.0 * f64::EPSILON * self.spectrum().iter().fold(0.0f64, |m, c| m.max(c.norm()));
        self.map_spectrum(|k, c| if c.norm() < floor { Complex::new(0.0, 0.0) } else { c * Complex::new(0.0, k as f64).powu(r) })
    }

    /// The zero-average `U` with `U^{(r)} = u − ū`.
    pub fn antiderivative(&self, r: u32) -> Self {
        self.map_spectrum(|k, c| if k == 0 { Complex::new(0.0, 0.0) } else { c / Complex::new(0.0, k as f64).powu(r) })
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { values: self.values.iter().map(|a| a * s).collect() }
    }

    /// Maximum over the nodes.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        (TAU * self.values.iter().map(|x| x * x).sum::<f64>() / self.n() as f64).sqrt()
    }

    /// Largest coefficient in the top eighth of the band relative to the
    /// largest coefficient overall.
    pub fn spectral_tail(&self) -> f64 {
        let n = self.n();
        let spec = self.spectrum();
        let mag = |j: usize| spec[j].norm();
        let top = (0..n).map(mag).fold(0.0, f64::max);
        if top == 0.0 {
            return 0.0;
        }
        let cut = n / 2 - n / 16;
        let tail = (cut..=n - cut).map(mag).fold(0.0, f64::max);
        tail / top
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus_round_trip() {
        let u = PeriodicFunction::from_fn(64, |x| (3.0 * x).sin() + 0.5 * (2.0 * x).cos() + 0.25).unwrap();
        let d = u.derivative(1);
        let want = PeriodicFunction::from_fn(64, |x| 3.0 * (3.0 * x).cos() - (2.0 * x).sin()).unwrap();
        assert!(d.sub(&want).sup_norm() < 1e-13);
        let back = d.antiderivative(1);
        assert!(back.sub(&u).sup_norm() - 0.25 < 1e-13);
        assert!((u.integral() - 0.25 * TAU).abs() < 1e-13);
        assert!((u.eval(0.3) - ((0.9f64).sin() + 0.5 * (0.6f64).cos() + 0.25)).abs() < 1e-13);
        assert!(u.spectral_tail() < 1e-15);
    }
}
