use super::{action_angle_phi, action_angle_theta, lambda_from_rotation, Billiard, RotationNumber};
use crate::error::{domain, Error, Result};
use crate::numeric::solve_dense;

/// Critical `(p, q)`-periodic configuration of the chord-length functional.
#[derive(Clone, Debug)]
pub struct PqGon {
    /// Unwrapped, increasing vertex angles `φ₀ < … < φ_{q−1} < φ₀ + 2πp`.
    pub phis: Vec<f64>,
    pub perimeter: f64,
    /// Largest `|∂L/∂φ_k| / |P′(φ_k)|` over free vertices: the mismatch of
    /// the cosines of incidence and reflection.
    pub residual: f64,
}

struct Functional<'a> {
    table: &'a Billiard,
    q: usize,
    wind: f64,
}

impl Functional<'_> {
    fn vertex(&self, phis: &[f64], k: isize) -> f64 {
        let q = self.q as isize;
        let (d, r) = (k.div_euclid(q), k.rem_euclid(q));
        phis[r as usize] + d as f64 * self.wind
    }

    fn perimeter(&self, phis: &[f64]) -> f64 {
        (0..self.q as isize)
            .map(|k| self.table.chord_derivatives(self.vertex(phis, k), self.vertex(phis, k + 1))[0])
            .sum()
    }

    /// Gradient and cyclic tridiagonal Hessian of the perimeter.
    fn derivatives(&self, phis: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let q = self.q;
        let mut g = vec![0.0; q];
        let mut h = vec![vec![0.0; q]; q];
        for k in 0..q {
            let [_, d1, d2, d11, d12, d22] =
                self.table.chord_derivatives(self.vertex(phis, k as isize), self.vertex(phis, k as isize + 1));
            let k1 = (k + 1) % q;
            g[k] += d1;
            g[k1] += d2;
            h[k][k] += d11;
            h[k1][k1] += d22;
            h[k][k1] += d12;
            h[k1][k] += d12;
        }
        (g, h)
    }
}

/// Maximal `(p, q)`-gon through (or, with `free_start`, near) `start_phi`.
///
/// Vertices start from the caustic orbit of the frame ellipse with rotation
/// number `p/q` through `start_phi`, then improve by coordinate ascent (one
/// Newton step on each vertex's reflection residual per sweep) and finish
/// with full Newton steps on the free vertices.
pub fn max_pq_gon(table: &Billiard, p: u64, q: u64, start_phi: f64, free_start: bool) -> Result<PqGon> {
    if q < 2 || p == 0 || num_integer::gcd(p, q) != 1 || 2 * p >= q {
        return domain(format!("need gcd(p,q) = 1 and 0 < p/q < 1/2, got {p}/{q}"));
    }
    let frame = table.domain().frame;
    let rot = RotationNumber::from_fraction(p, q)?;
    let tau = std::f64::consts::TAU;
    let step = tau * p as f64 / q as f64;
    let mut phis: Vec<f64> = if frame.a() == frame.b() {
        (0..q).map(|k| start_phi + k as f64 * step).collect()
    } else {
        let lambda = lambda_from_rotation(&frame, &rot)?;
        let th0 = action_angle_theta(start_phi, lambda, &frame)?;
        let mut v = (0..q)
            .map(|k| action_angle_phi(th0 + k as f64 * step, lambda, &frame))
            .collect::<Result<Vec<f64>>>()?;
        let shift = start_phi - v[0];
        v.iter_mut().for_each(|x| *x += shift);
        v
    };
    let f = Functional { table, q: q as usize, wind: tau * p as f64 };
    let first = if free_start { 0 } else { 1 };
    let free: Vec<usize> = (first..q as usize).collect();

    let residual_of = |phis: &[f64], g: &[f64]| -> f64 {
        free.iter()
            .map(|&k| {
                let t = table.domain().point_derivatives(phis[k])[1];
                g[k].abs() / t[0].hypot(t[1])
            })
            .fold(0.0, f64::max)
    };

    for _sweep in 0..40 {
        let mut worst: f64 = 0.0;
        for &k in &free {
            let (g, h) = f.derivatives(&phis);
            worst = worst.max(g[k].abs());
            if h[k][k] < 0.0 {
                let limit = 0.25 * step.min(tau * p as f64 - (q as f64 - 1.0) * step + step);
                phis[k] -= (g[k] / h[k][k]).clamp(-limit, limit);
            }
        }
        if worst < 1e-10 {
            break;
        }
    }
    let (mut g, mut h) = f.derivatives(&phis);
    for _ in 0..12 {
        if residual_of(&phis, &g) < 1e-14 {
            break;
        }
        let a: Vec<Vec<f64>> = free.iter().map(|&i| free.iter().map(|&j| h[i][j]).collect()).collect();
        let b: Vec<f64> = free.iter().map(|&i| -g[i]).collect();
        let Some(dx) = solve_dense(a, b) else { break };
        let mut trial = phis.clone();
        for (idx, &k) in free.iter().enumerate() {
            trial[k] += dx[idx];
        }
        let (g2, h2) = f.derivatives(&trial);
        if residual_of(&trial, &g2) >= residual_of(&phis, &g) {
            break;
        }
        phis = trial;
        g = g2;
        h = h2;
    }
    for k in 0..q as usize {
        let gap = f.vertex(&phis, k as isize + 1) - phis[k];
        if !(gap > 1e-8) {
            return Err(Error::Search(format!(
                "vertices {k} and {} collapsed; try another start angle",
                (k + 1) % q as usize
            )));
        }
    }
    Ok(PqGon { perimeter: f.perimeter(&phis), residual: residual_of(&phis, &g), phis })
}
