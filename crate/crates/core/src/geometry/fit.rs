use super::{hausdorff_to_frame, reframe_perturbation, FourierSeries, PerturbedDomain, Placement};
use crate::error::Result;
use crate::numeric::{nelder_mead, solve_dense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Truncation used while searching; the final residual uses the same.
pub const FIT_K_MAX: usize = 32;

/// Outcome of [`best_fit_ellipse`].
#[derive(Clone, Debug)]
pub struct BestFit {
    pub placement: Placement,
    /// `μ̄` with `∂Ω = placement + μ̄`.
    pub residual: FourierSeries,
    pub residual_norm: f64,
    /// Residual norm with the input frame as the reference.
    pub initial_norm: f64,
    /// Estimated distance between the returned ellipse and the input frame.
    pub distance: f64,
    /// The search radius was active at the optimum.
    pub boundary_hit: bool,
}

struct Objective<'a> {
    domain: &'a PerturbedDomain,
    order: u32,
    radius: f64,
}

impl Objective<'_> {
    fn residual(&self, p: &[f64]) -> Option<FourierSeries> {
        let pl = Placement::from_params(p).ok()?;
        reframe_perturbation(self.domain, &pl, FIT_K_MAX).ok()
    }

    /// Weighted residual vector `(1 ∨ kⁿ)·(a_k, b_k)` plus the mean.
    fn vector(&self, p: &[f64]) -> Option<Vec<f64>> {
        let r = self.residual(p)?;
        let mut v = vec![r.mean];
        for k in 1..=r.k_max() {
            let w = (k as f64).powi(self.order as i32).max(1.0);
            let (a, b) = r.coeff(k);
            v.push(w * a);
            v.push(w * b);
        }
        Some(v)
    }

    fn distance(&self, p: &[f64]) -> f64 {
        Placement::from_params(p)
            .ok()
            .and_then(|pl| hausdorff_to_frame(&self.domain.frame, &pl).ok())
            .unwrap_or(f64::INFINITY)
    }

    /// Squared weighted norm, with a steep penalty outside the search ball.
    fn value(&self, p: &[f64]) -> f64 {
        let Some(v) = self.vector(p) else { return f64::INFINITY };
        let base: f64 = v.iter().map(|x| x * x).sum();
        let d = self.distance(p);
        if d > self.radius {
            let excess = (d - self.radius) / self.radius;
            return base + 1e6 * excess * excess * (1.0 + base) + excess;
        }
        base
    }
}

/// Ellipse minimizing the weighted residual norm `Σ (1 ∨ k^{2n})(a_k² + b_k²)`
/// of the reframed boundary over ellipses within distance `radius` of the
/// frame.
///
/// Nelder–Mead over `(center, angle, a, b)` from the frame and from three
/// seeded random starts (run in parallel, reduced in start order), followed
/// by a Gauss–Newton polish. Ties keep the lexicographically smallest
/// parameter vector.
pub fn best_fit_ellipse(domain: &PerturbedDomain, order: u32, radius: f64, seed: u64) -> Result<BestFit> {
    let obj = Objective { domain, order, radius };
    let start = Placement::canonical(domain.frame).params();
    let initial = obj.residual(&start).expect("identity reframe");
    let initial_norm = initial.weighted_norm(order);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![start.to_vec()];
    for _ in 0..3 {
        let mut s = start.to_vec();
        for (i, x) in s.iter_mut().enumerate() {
            if i != 2 {
                *x += radius * 0.3 * rng.random_range(-1.0..1.0);
            }
        }
        starts.push(s);
    }
    let step = [0.3 * radius, 0.3 * radius, 0.1, 0.3 * radius, 0.3 * radius];
    let runs: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|s| {
            let m = nelder_mead(&|p: &[f64]| obj.value(p), s, &step, 1e-14, 1500);
            let m2 = nelder_mead(&|p: &[f64]| obj.value(p), &m.x, &step.map(|h| 0.01 * h), 1e-16, 800);
            (m2.x, m2.value)
        })
        .collect();
    let mut best = runs[0].clone();
    for r in &runs[1..] {
        let tie = (r.1 - best.1).abs() <= 1e-15 * best.1.abs();
        if r.1 < best.1 && !tie || tie && r.0.partial_cmp(&best.0) == Some(std::cmp::Ordering::Less) {
            best = r.clone();
        }
    }
    let mut p = best.0;
    let mut value = best.1;

    // Gauss–Newton polish with forward-difference Jacobian
    for _ in 0..8 {
        let Some(r0) = obj.vector(&p) else { break };
        let h = 1e-7 * radius.max(1e-3);
        let cols: Vec<Vec<f64>> = (0..5)
            .map(|i| {
                let mut q = p.clone();
                q[i] += h;
                obj.vector(&q).map(|r| r.iter().zip(&r0).map(|(a, b)| (a - b) / h).collect()).unwrap_or_default()
            })
            .collect();
        if cols.iter().any(|c| c.len() != r0.len()) {
            break;
        }
        let mut jtj = vec![vec![0.0; 5]; 5];
        let mut jtr = vec![0.0; 5];
        for i in 0..5 {
            for j in 0..5 {
                jtj[i][j] = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
            }
            jtj[i][i] *= 1.0 + 1e-10;
            jtj[i][i] += 1e-300;
            jtr[i] = -cols[i].iter().zip(&r0).map(|(a, b)| a * b).sum::<f64>();
        }
        let Some(dp) = solve_dense(jtj, jtr) else { break };
        let q: Vec<f64> = p.iter().zip(&dp).map(|(a, b)| a + b).collect();
        let v = obj.value(&q);
        if v < value {
            p = q;
            value = v;
        } else {
            break;
        }
    }

    let placement = Placement::from_params(&p)?;
    let residual = reframe_perturbation(domain, &placement, FIT_K_MAX)?;
    let distance = hausdorff_to_frame(&domain.frame, &placement)?;
    Ok(BestFit {
        placement,
        residual_norm: residual.weighted_norm(order),
        residual,
        initial_norm,
        distance,
        boundary_hit: distance >= 0.999 * radius,
    })
}
