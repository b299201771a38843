//! The acceptance criteria, each reduced to named checks with measured
//! values. Published reference values are embedded here verbatim.

use crate::commands::{caustic_orbit, closed_form_deviations, phi_terms, xi_entries};
use crate::error::CliError;
use caustics::dynamics::{action_angle_phi, integrability_residual, lambda_from_rotation, RotationNumber};
use caustics::geometry::{elliptic_motion_mu, Ellipse, EllipticMotion, FourierSeries, MotionOrder, PerturbedDomain};
use caustics::modes::{basis_defect, capital_v_mode, sobolev_inner, ModeIndex, SobolevOrder, DEFAULT_K_MAX};
use caustics::nondeg::{
    build_concrete_system, build_concrete_system_with, det_leading, inverse_row_exponents, inverse_row_orders,
    verify_all, ConcreteId, Status,
};
use caustics::series::{compose_mu_expansion, rat, xi_diagonal, Basis, RationalTrigPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

pub const CRITERIA: u32 = 10;

/// Criteria that cannot pass as stated; the reasons are in the README.
pub const KNOWN_UNATTAINABLE: [u32; 4] = [1, 2, 5, 6];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub known_unattainable: bool,
    /// Failing checks, or a summary when all pass.
    pub detail: String,
    pub checks: Vec<Check>,
    /// Wall time; kept out of the JSON so output stays reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Outcome {
    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let known = if self.known_unattainable { " [known unattainable]" } else { "" };
        format!(
            "criterion {:>2} {}{known}: {} ({:.1} s) | {}",
            self.id,
            self.status(),
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn outcome(id: u32, title: &'static str, checks: Vec<Check>, elapsed: Duration) -> Outcome {
    let pass = checks.iter().all(|c| c.pass);
    let failing: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    let detail = if pass { format!("{} checks pass", checks.len()) } else { failing.join("; ") };
    Outcome { id, title, pass, known_unattainable: KNOWN_UNATTAINABLE.contains(&id), detail, checks, elapsed }
}

pub fn run_criterion(id: u32) -> Result<Outcome, CliError> {
    let t = Instant::now();
    let (title, checks) = match id {
        1 => ("exact expansion coefficients", expansion_exactness()?),
        2 => ("published determinants", published_determinants()?),
        3 => ("inverse-row hierarchies", inverse_hierarchies()?),
        4 => ("caustic invariance", caustic_invariance()?),
        5 => ("rotation-number law", rotation_law()?),
        6 => ("integrability residual scaling", residual_scaling()?),
        7 => ("series versus dynamics", series_consistency()?),
        8 => ("structural certification", structural_certification()?),
        9 => ("deformed basis condition", basis_condition()?),
        10 => ("elliptic motions", elliptic_motions()?),
        _ => return Err(CliError::Validation(format!("no criterion {id}"))),
    };
    let mut checks = checks;
    let elapsed = t.elapsed();
    if let Some(limit) = runtime_limit(id) {
        let secs = elapsed.as_secs_f64();
        checks.push(Check::new("runtime", secs < limit, format!("limit {limit} s")));
    }
    Ok(outcome(id, title, checks, elapsed))
}

pub fn run_all() -> Result<Vec<Outcome>, CliError> {
    (1..=CRITERIA).map(run_criterion).collect()
}

fn runtime_limit(id: u32) -> Option<f64> {
    match id {
        1 => Some(10.0),
        2 => Some(5.0),
        4 => Some(30.0),
        // 60 s for each of the two q0 values
        8 => Some(120.0),
        _ => None,
    }
}

fn sci(x: f64) -> String {
    format!("{x:.4e}")
}

/// `"n/d"` or `"n"` as an integer pair.
fn parse_rational(s: &str) -> (i128, i128) {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    (n.parse().expect("integer numerator"), d.parse().expect("integer denominator"))
}

fn same_rational(a: (i128, i128), b: (i128, i128)) -> bool {
    a.0 * b.1 == b.0 * a.1
}

/// Published `φ_j`: `(harmonic, num, den)` of the sine terms.
const PUBLISHED_PHI: [&[(u32, i128, i128)]; 6] = [
    &[(2, 1, 8)],
    &[(2, 16, 256), (4, 1, 256)],
    &[(2, 83, 2048), (4, 1, 256), (6, 1, 6144)],
    &[(2, 121, 4096), (4, 29, 8192), (6, 1, 4096), (8, 1, 131072)],
    &[(2, 12071, 524288), (4, 13, 4096), (6, 37, 131072), (8, 1, 65536), (10, 1, 2621440)],
    &[(2, 19651, 1048576), (4, 47955, 16777216), (6, 235, 786432), (8, 45, 2097152), (10, 1, 1048576), (12, 1, 50331648)],
];

/// Published `ξ_{j,l}(k)`, coefficients by ascending power of `k`.
const PUBLISHED_XI: [(usize, i64, &[(i128, i128)]); 15] = [
    (1, -1, &[(0, 1), (-1, 16)]),
    (1, 0, &[]),
    (1, 1, &[(0, 1), (1, 16)]),
    (2, -2, &[(0, 1), (-1, 512), (1, 512)]),
    (2, -1, &[(0, 1), (-16, 512)]),
    (2, 0, &[(0, 1), (0, 1), (-2, 512)]),
    (2, 1, &[(0, 1), (16, 512)]),
    (2, 2, &[(0, 1), (1, 512), (1, 512)]),
    (3, -3, &[(0, 1), (-1, 12288), (1, 8192), (-1, 24576)]),
    (3, -2, &[(0, 1), (-1, 512), (1, 512)]),
    (3, -1, &[(0, 1), (-83, 4096), (-1, 8192), (1, 8192)]),
    (3, 0, &[(0, 1), (0, 1), (-1, 256)]),
    (3, 1, &[(0, 1), (83, 4096), (-1, 8192), (-1, 8192)]),
    (3, 2, &[(0, 1), (1, 512), (1, 512)]),
    (3, 3, &[(0, 1), (1, 12288), (1, 8192), (1, 24576)]),
];

const PUBLISHED_XI_DIAGONAL: [(usize, &[(i128, i128)]); 3] = [
    (4, &[(0, 1), (1, 262144), (11, 1572864), (1, 262144), (1, 1572864)]),
    (5, &[(0, 1), (1, 5242880), (5, 12582912), (7, 25165824), (1, 12582912), (1, 125829120)]),
    (
        6,
        &[(0, 1), (1, 100663296), (137, 6039797760), (11, 805306368), (17, 2415919104), (1, 805306368), (1, 12079595520)],
    ),
];

/// Positions where two coefficient lists differ, padding with zeros.
fn poly_mismatches(got: &[(i128, i128)], want: &[(i128, i128)]) -> Vec<(usize, (i128, i128), (i128, i128))> {
    let n = got.len().max(want.len());
    (0..n)
        .filter_map(|d| {
            let g = got.get(d).copied().unwrap_or((0, 1));
            let w = want.get(d).copied().unwrap_or((0, 1));
            (!same_rational(g, w)).then_some((d, g, w))
        })
        .collect()
}

fn expansion_exactness() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let phi = phi_terms(6)?;
    for (j, want) in PUBLISHED_PHI.iter().enumerate() {
        let got = &phi[j].terms;
        let ok = got.len() == want.len()
            && got.iter().zip(want.iter()).all(|(t, &(h, n, d))| {
                t.harm == h && t.func == "sin" && same_rational(parse_rational(&format!("{}/{}", t.num, t.den)), (n, d))
            });
        checks.push(Check::new(format!("phi_{}", j + 1), ok, if ok { "exact" } else { "differs" }));
    }
    let xi = xi_entries(6)?;
    let lookup = |j: usize, l: i64| -> Vec<(i128, i128)> {
        xi.iter().find(|x| x.j == j && x.l == l).map_or(Vec::new(), |x| x.poly.iter().map(|c| parse_rational(c)).collect())
    };
    let diag = PUBLISHED_XI_DIAGONAL.iter().map(|&(j, p)| (j, j as i64, p));
    for (j, l, want) in PUBLISHED_XI.iter().copied().chain(diag) {
        let bad = poly_mismatches(&lookup(j, l), want);
        let detail = bad
            .iter()
            .map(|(d, g, w)| format!("k^{d} coefficient {}/{} vs published {}/{}", g.0, g.1, w.0, w.1))
            .collect::<Vec<_>>()
            .join(", ");
        checks.push(Check::new(format!("xi_{j},{l}"), bad.is_empty(), if bad.is_empty() { "exact".into() } else { detail }));
    }
    Ok(checks)
}

/// `(system, order, coefficient, significant digits)` as published.
const PUBLISHED_DETERMINANTS: [(ConcreteId, i64, f64, i32); 6] = [
    (ConcreteId::Q3Odd, 4, -4.182e-4, 4),
    (ConcreteId::Q4Odd, 6, -4.02e-6, 3),
    (ConcreteId::Q4Even, 10, 7.1437e-5, 5),
    (ConcreteId::Q5Odd4, 6, 1.4e-5, 2),
    (ConcreteId::Q5Odd6, 16, 6.86498e-15, 6),
    (ConcreteId::Q5Even7, 12, -2.5e-6, 2),
];

fn published_determinants() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for (id, order, value, digits) in PUBLISHED_DETERMINANTS {
        let d = det_leading(&build_concrete_system(id))?;
        checks.push(Check::new(format!("{id} order"), d.order == order, format!("e^{} vs published e^{order}", d.order)));
        let tol = 10f64.powi(1 - digits);
        let rel = (d.value() - value).abs() / value.abs();
        let certified = d.certified_sign.is_some();
        checks.push(Check::new(
            format!("{id} coefficient"),
            rel <= tol && certified,
            format!("{} vs published {value:e} (relative error {}, tolerance {tol:e})", sci(d.value()), sci(rel)),
        ));
    }
    // the seven-row system rebuilt from the published diagonal table, whose
    // ξ_{6,6} differs from the computed one in the k³ coefficient
    let mut table = xi_diagonal(6);
    table[5].poly[3] = rat(11, 805306368);
    let misprint = det_leading(&build_concrete_system_with(ConcreteId::Q5Even7, &table)?)?;
    checks.push(Check::new(
        "q5_even7 with published xi_6,6 (diagnostic)",
        true,
        format!("{} e^{}", sci(misprint.value()), misprint.order),
    ));
    Ok(checks)
}

/// Published first rows (two for the six-row odd system) of the inverses.
fn published_hierarchies() -> Vec<(ConcreteId, Vec<Vec<i64>>)> {
    vec![
        (ConcreteId::Q3Odd, vec![vec![-2, -4, -4]]),
        (ConcreteId::Q4Odd, vec![vec![-2, -4, -6, -6]]),
        (ConcreteId::Q4Even, vec![vec![-2, -4, -6, -8, -10, -10]]),
        (ConcreteId::Q5Odd4, vec![vec![-2, -4, -6, -6]]),
        (ConcreteId::Q5Odd6, vec![vec![-4, -6, -8, -8, -10, -10], vec![-2, -4, -6, -6, -8, -8]]),
        (ConcreteId::Q5Even7, vec![vec![-2, -4, -6, -8, -10, -12, -12]]),
    ]
}

fn inverse_hierarchies() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let (e1, e2) = (rat(1, 100), rat(1, 1000));
    for (id, want) in published_hierarchies() {
        let m = build_concrete_system(id);
        let rows: Vec<usize> = (0..want.len()).collect();
        let orders = inverse_row_orders(&m, &rows)?;
        let got: Vec<Vec<i64>> = orders.iter().map(|r| r.iter().map(|o| o.unwrap_or(i64::MIN)).collect()).collect();
        checks.push(Check::new(format!("{id} orders"), got == want, format!("{got:?} vs published {want:?}")));
        let exps = inverse_row_exponents(&m, &rows, &e1, &e2)?;
        let worst = exps
            .iter()
            .zip(&want)
            .flat_map(|(g, w)| g.iter().zip(w).map(|(x, &o)| (x - o as f64).abs()))
            .fold(0.0f64, f64::max);
        checks.push(Check::new(format!("{id} measured exponents"), worst <= 0.15, format!("max deviation {worst:.4}")));
    }
    Ok(checks)
}

fn caustic_invariance() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for e in [0.1, 0.3, 0.5] {
        let frame = Ellipse::from_eccentricity(1.0, e)?;
        for r in [0.2, 0.5, 0.8] {
            let lambda = r * frame.b();
            let rows = caustic_orbit(&PerturbedDomain::ellipse(frame, 8), lambda, 0.0, 10_000)?;
            let defect = rows.iter().fold(0.0f64, |m, x| m.max(x.2.abs()));
            let dev = closed_form_deviations(&frame, lambda, 0.0, 10_000)?.into_iter().fold(0.0f64, f64::max);
            checks.push(Check::new(
                format!("e={e} lambda/b={r}"),
                defect < 1e-10 && dev < 1e-9,
                format!("max tangency defect {}, max step deviation {}", sci(defect), sci(dev)),
            ));
        }
    }
    Ok(checks)
}

fn rotation_law() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let omegas = [("1/7", RotationNumber::from_fraction(1, 7)?), ("1/5", RotationNumber::from_fraction(1, 5)?), ("1/3", RotationNumber::from_fraction(1, 3)?), ("0.45", RotationNumber::new(0.45)?)];
    for (name, w) in omegas {
        let dev = [0.2, 0.1, 0.05]
            .iter()
            .map(|&e| {
                let f = Ellipse::from_eccentricity(1.0, e)?;
                Ok((lambda_from_rotation(&f, &w)? - f.b() * (PI * w.value).sin()).abs())
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        let ratios = [dev[0] / dev[1], dev[1] / dev[2]];
        let scaled: Vec<f64> = dev.iter().zip([0.2f64, 0.1, 0.05]).map(|(d, e)| d / (e * e)).collect();
        checks.push(Check::new(
            format!("omega={name}"),
            ratios.iter().all(|r| (r - 4.0).abs() <= 0.8),
            format!("halving ratios {:.3}, {:.3}; deviation/e^2 {}", ratios[0], ratios[1], scaled.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(", ")),
        ));
    }
    Ok(checks)
}

fn residual_scaling() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let frame = Ellipse::from_eccentricity(1.0, 0.3)?;
    let osc = |mu: FourierSeries, p: u64, q: u64| -> Result<f64, CliError> {
        Ok(integrability_residual(&PerturbedDomain::new(frame, mu)?, p, q, 64)?.oscillation)
    };
    for (p, q) in [(1, 5), (1, 7), (2, 7)] {
        let zero = osc(FourierSeries::zero(16), p, q)?;
        checks.push(Check::new(format!("mu=0 at {p}/{q}"), zero < 1e-14, format!("oscillation {}", sci(zero))));
        let shift = |s: f64| -> Result<f64, CliError> {
            osc(elliptic_motion_mu(&frame, &EllipticMotion::Translation(s, 0.5 * s), MotionOrder::Exact, 32)?, p, q)
        };
        let ratio = shift(2e-3)? / shift(1e-3)?;
        checks.push(Check::new(
            format!("translation at {p}/{q}"),
            (ratio - 4.0).abs() <= 0.8,
            format!("halving ratio {ratio:.3} (exponent {:.2})", ratio.log2()),
        ));
    }
    for q in [5u64, 7] {
        let mode = |a: f64| osc(FourierSeries::mode(q as usize, a, false, 16), 1, q);
        let ratio = mode(1e-4)? / mode(5e-5)?;
        checks.push(Check::new(format!("cos {q}phi at 1/{q}"), (ratio - 2.0).abs() <= 0.4, format!("halving ratio {ratio:.3}")));
    }
    Ok(checks)
}

/// `μ(ψ + π/2)` for `μ = Σ c_k cos kψ + s_k sin kψ` with small integer data.
fn quarter_shift(cos: &[i64], sin: &[i64], den: i64) -> RationalTrigPoly {
    let mut p = RationalTrigPoly::zero();
    for k in 1..=cos.len() {
        // cos k(ψ+π/2) = c cos kψ − s sin kψ, sin k(ψ+π/2) = s cos kψ + c sin kψ
        let (c, s) = [(1, 0), (0, 1), (-1, 0), (0, -1)][k % 4];
        let (a, b) = (cos[k - 1], sin[k - 1]);
        p.add_term(k as u32, Basis::Cos, rat(a * c + b * s, den));
        p.add_term(k as u32, Basis::Sin, rat(b * c - a * s, den));
    }
    p
}

fn series_consistency() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let lambda = 0.3;
    let es = [0.05, 0.1, 0.2];
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cos: Vec<i64> = (0..4).map(|_| rng.random_range(-8..=8)).collect();
        let sin: Vec<i64> = (0..4).map(|_| rng.random_range(-8..=8)).collect();
        let mu = FourierSeries::new(
            0.0,
            cos.iter().map(|&c| c as f64 / 64.0).collect(),
            sin.iter().map(|&s| s as f64 / 64.0).collect(),
        )?;
        let shifted = quarter_shift(&cos, &sin, 64);
        for n in [2usize, 3] {
            let p = compose_mu_expansion(&shifted, n)?;
            let mut logs = Vec::new();
            for e in es {
                let frame = Ellipse::from_eccentricity(1.0, e)?;
                let kappa2 = e * e / (1.0 - lambda * lambda);
                let mut err = 0.0f64;
                for i in 0..48 {
                    let theta = TAU * (i as f64 + 0.3) / 48.0;
                    let exact = mu.eval(action_angle_phi(theta, lambda, &frame)?);
                    let psi = theta - FRAC_PI_2;
                    let approx: f64 = (0..=n).map(|j| p[j].eval(psi) * kappa2.powi(j as i32)).sum();
                    err = err.max((exact - approx).abs());
                }
                logs.push((0.5 * kappa2.ln(), err.ln()));
            }
            let slope = least_squares_slope(&logs);
            let want = 2.0 * n as f64 + 1.8;
            checks.push(Check::new(format!("seed {seed}, N={n}"), slope >= want, format!("slope {slope:.3} (need {want})")));
        }
    }
    Ok(checks)
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn structural_certification() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for q0 in [6u64, 8] {
        let t = Instant::now();
        let c = verify_all(q0, false)?;
        let secs = t.elapsed().as_secs_f64();
        checks.push(Check::new(
            format!("q0={q0} count"),
            c.reports.len() == (q0 - 2) as usize && c.expected_count == (q0 - 2) as usize,
            format!("{} matrices", c.reports.len()),
        ));
        let inhomogeneous: Vec<&str> = c.reports.iter().filter(|r| !r.homogeneous).map(|r| r.matrix.as_str()).collect();
        checks.push(Check::new(format!("q0={q0} homogeneous"), inhomogeneous.is_empty(), format!("{inhomogeneous:?}")));
        let identity = c.reports.iter().filter(|r| r.count_identity.is_some()).all(|r| r.count_identity == Some(true));
        checks.push(Check::new(format!("q0={q0} count identity"), identity, ""));
        let failed: Vec<&str> = c.reports.iter().filter(|r| r.status != Status::Pass).map(|r| r.matrix.as_str()).collect();
        checks.push(Check::new(format!("q0={q0} certified"), failed.is_empty(), format!("uncertified {failed:?}")));
        checks.push(Check::new(format!("q0={q0} runtime"), secs < 60.0, "limit 60 s"));
    }
    Ok(checks)
}

fn basis_condition() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let r = SobolevOrder::new(2)?;
    let reports = [0.2, 0.1, 0.05]
        .iter()
        .map(|&e| Ok(basis_defect(&Ellipse::from_eccentricity(1.0, e)?, 3, r, 64)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let small = &reports[2];
    checks.push(Check::new("defect at e=0.05", small.defect < 1.0, format!("defect {}", sci(small.defect))));
    let scaled: Vec<f64> = small
        .per_k_deviation
        .iter()
        .filter(|d| d.k.unsigned_abs() >= 8)
        .map(|d| d.k.unsigned_abs() as f64 * d.c0)
        .collect();
    let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    checks.push(Check::new("1/k envelope", hi / lo < 1.25, format!("k·deviation in [{}, {}] for 8 ≤ |k| ≤ 64", sci(lo), sci(hi))));
    let ce: Vec<f64> = reports.iter().map(|d| d.c_e).collect();
    checks.push(Check::new(
        "C(e) decreasing",
        ce[0] > ce[1] && ce[1] > ce[2],
        format!("{} at e = 0.2, 0.1, 0.05", ce.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(", ")),
    ));
    let modes = (-32i64..=32)
        .filter(|&k| k != 0)
        .map(|k| capital_v_mode(ModeIndex::new(k, DEFAULT_K_MAX)?, r, 256))
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst = 0.0f64;
    for (i, u) in modes.iter().enumerate() {
        for (j, v) in modes.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((sobolev_inner(u, v, r)?.value - want).abs());
        }
    }
    let one = capital_v_mode(ModeIndex::new(0, DEFAULT_K_MAX)?, r, 256)?;
    let norm_one = sobolev_inner(&one, &one, r)?.value;
    checks.push(Check::new(
        "orthonormality",
        worst < 1e-10,
        format!("max error {} over 0 < |k|, |j| ≤ 32; <1,1> = {}", sci(worst), sci(norm_one)),
    ));
    Ok(checks)
}

fn sup_diff(a: &FourierSeries, b: &FourierSeries) -> f64 {
    a.sub(b).samples(256).into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Normalized leading-order error on nested halving grids: level `n` uses the
/// first `n + 2` values of `e` and of `‖p‖`. The bound is uniform when the
/// supremum saturates; a missing power (an `e‖p‖` term, say) doubles it per level.
fn elliptic_motions() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let es = [0.2, 0.1, 0.05, 0.025, 0.0125];
    let ss = [4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4];
    let kinds: [(&str, fn(f64) -> EllipticMotion); 3] = [
        ("homothety", EllipticMotion::Homothety),
        ("translation", |s| EllipticMotion::Translation(s, 0.5 * s)),
        ("hyperbolic rotation", |s| EllipticMotion::HyperbolicRotation(s, 0.5 * s)),
    ];
    for (name, make) in kinds {
        // normalized[i][j] at es[i], ss[j]
        let mut normalized = vec![vec![0.0; ss.len()]; es.len()];
        for (i, &e) in es.iter().enumerate() {
            let frame = Ellipse::from_eccentricity(1.0, e)?;
            for (j, &s) in ss.iter().enumerate() {
                let m = make(s);
                let exact = elliptic_motion_mu(&frame, &m, MotionOrder::Exact, 16)?;
                let lead = elliptic_motion_mu(&frame, &m, MotionOrder::Leading, 16)?;
                let p = m.magnitude();
                normalized[i][j] = sup_diff(&exact, &lead) / (e * e * p + p * p);
            }
        }
        let sup = |n: usize| normalized[..n].iter().flat_map(|r| r[..n].iter()).fold(0.0f64, |m, &x| m.max(x));
        let levels: Vec<f64> = (2..=es.len()).map(sup).collect();
        let growth = levels[levels.len() - 1] / levels[levels.len() - 2];
        checks.push(Check::new(
            name,
            growth <= 1.5,
            format!(
                "fitted C = {}; sup of error/(e²‖p‖ + ‖p‖²) by level {}; last-level growth {growth:.3}",
                sci(levels[levels.len() - 1]),
                levels.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ")
            ),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/8"), (-3, 8));
        assert_eq!(parse_rational("5"), (5, 1));
        assert!(same_rational((16, 256), (1, 16)));
        assert_eq!(poly_mismatches(&[(0, 1), (1, 2)], &[(0, 1), (2, 4), (0, 1)]), vec![]);
        assert_eq!(poly_mismatches(&[(1, 3)], &[]).len(), 1);
    }

    #[test]
    fn quarter_shift_matches_evaluation() {
        let (cos, sin) = ([3, -2, 1, 5], [0, 4, -7, 1]);
        let p = quarter_shift(&cos, &sin, 8);
        for psi in [0.1, 1.7, 4.0] {
            let x: f64 = psi + FRAC_PI_2;
            let direct: f64 = (1..=4).map(|k| (cos[k - 1] as f64 * (k as f64 * x).cos() + sin[k - 1] as f64 * (k as f64 * x).sin()) / 8.0).sum();
            assert!((p.eval(psi) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn slope_of_a_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 * i as f64 - 1.0)).collect();
        assert!((least_squares_slope(&pts) - 3.0).abs() < 1e-14);
    }
}
