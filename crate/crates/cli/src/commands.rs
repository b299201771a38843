use crate::config::{Precision, RunConfig};
use crate::error::CliError;
use crate::{reproduce, Command, Emitted, TableArgs};
use caustics::dynamics::{
    caustic_rotation_number, ellipse_caustic_orbit, integrability_residual, lambda_from_rotation, max_pq_gon,
    tangency_defect, Billiard, BoundaryState, CausticOrbitSpec, RotationNumber,
};
use caustics::geometry::{best_fit_ellipse, Ellipse, FourierSeries, Placement, PerturbedDomain};
use caustics::json::fmt_f64;
use caustics::modes::{annihilation_on, basis_defect_on, Annihilation, BasisDefect, DeformedBasis, SobolevOrder};
use caustics::nondeg::{
    build_concrete_system, build_even_matrix, build_odd_matrix, certify, verify_all, Certification, ConcreteId,
    MatrixReport, NondegMatrix, SymbolicEntry,
};
use caustics::numeric::wrap_angle;
use caustics::series::{expand_action_angle, rational_string, xi_from, MAX_ORDER};
use caustics::special::{complete_k, incomplete_f, jacobi_am, Modulus};
use caustics::{DoubleDouble, Real};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::f64::consts::TAU;

/// Elliptic tables are sampled with this many harmonics (all zero).
const ELLIPSE_TABLE_MODES: usize = 8;

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Emitted, CliError> {
    match cmd {
        Command::Ellint { k, phi } => match cfg.precision {
            Precision::Double => ellint::<f64>(k, phi.as_deref(), 17),
            Precision::Extended { digits } => ellint::<DoubleDouble>(k, phi.as_deref(), digits),
        },
        Command::Rotnum { a, b, lambda, omega } => {
            let target = match (lambda, omega) {
                (Some(l), None) => RotTarget::Lambda(l),
                (None, Some(w)) => RotTarget::Omega(w),
                _ => return Err(CliError::Usage("give exactly one of --lambda and --omega".into())),
            };
            match cfg.precision {
                Precision::Double => rotnum::<f64>(a, b, target, 17),
                Precision::Extended { digits } => rotnum::<DoubleDouble>(a, b, target, digits),
            }
        }
        Command::Orbit { table, lambda, steps, t0 } => orbit(table, *lambda, *steps, *t0),
        Command::CausticTest { a, b, lambda, steps, t0, step_tolerance } => {
            caustic_test(*a, *b, *lambda, *steps, *t0, cfg.tolerance, *step_tolerance)
        }
        Command::Pqgon { table, p, q, start_phi, free_start } => pqgon(table, *p, *q, *start_phi, *free_start),
        Command::Integrability { table, p, q, fit } => integrability(table, *p, *q, *fit, cfg.profile_grid),
        Command::Expand { order } => expand(*order),
        Command::Xi { order } => xi(*order),
        Command::Matrix { q0, parity, m, .. } => matrix(*q0, parity, *m),
        Command::Verify { q0, include_even_m1 } => verify(*q0, *include_even_m1),
        Command::Modes { a, e, q0, r, k } => modes(*a, *e, *q0, *r, *k, cfg),
        Command::Annihilate { domain, q, r, q0 } => annihilate(domain, *q, *r, *q0, cfg),
        Command::FitEllipse { domain, order, radius } => fit_ellipse(domain, *order, *radius, cfg.seed),
        Command::Reproduce { criterion } => reproduce_cmd(criterion),
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Validation(msg.into()))
}

/// Scalars the precision-generic subcommands run in.
trait Scalar: Real + FromStr {
    fn render(self, digits: u32) -> String;
}

impl Scalar for f64 {
    fn render(self, _digits: u32) -> String {
        fmt_f64(self)
    }
}

impl Scalar for DoubleDouble {
    fn render(self, digits: u32) -> String {
        self.to_sci_string(digits as usize)
    }
}

fn parse<T: Scalar>(name: &str, s: &str) -> Result<T, CliError> {
    s.trim().parse::<T>().map_err(|_| CliError::Validation(format!("--{name}: not a number: {s:?}")))
}

#[derive(Serialize)]
struct EllintInput {
    k: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<String>,
}

#[derive(Serialize)]
struct EllintOut {
    input: EllintInput,
    /// `F(φ; k)`, or `K(k)` without `φ`.
    value: String,
    complete: String,
    /// `|am(value) − φ|`.
    residual: String,
    digits: u32,
}

fn ellint<T: Scalar>(k: &str, phi: Option<&str>, digits: u32) -> Result<Emitted, CliError> {
    let kv: T = parse("k", k)?;
    let m = Modulus::new(kv)?;
    let big_k = complete_k(m);
    let (phi_v, value) = match phi {
        Some(p) => {
            let p: T = parse("phi", p)?;
            (p, incomplete_f(p, m)?)
        }
        None => (T::FRAC_PI_2(), big_k),
    };
    let residual = (jacobi_am(value, m)? - phi_v).abs();
    Ok(Emitted::json(&EllintOut {
        input: EllintInput { k: kv.render(digits), phi: phi.map(|_| phi_v.render(digits)) },
        value: value.render(digits),
        complete: big_k.render(digits),
        residual: residual.render(digits),
        digits,
    }))
}

enum RotTarget<'a> {
    Lambda(&'a str),
    Omega(&'a str),
}

#[derive(Serialize)]
struct RotnumOut {
    a: String,
    b: String,
    lambda: String,
    omega: String,
    digits: u32,
}

fn rotnum<T: Scalar>(a: &str, b: &str, target: RotTarget, digits: u32) -> Result<Emitted, CliError> {
    let frame = Ellipse::new(parse::<T>("a", a)?, parse::<T>("b", b)?)?;
    let (lambda, omega) = match target {
        RotTarget::Lambda(l) => {
            let l: T = parse("lambda", l)?;
            (l, caustic_rotation_number(&frame, l)?.value)
        }
        RotTarget::Omega(w) => {
            let w: T = parse("omega", w)?;
            (lambda_from_rotation(&frame, &RotationNumber::new(w)?)?, w)
        }
    };
    Ok(Emitted::json(&RotnumOut {
        a: frame.a().render(digits),
        b: frame.b().render(digits),
        lambda: lambda.render(digits),
        omega: omega.render(digits),
        digits,
    }))
}

/// Reads a domain file: either a bare `{frame, mu}` object or any object
/// carrying one under `"domain"` (the output of `fit-ellipse`).
pub fn read_domain(path: &Path) -> Result<PerturbedDomain, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let inner = value.get("domain").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn table_domain(t: &TableArgs) -> Result<PerturbedDomain, CliError> {
    match (&t.domain, t.a, t.b) {
        (Some(p), None, None) => read_domain(p),
        (None, Some(a), Some(b)) => Ok(PerturbedDomain::ellipse(Ellipse::new(a, b)?, ELLIPSE_TABLE_MODES)),
        _ => Err(CliError::Usage("give either --a and --b, or --domain".into())),
    }
}

fn phi_of(frame: &Ellipse<f64>, p: (f64, f64)) -> f64 {
    (p.1 / frame.b()).atan2(p.0 / frame.a())
}

#[derive(Serialize)]
struct Impact {
    step: usize,
    #[serde(with = "caustics::json::num")]
    phi: f64,
    #[serde(with = "caustics::json::num")]
    theta: f64,
    #[serde(with = "caustics::json::num")]
    x: f64,
    #[serde(with = "caustics::json::num")]
    y: f64,
    #[serde(with = "caustics::json::num")]
    tangency_defect: f64,
}

/// Iterates the billiard from the first chord of the closed-form orbit and
/// measures each chord against the frame's caustic.
pub fn caustic_orbit(domain: &PerturbedDomain, lambda: f64, t0: f64, steps: usize) -> Result<Vec<(BoundaryState, [f64; 2], f64)>, CliError> {
    let frame = domain.frame;
    let table = Billiard::new(domain.clone())?;
    let caustic = frame.confocal_caustic(lambda)?;
    let start = ellipse_caustic_orbit(&frame, &CausticOrbitSpec { lambda, t0, count: 1 })?;
    let mut s = table.state_from_chord(phi_of(&frame, start[0]), phi_of(&frame, start[1]));
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = table.step(s)?;
        let (p, q) = (table.point(s.phi), table.point(next.phi));
        out.push((s, p, tangency_defect(&caustic, (p[0], p[1]), (q[0], q[1]))));
        s = next;
    }
    Ok(out)
}

#[derive(Serialize)]
struct OrbitSummary {
    steps: usize,
    /// `max − min` of the tangency defect.
    #[serde(with = "caustics::json::num")]
    oscillation: f64,
    #[serde(with = "caustics::json::num")]
    max_tangency_defect: f64,
}

#[derive(Serialize)]
struct OrbitOut {
    summary: OrbitSummary,
    impacts: Vec<Impact>,
}

fn summary(defects: impl Iterator<Item = f64> + Clone, steps: usize) -> OrbitSummary {
    let (lo, hi) = defects.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), d| (l.min(d), h.max(d)));
    OrbitSummary {
        steps,
        oscillation: if steps == 0 { 0.0 } else { hi - lo },
        max_tangency_defect: defects.fold(0.0, |m, d| m.max(d.abs())),
    }
}

fn orbit(t: &TableArgs, lambda: f64, steps: usize, t0: f64) -> Result<Emitted, CliError> {
    let domain = table_domain(t)?;
    let rows = caustic_orbit(&domain, lambda, t0, steps)?;
    let impacts: Vec<Impact> = rows
        .iter()
        .enumerate()
        .map(|(i, (s, p, d))| Impact { step: i, phi: s.phi, theta: s.theta, x: p[0], y: p[1], tangency_defect: *d })
        .collect();
    let mut csv = String::from("step,phi,theta,x,y,tangency_defect\n");
    for r in &impacts {
        let _ = writeln!(csv, "{},{},{},{},{},{}", r.step, fmt_f64(r.phi), fmt_f64(r.theta), fmt_f64(r.x), fmt_f64(r.y), fmt_f64(r.tangency_defect));
    }
    let summary = summary(impacts.iter().map(|r| r.tangency_defect), steps);
    Ok(Emitted::json(&OrbitOut { summary, impacts }).with_csv(csv))
}

/// Largest per-step deviation of `billiard_step` from the closed-form orbit:
/// each closed-form chord is stepped once and compared with the next one.
pub fn closed_form_deviations(frame: &Ellipse<f64>, lambda: f64, t0: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    let table = Billiard::new(PerturbedDomain::ellipse(*frame, ELLIPSE_TABLE_MODES))?;
    let pts = ellipse_caustic_orbit(frame, &CausticOrbitSpec { lambda, t0, count: steps + 1 })?;
    let states: Vec<BoundaryState> =
        pts.windows(2).map(|w| table.state_from_chord(phi_of(frame, w[0]), phi_of(frame, w[1]))).collect();
    states
        .windows(2)
        .map(|w| {
            let next = table.step(w[0])?;
            let d = wrap_angle(next.phi - w[1].phi);
            Ok(d.min(TAU - d).max((next.theta - w[1].theta).abs()))
        })
        .collect()
}

#[derive(Serialize)]
struct CausticTestOut {
    steps: usize,
    #[serde(with = "caustics::json::num")]
    max_tangency_defect: f64,
    #[serde(with = "caustics::json::num")]
    oscillation: f64,
    #[serde(with = "caustics::json::num")]
    max_closed_form_deviation: f64,
    #[serde(with = "caustics::json::num")]
    tolerance: f64,
    #[serde(with = "caustics::json::num")]
    step_tolerance: f64,
    pass: bool,
}

fn caustic_test(a: f64, b: f64, lambda: f64, steps: usize, t0: f64, tol: f64, step_tol: f64) -> Result<Emitted, CliError> {
    if !(step_tol > 0.0) {
        return invalid("--step-tolerance must be positive");
    }
    let frame = Ellipse::new(a, b)?;
    let rows = caustic_orbit(&PerturbedDomain::ellipse(frame, ELLIPSE_TABLE_MODES), lambda, t0, steps)?;
    let dev = closed_form_deviations(&frame, lambda, t0, steps)?;
    let s = summary(rows.iter().map(|r| r.2), steps);
    let max_dev = dev.iter().fold(0.0f64, |m, &d| m.max(d));
    let mut csv = String::from("step,phi,theta,x,y,tangency_defect,closed_form_deviation\n");
    for (i, (st, p, d)) in rows.iter().enumerate() {
        let cf = dev.get(i).map_or(String::new(), |&v| fmt_f64(v));
        let _ = writeln!(csv, "{i},{},{},{},{},{},{cf}", fmt_f64(st.phi), fmt_f64(st.theta), fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(*d));
    }
    Ok(Emitted::json(&CausticTestOut {
        steps,
        max_tangency_defect: s.max_tangency_defect,
        oscillation: s.oscillation,
        max_closed_form_deviation: max_dev,
        tolerance: tol,
        step_tolerance: step_tol,
        pass: s.max_tangency_defect < tol && max_dev < step_tol,
    })
    .with_csv(csv))
}

#[derive(Serialize)]
struct Vertex {
    #[serde(with = "caustics::json::num")]
    phi: f64,
    #[serde(with = "caustics::json::num")]
    x: f64,
    #[serde(with = "caustics::json::num")]
    y: f64,
}

#[derive(Serialize)]
struct PqgonOut {
    p: u64,
    q: u64,
    #[serde(with = "caustics::json::num")]
    perimeter: f64,
    #[serde(with = "caustics::json::num")]
    residual: f64,
    vertices: Vec<Vertex>,
}

fn pqgon(t: &TableArgs, p: u64, q: u64, start_phi: f64, free_start: bool) -> Result<Emitted, CliError> {
    let table = Billiard::new(table_domain(t)?)?;
    let g = max_pq_gon(&table, p, q, start_phi, free_start)?;
    let vertices: Vec<Vertex> = g
        .phis
        .iter()
        .map(|&phi| {
            let pt = table.point(phi);
            Vertex { phi, x: pt[0], y: pt[1] }
        })
        .collect();
    let mut csv = String::from("index,phi,x,y\n");
    for (i, v) in vertices.iter().enumerate() {
        let _ = writeln!(csv, "{i},{},{},{}", fmt_f64(v.phi), fmt_f64(v.x), fmt_f64(v.y));
    }
    Ok(Emitted::json(&PqgonOut { p, q, perimeter: g.perimeter, residual: g.residual, vertices }).with_csv(csv))
}

#[derive(Serialize)]
struct FittedConstants {
    /// Oscillation ∝ ‖μ‖^exponent, from the last halving.
    #[serde(with = "caustics::json::num")]
    exponent: f64,
    #[serde(with = "caustics::json::num")]
    constant: f64,
    /// Oscillations at μ, μ/2 and μ/4.
    #[serde(with = "caustics::json::num_vec")]
    oscillations: Vec<f64>,
}

#[derive(Serialize)]
struct IntegrabilityOut {
    p: u64,
    q: u64,
    #[serde(with = "caustics::json::num")]
    lambda: f64,
    #[serde(with = "caustics::json::num")]
    oscillation: f64,
    #[serde(with = "caustics::json::num_vec")]
    profile: Vec<f64>,
    fitted_constants: Option<FittedConstants>,
}

/// Exponent and constant of `osc(s·μ) ≈ C·(s‖μ‖)^β` from `s = 1, 1/2, 1/4`.
pub fn fit_scaling(domain: &PerturbedDomain, p: u64, q: u64, grid: usize) -> Result<(f64, f64, Vec<f64>), CliError> {
    let amp = domain.mu.cn_norm(0);
    if amp == 0.0 {
        return invalid("scaling fit needs a nonzero perturbation");
    }
    let osc = [1.0, 0.5, 0.25]
        .iter()
        .map(|&s| {
            let d = PerturbedDomain::new(domain.frame, domain.mu.scale(s))?;
            Ok(integrability_residual(&d, p, q, grid)?.oscillation)
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    let exponent = (osc[1] / osc[2]).log2();
    let constant = osc[2] / (0.25 * amp).powf(exponent);
    Ok((exponent, constant, osc))
}

fn integrability(t: &TableArgs, p: u64, q: u64, fit: bool, grid: usize) -> Result<Emitted, CliError> {
    let domain = table_domain(t)?;
    let r = integrability_residual(&domain, p, q, grid)?;
    let fitted_constants = if fit {
        let (exponent, constant, oscillations) = fit_scaling(&domain, p, q, grid)?;
        Some(FittedConstants { exponent, constant, oscillations })
    } else {
        None
    };
    let mut csv = String::from("theta,value\n");
    for (j, v) in r.profile.iter().enumerate() {
        let theta = std::f64::consts::TAU * j as f64 / grid as f64;
        let _ = writeln!(csv, "{},{}", fmt_f64(theta), fmt_f64(*v));
    }
    Ok(Emitted::json(&IntegrabilityOut { p, q, lambda: r.lambda, oscillation: r.oscillation, profile: r.profile, fitted_constants })
        .with_csv(csv))
}

fn check_order(order: usize) -> Result<(), CliError> {
    if order == 0 || order > MAX_ORDER {
        return invalid(format!("--order must lie in 1..={MAX_ORDER}, got {order}"));
    }
    Ok(())
}

fn num_den(s: String) -> (String, String) {
    match s.split_once('/') {
        Some((n, d)) => (n.to_string(), d.to_string()),
        None => (s, "1".to_string()),
    }
}

#[derive(Serialize)]
pub struct Term {
    pub harm: u32,
    #[serde(rename = "fn")]
    pub func: &'static str,
    pub num: String,
    pub den: String,
}

#[derive(Serialize)]
pub struct PhiOut {
    pub j: usize,
    pub terms: Vec<Term>,
}

#[derive(Serialize)]
struct ExpandOut {
    order: usize,
    phi: Vec<PhiOut>,
}

/// `φ_1..φ_N` as term lists.
pub fn phi_terms(order: usize) -> Result<Vec<PhiOut>, CliError> {
    check_order(order)?;
    let ex = expand_action_angle(order)?;
    Ok((1..=order)
        .map(|j| PhiOut {
            j,
            terms: ex
                .phi(j)
                .terms()
                .map(|(harm, b, c)| {
                    let (num, den) = num_den(rational_string(c));
                    Term { harm, func: b.name(), num, den }
                })
                .collect(),
        })
        .collect())
}

fn expand(order: usize) -> Result<Emitted, CliError> {
    let phi = phi_terms(order)?;
    let mut csv = String::from("j,harm,fn,num,den\n");
    for p in &phi {
        for t in &p.terms {
            let _ = writeln!(csv, "{},{},{},{},{}", p.j, t.harm, t.func, t.num, t.den);
        }
    }
    Ok(Emitted::json(&ExpandOut { order, phi }).with_csv(csv))
}

#[derive(Serialize)]
pub struct XiOut {
    pub j: usize,
    pub l: i64,
    /// Coefficients by ascending power of `k`, as `"num/den"`.
    pub poly: Vec<String>,
}

#[derive(Serialize)]
struct XiTable {
    order: usize,
    xi: Vec<XiOut>,
}

/// Every `ξ_{j,l}` for `j ≤ order`; identically zero entries are omitted.
pub fn xi_entries(order: usize) -> Result<Vec<XiOut>, CliError> {
    check_order(order)?;
    let ex = expand_action_angle(order)?;
    Ok(xi_from(&ex)
        .into_iter()
        .filter(|x| !x.poly.is_empty())
        .map(|x| XiOut { j: x.j, l: x.l, poly: x.poly.iter().map(rational_string).collect() })
        .collect())
}

fn xi(order: usize) -> Result<Emitted, CliError> {
    let xi = xi_entries(order)?;
    let mut csv = String::from("j,l,degree,num,den\n");
    for x in &xi {
        for (d, c) in x.poly.iter().enumerate() {
            let (num, den) = num_den(c.clone());
            let _ = writeln!(csv, "{},{},{d},{num},{den}", x.j, x.l);
        }
    }
    Ok(Emitted::json(&XiTable { order, xi }).with_csv(csv))
}

fn build_matrix(q0: Option<u64>, parity: &str, m: Option<u64>) -> Result<NondegMatrix, CliError> {
    if let Some(id) = parity.strip_prefix("concrete:") {
        let id = ConcreteId::from_str(id)?;
        if q0.is_some_and(|q| q != id.q0()) {
            return invalid(format!("{id} belongs to q0 = {}", id.q0()));
        }
        return Ok(build_concrete_system(id));
    }
    let q0 = q0.ok_or_else(|| CliError::Usage("--q0 is required for odd and even matrices".into()))?;
    let m = m.ok_or_else(|| CliError::Usage("--m is required for odd and even matrices".into()))?;
    match parity {
        "odd" => Ok(build_odd_matrix(q0, m)?),
        "even" => Ok(build_even_matrix(q0, m)?),
        other => invalid(format!("--parity must be odd, even or concrete:ID, got '{other}'")),
    }
}

#[derive(Serialize)]
struct MatrixOut<'a> {
    label: String,
    #[serde(flatten)]
    matrix: &'a NondegMatrix,
    report: MatrixReport,
}

fn matrix(q0: Option<u64>, parity: &str, m: Option<u64>) -> Result<Emitted, CliError> {
    let mat = build_matrix(q0, parity, m)?;
    let report = certify(&mat);
    let mut csv = String::from("row,col,p,q,harmonic,kind,xi,j,w\n");
    for (i, row) in mat.rows.iter().enumerate() {
        let (p, q) = mat.row_labels[i];
        for (c, entry) in row.iter().enumerate() {
            let h = mat.columns[c];
            let tail = match entry {
                SymbolicEntry::Zero => "zero,,,".to_string(),
                SymbolicEntry::One => "one,,,".to_string(),
                SymbolicEntry::Scaled { xi, j, w } => format!("scaled,{},{j},{}/{}", rational_string(xi), w.0, w.1),
            };
            let _ = writeln!(csv, "{i},{c},{p},{q},{h},{tail}");
        }
    }
    Ok(Emitted::json(&MatrixOut { label: mat.label(), matrix: &mat, report }).with_csv(csv))
}

#[derive(Serialize)]
struct VerifyOut {
    #[serde(flatten)]
    certification: Certification,
    count_matches: bool,
    all_pass: bool,
}

fn verify(q0: u64, include_even_m1: bool) -> Result<Emitted, CliError> {
    let c = verify_all(q0, include_even_m1)?;
    let mut csv = String::from("matrix,size,det_order,value,lo,hi,homogeneous,count_identity,status\n");
    for r in &c.reports {
        let ci = r.count_identity.map_or(String::new(), |b| b.to_string());
        let status = if r.status == caustics::nondeg::Status::Pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{ci},{status}",
            r.matrix,
            r.size,
            r.det_order,
            fmt_f64(r.det_coeff.value),
            fmt_f64(r.det_coeff.interval.0),
            fmt_f64(r.det_coeff.interval.1),
            r.homogeneous
        );
    }
    let count = c.reports.iter().filter(|r| !r.matrix.ends_with("_m1")).count();
    let out = VerifyOut { count_matches: count == c.expected_count, all_pass: c.all_pass(), certification: c };
    Ok(Emitted::json(&out).with_csv(csv))
}

#[derive(Serialize)]
struct ModesOut {
    #[serde(with = "caustics::json::num")]
    e: f64,
    q0: u64,
    #[serde(rename = "K")]
    k: u64,
    grid: usize,
    #[serde(flatten)]
    defect: BasisDefect,
}

fn modes(a: f64, e: f64, q0: u64, r: u32, k: u64, cfg: &RunConfig) -> Result<Emitted, CliError> {
    if k > cfg.k_max {
        return invalid(format!("--K {k} exceeds k_max = {}", cfg.k_max));
    }
    let frame = Ellipse::from_eccentricity(a, e)?;
    let basis = DeformedBasis::new(&frame, q0, cfg.grid)?;
    let d = basis_defect_on(&basis, SobolevOrder::new(r)?, k)?;
    let mut csv = String::from("k,c0,hr\n");
    for m in &d.per_k_deviation {
        let _ = writeln!(csv, "{},{},{}", m.k, fmt_f64(m.c0), fmt_f64(m.hr));
    }
    Ok(Emitted::json(&ModesOut { e, q0, k, grid: cfg.grid, defect: d }).with_csv(csv))
}

#[derive(Serialize)]
struct AnnihilateOut {
    q: u64,
    r: u32,
    q0: u64,
    #[serde(flatten)]
    pairing: Annihilation,
}

fn annihilate(path: &Path, q: u64, r: u32, q0: Option<u64>, cfg: &RunConfig) -> Result<Emitted, CliError> {
    let domain = read_domain(path)?;
    if q > cfg.k_max {
        return invalid(format!("--q {q} exceeds k_max = {}", cfg.k_max));
    }
    let q0 = q0.unwrap_or(q.saturating_sub(1));
    if q <= q0 {
        return invalid(format!("--q must exceed q0 = {q0}"));
    }
    let basis = DeformedBasis::new(&domain.frame, q0, cfg.grid)?;
    let pairing = annihilation_on(&basis, &domain, q, SobolevOrder::new(r)?)?;
    Ok(Emitted::json(&AnnihilateOut { q, r, q0, pairing }))
}

#[derive(Serialize)]
struct FitOut {
    seed: u64,
    order: u32,
    #[serde(with = "caustics::json::num")]
    radius: f64,
    placement: Placement,
    #[serde(with = "caustics::json::num")]
    residual_norm: f64,
    #[serde(with = "caustics::json::num")]
    initial_norm: f64,
    #[serde(with = "caustics::json::num")]
    distance: f64,
    boundary_hit: bool,
    /// The same boundary written over the fitted ellipse, in its body frame.
    domain: PerturbedDomain,
}

fn fit_ellipse(path: &Path, order: u32, radius: f64, seed: u64) -> Result<Emitted, CliError> {
    if !(radius > 0.0) {
        return invalid("--radius must be positive");
    }
    let domain = read_domain(path)?;
    let fit = best_fit_ellipse(&domain, order, radius, seed)?;
    let refit = PerturbedDomain::new(fit.placement.ellipse, trim(&fit.residual))?;
    Ok(Emitted::json(&FitOut {
        seed,
        order,
        radius,
        placement: fit.placement,
        residual_norm: fit.residual_norm,
        initial_norm: fit.initial_norm,
        distance: fit.distance,
        boundary_hit: fit.boundary_hit,
        domain: refit,
    }))
}

/// Rounds coefficients below `1e-16` of the largest to zero so the emitted
/// file does not carry quadrature noise.
fn trim(mu: &FourierSeries) -> FourierSeries {
    let top = mu.cos_coeffs.iter().chain(&mu.sin_coeffs).fold(mu.mean.abs(), |m, c| m.max(c.abs()));
    let cut = |c: f64| if c.abs() < 1e-16 * top { 0.0 } else { c };
    FourierSeries {
        mean: cut(mu.mean),
        cos_coeffs: mu.cos_coeffs.iter().map(|&c| cut(c)).collect(),
        sin_coeffs: mu.sin_coeffs.iter().map(|&c| cut(c)).collect(),
    }
}

fn reproduce_cmd(ids: &[u32]) -> Result<Emitted, CliError> {
    let ids: Vec<u32> = if ids.is_empty() { (1..=reproduce::CRITERIA).collect() } else { ids.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > reproduce::CRITERIA) {
        return invalid(format!("--criterion must lie in 1..={}, got {bad}", reproduce::CRITERIA));
    }
    let outcomes = ids.iter().map(|&i| reproduce::run_criterion(i)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("id,status,known_unattainable,title,detail\n");
    for o in &outcomes {
        let _ = writeln!(csv, "{},{},{},\"{}\",\"{}\"", o.id, o.status(), o.known_unattainable, o.title, o.detail.replace('"', "'"));
    }
    #[derive(Serialize)]
    struct Out {
        criteria: Vec<reproduce::Outcome>,
    }
    Ok(Emitted::json(&Out { criteria: outcomes }).with_csv(csv))
}
