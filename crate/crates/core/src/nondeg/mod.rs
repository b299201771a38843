//! Non-degeneracy matrices of the Fourier-coefficient recovery scheme:
//! builders, exact leading determinants, interval sign certification and
//! the `e`-order hierarchy of inverse rows.
//!
//! Every scaled entry is `ξ·e^{2j}/cos^{2j}(wπ)` with `j` the distance to
//! the row's unit, so `M(e) = D_row·C·D_col⁻¹` with `D_row = diag(e^{2u_i})`,
//! `D_col = diag(e^{2c})`. Hence `det M = e^{2(Σu_i − Σc)}·det C`, and the
//! entry `(c, i)` of `M⁻¹` has order `2(c − u_i)`.

mod interval;

pub use interval::{cos_pi_fraction, pi, Interval};

use crate::dd::DoubleDouble;
use crate::error::{domain, Error, Result};
use crate::series::{rational_to, xi_diagonal, XiPolynomial};
use num_integer::gcd;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// One matrix entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymbolicEntry {
    Zero,
    One,
    /// `xi·e^{2j}/cos^{2j}(wπ)` with `w = p/q`.
    Scaled {
        #[serde(serialize_with = "crate::json::rational")]
        xi: BigRational,
        j: u32,
        w: (u64, u64),
    },
}

impl SymbolicEntry {
    pub fn eval<T: crate::Real>(&self, e: T) -> T {
        match self {
            Self::Zero => T::zero(),
            Self::One => T::one(),
            Self::Scaled { xi, j, w } => {
                let c = (T::PI() * T::int(w.0 as i64) / T::int(w.1 as i64)).cos();
                rational_to::<T>(xi) * (e / c).powi(2 * *j as i32)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcreteId {
    Q3Odd,
    Q4Odd,
    Q4Even,
    Q5Odd4,
    Q5Odd6,
    Q5Even7,
}

impl ConcreteId {
    pub const ALL: [ConcreteId; 6] = [Self::Q3Odd, Self::Q4Odd, Self::Q4Even, Self::Q5Odd4, Self::Q5Odd6, Self::Q5Even7];

    pub fn name(self) -> &'static str {
        match self {
            Self::Q3Odd => "q3_odd",
            Self::Q4Odd => "q4_odd",
            Self::Q4Even => "q4_even",
            Self::Q5Odd4 => "q5_odd4",
            Self::Q5Odd6 => "q5_odd6",
            Self::Q5Even7 => "q5_even7",
        }
    }

    pub fn q0(self) -> u64 {
        match self {
            Self::Q3Odd => 3,
            Self::Q4Odd | Self::Q4Even => 4,
            _ => 5,
        }
    }

    /// Unknown harmonics and row rotation numbers.
    fn recipe(self) -> (Vec<u64>, Vec<(u64, u64)>) {
        let odd = |lo: u64, hi: u64| (lo..=hi).step_by(2).collect::<Vec<u64>>();
        match self {
            Self::Q3Odd => (odd(3, 7), vec![(1, 5), (1, 7), (2, 7)]),
            Self::Q4Odd => (odd(3, 9), vec![(1, 5), (1, 7), (1, 9), (2, 9)]),
            Self::Q4Even => (odd(4, 14), vec![(1, 6), (1, 8), (1, 10), (1, 12), (1, 14), (3, 14)]),
            Self::Q5Odd4 => (odd(5, 11), vec![(1, 7), (1, 9), (1, 11), (2, 11)]),
            Self::Q5Odd6 => (odd(3, 13), vec![(1, 7), (1, 9), (1, 11), (2, 11), (1, 13), (2, 13)]),
            Self::Q5Even7 => {
                (odd(4, 16), vec![(1, 6), (1, 8), (1, 10), (1, 12), (1, 14), (1, 16), (3, 16)])
            }
        }
    }
}

impl FromStr for ConcreteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown concrete system '{s}'")))
    }
}

impl fmt::Display for ConcreteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    Concrete(ConcreteId),
}

#[derive(Clone, Debug, Serialize)]
pub struct NondegMatrix {
    pub q0: u64,
    pub parity: Parity,
    pub m: u64,
    /// Harmonic index of each unknown `a_h`, ascending.
    pub columns: Vec<u64>,
    pub rows: Vec<Vec<SymbolicEntry>>,
    pub row_labels: Vec<(u64, u64)>,
    /// Rotation numbers dropped because they are not in lowest terms.
    pub skipped_rows: Vec<(u64, u64)>,
}

fn xi_table(max_j: usize) -> Vec<XiPolynomial> {
    xi_diagonal(max_j.max(1))
}

/// Generic row recipe: the `p/q` row has its unit in the column of `a_q`
/// and `ξ_{j,j}(q − 2j)` in the column of `a_{q−2j}`.
fn assemble(columns: Vec<u64>, labels: Vec<(u64, u64)>) -> Result<(Vec<Vec<SymbolicEntry>>, Vec<(u64, u64)>)> {
    assemble_with(&xi_table(columns.len()), columns, labels)
}

fn assemble_with(
    table: &[XiPolynomial],
    columns: Vec<u64>,
    labels: Vec<(u64, u64)>,
) -> Result<(Vec<Vec<SymbolicEntry>>, Vec<(u64, u64)>)> {
    let lookup = |j: usize| table.iter().find(|x| x.j == j && x.l == j as i64);
    let mut rows = Vec::with_capacity(labels.len());
    for &(p, q) in &labels {
        let u = columns
            .iter()
            .position(|&h| h == q)
            .ok_or_else(|| Error::Structural(format!("row {p}/{q} has no unit column a_{q}")))?;
        let row = (0..columns.len())
            .map(|c| {
                if c == u {
                    Ok(SymbolicEntry::One)
                } else if c > u {
                    Ok(SymbolicEntry::Zero)
                } else {
                    let j = u - c;
                    let arg = (q - 2 * j as u64) as i64;
                    debug_assert_eq!(arg as u64, columns[c]);
                    let xi = lookup(j).map(|x| x.eval(arg)).ok_or_else(|| Error::Structural(format!("no xi_{{{j},{j}}}")))?;
                    Ok(SymbolicEntry::Scaled { xi, j: j as u32, w: (p, q) })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((rows, labels))
}

pub fn build_concrete_system(id: ConcreteId) -> NondegMatrix {
    let n = id.recipe().0.len();
    build_concrete_system_with(id, &xi_table(n)).expect("concrete recipes are consistent")
}

/// As [`build_concrete_system`] with a caller-supplied diagonal `ξ_{j,j}` table.
pub fn build_concrete_system_with(id: ConcreteId, table: &[XiPolynomial]) -> Result<NondegMatrix> {
    let (columns, labels) = id.recipe();
    let (rows, row_labels) = assemble_with(table, columns.clone(), labels)?;
    Ok(NondegMatrix { q0: id.q0(), parity: Parity::Concrete(id), m: columns[0] / 2, columns, rows, row_labels, skipped_rows: Vec::new() })
}

fn check_q0(q0: u64) -> Result<u64> {
    if q0 < 4 || !q0.is_multiple_of(2) {
        return domain(format!("q0 must be even and at least 4, got {q0}"));
    }
    Ok(q0 / 2)
}

/// Odd-mode matrix: rows `1/(2k+1)` for `k = k0..=3k0−m` and `2/(2k+1)`
/// for `k = 2k0..=3k0−m`; unknowns `a_{2m−1}, …, a_{2(3k0−m)+1}`.
pub fn build_odd_matrix(q0: u64, m: u64) -> Result<NondegMatrix> {
    let k0 = check_q0(q0)?;
    if !(2..=k0).contains(&m) {
        return domain(format!("odd matrices need 2 <= m <= {k0}, got {m}"));
    }
    let columns: Vec<u64> = (m - 1..=3 * k0 - m).map(|k| 2 * k + 1).collect();
    let mut labels: Vec<(u64, u64)> = (k0..2 * k0).map(|k| (1, 2 * k + 1)).collect();
    for k in 2 * k0..=3 * k0 - m {
        labels.push((1, 2 * k + 1));
        labels.push((2, 2 * k + 1));
    }
    let (rows, row_labels) = assemble(columns.clone(), labels)?;
    Ok(NondegMatrix { q0, parity: Parity::Odd, m, columns, rows, row_labels, skipped_rows: Vec::new() })
}

/// `N_m = 3k0 + 3⌊(k0−m)/2⌋ + ν` with `ν = 1` for even `k0 − m`, else 2.
pub fn even_n(k0: u64, m: u64) -> u64 {
    3 * k0 + 3 * ((k0 - m) / 2) + if (k0 - m).is_multiple_of(2) { 1 } else { 2 }
}

/// Even-mode matrix: rows `1/(2k)` for `k = k0+1..=N_m` and `3/(2k)` for
/// `k = 3k0+1..=N_m` when `3 ∤ 2k`; unknowns `a_{2m}, …, a_{2N_m}`.
pub fn build_even_matrix(q0: u64, m: u64) -> Result<NondegMatrix> {
    let k0 = check_q0(q0)?;
    if !(1..=k0).contains(&m) {
        return domain(format!("even matrices need 1 <= m <= {k0}, got {m}"));
    }
    let n = even_n(k0, m);
    let columns: Vec<u64> = (m..=n).map(|k| 2 * k).collect();
    let mut labels: Vec<(u64, u64)> = (k0 + 1..=3 * k0).map(|k| (1, 2 * k)).collect();
    let mut skipped = Vec::new();
    for k in 3 * k0 + 1..=n {
        labels.push((1, 2 * k));
        if gcd(3, 2 * k) == 1 {
            labels.push((3, 2 * k));
        } else {
            skipped.push((3, 2 * k));
        }
    }
    let (rows, row_labels) = assemble(columns.clone(), labels)?;
    if rows.len() != columns.len() {
        return Err(Error::Structural(format!("{} equations for {} unknowns", rows.len(), columns.len())));
    }
    Ok(NondegMatrix { q0, parity: Parity::Even, m, columns, rows, row_labels, skipped_rows: skipped })
}

/// The count identity `2⌊N_m/3⌋ = 3k0 − m + 1 − α_m`, `α_m = N_m mod 3`.
pub fn even_count_identity(k0: u64, m: u64) -> bool {
    let n = even_n(k0, m);
    2 * (n / 3) + n % 3 == 3 * k0 - m + 1
}

impl NondegMatrix {
    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn label(&self) -> String {
        match self.parity {
            Parity::Concrete(id) => id.name().to_string(),
            Parity::Odd => format!("odd_q{}_m{}", self.q0, self.m),
            Parity::Even => format!("even_q{}_m{}", self.q0, self.m),
        }
    }

    /// Column of the unit in each row.
    pub fn units(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|x| *x == SymbolicEntry::One).unwrap_or(usize::MAX)).collect()
    }

    /// Square shape, one unit per row, zeros right of it, and scaled
    /// entries of degree equal to their distance from the unit.
    pub fn check_structure(&self) -> Result<()> {
        let n = self.size();
        if self.rows.len() != n || self.rows.iter().any(|r| r.len() != n) {
            return Err(Error::Structural(format!("{} is not square", self.label())));
        }
        for (i, row) in self.rows.iter().enumerate() {
            let units: Vec<usize> = (0..n).filter(|&c| row[c] == SymbolicEntry::One).collect();
            if units.len() != 1 {
                return Err(Error::Structural(format!("row {i} has {} unit entries", units.len())));
            }
            let u = units[0];
            for (c, x) in row.iter().enumerate() {
                let ok = match x {
                    SymbolicEntry::Zero => true,
                    SymbolicEntry::One => c == u,
                    SymbolicEntry::Scaled { j, .. } => c < u && *j as usize == u - c,
                };
                if !ok {
                    return Err(Error::Structural(format!("row {i}, column {c} breaks the e-grading")));
                }
            }
        }
        Ok(())
    }

    /// `2(Σ u_i − Σ c)`.
    pub fn det_order(&self) -> i64 {
        let n = self.size() as i64;
        2 * (self.units().iter().map(|&u| u as i64).sum::<i64>() - n * (n - 1) / 2)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        self.rows.swap(i, j);
        self.row_labels.swap(i, j);
    }

    /// `M(e)` evaluated in floating point.
    pub fn eval<T: crate::Real>(&self, e: T) -> Vec<Vec<T>> {
        self.rows.iter().map(|r| r.iter().map(|x| x.eval(e)).collect()).collect()
    }
}

/// Enclosures of `C` (the matrix with every `e^{2j}` dropped).
struct Enclosed {
    mid: Vec<Vec<BigRational>>,
    radius: Vec<Vec<BigRational>>,
}

fn enclose(mat: &NondegMatrix) -> Enclosed {
    let mut cos_cache: HashMap<(u64, u64), Interval> = HashMap::new();
    let n = mat.size();
    let mut mid = vec![vec![BigRational::zero(); n]; n];
    let mut radius = vec![vec![BigRational::zero(); n]; n];
    for (i, row) in mat.rows.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            match x {
                SymbolicEntry::Zero => {}
                SymbolicEntry::One => mid[i][c] = BigRational::one(),
                SymbolicEntry::Scaled { xi, j, w } => {
                    let cw = cos_cache.entry(*w).or_insert_with(|| cos_pi_fraction(w.0, w.1)).clone();
                    let v = cw.powi(2 * j).recip().expect("cos(wπ) > 0 for w < 1/2");
                    let v = v.mul(&Interval::from_rational(xi));
                    mid[i][c] = v.mid();
                    radius[i][c] = v.radius();
                }
            }
        }
    }
    Enclosed { mid, radius }
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn det_exact(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Exact inverse by Gauss–Jordan; `None` when singular.
pub fn inverse_exact(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let piv = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn det_dd(mut a: Vec<Vec<DoubleDouble>>) -> DoubleDouble {
    let n = a.len();
    let mut det = DoubleDouble::from(1.0);
    for col in 0..n {
        let p = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        if a[p][col] == DoubleDouble::from(0.0) {
            return DoubleDouble::from(0.0);
        }
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col];
        det *= piv;
        for r in col + 1..n {
            let f = a[r][col] / piv;
            for c in col..n {
                let t = f * a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Upper bound on the Euclidean norm of a rational row.
fn norm_upper(row: &[BigRational]) -> f64 {
    let s: f64 = row
        .iter()
        .map(|x| {
            let v = x.abs().to_f64().unwrap_or(f64::INFINITY).next_up();
            (v * v).next_up()
        })
        .fold(0.0, |a, b| (a + b).next_up());
    s.sqrt().next_up() * (1.0 + 4.0 * f64::EPSILON)
}

/// Leading determinant `det M = coefficient·e^{order}`.
#[derive(Clone, Debug, Serialize)]
pub struct DetLeading {
    pub order: i64,
    /// Double-double elimination on `C`.
    #[serde(serialize_with = "crate::json::dd")]
    pub coefficient: DoubleDouble,
    /// Exact determinant of the rational midpoint of the enclosure of `C`.
    #[serde(serialize_with = "crate::json::rational")]
    pub midpoint: BigRational,
    /// Certified enclosure `[lo, hi]` of the true coefficient.
    #[serde(serialize_with = "crate::json::pair")]
    pub interval: (f64, f64),
    /// `+1`/`−1` when the enclosure excludes zero.
    pub certified_sign: Option<i8>,
    /// `det M(e) = e^{order}·det C` checked exactly at `e = 1/2, 1/3`.
    pub homogeneous: bool,
}

impl DetLeading {
    pub fn value(&self) -> f64 {
        self.coefficient.hi()
    }
}

fn scaled_matrix(mid: &[Vec<BigRational>], mat: &NondegMatrix, e: &BigRational) -> Vec<Vec<BigRational>> {
    let e2 = e * e;
    mat.rows
        .iter()
        .zip(mid)
        .map(|(row, mrow)| {
            row.iter()
                .zip(mrow)
                .map(|(x, v)| match x {
                    SymbolicEntry::Scaled { j, .. } => v * num_traits::pow(e2.clone(), *j as usize),
                    _ => v.clone(),
                })
                .collect()
        })
        .collect()
}

pub fn det_leading(mat: &NondegMatrix) -> Result<DetLeading> {
    mat.check_structure()?;
    let order = mat.det_order();
    let enc = enclose(mat);
    let midpoint = det_exact(enc.mid.clone());

    // det(Ĉ + E) − det(Ĉ) telescopes into one term per row, each bounded
    // by Hadamard: |ΔD| ≤ Σ_i ρ_i Π_{k≠i} (‖ĉ_k‖ + ρ_k)
    let a: Vec<f64> = enc.mid.iter().map(|r| norm_upper(r)).collect();
    let rho: Vec<f64> = enc.radius.iter().map(|r| norm_upper(r)).collect();
    let mut bound = 0.0f64;
    for i in 0..a.len() {
        let mut t = rho[i];
        for k in (0..a.len()).filter(|&k| k != i) {
            t = (t * (a[k] + rho[k]).next_up()).next_up();
        }
        bound = (bound + t).next_up();
    }
    let bound_q = BigRational::from_float(bound).unwrap_or_else(|| BigRational::from_integer(1.into()));
    let certified_sign = if midpoint.abs() > bound_q {
        Some(if midpoint.is_positive() { 1 } else { -1 })
    } else {
        None
    };
    let mid_f = midpoint.to_f64().unwrap_or(f64::NAN);
    let slack = mid_f.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
    let interval = ((mid_f - slack - bound).next_down(), (mid_f + slack + bound).next_up());

    let c_dd: Vec<Vec<DoubleDouble>> = mat
        .rows
        .iter()
        .map(|r| r.iter().map(|x| x.eval(DoubleDouble::from(1.0))).collect())
        .collect();
    let coefficient = det_dd(c_dd);

    let homogeneous = [(1i64, 2i64), (1, 3)].iter().all(|&(p, q)| {
        let e = BigRational::new(p.into(), q.into());
        let full = det_exact(scaled_matrix(&enc.mid, mat, &e));
        let pow = if order >= 0 {
            num_traits::pow(e.clone(), order as usize)
        } else {
            num_traits::pow(e.recip(), (-order) as usize)
        };
        full == &midpoint * pow
    });
    if !homogeneous {
        return Err(Error::Structural(format!("{}: determinant terms have mixed e-orders", mat.label())));
    }
    Ok(DetLeading { order, coefficient, midpoint, interval, certified_sign, homogeneous })
}

/// `2(c − u_i)` unless the corresponding entry of `C⁻¹` vanishes (`None`).
///
/// The orders are cross-checked against exponents measured from `M(e)⁻¹` at
/// `e = 10⁻²` and `10⁻³` (tolerance 0.15); a disagreement is a structural error.
pub fn inverse_row_orders(mat: &NondegMatrix, rows: &[usize]) -> Result<Vec<Vec<Option<i64>>>> {
    mat.check_structure()?;
    if let Some(&c) = rows.iter().find(|&&c| c >= mat.size()) {
        return domain(format!("row {c} out of range for size {}", mat.size()));
    }
    let enc = enclose(mat);
    let inv = inverse_exact(&enc.mid).ok_or_else(|| Error::Singular(format!("{} has zero leading determinant", mat.label())))?;
    let units = mat.units();
    let orders: Vec<Vec<Option<i64>>> = rows
        .iter()
        .map(|&c| {
            units
                .iter()
                .enumerate()
                .map(|(i, &u)| (!inv[c][i].is_zero()).then_some(2 * (c as i64 - u as i64)))
                .collect()
        })
        .collect();
    let ten = |k: i64| BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), k as usize));
    let measured = inverse_row_exponents(mat, rows, &ten(2), &ten(3))?;
    for (r, (o, m)) in orders.iter().zip(&measured).enumerate() {
        for (i, (o, m)) in o.iter().zip(m).enumerate() {
            if let Some(o) = o {
                if (*o as f64 - m).abs() > 0.15 {
                    return Err(Error::Structural(format!(
                        "{}: inverse entry ({}, {i}) has order {o} but measured exponent {m:.3}",
                        mat.label(),
                        rows[r]
                    )));
                }
            }
        }
    }
    Ok(orders)
}

/// Measured exponents `log₁₀(|x(e₁)|/|x(e₂)|)/log₁₀(e₁/e₂)` of the requested
/// inverse rows, from exact inverses of `M(e)` with the rational midpoint
/// entries.
pub fn inverse_row_exponents(mat: &NondegMatrix, rows: &[usize], e1: &BigRational, e2: &BigRational) -> Result<Vec<Vec<f64>>> {
    let enc = enclose(mat);
    let inv_at = |e: &BigRational| {
        inverse_exact(&scaled_matrix(&enc.mid, mat, e)).ok_or_else(|| Error::Singular(format!("{} is singular", mat.label())))
    };
    let (i1, i2) = (inv_at(e1)?, inv_at(e2)?);
    let log_ratio = |a: &BigRational, b: &BigRational| -> f64 {
        let r = (a / b).abs();
        let (n, d) = (r.numer(), r.denom());
        let bits = |x: &num_bigint::BigInt| x.bits() as f64;
        // log of a big ratio without overflow
        let shift = (bits(n) - 60.0).max(0.0) as u32;
        let dshift = (bits(d) - 60.0).max(0.0) as u32;
        let nf = (n >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2;
        let df = (d >> dshift).to_f64().unwrap_or(f64::NAN).ln() + dshift as f64 * std::f64::consts::LN_2;
        nf - df
    };
    let scale = log_ratio(e1, e2);
    Ok(rows
        .iter()
        .map(|&c| (0..mat.size()).map(|i| log_ratio(&i1[c][i], &i2[c][i]) / scale).collect())
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixReport {
    pub matrix: String,
    pub size: usize,
    pub det_order: i64,
    pub det_coeff: DetCoeff,
    pub homogeneous: bool,
    /// Only for even matrices.
    pub count_identity: Option<bool>,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DetCoeff {
    #[serde(with = "crate::json::num")]
    pub value: f64,
    #[serde(serialize_with = "crate::json::pair")]
    pub interval: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub q0: u64,
    pub reports: Vec<MatrixReport>,
    /// Matrices the scheme needs: `q0 − 2` for even `q0 ≥ 4`.
    pub expected_count: usize,
}

impl Certification {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.status == Status::Pass)
    }
}

/// Determinant order, certified coefficient and status for one matrix.
pub fn certify(mat: &NondegMatrix) -> MatrixReport {
    let count_identity = (mat.parity == Parity::Even).then(|| even_count_identity(mat.q0 / 2, mat.m));
    match det_leading(mat) {
        Ok(d) => MatrixReport {
            matrix: mat.label(),
            size: mat.size(),
            det_order: d.order,
            det_coeff: DetCoeff { value: d.value(), interval: d.interval },
            homogeneous: d.homogeneous,
            count_identity,
            status: if d.certified_sign.is_some() && count_identity != Some(false) { Status::Pass } else { Status::Fail },
        },
        Err(_) => MatrixReport {
            matrix: mat.label(),
            size: mat.size(),
            det_order: mat.det_order(),
            det_coeff: DetCoeff { value: f64::NAN, interval: (f64::NAN, f64::NAN) },
            homogeneous: false,
            count_identity,
            status: Status::Fail,
        },
    }
}

/// Builds and certifies every matrix for `q0`: the printed systems for
/// `q0 ∈ {3, 4, 5}`, otherwise odd `m = 2..=k0` and even `m = 2..=k0`
/// (plus even `m = 1` with `include_even_m1`).
pub fn verify_all(q0: u64, include_even_m1: bool) -> Result<Certification> {
    let mats: Vec<NondegMatrix> = match q0 {
        3..=5 => ConcreteId::ALL.into_iter().filter(|c| c.q0() == q0).map(build_concrete_system).collect(),
        _ => {
            let k0 = check_q0(q0)?;
            let mut v = Vec::new();
            for m in 2..=k0 {
                v.push(build_odd_matrix(q0, m)?);
            }
            for m in (if include_even_m1 { 1 } else { 2 })..=k0 {
                v.push(build_even_matrix(q0, m)?);
            }
            v
        }
    };
    let reports = mats.par_iter().map(certify).collect();
    let expected_count = if q0.is_multiple_of(2) { (q0 - 2) as usize } else { mats.len() };
    Ok(Certification { q0, reports, expected_count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_det_and_inverse() {
        let r = |n: i64| BigRational::from_integer(n.into());
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        assert_eq!(det_exact(a.clone()), r(5));
        let inv = inverse_exact(&a).unwrap();
        assert_eq!(inv[0][0], BigRational::new(3.into(), 5.into()));
        assert_eq!(inv[0][1], BigRational::new((-1).into(), 5.into()));
    }

    #[test]
    fn count_identity_holds() {
        for k0 in 2..12 {
            for m in 1..=k0 {
                assert!(even_count_identity(k0, m), "k0 = {k0}, m = {m}");
            }
        }
    }
}
