use super::expand::XiPolynomial;
use super::trig::rat;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Series = Vec<BigRational>;

fn mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `exp(a)` for `a(0) = 0`.
fn exp(a: &Series, n: usize) -> Series {
    let mut e = vec![BigRational::zero(); n + 1];
    e[0] = BigRational::one();
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for k in 1..=m.min(a.len() - 1) {
            acc += BigRational::from_integer(k.into()) * &a[k] * &e[m - k];
        }
        e[m] = acc / BigRational::from_integer(m.into());
    }
    e
}

/// `sqrt(1 + b)` for `b(0) = 0`.
fn sqrt1p(b: &Series, n: usize) -> Series {
    let mut s = vec![BigRational::zero(); n + 1];
    s[0] = BigRational::one();
    for m in 1..=n {
        let mut acc = b.get(m).cloned().unwrap_or_else(BigRational::zero);
        for k in 1..m {
            acc -= &s[k] * &s[m - k];
        }
        s[m] = acc / BigRational::from_integer(2.into());
    }
    s
}

/// The diagonal coefficients `ξ_{j,j}(k)`, `1 ≤ j ≤ n`, for any `n`.
///
/// Only top harmonics survive the limit `m → 0` with `z = m·e^{2iθ}` fixed.
/// There the amplitude becomes `φ = θ − iχ(z)` with
/// `1 + 2zχ′ = √(1 + (z/4)e^{2χ})`, and `cos kφ` contributes
/// `ξ_{j,j}(k) = [z^j] e^{kχ(z)}`.
pub fn xi_diagonal(n: usize) -> Vec<XiPolynomial> {
    let mut chi: Series = vec![BigRational::zero(); n + 1];
    for j in 1..=n {
        let e2 = exp(&chi.iter().map(|c| c * BigRational::from_integer(2.into())).collect(), j);
        let mut arg = vec![BigRational::zero(); j + 1];
        for i in 0..j {
            arg[i + 1] = &e2[i] * rat(1, 4);
        }
        let f = sqrt1p(&arg, j);
        chi[j] = &f[j] / BigRational::from_integer((2 * j).into());
    }
    // powers χ^r / r!
    let mut out = Vec::with_capacity(n);
    let mut powers: Vec<Series> = vec![{
        let mut one = vec![BigRational::zero(); n + 1];
        one[0] = BigRational::one();
        one
    }];
    for r in 1..=n {
        let next = mul(&powers[r - 1], &chi, n)
            .into_iter()
            .map(|c| c / BigRational::from_integer(r.into()))
            .collect();
        powers.push(next);
    }
    for j in 1..=n {
        let poly: Vec<BigRational> = (0..=j).map(|r| powers[r][j].clone()).collect();
        out.push(XiPolynomial { j, l: j as i64, poly });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        let t = xi_diagonal(3);
        assert_eq!(t[0].poly, vec![rat(0, 1), rat(1, 16)]);
        assert_eq!(t[1].poly, vec![rat(0, 1), rat(1, 512), rat(1, 512)]);
    }
}
