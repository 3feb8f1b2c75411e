//! Dense univariate power series truncated at a fixed length. Used by the
//! scalar constants, where everything is a series in one variable.

use num::{One, Zero};

use crate::arith::{int, Rational};

/// Coefficients `c[0..n]` of `sum c_k w^k`.
pub type Dense = Vec<Rational>;

pub fn zeros(n: usize) -> Dense {
    vec![Rational::zero(); n]
}

pub fn mul(a: &[Rational], b: &[Rational], n: usize) -> Dense {
    let mut out = zeros(n);
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `exp(f)` with `f[0] = 0`, from `k g_k = sum_{j=1}^k j f_j g_{k-j}`.
pub fn exp(f: &[Rational], n: usize) -> Dense {
    assert!(f.first().is_none_or(Zero::is_zero), "exp needs zero constant term");
    let mut g = zeros(n);
    if n == 0 {
        return g;
    }
    g[0] = Rational::one();
    for k in 1..n {
        let mut s = Rational::zero();
        for j in 1..=k.min(f.len().saturating_sub(1)) {
            s += int(j as i64) * &f[j] * &g[k - j];
        }
        g[k] = s / int(k as i64);
    }
    g
}

/// `f^alpha` with `f[0] = 1`, by the recurrence
/// `k g_k = sum_{j=1}^k ((alpha + 1) j - k) f_j g_{k-j}`.
pub fn pow(f: &[Rational], alpha: &Rational, n: usize) -> Dense {
    assert!(f.first().is_some_and(One::is_one), "pow needs constant term 1");
    let mut g = zeros(n);
    if n == 0 {
        return g;
    }
    g[0] = Rational::one();
    for k in 1..n {
        let mut s = Rational::zero();
        for j in 1..=k.min(f.len() - 1) {
            s += ((alpha + int(1)) * int(j as i64) - int(k as i64)) * &f[j] * &g[k - j];
        }
        g[k] = s / int(k as i64);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn exp_of_w_is_inverse_factorials() {
        let g = exp(&[int(0), int(1)], 6);
        assert_eq!(g[5], rat(1, 120));
    }

    #[test]
    fn square_root_squares_back() {
        let f = vec![int(1), rat(2, 3), rat(1, 2), rat(2, 5)];
        let r = pow(&f, &rat(1, 2), 8);
        let sq = mul(&r, &r, 8);
        assert_eq!(&sq[..4], &f[..]);
        assert!(sq[4..].iter().all(Zero::is_zero));
        let inv = pow(&f, &int(-1), 8);
        assert_eq!(mul(&inv, &f, 8), {
            let mut e = zeros(8);
            e[0] = int(1);
            e
        });
    }
}
