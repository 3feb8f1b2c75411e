//! The constants `a_m`: the unique coefficients for which the flow of the
//! vector field `sum_m a_m z^{1-m} d/dz` carries `z` to
//! `(-2 log(1 - 1/(1+z)) - 2/(1+z))^{-1/2}`, expanded at large `z`.
//!
//! Both sides are Laurent series `sum_{k>=0} c_k z^{1-k}`; [`LaurentZ`] stores
//! `c_k` at position `k`.

use std::sync::{Mutex, OnceLock};

use num::{One, Zero};

use super::dense;
use crate::arith::{binomial, int, rat, Rational};
use crate::error::{Error, Result};

/// `sum_k coeffs[k] z^{1-k}`, known for `k < coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentZ {
    pub coeffs: Vec<Rational>,
}

impl LaurentZ {
    /// Coefficient of `z^power`; zero above `z^1`, panics below the known range.
    pub fn coefficient(&self, power: i64) -> Rational {
        if power > 1 {
            return Rational::zero();
        }
        self.coeffs[(1 - power) as usize].clone()
    }

    /// Number of known orders `z^1 .. z^{2-len}`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match 1 - k as i64 {
                0 => c.to_string(),
                1 => format!("{c} * z"),
                p => format!("{c} * z^{p}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Expansion of the right-hand side through `z^{1-m}`.
///
/// With `w = 1/(1+z)` the bracket is `sum_{k>=2} 2 w^k / k = w^2 f(w)`, so the
/// branch with leading term `w^{-1} = 1 + z` is `sum_k g_k w^{k-1}` where
/// `g = f^{-1/2}`. Each `w^j` is re-expanded in `z^{-1}`.
pub fn rhs_target(m: usize) -> LaurentZ {
    let n = m + 1;
    let f: Vec<Rational> = (0..n + 1).map(|k| rat(2, k as i64 + 2)).collect();
    let g = dense::pow(&f, &rat(-1, 2), n + 1);
    let mut coeffs = vec![Rational::zero(); n];
    // g_0 w^{-1} = g_0 (z + 1)
    coeffs[0] += &g[0];
    coeffs[1] += &g[0];
    coeffs[1] += &g[1];
    // g_k w^{k-1} for k >= 2: w^j = sum_i (-1)^i binom(j+i-1, i) z^{-j-i}
    for (k, gk) in g.iter().enumerate().skip(2) {
        let j = k as i64 - 1;
        for i in 0.. {
            let pos = (1 + j + i) as usize;
            if pos >= n {
                break;
            }
            let c = Rational::from_integer(binomial((j + i - 1) as u64, i)) * if i % 2 == 0 { int(1) } else { int(-1) };
            coeffs[pos] += gk * c;
        }
    }
    LaurentZ { coeffs }
}

/// `exp(sum_m a_m z^{1-m} d/dz) z` through `z^{1-n}` (positions `0..=n`).
pub fn flow(a: &[Rational], n: usize) -> LaurentZ {
    let len = n + 1;
    let mut acc = vec![Rational::zero(); len];
    acc[0] = Rational::one();
    let mut term = acc.clone();
    for step in 1..len {
        let mut next = vec![Rational::zero(); len];
        for (k, c) in term.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // z^{1-k} -> (1-k) a_m z^{1-k-m}
            let p = int(1 - k as i64);
            if p.is_zero() {
                continue;
            }
            for (mi, am) in a.iter().enumerate() {
                let target = k + mi + 1;
                if target >= len {
                    break;
                }
                next[target] += c * &p * am;
            }
        }
        if next.iter().all(Zero::is_zero) {
            break;
        }
        let scale = Rational::new(1.into(), (step as i64).into());
        term = next.into_iter().map(|x| x * &scale).collect();
        for (x, y) in acc.iter_mut().zip(&term) {
            *x += y;
        }
    }
    LaurentZ { coeffs: acc }
}

/// `a_1..a_m`, each read off from the order where it first enters linearly,
/// followed by a round-trip check of the whole flow.
pub fn solve_a_coeffs(m: usize) -> Result<Vec<Rational>> {
    let target = rhs_target(m);
    let mut a: Vec<Rational> = Vec::with_capacity(m);
    for k in 1..=m {
        a.push(Rational::zero());
        let partial = flow(&a, k);
        a[k - 1] = &target.coeffs[k] - &partial.coeffs[k];
    }
    let back = flow(&a, m);
    if back.coeffs != target.coeffs[..=m] {
        return Err(Error::RoundTrip(format!("flow {} vs target {}", back.render(), target.render())));
    }
    Ok(a)
}

/// Memoized `a_1..a_m` (grown on demand).
pub fn a_coeffs(m: usize) -> Vec<Rational> {
    static MEMO: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(Vec::new()));
    let mut table = memo.lock().expect("a_m memo poisoned");
    if table.len() < m {
        *table = solve_a_coeffs(m).expect("a_m round trip is an invariant");
    }
    table[..m].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_leading_terms() {
        let t = rhs_target(3);
        assert_eq!(t.coefficient(1), int(1));
        assert_eq!(t.coefficient(0), rat(2, 3));
        assert_eq!(t.coefficient(-1), rat(-1, 12));
        assert_eq!(t.coefficient(-2), rat(11, 270));
    }

    #[test]
    fn first_constants() {
        let a = solve_a_coeffs(3).unwrap();
        assert_eq!(a, vec![rat(2, 3), rat(-1, 12), rat(7, 540)]);
        assert_eq!(a_coeffs(2), vec![rat(2, 3), rat(-1, 12)]);
    }

    #[test]
    fn a3_from_quadratic_correction() {
        // at z^{-2} the only surviving quadratic term is -a_1 a_2 / 2
        let a = solve_a_coeffs(3).unwrap();
        let without = flow(&[a[0].clone(), a[1].clone(), Rational::zero()], 3);
        assert_eq!(without.coefficient(-2), -(&a[0] * &a[1]) / int(2));
    }

    #[test]
    fn round_trip_to_order_minus_ten() {
        let a = solve_a_coeffs(11).unwrap();
        assert_eq!(flow(&a, 11), LaurentZ { coeffs: rhs_target(11).coeffs[..=11].to_vec() });
    }
}
