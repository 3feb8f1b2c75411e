//! Exact scalars and the combinatorial constants used throughout the engine.
//!
//! Every coefficient in the system is a [`Rational`]: an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator.

use std::sync::{Mutex, OnceLock};

use num::{BigInt, BigRational, One, Zero};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Arbitrary-precision integer.
pub type Integer = BigInt;

/// Shorthand for the rational `num / den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The rational integer `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Renders a rational the way reports carry it: `"p/q"`, or plain `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` for the generating function `x/(e^x - 1)`, so `B_1 = -1/2`.
///
/// Computed from `sum_{j=0}^{m} binom(m+1, j) B_j = 0` and memoized.
pub fn bernoulli(m: usize) -> Rational {
    let mut table = bernoulli_table().lock().expect("bernoulli table poisoned");
    while table.len() <= m {
        let n = table.len();
        // B_n = -1/(n+1) * sum_{j<n} binom(n+1, j) B_j
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += Rational::from_integer(binomial(n as u64 + 1, j as i64)) * b;
        }
        let next = -acc / int(n as i64 + 1);
        table.push(next);
    }
    table[m].clone()
}

/// `(2k-1)!!` with the convention `(-1)!! = 1`.
pub fn double_factorial_odd(k: u64) -> Integer {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(2 * j - 1))
}

/// Binomial coefficient; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: u32, k: u32) -> Integer {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// `-B_{2l} / (2l (2l-1))`, the value each `omega_l` takes in the Hodge specialisations.
pub fn hodge_omega_value(l: u32) -> Rational {
    let two_l = 2 * l as i64;
    -bernoulli(2 * l as usize) / int(two_l * (two_l - 1))
}

/// `(-1)^n` as a rational.
pub fn sign(n: i64) -> Rational {
    if n.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;
    use proptest::prelude::*;

    /// Coefficients of x/(e^x - 1) by long division of 1 by (e^x-1)/x.
    fn bernoulli_by_long_division(order: usize) -> Vec<Rational> {
        // (e^x - 1)/x = sum_k x^k / (k+1)!
        let d: Vec<Rational> = (0..=order)
            .map(|k| Rational::new(BigInt::one(), factorial(k as u64 + 1)))
            .collect();
        let mut q = vec![Rational::zero(); order + 1];
        for n in 0..=order {
            let mut acc = if n == 0 { Rational::one() } else { Rational::zero() };
            for k in 1..=n {
                acc -= &d[k] * &q[n - k];
            }
            q[n] = acc / &d[0];
        }
        // q_m = B_m / m!
        q.into_iter()
            .enumerate()
            .map(|(m, c)| c * Rational::from_integer(factorial(m as u64)))
            .collect()
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
    }

    #[test]
    fn bernoulli_matches_long_division_oracle() {
        let oracle = bernoulli_by_long_division(24);
        for (m, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli(m), b, "B_{m}");
        }
    }

    #[test]
    fn bernoulli_recurrence_and_odd_vanishing() {
        for m in 1..=40usize {
            let s: Rational = (0..=m)
                .map(|j| Rational::from_integer(binomial(m as u64 + 1, j as i64)) * bernoulli(j))
                .sum();
            assert!(s.is_zero(), "recurrence fails at m={m}");
        }
        for l in 1..=20usize {
            assert!(bernoulli(2 * l + 1).is_zero());
        }
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(0), BigInt::from(1));
        assert_eq!(double_factorial_odd(1), BigInt::from(1));
        assert_eq!(double_factorial_odd(3), BigInt::from(15));
        assert_eq!(double_factorial_odd(5), BigInt::from(945));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(3, -1), BigInt::from(0));
        assert_eq!(binomial(30, 15), BigInt::from(155_117_520u64));
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(format_rational(&rat(-139, 51840)), "-139/51840");
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(parse_rational("-139/51840"), Some(rat(-139, 51840)));
        assert_eq!(parse_rational(" 4/2 "), Some(int(2)));
        assert_eq!(parse_rational("1/0"), None);
    }

    proptest! {
        #[test]
        fn reciprocal_round_trip(p in prop_oneof![-10_000i64..-1, 1i64..10_000],
                                 q in prop_oneof![-10_000i64..-1, 1i64..10_000]) {
            let a = rat(p, q);
            let b = rat(q, p);
            prop_assert_eq!(a * b, int(1));
        }

        #[test]
        fn lowest_terms_positive_denominator(p in -1000i64..1000, q in prop_oneof![-1000i64..-1, 1i64..1000]) {
            let r = rat(p, q);
            prop_assert!(r.denom().is_positive());
            prop_assert!(num::Integer::gcd(r.numer(), r.denom()) == BigInt::one() || r.is_zero());
        }
    }
}
