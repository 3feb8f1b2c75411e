//! Point-target descendant integrals `<tau_{k_1} ... tau_{k_n}>_g` from the
//! DVV recursion, and the partition function built from them.
//!
//! Normalisation: `<tau_0^3>_0 = 1` and `<tau_1>_1 = 1/24`. The second is the
//! constant term of the `L_0` constraint, which the recursion alone cannot
//! reach.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::Zero;
use serde::Serialize;

use crate::arith::{double_factorial_odd, factorial, format_rational, int, rat, Rational};
use crate::error::Result;
use crate::series::{Monomial, ParamId, Series, Truncation, VarId};

/// `(g, k_1 <= ... <= k_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelatorKey {
    pub genus: u32,
    pub insertions: Vec<u32>,
}

impl CorrelatorKey {
    pub fn new(genus: u32, mut insertions: Vec<u32>) -> Self {
        insertions.sort_unstable();
        CorrelatorKey { genus, insertions }
    }

    /// `sum k_i == 3g - 3 + n`.
    pub fn is_dimensional(&self) -> bool {
        let sum: i64 = self.insertions.iter().map(|&k| k as i64).sum();
        sum == 3 * self.genus as i64 - 3 + self.insertions.len() as i64
    }

    pub fn is_stable(&self) -> bool {
        2 * self.genus as i64 - 2 + self.insertions.len() as i64 > 0
    }
}

fn df(k: i64) -> Rational {
    // (2k - 1)!! with (-1)!! = 1
    Rational::from_integer(double_factorial_odd(k.max(0) as u64))
}

fn memo() -> &'static Mutex<HashMap<CorrelatorKey, Rational>> {
    static MEMO: OnceLock<Mutex<HashMap<CorrelatorKey, Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `<tau_{k_1} ... tau_{k_n}>_g`; zero off the dimension constraint.
pub fn intersection(key: &CorrelatorKey) -> Rational {
    if !key.is_stable() || !key.is_dimensional() {
        return Rational::zero();
    }
    if let Some(v) = memo().lock().expect("memo poisoned").get(key) {
        return v.clone();
    }
    let v = compute(key);
    memo().lock().expect("memo poisoned").insert(key.clone(), v.clone());
    v
}

pub fn correlator(genus: u32, insertions: &[u32]) -> Rational {
    intersection(&CorrelatorKey::new(genus, insertions.to_vec()))
}

fn compute(key: &CorrelatorKey) -> Rational {
    let g = key.genus;
    if g == 0 && key.insertions == [0, 0, 0] {
        return int(1);
    }
    if g == 1 && key.insertions == [1] {
        return rat(1, 24);
    }
    // DVV on the largest insertion tau_{k+1}
    let mut rest = key.insertions.clone();
    let top = rest.pop().expect("stable keys are nonempty") as i64;
    let k = top - 1;
    let mut total = Rational::zero();

    for j in 0..rest.len() {
        let kj = rest[j] as i64;
        let mut others = rest.clone();
        others.remove(j);
        others.push((k + kj) as u32);
        total += df(k + kj + 1) / df(kj) * correlator(g, &others);
    }

    let mut quad = Rational::zero();
    for r in 0..k.max(0) {
        let s = k - 1 - r;
        let w = df(r + 1) * df(s + 1);
        if g >= 1 {
            let mut ins = rest.clone();
            ins.push(r as u32);
            ins.push(s as u32);
            quad += &w * correlator(g - 1, &ins);
        }
        let n = rest.len();
        for mask in 0u64..(1 << n) {
            let (mut left, mut right) = (vec![r as u32], vec![s as u32]);
            for (i, &x) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            for g1 in 0..=g {
                let a = correlator(g1, &left);
                if a.is_zero() {
                    continue;
                }
                quad += &w * &a * correlator(g - g1, &right);
            }
        }
    }
    total += quad / int(2);
    total / df(k + 2)
}

/// Every dimensional multiset of insertions at genus `g` with `n` points and
/// all `k_i <= max_index`.
pub fn keys(g: u32, n: usize, max_index: u32) -> Vec<CorrelatorKey> {
    let target = 3 * g as i64 - 3 + n as i64;
    if target < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    fn rec(n: usize, min: u32, rest: i64, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in min..=max.min(rest.max(0) as u32) {
            if (k as i64) * n as i64 > rest {
                break;
            }
            cur.push(k);
            rec(n - 1, k, rest - k as i64, max, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, 0, target, max_index, &mut Vec::new(), &mut raw);
    for ins in raw {
        let key = CorrelatorKey::new(g, ins);
        if key.is_stable() {
            out.push(key);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub g: u32,
    pub k: Vec<u32>,
    pub value: String,
}

/// Nonzero values with `g <= max_genus`, `n <= max_points`, `k_i <= max_index`.
pub fn table(max_genus: u32, max_points: usize, max_index: u32) -> Vec<TableEntry> {
    let mut out = Vec::new();
    for g in 0..=max_genus {
        for n in 1..=max_points {
            for key in keys(g, n, max_index) {
                let v = intersection(&key);
                if !v.is_zero() {
                    out.push(TableEntry { g, k: key.insertions, value: format_rational(&v) });
                }
            }
        }
    }
    out
}

/// `F_g = sum <prod tau_{k_i}>_g prod t_{k_i} / |Aut|`, truncated by `trunc`
/// (only the `t`-degree and index bounds matter).
pub fn free_energy(g: u32, trunc: Truncation) -> Series {
    let mut out = Series::zero(trunc);
    assert!(trunc.max_t_degree != crate::series::UNBOUNDED, "F_g needs a bounded t-degree");
    let max_n = trunc.max_t_degree as usize;
    for n in 1..=max_n {
        for key in keys(g, n, trunc.max_var_index) {
            let v = intersection(&key);
            if v.is_zero() {
                continue;
            }
            let mut counts: Vec<(u32, u32)> = Vec::new();
            for &k in &key.insertions {
                match counts.last_mut() {
                    Some((kk, c)) if *kk == k => *c += 1,
                    _ => counts.push((k, 1)),
                }
            }
            let aut: num::BigInt = counts.iter().map(|&(_, c)| factorial(c as u64)).product();
            let m = Monomial::from_factors(counts.iter().map(|&(k, c)| (VarId::t(k, 0), c)));
            out.add_term(m, v / Rational::from_integer(aut));
        }
    }
    out
}

/// `Z = hbar^{-offset} * series`, with `series` free of negative `hbar` powers.
#[derive(Clone, Debug)]
pub struct ShiftedSeries {
    pub offset: u32,
    pub series: Series,
}

/// `exp(sum_{g <= max_genus} hbar^{g-1} F_g)` for the point, stored as
/// `hbar^{-K} * (hbar^K Z)` with `K = floor(D / 3)` for `t`-degree bound `D`.
/// `hbar^K Z = sum_{j <= K} hbar^{K-j} F_0^j / j! * exp(F_1 + hbar F_2 + ...)`,
/// and `F_0^j` vanishes in the window for `j > K`. The `hbar` bound of the
/// stored series is `K + trunc.max_hbar_degree`.
pub fn z_point(max_genus: u32, trunc: Truncation) -> Result<ShiftedSeries> {
    let k_off = trunc.max_t_degree / 3;
    let inner = trunc.with_hbar_degree(k_off + trunc.max_hbar_degree);
    let hbar = |e: u32| Monomial::power(ParamId::Hbar, e);
    let mut higher = Series::zero(inner);
    for g in 1..=max_genus {
        higher.add_assign_series(&free_energy(g, inner).shift(&hbar(g - 1)));
    }
    let e = higher.exp()?;
    let f0 = free_energy(0, inner);
    let mut total = Series::zero(inner);
    let mut power = Series::one(inner);
    for j in 0..=k_off {
        let c = Rational::from_integer(factorial(j as u64)).recip();
        total.add_assign_series(&(&power * &e).shift(&hbar(k_off - j)).scale(&c));
        power = &power * &f0;
    }
    Ok(ShiftedSeries { offset: k_off, series: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(correlator(0, &[0, 0, 0]), int(1));
        assert_eq!(correlator(0, &[0, 0, 1]), Rational::zero());
        assert_eq!(correlator(0, &[0, 0, 0, 1]), int(1));
        assert_eq!(correlator(1, &[1]), rat(1, 24));
        assert_eq!(correlator(1, &[1, 1]), rat(1, 24));
        assert_eq!(correlator(2, &[4]), rat(1, 1152));
        assert_eq!(correlator(2, &[2, 3]), rat(29, 5760));
        assert_eq!(correlator(3, &[7]), rat(1, 82944));
        assert_eq!(correlator(0, &[0, 1]), Rational::zero());
    }

    #[test]
    fn order_independent() {
        assert_eq!(correlator(2, &[3, 2]), correlator(2, &[2, 3]));
    }

    #[test]
    fn z_point_coefficients() {
        let t = Truncation::new(3, 4, 0, 1, 0);
        let z = z_point(2, t).unwrap();
        assert_eq!(z.offset, 1);
        let t0 = VarId::t(0, 0);
        // hbar^{-1} t_0^3 / 3! sits at hbar^0 of the shifted series
        assert_eq!(z.series.coefficient(&Monomial::power(t0, 3)), rat(1, 6));
        // hbar^0 t_1 sits at hbar^1
        let m = Monomial::from_factors::<_, crate::series::Symbol>([(VarId::t(1, 0).into(), 1), (ParamId::Hbar.into(), 1)]);
        assert_eq!(z.series.coefficient(&m), rat(1, 24));
        let small = z_point(0, Truncation::new(2, 4, 0, 1, 0)).unwrap();
        assert_eq!(small.offset, 0);
        assert_eq!(small.series, Series::one(small.series.truncation()));
    }

    #[test]
    fn table_entries() {
        let t = table(1, 2, 4);
        assert!(t.iter().any(|e| e.g == 1 && e.k == vec![1] && e.value == "1/24"));
        assert!(t.iter().all(|e| e.value != "0"));
    }

    fn random_key() -> impl Strategy<Value = CorrelatorKey> {
        (0u32..=3, 0usize..4).prop_flat_map(|(g, n)| {
            let total = 3 * g as i64 - 3 + n as i64 + 1;
            let ks = keys(g, n + 1, total.max(0) as u32);
            let len = ks.len().max(1);
            (Just(ks), 0..len)
        }).prop_filter_map("no keys", |(ks, i)| ks.get(i).cloned())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn string_equation(key in random_key()) {
            let mut with0 = key.insertions.clone();
            with0.push(0);
            let lhs = correlator(key.genus, &with0);
            let mut rhs = Rational::zero();
            for i in 0..key.insertions.len() {
                if key.insertions[i] == 0 { continue; }
                let mut v = key.insertions.clone();
                v[i] -= 1;
                rhs += correlator(key.genus, &v);
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dilaton_equation(key in random_key()) {
            let mut with1 = key.insertions.clone();
            with1.push(1);
            let factor = int(2 * key.genus as i64 - 2 + key.insertions.len() as i64);
            prop_assert_eq!(correlator(key.genus, &with1), factor * intersection(&key));
        }
    }
}
