//! Sparse truncated multivariate formal power series over [`Rational`].

mod monomial;
mod random;
mod truncation;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};
use serde::Serialize;

use crate::arith::{int, Rational};
use crate::error::{Error, Result};

pub use monomial::{Monomial, ParamId, Symbol, VarId, VarKind};
pub use random::{random_series, random_series_in, RandomSpec};
pub use truncation::{Truncation, UNBOUNDED};

/// Hard cap on nilpotent power loops; only reached for series with an unbounded grading.
const NILPOTENCY_CAP: usize = 4096;

/// A finite sum of monomials with nonzero rational coefficients, every one of
/// which satisfies `truncation`.
#[derive(Clone, Debug)]
pub struct Series {
    terms: HashMap<Monomial, Rational>,
    truncation: Truncation,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Series {}

/// One `{monomial, coefficient}` record of the JSON rendering.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TermRecord {
    pub monomial: String,
    pub coefficient: String,
}

impl Series {
    pub fn zero(truncation: Truncation) -> Self {
        Series { terms: HashMap::new(), truncation }
    }

    pub fn one(truncation: Truncation) -> Self {
        Series::constant(Rational::one(), truncation)
    }

    pub fn constant(c: Rational, truncation: Truncation) -> Self {
        Series::term(Monomial::one(), c, truncation)
    }

    /// `c * m`, or zero if `m` falls outside the window.
    pub fn term(m: Monomial, c: Rational, truncation: Truncation) -> Self {
        let mut s = Series::zero(truncation);
        s.add_term(m, c);
        s
    }

    pub fn var(v: VarId, truncation: Truncation) -> Self {
        Series::term(Monomial::power(v, 1), Rational::one(), truncation)
    }

    /// `q_n^alpha`, which is identically zero for `n <= 0`.
    pub fn q_var(index: i64, color: u32, truncation: Truncation) -> Self {
        match VarId::q(index, color) {
            Some(v) => Series::var(v, truncation),
            None => Series::zero(truncation),
        }
    }

    pub fn param(p: ParamId, truncation: Truncation) -> Self {
        Series::term(Monomial::power(p, 1), Rational::one(), truncation)
    }

    /// Builds a series from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(terms: I, truncation: Truncation) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Series::zero(truncation);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted by monomial order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Stored coefficient of `m`, or zero.
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// Adds `c * m` in place, dropping it if out of window and purging zeros.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || !self.truncation.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// Same terms under a different window.
    pub fn retruncate(&self, truncation: Truncation) -> Series {
        Series::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())), truncation)
    }

    fn check_same(&self, other: &Series) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch { left: self.truncation, right: other.truncation });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_series(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Cauchy product with truncation applied during accumulation.
    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check_same(other)?;
        Ok(self.mul_into(other, self.truncation))
    }

    /// Product computed directly in `target`, regardless of the operands' windows.
    pub fn mul_into(&self, other: &Series, target: Truncation) -> Series {
        let mut out = Series::zero(target);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if target.admits(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    pub fn add_assign_series(&mut self, other: &Series) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(self.truncation);
        }
        Series {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            truncation: self.truncation,
        }
    }

    /// Multiplies every term by the monomial `m` (dropping what leaves the window).
    pub fn shift(&self, m: &Monomial) -> Series {
        Series::from_terms(self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())), self.truncation)
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(self.truncation);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `exp(s)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Series> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonUnitConstant(self.constant_term().to_string()));
        }
        let mut acc = Series::one(self.truncation);
        let mut term = Series::one(self.truncation);
        for k in 1..=NILPOTENCY_CAP {
            term = (&term * self).scale(&Rational::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                return Ok(acc);
            }
            acc.add_assign_series(&term);
        }
        Err(Error::NotNilpotent)
    }

    /// `log(s)` for a series with constant term 1.
    pub fn log(&self) -> Result<Series> {
        if self.constant_term() != Rational::one() {
            return Err(Error::NonUnitConstant(self.constant_term().to_string()));
        }
        let h = self - &Series::one(self.truncation);
        let mut acc = Series::zero(self.truncation);
        let mut power = Series::one(self.truncation);
        for k in 1..=NILPOTENCY_CAP {
            power = &power * &h;
            if power.is_zero() {
                return Ok(acc);
            }
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            acc.add_assign_series(&power.scale(&(sign / int(k as i64))));
        }
        Err(Error::NotNilpotent)
    }

    /// Keeps only the terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Series {
        Series {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
            truncation: self.truncation,
        }
    }

    /// Coefficient of `sym^power` viewed as a series in the remaining generators.
    pub fn coefficient_of_power(&self, sym: impl Into<Symbol>, power: u32) -> Series {
        let sym = sym.into();
        let divisor = Monomial::power(sym, power);
        Series::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exponent(sym) == power)
                .filter_map(|(m, c)| m.div(&divisor).map(|q| (q, c.clone()))),
            self.truncation,
        )
    }

    /// Partial derivative in a parameter or coordinate.
    pub fn derivative(&self, sym: impl Into<Symbol>) -> Series {
        let sym = sym.into();
        let one = Monomial::power(sym, 1);
        Series::from_terms(
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.exponent(sym);
                (e > 0).then(|| (m.div(&one).expect("exponent checked"), c * int(e as i64)))
            }),
            self.truncation,
        )
    }

    /// Ring homomorphism sending each listed generator to its replacement and
    /// fixing the others; computed in `target`.
    pub fn substitute(&self, rule: &Substitution, target: Truncation) -> Result<Series> {
        rule.check(target)?;
        let mut cache: HashMap<(Symbol, u32), Series> = HashMap::new();
        let mut out = Series::zero(target);
        for (m, c) in &self.terms {
            let mut kept: Vec<(Symbol, u32)> = Vec::new();
            let mut acc = Series::constant(c.clone(), target);
            for &(s, e) in m.factors() {
                match rule.get(s) {
                    Some(rep) => {
                        let p = cache
                            .entry((s, e))
                            .or_insert_with(|| rep.retruncate(target).pow(e))
                            .clone();
                        acc = acc.mul_into(&p, target);
                        if acc.is_zero() {
                            break;
                        }
                    }
                    None => kept.push((s, e)),
                }
            }
            if acc.is_zero() {
                continue;
            }
            let rest = Monomial::from_factors(kept);
            for (am, ac) in acc.terms {
                out.add_term(am.mul(&rest), ac);
            }
        }
        Ok(out)
    }

    /// Canonical text: terms in monomial order joined by ` + `, e.g. `-1/12 * u^2 * t[2,0]`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| if m.is_one() { c.to_string() } else { format!("{c} * {}", m.render()) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| TermRecord { monomial: m.render(), coefficient: c.to_string() })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_records()).expect("records serialize")
    }

    /// First monomial (in canonical order) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Series) -> Option<(Monomial, Rational, Rational)> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|m| {
            let (a, b) = (self.coefficient(m), other.coefficient(m));
            (a != b).then(|| (m.clone(), a, b))
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Panics on truncation mismatch; use [`Series::try_add`] for the checked form.
impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.try_add(rhs).expect("series add")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.try_sub(rhs).expect("series sub")
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.try_mul(rhs).expect("series mul")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Rational::one())
    }
}

/// Generator-to-series replacement rule for [`Series::substitute`].
#[derive(Clone, Debug, Default)]
pub struct Substitution(HashMap<Symbol, Series>);

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn insert(&mut self, sym: impl Into<Symbol>, replacement: Series) -> &mut Self {
        self.0.insert(sym.into(), replacement);
        self
    }

    pub fn with(mut self, sym: impl Into<Symbol>, replacement: Series) -> Self {
        self.insert(sym, replacement);
        self
    }

    pub fn get(&self, sym: Symbol) -> Option<&Series> {
        self.0.get(&sym)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check(&self, target: Truncation) -> Result<()> {
        for (sym, rep) in &self.0 {
            if let Some((m, _)) = rep.terms().find(|(m, _)| !target.admits_params(m) || !admits_vars(&target, m)) {
                return Err(Error::ReplacementOutOfBounds { symbol: *sym, term: m.render() });
            }
        }
        Ok(())
    }
}

fn admits_vars(t: &Truncation, m: &Monomial) -> bool {
    m.var_degree() <= t.max_t_degree as u64 && m.max_var_index() <= t.max_var_index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn t(n: u32) -> Series {
        Series::var(VarId::t(n, 0), Truncation::unbounded())
    }

    fn u(tr: Truncation) -> Series {
        Series::param(ParamId::U, tr)
    }

    #[test]
    fn add_examples() {
        let tr = Truncation::unbounded();
        assert!((&t(0) + &(-&t(0))).is_zero());
        let u2 = Monomial::power(ParamId::U, 2);
        let a = Series::term(u2.clone(), rat(1, 2), tr);
        let b = Series::term(u2.clone(), rat(1, 3), tr);
        assert_eq!((&a + &b).coefficient(&u2), rat(5, 6));

        let tr0 = Truncation::unbounded().with_u_degree(0);
        let t1 = Series::var(VarId::t(1, 0), tr0);
        let ut1 = Series::term(Monomial::from_factors([(Symbol::from(ParamId::U), 1), (VarId::t(1, 0).into(), 1)]), int(1), tr0);
        assert_eq!(&t1 + &ut1, t1);
    }

    #[test]
    fn mul_examples() {
        let tr = Truncation::unbounded().with_u_degree(2);
        let one = Series::one(tr);
        let p = &one + &u(tr);
        let m = &one - &u(tr);
        let expect = &one - &(&u(tr) * &u(tr));
        assert_eq!(&p * &m, expect);

        let tr1 = Truncation::unbounded().with_t_degree(1);
        let x = Series::var(VarId::t(0, 0), tr1);
        assert!((&x * &x).is_zero());
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        let a = Series::one(Truncation::unbounded());
        let b = Series::one(Truncation::default());
        assert!(matches!(a.try_add(&b), Err(Error::TruncationMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn coefficient_examples() {
        let tr = Truncation::unbounded();
        let s = &Series::one(tr) + &t(0).scale(&int(2));
        assert_eq!(s.coefficient(&Monomial::power(VarId::t(0, 0), 1)), int(2));
        assert_eq!(Series::zero(tr).coefficient(&Monomial::power(ParamId::U, 3)), int(0));
    }

    #[test]
    fn exp_log_inverse() {
        let tr = Truncation::unbounded().with_u_degree(8);
        let s = &u(tr).scale(&rat(3, 7)) + &(&u(tr) * &u(tr)).scale(&rat(-1, 2));
        let e = s.exp().unwrap();
        assert_eq!(e.log().unwrap(), s);
        let inv = (-&s).exp().unwrap();
        assert_eq!(&e * &inv, Series::one(tr));
    }

    #[test]
    fn substitution_examples() {
        let tr = Truncation::unbounded().with_u_degree(4);
        let q = |n: i64| Series::q_var(n, 0, tr);
        let rep = &(&q(3) + &(&u(tr) * &q(2))) + &(&(&u(tr) * &u(tr)) * &q(1));
        let rule = Substitution::new().with(VarId::t(1, 0), rep.clone());
        let src = Series::var(VarId::t(1, 0), tr);
        assert_eq!(src.substitute(&rule, tr).unwrap(), rep);
        let c = Series::constant(rat(5, 3), tr);
        assert_eq!(c.substitute(&rule, tr).unwrap(), c);
    }

    #[test]
    fn substitution_rejects_out_of_window_replacement() {
        let tr = Truncation::unbounded().with_u_degree(1);
        let big = Series::term(Monomial::power(ParamId::U, 3), int(1), Truncation::unbounded());
        let rule = Substitution::new().with(VarId::t(0, 0), big);
        assert!(Series::var(VarId::t(0, 0), tr).substitute(&rule, tr).is_err());
    }

    #[test]
    fn render_canonical() {
        let tr = Truncation::unbounded();
        let m = Monomial::from_factors([(Symbol::from(VarId::t(2, 0)), 1), (ParamId::U.into(), 2)]);
        let s = Series::term(m, rat(-1, 12), tr);
        assert_eq!(s.render(), "-1/12 * u^2 * t[2,0]");
        assert_eq!(Series::zero(tr).render(), "0");
        let json = s.to_json();
        assert_eq!(json[0]["coefficient"], "-1/12");
        assert_eq!(json[0]["monomial"], "u^2 * t[2,0]");
    }

    fn small_series(seed: u64) -> Series {
        let tr = Truncation::new(4, 3, 3, 1, 3);
        random_series(seed, tr, 6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms(a in 0u64..10_000, b in 0u64..10_000, c in 0u64..10_000) {
            let (x, y, z) = (small_series(a), small_series(b), small_series(c));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn truncation_idempotent(a in 0u64..10_000) {
            let x = random_series(a, Truncation::new(5, 4, 4, 2, 4), 12);
            let narrow = Truncation::new(3, 2, 2, 1, 3);
            prop_assert_eq!(x.retruncate(narrow).retruncate(narrow), x.retruncate(narrow));
        }

        #[test]
        fn substitution_is_homomorphism(a in 0u64..10_000, b in 0u64..10_000) {
            // Linear-plus-constant replacements keep degrees from rising, so a
            // product whose degree fits the window maps exactly.
            let tr = Truncation::new(6, 3, 4, 1, 3);
            let f = random_series(a, Truncation::new(3, 3, 2, 1, 3), 5).retruncate(tr);
            let g = random_series(b, Truncation::new(3, 3, 2, 1, 3), 5).retruncate(tr);
            let rule = Substitution::new()
                .with(VarId::t(0, 0), &Series::var(VarId::t(1, 0), tr) + &Series::param(ParamId::U, tr))
                .with(VarId::t(2, 0), &Series::var(VarId::t(0, 0), tr) - &Series::constant(rat(1, 3), tr));
            let lhs = (&f * &g).substitute(&rule, tr).unwrap();
            let rhs = &f.substitute(&rule, tr).unwrap() * &g.substitute(&rule, tr).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
