//! Differential operators with polynomial coefficients, kept in normal order
//! (all multiplications to the left of all derivatives).
//!
//! An atom is `coeff * params * (prod mult_vars) * (prod d/d deriv_vars)`. The
//! derivative part is stored as a [`Monomial`] over coordinates, which makes
//! it a multiset with canonical order.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::arith::{binomial, falling_factorial, int, Rational};
use crate::error::{Error, Result};
use crate::series::{Monomial, Series, Substitution, Truncation, VarId, UNBOUNDED};

/// Hard cap on ad-towers and power loops that are expected to vanish by grading.
const TOWER_CAP: usize = 512;

/// One normal-ordered term of an [`Operator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpAtom {
    pub coeff: Rational,
    /// Parameters and multiplication coordinates.
    pub mono: Monomial,
    /// Differentiation coordinates as a multiset.
    pub derivs: Monomial,
}

impl OpAtom {
    pub fn render(&self) -> String {
        let mut s = self.coeff.to_string();
        if !self.mono.is_one() {
            s.push_str(" * ");
            s.push_str(&self.mono.render());
        }
        for (v, e) in self.derivs.vars() {
            for _ in 0..e {
                s.push_str(&format!(" d/d{v}"));
            }
        }
        s
    }
}

/// Minimal per-atom increase of each graded quantity. `descent` is the
/// decrease of [`Monomial::descent_weight`]; it may be negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingGain {
    pub u: u64,
    pub omega: u64,
    pub hbar: u64,
    pub descent: i64,
}

/// Finite sum of normal-ordered atoms, grouped by derivative multiset.
#[derive(Clone, Debug)]
pub struct Operator {
    atoms: HashMap<Monomial, HashMap<Monomial, Rational>>,
    truncation: Truncation,
    max_order: u32,
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for Operator {}

impl Operator {
    pub fn zero(truncation: Truncation) -> Self {
        Operator { atoms: HashMap::new(), truncation, max_order: 0 }
    }

    /// Multiplication by `c * mono` (no derivatives).
    pub fn multiplication(c: Rational, mono: Monomial, truncation: Truncation) -> Self {
        let mut op = Operator::zero(truncation);
        op.add_atom(mono, Monomial::one(), c);
        op
    }

    /// `d/d v`.
    pub fn derivative(v: VarId, truncation: Truncation) -> Self {
        let mut op = Operator::zero(truncation);
        op.add_atom(Monomial::one(), Monomial::power(v, 1), Rational::one());
        op
    }

    pub fn from_atoms<I>(atoms: I, truncation: Truncation) -> Self
    where
        I: IntoIterator<Item = OpAtom>,
    {
        let mut op = Operator::zero(truncation);
        for a in atoms {
            op.add_atom(a.mono, a.derivs, a.coeff);
        }
        op
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Adds an atom, combining like shapes. Atoms whose parameters leave the
    /// window, or that differentiate in a coordinate beyond the index bound
    /// (and so annihilate every retained monomial), are dropped.
    pub fn add_atom(&mut self, mono: Monomial, derivs: Monomial, c: Rational) {
        if c.is_zero() || !self.truncation.admits_params(&mono) {
            return;
        }
        if derivs.max_var_index() > self.truncation.max_var_index {
            return;
        }
        debug_assert!(derivs.params().next().is_none(), "derivatives must be coordinates");
        let order = derivs.var_degree() as u32;
        let inner = self.atoms.entry(derivs.clone()).or_default();
        match inner.entry(mono) {
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
        if inner.is_empty() {
            self.atoms.remove(&derivs);
        }
        self.max_order = self.max_order.max(order);
    }

    pub fn atoms(&self) -> impl Iterator<Item = OpAtom> + '_ {
        self.atoms.iter().flat_map(|(d, inner)| {
            inner.iter().map(move |(m, c)| OpAtom { coeff: c.clone(), mono: m.clone(), derivs: d.clone() })
        })
    }

    /// Atoms in canonical order (derivatives, then coefficient monomial).
    pub fn sorted_atoms(&self) -> Vec<OpAtom> {
        let mut v: Vec<OpAtom> = self.atoms().collect();
        v.sort_by(|a, b| (&a.derivs, &a.mono).cmp(&(&b.derivs, &b.mono)));
        v
    }

    pub fn len(&self) -> usize {
        self.atoms.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Coefficient of the atom `mono * d^derivs`.
    pub fn coefficient(&self, mono: &Monomial, derivs: &Monomial) -> Rational {
        self.atoms.get(derivs).and_then(|i| i.get(mono)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn retruncate(&self, truncation: Truncation) -> Operator {
        Operator::from_atoms(self.atoms(), truncation)
    }

    fn check_same(&self, other: &Operator) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch { left: self.truncation, right: other.truncation });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_op(other);
        Ok(out)
    }

    pub fn add_assign_op(&mut self, other: &Operator) {
        for a in other.atoms() {
            self.add_atom(a.mono, a.derivs, a.coeff);
        }
    }

    pub fn scale(&self, c: &Rational) -> Operator {
        Operator::from_atoms(
            self.atoms().map(|a| OpAtom { coeff: a.coeff * c, ..a }),
            self.truncation,
        )
    }

    /// Multiplies every atom's coefficient by the parameter monomial `m`.
    pub fn shift_params(&self, m: &Monomial) -> Operator {
        Operator::from_atoms(
            self.atoms().map(|a| OpAtom { mono: a.mono.mul(m), ..a }),
            self.truncation,
        )
    }

    /// Keeps the atoms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&OpAtom) -> bool) -> Operator {
        Operator::from_atoms(self.atoms().filter(|a| keep(a)), self.truncation)
    }

    /// Normal-ordered product `self * other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        let mut out = Operator::zero(self.truncation);
        for a in self.atoms() {
            for b in other.atoms() {
                compose_atoms(&a, &b, &mut out);
            }
        }
        Ok(out)
    }

    /// `[self, other] = self*other - other*self`, computed symbolically.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(&ab - &ba)
    }

    /// `ad_self^n other`.
    pub fn ad_power(&self, n: usize, other: &Operator) -> Result<Operator> {
        let mut acc = other.clone();
        for _ in 0..n {
            acc = self.commutator(&acc)?;
        }
        Ok(acc)
    }

    /// Exact Leibniz action on `s`, truncated to `s`'s window.
    pub fn apply(&self, s: &Series) -> Series {
        let mut out = Series::zero(s.truncation());
        for (m, c) in s.terms() {
            let vars: Vec<(VarId, u32)> = m.vars().collect();
            for_each_submultiset(&vars, self.max_order, &mut |sub: &[(VarId, u32)]| {
                let derivs = Monomial::from_factors(sub.iter().copied());
                let Some(inner) = self.atoms.get(&derivs) else { return };
                let mut ff = num::BigInt::one();
                for &(v, k) in sub {
                    ff *= falling_factorial(m.exponent(v), k);
                }
                let rest = m.div(&derivs).expect("submultiset divides");
                let base = c * Rational::from_integer(ff);
                for (mono, a) in inner {
                    out.add_term(rest.mul(mono), &base * a);
                }
            });
        }
        out
    }

    pub fn grading_gain(&self) -> Option<GradingGain> {
        self.atoms().map(|a| atom_gain(&a)).reduce(|x, y| GradingGain {
            u: x.u.min(y.u),
            omega: x.omega.min(y.omega),
            hbar: x.hbar.min(y.hbar),
            descent: x.descent.min(y.descent),
        })
    }

    /// Fails if some atom increases no bounded grading and does not lower the
    /// descent weight, in which case `exp` need not terminate.
    pub fn check_terminating(&self, trunc: &Truncation) -> Result<()> {
        for a in self.atoms() {
            let g = atom_gain(&a);
            let ok = (g.u > 0 && trunc.max_u_degree != UNBOUNDED)
                || (g.omega > 0 && trunc.max_omega_weight != UNBOUNDED)
                || (g.hbar > 0 && trunc.max_hbar_degree != UNBOUNDED)
                || g.descent > 0;
            if !ok {
                return Err(Error::NonTerminating(a.render()));
            }
        }
        Ok(())
    }

    /// `sum_k op^k(s) / k!`, stopping at the first vanishing power.
    pub fn exp_apply(&self, s: &Series, trunc: Truncation) -> Result<Series> {
        self.check_terminating(&trunc)?;
        let s = if s.truncation() == trunc { s.clone() } else { s.retruncate(trunc) };
        let mut acc = s.clone();
        let mut term = s;
        for k in 1.. {
            term = self.apply(&term);
            if term.is_zero() {
                break;
            }
            term = term.scale(&Rational::new(1.into(), (k as i64).into()));
            acc.add_assign_series(&term);
        }
        Ok(acc)
    }

    /// `sum_{n>=1} (-1)^{n-1}/n! ad_self^{n-1} y`, the right-hand exponent of
    /// the special Zassenhaus factorisation.
    pub fn zassenhaus_tail(&self, y: &Operator) -> Result<Operator> {
        let mut out = Operator::zero(self.truncation);
        let mut ad = y.clone();
        let mut fact = num::BigInt::one();
        for n in 1..=TOWER_CAP {
            if ad.is_zero() {
                return Ok(out);
            }
            fact *= num::BigInt::from(n);
            let sign = if n % 2 == 1 { int(1) } else { int(-1) };
            out.add_assign_op(&ad.scale(&(sign / Rational::from_integer(fact.clone()))));
            ad = self.commutator(&ad)?;
        }
        Err(Error::NonTerminating("ad-tower did not vanish".into()))
    }

    /// Replaces parameters in each coefficient via `rule`, computed in `target`.
    pub fn substitute_params(&self, rule: &Substitution, target: Truncation) -> Result<Operator> {
        let mut out = Operator::zero(target);
        let param_target = Truncation { max_t_degree: UNBOUNDED, max_var_index: UNBOUNDED, ..target };
        for a in self.atoms() {
            let vars = a.mono.var_part();
            let coeff = Series::term(a.mono.param_part(), a.coeff.clone(), self.truncation).substitute(rule, param_target)?;
            for (m, c) in coeff.terms() {
                out.add_atom(m.mul(&vars), a.derivs.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Rewrites every atom through `f`, which may emit any number of atoms.
    pub fn flat_map_atoms(&self, target: Truncation, mut f: impl FnMut(&OpAtom) -> Vec<OpAtom>) -> Operator {
        let mut out = Operator::zero(target);
        for a in self.atoms() {
            for b in f(&a) {
                out.add_atom(b.mono, b.derivs, b.coeff);
            }
        }
        out
    }

    /// Text rendering in normal order, e.g. `-1 * w[1] * t[0,0] d/dt[1,0]`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.sorted_atoms().iter().map(OpAtom::render).collect::<Vec<_>>().join(" + ")
    }

    /// First atom (in canonical order) where the two operators differ.
    pub fn first_difference(&self, other: &Operator) -> Option<(String, Rational, Rational)> {
        let mut keys: Vec<(Monomial, Monomial)> = self
            .atoms()
            .chain(other.atoms())
            .map(|a| (a.derivs, a.mono))
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|(d, m)| {
            let (x, y) = (self.coefficient(&m, &d), other.coefficient(&m, &d));
            (x != y).then(|| (OpAtom { coeff: Rational::one(), mono: m, derivs: d }.render(), x, y))
        })
    }
}

fn atom_gain(a: &OpAtom) -> GradingGain {
    GradingGain {
        u: a.mono.u_degree(),
        omega: a.mono.omega_weight(),
        hbar: a.mono.hbar_degree(),
        descent: a.derivs.descent_weight() as i64 - a.mono.descent_weight() as i64,
    }
}

/// `a * b` in normal order:
/// `d^beta x^gamma = sum_kappa binom(beta, kappa) gamma!/(gamma-kappa)! x^(gamma-kappa) d^(beta-kappa)`.
fn compose_atoms(a: &OpAtom, b: &OpAtom, out: &mut Operator) {
    let beta: Vec<(VarId, u32)> = a.derivs.vars().collect();
    let overlap: Vec<(VarId, u32, u32)> = beta
        .iter()
        .filter_map(|&(v, e)| {
            let g = b.mono.exponent(v);
            (g > 0).then_some((v, e, g))
        })
        .collect();
    let base_coeff = &a.coeff * &b.coeff;
    let mut kappa = vec![0u32; overlap.len()];
    loop {
        let mut c = num::BigInt::one();
        let mut kmono: Vec<(VarId, u32)> = Vec::new();
        for (i, &(v, e, g)) in overlap.iter().enumerate() {
            let k = kappa[i];
            c *= binomial(e as u64, k as i64) * falling_factorial(g, k);
            if k > 0 {
                kmono.push((v, k));
            }
        }
        let kmono = Monomial::from_factors(kmono);
        let mono = a.mono.mul(&b.mono.div(&kmono).expect("kappa <= gamma"));
        let derivs = a.derivs.div(&kmono).expect("kappa <= beta").mul(&b.derivs);
        out.add_atom(mono, derivs, &base_coeff * Rational::from_integer(c));

        // next kappa
        let mut i = 0;
        loop {
            if i == overlap.len() {
                return;
            }
            let cap = overlap[i].1.min(overlap[i].2);
            if kappa[i] < cap {
                kappa[i] += 1;
                break;
            }
            kappa[i] = 0;
            i += 1;
        }
    }
}

type Visit<'a> = dyn FnMut(&[(VarId, u32)]) + 'a;

/// Calls `f` on every sub-multiset of `vars` with total size at most `max`.
fn for_each_submultiset(vars: &[(VarId, u32)], max: u32, f: &mut Visit<'_>) {
    fn rec(vars: &[(VarId, u32)], budget: u32, cur: &mut Vec<(VarId, u32)>, f: &mut Visit<'_>) {
        match vars.split_first() {
            None => f(cur),
            Some((&(v, e), rest)) => {
                rec(rest, budget, cur, f);
                for k in 1..=e.min(budget) {
                    cur.push((v, k));
                    rec(rest, budget - k, cur, f);
                    cur.pop();
                }
            }
        }
    }
    let mut cur = Vec::new();
    rec(vars, max, &mut cur, f);
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator add")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_add(&-rhs).expect("operator sub")
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(&-Rational::one())
    }
}

/// Composition; panics on truncation mismatch.
impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs).expect("operator compose")
    }
}

/// Lie-subalgebra classes used by the special Zassenhaus factorisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorClass {
    /// `sum a t_i^mu d/dt_{i+j}^mu`.
    G1,
    /// `sum b d/dt_i^mu`.
    G2,
    /// `sum c d^2/dt_i^mu dt_j^nu`.
    G2Prime,
}

impl OperatorClass {
    fn name(self) -> &'static str {
        match self {
            OperatorClass::G1 => "g1",
            OperatorClass::G2 => "g2",
            OperatorClass::G2Prime => "g2'",
        }
    }

    pub fn contains_atom(self, a: &OpAtom) -> bool {
        let mult: Vec<(VarId, u32)> = a.mono.vars().collect();
        let der: Vec<(VarId, u32)> = a.derivs.vars().collect();
        match self {
            OperatorClass::G1 => match (mult.as_slice(), der.as_slice()) {
                ([(m, 1)], [(d, 1)]) => m.kind == d.kind && m.color == d.color && d.index >= m.index,
                _ => false,
            },
            OperatorClass::G2 => mult.is_empty() && a.derivs.var_degree() == 1,
            OperatorClass::G2Prime => mult.is_empty() && a.derivs.var_degree() == 2,
        }
    }

    pub fn check(self, op: &Operator) -> Result<()> {
        match op.atoms().find(|a| !self.contains_atom(a)) {
            Some(a) => Err(Error::ClassMembership { class: self.name(), atom: a.render() }),
            None => Ok(()),
        }
    }
}

/// Class of a nonzero abelian-side operator (`g2` or `g2'`).
pub fn abelian_class(y: &Operator) -> Result<Option<OperatorClass>> {
    if y.is_zero() {
        return Ok(None);
    }
    for class in [OperatorClass::G2, OperatorClass::G2Prime] {
        if class.check(y).is_ok() {
            return Ok(Some(class));
        }
    }
    let bad = y.atoms().next().expect("nonzero");
    Err(Error::ClassMembership { class: "g2 or g2'", atom: bad.render() })
}
