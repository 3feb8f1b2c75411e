use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Which family a coordinate belongs to: descendant coordinates `t` or the
/// changed coordinates `q`. The two worlds are never aliased.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    T,
    Q,
}

/// A coordinate `t_n^alpha` (n >= 0) or `q_n^alpha` (n >= 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId {
    pub kind: VarKind,
    pub index: u32,
    pub color: u32,
}

impl VarId {
    pub const fn t(index: u32, color: u32) -> Self {
        VarId { kind: VarKind::T, index, color }
    }

    /// `q_n^alpha`; `None` for `n <= 0`, where the coordinate is identically zero.
    pub fn q(index: i64, color: u32) -> Option<Self> {
        (index >= 1).then_some(VarId { kind: VarKind::Q, index: index as u32, color })
    }

    /// Same coordinate with a different color (the map `Lambda_alpha` on one variable).
    pub fn with_color(self, color: u32) -> Self {
        VarId { color, ..self }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            VarKind::T => 't',
            VarKind::Q => 'q',
        };
        write!(f, "{k}[{},{}]", self.index, self.color)
    }
}

/// Formal parameters. `Z` denotes `z^{-1}` where a series in inverse powers of
/// `z` is needed and `z` itself where the use site says so; `X`, `Y` are the
/// non-negative bivariate variables of the two-point kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ParamId {
    U,
    Hbar,
    /// `omega_l`, weight `2l - 1`.
    Omega(u32),
    /// `u_j` of the several-lambda-class generating function.
    UMulti(u32),
    /// `s_n` for odd `n`, weight `n`.
    S(u32),
    Z,
    X,
    Y,
}

impl ParamId {
    /// Contribution of one power of this parameter to the omega-weight grading.
    pub fn omega_weight(self) -> u64 {
        match self {
            ParamId::Omega(l) => 2 * l as u64 - 1,
            ParamId::S(n) => n as u64,
            _ => 0,
        }
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamId::U => write!(f, "u"),
            ParamId::Hbar => write!(f, "h"),
            ParamId::Omega(l) => write!(f, "w[{l}]"),
            ParamId::UMulti(j) => write!(f, "u[{j}]"),
            ParamId::S(n) => write!(f, "s[{n}]"),
            ParamId::Z => write!(f, "z"),
            ParamId::X => write!(f, "x"),
            ParamId::Y => write!(f, "y"),
        }
    }
}

/// A generator of the coefficient ring: a coordinate or a parameter.
/// Coordinates order before parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Var(VarId),
    Param(ParamId),
}

impl From<VarId> for Symbol {
    fn from(v: VarId) -> Self {
        Symbol::Var(v)
    }
}

impl From<ParamId> for Symbol {
    fn from(p: ParamId) -> Self {
        Symbol::Param(p)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Var(v) => v.fmt(f),
            Symbol::Param(p) => p.fmt(f),
        }
    }
}

/// A product of generators with positive exponents, kept sorted by [`Symbol`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// A single generator raised to `exp`.
    pub fn power(sym: impl Into<Symbol>, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(sym.into(), exp)])
        }
    }

    /// Builds a monomial from unsorted factors, merging repeats and dropping zero exponents.
    pub fn from_factors<I, S>(factors: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<Symbol>,
    {
        let mut v: Vec<(Symbol, u32)> = factors
            .into_iter()
            .map(|(s, e)| (s.into(), e))
            .filter(|(_, e)| *e > 0)
            .collect();
        v.sort_by_key(|a| a.0);
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(v.len());
        for (s, e) in v {
            match out.last_mut() {
                Some((ls, le)) if *ls == s => *le += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn exponent(&self, sym: impl Into<Symbol>) -> u32 {
        let sym = sym.into();
        self.0
            .binary_search_by(|(s, _)| s.cmp(&sym))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.0.iter().filter_map(|(s, e)| match s {
            Symbol::Var(v) => Some((*v, *e)),
            Symbol::Param(_) => None,
        })
    }

    pub fn params(&self) -> impl Iterator<Item = (ParamId, u32)> + '_ {
        self.0.iter().filter_map(|(s, e)| match s {
            Symbol::Param(p) => Some((*p, *e)),
            Symbol::Var(_) => None,
        })
    }

    /// Part of the monomial made of coordinates only.
    pub fn var_part(&self) -> Monomial {
        Monomial(self.0.iter().filter(|(s, _)| matches!(s, Symbol::Var(_))).cloned().collect())
    }

    /// Part of the monomial made of parameters only.
    pub fn param_part(&self) -> Monomial {
        Monomial(self.0.iter().filter(|(s, _)| matches!(s, Symbol::Param(_))).cloned().collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == s {
                let oe = other.0[j].1;
                if oe > e {
                    return None;
                }
                if e > oe {
                    out.push((s, e - oe));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < s {
                return None;
            } else {
                out.push((s, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Total degree in the `t`/`q` coordinates.
    pub fn var_degree(&self) -> u64 {
        self.vars().map(|(_, e)| e as u64).sum()
    }

    pub fn max_var_index(&self) -> u32 {
        self.vars().map(|(v, _)| v.index).max().unwrap_or(0)
    }

    /// Degree in `u` together with all `u_j`.
    pub fn u_degree(&self) -> u64 {
        self.params()
            .filter(|(p, _)| matches!(p, ParamId::U | ParamId::UMulti(_)))
            .map(|(_, e)| e as u64)
            .sum()
    }

    pub fn hbar_degree(&self) -> u64 {
        self.exponent(ParamId::Hbar) as u64
    }

    pub fn omega_weight(&self) -> u64 {
        self.params().map(|(p, e)| p.omega_weight() * e as u64).sum()
    }

    /// `sum (n + 1) * exponent` over coordinates; strictly lowered by every
    /// index-lowering operator and by every pure derivative.
    pub fn descent_weight(&self) -> u64 {
        self.vars().map(|(v, e)| (v.index as u64 + 1) * e as u64).sum()
    }

    /// Replaces each parameter and coordinate through `f`, merging the result.
    pub fn map_symbols(&self, mut f: impl FnMut(Symbol) -> Symbol) -> Monomial {
        Monomial::from_factors(self.0.iter().map(|&(s, e)| (f(s), e)))
    }

    /// Renders parameters first, then coordinates, joined by ` * `.
    pub fn render(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (p, e) in self.params() {
            parts.push(render_power(&p.to_string(), e));
        }
        for (v, e) in self.vars() {
            parts.push(render_power(&v.to_string(), e));
        }
        parts.join(" * ")
    }
}

fn render_power(base: &str, e: u32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_merge() {
        let a = Monomial::from_factors([(Symbol::from(ParamId::U), 1), (VarId::t(1, 0).into(), 2), (ParamId::U.into(), 1)]);
        assert_eq!(a.exponent(ParamId::U), 2);
        assert_eq!(a.exponent(VarId::t(1, 0)), 2);
        assert_eq!(a.render(), "u^2 * t[1,0]^2");
    }

    #[test]
    fn mul_div_inverse() {
        let a = Monomial::from_factors([(VarId::t(0, 0), 1), (VarId::t(2, 1), 3)]);
        let b = Monomial::from_factors([(Symbol::from(VarId::t(2, 1)), 1), (ParamId::Hbar.into(), 2)]);
        let ab = a.mul(&b);
        assert_eq!(ab.div(&b), Some(a.clone()));
        assert_eq!(ab.div(&a), Some(b.clone()));
        assert_eq!(a.div(&b), None);
    }

    #[test]
    fn q_index_zero_is_absent() {
        assert!(VarId::q(0, 0).is_none());
        assert!(VarId::q(-3, 1).is_none());
        assert_eq!(VarId::q(2, 1).unwrap().to_string(), "q[2,1]");
    }

    #[test]
    fn gradings() {
        let m = Monomial::from_factors([
            (Symbol::from(ParamId::Omega(2)), 2),
            (ParamId::S(5).into(), 1),
            (ParamId::UMulti(1).into(), 2),
            (ParamId::U.into(), 1),
            (VarId::t(3, 0).into(), 2),
        ]);
        assert_eq!(m.omega_weight(), 11);
        assert_eq!(m.u_degree(), 3);
        assert_eq!(m.var_degree(), 2);
        assert_eq!(m.descent_weight(), 8);
        assert_eq!(m.max_var_index(), 3);
    }
}
