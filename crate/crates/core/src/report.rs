//! Structured outcome of a verification run.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::operator::Operator;
use crate::par;
use crate::series::{Monomial, Series, Truncation};

/// At most this many mismatches are recorded per report.
pub const MAX_MISMATCHES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("pass"),
            Status::Fail => f.write_str("fail"),
        }
    }
}

/// A coefficient where the two sides disagree. `input` names the basis
/// element (or test case) that exposed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub input: String,
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub identity: String,
    pub pairing: String,
    pub truncation: Truncation,
    pub status: Status,
    /// Number of basis elements, atoms or cases compared.
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(identity: impl Into<String>, pairing: impl Into<String>, truncation: Truncation) -> Self {
        Report {
            identity: identity.into(),
            pairing: pairing.into(),
            truncation,
            status: Status::Pass,
            checked: 0,
            mismatches: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn push_mismatch(&mut self, m: Mismatch) {
        self.status = Status::Fail;
        if self.mismatches.len() < MAX_MISMATCHES {
            self.mismatches.push(m);
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Records a failure that has no coefficient witness (e.g. an error).
    pub fn fail_with(&mut self, input: impl Into<String>, reason: impl Into<String>) {
        self.push_mismatch(Mismatch { input: input.into(), monomial: String::new(), lhs: reason.into(), rhs: String::new() });
    }

    /// Compares two series and records the first differing coefficient.
    pub fn compare_series(&mut self, input: &str, lhs: &Series, rhs: &Series) {
        self.checked += 1;
        if let Some((m, a, b)) = lhs.first_difference(rhs) {
            self.push_mismatch(Mismatch { input: input.into(), monomial: m.render(), lhs: a.to_string(), rhs: b.to_string() });
        }
    }

    /// Compares two operators atom by atom.
    pub fn compare_operators(&mut self, input: &str, lhs: &Operator, rhs: &Operator) {
        self.checked += 1;
        if let Some((atom, a, b)) = lhs.first_difference(rhs) {
            self.push_mismatch(Mismatch { input: input.into(), monomial: atom, lhs: a.to_string(), rhs: b.to_string() });
        }
    }

    pub fn compare_values<T: PartialEq + fmt::Display>(&mut self, input: &str, lhs: &T, rhs: &T) {
        self.checked += 1;
        if lhs != rhs {
            self.push_mismatch(Mismatch { input: input.into(), monomial: String::new(), lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
    }

    /// Folds another report's outcome into this one.
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        if !other.passed() {
            self.status = Status::Fail;
        }
        for m in other.mismatches {
            if self.mismatches.len() < MAX_MISMATCHES {
                self.mismatches.push(Mismatch { input: format!("{}: {}", other.identity, m.input), ..m });
            }
        }
        self.notes.extend(other.notes);
    }

    /// Applies `lhs` and `rhs` to each basis monomial (in parallel when
    /// enabled) and records every disagreement.
    pub fn compare_on_basis<L, R>(&mut self, basis: &[Monomial], trunc: Truncation, lhs: L, rhs: R)
    where
        L: Fn(&Series) -> Result<Series> + Sync + Send,
        R: Fn(&Series) -> Result<Series> + Sync + Send,
    {
        let outcomes = par::map(basis, |m| {
            let s = Series::term(m.clone(), num::One::one(), trunc);
            match (lhs(&s), rhs(&s)) {
                (Ok(a), Ok(b)) => Ok(a.first_difference(&b)),
                (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
            }
        });
        for (m, outcome) in basis.iter().zip(outcomes) {
            self.checked += 1;
            match outcome {
                Ok(None) => {}
                Ok(Some((mono, a, b))) => self.push_mismatch(Mismatch {
                    input: m.render(),
                    monomial: mono.render(),
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                }),
                Err(e) => self.fail_with(m.render(), e),
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// One line per report: `[pass] identity (pairing, N checked)`.
    pub fn summary_line(&self) -> String {
        format!("[{}] {} ({}, {} checked)", self.status, self.identity, self.pairing, self.checked)
    }

    pub fn render_text(&self) -> String {
        let mut s = self.summary_line();
        for m in &self.mismatches {
            s.push_str(&format!("\n    at {}: {} lhs={} rhs={}", m.input, m.monomial, m.lhs, m.rhs));
        }
        for n in &self.notes {
            s.push_str(&format!("\n    note: {n}"));
        }
        s
    }
}

/// All monomials of total degree at most `max_degree` in `vars`, including 1.
pub fn monomial_basis(vars: &[crate::series::VarId], max_degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier: Vec<(Monomial, usize)> = vec![(Monomial::one(), 0)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                let nm = m.mul(&Monomial::power(*v, 1));
                out.push(nm.clone());
                next.push((nm, i));
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::VarId;

    #[test]
    fn basis_counts() {
        let vars: Vec<VarId> = (0..9).map(|n| VarId::t(n, 0)).collect();
        // C(9 + 3, 3)
        assert_eq!(monomial_basis(&vars, 3).len(), 220);
        let vars2: Vec<VarId> = (0..9).flat_map(|n| [VarId::t(n, 0), VarId::t(n, 1)]).collect();
        assert_eq!(monomial_basis(&vars2, 3).len(), 1330);
        let mut b = monomial_basis(&vars2, 2);
        let n = b.len();
        b.sort();
        b.dedup();
        assert_eq!(b.len(), n);
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new("demo", "point", Truncation::default());
        r.compare_values("x", &1, &2);
        let j = r.to_json();
        assert_eq!(j["status"], "fail");
        assert_eq!(j["mismatches"][0]["lhs"], "1");
        assert!(j["truncation"]["max_var_index"].is_number());
    }
}
