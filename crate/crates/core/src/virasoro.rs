//! The operators `L_m = X_m + (hbar/2) Y_m` on the `q` coordinates, their
//! `u`-weighted sums `X_+`, `Y_+`, the Zassenhaus factor `Q_+`, and the map
//! `Delta` from colorless to colored constant-coefficient operators.
//!
//! The index bound of the window is the `q`-index bound; `q_n` and
//! `d/dq_n` vanish for `n <= 0`.

use crate::arith::{double_factorial_odd, int, Rational};
use crate::error::{Error, Result};
use crate::hodge::half_hbar;
use crate::operator::{Operator, OperatorClass};
use crate::pairing::PairingData;
use crate::report::{monomial_basis, Report};
use crate::series::{Monomial, ParamId, Series, Truncation, VarId, VarKind, UNBOUNDED};
use crate::special::{a_coeffs, c_const, phi_tilde};

fn q(n: u32, a: u32) -> VarId {
    VarId::q(n as i64, a).expect("q index >= 1")
}

fn u_pow(m: u32) -> Monomial {
    Monomial::power(ParamId::U, m)
}

/// All `q_n^alpha` with `1 <= n <= max_index`.
pub fn q_coordinates(rank: usize, max_index: u32) -> Vec<VarId> {
    (1..=max_index).flat_map(|n| (0..rank as u32).map(move |a| q(n, a))).collect()
}

/// Monomials in the `q` coordinates that fit `trunc`.
pub fn q_basis(rank: usize, trunc: &Truncation) -> Vec<Monomial> {
    monomial_basis(&q_coordinates(rank, trunc.max_var_index), trunc.max_t_degree)
}

/// `X_m = sum_{k>0} (k+m) q_k^alpha d/dq_{k+m}^alpha`.
pub fn build_x(m: u32, rank: usize, trunc: Truncation) -> Operator {
    let mut op = Operator::zero(trunc);
    for k in 1..=trunc.max_var_index.saturating_sub(m) {
        for a in 0..rank as u32 {
            op.add_atom(Monomial::power(q(k, a), 1), Monomial::power(q(k + m, a), 1), int((k + m) as i64));
        }
    }
    op
}

/// `Y_m = sum_{a+b=m} a b eta^{mu nu} d/dq_a^mu d/dq_b^nu` over ordered pairs with `a, b >= 1`.
pub fn build_y(m: u32, pairing: &PairingData, trunc: Truncation) -> Operator {
    let mut op = Operator::zero(trunc);
    for a in 1..m {
        let b = m - a;
        for (mu, nu, e) in pairing.inverse_entries() {
            let d = Monomial::from_factors([(q(a, mu), 1), (q(b, nu), 1)]);
            op.add_atom(Monomial::one(), d, int((a * b) as i64) * e);
        }
    }
    op
}

/// `L_m = X_m + (hbar/2) Y_m`.
pub fn build_l(m: u32, pairing: &PairingData, trunc: Truncation) -> Operator {
    let mut op = build_x(m, pairing.rank(), trunc);
    op.add_assign_op(&half_hbar(&build_y(m, pairing, trunc)));
    op
}

/// `L_m`, `X_+`, `Y_+` and the Zassenhaus factor `Q_+` in one window.
#[derive(Clone, Debug)]
pub struct VirasoroBundle {
    pub pairing: PairingData,
    pub trunc: Truncation,
    /// `a_1 .. a_M` with `M` the `u`-degree bound.
    pub a: Vec<Rational>,
    pub x_plus: Operator,
    pub y_plus: Operator,
    pub q_plus: Operator,
}

impl VirasoroBundle {
    pub fn build(pairing: &PairingData, trunc: Truncation) -> Result<Self> {
        if trunc.max_u_degree == UNBOUNDED {
            return Err(Error::InvalidConfig("the Virasoro sums need a bounded u-degree".into()));
        }
        let a = a_coeffs(trunc.max_u_degree as usize);
        let mut x_plus = Operator::zero(trunc);
        let mut y_plus = Operator::zero(trunc);
        for (i, am) in a.iter().enumerate() {
            let m = i as u32 + 1;
            x_plus.add_assign_op(&build_x(m, pairing.rank(), trunc).shift_params(&u_pow(m)).scale(am));
            y_plus.add_assign_op(&build_y(m, pairing, trunc).shift_params(&u_pow(m)).scale(am));
        }
        let q_plus = x_plus.zassenhaus_tail(&y_plus)?;
        Ok(VirasoroBundle { pairing: pairing.clone(), trunc, a, x_plus, y_plus, q_plus })
    }

    /// `sum a_m u^m L_m = X_+ + (hbar/2) Y_+`.
    pub fn l_sum(&self) -> Operator {
        let mut op = self.x_plus.clone();
        op.add_assign_op(&half_hbar(&self.y_plus));
        op
    }

    pub fn l(&self, m: u32) -> Operator {
        build_l(m, &self.pairing, self.trunc)
    }

    /// Atoms of `Q_+` whose derivatives are all in odd `q` coordinates.
    pub fn q_plus_odd(&self) -> Operator {
        odd_part(&self.q_plus)
    }
}

/// Keeps the atoms that differentiate only in odd-index coordinates.
pub fn odd_part(op: &Operator) -> Operator {
    op.filter(|a| a.derivs.vars().all(|(v, _)| v.index % 2 == 1))
}

/// `Delta(d^2/dq_m dq_n) = sum eta^{mu nu} d^2/dq_m^mu dq_n^nu` on colorless
/// constant-coefficient second-order operators.
pub fn delta_map(op_pt: &Operator, pairing: &PairingData, trunc: Truncation) -> Result<Operator> {
    let mut out = Operator::zero(trunc);
    let entries = pairing.inverse_entries();
    for a in op_pt.atoms() {
        let ds: Vec<VarId> = a.derivs.vars().flat_map(|(v, e)| std::iter::repeat_n(v, e as usize)).collect();
        let ok = a.mono.vars().next().is_none()
            && ds.len() == 2
            && ds.iter().all(|v| v.kind == VarKind::Q && v.color == 0);
        if !ok {
            return Err(Error::ClassMembership { class: "colorless g2'", atom: a.render() });
        }
        for (mu, nu, e) in &entries {
            let d = Monomial::from_factors([(ds[0].with_color(*mu), 1), (ds[1].with_color(*nu), 1)]);
            out.add_atom(a.mono.clone(), d, &a.coeff * e);
        }
    }
    Ok(out)
}

/// `[L_m, L_n] = (m - n) L_{m+n}`, with the halves `[X_m, X_n] = (m-n) X_{m+n}`
/// and `[X_m, Y_n] + [Y_m, X_n] = (m-n) Y_{m+n}` reported separately.
pub fn verify_bracket(m: u32, n: u32, pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let mut report = Report::new(format!("bracket[{m},{n}]"), pairing.name(), trunc);
    let rank = pairing.rank();
    let k = int(m as i64 - n as i64);
    let (xm, xn, xmn) = (build_x(m, rank, trunc), build_x(n, rank, trunc), build_x(m + n, rank, trunc));
    let (ym, yn, ymn) = (build_y(m, pairing, trunc), build_y(n, pairing, trunc), build_y(m + n, pairing, trunc));
    report.compare_operators("[X_m, X_n]", &xm.commutator(&xn)?, &xmn.scale(&k));
    let xy = &xm.commutator(&yn)? + &ym.commutator(&xn)?;
    report.compare_operators("[X_m, Y_n] + [Y_m, X_n]", &xy, &ymn.scale(&k));
    report.compare_operators("[Y_m, Y_n]", &ym.commutator(&yn)?, &Operator::zero(trunc));
    let lhs = build_l(m, pairing, trunc).commutator(&build_l(n, pairing, trunc))?;
    report.compare_operators("[L_m, L_n]", &lhs, &build_l(m + n, pairing, trunc).scale(&k));
    Ok(report)
}

/// Every bracket with `1 <= m, n <= max_mode`.
pub fn verify_brackets(max_mode: u32, pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let mut report = Report::new("brackets", pairing.name(), trunc);
    for m in 1..=max_mode {
        for n in 1..=max_mode {
            report.absorb(verify_bracket(m, n, pairing, trunc)?);
        }
    }
    Ok(report)
}

/// `exp(sum a_m u^m L_m) = exp(X_+) exp((hbar/2) Q_+)` on every `q` monomial
/// of the window, plus the structural facts about `Q_+`:
/// it lies in `g2'`, `ad_{X_+}^k Y_+ = Delta(ad^k_{X_+^pt} Y_+^pt)` for
/// `k <= 3`, and `Q_+,odd = Delta(Q^pt_+,odd)`.
pub fn verify_zassenhaus_virasoro(bundle: &VirasoroBundle) -> Result<Report> {
    let trunc = bundle.trunc;
    let pairing = &bundle.pairing;
    let mut report = Report::new("zassenhaus-virasoro", pairing.name(), trunc);
    if let Err(e) = OperatorClass::G2Prime.check(&bundle.q_plus) {
        report.fail_with("Q_+ in g2'", e.to_string());
    }
    let pt = VirasoroBundle::build(&PairingData::point(), trunc)?;
    for k in 0..=3 {
        let colored = bundle.x_plus.ad_power(k, &bundle.y_plus)?;
        let lifted = delta_map(&pt.x_plus.ad_power(k, &pt.y_plus)?, pairing, trunc)?;
        report.compare_operators(&format!("ad^{k} Y_+ = Delta(ad^{k} Y_+^pt)"), &colored, &lifted);
    }
    report.compare_operators("Q_+ = Delta(Q_+^pt)", &bundle.q_plus, &delta_map(&pt.q_plus, pairing, trunc)?);
    report.compare_operators("Q_+,odd = Delta(Q^pt_+,odd)", &bundle.q_plus_odd(), &delta_map(&pt.q_plus_odd(), pairing, trunc)?);

    let l_sum = bundle.l_sum();
    let hq = half_hbar(&bundle.q_plus);
    let x = &bundle.x_plus;
    report.compare_on_basis(
        &q_basis(pairing.rank(), &trunc),
        trunc,
        |s| l_sum.exp_apply(s, trunc),
        |s| x.exp_apply(&hq.exp_apply(s, trunc)?, trunc),
    );
    Ok(report)
}

/// `(1/(2n-1)!!) sum_{i=0}^n C_i u^{2i} Lambda_alpha(phi~_{n-i})`.
pub fn e_x_on_q_closed(n: u32, alpha: u32, trunc: Truncation) -> Series {
    let mut out = Series::zero(trunc);
    for i in 0..=n {
        let term = phi_tilde(n - i, alpha, trunc).shift(&u_pow(2 * i)).scale(&c_const(i));
        out.add_assign_series(&term);
    }
    out.scale(&(Rational::from_integer(double_factorial_odd(n as u64)).recip()))
}

/// `exp(X_+) q^alpha_{2n+1}` against its closed form for `n <= n_max` and every color.
pub fn verify_e_x_on_q(bundle: &VirasoroBundle, n_max: u32) -> Result<Report> {
    let trunc = bundle.trunc;
    let mut report = Report::new("eX-on-q", bundle.pairing.name(), trunc);
    for n in 0..=n_max {
        if 2 * n + 1 > trunc.max_var_index {
            report.note(format!("n = {n} skipped: q index {} beyond the window", 2 * n + 1));
            continue;
        }
        for a in 0..bundle.pairing.rank() as u32 {
            let lhs = bundle.x_plus.exp_apply(&Series::var(q(2 * n + 1, a), trunc), trunc)?;
            report.compare_series(&format!("q[{},{a}]", 2 * n + 1), &lhs, &e_x_on_q_closed(n, a, trunc));
        }
    }
    Ok(report)
}
