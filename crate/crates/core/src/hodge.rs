//! The Hodge-flow operators on the `t` coordinates: `D_l`, `W_omega` and its
//! three-way split, the factors `P` and `Q^W = Theta(Q_omega)`, and the
//! coordinate change `t -> t^`.

use crate::arith::{bernoulli, factorial, int, rat, Rational};
use crate::error::{Error, Result};
use crate::operator::{abelian_class, Operator, OperatorClass};
use crate::pairing::PairingData;
use crate::report::{monomial_basis, Report};
use crate::series::{Monomial, ParamId, Series, Substitution, Truncation, VarId, UNBOUNDED};
use crate::special::{self, OmegaMode};

/// All `t_n^alpha` with `n <= max_index` and `alpha < rank`.
pub fn t_coordinates(rank: usize, max_index: u32) -> Vec<VarId> {
    (0..=max_index).flat_map(|n| (0..rank as u32).map(move |a| VarId::t(n, a))).collect()
}

/// Monomials in the `t` coordinates that fit `trunc`.
pub fn t_basis(rank: usize, trunc: &Truncation) -> Vec<Monomial> {
    monomial_basis(&t_coordinates(rank, trunc.max_var_index), trunc.max_t_degree)
}

fn t(n: u32, a: u32) -> VarId {
    VarId::t(n, a)
}

fn d1(v: VarId) -> Monomial {
    Monomial::power(v, 1)
}

fn d2(a: VarId, b: VarId) -> Monomial {
    Monomial::from_factors([(a, 1), (b, 1)])
}

fn omega(l: u32) -> Monomial {
    Monomial::power(ParamId::Omega(l), 1)
}

fn hbar() -> Monomial {
    Monomial::power(ParamId::Hbar, 1)
}

/// Largest `l` whose `omega_l` fits the window.
fn max_l(trunc: &Truncation) -> u32 {
    assert!(trunc.max_omega_weight != UNBOUNDED, "omega sums need a bounded weight");
    trunc.max_omega_weight.div_ceil(2)
}

/// `(hbar / 2) * op`.
pub fn half_hbar(op: &Operator) -> Operator {
    op.shift_params(&hbar()).scale(&rat(1, 2))
}

/// `sum_{i + j = 2l - 2} (-1)^i sum eta^{mu nu} d/dt_i^mu d/dt_j^nu`, scaled by `coeff`.
fn second_order_part(l: u32, pairing: &PairingData, coeff: &Monomial, c: &Rational, op: &mut Operator) {
    for i in 0..=2 * l - 2 {
        let j = 2 * l - 2 - i;
        let sign = if i % 2 == 0 { int(1) } else { int(-1) };
        for (mu, nu, e) in pairing.inverse_entries() {
            op.add_atom(coeff.clone(), d2(t(i, mu), t(j, nu)), &sign * &e * c);
        }
    }
}

/// `D_l = d/dt^0_{2l} - sum t_i^a d/dt^a_{i+2l-1} + (hbar/2) sum (-1)^i eta^{mu nu} d_{t_i^mu} d_{t_{2l-2-i}^nu}`.
pub fn build_d(l: u32, pairing: &PairingData, trunc: Truncation) -> Operator {
    assert!(l >= 1);
    let mut op = Operator::zero(trunc);
    op.add_atom(Monomial::one(), d1(t(2 * l, 0)), int(1));
    for i in 0..=trunc.max_var_index.saturating_sub(2 * l - 1) {
        for a in 0..pairing.rank() as u32 {
            op.add_atom(d1(t(i, a)), d1(t(i + 2 * l - 1, a)), int(-1));
        }
    }
    second_order_part(l, pairing, &hbar(), &rat(1, 2), &mut op);
    op
}

/// `W_omega = frak_B + W' + (hbar/2) W''`, with `l` bounded by the omega-weight.
#[derive(Clone, Debug)]
pub struct WOmega {
    /// `-sum omega_l t_i^a d/dt^a_{i+2l-1}`, in `g1`.
    pub bfrak: Operator,
    /// `sum omega_l d/dt^0_{2l}`, in `g2`.
    pub w_prime: Operator,
    /// `sum omega_l sum (-1)^i eta^{mu nu} d_{t_i^mu} d_{t_j^nu}`, in `g2'`.
    pub w_dprime: Operator,
}

impl WOmega {
    pub fn build(pairing: &PairingData, trunc: Truncation) -> Self {
        let mut bfrak = Operator::zero(trunc);
        let mut w_prime = Operator::zero(trunc);
        let mut w_dprime = Operator::zero(trunc);
        for l in 1..=max_l(&trunc) {
            let w = omega(l);
            w_prime.add_atom(w.clone(), d1(t(2 * l, 0)), int(1));
            for i in 0..=trunc.max_var_index.saturating_sub(2 * l - 1) {
                for a in 0..pairing.rank() as u32 {
                    bfrak.add_atom(w.mul(&d1(t(i, a))), d1(t(i + 2 * l - 1, a)), int(-1));
                }
            }
            second_order_part(l, pairing, &w, &int(1), &mut w_dprime);
        }
        WOmega { bfrak, w_prime, w_dprime }
    }

    /// `sum omega_l D_l`.
    pub fn total(&self) -> Operator {
        let mut op = &self.bfrak + &self.w_prime;
        op.add_assign_op(&half_hbar(&self.w_dprime));
        op
    }

    pub fn instantiate(&self, mode: OmegaMode, target: Truncation) -> Result<WOmega> {
        Ok(WOmega {
            bfrak: instantiate_operator(&self.bfrak, mode, target)?,
            w_prime: instantiate_operator(&self.w_prime, mode, target)?,
            w_dprime: instantiate_operator(&self.w_dprime, mode, target)?,
        })
    }
}

/// Replaces each `omega_l` in the coefficients of `op` according to `mode`.
pub fn instantiate_operator(op: &Operator, mode: OmegaMode, target: Truncation) -> Result<Operator> {
    let w = op.truncation().max_omega_weight;
    mode.check_source(w, &target)?;
    let weight = if w == UNBOUNDED { mode.needed_weight(&target) } else { w };
    op.substitute_params(&mode.rule(weight, target), target)
}

/// The window an omega-side object must be built in so that instantiating it
/// by `mode` into `target` loses nothing.
pub fn source_window(mode: OmegaMode, target: Truncation) -> Truncation {
    target.with_omega_weight(mode.needed_weight(&target))
}

/// `Theta(x^i y^j) = sum eta^{mu nu} d/dt_i^mu d/dt_j^nu`, extended linearly;
/// parameters in `b` become coefficients.
pub fn theta_map(b: &Series, pairing: &PairingData, trunc: Truncation) -> Result<Operator> {
    let mut op = Operator::zero(trunc);
    let entries = pairing.inverse_entries();
    for (m, c) in b.terms() {
        if m.vars().next().is_some() {
            return Err(Error::InvalidConfig(format!("Theta takes series in x, y and parameters; got {}", m.render())));
        }
        let i = m.exponent(ParamId::X);
        let j = m.exponent(ParamId::Y);
        let rest = m
            .div(&Monomial::from_factors([(ParamId::X, i), (ParamId::Y, j)]))
            .expect("divides");
        for (mu, nu, e) in &entries {
            op.add_atom(rest.clone(), d2(t(i, *mu), t(j, *nu)), c * e);
        }
    }
    Ok(op)
}

/// `P = -sum_{i>=1} R_i(omega) d/dt^0_{1+i}`.
pub fn build_p(trunc: Truncation) -> Operator {
    let mut op = Operator::zero(trunc);
    for i in 1..=trunc.max_omega_weight.min(trunc.max_var_index) {
        for (m, c) in special::r_poly(i).terms() {
            op.add_atom(m.clone(), d1(t(1 + i, 0)), -c.clone());
        }
    }
    op
}

/// `Q^W = Theta(Q_omega)` through the window's omega-weight.
pub fn build_q_w(pairing: &PairingData, trunc: Truncation) -> Result<Operator> {
    theta_map(&special::q_omega(trunc.max_omega_weight)?, pairing, trunc)
}

/// `t^_n^alpha = sum_{i=0}^n R_i t^alpha_{n-i}`, minus `R_{n-1}` when `alpha = 0, n >= 2`.
pub fn hat_t(n: u32, alpha: u32, trunc: Truncation) -> Series {
    let mut out = Series::zero(trunc);
    for i in 0..=n {
        let v = Monomial::power(t(n - i, alpha), 1);
        for (m, c) in special::r_poly(i).terms() {
            out.add_term(m.mul(&v), c.clone());
        }
    }
    if alpha == 0 && n >= 2 {
        for (m, c) in special::r_poly(n - 1).terms() {
            out.add_term(m.clone(), -c.clone());
        }
    }
    out
}

/// The substitution `t_n^alpha -> t^_n^alpha` on every coordinate of the window.
pub fn hat_t_rule(rank: usize, trunc: Truncation) -> Substitution {
    let mut rule = Substitution::new();
    for v in t_coordinates(rank, trunc.max_var_index) {
        rule.insert(v, hat_t(v.index, v.color, trunc));
    }
    rule
}

/// Closed form of `ad_frak_B^{n-1} W'`:
/// `sum_{l_1..l_n} prod omega_{l_j} d/dt^0_{1 + sum (2 l_j - 1)}`.
pub fn ad_tower_w_prime_closed(n: u32, trunc: Truncation) -> Operator {
    let mut op = Operator::zero(trunc);
    let top = max_l(&trunc);
    let mut ls = vec![1u32; n as usize];
    loop {
        let idx: u32 = 1 + ls.iter().map(|l| 2 * l - 1).sum::<u32>();
        let m = Monomial::from_factors(ls.iter().map(|&l| (ParamId::Omega(l), 1)));
        op.add_atom(m, d1(t(idx, 0)), int(1));
        let mut k = 0;
        loop {
            if k == ls.len() {
                return op;
            }
            if ls[k] < top {
                ls[k] += 1;
                break;
            }
            ls[k] = 1;
            k += 1;
        }
    }
}

/// Checks `exp(X + Y) = exp(X) exp(sum (-1)^{n-1}/n! ad_X^{n-1} Y)` for
/// `X` in `g1` and `Y` in `g2` or `g2'`, on every monomial of the window in
/// the coordinates the two operators touch.
pub fn verify_zassenhaus_special(x: &Operator, y: &Operator, trunc: Truncation) -> Result<Report> {
    OperatorClass::G1.check(x)?;
    let mut report = Report::new("zassenhaus-special", "-", trunc);
    let Some(class) = abelian_class(y)? else {
        report.note("Y = 0");
        return Ok(report);
    };
    class.check(&x.commutator(y)?)?;
    let sum = x.try_add(y)?;
    let tail = x.zassenhaus_tail(y)?;
    let mut vars: Vec<VarId> = x.atoms().chain(y.atoms()).flat_map(|a| {
        a.mono.vars().chain(a.derivs.vars()).map(|(v, _)| v).collect::<Vec<_>>()
    }).collect();
    vars.sort();
    vars.dedup();
    let basis = monomial_basis(&vars, trunc.max_t_degree.min(8));
    report.compare_on_basis(
        &basis,
        trunc,
        |s| sum.exp_apply(s, trunc),
        |s| x.exp_apply(&tail.exp_apply(s, trunc)?, trunc),
    );
    Ok(report)
}

/// The factor operators of the decomposition of `exp(W)`.
#[derive(Clone, Debug)]
pub struct HodgeFactors {
    pub w: WOmega,
    pub p: Operator,
    pub q_w: Operator,
}

impl HodgeFactors {
    /// Factors with free `omega`.
    pub fn omega(pairing: &PairingData, trunc: Truncation) -> Result<Self> {
        Ok(HodgeFactors { w: WOmega::build(pairing, trunc), p: build_p(trunc), q_w: build_q_w(pairing, trunc)? })
    }

    /// Factors after `omega_l -> -B_{2l}/(2l(2l-1)) u^{2(2l-1)}`; `Q^W` is built
    /// directly as `Theta(Q_u)`.
    pub fn from_u(pairing: &PairingData, trunc: Truncation) -> Result<Self> {
        let source = source_window(OmegaMode::FromU, trunc);
        let w = WOmega::build(pairing, source).instantiate(OmegaMode::FromU, trunc)?;
        let p = instantiate_operator(&build_p(source), OmegaMode::FromU, trunc)?;
        let q_w = theta_map(&special::q_u(trunc.max_u_degree)?, pairing, trunc)?;
        Ok(HodgeFactors { w, p, q_w })
    }
}

/// Applies `exp(frak_B) exp(hbar/2 Q^W) exp(P)` (or with the two right
/// factors swapped) to `s`.
fn factored_apply(f: &HodgeFactors, s: &Series, trunc: Truncation, p_first: bool) -> Result<Series> {
    let hq = half_hbar(&f.q_w);
    let inner = if p_first {
        hq.exp_apply(&f.p.exp_apply(s, trunc)?, trunc)?
    } else {
        f.p.exp_apply(&hq.exp_apply(s, trunc)?, trunc)?
    };
    f.w.bfrak.exp_apply(&inner, trunc)
}

fn verify_factors(identity: &str, f: &HodgeFactors, pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let mut report = Report::new(identity, pairing.name(), trunc);
    let total = f.w.total();
    let hq = half_hbar(&f.q_w);
    report.compare_operators("[P, Q^W]", &f.p.commutator(&hq)?, &Operator::zero(trunc));
    report.compare_operators("P = Zassenhaus tail of W'", &f.w.bfrak.zassenhaus_tail(&f.w.w_prime)?, &f.p);
    report.compare_operators("Q^W = Zassenhaus tail of W''", &f.w.bfrak.zassenhaus_tail(&f.w.w_dprime)?, &f.q_w);
    let basis = t_basis(pairing.rank(), &trunc);
    report.compare_on_basis(
        &basis,
        trunc,
        |s| total.exp_apply(s, trunc),
        |s| factored_apply(f, s, trunc, true),
    );
    report.compare_on_basis(
        &basis,
        trunc,
        |s| factored_apply(f, s, trunc, true),
        |s| factored_apply(f, s, trunc, false),
    );
    Ok(report)
}

/// `exp(W_omega) = exp(frak_B) exp(hbar/2 Q^W) exp(P)` on the full `t` basis
/// of the window, in both orders of the commuting right factors, together
/// with the symbolic identification of `P` and `Q^W` as Zassenhaus tails.
pub fn verify_hodge_split(pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let f = HodgeFactors::omega(pairing, trunc)?;
    let mut report = verify_factors("hodge-split", &f, pairing, trunc)?;
    for n in 1..=3u32 {
        let tower = f.w.bfrak.ad_power(n as usize - 1, &f.w.w_prime)?;
        report.compare_operators(&format!("ad^{} W' closed form", n - 1), &tower, &ad_tower_w_prime_closed(n, trunc));
    }
    Ok(report)
}

/// The same factorisation after the `u`-substitution, with `Q^W_{t,u}`
/// built as `Theta(Q_u)` and compared to the instantiated `Q^W_{t,omega}`.
pub fn verify_hodge_split_from_u(pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let f = HodgeFactors::from_u(pairing, trunc)?;
    let mut report = verify_factors("hodge-split-from-u", &f, pairing, trunc)?;
    let source = source_window(OmegaMode::FromU, trunc);
    let q_inst = instantiate_operator(&build_q_w(pairing, source)?, OmegaMode::FromU, trunc)?;
    report.compare_operators("Theta(Q_u) = Q^W_{t,omega}|u", &f.q_w, &q_inst);
    Ok(report)
}

/// `t^` closed form against `exp(frak_B) exp(P) t_n^alpha`, and the
/// generating identity
/// `z g_0 + sum (-z)^n t^_n = (z g_0 + sum (-z)^n t_n) exp(-B^omega(1/z))`
/// coefficientwise in `z^0 .. z^{n_max}` for every color.
pub fn verify_hat_t(pairing: &PairingData, trunc: Truncation, n_max: u32) -> Result<Report> {
    let mut report = Report::new("hat-t", pairing.name(), trunc);
    let w = WOmega::build(pairing, trunc);
    let p = build_p(trunc);
    let n_max = n_max.min(trunc.max_var_index);
    for n in 0..=n_max {
        for a in 0..pairing.rank() as u32 {
            let s = Series::var(t(n, a), trunc);
            let flowed = w.bfrak.exp_apply(&p.exp_apply(&s, trunc)?, trunc)?;
            report.compare_series(&format!("t[{n},{a}]"), &flowed, &hat_t(n, a, trunc));
        }
    }

    // z is the parameter Z here, with positive powers.
    let gen_trunc = Truncation { max_t_degree: UNBOUNDED, ..trunc };
    let mut minus_b = Series::zero(gen_trunc);
    for l in 1..=max_l(&trunc) {
        minus_b.add_term(Monomial::from_factors([(ParamId::Omega(l), 1), (ParamId::Z, 2 * l - 1)]), int(1));
    }
    let e = minus_b.exp()?;
    for a in 0..pairing.rank() as u32 {
        let mut lhs = Series::zero(gen_trunc);
        let mut base = Series::zero(gen_trunc);
        if a == 0 {
            lhs.add_term(Monomial::power(ParamId::Z, 1), int(1));
            base.add_term(Monomial::power(ParamId::Z, 1), int(1));
        }
        for n in 0..=trunc.max_var_index {
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            let zn = Monomial::power(ParamId::Z, n);
            for (m, c) in hat_t(n, a, gen_trunc).terms() {
                lhs.add_term(m.mul(&zn), &sign * c);
            }
            base.add_term(Monomial::power(t(n, a), 1).mul(&zn), sign.clone());
        }
        let rhs = &base * &e;
        let keep = |m: &Monomial| m.exponent(ParamId::Z) <= n_max;
        report.compare_series(&format!("generating color {a}"), &lhs.filter(keep), &rhs.filter(keep));
    }
    Ok(report)
}

/// `exp(W) Z` with `omega` specialised by `mode` into `trunc`.
pub fn hodge_flow(z: &Series, pairing: &PairingData, mode: OmegaMode, trunc: Truncation) -> Result<Series> {
    let source = source_window(mode, trunc);
    let w = instantiate_operator(&WOmega::build(pairing, source).total(), mode, trunc)?;
    w.exp_apply(z, trunc)
}

/// The flow in `s` is generated by the `D_l`: the derivative in `s_{2l-1}` at
/// `s = 0` of the `from_s` flow is `B_{2l}/(2l)! D_l Z`.
pub fn verify_flow_generator(z: &Series, pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let mut report = Report::new("flow-generator", pairing.name(), trunc);
    let flowed = hodge_flow(z, pairing, OmegaMode::FromS, trunc)?;
    let zt = z.retruncate(trunc);
    for l in 1..=max_l(&trunc) {
        let ds = flowed.derivative(ParamId::S(2 * l - 1)).filter(|m| m.params().all(|(p, _)| !matches!(p, ParamId::S(_))));
        let c = bernoulli(2 * l as usize) / Rational::from_integer(factorial(2 * l as u64));
        let expect = build_d(l, pairing, trunc).apply(&zt).scale(&c);
        report.compare_series(&format!("d/ds[{}]", 2 * l - 1), &ds, &expect);
    }
    Ok(report)
}

/// `exp(frak_B) exp(P) exp(hbar/2 Q^W) Z = [exp(hbar/2 Q^W) Z]_{t -> t^}`.
pub fn verify_hat_t_corollary(z: &Series, pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let mut report = Report::new("hat-t-corollary", pairing.name(), trunc);
    let f = HodgeFactors::omega(pairing, trunc)?;
    let zt = z.retruncate(trunc);
    let qz = half_hbar(&f.q_w).exp_apply(&zt, trunc)?;
    let lhs = f.w.bfrak.exp_apply(&f.p.exp_apply(&qz, trunc)?, trunc)?;
    let rhs = qz.substitute(&hat_t_rule(pairing.rank(), trunc), trunc)?;
    report.compare_series("Z", &lhs, &rhs);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::hodge_omega_value;

    fn small() -> Truncation {
        Truncation::new(2, 5, 4, 1, 3)
    }

    #[test]
    fn d1_point_render() {
        let d = build_d(1, &PairingData::point(), Truncation::new(2, 2, 0, 1, 0));
        assert_eq!(d.coefficient(&Monomial::one(), &d1(t(2, 0))), int(1));
        assert_eq!(d.coefficient(&d1(t(0, 0)), &d1(t(1, 0))), int(-1));
        assert_eq!(d.coefficient(&hbar(), &d2(t(0, 0), t(0, 0))), rat(1, 2));
    }

    #[test]
    fn split_sums_to_omega_d() {
        let pairing = PairingData::hyperbolic2();
        let trunc = small();
        let w = WOmega::build(&pairing, trunc);
        let mut expect = Operator::zero(trunc);
        for l in 1..=2 {
            expect.add_assign_op(&build_d(l, &pairing, trunc).shift_params(&omega(l)));
        }
        assert_eq!(w.total(), expect);
        OperatorClass::G1.check(&w.bfrak).unwrap();
        OperatorClass::G2.check(&w.w_prime).unwrap();
        OperatorClass::G2Prime.check(&w.w_dprime).unwrap();
    }

    #[test]
    fn p_is_tail_of_w_prime() {
        let trunc = small();
        let w = WOmega::build(&PairingData::point(), trunc);
        assert_eq!(w.bfrak.zassenhaus_tail(&w.w_prime).unwrap(), build_p(trunc));
        assert_eq!(w.bfrak.commutator(&w.w_prime).unwrap(), ad_tower_w_prime_closed(2, trunc));
    }

    #[test]
    fn hodge_split_small_windows() {
        for pairing in [PairingData::point(), PairingData::hyperbolic2()] {
            let r = verify_hodge_split(&pairing, small()).unwrap();
            assert!(r.passed(), "{}", r.render_text());
            let r = verify_hodge_split_from_u(&pairing, Truncation::new(2, 5, 4, 1, UNBOUNDED)).unwrap();
            assert!(r.passed(), "{}", r.render_text());
        }
    }

    #[test]
    fn hat_t_examples() {
        let trunc = Truncation::new(1, 4, 0, 0, 3);
        assert_eq!(hat_t(0, 1, trunc), Series::var(t(0, 1), trunc));
        // t^_2^0 = t_2 + R_1 t_1 + R_2 t_0 - R_1 with R_1 = -omega_1, R_2 = omega_1^2/2
        let h = hat_t(2, 0, trunc);
        assert_eq!(h.coefficient(&omega(1)), int(1));
        assert_eq!(h.coefficient(&omega(1).mul(&d1(t(1, 0)))), int(-1));
        assert_eq!(h.coefficient(&Monomial::power(ParamId::Omega(1), 2).mul(&d1(t(0, 0)))), rat(1, 2));
        let r = verify_hat_t(&PairingData::hyperbolic2(), trunc, 4).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn zassenhaus_special_on_d_parts() {
        let trunc = Truncation::new(3, 4, 0, 2, 3);
        let w = WOmega::build(&PairingData::point(), trunc);
        let r = verify_zassenhaus_special(&w.bfrak, &half_hbar(&w.w_dprime), trunc).unwrap();
        assert!(r.passed(), "{}", r.render_text());
        assert!(verify_zassenhaus_special(&w.w_prime, &w.bfrak, trunc).is_err());
    }

    #[test]
    fn flow_generator_and_corollary() {
        let pairing = PairingData::point();
        let trunc = Truncation::new(3, 4, 0, 2, 3);
        let z = crate::series::random_series(7, trunc.with_omega_weight(0), 12);
        let r = verify_flow_generator(&z, &pairing, trunc).unwrap();
        assert!(r.passed(), "{}", r.render_text());
        let r = verify_hat_t_corollary(&z, &pairing, trunc).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn from_u_omega_value() {
        let trunc = Truncation::new(1, 4, 6, 0, 0);
        let w = WOmega::build(&PairingData::point(), source_window(OmegaMode::FromU, trunc))
            .instantiate(OmegaMode::FromU, trunc)
            .unwrap();
        let u2 = Monomial::power(ParamId::U, 2);
        assert_eq!(w.w_prime.coefficient(&u2, &d1(t(2, 0))), hodge_omega_value(1));
        assert_eq!(hodge_omega_value(1), rat(-1, 12));
    }
}

