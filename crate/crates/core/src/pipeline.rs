//! The change of variables `t -> (u, q)`, the end-to-end comparison of the
//! Hodge flow with the Virasoro flow, and the suite runner behind the CLI.

use std::fmt;
use std::str::FromStr;

use num::One;

use crate::arith::{double_factorial_odd, format_rational, hodge_omega_value, int, rat, Rational};
use crate::error::{Error, Result};
use crate::hodge::{self, theta_map, HodgeFactors};
use crate::operator::Operator;
use crate::pairing::PairingData;
use crate::report::Report;
use crate::series::{random_series_in, Monomial, ParamId, RandomSpec, Series, Substitution, Truncation, VarId, VarKind, UNBOUNDED};
use crate::special::{self, c_const, phi_tilde, OmegaMode};
use crate::virasoro::{self, delta_map, VirasoroBundle};
use crate::witten;

/// The `q`-side window for a `t`-side window: `t_n` involves `q_1 .. q_{2n+1}`.
pub fn q_window(t_trunc: Truncation) -> Truncation {
    let i = t_trunc.max_var_index;
    let qi = if i == UNBOUNDED { UNBOUNDED } else { 2 * i + 1 };
    t_trunc.with_var_index(qi).with_omega_weight(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanMode {
    /// `t_n^alpha -> Lambda_alpha(phi~_n) (+ (-1)^n C_{n-1} u^{2(n-1)} for alpha = 0, n >= 2)`.
    Full,
    /// `t_k^alpha -> (2k-1)!! q_{2k+1}^alpha`.
    UZero,
}

/// A substitution of every `t` coordinate of a window by a series in `q`, `u`.
#[derive(Clone, Debug)]
pub struct SubstitutionPlan {
    pub mode: PlanMode,
    pub rank: usize,
    /// The `t`-side window; the image lives in [`q_window`] of it.
    pub trunc: Truncation,
}

impl SubstitutionPlan {
    pub fn new(mode: PlanMode, rank: usize, trunc: Truncation) -> Self {
        SubstitutionPlan { mode, rank, trunc }
    }

    pub fn target(&self) -> Truncation {
        q_window(self.trunc)
    }

    /// Image of `t_n^alpha`.
    pub fn image(&self, n: u32, alpha: u32) -> Series {
        let target = self.target();
        match self.mode {
            PlanMode::Full => {
                let mut s = phi_tilde(n, alpha, target);
                if alpha == 0 && n >= 2 {
                    let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
                    s.add_term(Monomial::power(ParamId::U, 2 * (n - 1)), sign * c_const(n - 1));
                }
                s
            }
            PlanMode::UZero => Series::term(
                Monomial::power(q(2 * n + 1, alpha), 1),
                Rational::from_integer(double_factorial_odd(n as u64)),
                target,
            ),
        }
    }

    pub fn rule(&self) -> Substitution {
        let mut rule = Substitution::new();
        for v in hodge::t_coordinates(self.rank, self.trunc.max_var_index) {
            rule.insert(v, self.image(v.index, v.color));
        }
        rule
    }
}

fn q(n: u32, a: u32) -> VarId {
    VarId::q(n as i64, a).expect("q index >= 1")
}

/// `s|_{t -> (u, q)}` under `plan`.
pub fn change_vars(s: &Series, plan: &SubstitutionPlan) -> Result<Series> {
    if let Some((m, _)) = s.terms().find(|(m, _)| m.vars().any(|(v, _)| v.kind == VarKind::Q)) {
        return Err(Error::InvalidConfig(format!("change of variables expects a series in t, found {}", m.render())));
    }
    s.substitute(&plan.rule(), plan.target())
}

/// Transports a constant-coefficient differential operator in `t` through
/// `t_k^alpha = (2k-1)!! q_{2k+1}^alpha`: `d/dt_k -> (1/(2k-1)!!) d/dq_{2k+1}`.
pub fn u_zero_operator(op: &Operator, target: Truncation) -> Result<Operator> {
    let mut out = Operator::zero(target);
    for a in op.atoms() {
        if a.mono.vars().next().is_some() {
            return Err(Error::ClassMembership { class: "constant-coefficient", atom: a.render() });
        }
        let mut c = a.coeff.clone();
        let mut ds = Vec::new();
        for (v, e) in a.derivs.vars() {
            let f = Rational::from_integer(double_factorial_odd(v.index as u64));
            for _ in 0..e {
                c /= &f;
            }
            ds.push((q(2 * v.index + 1, v.color), e));
        }
        out.add_atom(a.mono.clone(), Monomial::from_factors(ds), c);
    }
    Ok(out)
}

/// `{exp(B_{t,u}) exp(P_{t,u}) G}|_{t -> (u,q)} = exp(X_+) {G|_{t_k = (2k-1)!! q_{2k+1}}}`.
pub fn verify_intertwine(
    inputs: &[(String, Series)],
    factors: &HodgeFactors,
    bundle: &VirasoroBundle,
    pairing: &PairingData,
    trunc: Truncation,
) -> Result<Report> {
    let mut report = Report::new("intertwine", pairing.name(), trunc);
    let full = SubstitutionPlan::new(PlanMode::Full, pairing.rank(), trunc);
    let zero = SubstitutionPlan::new(PlanMode::UZero, pairing.rank(), trunc);
    let qt = full.target();
    let outcomes = crate::par::map(inputs, |(name, g)| -> Result<(String, Series, Series)> {
        let g = g.retruncate(trunc);
        let flowed = factors.w.bfrak.exp_apply(&factors.p.exp_apply(&g, trunc)?, trunc)?;
        let lhs = change_vars(&flowed, &full)?;
        let rhs = bundle.x_plus.exp_apply(&change_vars(&g, &zero)?, qt)?;
        Ok((name.clone(), lhs, rhs))
    });
    for o in outcomes {
        match o {
            Ok((name, lhs, rhs)) => report.compare_series(&name, &lhs, &rhs),
            Err(e) => report.fail_with("intertwine", e.to_string()),
        }
    }
    Ok(report)
}

/// The basis inputs `t_n^alpha` (`n <= n_max`) and `count` random `G` of
/// `t`-degree at most 2 in `t` and `u`.
pub fn intertwine_inputs(rank: usize, trunc: Truncation, n_max: u32, count: usize, seed: u64) -> Vec<(String, Series)> {
    let mut out = Vec::new();
    for n in 0..=n_max.min(trunc.max_var_index) {
        for a in 0..rank as u32 {
            out.push((format!("t[{n},{a}]"), Series::var(VarId::t(n, a), trunc)));
        }
    }
    let g_trunc = trunc.with_t_degree(trunc.max_t_degree.min(2));
    let spec = RandomSpec {
        vars: hodge::t_coordinates(rank, trunc.max_var_index.min(6)),
        params: if trunc.max_u_degree > 0 { vec![ParamId::U] } else { vec![] },
        max_param_exponent: 2,
    };
    for i in 0..count {
        let g = random_series_in(seed.wrapping_add(i as u64), g_trunc, 6, &spec);
        out.push((format!("random G #{i}"), g.retruncate(trunc)));
    }
    out
}

/// Operator-level facts the theorem's proof rests on: `Q^W_{q,u} = Q_+,odd`
/// and `Theta(x^i y^j)|_{u=0} = Delta(Theta^pt(x^i y^j)|_{u=0})` for `i, j <= 4`.
pub fn verify_theorem_operators(pairing: &PairingData, bundle: &VirasoroBundle, trunc: Truncation) -> Result<Report> {
    let mut report = Report::new("theorem-operators", pairing.name(), trunc);
    let qt = q_window(trunc);
    let op_trunc = trunc.with_omega_weight(0);
    let q_w = theta_map(&special::q_u(trunc.max_u_degree)?, pairing, op_trunc)?;
    report.compare_operators("Q^W_{q,u} = Q_+,odd", &u_zero_operator(&q_w, qt)?, &bundle.q_plus_odd());
    let point = PairingData::point();
    let top = 4.min(trunc.max_var_index);
    let xy = Truncation::unbounded();
    for i in 0..=top {
        for j in 0..=top {
            let m = Series::term(Monomial::from_factors([(ParamId::X, i), (ParamId::Y, j)]), int(1), xy);
            let colored = u_zero_operator(&theta_map(&m, pairing, op_trunc)?, qt)?;
            let lifted = delta_map(&u_zero_operator(&theta_map(&m, &point, op_trunc)?, qt)?, pairing, qt)?;
            report.compare_operators(&format!("Theta(x^{i} y^{j})"), &colored, &lifted);
        }
    }
    Ok(report)
}

/// Both sides of the main identity for one input `Z` (any series in `t`, `u`, `hbar`).
pub struct TheoremSides {
    /// `exp(W_u) Z` before the change of variables.
    pub hodge_t: Series,
    pub lhs: Series,
    pub rhs: Series,
}

pub fn theorem_sides(z: &Series, pairing: &PairingData, bundle: &VirasoroBundle, trunc: Truncation) -> Result<TheoremSides> {
    let z = z.retruncate(trunc);
    let hodge_t = hodge::hodge_flow(&z, pairing, OmegaMode::FromU, trunc)?;
    let lhs = change_vars(&hodge_t, &SubstitutionPlan::new(PlanMode::Full, pairing.rank(), trunc))?;
    let z0 = change_vars(&z, &SubstitutionPlan::new(PlanMode::UZero, pairing.rank(), trunc))?;
    let rhs = bundle.l_sum().exp_apply(&z0, q_window(trunc))?;
    Ok(TheoremSides { hodge_t, lhs, rhs })
}

/// `{exp(W_u) Z}|_{t -> (u,q)} = exp(sum a_m u^m L_m) {Z|_{t_k = (2k-1)!! q_{2k+1}}}`
/// for every named input.
pub fn verify_theorem(inputs: &[(String, Series)], pairing: &PairingData, trunc: Truncation) -> Result<Report> {
    let mut report = Report::new("theorem", pairing.name(), trunc);
    let bundle = VirasoroBundle::build(pairing, q_window(trunc))?;
    let outcomes = crate::par::map(inputs, |(name, z)| theorem_sides(z, pairing, &bundle, trunc).map(|s| (name.clone(), s)));
    for o in outcomes {
        match o {
            Ok((name, s)) => report.compare_series(&name, &s.lhs, &s.rhs),
            Err(e) => report.fail_with("theorem", e.to_string()),
        }
    }
    Ok(report)
}

/// Removes a known factor `hbar^offset` from every term.
pub fn unshift_hbar(s: &Series, offset: u32, target: Truncation) -> Result<Series> {
    let h = Monomial::power(ParamId::Hbar, offset);
    let mut out = Series::zero(target);
    for (m, c) in s.terms() {
        let Some(rest) = m.div(&h) else {
            return Err(Error::InvalidConfig(format!("term {} has hbar-degree below the offset {offset}", m.render())));
        };
        out.add_term(rest, c.clone());
    }
    Ok(out)
}

/// The point case with the DVV series: the theorem on `hbar^K Z` (the shift
/// commutes with every operator involved), and the genus-one check that the
/// `hbar^0 u^2 t_0` coefficient of `log(exp(W_u) Z)` is `-1/24`.
pub fn verify_theorem_point(max_genus: u32, trunc: Truncation) -> Result<Report> {
    let pairing = PairingData::point();
    let z = witten::z_point(max_genus, trunc)?;
    let shifted = z.series.truncation();
    let mut report = verify_theorem(&[("Z_pt".into(), z.series.clone())], &pairing, shifted)?;
    report.identity = "theorem-point".into();
    report.truncation = trunc;
    report.note(format!("Z stored as hbar^-{} times a series with hbar <= {}", z.offset, shifted.max_hbar_degree));

    let value = genus_one_lambda(&z, trunc)?;
    report.compare_values("hbar^0 u^2 t[0,0] of log Z_H", &format_rational(&value), &format_rational(&rat(-1, 24)));
    Ok(report)
}

/// Coefficient of `hbar^0 u^2 t_0` in `log(exp(W_u) Z)`. Only one `D_1`
/// application carries `u^2`, so `t`-degree 3 input suffices and the
/// `t`-degree `<= 2` part of the result is free of `hbar^{-1}`.
pub fn genus_one_lambda(z: &witten::ShiftedSeries, trunc: Truncation) -> Result<Rational> {
    if trunc.max_t_degree < 3 || trunc.max_u_degree < 2 {
        return Err(Error::InvalidConfig("the genus-one check needs t-degree >= 3 and u-degree >= 2".into()));
    }
    let shifted = z.series.truncation();
    let flowed = hodge::hodge_flow(&z.series, &PairingData::point(), OmegaMode::FromU, shifted)?;
    let low = flowed.filter(|m| m.var_degree() <= 2);
    let target = shifted.with_t_degree(2).with_hbar_degree(shifted.max_hbar_degree - z.offset);
    let log = unshift_hbar(&low, z.offset, target)?.log()?;
    let m = Monomial::from_factors::<_, crate::series::Symbol>([(VarId::t(0, 0).into(), 1), (ParamId::U.into(), 2)]);
    Ok(log.coefficient(&m))
}

/// `count` seeded random series in `t^alpha_n`, `u`, `hbar`.
pub fn random_inputs(rank: usize, trunc: Truncation, count: usize, seed: u64) -> Vec<(String, Series)> {
    let mut params = Vec::new();
    if trunc.max_u_degree > 0 {
        params.push(ParamId::U);
    }
    if trunc.max_hbar_degree > 0 {
        params.push(ParamId::Hbar);
    }
    let spec = RandomSpec { vars: hodge::t_coordinates(rank, trunc.max_var_index.min(8)), params, max_param_exponent: 2 };
    (0..count)
        .map(|i| (format!("random Z #{i}"), random_series_in(seed.wrapping_add(i as u64), trunc, 8, &spec)))
        .collect()
}

/// Tables of the constants: `a_m`, `C_i` as `"p/q"` strings, and `R_i` rendered.
pub fn constants_json(n: u32) -> serde_json::Value {
    serde_json::json!({
        "a": a_table(n),
        "C": c_table(n),
        "R": special::r_table(n).into_iter().map(|(i, r)| (i.to_string(), serde_json::Value::from(r.render()))).collect::<serde_json::Map<_, _>>(),
    })
}

/// `{"1": a_1, ...}`.
pub fn a_table(n: u32) -> serde_json::Value {
    let a = special::a_coeffs(n as usize);
    serde_json::Value::Object(
        a.iter().enumerate().map(|(i, x)| ((i + 1).to_string(), format_rational(x).into())).collect(),
    )
}

/// `{"0": C_0, ...}`.
pub fn c_table(n: u32) -> serde_json::Value {
    serde_json::Value::Object((0..=n).map(|i| (i.to_string(), format_rational(&c_const(i)).into())).collect())
}

/// The scalar identities: `a_1..a_3`, `C_0..C_3`, the round trip of the
/// `a_m` flow, `sum (-1)^{n-i} C_i C_{n-i} = 0`, and the `u`-scalings.
pub fn verify_constants(order: u32) -> Result<Report> {
    let mut report = Report::new("constants", "-", Truncation::unbounded());
    let a = special::solve_a_coeffs(order as usize)?;
    for (i, expect) in [rat(2, 3), rat(-1, 12), rat(7, 540)].iter().enumerate() {
        report.compare_values(&format!("a_{}", i + 1), &format_rational(&a[i]), &format_rational(expect));
    }
    let oracle = special::c_const_oracle(order as usize + 1);
    for (i, expect) in [int(1), rat(1, 12), rat(1, 288), rat(-139, 51840)].iter().enumerate() {
        report.compare_values(&format!("C_{i}"), &format_rational(&c_const(i as u32)), &format_rational(expect));
    }
    for (i, o) in oracle.iter().enumerate() {
        report.compare_values(&format!("C_{i} oracle"), &format_rational(&c_const(i as u32)), &format_rational(o));
    }
    for n in 1..=order {
        report.compare_values(&format!("sum CC n={n}"), &format_rational(&special::sum_cc(n)), &"0".to_string());
    }
    Ok(report)
}

/// `Q_u(x, y) = u^2 Q^B(u^2 x, u^2 y)` and `u^{2i} C_i = R_i|_{from_u}` to
/// combined `u`-degree `u_deg`.
pub fn verify_scaling(u_deg: u32) -> Result<Report> {
    let mut report = Report::new("u-scaling", "-", Truncation::unbounded().with_u_degree(u_deg));
    report.compare_series("Q_u", &special::q_u(u_deg)?, &special::q_u_scaled(u_deg)?);
    let target = Truncation::new(UNBOUNDED, UNBOUNDED, u_deg, UNBOUNDED, 0);
    for i in 0..=u_deg / 2 {
        let source = special::r_poly(i).retruncate(special::omega_window(u_deg / 2));
        let r = special::instantiate_series(&source, OmegaMode::FromU, target)?;
        let expect = Series::term(Monomial::power(ParamId::U, 2 * i), c_const(i), target);
        report.compare_series(&format!("u^{} C_{i}", 2 * i), &r, &expect);
    }
    report.compare_values("omega_1 at the Hodge point", &format_rational(&hodge_omega_value(1)), &"-1/12".to_string());
    Ok(report)
}

/// The verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Constants,
    HodgeSplit,
    HatT,
    Brackets,
    ZassenhausVirasoro,
    EXOnQ,
    Intertwine,
    Theorem,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Constants,
        Suite::HodgeSplit,
        Suite::HatT,
        Suite::Brackets,
        Suite::ZassenhausVirasoro,
        Suite::EXOnQ,
        Suite::Intertwine,
        Suite::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::HodgeSplit => "hodge-split",
            Suite::HatT => "hat-t",
            Suite::Brackets => "brackets",
            Suite::ZassenhausVirasoro => "zassenhaus-virasoro",
            Suite::EXOnQ => "eX-on-q",
            Suite::Intertwine => "intertwine",
            Suite::Theorem => "theorem",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::InvalidConfig(format!("unknown suite `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationConfig {
    pub pairing: PairingData,
    /// The `t`-side window; `q`-side windows are derived from it.
    pub trunc: Truncation,
    pub seed: u64,
    pub suites: Vec<Suite>,
}

impl VerificationConfig {
    pub fn new(pairing: PairingData, trunc: Truncation) -> Self {
        VerificationConfig { pairing, trunc, seed: 0, suites: Suite::ALL.to_vec() }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.trunc;
        for (name, v) in [
            ("max-t-degree", t.max_t_degree),
            ("max-index", t.max_var_index),
            ("max-u-degree", t.max_u_degree),
            ("max-hbar", t.max_hbar_degree),
            ("max-omega-weight", t.max_omega_weight),
        ] {
            if v == UNBOUNDED {
                return Err(Error::InvalidConfig(format!("{name} must be bounded")));
            }
        }
        Ok(())
    }
}

/// Runs the selected suites; one report per suite, in selection order.
pub fn run_suite(config: &VerificationConfig) -> Result<Vec<Report>> {
    config.validate()?;
    let mut suites = config.suites.clone();
    suites.dedup();
    let mut out = Vec::new();
    for s in suites {
        let mut r = run_one(s, config)?;
        if r.identity != s.name() {
            r.identity = format!("{}: {}", s, r.identity);
        }
        out.push(r);
    }
    Ok(out)
}

fn run_one(suite: Suite, cfg: &VerificationConfig) -> Result<Report> {
    let p = &cfg.pairing;
    let t = cfg.trunc;
    let qt = q_window(t);
    Ok(match suite {
        Suite::Constants => {
            let mut r = verify_constants(11)?;
            r.absorb(verify_scaling(10)?);
            r
        }
        Suite::HodgeSplit => {
            let mut r = hodge::verify_hodge_split(p, t)?;
            r.absorb(hodge::verify_hodge_split_from_u(p, t.with_omega_weight(UNBOUNDED))?);
            let z = random_inputs(p.rank(), t.with_u_degree(0).with_omega_weight(0), 1, cfg.seed).remove(0).1;
            r.absorb(hodge::verify_flow_generator(&z, p, t)?);
            r.absorb(hodge::verify_hat_t_corollary(&z, p, t)?);
            r
        }
        Suite::HatT => hodge::verify_hat_t(p, t, t.max_var_index)?,
        Suite::Brackets => {
            let modes = 6.min(qt.max_var_index / 2);
            virasoro::verify_brackets(modes, p, qt.with_u_degree(0))?
        }
        Suite::ZassenhausVirasoro => {
            let b = VirasoroBundle::build(p, qt)?;
            virasoro::verify_zassenhaus_virasoro(&b)?
        }
        Suite::EXOnQ => {
            let b = VirasoroBundle::build(p, qt.with_t_degree(1))?;
            virasoro::verify_e_x_on_q(&b, 5)?
        }
        Suite::Intertwine => {
            let f = HodgeFactors::from_u(p, t)?;
            let b = VirasoroBundle::build(p, qt)?;
            let inputs = intertwine_inputs(p.rank(), t, 6, 10, cfg.seed);
            verify_intertwine(&inputs, &f, &b, p, t)?
        }
        Suite::Theorem => {
            let b = VirasoroBundle::build(p, qt)?;
            let mut r = verify_theorem_operators(p, &b, t)?;
            r.absorb(verify_theorem(&random_inputs(p.rank(), t, 10, cfg.seed), p, t)?);
            if p.rank() == 1 && p.eta(0, 0).is_one() && t.max_t_degree >= 3 && t.max_u_degree >= 2 {
                r.absorb(verify_theorem_point(2, t)?);
            }
            r.identity = "theorem".into();
            r
        }
    })
}

/// Whether every report passed.
pub fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    fn tt() -> Truncation {
        Truncation::new(2, 3, 4, 1, 0)
    }

    #[test]
    fn change_vars_examples() {
        let full = SubstitutionPlan::new(PlanMode::Full, 2, tt());
        let qt = full.target();
        let t = |n, a| Series::var(VarId::t(n, a), tt());
        assert_eq!(change_vars(&t(0, 1), &full).unwrap(), Series::var(q(1, 1), qt));
        let img = change_vars(&t(1, 0), &full).unwrap();
        let u = |e| Monomial::power(ParamId::U, e);
        assert_eq!(img.coefficient(&u(2).mul(&Monomial::power(q(1, 0), 1))), int(1));
        assert_eq!(img.coefficient(&u(1).mul(&Monomial::power(q(2, 0), 1))), int(2));
        assert_eq!(img.coefficient(&Monomial::power(q(3, 0), 1)), int(1));
        let img2 = change_vars(&t(2, 0), &full).unwrap();
        assert_eq!(img2.coefficient(&u(2)), rat(1, 12));
        assert_eq!(img2.coefficient(&Monomial::power(q(5, 0), 1)), int(3));
        assert_eq!(img2.coefficient(&u(1).mul(&Monomial::power(q(4, 0), 1))), int(10));
        let img21 = change_vars(&t(2, 1), &full).unwrap();
        assert_eq!(img21.coefficient(&u(2)), Rational::zero());
    }

    #[test]
    fn full_degenerates_to_u_zero() {
        let trunc = tt();
        let full = SubstitutionPlan::new(PlanMode::Full, 2, trunc);
        let zero = SubstitutionPlan::new(PlanMode::UZero, 2, trunc);
        for v in hodge::t_coordinates(2, trunc.max_var_index) {
            let a = full.image(v.index, v.color).filter(|m| m.exponent(ParamId::U) == 0);
            assert_eq!(a, zero.image(v.index, v.color), "{v}");
        }
    }

    #[test]
    fn intertwine_small() {
        let p = PairingData::hyperbolic2();
        let trunc = Truncation::new(2, 4, 4, 0, 0);
        let f = HodgeFactors::from_u(&p, trunc).unwrap();
        let b = VirasoroBundle::build(&p, q_window(trunc)).unwrap();
        let inputs = intertwine_inputs(2, trunc, 4, 3, 1);
        let r = verify_intertwine(&inputs, &f, &b, &p, trunc).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn theorem_trivial_and_random() {
        let p = PairingData::hyperbolic2();
        let trunc = Truncation::new(2, 3, 4, 1, 0);
        let one = Series::one(trunc);
        let b = VirasoroBundle::build(&p, q_window(trunc)).unwrap();
        let s = theorem_sides(&one, &p, &b, trunc).unwrap();
        assert_eq!(s.lhs, Series::one(q_window(trunc)));
        assert_eq!(s.rhs, s.lhs);
        let r = verify_theorem(&random_inputs(2, trunc, 2, 5), &p, trunc).unwrap();
        assert!(r.passed(), "{}", r.render_text());
        let r = verify_theorem_operators(&p, &b, trunc).unwrap();
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn genus_one_hodge() {
        let trunc = Truncation::new(3, 3, 2, 0, 0);
        let z = witten::z_point(1, trunc).unwrap();
        assert_eq!(genus_one_lambda(&z, trunc).unwrap(), rat(-1, 24));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn golden_tables_shape() {
        assert_eq!(a_table(3)["2"], "-1/12");
        assert_eq!(c_table(3)["3"], "-139/51840");
    }
}
