//! Scalar and parametric series: `B^omega`, `R_i(omega)`, `C_i`, the two-point
//! kernels `Q_omega`, `Q^B`, `Q_u`, the polynomials `phi_k`, and the `a_m`.
//!
//! Orientation of the formal variables: in [`b_omega`] and [`r_poly_oracle`]
//! the parameter `Z` stands for `z^{-1}`; in [`phi`] it stands for `z`. The
//! kernels use `X`, `Y` for `x`, `y` directly.

pub mod dense;
mod flow;

use crate::arith::{bernoulli, binomial, factorial, hodge_omega_value, int, Rational};
use crate::error::{Error, Result};
use crate::series::{Monomial, ParamId, Series, Substitution, Symbol, Truncation, VarId, UNBOUNDED};

pub use flow::{a_coeffs, flow, rhs_target, solve_a_coeffs, LaurentZ};

/// How the free parameters `omega_l` are specialised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaMode {
    /// `omega_l = B_{2l} / (2l)! * s_{2l-1}`.
    FromS,
    /// `omega_l = -B_{2l} / (2l(2l-1)) * u^{2(2l-1)}`.
    FromU,
    /// `omega_l = -B_{2l} / (2l(2l-1)) * sum_{j=1}^k u_j^{2(2l-1)}`.
    FromMultiU(u32),
}

impl OmegaMode {
    /// Largest omega-weight that can survive in `target` after substitution.
    pub fn needed_weight(self, target: &Truncation) -> u32 {
        match self {
            OmegaMode::FromS => target.max_omega_weight,
            OmegaMode::FromU | OmegaMode::FromMultiU(_) => {
                if target.max_u_degree == UNBOUNDED {
                    UNBOUNDED
                } else {
                    target.max_u_degree / 2
                }
            }
        }
    }

    /// The replacement rule for `omega_1 .. omega_L` with `2L - 1 <= weight`,
    /// each replacement computed in `target`.
    pub fn rule(self, weight: u32, target: Truncation) -> Substitution {
        let mut rule = Substitution::new();
        for l in 1..=max_l(weight) {
            let e = 2 * (2 * l - 1);
            let rep = match self {
                OmegaMode::FromS => Series::term(
                    Monomial::power(ParamId::S(2 * l - 1), 1),
                    bernoulli(2 * l as usize) / Rational::from_integer(factorial(2 * l as u64)),
                    target,
                ),
                OmegaMode::FromU => Series::term(Monomial::power(ParamId::U, e), hodge_omega_value(l), target),
                OmegaMode::FromMultiU(k) => Series::from_terms(
                    (1..=k).map(|j| (Monomial::power(ParamId::UMulti(j), e), hodge_omega_value(l))),
                    target,
                ),
            };
            rule.insert(ParamId::Omega(l), rep);
        }
        rule
    }

    /// Fails when the source window does not hold every omega term that can
    /// reach `target`.
    pub fn check_source(self, source_weight: u32, target: &Truncation) -> Result<()> {
        let needed = self.needed_weight(target);
        if source_weight < needed {
            return Err(Error::BudgetOverflow(format!(
                "{self:?} into {target:?} needs omega-weight {needed}, source has {source_weight}"
            )));
        }
        Ok(())
    }
}

/// Largest `l` with `2l - 1 <= weight`.
fn max_l(weight: u32) -> u32 {
    if weight == UNBOUNDED {
        panic!("omega sums need a bounded weight");
    }
    weight.div_ceil(2)
}

/// Window for pure omega-polynomials of weight at most `w`.
pub fn omega_window(w: u32) -> Truncation {
    Truncation::new(UNBOUNDED, UNBOUNDED, UNBOUNDED, UNBOUNDED, w)
}

/// Replaces every `omega_l` in `s` according to `mode`, computing in `target`.
pub fn instantiate_series(s: &Series, mode: OmegaMode, target: Truncation) -> Result<Series> {
    let w = s.truncation().max_omega_weight;
    mode.check_source(w, &target)?;
    let weight = if w == UNBOUNDED { mode.needed_weight(&target) } else { w };
    s.substitute(&mode.rule(weight, target), target)
}

/// Sets `omega_l = -B_{2l}/(2l(2l-1))` in an omega-polynomial of weight at most `w`.
pub fn at_hodge_point(s: &Series, w: u32, target: Truncation) -> Result<Series> {
    let mut rule = Substitution::new();
    for l in 1..=max_l(w) {
        rule.insert(ParamId::Omega(l), Series::constant(hodge_omega_value(l), target));
    }
    s.substitute(&rule, target)
}

/// Ordered tuples `(l_1, .., l_n)`, `n >= 1`, with `sum (2 l_j - 1) == weight`.
fn ordered_tuples(weight: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for l in 1..=rest.div_ceil(2) {
            cur.push(l);
            rec(rest - (2 * l - 1), cur, out);
            cur.pop();
        }
    }
    rec(weight, &mut Vec::new(), &mut out);
    out
}

fn omega_monomial(ls: &[u32]) -> Monomial {
    Monomial::from_factors(ls.iter().map(|&l| (ParamId::Omega(l), 1)))
}

fn inv_factorial(n: usize) -> Rational {
    Rational::new(1.into(), factorial(n as u64))
}

/// `B^omega(z) = sum_l -omega_l z^{-(2l-1)}` with `Z = z^{-1}`.
pub fn b_omega(w: u32) -> Series {
    let tr = omega_window(w);
    Series::from_terms(
        (1..=max_l(w)).map(|l| (Monomial::from_factors([(ParamId::Omega(l), 1), (ParamId::Z, 2 * l - 1)]), int(-1))),
        tr,
    )
}

/// `R_i(omega)`: `sum_n 1/n! sum_{l_1..l_n} prod(-omega_{l_j})` over tuples of weight `i`.
pub fn r_poly(i: u32) -> Series {
    let tr = omega_window(i);
    if i == 0 {
        return Series::one(tr);
    }
    let mut out = Series::zero(tr);
    for ls in ordered_tuples(i) {
        let sign = if ls.len() % 2 == 0 { int(1) } else { int(-1) };
        out.add_term(omega_monomial(&ls), sign * inv_factorial(ls.len()));
    }
    out
}

/// `R_i` read off as the `z^{-i}` coefficient of `exp(B^omega(z))`.
pub fn r_poly_oracle(i: u32) -> Result<Series> {
    Ok(b_omega(i).exp()?.coefficient_of_power(ParamId::Z, i))
}

/// `C_i = R_i` at `omega_l = -B_{2l}/(2l(2l-1))`.
pub fn c_const(i: u32) -> Rational {
    let tr = omega_window(i);
    at_hodge_point(&r_poly(i), i, tr).expect("constant replacements fit").constant_term()
}

/// `C_0 .. C_{n-1}` as the coefficients of `exp(sum_l B_{2l}/(2l(2l-1)) w^{2l-1})`,
/// computed on dense univariate series.
pub fn c_const_oracle(n: usize) -> Vec<Rational> {
    let mut f = dense::zeros(n);
    for l in 1.. {
        let k = 2 * l - 1;
        if k >= n {
            break;
        }
        f[k] = -hodge_omega_value(l as u32);
    }
    dense::exp(&f, n)
}

/// `sum_{i=0}^n (-1)^{n-i} C_i C_{n-i}`.
pub fn sum_cc(n: u32) -> Rational {
    (0..=n)
        .map(|i| {
            let s = if (n - i).is_multiple_of(2) { int(1) } else { int(-1) };
            s * c_const(i) * c_const(n - i)
        })
        .sum()
}

/// `frak_B(z) = sum_l B_{2l}/(2l(2l-1)) z^{-(2l-1)}` with `Z = z^{-1}`.
pub fn frak_b(w: u32) -> Series {
    Series::from_terms(
        (1..=max_l(w)).map(|l| (Monomial::power(ParamId::Z, 2 * l - 1), -hodge_omega_value(l))),
        omega_window(w),
    )
}

/// `B^omega(u^2 z)` under the `u`-substitution, as a series in `Z = z^{-1}`:
/// each `u^a Z^b` becomes `u^{a - 2b} Z^b`.
pub fn b_omega_scaled_from_u(w: u32) -> Result<Series> {
    let target = Truncation::new(UNBOUNDED, UNBOUNDED, 2 * w, UNBOUNDED, w);
    let inst = instantiate_series(&b_omega(w), OmegaMode::FromU, target)?;
    let mut out = Series::zero(omega_window(w));
    for (m, c) in inst.terms() {
        let a = m.exponent(ParamId::U);
        let b = m.exponent(ParamId::Z);
        let rest = m.div(&Monomial::power(ParamId::U, a)).expect("divides");
        out.add_term(rest.mul(&Monomial::power(ParamId::U, a - 2 * b)), c.clone());
    }
    Ok(out)
}

/// `Q_omega(x, y)` through omega-weight `w` by the closed nested-sum expansion.
pub fn q_omega_closed(w: u32) -> Series {
    let tr = omega_window(w);
    let mut out = Series::zero(tr);
    for weight in 1..=w {
        for ls in ordered_tuples(weight) {
            let n = ls.len();
            let sign = if n % 2 == 0 { int(1) } else { int(-1) };
            let base = sign * inv_factorial(n);
            let om = omega_monomial(&ls);
            let d1 = 2 * ls[0] - 2;
            for i in 0..=d1 {
                let j = d1 - i;
                let s_i = if i % 2 == 0 { int(-1) } else { int(1) };
                for k in 0..n {
                    let xe: u32 = i + ls[1..k + 1].iter().map(|l| 2 * l - 1).sum::<u32>();
                    let ye: u32 = j + ls[k + 1..].iter().map(|l| 2 * l - 1).sum::<u32>();
                    let c = &base * &s_i * Rational::from_integer(binomial(n as u64 - 1, k as i64));
                    let m = om.mul(&Monomial::from_factors([(ParamId::X, xe), (ParamId::Y, ye)]));
                    out.add_term(m, c);
                }
            }
        }
    }
    out
}

/// `Q_omega(x, y)` through omega-weight `w` as `(1 - exp(B(1/x) + B(1/y))) / (x + y)`
/// with exact long division.
pub fn q_omega_division(w: u32) -> Result<Series> {
    let tr = omega_window(w);
    let mut exponent = Series::zero(tr);
    for l in 1..=max_l(w) {
        for p in [ParamId::X, ParamId::Y] {
            exponent.add_term(Monomial::from_factors([(ParamId::Omega(l), 1), (p, 2 * l - 1)]), int(-1));
        }
    }
    let numerator = &Series::one(tr) - &exponent.exp()?;
    divide_by_x_plus_y(&numerator)
}

/// Exact quotient by `x + y`; errors with the remainder if it is nonzero.
pub fn divide_by_x_plus_y(s: &Series) -> Result<Series> {
    let tr = s.truncation();
    let top = s.terms().map(|(m, _)| m.exponent(ParamId::X)).max().unwrap_or(0) as usize;
    // rows[a]: coefficient of x^a as a series in the other generators
    let mut rows: Vec<Series> = vec![Series::zero(tr); top + 1];
    for (m, c) in s.terms() {
        let a = m.exponent(ParamId::X);
        rows[a as usize].add_term(m.div(&Monomial::power(ParamId::X, a)).expect("divides"), c.clone());
    }
    let y = Monomial::power(ParamId::Y, 1);
    let mut quotient = Series::zero(tr);
    for a in (1..=top).rev() {
        let row = std::mem::replace(&mut rows[a], Series::zero(tr));
        for (m, c) in row.terms() {
            // c x^a m = c x^{a-1} m (x + y) - c x^{a-1} y m
            quotient.add_term(m.mul(&Monomial::power(ParamId::X, a as u32 - 1)), c.clone());
            rows[a - 1].add_term(m.mul(&y), -c.clone());
        }
    }
    if !rows[0].is_zero() {
        return Err(Error::NotDivisible(rows[0].render()));
    }
    Ok(quotient)
}

/// `Q_omega` computed both ways; errors if they disagree.
pub fn q_omega(w: u32) -> Result<Series> {
    let closed = q_omega_closed(w);
    let divided = q_omega_division(w)?;
    if let Some((m, a, b)) = closed.first_difference(&divided) {
        return Err(Error::RoundTrip(format!("Q_omega at {m}: closed form {a}, division {b}")));
    }
    Ok(closed)
}

/// `Q^B = Q_omega` at `omega_l = -B_{2l}/(2l(2l-1))`, through `x,y`-degree `w - 1`.
pub fn q_b(w: u32) -> Result<Series> {
    at_hodge_point(&q_omega(w)?, w, omega_window(0))
}

/// `Q_u` through `u`-degree `u_deg`, by the `u`-substitution into `Q_omega`.
pub fn q_u(u_deg: u32) -> Result<Series> {
    let w = u_deg / 2;
    let target = Truncation::new(UNBOUNDED, UNBOUNDED, u_deg, UNBOUNDED, 0);
    instantiate_series(&q_omega(w)?, OmegaMode::FromU, target)
}

/// `u^2 Q^B(u^2 x, u^2 y)` through `u`-degree `u_deg`.
pub fn q_u_scaled(u_deg: u32) -> Result<Series> {
    let w = u_deg / 2;
    let target = Truncation::new(UNBOUNDED, UNBOUNDED, u_deg, UNBOUNDED, 0);
    let qb = q_b(w)?;
    Ok(Series::from_terms(
        qb.terms().map(|(m, c)| {
            let d = m.exponent(ParamId::X) + m.exponent(ParamId::Y);
            (m.mul(&Monomial::power(ParamId::U, 2 + 2 * d)), c.clone())
        }),
        target,
    ))
}

/// Exchanges `x` and `y`.
pub fn swap_xy(s: &Series) -> Series {
    let x = Symbol::Param(ParamId::X);
    let y = Symbol::Param(ParamId::Y);
    Series::from_terms(
        s.terms().map(|(m, c)| (m.map_symbols(|sym| if sym == x { y } else if sym == y { x } else { sym }), c.clone())),
        s.truncation(),
    )
}

/// `phi_k(u, z) = ((u + z)^2 z d/dz)^k z`, with `Z` standing for `z`.
pub fn phi(k: u32) -> Series {
    let tr = Truncation::unbounded();
    let u = Series::param(ParamId::U, tr);
    let z = Series::param(ParamId::Z, tr);
    let uz = &u + &z;
    let field = &(&uz * &uz) * &z;
    let mut f = z;
    for _ in 0..k {
        f = &field * &f.derivative(ParamId::Z);
    }
    f
}

/// `c_j^{(k)}` for `j = 1 ..= 2k + 1` (index 0 holds `c_1`).
pub fn phi_coeffs(k: u32) -> Vec<Rational> {
    let p = phi(k);
    (1..=2 * k + 1)
        .map(|j| p.coefficient(&Monomial::from_factors([(ParamId::U, 2 * k + 1 - j), (ParamId::Z, j)])))
        .collect()
}

/// `Lambda_alpha(phi~_k(u, q)) = sum_j c_j^{(k)} u^{2k+1-j} q_j^alpha`, in `trunc`.
pub fn phi_tilde(k: u32, color: u32, trunc: Truncation) -> Series {
    let mut out = Series::zero(trunc);
    for (idx, c) in phi_coeffs(k).into_iter().enumerate() {
        let j = idx as u32 + 1;
        let q = VarId::q(j as i64, color).expect("j >= 1");
        out.add_term(Monomial::from_factors::<_, Symbol>([(q.into(), 1), (ParamId::U.into(), 2 * k + 1 - j)]), c);
    }
    out
}

/// Whether every term of an omega-polynomial has omega-weight exactly `w`.
pub fn is_weight_homogeneous(s: &Series, w: u64) -> bool {
    s.terms().all(|(m, _)| m.omega_weight() == w)
}

/// `(i, R_i)` for `i = 0 ..= n`.
pub fn r_table(n: u32) -> Vec<(u32, Series)> {
    (0..=n).map(|i| (i, r_poly(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{One, Zero};
    use crate::arith::rat;

    fn is_one(s: &Series) -> bool {
        s.len() == 1 && s.constant_term().is_one()
    }

    fn w(l: u32) -> Series {
        Series::param(ParamId::Omega(l), omega_window(UNBOUNDED))
    }

    #[test]
    fn b_omega_examples() {
        assert!(b_omega(0).is_zero());
        assert_eq!(b_omega(1).render(), "-1 * w[1] * z");
        assert_eq!(b_omega(3).len(), 2);
    }

    #[test]
    fn r_examples() {
        assert!(is_one(&r_poly(0)));
        assert_eq!(r_poly(1).retruncate(omega_window(UNBOUNDED)), -&w(1));
        let w1 = w(1);
        let expect = &(-&w(2)) - &(&(&w1 * &w1) * &w1).scale(&rat(1, 6));
        assert_eq!(r_poly(3).retruncate(omega_window(UNBOUNDED)), expect);
    }

    #[test]
    fn r_matches_exponential_and_is_homogeneous() {
        for i in 0..=9 {
            let r = r_poly(i);
            assert!(is_weight_homogeneous(&r, i as u64));
            assert_eq!(r, r_poly_oracle(i).unwrap(), "R_{i}");
        }
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_const(0), int(1));
        assert_eq!(c_const(1), rat(1, 12));
        assert_eq!(c_const(2), rat(1, 288));
        assert_eq!(c_const(3), rat(-139, 51840));
        let oracle = c_const_oracle(11);
        for i in 0..=10 {
            assert_eq!(c_const(i), oracle[i as usize]);
        }
    }

    #[test]
    fn sum_cc_vanishes() {
        for n in 1..=10 {
            assert!(sum_cc(n).is_zero(), "n = {n}");
        }
        assert_eq!(sum_cc(0), int(1));
    }

    #[test]
    fn frak_b_identities() {
        let w = 7;
        let direct = at_hodge_point(&b_omega(w), w, omega_window(w)).unwrap();
        assert_eq!(direct, frak_b(w));
        assert_eq!(b_omega_scaled_from_u(w).unwrap().retruncate(omega_window(w)), frak_b(w));
        assert_eq!(frak_b(1).coefficient(&Monomial::power(ParamId::Z, 1)), rat(1, 12));
    }

    #[test]
    fn c_scaled_matches_r_from_u() {
        for i in 0..=8u32 {
            let target = Truncation::new(UNBOUNDED, UNBOUNDED, 2 * i, UNBOUNDED, 0);
            let r = instantiate_series(&r_poly(i), OmegaMode::FromU, target).unwrap();
            let expect = Series::term(Monomial::power(ParamId::U, 2 * i), c_const(i), target);
            assert_eq!(r, expect, "i = {i}");
        }
    }

    #[test]
    fn q_omega_two_ways() {
        let q = q_omega(7).unwrap();
        assert_eq!(q, swap_xy(&q));
        // weight-1 part: +omega_1 at x^0 y^0
        assert_eq!(q.coefficient(&Monomial::power(ParamId::Omega(1), 1)), int(1));
        let zeroed = q.filter(|m| m.omega_weight() == 0);
        assert!(zeroed.is_zero());
    }

    #[test]
    fn division_detects_remainder() {
        let tr = omega_window(UNBOUNDED);
        let x = Series::param(ParamId::X, tr);
        let bad = &x + &Series::one(tr);
        assert!(matches!(divide_by_x_plus_y(&bad), Err(Error::NotDivisible(_))));
        let y = Series::param(ParamId::Y, tr);
        let sq = &(&x * &x) - &(&y * &y);
        assert_eq!(divide_by_x_plus_y(&sq).unwrap(), &x - &y);
    }

    #[test]
    fn q_u_scaling() {
        let qu = q_u(12).unwrap();
        assert_eq!(qu, q_u_scaled(12).unwrap());
        // u^2 part: omega_1 -> -u^2/12 times the +omega_1 constant term
        assert_eq!(qu.coefficient(&Monomial::power(ParamId::U, 2)), rat(-1, 12));
        assert!(qu.terms().all(|(m, _)| m.exponent(ParamId::U) > 0));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(0).render(), "1 * z");
        let tr = Truncation::unbounded();
        let u = Series::param(ParamId::U, tr);
        let z = Series::param(ParamId::Z, tr);
        let phi1 = &(&(&(&u * &u) * &z) + &(&(&u * &z) * &z).scale(&int(2))) + &(&(&z * &z) * &z);
        assert_eq!(phi(1), phi1);
        assert_eq!(phi_coeffs(3)[6], int(15));
        assert_eq!(phi_coeffs(2), vec![int(1), int(6), int(12), int(10), int(3)]);
        for k in 0..=6 {
            assert_eq!(*phi_coeffs(k).last().unwrap(), Rational::from_integer(crate::arith::double_factorial_odd(k as u64)));
        }
    }

    #[test]
    fn instantiation_examples() {
        let src = w(1).retruncate(omega_window(1));
        let t = Truncation::new(UNBOUNDED, UNBOUNDED, 2, UNBOUNDED, 0);
        let from_u = instantiate_series(&src, OmegaMode::FromU, t).unwrap();
        assert_eq!(from_u.coefficient(&Monomial::power(ParamId::U, 2)), rat(-1, 12));
        let from_multi = instantiate_series(&src, OmegaMode::FromMultiU(2), t).unwrap();
        assert_eq!(from_multi.len(), 2);
        assert_eq!(from_multi.coefficient(&Monomial::power(ParamId::UMulti(2), 2)), rat(-1, 12));
        let ts = Truncation::new(UNBOUNDED, UNBOUNDED, 0, UNBOUNDED, 1);
        let from_s = instantiate_series(&src, OmegaMode::FromS, ts).unwrap();
        assert_eq!(from_s.coefficient(&Monomial::power(ParamId::S(1), 1)), rat(1, 12));
        let too_small = Truncation::new(UNBOUNDED, UNBOUNDED, 6, UNBOUNDED, 0);
        assert!(matches!(instantiate_series(&src, OmegaMode::FromU, too_small), Err(Error::BudgetOverflow(_))));
    }
}
