use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Monomial, ParamId, Series, Symbol, Truncation, VarId};
use crate::arith::rat;

/// Generators a random test series may use.
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub vars: Vec<VarId>,
    pub params: Vec<ParamId>,
    /// Largest exponent drawn for any single parameter.
    pub max_param_exponent: u32,
}

impl RandomSpec {
    /// `t_n^0` for `n` up to the index bound (capped at 8) and the parameters
    /// `u`, `hbar`, `omega_1`, `omega_2` whose budgets are nonzero.
    pub fn default_for(bounds: &Truncation) -> Self {
        let top = bounds.max_var_index.min(8);
        let vars = (0..=top).map(|n| VarId::t(n, 0)).collect();
        let mut params = Vec::new();
        if bounds.max_u_degree > 0 {
            params.push(ParamId::U);
        }
        if bounds.max_hbar_degree > 0 {
            params.push(ParamId::Hbar);
        }
        if bounds.max_omega_weight > 0 {
            params.push(ParamId::Omega(1));
        }
        if bounds.max_omega_weight >= 3 {
            params.push(ParamId::Omega(2));
        }
        RandomSpec { vars, params, max_param_exponent: 2 }
    }
}

/// Deterministic pseudo-random series with `term_count` distinct terms (fewer
/// only if the window has fewer monomials reachable by the sampler).
pub fn random_series(seed: u64, bounds: Truncation, term_count: usize) -> Series {
    random_series_in(seed, bounds, term_count, &RandomSpec::default_for(&bounds))
}

pub fn random_series_in(seed: u64, bounds: Truncation, term_count: usize, spec: &RandomSpec) -> Series {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Series::zero(bounds);
    let mut seen: HashSet<Monomial> = HashSet::new();
    let max_deg = bounds.max_t_degree.min(8);
    let mut attempts = 0usize;
    while seen.len() < term_count && attempts < 64 * term_count + 64 {
        attempts += 1;
        let mut factors: Vec<(Symbol, u32)> = Vec::new();
        if !spec.vars.is_empty() {
            let d = rng.gen_range(0..=max_deg);
            for _ in 0..d {
                let v = spec.vars[rng.gen_range(0..spec.vars.len())];
                factors.push((v.into(), 1));
            }
        }
        for &p in &spec.params {
            let e = rng.gen_range(0..=spec.max_param_exponent);
            factors.push((p.into(), e));
        }
        let m = Monomial::from_factors(factors);
        if !bounds.admits(&m) || seen.contains(&m) {
            continue;
        }
        let mut num = 0i64;
        while num == 0 {
            num = rng.gen_range(-9..=9);
        }
        let den = rng.gen_range(1..=5);
        seen.insert(m.clone());
        out.add_term(m, rat(num, den));
    }
    out
}
