use serde::{Deserialize, Serialize};

use super::Monomial;

/// A finite window onto formal series. Every ring operation drops monomials
/// that exceed any bound. `u32::MAX` means the grading is not bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    /// Total degree in the `t`/`q` coordinates.
    pub max_t_degree: u32,
    /// Largest coordinate index `n` retained.
    pub max_var_index: u32,
    pub max_u_degree: u32,
    pub max_hbar_degree: u32,
    /// Bound on `sum (2l - 1) * exp(omega_l)` (and `n * exp(s_n)`).
    pub max_omega_weight: u32,
}

pub const UNBOUNDED: u32 = u32::MAX;

impl Truncation {
    pub const fn new(
        max_t_degree: u32,
        max_var_index: u32,
        max_u_degree: u32,
        max_hbar_degree: u32,
        max_omega_weight: u32,
    ) -> Self {
        Truncation { max_t_degree, max_var_index, max_u_degree, max_hbar_degree, max_omega_weight }
    }

    pub const fn unbounded() -> Self {
        Truncation::new(UNBOUNDED, UNBOUNDED, UNBOUNDED, UNBOUNDED, UNBOUNDED)
    }

    pub fn with_t_degree(mut self, d: u32) -> Self {
        self.max_t_degree = d;
        self
    }

    pub fn with_var_index(mut self, n: u32) -> Self {
        self.max_var_index = n;
        self
    }

    pub fn with_u_degree(mut self, d: u32) -> Self {
        self.max_u_degree = d;
        self
    }

    pub fn with_hbar_degree(mut self, d: u32) -> Self {
        self.max_hbar_degree = d;
        self
    }

    pub fn with_omega_weight(mut self, w: u32) -> Self {
        self.max_omega_weight = w;
        self
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        m.var_degree() <= self.max_t_degree as u64
            && m.max_var_index() <= self.max_var_index
            && m.u_degree() <= self.max_u_degree as u64
            && m.hbar_degree() <= self.max_hbar_degree as u64
            && m.omega_weight() <= self.max_omega_weight as u64
    }

    /// Whether only the parameter gradings of `m` fit; coordinates are not inspected.
    pub fn admits_params(&self, m: &Monomial) -> bool {
        m.u_degree() <= self.max_u_degree as u64
            && m.hbar_degree() <= self.max_hbar_degree as u64
            && m.omega_weight() <= self.max_omega_weight as u64
    }
}

impl Default for Truncation {
    /// The reporting defaults: index 8, degree 3, `u` 6, `hbar` 2, omega-weight 4.
    fn default() -> Self {
        Truncation::new(3, 8, 6, 2, 4)
    }
}
