//! The symmetric nondegenerate pairing `eta_{mu nu}` on the target's
//! cohomology and its inverse `eta^{mu nu}`.

use std::path::Path;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, int, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingData {
    name: String,
    eta: Vec<Vec<Rational>>,
    eta_inv: Vec<Vec<Rational>>,
}

/// On-disk form: `{"rank": 2, "eta": [["0","1"],["1","0"]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingFile {
    pub rank: usize,
    pub eta: Vec<Vec<String>>,
}

impl PairingData {
    /// Validates symmetry and invertibility and computes the inverse.
    pub fn new(name: impl Into<String>, eta: Vec<Vec<Rational>>) -> Result<Self> {
        let n = eta.len();
        if n == 0 {
            return Err(Error::InvalidPairing("empty matrix".into()));
        }
        if eta.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidPairing("matrix is not square".into()));
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..i {
                if eta[i][j] != eta[j][i] {
                    return Err(Error::InvalidPairing(format!("not symmetric at ({i},{j})")));
                }
            }
        }
        let eta_inv = invert(&eta).ok_or_else(|| Error::InvalidPairing("matrix is singular".into()))?;
        Ok(PairingData { name: name.into(), eta, eta_inv })
    }

    /// The point target: rank 1, `eta = (1)`.
    pub fn point() -> Self {
        PairingData::new("point", vec![vec![int(1)]]).expect("identity is valid")
    }

    /// Rank 2 with `eta = [[0,1],[1,0]]`, the pairing of a curve's cohomology.
    pub fn hyperbolic2() -> Self {
        PairingData::new("hyperbolic2", vec![vec![int(0), int(1)], vec![int(1), int(0)]]).expect("valid")
    }

    pub fn from_file_data(name: impl Into<String>, f: &PairingFile) -> Result<Self> {
        if f.eta.len() != f.rank {
            return Err(Error::InvalidPairing(format!("rank {} but {} rows", f.rank, f.eta.len())));
        }
        let eta = f
            .eta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s).ok_or_else(|| Error::InvalidPairing(format!("bad rational `{s}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PairingData::new(name, eta)
    }

    pub fn from_json_str(name: impl Into<String>, text: &str) -> Result<Self> {
        let f: PairingFile = serde_json::from_str(text).map_err(|e| Error::InvalidPairing(e.to_string()))?;
        PairingData::from_file_data(name, &f)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidPairing(format!("{}: {e}", path.display())))?;
        PairingData::from_json_str(path.display().to_string(), &text)
    }

    /// `point`, `hyperbolic2`, or a path to a pairing file.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec {
            "point" => Ok(PairingData::point()),
            "hyperbolic2" => Ok(PairingData::hyperbolic2()),
            path => PairingData::from_path(Path::new(path)),
        }
    }

    pub fn to_file_data(&self) -> PairingFile {
        PairingFile {
            rank: self.rank(),
            eta: self.eta.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.eta.len()
    }

    pub fn eta(&self, mu: usize, nu: usize) -> &Rational {
        &self.eta[mu][nu]
    }

    pub fn eta_inv(&self, mu: usize, nu: usize) -> &Rational {
        &self.eta_inv[mu][nu]
    }

    /// Nonzero entries `(mu, nu, eta^{mu nu})` of the inverse.
    pub fn inverse_entries(&self) -> Vec<(u32, u32, Rational)> {
        let mut out = Vec::new();
        for (i, row) in self.eta_inv.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.push((i as u32, j as u32, c.clone()));
                }
            }
        }
        out
    }
}

/// Gauss-Jordan inverse; `None` when singular.
fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
