//! Tridiagonal Jacobi matrix `Sigma` and Hamiltonian `H = c Sigma`.
//!
//! The spectrum is never obtained by diagonalisation; `E_k = c (k+mu) sinh theta`
//! is used directly and [`eigencheck`] measures how well the truncated
//! Meixner vector satisfies `H v = E_k v`.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meixner::{self, MeixnerParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    DimensionlessZ,
    Energy,
}

/// Symmetric tridiagonal matrix stored as its diagonal and a single
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    units: Units,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>, units: Units) -> Result<Self> {
        if diag.len() < 2 {
            return Err(Error::Size(format!(
                "tridiagonal matrix needs N >= 2, got {}",
                diag.len()
            )));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                got: off.len(),
            });
        }
        if off.iter().any(|&b| b == 0.0) {
            return Err(Error::InvalidParameter(
                "off-diagonal entries must be nonzero".into(),
            ));
        }
        Ok(SymTridiagonal { diag, off, units })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.off[i.min(j)],
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.dim();
        Array2::from_shape_fn((n, n), |(i, j)| self.get(i, j))
    }

    pub fn mat_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect())
    }

    fn scaled(&self, c: f64, units: Units) -> Self {
        SymTridiagonal {
            diag: self.diag.iter().map(|d| c * d).collect(),
            off: self.off.iter().map(|b| c * b).collect(),
            units,
        }
    }
}

/// The constant `c` in `H = c Sigma`, carrying energy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyScale(f64);

impl EnergyScale {
    pub fn new(c: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "energy scale must be finite and nonzero, got {c}"
            )));
        }
        Ok(EnergyScale(c))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

pub fn sigma_matrix(n: usize, p: &MeixnerParams) -> Result<SymTridiagonal> {
    if n < 2 {
        return Err(Error::Size(format!("sigma matrix needs N >= 2, got {n}")));
    }
    let rc = meixner::recursion_coeffs(n - 1, p);
    let mut off = rc.b;
    off.truncate(n - 1);
    SymTridiagonal::new(rc.a, off, Units::DimensionlessZ)
}

pub fn hamiltonian_matrix(n: usize, p: &MeixnerParams, s: EnergyScale) -> Result<SymTridiagonal> {
    Ok(sigma_matrix(n, p)?.scaled(s.value(), Units::Energy))
}

/// `E_k = c (k + mu) sinh theta`.
pub fn energy(k: usize, p: &MeixnerParams, s: EnergyScale) -> f64 {
    s.value() * p.theta().sinh() * (k as f64 + p.mu())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResidual {
    pub n: usize,
    pub k: usize,
    pub energy: f64,
    /// `max_{m < N/2} |(Hv)_m - E v_m| / (|E| max|v|)`
    pub residual: f64,
    pub rows_checked: usize,
}

/// Relative residual of `H v = e v` over the leading half of the rows.
pub fn eigen_residual(h: &SymTridiagonal, e: f64, v: &[f64]) -> Result<f64> {
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if vmax == 0.0 {
        return Err(Error::Precondition("eigenvector candidate is zero".into()));
    }
    if e == 0.0 {
        return Err(Error::Precondition("eigenvalue must be nonzero".into()));
    }
    let hv = h.mat_vec(v)?;
    let rows = h.dim() / 2;
    let worst = (0..rows).fold(0.0f64, |m, i| m.max((hv[i] - e * v[i]).abs()));
    Ok(worst / (e.abs() * vmax))
}

/// Checks that `v_n = M_n(k)` (n < N) is an eigenvector of the truncated
/// Hamiltonian with eigenvalue `E_k`, away from the truncation edge.
pub fn eigencheck(
    n: usize,
    p: &MeixnerParams,
    s: EnergyScale,
    k: usize,
) -> Result<EigenResidual> {
    if 4 * k > n {
        return Err(Error::Precondition(format!(
            "eigencheck needs k <= N/4, got k={k}, N={n}"
        )));
    }
    let h = hamiltonian_matrix(n, p, s)?;
    let v = (0..n)
        .map(|i| meixner::meixner(i, k, p).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    let e = energy(k, p, s);
    Ok(EigenResidual {
        n,
        k,
        energy: e,
        residual: eigen_residual(&h, e, &v)?,
        rows_checked: n / 2,
    })
}
