//! Potential matrix `V = H - T` and pointwise recovery of `V(x)` from a
//! single column: `V(x) ~ sum_m phi_m(x) V_{m,n} / phi_n(x)`.

use std::collections::BTreeMap;
use std::str::FromStr;

use ndarray::Array2;
use serde::Serialize;

use crate::bases::BasisFamily;
use crate::error::{Error, Result};
use crate::hamiltonian::SymTridiagonal;

/// Denominators `|phi_n(x)|` below this mark the point invalid.
pub const DENOMINATOR_THRESHOLD: f64 = 1e-8;
const SYMMETRY_TOL: f64 = 1e-10;
/// Highest basis index considered by [`Column::Auto`].
pub const AUTO_MAX_COLUMN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    /// `H - T` with the complete kinetic matrix.
    FullV,
    /// `H - T~`; the basis' fixed part must be added back.
    ResidualVtilde,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialMatrix {
    entries: Array2<f64>,
    basis: BasisFamily,
    kind: PotentialKind,
}

impl PotentialMatrix {
    /// Wraps a square matrix, checking symmetry to `1e-10` (relative to the
    /// largest entry when that exceeds one).
    pub fn new(entries: Array2<f64>, basis: BasisFamily, kind: PotentialKind) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        if r == 0 {
            return Err(Error::Size("potential matrix is empty".into()));
        }
        let scale = entries.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..r {
            for j in 0..i {
                let d = (entries[[i, j]] - entries[[j, i]]).abs();
                if !(d <= SYMMETRY_TOL * scale) {
                    return Err(Error::InvalidParameter(format!(
                        "potential matrix not symmetric at ({i},{j}): difference {d:e}"
                    )));
                }
            }
        }
        Ok(PotentialMatrix {
            entries,
            basis,
            kind,
        })
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn basis(&self) -> &BasisFamily {
        &self.basis
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `V + s 1`.
    pub fn shifted(&self, s: f64) -> Self {
        let mut e = self.entries.clone();
        for i in 0..self.dim() {
            e[[i, i]] += s;
        }
        PotentialMatrix {
            entries: e,
            basis: self.basis,
            kind: self.kind,
        }
    }
}

/// `H - T` for basis `basis`; the kind follows from whether the basis
/// ships `T` or `T~`.
pub fn potential_matrix(
    h: &SymTridiagonal,
    t: &Array2<f64>,
    basis: &BasisFamily,
) -> Result<PotentialMatrix> {
    let n = h.dim();
    if t.dim() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if t.nrows() != n { t.nrows() } else { t.ncols() },
        });
    }
    let kind = if basis.splits_potential() {
        PotentialKind::ResidualVtilde
    } else {
        PotentialKind::FullV
    };
    PotentialMatrix::new(&h.to_dense() - t, *basis, kind)
}

/// Which column of `V` the reconstruction divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Column {
    #[default]
    Auto,
    Index(usize),
}

impl FromStr for Column {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Column::Auto);
        }
        s.parse::<usize>()
            .map(Column::Index)
            .map_err(|_| Error::InvalidParameter(format!("column must be an index or auto, got {s:?}")))
    }
}

impl std::fmt::Display for Column {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Column::Auto => f.write_str("auto"),
            Column::Index(i) => write!(f, "{i}"),
        }
    }
}

/// Values on a coordinate grid; points marked invalid hold `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    pub xs: Vec<f64>,
    pub vals: Vec<f64>,
    pub valid: Vec<bool>,
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl SampledFunction {
    pub fn new(xs: Vec<f64>, vals: Vec<f64>, valid: Vec<bool>) -> Result<Self> {
        if vals.len() != xs.len() || valid.len() != xs.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: if vals.len() != xs.len() { vals.len() } else { valid.len() },
            });
        }
        check_increasing(&xs)?;
        Ok(SampledFunction {
            xs,
            vals,
            valid,
            meta: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn invalid_count(&self) -> usize {
        self.valid.iter().filter(|v| !**v).count()
    }

    /// `(x, value)` pairs of the valid points.
    pub fn valid_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs
            .iter()
            .zip(&self.vals)
            .zip(&self.valid)
            .filter(|(_, ok)| **ok)
            .map(|((x, v), _)| (*x, *v))
    }

    /// Largest `|f - g|` over points valid in both; errors on a grid mismatch.
    pub fn sup_distance(&self, other: &SampledFunction) -> Result<f64> {
        same_grid(&self.xs, &other.xs)?;
        Ok((0..self.len())
            .filter(|&i| self.valid[i] && other.valid[i])
            .fold(0.0f64, |m, i| m.max((self.vals[i] - other.vals[i]).abs())))
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }
}

pub(crate) fn same_grid(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.iter().zip(b).any(|(x, y)| x != y) {
        return Err(Error::Precondition("functions sampled on different grids".into()));
    }
    Ok(())
}

fn check_increasing(xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("grid contains non-finite points".into()));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `n` equally spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "grid needs lo < hi and at least 2 points, got {lo}:{hi}:{n}"
        )));
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
        .collect())
}

/// Default reconstruction window: 5% margins on finite domains,
/// `[0.05/lambda, r_max]` with `phi_0(r_max) = 1e-8` on the half line, and
/// `|y| <= sqrt(2N+1)` for the Hermite line.
pub fn interior_range(basis: &BasisFamily, n_terms: usize) -> (f64, f64) {
    let d = basis.domain();
    match *basis {
        BasisFamily::SineBox { .. } | BasisFamily::GegenbauerBox { .. } => {
            let m = 0.05 * (d.hi - d.lo);
            (d.lo + m, d.hi - m)
        }
        BasisFamily::HermiteLine { lambda, .. } => {
            let y = (2.0 * n_terms as f64 + 1.0).sqrt();
            (-y / lambda, y / lambda)
        }
        BasisFamily::LaguerreRadial { lambda, .. } => {
            let lo = 0.05 / lambda;
            // phi_0 has a single maximum then decays; step outward past it
            let mut r = lo;
            let mut past_peak = false;
            let mut prev = 0.0;
            while r < 1e4 / lambda {
                let v = basis.eval(0, r).unwrap_or(0.0).abs();
                if v < prev {
                    past_peak = true;
                }
                if past_peak && v < DENOMINATOR_THRESHOLD {
                    break;
                }
                prev = v;
                r += 0.01 / lambda;
            }
            (lo, r)
        }
    }
}

/// `points` evenly spaced samples of [`interior_range`].
pub fn interior_grid(basis: &BasisFamily, n_terms: usize, points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = interior_range(basis, n_terms);
    linspace(lo, hi, points)
}

fn pick_column(phis: &[f64], column: Column) -> usize {
    match column {
        Column::Index(i) => i,
        Column::Auto => {
            let top = AUTO_MAX_COLUMN.min(phis.len() - 1);
            (0..=top).fold(0, |best, i| {
                if phis[i].abs() > phis[best].abs() {
                    i
                } else {
                    best
                }
            })
        }
    }
}

/// `sum_m phi_m(x) V_{m,n*} / phi_{n*}(x)` at each grid point. For
/// [`PotentialKind::ResidualVtilde`] the result is `V~`; see
/// [`reconstruct_total`] for the physical potential.
pub fn reconstruct_potential(
    v: &PotentialMatrix,
    grid: &[f64],
    column: Column,
) -> Result<SampledFunction> {
    check_increasing(grid)?;
    let n = v.dim();
    if let Column::Index(i) = column {
        if i >= n {
            return Err(Error::OutOfRange {
                index: i,
                max: n - 1,
            });
        }
    }
    let basis = v.basis();
    let dom = basis.domain();
    let e = v.entries();
    let mut vals = Vec::with_capacity(grid.len());
    let mut valid = Vec::with_capacity(grid.len());
    for &x in grid {
        if !(x > dom.lo && x < dom.hi) {
            return Err(Error::Domain(format!(
                "grid point {x} is not interior to the {} domain",
                basis.name()
            )));
        }
        let phis = basis.eval_all(n, x)?;
        let col = pick_column(&phis, column);
        let den = phis[col];
        if !(den.abs() >= DENOMINATOR_THRESHOLD) {
            vals.push(f64::NAN);
            valid.push(false);
            continue;
        }
        let num: f64 = phis.iter().enumerate().map(|(m, p)| p * e[[m, col]]).sum();
        vals.push(num / den);
        valid.push(true);
    }
    Ok(SampledFunction::new(grid.to_vec(), vals, valid)?
        .with_meta("basis", basis.name())
        .with_meta("terms", n)
        .with_meta("column", column.to_string()))
}

/// Reconstructed `V` with the split-off analytic part restored for the
/// Gegenbauer and Hermite bases. No orbital term is included.
pub fn reconstruct_total(
    v: &PotentialMatrix,
    grid: &[f64],
    column: Column,
) -> Result<SampledFunction> {
    let mut sf = reconstruct_potential(v, grid, column)?;
    if v.kind() == PotentialKind::ResidualVtilde {
        add_fixed_part(&mut sf, v.basis())?;
    }
    Ok(sf)
}

/// Adds `fixed_potential_part` at every valid point.
pub fn add_fixed_part(sf: &mut SampledFunction, basis: &BasisFamily) -> Result<()> {
    for i in 0..sf.len() {
        if sf.valid[i] {
            sf.vals[i] += basis.fixed_potential_part(sf.xs[i])?;
        }
    }
    Ok(())
}
