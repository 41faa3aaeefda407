//! Bound states `psi_k = sqrt(rho(k)) sum_n M_n(k) phi_n` and the checks
//! run on them.

use serde::Serialize;

use crate::bases::BasisFamily;
use crate::error::{Error, Result};
use crate::hamiltonian::{self, EnergyScale};
use crate::meixner::{self, MeixnerParams, PrecisionGuard};
use crate::quadrature;
use crate::reconstruct::{self, SampledFunction};

/// Highest level [`build_state`] accepts.
pub const MAX_LEVEL: usize = 10;
/// Values below this fraction of the peak are treated as zero by [`node_count`].
pub const NODE_FLOOR: f64 = 1e-9;
/// Grid size below which [`node_count`] refuses to count.
pub const MIN_NODE_GRID: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundState {
    pub k: usize,
    pub energy: f64,
    /// `sqrt(rho(k)) M_n(k)`, `n < N`, with the overall sign fixed.
    pub coeffs: Vec<f64>,
    pub basis: BasisFamily,
}

impl BoundState {
    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// `psi(x)`.
    pub fn value(&self, x: f64) -> Result<f64> {
        let phis = self.basis.eval_all(self.coeffs.len(), x)?;
        Ok(phis.iter().zip(&self.coeffs).map(|(p, c)| p * c).sum())
    }

    /// Partial norm `sum_n coeffs_n^2`.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Builds level `k` from `n_terms` Meixner coefficients.
///
/// The sign is chosen so that, scanning the default interior window from
/// the left, the first sample above `1e-3` of the peak is positive.
pub fn build_state(
    k: usize,
    p: &MeixnerParams,
    s: EnergyScale,
    f: &BasisFamily,
    n_terms: usize,
    guard: PrecisionGuard,
) -> Result<BoundState> {
    if k > MAX_LEVEL {
        return Err(Error::Precondition(format!(
            "bound states are built for k <= {MAX_LEVEL}, got {k}"
        )));
    }
    if n_terms == 0 {
        return Err(Error::Size("state needs at least one term".into()));
    }
    if n_terms > meixner::MAX_INDEX + 1 {
        return Err(Error::OutOfRange {
            index: n_terms - 1,
            max: meixner::MAX_INDEX,
        });
    }
    f.validate()?;
    let amp = meixner::weight(k, p).sqrt();
    let coeffs = (0..n_terms)
        .map(|n| meixner::meixner_checked(n, k, p, guard).map(|r| amp * r.value))
        .collect::<Result<Vec<_>>>()?;
    let mut st = BoundState {
        k,
        energy: hamiltonian::energy(k, p, s),
        coeffs,
        basis: *f,
    };
    if leading_sign(&st)? < 0.0 {
        st.coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(st)
}

fn leading_sign(st: &BoundState) -> Result<f64> {
    let grid = reconstruct::interior_grid(&st.basis, st.terms(), 2001)?;
    let vals = grid.iter().map(|&x| st.value(x)).collect::<Result<Vec<_>>>()?;
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(vals
        .iter()
        .find(|v| v.abs() > 1e-3 * peak)
        .map_or(1.0, |v| v.signum()))
}

/// `psi` sampled on `xs`.
pub fn eval_state(st: &BoundState, xs: &[f64]) -> Result<SampledFunction> {
    let vals = xs.iter().map(|&x| st.value(x)).collect::<Result<Vec<_>>>()?;
    Ok(SampledFunction::new(xs.to_vec(), vals, vec![true; xs.len()])?
        .with_meta("basis", st.basis.name())
        .with_meta("level", st.k)
        .with_meta("terms", st.terms())
        .with_meta("energy", st.energy))
}

/// Strict sign changes across the valid samples, ignoring values below
/// `1e-9` of the largest magnitude.
pub fn node_count(sf: &SampledFunction) -> Result<usize> {
    if sf.len() < MIN_NODE_GRID {
        return Err(Error::Precondition(format!(
            "node counting needs at least {MIN_NODE_GRID} points, got {}",
            sf.len()
        )));
    }
    let peak = sf.valid_points().fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    if !(peak > 0.0) {
        return Err(Error::Precondition("node count undefined for an all-zero function".into()));
    }
    let floor = NODE_FLOOR * peak;
    let mut count = 0;
    let mut last = 0.0;
    for (_, v) in sf.valid_points().filter(|(_, v)| v.abs() > floor) {
        if last != 0.0 && v.signum() != last {
            count += 1;
        }
        last = v.signum();
    }
    Ok(count)
}

/// Relative residual of `-psi''/2 + (V + orbital) psi - E psi` with a
/// three-point second difference, normalised by `|E| ||psi||`.
///
/// `potential` must not include the orbital term; both functions must share
/// one uniform grid. End points and points next to invalid potential
/// samples are skipped.
pub fn schrodinger_residual(
    st: &BoundState,
    psi: &SampledFunction,
    potential: &SampledFunction,
) -> Result<f64> {
    reconstruct::same_grid(&psi.xs, &potential.xs)?;
    let xs = &psi.xs;
    if xs.len() < 3 {
        return Err(Error::Size("residual needs at least 3 grid points".into()));
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    if xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return Err(Error::Precondition("residual needs a uniform grid".into()));
    }
    if st.energy == 0.0 {
        return Err(Error::Precondition("residual is normalised by |E|, which is zero".into()));
    }
    let y = &psi.vals;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..xs.len() - 1 {
        if !(potential.valid[i] && psi.valid[i - 1] && psi.valid[i] && psi.valid[i + 1]) {
            continue;
        }
        let d2 = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
        let v = potential.vals[i] + st.basis.orbital_term(xs[i]);
        let r = -0.5 * d2 + (v - st.energy) * y[i];
        num += r * r;
        den += y[i] * y[i];
    }
    if den == 0.0 {
        return Err(Error::Precondition("state vanishes on the usable grid".into()));
    }
    Ok(num.sqrt() / (st.energy.abs() * den.sqrt()))
}

/// `int psi_a psi_b d mu` with the family's Gaussian rule.
pub fn state_overlap(a: &BoundState, b: &BoundState) -> Result<f64> {
    if a.basis != b.basis {
        return Err(Error::Precondition("states live in different bases".into()));
    }
    let n = a.terms().max(b.terms());
    let nodes = match a.basis {
        BasisFamily::SineBox { .. } => quadrature::LEGENDRE_NODES.max(4 * n + 40),
        BasisFamily::GegenbauerBox { .. } => quadrature::LEGENDRE_NODES.max(n + 10),
        _ => quadrature::INFINITE_NODES.max(n + 10),
    };
    let pts = quadrature::measure_nodes(&a.basis, nodes, 0.0)?;
    let mut sum = 0.0;
    for (x, w) in pts {
        sum += w * a.value(x)? * b.value(x)?;
    }
    Ok(sum)
}
