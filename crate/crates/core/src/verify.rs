//! Invariant suite run at a scenario's parameters, reported as
//! machine-readable pass/fail records with the measured values.

use serde::Serialize;

use crate::bases::{nu_from_v0, BasisFamily};
use crate::error::{Error, Result};
use crate::hamiltonian::{self, EnergyScale};
use crate::meixner::{self, MeixnerParams, PrecisionGuard};
use crate::quadrature;
use crate::reconstruct::{self, Column, PotentialMatrix, SampledFunction};
use crate::scenario::{CRule, Scenario};
use crate::states;

/// Series length used by the state checks when none is given.
pub const DEFAULT_STABILITY_BASE: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// `NaN` (serialised as `null`) when the check could not be evaluated.
    pub measured: f64,
    pub threshold: f64,
    /// Informational checks are reported but never fail the run.
    pub gating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn at_most(name: &str, measured: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            passed: measured <= threshold,
            measured,
            threshold,
            gating: true,
            detail: None,
        }
    }

    fn info(mut self) -> Self {
        self.gating = false;
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn from_result(name: &str, r: Result<f64>, threshold: f64) -> Self {
        match r {
            Ok(v) => Check::at_most(name, v, threshold),
            Err(e) => Check::at_most(name, f64::NAN, threshold).detail(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.gating && !c.passed)
    }
}

/// `|sum_k rho(k) - 1|` with the sum cut where the tail drops below `1e-14`.
pub fn weight_normalization_error(p: &MeixnerParams) -> f64 {
    let kc = meixner::weight_cutoff(p, 1e-14);
    let s: f64 = (0..kc).map(|k| meixner::weight(k, p)).sum();
    (s - 1.0).abs()
}

/// `max_{n,m <= n_max} |sum_k rho M_n M_m - delta_nm|`. The lattice sum runs
/// until every `rho M_n^2` term is below `1e-18` past the weight cutoff,
/// capped at the supported index range.
pub fn orthonormality_error(p: &MeixnerParams, n_max: usize) -> Result<f64> {
    let kc = meixner::weight_cutoff(p, 1e-14);
    let mut gram = vec![vec![0.0; n_max + 1]; n_max + 1];
    let mut converged = false;
    for k in 0..=meixner::MAX_INDEX {
        let w = meixner::weight(k, p);
        let m = (0..=n_max)
            .map(|n| meixner::meixner(n, k, p).map(|r| r.value))
            .collect::<Result<Vec<_>>>()?;
        let mut biggest = 0.0f64;
        for i in 0..=n_max {
            biggest = biggest.max(w * m[i] * m[i]);
            for j in 0..=i {
                gram[i][j] += w * m[i] * m[j];
            }
        }
        if k >= kc && biggest < 1e-18 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Accuracy(format!(
            "lattice sum not converged by k = {}",
            meixner::MAX_INDEX
        )));
    }
    let mut worst = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            let d = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - d).abs());
        }
    }
    Ok(worst)
}

/// `max |z_k M_n - (a_n M_n + b_{n-1} M_{n-1} + b_n M_{n+1})| / max(1, |z_k M_n|)`
/// over `n, k <= max`.
pub fn recursion_residual(p: &MeixnerParams, max: usize) -> Result<f64> {
    let rc = meixner::recursion_coeffs(max + 1, p);
    let mut worst = 0.0f64;
    for k in 0..=max {
        let m = (0..=max + 1)
            .map(|n| meixner::meixner(n, k, p).map(|r| r.value))
            .collect::<Result<Vec<_>>>()?;
        let z = meixner::z_of_k(k, p);
        for n in 0..=max {
            let mut rhs = rc.a[n] * m[n] + rc.b[n] * m[n + 1];
            if n > 0 {
                rhs += rc.b[n - 1] * m[n - 1];
            }
            let lhs = z * m[n];
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Largest relative gap between the closed form and the recursion in `n`
/// over `n, k <= max`.
pub fn cross_method_error(p: &MeixnerParams, max: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..=max {
        let rec = meixner::meixner_by_recursion(max, k, p)?;
        for (n, r) in rec.iter().enumerate() {
            let h = meixner::meixner(n, k, p)?.value;
            worst = worst.max((h - r).abs() / h.abs().max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

/// `max_{n,m <= n_max} |<phi_m|phi_n> - delta_nm|` by quadrature.
pub fn basis_orthonormality_error(f: &BasisFamily, n_max: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for m in 0..=n {
            let d = if n == m { 1.0 } else { 0.0 };
            worst = worst.max((f.orthonormality_check(n, m)? - d).abs());
        }
    }
    Ok(worst)
}

/// Largest entrywise gap between the shipped kinetic matrix and the
/// quadrature oracle. For split bases the oracle is `T + W`, which must
/// reproduce the diagonal `T~`.
pub fn kinetic_oracle_error(f: &BasisFamily, n_max: usize) -> Result<f64> {
    let t = f.kinetic_matrix(n_max + 1)?;
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for m in 0..=n_max {
            let mut o = quadrature::kinetic_element_oracle(f, n, m)?;
            if f.splits_potential() {
                o += quadrature::fixed_part_element_oracle(f, n, m)?;
            }
            worst = worst.max((o - t[[m, n]]).abs());
        }
    }
    Ok(worst)
}

/// `V = H - T` for `n` terms.
pub fn scenario_potential(f: &BasisFamily, p: &MeixnerParams, s: EnergyScale, n: usize) -> Result<PotentialMatrix> {
    let h = hamiltonian::hamiltonian_matrix(n, p, s)?;
    reconstruct::potential_matrix(&h, &f.kinetic_matrix(n)?, f)
}

/// Sup-norm change of the reconstructed potential from `n` to `n + 10` terms.
pub fn reconstruction_convergence(sc: &Scenario, n: usize) -> Result<f64> {
    let (p, s) = (sc.params()?, sc.scale()?);
    let grid = sc.grid.points()?;
    let a = reconstruct::reconstruct_total(&scenario_potential(&sc.basis, &p, s, n)?, &grid, sc.column)?;
    let b = reconstruct::reconstruct_total(&scenario_potential(&sc.basis, &p, s, n + 10)?, &grid, sc.column)?;
    a.sup_distance(&b)
}

fn shift_error(v: &PotentialMatrix, grid: &[f64], column: Column) -> Result<f64> {
    let shift = 1.5;
    let a = reconstruct::reconstruct_potential(v, grid, column)?;
    let b = reconstruct::reconstruct_potential(&v.shifted(shift), grid, column)?;
    let scale = a.valid_points().fold(1.0f64, |m, (_, y)| m.max(y.abs()));
    Ok((0..a.len())
        .filter(|&i| a.valid[i] && b.valid[i])
        .fold(0.0f64, |m, i| m.max((b.vals[i] - a.vals[i] - shift).abs()))
        / scale)
}

fn constant_error(f: &BasisFamily, n: usize, grid: &[f64], column: Column) -> Result<f64> {
    let v = 2.75;
    let mut e = ndarray::Array2::zeros((n, n));
    for i in 0..n {
        e[[i, i]] = v;
    }
    let pm = PotentialMatrix::new(e, *f, reconstruct::PotentialKind::FullV)?;
    let sf = reconstruct::reconstruct_potential(&pm, grid, column)?;
    Ok(sf.valid_points().fold(0.0f64, |m, (_, y)| m.max((y - v).abs())) / v)
}

/// `E_k` from the family-specific closed form, written out separately from
/// [`hamiltonian::energy`].
fn closed_form_energy(sc: &Scenario, k: usize) -> f64 {
    let z = sc.theta.sinh() * (k as f64 + sc.mu);
    let c = match (sc.c_rule, sc.basis) {
        (CRule::Explicit { c }, _) => c,
        (_, BasisFamily::SineBox { a }) | (_, BasisFamily::GegenbauerBox { a, .. }) => {
            std::f64::consts::PI * std::f64::consts::PI / (a * a)
        }
        (_, BasisFamily::HermiteLine { v0, .. }) => v0,
        (_, BasisFamily::LaguerreRadial { lambda, .. }) => lambda * lambda,
    };
    c * z
}

pub struct Options {
    /// Series length compared against `+10` terms in the state stability check.
    pub stability_base: usize,
    pub guard: PrecisionGuard,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            stability_base: DEFAULT_STABILITY_BASE,
            guard: PrecisionGuard::Strict,
        }
    }
}

/// Runs every check at the scenario's parameters.
pub fn verify(sc: &Scenario, opts: &Options) -> Result<Report> {
    sc.validate()?;
    let p = sc.params()?;
    let s = sc.scale()?;
    let f = sc.basis;
    let mut checks = Vec::new();

    checks.push(Check::at_most("weight-normalization", weight_normalization_error(&p), 1e-12));
    checks.push(Check::from_result("polynomial-orthonormality", orthonormality_error(&p, 25), 1e-8));
    checks.push(Check::from_result("recursion-residual", recursion_residual(&p, 30), 1e-10));
    checks.push(Check::from_result("cross-method", cross_method_error(&p, 60), 1e-10));

    for k in 0..=3 {
        let name = format!("eigencheck-k{k}");
        match (
            hamiltonian::eigencheck(60, &p, s, k),
            hamiltonian::eigencheck(120, &p, s, k),
        ) {
            (Ok(a), Ok(b)) => {
                checks.push(Check::at_most(&name, a.residual, 1e-6));
                // at the rounding floor there is nothing left to decrease
                let bound = (1.1 * a.residual).max(1e3 * f64::EPSILON);
                checks.push(
                    Check::at_most(&format!("{name}-doubling"), b.residual, bound)
                        .detail(format!("N=60: {:e}, N=120: {:e}", a.residual, b.residual)),
                );
            }
            (Err(e), _) | (_, Err(e)) => {
                checks.push(Check::at_most(&name, f64::NAN, 1e-6).detail(e.to_string()))
            }
        }
    }

    let spectrum_err = (0..=sc.levels.iter().copied().max().unwrap_or(0).max(3))
        .map(|k| {
            let e = hamiltonian::energy(k, &p, s);
            let r = closed_form_energy(sc, k);
            ((e - r) / r).abs()
        })
        .fold(0.0f64, f64::max);
    checks.push(Check::at_most("spectrum-closed-form", spectrum_err, 1e-14));

    if let BasisFamily::GegenbauerBox { a, v0, nu } = f {
        let lhs = 0.5 * (std::f64::consts::PI / a).powi(2) * nu * (nu - 1.0);
        let mut c = Check::at_most("gegenbauer-nu", (lhs - v0).abs(), 1e-12);
        if let Ok(expect) = nu_from_v0(a, v0) {
            c = c.detail(format!("nu = {expect}"));
        }
        checks.push(c);
    }

    checks.push(Check::from_result("basis-orthonormality", basis_orthonormality_error(&f, 12), 1e-8));
    let (kin_n, kin_tol) = match f {
        BasisFamily::SineBox { .. } => (10, 1e-10),
        BasisFamily::HermiteLine { .. } => (10, 1e-10),
        BasisFamily::GegenbauerBox { .. } => (8, 1e-8),
        BasisFamily::LaguerreRadial { .. } => (8, 1e-8),
    };
    checks.push(Check::from_result("kinetic-vs-oracle", kinetic_oracle_error(&f, kin_n), kin_tol));

    let grid = sc.grid.points()?;
    let v = scenario_potential(&f, &p, s, sc.terms)?;
    checks.push(Check::from_result("reconstruction-shift", shift_error(&v, &grid, sc.column), 1e-10));
    checks.push(Check::from_result(
        "reconstruction-constant",
        constant_error(&f, sc.terms, &grid, sc.column),
        1e-12,
    ));
    checks.push(Check::from_result(
        "reconstruction-convergence",
        reconstruction_convergence(sc, sc.terms),
        1e-3,
    ));

    check_states(sc, opts, &p, s, &mut checks)?;

    let passed = checks.iter().all(|c| c.passed || !c.gating);
    Ok(Report {
        scenario: sc.name.clone(),
        passed,
        checks,
    })
}

fn check_states(
    sc: &Scenario,
    opts: &Options,
    p: &MeixnerParams,
    s: EnergyScale,
    checks: &mut Vec<Check>,
) -> Result<()> {
    let f = sc.basis;
    let grid = sc.grid.points()?;
    let build = |k, n| states::build_state(k, p, s, &f, n, opts.guard);

    let base = opts.stability_base;
    for &k in &sc.levels {
        let nodes = build(k, sc.terms)
            .and_then(|st| states::eval_state(&st, &grid))
            .and_then(|sf| states::node_count(&sf));
        checks.push(match nodes {
            Ok(c) => Check {
                name: format!("nodes-k{k}"),
                passed: c == k,
                measured: c as f64,
                threshold: k as f64,
                gating: true,
                detail: None,
            },
            Err(e) => Check::at_most(&format!("nodes-k{k}"), f64::NAN, k as f64).detail(e.to_string()),
        });

        let stability = (|| {
            let a = states::eval_state(&build(k, base)?, &grid)?;
            let b = states::eval_state(&build(k, base + 10)?, &grid)?;
            a.sup_distance(&b)
        })();
        checks.push(
            Check::from_result(&format!("stability-k{k}"), stability, 1e-3)
                .detail(format!("N={base} vs N={}", base + 10)),
        );

        let decay = build(k, sc.terms).map(|st| {
            let max = st.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            st.coeffs[st.terms() - 1].abs() / max
        });
        checks.push(Check::from_result(&format!("coefficient-decay-k{k}"), decay, 1e-3).info());
    }

    let overlap = (|| {
        let sts = sc
            .levels
            .iter()
            .map(|&k| build(k, 40))
            .collect::<Result<Vec<_>>>()?;
        let mut worst = 0.0f64;
        for (i, a) in sts.iter().enumerate() {
            for (j, b) in sts.iter().enumerate().take(i + 1) {
                let d = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((states::state_overlap(a, b)? - d).abs());
            }
        }
        Ok(worst)
    })();
    checks.push(Check::from_result("state-orthonormality", overlap, 1e-3).detail("N=40"));

    let v = reconstruct::reconstruct_total(&scenario_potential(&f, p, s, sc.terms)?, &grid, sc.column)?;
    for &k in sc.levels.iter().filter(|&&k| k <= 1) {
        let r = build(k, sc.terms)
            .and_then(|st| Ok((states::eval_state(&st, &grid)?, st)))
            .and_then(|(psi, st)| states::schrodinger_residual(&st, &psi, &v));
        checks.push(Check::from_result(&format!("schrodinger-residual-k{k}"), r, 5e-2).info());
    }
    Ok(())
}

/// Reconstructed potential on the scenario grid (helper shared with `run`).
pub fn scenario_reconstruction(sc: &Scenario) -> Result<SampledFunction> {
    let v = scenario_potential(&sc.basis, &sc.params()?, sc.scale()?, sc.terms)?;
    reconstruct::reconstruct_total(&v, &sc.grid.points()?, sc.column)
}
