//! Orthonormal two-parameter Meixner polynomials `M_n^mu(k, theta)`, their
//! discrete weight and symmetric recursion coefficients.
//!
//! The closed form is
//!
//! ```text
//! M_n(k) = sqrt((2mu)_n / n!) e^{-n theta} 2F1(-n, -k; 2mu | 1 - e^{2 theta})
//! ```
//!
//! and the polynomials obey `z_k M_n = a_n M_n + b_{n-1} M_{n-1} + b_n M_{n+1}`
//! with `z_k = (k+mu) sinh theta`, `a_n = (n+mu) cosh theta` and
//! `b_n = -sqrt((n+1)(n+2mu))/2`. The hypergeometric argument is negative,
//! so the terminating sum alternates and loses many digits; it is summed in
//! double-double arithmetic with a running error bound. The recursion in `n`
//! runs in multi-word precision.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use serde::{Deserialize, Serialize};

use crate::dd::{Dd, DD_EPS};
use crate::error::{Error, Result};
use crate::special::{ln_gamma, log_pochhammer, pochhammer_over_factorial};

/// Largest polynomial degree / lattice point accepted.
pub const MAX_INDEX: usize = 200;

/// Relative `est_error` above which a value is rejected.
pub const REJECT_THRESHOLD: f64 = 1e-8;

const F64_EPS: f64 = f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeixnerParams {
    mu: f64,
    theta: f64,
}

impl MeixnerParams {
    pub fn new(mu: f64, theta: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must be > 0, got {theta}"
            )));
        }
        Ok(MeixnerParams { mu, theta })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Diagonal `a_n` and off-diagonal `b_n` of the symmetric recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMethod {
    HypergeometricSum,
    RecursionInN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: f64,
    pub method: EvalMethod,
    /// Absolute error bound on `value`.
    pub est_error: f64,
}

impl EvalReport {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.est_error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.est_error / self.value.abs()
        }
    }

    pub fn is_accurate(&self) -> bool {
        self.relative_error() <= REJECT_THRESHOLD
    }
}

/// What to do when an evaluation breaches [`REJECT_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionGuard {
    #[default]
    Strict,
    Warn,
}

impl std::str::FromStr for PrecisionGuard {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strict" => Ok(PrecisionGuard::Strict),
            "warn" => Ok(PrecisionGuard::Warn),
            other => Err(Error::InvalidParameter(format!(
                "precision guard must be strict or warn, got {other:?}"
            ))),
        }
    }
}

fn check_index(i: usize) -> Result<()> {
    if i > MAX_INDEX {
        Err(Error::OutOfRange {
            index: i,
            max: MAX_INDEX,
        })
    } else {
        Ok(())
    }
}

/// `1 - e^{2 theta}` in double-double.
fn hypergeometric_argument(theta: f64) -> Dd {
    Dd::ONE - Dd::new(2.0 * theta).exp()
}

/// Terminating `2F1(-n, -k; 2mu | z)`; returns the sum and an absolute
/// error bound.
fn terminating_2f1(n: usize, k: usize, two_mu: f64, z: Dd) -> (Dd, f64) {
    let mut term = Dd::ONE;
    let mut sum = Dd::ZERO;
    let mut err = 0.0;
    for j in 0..=n.min(k) {
        sum = sum + term;
        // each term carries ~4 roundings per step plus j-fold error of z
        err += term.hi.abs() * (8.0 * (j as f64 + 1.0)) * DD_EPS;
        let jf = j as f64;
        let num = (jf - n as f64) * (jf - k as f64); // exact integer
        let den = (Dd::new(two_mu) + Dd::new(jf)).mul_f64(jf + 1.0);
        term = (term.mul_f64(num) / den) * z;
    }
    (sum, err)
}

/// `M_n(k)` from the closed form.
pub fn meixner(n: usize, k: usize, p: &MeixnerParams) -> Result<EvalReport> {
    check_index(n)?;
    check_index(k)?;
    let two_mu = 2.0 * p.mu;
    let z = hypergeometric_argument(p.theta);
    let (sum, sum_err) = terminating_2f1(n, k, two_mu, z);
    let prefactor = pochhammer_over_factorial(two_mu, n).sqrt() * (-(n as f64) * p.theta).exp();
    let value = prefactor * sum.to_f64();
    let pref_rel = (2.0 * n as f64 + 4.0 + n as f64 * p.theta) * F64_EPS;
    let est_error = prefactor.abs() * sum_err + value.abs() * pref_rel;
    Ok(EvalReport {
        value,
        method: EvalMethod::HypergeometricSum,
        est_error,
    })
}

/// [`meixner`] with the accuracy threshold applied according to `guard`.
pub fn meixner_checked(
    n: usize,
    k: usize,
    p: &MeixnerParams,
    guard: PrecisionGuard,
) -> Result<EvalReport> {
    let r = meixner(n, k, p)?;
    if !r.is_accurate() {
        let msg = format!(
            "M_{n}({k}) at mu={}, theta={}: relative est_error {:.3e} exceeds {REJECT_THRESHOLD:e}",
            p.mu,
            p.theta,
            r.relative_error()
        );
        match guard {
            PrecisionGuard::Strict => return Err(Error::Accuracy(msg)),
            PrecisionGuard::Warn => eprintln!("warning: {msg}"),
        }
    }
    Ok(r)
}

/// `(M_0(k), ..., M_{n_max}(k))` by upward recursion in `n`, seeded with
/// `M_0 = 1` and the closed-form `M_1`.
///
/// `M_n(k)` is the minimal solution of the recursion, so each step amplifies
/// earlier rounding by about `e^{2 theta}`. The recursion therefore runs in
/// binary floating point with enough bits to absorb `e^{2 theta n_max}`.
pub fn meixner_by_recursion(n_max: usize, k: usize, p: &MeixnerParams) -> Result<Vec<f64>> {
    check_index(n_max)?;
    check_index(k)?;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return Ok(out);
    }
    let growth_bits = (2.0 * p.theta * n_max as f64 / std::f64::consts::LN_2).ceil() as usize;
    let prec = (growth_bits + 192).div_ceil(64) * 64;
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().map_err(|e| Error::Accuracy(format!("bigfloat constants: {e:?}")))?;
    let big = |x: f64| BigFloat::from_f64(x, prec);
    let one = big(1.0);
    let half = big(0.5);

    let mu = big(p.mu);
    let two_mu = big(2.0 * p.mu);
    let e_pos = big(p.theta).exp(prec, rm, &mut cc);
    let e_neg = one.div(&e_pos, prec, rm);
    let cosh = e_pos.add(&e_neg, prec, rm).mul(&half, prec, rm);
    let sinh = e_pos.sub(&e_neg, prec, rm).mul(&half, prec, rm);
    let z = one.sub(&e_pos.mul(&e_pos, prec, rm), prec, rm);
    let zk = big(k as f64).add(&mu, prec, rm).mul(&sinh, prec, rm);

    // b_n = -sqrt((n+1)(n+2mu))/2
    let off = |n: usize| -> BigFloat {
        two_mu
            .add(&big(n as f64), prec, rm)
            .mul(&big(n as f64 + 1.0), prec, rm)
            .sqrt(prec, rm)
            .mul(&half, prec, rm)
            .neg()
    };

    // M_1 = sqrt(2mu) e^{-theta} (1 + k z / 2mu)
    let mut prev = one.clone();
    let mut cur = two_mu.sqrt(prec, rm).mul(&e_neg, prec, rm).mul(
        &one.add(&big(k as f64).mul(&z, prec, rm).div(&two_mu, prec, rm), prec, rm),
        prec,
        rm,
    );
    out.push(big_to_f64(&cur));
    let mut b_prev = off(0);
    for n in 1..n_max {
        let a_n = big(n as f64).add(&mu, prec, rm).mul(&cosh, prec, rm);
        let b_n = off(n);
        let next = zk
            .sub(&a_n, prec, rm)
            .mul(&cur, prec, rm)
            .sub(&b_prev.mul(&prev, prec, rm), prec, rm)
            .div(&b_n, prec, rm);
        out.push(big_to_f64(&next));
        prev = cur;
        cur = next;
        b_prev = b_n;
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Accuracy(format!(
            "recursion for k = {k} left the f64 range"
        )));
    }
    Ok(out)
}

/// Nearest `f64` to a finite `BigFloat` (NaN otherwise).
fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // value = 0.m * 2^exp with the most significant word last
    let top = *words.last().expect("nonzero mantissa");
    let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
    // fold a sticky bit from the lower words into `top` for correct rounding
    let sticky = u64::from(next != 0 || words.len() > 2 && words[..words.len() - 2].iter().any(|w| *w != 0));
    let v = libm::ldexp((top | sticky) as f64, exp - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Discrete weight `rho(k) = (2 sinh theta)^{2mu} (2mu)_k/k! e^{-2(k+mu) theta}`.
pub fn weight(k: usize, p: &MeixnerParams) -> f64 {
    let two_mu = 2.0 * p.mu;
    let ln_poch = log_pochhammer(two_mu, k).expect("2mu > 0 by construction");
    let ln_w = two_mu * (2.0 * p.theta.sinh()).ln() + ln_poch
        - ln_gamma(k as f64 + 1.0)
        - 2.0 * (k as f64 + p.mu) * p.theta;
    ln_w.exp()
}

pub fn recursion_coeffs(n_max: usize, p: &MeixnerParams) -> RecursionCoeffs {
    let ch = p.theta.cosh();
    let a = (0..=n_max).map(|n| (n as f64 + p.mu) * ch).collect();
    let b = (0..=n_max)
        .map(|n| -0.5 * ((n as f64 + 1.0) * (n as f64 + 2.0 * p.mu)).sqrt())
        .collect();
    RecursionCoeffs { a, b }
}

/// Spectral variable `z_k = (k + mu) sinh theta`.
pub fn z_of_k(k: usize, p: &MeixnerParams) -> f64 {
    (k as f64 + p.mu) * p.theta.sinh()
}

/// Number of lattice points after which the weight tail drops below `tail_tol`.
pub fn weight_cutoff(p: &MeixnerParams, tail_tol: f64) -> usize {
    // The ratio rho(k+1)/rho(k) = (2mu+k)/(k+1) e^{-2 theta} eventually
    // falls below r < 1; the remaining tail is then bounded by rho(k) r/(1-r).
    let q = (-2.0 * p.theta).exp();
    let mut k = 0usize;
    loop {
        let r = (2.0 * p.mu + k as f64) / (k as f64 + 1.0) * q;
        if r < 1.0 {
            let tail = weight(k, p) * r / (1.0 - r);
            if tail < tail_tol {
                return k + 1;
            }
        }
        k += 1;
        if k >= 10 * MAX_INDEX {
            return k;
        }
    }
}
