//! The four configuration-space bases: sine box, weighted Gegenbauer box,
//! Hermite functions on the line and weighted Laguerre functions on the
//! half line, with their kinetic-energy matrices and the analytic potential
//! parts that are moved into the kinetic term.

use std::f64::consts::{LN_2, PI};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::{ln_gamma, log_pochhammer};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum BasisFamily {
    /// `sqrt(2/pi) sin((n+1) pi x / a)` on `[0, a]`.
    SineBox { a: f64 },
    /// `A_n (1-y^2)^{nu/2} C_n^nu(y)`, `y = sin(pi x / a)`, on `[-a/2, a/2]`;
    /// `nu` solves `(pi/a)^2 nu (nu-1) / 2 = v0`.
    GegenbauerBox { a: f64, v0: f64, nu: f64 },
    /// Hermite functions of `y = lambda x` with `lambda^2 = v0`.
    HermiteLine { v0: f64, lambda: f64 },
    /// `A_n y^{nu/2} e^{-y/2} L_n^nu(y)`, `y = lambda r`, `nu = 2(ell+1)`.
    LaguerreRadial { lambda: f64, ell: u32, nu: f64 },
}

/// Coordinate interval plus the constant factor of the integration measure
/// (`(pi/a) dx` or `lambda dx`) under which the basis is orthonormal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    measure: f64,
}

impl Domain {
    pub fn measure_factor(&self, _x: f64) -> f64 {
        self.measure
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Larger root of `(pi/a)^2 nu (nu - 1) / 2 = v0`.
pub fn nu_from_v0(a: f64, v0: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("box length must be > 0, got {a}")));
    }
    let mut disc = 1.0 + 8.0 * v0 * a * a / (PI * PI);
    if disc < 0.0 {
        // rounding at exactly v0 = -(pi/a)^2/8
        if disc > -1e-14 {
            disc = 0.0;
        } else {
            return Err(Error::InvalidParameter(format!(
                "v0 = {v0} is below the bound -(pi/a)^2/8 = {}",
                -(PI / a).powi(2) / 8.0
            )));
        }
    }
    Ok(0.5 * (1.0 + disc.sqrt()))
}

impl BasisFamily {
    pub fn sine_box(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("box length must be > 0, got {a}")));
        }
        Ok(BasisFamily::SineBox { a })
    }

    pub fn gegenbauer_box(a: f64, v0: f64) -> Result<Self> {
        let nu = nu_from_v0(a, v0)?;
        Ok(BasisFamily::GegenbauerBox { a, v0, nu })
    }

    pub fn hermite_line(v0: f64) -> Result<Self> {
        if !(v0 > 0.0) || !v0.is_finite() {
            return Err(Error::InvalidParameter(format!("hermite line needs v0 > 0, got {v0}")));
        }
        Ok(BasisFamily::HermiteLine {
            v0,
            lambda: v0.sqrt(),
        })
    }

    pub fn laguerre_radial(lambda: f64, ell: u32) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
        }
        Ok(BasisFamily::LaguerreRadial {
            lambda,
            ell,
            nu: 2.0 * (ell as f64 + 1.0),
        })
    }

    /// Re-checks the invariants of a family built field by field.
    pub fn validate(&self) -> Result<()> {
        match *self {
            BasisFamily::SineBox { a } => Self::sine_box(a).map(|_| ()),
            BasisFamily::GegenbauerBox { a, v0, nu } => {
                let expect = nu_from_v0(a, v0)?;
                if (expect - nu).abs() > 1e-12 * expect {
                    return Err(Error::InvalidParameter(format!(
                        "gegenbauer nu = {nu} inconsistent with v0 = {v0} (expected {expect})"
                    )));
                }
                Ok(())
            }
            BasisFamily::HermiteLine { v0, lambda } => {
                Self::hermite_line(v0)?;
                if (lambda * lambda - v0).abs() > 1e-12 * v0 {
                    return Err(Error::InvalidParameter("hermite line needs lambda^2 = v0".into()));
                }
                Ok(())
            }
            BasisFamily::LaguerreRadial { lambda, ell, nu } => {
                Self::laguerre_radial(lambda, ell)?;
                if nu != 2.0 * (ell as f64 + 1.0) {
                    return Err(Error::InvalidParameter("laguerre radial needs nu = 2(ell+1)".into()));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BasisFamily::SineBox { .. } => "sine-box",
            BasisFamily::GegenbauerBox { .. } => "gegenbauer-box",
            BasisFamily::HermiteLine { .. } => "hermite-line",
            BasisFamily::LaguerreRadial { .. } => "laguerre-radial",
        }
    }

    pub fn domain(&self) -> Domain {
        match *self {
            BasisFamily::SineBox { a } => Domain {
                lo: 0.0,
                hi: a,
                measure: PI / a,
            },
            BasisFamily::GegenbauerBox { a, .. } => Domain {
                lo: -0.5 * a,
                hi: 0.5 * a,
                measure: PI / a,
            },
            BasisFamily::HermiteLine { lambda, .. } => Domain {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                measure: lambda,
            },
            BasisFamily::LaguerreRadial { lambda, .. } => Domain {
                lo: 0.0,
                hi: f64::INFINITY,
                measure: lambda,
            },
        }
    }

    /// True when the shipped kinetic matrix is only the diagonal part `T~`
    /// and the matching analytic potential has been moved into it.
    pub fn splits_potential(&self) -> bool {
        matches!(
            self,
            BasisFamily::GegenbauerBox { .. } | BasisFamily::HermiteLine { .. }
        )
    }

    /// Orbital term `ell(ell+1)/2r^2` that belongs to the radial kinetic
    /// operator; zero for the one-dimensional families.
    pub fn orbital_term(&self, x: f64) -> f64 {
        match *self {
            BasisFamily::LaguerreRadial { ell, .. } => {
                let l = ell as f64;
                l * (l + 1.0) / (2.0 * x * x)
            }
            _ => 0.0,
        }
    }

    /// `phi_n(x)`.
    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        if !x.is_finite() || !self.domain().contains(x) {
            return Err(Error::Domain(format!(
                "x = {x} outside the {} domain",
                self.name()
            )));
        }
        Ok(match *self {
            BasisFamily::SineBox { a } => (2.0 / PI).sqrt() * ((n as f64 + 1.0) * PI * x / a).sin(),
            BasisFamily::GegenbauerBox { a, nu, .. } => {
                let t = PI * x / a;
                let y = t.sin();
                let c = t.cos().max(0.0);
                let ln_a = gegenbauer_ln_norm(n, nu);
                (ln_a + nu * c.ln()).exp() * gegenbauer_poly(n, nu, y)
            }
            BasisFamily::HermiteLine { lambda, .. } => {
                let y = lambda * x;
                (hermite_ln_norm(n) - 0.5 * y * y).exp() * hermite_poly(n, y)
            }
            BasisFamily::LaguerreRadial { lambda, nu, .. } => {
                let y = lambda * x;
                let ln_a = 0.5 * (ln_gamma(n as f64 + 1.0) - ln_gamma(n as f64 + nu + 1.0));
                (ln_a + 0.5 * nu * y.ln() - 0.5 * y).exp() * laguerre_poly(n, nu, y)
            }
        })
    }

    /// `(phi_0(x), ..., phi_{n-1}(x))`.
    pub fn eval_all(&self, n: usize, x: f64) -> Result<Vec<f64>> {
        (0..n).map(|i| self.eval(i, x)).collect()
    }

    /// Kinetic matrix used to form `V = H - T`: the full `T` for the sine
    /// and radial bases, the diagonal part `T~` for the split bases.
    pub fn kinetic_matrix(&self, n: usize) -> Result<Array2<f64>> {
        if n < 2 {
            return Err(Error::Size(format!("kinetic matrix needs N >= 2, got {n}")));
        }
        let mut t = Array2::zeros((n, n));
        match *self {
            BasisFamily::SineBox { a } => {
                for i in 0..n {
                    t[[i, i]] = 0.5 * ((i as f64 + 1.0) * PI / a).powi(2);
                }
            }
            BasisFamily::GegenbauerBox { a, nu, .. } => {
                for i in 0..n {
                    t[[i, i]] = PI * PI / (2.0 * a * a) * (i as f64 + nu).powi(2);
                }
            }
            BasisFamily::HermiteLine { lambda, .. } => {
                for i in 0..n {
                    t[[i, i]] = 0.5 * lambda * lambda * (2.0 * i as f64 + 1.0);
                }
            }
            BasisFamily::LaguerreRadial { lambda, ell, .. } => {
                let l = ell as f64;
                let q = 2 * ell as usize + 2;
                let scale = 0.25 * lambda * lambda;
                for i in 0..n {
                    t[[i, i]] = scale * (0.5 + 2.0 * i as f64 / (2.0 * l + 3.0));
                    for j in 0..i {
                        // j < i: sqrt((j+1)_q / (i+1)_q) (1 + 2j/(2l+3))
                        let ratio = log_pochhammer(j as f64 + 1.0, q)?
                            - log_pochhammer(i as f64 + 1.0, q)?;
                        let v = scale * (0.5 * ratio).exp() * (1.0 + 2.0 * j as f64 / (2.0 * l + 3.0));
                        t[[i, j]] = v;
                        t[[j, i]] = v;
                    }
                }
            }
        }
        Ok(t)
    }

    /// Analytic potential part added back for display: `V0/cos^2(pi x/a)`,
    /// `V0 (lambda x)^2 / 2`, or the orbital term for the radial basis.
    pub fn fixed_potential_part(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || !self.domain().contains(x) {
            return Err(Error::Domain(format!(
                "x = {x} outside the {} domain",
                self.name()
            )));
        }
        match *self {
            BasisFamily::SineBox { .. } => Ok(0.0),
            BasisFamily::GegenbauerBox { a, v0, .. } => {
                if x.abs() >= 0.5 * a {
                    return Err(Error::Singularity(x));
                }
                Ok(v0 / (PI * x / a).cos().powi(2))
            }
            BasisFamily::HermiteLine { v0, lambda } => Ok(0.5 * v0 * (lambda * x).powi(2)),
            BasisFamily::LaguerreRadial { .. } => {
                if x == 0.0 {
                    return Err(Error::Singularity(x));
                }
                Ok(self.orbital_term(x))
            }
        }
    }

    /// `int phi_n phi_m d mu` by Gaussian quadrature.
    pub fn orthonormality_check(&self, n: usize, m: usize) -> Result<f64> {
        quadrature::matrix_element(self, |_| 1.0, n, m)
    }
}

fn gegenbauer_ln_norm(n: usize, nu: f64) -> f64 {
    let nf = n as f64;
    0.5 * (LN_2 + (nf + nu).ln() + ln_gamma(nf + 2.0 * nu) - ln_gamma(nf + 1.0))
        - nu * LN_2
        - ln_gamma(nu + 0.5)
}

fn hermite_ln_norm(n: usize) -> f64 {
    -0.5 * (0.5 * PI.ln() + n as f64 * LN_2 + ln_gamma(n as f64 + 1.0))
}

/// Ultraspherical polynomial normalised to `C_n(1) = 1`,
/// i.e. `2F1(-n, n+2nu; nu+1/2 | (1-y)/2)`.
pub fn gegenbauer_poly(n: usize, nu: f64, y: f64) -> f64 {
    // (k + 2nu) C_{k+1} = 2(k + nu) y C_k - k C_{k-1}
    let (mut prev, mut cur) = (1.0, y);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 * (kf + nu) * y * cur - kf * prev) / (kf + 2.0 * nu);
        prev = cur;
        cur = next;
    }
    cur
}

/// Physicists' Hermite polynomial `H_n(y)`.
pub fn hermite_poly(n: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * y);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalised Laguerre polynomial `L_n^nu(y)`.
pub fn laguerre_poly(n: usize, nu: f64, y: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + nu - y);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + nu + 1.0 - y) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `A_n = sqrt(n! / Gamma(n + nu + 1))`.
pub fn laguerre_norm(n: usize, nu: f64) -> f64 {
    (0.5 * (ln_gamma(n as f64 + 1.0) - ln_gamma(n as f64 + nu + 1.0))).exp()
}
