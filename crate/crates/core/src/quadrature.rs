//! Gaussian quadrature rules and the brute-force matrix-element oracles
//! built on them.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix of the weight's
//! orthonormal polynomials (implicit QL), are polished by Newton steps on
//! `p_n`, and weights use the Christoffel form `1 / sum_j p_j(x)^2` so the
//! tiny outer weights of the Hermite and Laguerre rules keep full relative
//! accuracy.

use serde::Serialize;

use crate::bases::BasisFamily;
use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Default node count for Legendre-type rules.
pub const LEGENDRE_NODES: usize = 64;
/// Default node count for Hermite and Laguerre rules.
pub const INFINITE_NODES: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    /// weight 1 on [-1, 1]
    Legendre,
    /// weight e^{-x^2} on the real line
    Hermite,
    /// weight x^alpha e^{-x} on [0, inf)
    Laguerre { alpha: f64 },
    /// weight (1-x^2)^lambda on [-1, 1]
    Gegenbauer { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

struct Recurrence {
    alpha: Vec<f64>,
    /// beta[j] couples p_{j-1} and p_j; beta[0] unused
    beta: Vec<f64>,
    mu0: f64,
}

impl RuleKind {
    fn recurrence(&self, n: usize) -> Recurrence {
        let mut alpha = vec![0.0; n + 1];
        let mut beta = vec![0.0; n + 1];
        let mu0 = match *self {
            RuleKind::Legendre => {
                for j in 1..=n {
                    let j = j as f64;
                    beta[j as usize] = j / (4.0 * j * j - 1.0).sqrt();
                }
                2.0
            }
            RuleKind::Hermite => {
                for (j, b) in beta.iter_mut().enumerate().skip(1) {
                    *b = (j as f64 / 2.0).sqrt();
                }
                std::f64::consts::PI.sqrt()
            }
            RuleKind::Laguerre { alpha: a } => {
                for j in 0..=n {
                    alpha[j] = 2.0 * j as f64 + a + 1.0;
                    if j > 0 {
                        beta[j] = (j as f64 * (j as f64 + a)).sqrt();
                    }
                }
                ln_gamma(a + 1.0).exp()
            }
            RuleKind::Gegenbauer { lambda: l } => {
                for j in 1..=n {
                    let jf = j as f64;
                    // the j = 1 factor (1 + 2 lambda) cancels; keep it finite at lambda = -1/2
                    let b2 = if j == 1 {
                        1.0 / (3.0 + 2.0 * l)
                    } else {
                        jf * (jf + 2.0 * l) / ((2.0 * jf + 2.0 * l + 1.0) * (2.0 * jf + 2.0 * l - 1.0))
                    };
                    beta[j] = b2.sqrt();
                }
                (std::f64::consts::PI.ln() * 0.5 + ln_gamma(l + 1.0) - ln_gamma(l + 1.5)).exp()
            }
        };
        Recurrence { alpha, beta, mu0 }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            RuleKind::Laguerre { alpha } if !(alpha > -1.0) => Err(Error::InvalidParameter(
                format!("Laguerre rule needs alpha > -1, got {alpha}"),
            )),
            RuleKind::Gegenbauer { lambda } if !(lambda > -1.0) => Err(Error::InvalidParameter(
                format!("Gegenbauer rule needs lambda > -1, got {lambda}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson
/// shifts). `off[i]` couples rows `i` and `i+1`.
fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    e.truncate(n);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::Accuracy("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}

impl QuadratureRule {
    pub fn new(kind: RuleKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Size("quadrature rule needs at least one node".into()));
        }
        kind.validate()?;
        let rec = kind.recurrence(n);
        let diag = &rec.alpha[..n];
        let off = &rec.beta[1..n];
        let mut nodes = tridiagonal_eigenvalues(diag, off)?;

        let p0 = 1.0 / rec.mu0.sqrt();
        let eval = |x: f64| -> (f64, f64, f64) {
            // returns p_n(x), p_n'(x), sum_{j<n} p_j(x)^2
            let (mut pm, mut p) = (0.0, p0);
            let (mut dpm, mut dp) = (0.0, 0.0);
            let mut sq = 0.0;
            for j in 0..n {
                sq += p * p;
                let b_next = rec.beta[j + 1];
                let pn = ((x - rec.alpha[j]) * p - rec.beta[j] * pm) / b_next;
                let dpn = (p + (x - rec.alpha[j]) * dp - rec.beta[j] * dpm) / b_next;
                pm = p;
                p = pn;
                dpm = dp;
                dp = dpn;
            }
            (p, dp, sq)
        };

        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp, _) = eval(*x);
                if dp == 0.0 || !dp.is_finite() {
                    break;
                }
                let step = p / dp;
                *x -= step;
                if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, _, sq) = eval(*x);
            weights.push(1.0 / sq);
        }
        Ok(QuadratureRule {
            nodes,
            weights,
            kind,
        })
    }

    pub fn gauss_legendre(n: usize) -> Result<Self> {
        Self::new(RuleKind::Legendre, n)
    }

    pub fn gauss_hermite(n: usize) -> Result<Self> {
        Self::new(RuleKind::Hermite, n)
    }

    pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Self> {
        Self::new(RuleKind::Laguerre { alpha }, n)
    }

    pub fn gauss_gegenbauer(n: usize, lambda: f64) -> Result<Self> {
        Self::new(RuleKind::Gegenbauer { lambda }, n)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Polynomials up to this degree (times the weight) integrate exactly.
    pub fn exactness_degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// `sum_i w_i f(x_i)`, i.e. the integral of `f` against the rule's weight.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Legendre rule mapped onto `[lo, hi]` (weight 1, Jacobian folded in).
    pub fn legendre_on(n: usize, lo: f64, hi: f64) -> Result<Self> {
        let mut r = Self::gauss_legendre(n)?;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (x, w) in r.nodes.iter_mut().zip(r.weights.iter_mut()) {
            *x = mid + half * *x;
            *w *= half;
        }
        Ok(r)
    }
}

/// Pairs `(x_i, W_i)` such that `sum_i W_i F(x_i)` approximates
/// `int F(x) d mu(x)` with the family's measure (`(pi/a) dx` or `lambda dx`).
/// `extra_power` lowers the Laguerre exponent by that amount (used for
/// integrands carrying `1/y^2`).
pub(crate) fn measure_nodes(
    family: &BasisFamily,
    nodes: usize,
    extra_power: f64,
) -> Result<Vec<(f64, f64)>> {
    use std::f64::consts::PI;
    Ok(match *family {
        BasisFamily::SineBox { a } => {
            let r = QuadratureRule::legendre_on(nodes, 0.0, a)?;
            r.nodes
                .iter()
                .zip(&r.weights)
                .map(|(&x, &w)| (x, w * PI / a))
                .collect()
        }
        BasisFamily::GegenbauerBox { a, nu, .. } => {
            // y = sin(pi x / a); (pi/a) dx = dy / sqrt(1-y^2)
            let lambda = nu - 0.5;
            let r = QuadratureRule::gauss_gegenbauer(nodes, lambda)?;
            r.nodes
                .iter()
                .zip(&r.weights)
                .map(|(&y, &w)| {
                    let x = a / PI * y.asin();
                    (x, w / (1.0 - y * y).powf(nu))
                })
                .collect()
        }
        BasisFamily::HermiteLine { lambda, .. } => {
            let r = QuadratureRule::gauss_hermite(nodes)?;
            r.nodes
                .iter()
                .zip(&r.weights)
                .map(|(&y, &w)| (y / lambda, w * (y * y).exp()))
                .collect()
        }
        BasisFamily::LaguerreRadial { lambda, nu, .. } => {
            let alpha = nu - extra_power;
            let r = QuadratureRule::gauss_laguerre(nodes, alpha)?;
            r.nodes
                .iter()
                .zip(&r.weights)
                .map(|(&y, &w)| (y / lambda, w * (y - alpha * y.ln()).exp()))
                .collect()
        }
    })
}

fn default_nodes(family: &BasisFamily, n: usize, m: usize) -> usize {
    match family {
        // oscillatory integrands: resolve frequency (n+m+2) pi
        BasisFamily::SineBox { .. } => LEGENDRE_NODES.max(2 * (n + m) + 40),
        BasisFamily::GegenbauerBox { .. } => LEGENDRE_NODES,
        _ => INFINITE_NODES,
    }
}

/// `<phi_m | g | phi_n>` by the family's Gaussian rule, `g` a function of
/// position.
pub fn matrix_element<G: Fn(f64) -> f64>(
    family: &BasisFamily,
    g: G,
    n: usize,
    m: usize,
) -> Result<f64> {
    let pts = measure_nodes(family, default_nodes(family, n, m), 0.0)?;
    let mut sum = 0.0;
    for (x, w) in pts {
        let gx = g(x);
        if !gx.is_finite() {
            return Err(Error::Domain(format!("integrand not finite at x = {x}")));
        }
        sum += w * family.eval(m, x)? * gx * family.eval(n, x)?;
    }
    Ok(sum)
}

/// `(T phi_n)(x)` from the closed-form action of `-1/2 d^2/dx^2` (plus the
/// orbital term for the radial family), written out per basis.
pub fn kinetic_action(family: &BasisFamily, n: usize, x: f64) -> Result<f64> {
    use std::f64::consts::PI;
    Ok(match *family {
        BasisFamily::SineBox { a } => {
            let k = (n as f64 + 1.0) * PI / a;
            0.5 * k * k * family.eval(n, x)?
        }
        BasisFamily::GegenbauerBox { a, nu, .. } => {
            let y = (PI * x / a).sin();
            let s = 1.0 - y * y;
            let bracket = nu * (nu - 1.0) / s - (n as f64 + nu).powi(2);
            -PI * PI / (2.0 * a * a) * bracket * family.eval(n, x)?
        }
        BasisFamily::HermiteLine { lambda, .. } => {
            let y = lambda * x;
            -0.5 * lambda * lambda * (y * y - (2.0 * n as f64 + 1.0)) * family.eval(n, x)?
        }
        BasisFamily::LaguerreRadial { lambda, ell, .. } => {
            let y = lambda * x;
            let l = ell as f64;
            let nf = n as f64;
            let nu = 2.0 * l + 2.0;
            let an = crate::bases::laguerre_norm(n, nu);
            let ln = crate::bases::laguerre_poly(n, nu, y);
            let ln1 = if n > 0 {
                crate::bases::laguerre_poly(n - 1, nu, y)
            } else {
                0.0
            };
            let prefactor = an * (-(0.5 * y) + (l + 1.0) * y.ln()).exp();
            let curly = (-nf / (y * y) - (nf + l + 1.0) / y + 0.25) * ln
                + (nf + 2.0 * l + 2.0) / (y * y) * ln1;
            -0.5 * lambda * lambda * prefactor * curly
        }
    })
}

/// `<phi_m | T | phi_n>` by quadrature of `phi_m (T phi_n)`.
///
/// For the Gegenbauer and Hermite families this is the complete kinetic
/// matrix, not its diagonal part; the singular `1/(1-y^2)` contribution
/// of the Gegenbauer case is only integrable for `nu > 1/2` and is
/// computed with the weight exponent lowered accordingly.
pub fn kinetic_element_oracle(family: &BasisFamily, n: usize, m: usize) -> Result<f64> {
    let (nodes, extra) = match family {
        BasisFamily::LaguerreRadial { .. } => (INFINITE_NODES, 2.0),
        _ => (default_nodes(family, n, m), 0.0),
    };
    let pts = match family {
        BasisFamily::GegenbauerBox { a, nu, .. } => gegenbauer_singular_nodes(*a, *nu, nodes)?,
        _ => measure_nodes(family, nodes, extra)?,
    };
    let mut sum = 0.0;
    for (x, w) in pts {
        sum += w * family.eval(m, x)? * kinetic_action(family, n, x)?;
    }
    Ok(sum)
}

/// `<phi_m | W | phi_n>` for the analytic part `W` that a split basis moves
/// into its diagonal kinetic term (`V0/cos^2(pi x/a)` or `V0 (lambda x)^2/2`);
/// zero for the other families.
pub fn fixed_part_element_oracle(family: &BasisFamily, n: usize, m: usize) -> Result<f64> {
    let pts = match family {
        BasisFamily::GegenbauerBox { a, nu, .. } => gegenbauer_singular_nodes(*a, *nu, LEGENDRE_NODES)?,
        BasisFamily::HermiteLine { .. } => measure_nodes(family, INFINITE_NODES, 0.0)?,
        _ => return Ok(0.0),
    };
    let mut sum = 0.0;
    for (x, w) in pts {
        sum += w * family.eval(m, x)? * family.fixed_potential_part(x)? * family.eval(n, x)?;
    }
    Ok(sum)
}

/// Nodes for integrands `(1-y^2)^{nu-3/2} poly(y)`.
fn gegenbauer_singular_nodes(a: f64, nu: f64, nodes: usize) -> Result<Vec<(f64, f64)>> {
    use std::f64::consts::PI;
    let lambda = nu - 1.5;
    if !(lambda > -1.0) {
        return Err(Error::Domain(format!(
            "kinetic oracle needs nu > 1/2 for the 1/(1-y^2) term, got {nu}"
        )));
    }
    let r = QuadratureRule::gauss_gegenbauer(nodes, lambda)?;
    Ok(r.nodes
        .iter()
        .zip(&r.weights)
        .map(|(&y, &w)| (a / PI * y.asin(), w / (1.0 - y * y).powf(nu - 1.0)))
        .collect())
}
