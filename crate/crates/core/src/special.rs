//! Log-gamma based helpers.

use crate::error::{Error, Result};

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln (a)_n` for the rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn log_pochhammer(a: f64, n: usize) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("log_pochhammer needs a > 0, got {a}")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    Ok(ln_gamma(a + n as f64) - ln_gamma(a))
}

/// `(a)_n / n!` as a running product of ratios; stays O(n^(a-1)) so it
/// neither overflows nor underflows for the index range used here.
pub(crate) fn pochhammer_over_factorial(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64) / (j as f64 + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_zero_log() {
        assert_eq!(log_pochhammer(2.4, 0).unwrap(), 0.0);
    }

    #[test]
    fn unit_base_is_factorial() {
        let v = log_pochhammer(1.0, 5).unwrap();
        assert!((v - 120f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn matches_direct_product() {
        let direct = (2.4f64 * 3.4 * 4.4).ln();
        assert!((log_pochhammer(2.4, 3).unwrap() - direct).abs() < 1e-14);
        for n in 0..40 {
            let prod: f64 = (0..n).map(|j| (0.7 + j as f64).ln()).sum();
            assert!((log_pochhammer(0.7, n).unwrap() - prod).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_nonpositive_base() {
        assert!(matches!(log_pochhammer(0.0, 3), Err(Error::Domain(_))));
        assert!(matches!(log_pochhammer(-1.5, 3), Err(Error::Domain(_))));
        assert!(log_pochhammer(f64::NAN, 3).is_err());
    }

    #[test]
    fn ratio_product_agrees_with_log_gamma() {
        for n in 0..60 {
            let lhs = pochhammer_over_factorial(2.4, n).ln();
            let rhs = log_pochhammer(2.4, n).unwrap() - ln_gamma(n as f64 + 1.0);
            assert!((lhs - rhs).abs() < 1e-12, "n = {n}");
        }
    }
}
