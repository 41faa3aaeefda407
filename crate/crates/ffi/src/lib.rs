//! C ABI over `meixner_qm`.
//!
//! Every fallible function returns an [`MqmStatus`]; on failure a message is
//! kept per thread and can be read with [`mqm_last_error`]. Systems are
//! opaque handles created by the `mqm_system_new_*` constructors and released
//! with [`mqm_system_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use meixner_qm::bases::BasisFamily;
use meixner_qm::hamiltonian::{self, EnergyScale};
use meixner_qm::meixner::{self, MeixnerParams, PrecisionGuard};
use meixner_qm::reconstruct::{self, Column};
use meixner_qm::scenario::CRule;
use meixner_qm::{states, verify, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Size = 4,
    Accuracy = 5,
    Singularity = 6,
    Internal = 7,
}

impl From<&Error> for MqmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => MqmStatus::Domain,
            Error::Size(_) | Error::DimensionMismatch { .. } | Error::OutOfRange { .. } => MqmStatus::Size,
            Error::Accuracy(_) => MqmStatus::Accuracy,
            Error::Singularity(_) => MqmStatus::Singularity,
            Error::Io(_) => MqmStatus::Internal,
            _ => MqmStatus::InvalidArgument,
        }
    }
}

/// A basis family together with Meixner parameters and energy scale.
pub struct MqmSystem {
    basis: BasisFamily,
    params: MeixnerParams,
    scale: EnergyScale,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guarded<F: FnOnce() -> Result<(), MqmStatus>>(f: F) -> MqmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MqmStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            MqmStatus::Internal
        }
    }
}

fn fail(e: Error) -> MqmStatus {
    set_error(&e.to_string());
    MqmStatus::from(&e)
}

fn null(what: &str) -> MqmStatus {
    set_error(&format!("{what} is null"));
    MqmStatus::NullPointer
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn mqm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

fn new_system(
    basis: Result<BasisFamily, Error>,
    mu: f64,
    theta: f64,
    c: f64,
    out: *mut *mut MqmSystem,
) -> MqmStatus {
    if out.is_null() {
        return null("out");
    }
    guarded(|| {
        let basis = basis.map_err(fail)?;
        let params = MeixnerParams::new(mu, theta).map_err(fail)?;
        let scale = if c == 0.0 {
            let rule = match basis {
                BasisFamily::SineBox { .. } | BasisFamily::GegenbauerBox { .. } => CRule::PiOverASquared,
                BasisFamily::HermiteLine { .. } => CRule::V0,
                BasisFamily::LaguerreRadial { .. } => CRule::LambdaSquared,
            };
            rule.resolve(&basis)
        } else {
            EnergyScale::new(c)
        }
        .map_err(fail)?;
        let sys = Box::new(MqmSystem { basis, params, scale });
        // SAFETY: `out` was checked non-null; the caller provides writable storage.
        unsafe { *out = Box::into_raw(sys) };
        Ok(())
    })
}

/// Sine box on `[0, a]`. `c = 0` selects `c = (pi/a)^2`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn mqm_system_new_sine_box(
    a: f64,
    mu: f64,
    theta: f64,
    c: f64,
    out: *mut *mut MqmSystem,
) -> MqmStatus {
    new_system(BasisFamily::sine_box(a), mu, theta, c, out)
}

/// Gegenbauer box on `[-a/2, a/2]` with the `V0/cos^2(pi x/a)` part split off.
/// `c = 0` selects `c = (pi/a)^2`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn mqm_system_new_gegenbauer_box(
    a: f64,
    v0: f64,
    mu: f64,
    theta: f64,
    c: f64,
    out: *mut *mut MqmSystem,
) -> MqmStatus {
    new_system(BasisFamily::gegenbauer_box(a, v0), mu, theta, c, out)
}

/// Hermite functions of `sqrt(v0) x`. `c = 0` selects `c = v0`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn mqm_system_new_hermite_line(
    v0: f64,
    mu: f64,
    theta: f64,
    c: f64,
    out: *mut *mut MqmSystem,
) -> MqmStatus {
    new_system(BasisFamily::hermite_line(v0), mu, theta, c, out)
}

/// Radial Laguerre basis with angular momentum `ell`. `c = 0` selects
/// `c = lambda^2`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn mqm_system_new_laguerre_radial(
    lambda: f64,
    ell: u32,
    mu: f64,
    theta: f64,
    c: f64,
    out: *mut *mut MqmSystem,
) -> MqmStatus {
    new_system(BasisFamily::laguerre_radial(lambda, ell), mu, theta, c, out)
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `sys` must be null or a handle from an `mqm_system_new_*` call that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn mqm_system_free(sys: *mut MqmSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

unsafe fn system<'a>(sys: *const MqmSystem) -> Result<&'a MqmSystem, MqmStatus> {
    sys.as_ref().ok_or_else(|| null("system"))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], MqmStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

/// Energy scale `c` of the system.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mqm_energy_scale(sys: *const MqmSystem, out: *mut f64) -> MqmStatus {
    guarded(|| {
        let s = system(sys)?;
        out_slice(out, 1, "out")?[0] = s.scale.value();
        Ok(())
    })
}

/// `E_k = c sinh(theta) (k + mu)`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mqm_energy(sys: *const MqmSystem, k: usize, out: *mut f64) -> MqmStatus {
    guarded(|| {
        let s = system(sys)?;
        out_slice(out, 1, "out")?[0] = hamiltonian::energy(k, &s.params, s.scale);
        Ok(())
    })
}

/// Orthonormal Meixner polynomial `M_n(k)` and its absolute error estimate.
/// `est_error` may be null.
///
/// # Safety
/// `value` must be writable; `est_error` null or writable.
#[no_mangle]
pub unsafe extern "C" fn mqm_meixner(
    mu: f64,
    theta: f64,
    n: usize,
    k: usize,
    value: *mut f64,
    est_error: *mut f64,
) -> MqmStatus {
    guarded(|| {
        let p = MeixnerParams::new(mu, theta).map_err(fail)?;
        let r = meixner::meixner(n, k, &p).map_err(fail)?;
        out_slice(value, 1, "value")?[0] = r.value;
        if !est_error.is_null() {
            *est_error = r.est_error;
        }
        Ok(())
    })
}

/// Discrete weight `rho(k)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqm_weight(mu: f64, theta: f64, k: usize, out: *mut f64) -> MqmStatus {
    guarded(|| {
        let p = MeixnerParams::new(mu, theta).map_err(fail)?;
        out_slice(out, 1, "out")?[0] = meixner::weight(k, &p);
        Ok(())
    })
}

/// Fills the `n x n` tridiagonal Hamiltonian: `diag` gets `n` values, `off`
/// gets `n - 1`.
///
/// # Safety
/// `diag` and `off` must hold `n` and `n - 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mqm_hamiltonian(
    sys: *const MqmSystem,
    n: usize,
    diag: *mut f64,
    off: *mut f64,
) -> MqmStatus {
    guarded(|| {
        let s = system(sys)?;
        if n == 0 {
            set_error("n must be positive");
            return Err(MqmStatus::Size);
        }
        let h = hamiltonian::hamiltonian_matrix(n, &s.params, s.scale).map_err(fail)?;
        out_slice(diag, n, "diag")?.copy_from_slice(h.diag());
        out_slice(off, n - 1, "off")?.copy_from_slice(h.off());
        Ok(())
    })
}

/// Fills the `n x n` kinetic matrix in row-major order (the diagonal `T~`
/// for the Gegenbauer and Hermite systems).
///
/// # Safety
/// `out` must hold `n * n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mqm_kinetic_matrix(sys: *const MqmSystem, n: usize, out: *mut f64) -> MqmStatus {
    guarded(|| {
        let s = system(sys)?;
        let t = s.basis.kinetic_matrix(n).map_err(fail)?;
        let dst = out_slice(out, n * n, "out")?;
        for (d, v) in dst.iter_mut().zip(t.iter()) {
            *d = *v;
        }
        Ok(())
    })
}

/// Basis function `phi_n(x)`.
///
/// # Safety
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mqm_basis_eval(sys: *const MqmSystem, n: usize, x: f64, out: *mut f64) -> MqmStatus {
    guarded(|| {
        let s = system(sys)?;
        out_slice(out, 1, "out")?[0] = s.basis.eval(n, x).map_err(fail)?;
        Ok(())
    })
}

/// Potential reconstructed from `terms` basis functions at `len` strictly
/// increasing interior points. `column < 0` selects the per-point automatic
/// column. Split-off analytic parts are restored; the orbital term is not
/// included. Points whose denominator is too small get `valid[i] = 0` and a
/// NaN value.
///
/// # Safety
/// `xs` must hold `len` readable doubles, `vals` and `valid` `len` writable
/// elements.
#[no_mangle]
pub unsafe extern "C" fn mqm_reconstruct_potential(
    sys: *const MqmSystem,
    terms: usize,
    column: i64,
    xs: *const f64,
    len: usize,
    vals: *mut f64,
    valid: *mut u8,
) -> MqmStatus {
    guarded(|| {
        let s = system(sys)?;
        if xs.is_null() {
            return Err(null("xs"));
        }
        if valid.is_null() {
            return Err(null("valid"));
        }
        let grid = std::slice::from_raw_parts(xs, len);
        let column = if column < 0 {
            Column::Auto
        } else {
            Column::Index(column as usize)
        };
        let v = verify::scenario_potential(&s.basis, &s.params, s.scale, terms).map_err(fail)?;
        let sf = reconstruct::reconstruct_total(&v, grid, column).map_err(fail)?;
        out_slice(vals, len, "vals")?.copy_from_slice(&sf.vals);
        let flags = std::slice::from_raw_parts_mut(valid, len);
        for (f, ok) in flags.iter_mut().zip(&sf.valid) {
            *f = u8::from(*ok);
        }
        Ok(())
    })
}

/// Bound state `psi_k` from `terms` Meixner coefficients at `len` points.
///
/// # Safety
/// `xs` must hold `len` readable doubles and `out` `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mqm_state_eval(
    sys: *const MqmSystem,
    k: usize,
    terms: usize,
    xs: *const f64,
    len: usize,
    out: *mut f64,
) -> MqmStatus {
    guarded(|| {
        let s = system(sys)?;
        if xs.is_null() {
            return Err(null("xs"));
        }
        let st = states::build_state(k, &s.params, s.scale, &s.basis, terms, PrecisionGuard::Strict)
            .map_err(fail)?;
        let dst = out_slice(out, len, "out")?;
        for (d, &x) in dst.iter_mut().zip(std::slice::from_raw_parts(xs, len)) {
            *d = st.value(x).map_err(fail)?;
        }
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mqm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn null_out_is_reported() {
        let st = unsafe { mqm_system_new_sine_box(1.0, 1.2, 0.7, 0.0, ptr::null_mut()) };
        assert_eq!(st, MqmStatus::NullPointer);
        let msg = unsafe { CStr::from_ptr(mqm_last_error()) };
        assert!(msg.to_str().unwrap().contains("null"));
    }

    #[test]
    fn status_mapping() {
        assert_eq!(MqmStatus::from(&Error::Accuracy("x".into())), MqmStatus::Accuracy);
        assert_eq!(MqmStatus::from(&Error::Singularity(0.0)), MqmStatus::Singularity);
        assert_eq!(MqmStatus::from(&Error::InvalidParameter("x".into())), MqmStatus::InvalidArgument);
    }
}
