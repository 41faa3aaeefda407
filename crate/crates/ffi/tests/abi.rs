use std::ffi::CStr;
use std::ptr;

use meixner_qm_ffi::*;

fn sine() -> *mut MqmSystem {
    let mut sys = ptr::null_mut();
    let st = unsafe { mqm_system_new_sine_box(1.0, 1.2, 0.7, 0.0, &mut sys) };
    assert_eq!(st, MqmStatus::Ok);
    assert!(!sys.is_null());
    sys
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mqm_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn spectrum_and_hamiltonian_agree() {
    let sys = sine();
    let n = 12;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    unsafe {
        assert_eq!(mqm_hamiltonian(sys, n, diag.as_mut_ptr(), off.as_mut_ptr()), MqmStatus::Ok);
        let mut c = 0.0;
        assert_eq!(mqm_energy_scale(sys, &mut c), MqmStatus::Ok);
        assert!((c - std::f64::consts::PI.powi(2)).abs() < 1e-14);
        // diagonal of c*Sigma is c cosh(theta) (n + mu)
        for (i, d) in diag.iter().enumerate() {
            let want = c * 0.7f64.cosh() * (i as f64 + 1.2);
            assert!((d - want).abs() < 1e-12 * want, "{i}: {d} vs {want}");
        }
        let mut e = 0.0;
        assert_eq!(mqm_energy(sys, 3, &mut e), MqmStatus::Ok);
        assert!((e - c * 0.7f64.sinh() * 4.2).abs() < 1e-12 * e);
        mqm_system_free(sys);
    }
}

#[test]
fn explicit_scale_is_used() {
    let mut sys = ptr::null_mut();
    unsafe {
        assert_eq!(mqm_system_new_hermite_line(1.0, 1.5, 0.5, 2.5, &mut sys), MqmStatus::Ok);
        let mut c = 0.0;
        mqm_energy_scale(sys, &mut c);
        assert_eq!(c, 2.5);
        mqm_system_free(sys);
    }
}

#[test]
fn bad_parameters_map_to_codes() {
    let mut sys = ptr::null_mut();
    let st = unsafe { mqm_system_new_sine_box(1.0, 1.2, -1.0, 0.0, &mut sys) };
    assert_ne!(st, MqmStatus::Ok);
    assert!(sys.is_null());
    assert!(!last_error().is_empty());

    let st = unsafe { mqm_system_new_sine_box(-1.0, 1.2, 0.7, 0.0, &mut sys) };
    assert_ne!(st, MqmStatus::Ok);

    let sys = sine();
    let mut d = [0.0];
    let mut o = [0.0];
    let st = unsafe { mqm_hamiltonian(sys, 0, d.as_mut_ptr(), o.as_mut_ptr()) };
    assert_eq!(st, MqmStatus::Size);
    unsafe { mqm_system_free(sys) };
}

#[test]
fn null_handles() {
    let mut e = 0.0;
    assert_eq!(unsafe { mqm_energy(ptr::null(), 0, &mut e) }, MqmStatus::NullPointer);
    assert_eq!(last_error(), "system is null");
    unsafe { mqm_system_free(ptr::null_mut()) };
}

#[test]
fn meixner_and_weight() {
    let (mut v, mut err, mut w) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(mqm_meixner(1.2, 0.7, 0, 5, &mut v, &mut err), MqmStatus::Ok);
        assert!((v - 1.0).abs() < 1e-15);
        assert_eq!(mqm_meixner(1.2, 0.7, 3, 5, &mut v, ptr::null_mut()), MqmStatus::Ok);
        // rho(0) = (1 - e^{-2 theta})^{2 mu}
        assert_eq!(mqm_weight(1.2, 0.7, 0, &mut w), MqmStatus::Ok);
        let want = (1.0 - (-1.4f64).exp()).powf(2.4);
        assert!((w - want).abs() < 1e-15);
    }
}

#[test]
fn reconstruction_and_states() {
    let sys = sine();
    let xs: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let mut vals = vec![0.0; xs.len()];
    let mut valid = vec![0u8; xs.len()];
    let mut psi = vec![0.0; xs.len()];
    let mut kin = vec![0.0; 16];
    unsafe {
        let st = mqm_reconstruct_potential(sys, 20, -1, xs.as_ptr(), xs.len(), vals.as_mut_ptr(), valid.as_mut_ptr());
        assert_eq!(st, MqmStatus::Ok, "{}", last_error());
        assert!(valid.iter().all(|&v| v == 1));
        assert!(vals.iter().all(|v| v.is_finite()));
        // a fixed column gives the same matrix-level answer up to truncation
        let mut col0 = vec![0.0; xs.len()];
        let st = mqm_reconstruct_potential(sys, 20, 0, xs.as_ptr(), xs.len(), col0.as_mut_ptr(), valid.as_mut_ptr());
        assert_eq!(st, MqmStatus::Ok);
        assert!((col0[4] - vals[4]).abs() < 1e-2 * vals[4].abs().max(1.0), "{} vs {}", col0[4], vals[4]);

        let st = mqm_state_eval(sys, 0, 20, xs.as_ptr(), xs.len(), psi.as_mut_ptr());
        assert_eq!(st, MqmStatus::Ok, "{}", last_error());
        assert!(psi.iter().all(|&p| p > 0.0));

        assert_eq!(mqm_kinetic_matrix(sys, 4, kin.as_mut_ptr()), MqmStatus::Ok);
        // sine box: T_nn = (pi (n+1))^2 / 2
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((kin[0] - pi2 / 2.0).abs() < 1e-10);
        assert!((kin[5] - 4.0 * pi2 / 2.0).abs() < 1e-10);
        assert!(kin[1].abs() < 1e-10);

        let mut b = 0.0;
        assert_eq!(mqm_basis_eval(sys, 0, 0.5, &mut b), MqmStatus::Ok);
        assert!((b - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-14);

        let st = mqm_state_eval(sys, 11, 20, xs.as_ptr(), xs.len(), psi.as_mut_ptr());
        assert_ne!(st, MqmStatus::Ok);
        mqm_system_free(sys);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/meixner_qm.h")).unwrap();
    for f in [
        "mqm_last_error",
        "mqm_system_new_sine_box",
        "mqm_system_new_gegenbauer_box",
        "mqm_system_new_hermite_line",
        "mqm_system_new_laguerre_radial",
        "mqm_system_free",
        "mqm_energy_scale",
        "mqm_energy",
        "mqm_meixner",
        "mqm_weight",
        "mqm_hamiltonian",
        "mqm_kinetic_matrix",
        "mqm_basis_eval",
        "mqm_reconstruct_potential",
        "mqm_state_eval",
        "mqm_version",
        "MQM_STATUS_ACCURACY",
        "typedef struct MqmSystem MqmSystem",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
}

#[test]
fn c_program_links_against_static_lib() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libmeixner_qm_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg(format!("{dir}/tests/c/smoke.c"))
        .arg(format!("-I{dir}/include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
