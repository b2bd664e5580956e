use std::ffi::CStr;
use std::ptr;

use ptrig_ffi::*;

fn last_error() -> String {
    let msg = ptrig_last_error();
    assert!(!msg.is_null());
    unsafe { CStr::from_ptr(msg) }
        .to_string_lossy()
        .into_owned()
}

fn exponent(p: f64) -> *mut PtrigExponent {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ptrig_exponent_new(p, &mut h) }, PtrigStatus::Ok);
    h
}

#[test]
fn classical_values() {
    let h = exponent(2.0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(ptrig_sin_p(h, 1.0, &mut v), PtrigStatus::Ok);
        assert!((v - 1f64.sin()).abs() < 1e-14);
        assert_eq!(ptrig_incomplete_f(h, 0.5, &mut v), PtrigStatus::Ok);
        assert!((v - std::f64::consts::FRAC_PI_6).abs() < 1e-14);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(ptrig_exp_p(h, 0.3, &mut re, &mut im), PtrigStatus::Ok);
        assert!((re - 0.3f64.cos()).abs() < 1e-14 && (im - 0.3f64.sin()).abs() < 1e-14);
        assert_eq!(ptrig_exponent_pi_p(h, &mut v), PtrigStatus::Ok);
        assert!((v - std::f64::consts::PI).abs() < 1e-14);
        ptrig_exponent_free(h);
    }
}

#[test]
fn domain_error_sets_message() {
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { ptrig_exponent_new(0.5, &mut h) },
        PtrigStatus::Domain
    );
    assert!(h.is_null());
    assert!(last_error().contains("0.5"));
    let mut v = 0.0;
    assert_eq!(unsafe { ptrig_zeta(1.0, &mut v) }, PtrigStatus::Domain);
}

#[test]
fn null_pointers_are_rejected() {
    assert_eq!(
        unsafe { ptrig_exponent_new(2.0, ptr::null_mut()) },
        PtrigStatus::NullPointer
    );
    let mut v = 0.0;
    assert_eq!(
        unsafe { ptrig_sin_p(ptr::null(), 1.0, &mut v) },
        PtrigStatus::NullPointer
    );
    assert!(last_error().contains("handle"));
    unsafe {
        ptrig_exponent_free(ptr::null_mut());
        ptrig_coeff_table_free(ptr::null_mut());
    }
}

#[test]
fn coefficient_table_round_trip() {
    let h = exponent(2.0);
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(
            ptrig_coeff_table_new(h, PtrigCoeffKind::CosineB, 9, &mut t),
            PtrigStatus::Ok
        );
        let mut j_max = 0;
        assert_eq!(ptrig_coeff_table_j_max(t, &mut j_max), PtrigStatus::Ok);
        assert_eq!(j_max, 9);
        let mut c = PtrigCoeff {
            value: 0.0,
            err_est: 0.0,
        };
        assert_eq!(ptrig_coeff_table_get(t, 1, &mut c), PtrigStatus::Ok);
        assert!((c.value - 1.0).abs() < 1e-15);
        assert_eq!(ptrig_coeff_table_get(t, 10, &mut c), PtrigStatus::Domain);
        let mut r = std::mem::zeroed::<PtrigCriterion>();
        assert_eq!(ptrig_criterion_from_table(t, &mut r), PtrigStatus::Ok);
        assert!(r.holds && (r.margin - 1.0).abs() < 1e-12);
        ptrig_coeff_table_free(t);
        ptrig_exponent_free(h);
    }
}

#[test]
fn thresholds_and_criterion() {
    let mut r = unsafe { std::mem::zeroed::<PtrigRoot>() };
    assert_eq!(unsafe { ptrig_solve_p0(&mut r) }, PtrigStatus::Ok);
    assert!((r.root - 1.458801).abs() < 5e-6);
    assert!(r.bracket_lo <= r.root && r.root <= r.bracket_hi);
    let mut c = unsafe { std::mem::zeroed::<PtrigCriterion>() };
    assert_eq!(
        unsafe { ptrig_basis_criterion(1.5, 99, &mut c) },
        PtrigStatus::Ok
    );
    assert!(c.holds && c.cutoff == 99);
    assert_eq!(
        unsafe { ptrig_basis_criterion(1.5, 98, &mut c) },
        PtrigStatus::Domain
    );
}

#[test]
fn custom_config() {
    let mut cfg = ptrig_eval_config_default();
    cfg.rel_tol = 1e-10;
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { ptrig_exponent_new_with_config(3.0, &cfg, &mut h) },
        PtrigStatus::Ok
    );
    let mut v = 0.0;
    assert_eq!(unsafe { ptrig_cos_p(h, 0.0, &mut v) }, PtrigStatus::Ok);
    assert_eq!(v, 1.0);
    unsafe { ptrig_exponent_free(h) };
    cfg.rel_tol = -1.0;
    assert_eq!(
        unsafe { ptrig_exponent_new_with_config(3.0, &cfg, &mut h) },
        PtrigStatus::Domain
    );
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(ptrig_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
