use std::ffi::CStr;
use std::ptr;

use fcseries_ffi::*;

const LN_2: f64 = std::f64::consts::LN_2;

fn evaluator(route: FcsRoute, tol: f64) -> *mut FcsEvaluator {
    let mut ev = ptr::null_mut();
    let st = unsafe { fcs_evaluator_new(route, tol, &mut ev) };
    assert_eq!(st, FcsStatus::Ok);
    assert!(!ev.is_null());
    ev
}

fn blank() -> FcsEvalResult {
    FcsEvalResult {
        value: f64::NAN,
        error_bound: f64::NAN,
        route: FcsRoute::Auto,
        work: 0,
        rigorous: false,
    }
}

fn last_error() -> String {
    let p = fcs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn eval_anchor_values() {
    let ev = evaluator(FcsRoute::Auto, 1e-12);
    let mut out = blank();
    assert_eq!(unsafe { fcs_eval_x(ev, 1.0, 1.0, &mut out) }, FcsStatus::Ok);
    assert!((out.value - (LN_2 - 0.5)).abs() <= 1e-12);
    assert_eq!(out.route, FcsRoute::ClosedForm);

    assert_eq!(
        unsafe { fcs_eval_phi(ev, std::f64::consts::FRAC_PI_2, 1.0, &mut out) },
        FcsStatus::Ok
    );
    assert!((out.value - 0.153_426_409_720_027_35).abs() <= 1e-12);
    unsafe { fcs_evaluator_free(ev) };
}

#[test]
fn routes_agree_through_the_abi() {
    let mut values = Vec::new();
    for route in [FcsRoute::Series, FcsRoute::Quadrature, FcsRoute::ClosedForm] {
        let ev = evaluator(route, 1e-12);
        let mut out = blank();
        assert_eq!(unsafe { fcs_eval_x(ev, 0.3, 0.7, &mut out) }, FcsStatus::Ok);
        assert_eq!(out.route, route);
        values.push(out);
        unsafe { fcs_evaluator_free(ev) };
    }
    for a in &values {
        for b in &values {
            assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound + 1e-12);
        }
    }
    assert!(values[0].rigorous && values[1].rigorous && !values[2].rigorous);
}

#[test]
fn derivative_and_margin() {
    let ev = evaluator(FcsRoute::Auto, 1e-12);
    let mut out = blank();
    assert_eq!(unsafe { fcs_eval_dfdx(ev, 0.0, 1.0, &mut out) }, FcsStatus::Ok);
    assert!((out.value - (std::f64::consts::PI - 3.0) / 2.0).abs() <= 1e-12);
    assert_eq!(out.route, FcsRoute::Quadrature);
    unsafe { fcs_evaluator_free(ev) };

    let mut m = 0.0;
    assert_eq!(unsafe { fcs_margin(std::f64::consts::FRAC_PI_2, 1.0, &mut m) }, FcsStatus::Ok);
    assert!((m - (1.5 * LN_2 - 1.0)).abs() <= 1e-14);
}

#[test]
fn error_statuses_and_messages() {
    let ev = evaluator(FcsRoute::Series, 1e-12);
    let mut out = blank();
    assert_eq!(unsafe { fcs_eval_x(ev, -1.0, 0.5, &mut out) }, FcsStatus::Domain);
    assert!(last_error().contains("(-1, 1]"));
    assert_eq!(unsafe { fcs_eval_x(ev, 0.5, 1.0, &mut out) }, FcsStatus::UnsupportedParameters);
    assert_eq!(unsafe { fcs_eval_x(ptr::null(), 0.5, 0.5, &mut out) }, FcsStatus::NullPointer);
    assert_eq!(unsafe { fcs_eval_x(ev, 0.5, 0.5, ptr::null_mut()) }, FcsStatus::NullPointer);
    unsafe { fcs_evaluator_free(ev) };

    let ev = evaluator(FcsRoute::Series, 1e-15);
    assert_eq!(
        unsafe { fcs_eval_x(ev, 0.5, 1.0 - 1e-8, &mut out) },
        FcsStatus::ToleranceUnreachable
    );
    unsafe { fcs_evaluator_free(ev) };

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { fcs_evaluator_new(FcsRoute::Auto, 0.0, &mut bad) }, FcsStatus::Domain);
    assert!(bad.is_null());
    unsafe { fcs_evaluator_free(ptr::null_mut()) };
}

#[test]
fn default_inequality_scan() {
    let mut rep = ptr::null_mut();
    let st = unsafe { fcs_scan(FcsScanKind::Inequality, ptr::null(), 1e-10, &mut rep) };
    assert_eq!(st, FcsStatus::Ok);
    unsafe {
        assert!(fcs_report_passed(rep));
        assert_eq!(fcs_report_points_checked(rep), 10_000);
        assert_eq!(fcs_report_violation_count(rep), 0);
        assert!(fcs_report_min_margin(rep) > 0.0);
        let (mut var, mut r) = (0.0, 0.0);
        assert_eq!(fcs_report_worst_point(rep, &mut var, &mut r), FcsStatus::Ok);
        assert_eq!((var, r), (1e-3, 1e-3));

        let json = fcs_report_to_json(rep, 15);
        assert!(!json.is_null());
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        fcs_string_free(json);
        for key in [
            "\"kind\"",
            "\"points_checked\"",
            "\"violations\"",
            "\"min_margin\"",
            "\"worst_point\"",
        ] {
            assert!(text.contains(key), "{key} missing from {text}");
        }
        assert!(fcs_report_to_json(rep, 0).is_null());
        fcs_report_free(rep);
    }
}

#[test]
fn custom_and_invalid_grids() {
    let mut grid = FcsGrid {
        var_min: 0.0,
        var_max: 0.0,
        var_count: 0,
        r_min: 0.0,
        r_max: 0.0,
        r_count: 0,
        inset: 0.0,
    };
    assert_eq!(unsafe { fcs_default_grid(FcsScanKind::Monotonicity, &mut grid) }, FcsStatus::Ok);
    assert_eq!((grid.var_count, grid.r_count), (40, 20));
    grid.r_count = 4;
    let mut rep = ptr::null_mut();
    assert_eq!(
        unsafe { fcs_scan(FcsScanKind::Monotonicity, &grid, 1e-10, &mut rep) },
        FcsStatus::Ok
    );
    unsafe {
        assert!(fcs_report_passed(rep));
        assert_eq!(fcs_report_points_checked(rep), 160);
        fcs_report_free(rep);
    }

    // a phi grid may not start below the inset
    let mut phi = grid;
    assert_eq!(unsafe { fcs_default_grid(FcsScanKind::Inequality, &mut phi) }, FcsStatus::Ok);
    phi.var_min = -1.0;
    let mut rep = ptr::null_mut();
    assert_eq!(
        unsafe { fcs_scan(FcsScanKind::Inequality, &phi, 1e-10, &mut rep) },
        FcsStatus::InvalidGrid
    );
    assert!(rep.is_null());
    assert_eq!(
        unsafe { fcs_scan(FcsScanKind::Identity, &grid, 1e-10, &mut rep) },
        FcsStatus::InvalidGrid
    );
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(fcs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_abi() {
    let header = include_str!("../include/fcseries.h");
    for name in [
        "fcs_evaluator_new",
        "fcs_evaluator_free",
        "fcs_eval_x",
        "fcs_eval_phi",
        "fcs_eval_dfdx",
        "fcs_margin",
        "fcs_default_grid",
        "fcs_scan",
        "fcs_report_passed",
        "fcs_report_to_json",
        "fcs_report_free",
        "fcs_string_free",
        "fcs_last_error_message",
        "typedef struct FcsEvaluator FcsEvaluator;",
        "typedef struct FcsReport FcsReport;",
        "FCS_STATUS_TOLERANCE_UNREACHABLE = 3",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
