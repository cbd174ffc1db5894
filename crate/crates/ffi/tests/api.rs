use std::ffi::{c_char, CStr, CString};
use std::ptr;

use matschroed_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { ms_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn family(kind: u8, nu: &[f64], n_max: usize) -> *mut MsFamily {
    let mut f = ptr::null_mut();
    let s = unsafe { ms_family_new(kind, nu.len() + 1, nu.as_ptr(), n_max, 0, &mut f) };
    assert_eq!(s, MsStatus::Ok);
    f
}

#[test]
fn family_lifecycle_and_queries() {
    let f = family(1, &[1.0], 4);
    unsafe {
        assert_eq!(ms_family_size(f), 2);
        assert_eq!(ms_family_n_max(f), 4);
        let mut d = [0.0; 2];
        assert_eq!(ms_family_norm(f, 0, d.as_mut_ptr()), MsStatus::Ok);
        // n = 0: √π·diag(γ_1, 1/γ_0) with γ_1 = 3/2
        let rp = std::f64::consts::PI.sqrt();
        assert!((d[0] - 1.5 * rp).abs() < 1e-12 && (d[1] - rp).abs() < 1e-12);

        let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
        assert_eq!(
            ms_family_matrix_element(f, 1, 0, 0, re.as_mut_ptr(), im.as_mut_ptr()),
            MsStatus::Ok
        );
        assert!((re[1] - 1.0 / 6f64.sqrt()).abs() < 1e-12 && im.iter().all(|v| v.abs() < 1e-15));

        let mut v = 0.0;
        assert_eq!(ms_family_density(f, 2, 0, 0, 0.3, &mut v), MsStatus::Ok);
        assert!(v > 0.0);

        let (mut total, mut failed) = (0, 0);
        assert_eq!(ms_family_check(f, 0.0, &mut total, &mut failed), MsStatus::Ok);
        assert!(total > 10);
        assert_eq!(failed, 0);
        assert_eq!(ms_family_check(f, 1e-30, &mut total, &mut failed), MsStatus::Ok);
        assert!(failed > 0);
        ms_family_free(f);
    }
}

#[test]
fn errors_map_to_codes() {
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(ms_family_new(3, 2, [1.0].as_ptr(), 2, 0, &mut f), MsStatus::Parameter);
        assert!(last_error().contains("kind"));
        assert_eq!(ms_family_new(1, 2, ptr::null(), 2, 0, &mut f), MsStatus::NullPointer);
        assert!(f.is_null());
        let fam = family(2, &[0.5], 2);
        let mut g = ptr::null_mut();
        assert_eq!(ms_family_phi(fam, 5, false, &mut g), MsStatus::Range);
        assert_eq!(
            ms_family_matrix_element(fam, 3, 0, 0, [0.0; 4].as_mut_ptr(), [0.0; 4].as_mut_ptr()),
            MsStatus::Parameter
        );
        let bad = CString::new("{").unwrap();
        assert_eq!(ms_gaussian_from_json(bad.as_ptr(), &mut g), MsStatus::Parse);
        assert_eq!(ms_family_size(ptr::null()), 0);
        ms_family_free(ptr::null_mut());
        ms_family_free(fam);
    }
}

#[test]
fn json_family_and_transform_round_trip() {
    let spec = CString::new(r#"{"kind":2,"N":3,"nu":[1.0,0.5]}"#).unwrap();
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(ms_family_from_json(spec.as_ptr(), 6, 0, &mut f), MsStatus::Ok);
        let mut phi = ptr::null_mut();
        assert_eq!(ms_family_phi(f, 6, true, &mut phi), MsStatus::Ok);
        assert_eq!(ms_gaussian_size(phi), 3);
        assert_eq!(ms_gaussian_degree(phi), 10);

        let (mut fwd, mut back) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(ms_gaussian_transform(phi, 2, false, &mut fwd), MsStatus::Ok);
        assert_eq!(ms_gaussian_transform(fwd, 2, true, &mut back), MsStatus::Ok);
        let mut d = 1.0;
        assert_eq!(ms_gaussian_distance(back, phi, &mut d), MsStatus::Ok);
        assert!(d < 1e-10);

        let mut text = ptr::null_mut();
        assert_eq!(ms_gaussian_to_json(phi, &mut text), MsStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(ms_gaussian_from_json(text, &mut again), MsStatus::Ok);
        assert_eq!(ms_gaussian_distance(again, phi, &mut d), MsStatus::Ok);
        assert_eq!(d, 0.0);

        let (mut re, mut im) = ([0.0; 9], [0.0; 9]);
        assert_eq!(
            ms_gaussian_eval(phi, 0.0, re.as_mut_ptr(), im.as_mut_ptr()),
            MsStatus::Ok
        );

        ms_string_free(text);
        for g in [phi, fwd, back, again] {
            ms_gaussian_free(g);
        }
        ms_family_free(f);
    }
}

#[test]
fn scalar_helpers() {
    let x: f64 = 0.7;
    let want = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    assert!((ms_wave_function(0, x) - want).abs() < 1e-15);
    let v = unsafe { CStr::from_ptr(ms_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
