use etnckit_ffi::*;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = etnckit_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn check_names() {
    let names: Vec<String> = (0..etnckit_check_count())
        .map(|i| unsafe { CStr::from_ptr(etnckit_check_name(i)) }.to_str().unwrap().to_string())
        .collect();
    assert_eq!(names.len(), 11);
    assert!(names.contains(&"pairing".to_string()));
    assert!(etnckit_check_name(names.len()).is_null());
}

#[test]
fn run_round_trip_matches_cli_report() {
    let text = cstr(r#"{"jobs": [{"check": "det_signs", "params": {"instances": 4}, "seed": 5}]}"#);
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(etnckit_spec_parse(text.as_ptr(), false, &mut spec), EtnckitError::Ok);
        let mut n = 0;
        assert_eq!(etnckit_spec_job_count(spec, &mut n), EtnckitError::Ok);
        assert_eq!(n, 1);

        let mut run = ptr::null_mut();
        assert_eq!(etnckit_run(spec, 0, true, 11, &mut run), EtnckitError::Ok);
        let mut status = EtnckitStatus::Error;
        assert_eq!(etnckit_run_status(run, 0, &mut status), EtnckitError::Ok);
        assert_eq!(status, EtnckitStatus::Pass);
        let mut code = -1;
        assert_eq!(etnckit_run_exit_code(run, true, &mut code), EtnckitError::Ok);
        assert_eq!(code, 0);

        let mut json = ptr::null_mut();
        assert_eq!(etnckit_run_report_json(run, 0, &mut json), EtnckitError::Ok);
        let body = CStr::from_ptr(json).to_str().unwrap().to_string();
        etnckit_string_free(json);

        let spec_rs = etnckit::cli::parse_spec(text.to_str().unwrap(), false).unwrap();
        let direct = etnckit::cli::run_spec(&spec_rs, Some(11), etnckit::cli::DEFAULT_BUDGET_TERMS);
        assert_eq!(body, etnckit::cli::report_json(&direct[0]));

        assert_eq!(etnckit_run_report_json(run, 3, &mut json), EtnckitError::OutOfRange);
        etnckit_run_free(run);
        etnckit_spec_free(spec);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(etnckit_spec_parse(ptr::null(), false, &mut spec), EtnckitError::NullPointer);
        let broken = cstr("{\"jobs\": [\n  {\"check\": 1}]}");
        assert_eq!(etnckit_spec_parse(broken.as_ptr(), false, &mut spec), EtnckitError::Parse);
        assert!(last_error().contains("line 2"));
        let bad_params = cstr(r#"{"jobs": [{"check": "gauss", "params": {"moduli": "x"}}]}"#);
        assert_eq!(etnckit_spec_parse(bad_params.as_ptr(), false, &mut spec), EtnckitError::InvalidInput);
        assert!(spec.is_null());
        let bytes = [0xffu8, 0];
        assert_eq!(etnckit_spec_parse(bytes.as_ptr().cast(), false, &mut spec), EtnckitError::InvalidUtf8);
        let mut n = 0;
        assert_eq!(etnckit_spec_job_count(ptr::null(), &mut n), EtnckitError::NullPointer);
        let mut z = ptr::null_mut();
        assert_eq!(etnckit_cyclotomic_root_of_unity(0, 1, &mut z), EtnckitError::InvalidInput);
        assert_eq!(etnckit_cyclotomic_root_of_unity(3, 1, ptr::null_mut()), EtnckitError::NullPointer);
    }
}

#[test]
fn cyclotomic_arithmetic() {
    unsafe {
        // 1 + zeta_3 + zeta_3^2 = 0
        let (mut a, mut b, mut c, mut s, mut t) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(etnckit_cyclotomic_root_of_unity(3, 0, &mut a), EtnckitError::Ok);
        assert_eq!(etnckit_cyclotomic_root_of_unity(3, 1, &mut b), EtnckitError::Ok);
        assert_eq!(etnckit_cyclotomic_root_of_unity(3, 2, &mut c), EtnckitError::Ok);
        assert_eq!(etnckit_cyclotomic_add(a, b, &mut s), EtnckitError::Ok);
        assert_eq!(etnckit_cyclotomic_add(s, c, &mut t), EtnckitError::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(etnckit_cyclotomic_to_json(t, &mut json), EtnckitError::Ok);
        let text = CStr::from_ptr(json).to_owned();
        etnckit_string_free(json);
        let mut back = ptr::null_mut();
        assert_eq!(etnckit_cyclotomic_from_json(text.as_ptr(), &mut back), EtnckitError::Ok);
        let mut zero = ptr::null_mut();
        let zero_json = cstr(r#"{"order": 1, "coeffs": ["0"]}"#);
        assert_eq!(etnckit_cyclotomic_from_json(zero_json.as_ptr(), &mut zero), EtnckitError::Ok);
        let mut eq = false;
        assert_eq!(etnckit_cyclotomic_equal(back, zero, &mut eq), EtnckitError::Ok);
        assert!(eq);

        let mut q = ptr::null_mut();
        assert_eq!(etnckit_cyclotomic_div(b, zero, &mut q), EtnckitError::Arithmetic);
        assert_eq!(etnckit_cyclotomic_div(a, b, &mut q), EtnckitError::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(etnckit_cyclotomic_to_complex(q, &mut re, &mut im), EtnckitError::Ok);
        assert!((re + 0.5).abs() < 1e-15 && (im + 0.75f64.sqrt()).abs() < 1e-15);

        let bad = cstr(r#"{"order": 5, "coeffs": ["1"]}"#);
        assert_eq!(etnckit_cyclotomic_from_json(bad.as_ptr(), &mut zero), EtnckitError::Parse);
        for h in [a, b, c, s, t, back, zero, q] {
            etnckit_cyclotomic_free(h);
        }
    }
}

#[test]
fn generated_header_declares_the_api() {
    let header = include_str!(concat!(env!("OUT_DIR"), "/etnckit.h"));
    for name in ["etnckit_spec_parse", "etnckit_run_report_json", "etnckit_cyclotomic_div", "typedef struct EtnckitRun EtnckitRun", "ETNCKIT_ERROR_PANIC = 99"] {
        assert!(header.contains(name), "{name}");
    }
}

/// Compiles a small C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler found; skipping");
        return;
    }
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.parent().unwrap().join("libetnckit_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("c_abi");
    let out = Command::new(&cc)
        .arg(manifest.join("tests/c_abi.c"))
        .arg("-I")
        .arg(env!("OUT_DIR"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
