// SPDX-License-Identifier: Apache-2.0
//! C ABI over the verification runner and exact cyclotomic arithmetic.
//!
//! Every fallible function returns an `EtnckitError` code and writes its result through an out
//! pointer. On failure a message is kept per thread and can be read with `etnckit_last_error`.
//! Handles are opaque; each has a matching `_free` function that accepts NULL.

use etnckit::algebra_core::CyclotomicNumber;
use etnckit::cli::{self, parse_spec, resolve_params, JobReport, Status, VerificationSpec};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes shared by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtnckitError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Arithmetic = 5,
    OutOfRange = 6,
    Panic = 99,
}

/// Outcome of one job, mirroring the report's status field.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtnckitStatus {
    Pass = 0,
    Fail = 1,
    SkippedBudget = 2,
    Error = 3,
}

impl From<&Status> for EtnckitStatus {
    fn from(s: &Status) -> Self {
        match s {
            Status::Pass => EtnckitStatus::Pass,
            Status::Fail => EtnckitStatus::Fail,
            Status::SkippedBudget => EtnckitStatus::SkippedBudget,
            Status::Error => EtnckitStatus::Error,
        }
    }
}

/// A parsed verification spec.
pub struct EtnckitSpec {
    spec: VerificationSpec,
}

/// The reports of a finished run, in job order.
pub struct EtnckitRun {
    reports: Vec<JobReport>,
}

/// An exact element of a cyclotomic field.
pub struct EtnckitCyclotomic {
    value: CyclotomicNumber,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(code: EtnckitError, msg: impl Into<String>) -> EtnckitError {
    set_error(msg);
    code
}

/// Runs `f`, converting panics into `Panic` so they never cross the boundary.
fn guard(f: impl FnOnce() -> EtnckitError) -> EtnckitError {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(EtnckitError::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, EtnckitError> {
    if ptr.is_null() {
        return Err(fail(EtnckitError::NullPointer, "string argument is NULL"));
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| fail(EtnckitError::InvalidUtf8, e.to_string()))
}

unsafe fn put<T>(out: *mut T, value: T) -> EtnckitError {
    if out.is_null() {
        return fail(EtnckitError::NullPointer, "output pointer is NULL");
    }
    out.write(value);
    EtnckitError::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> EtnckitError {
    match CString::new(s) {
        Ok(c) => put(out, c.into_raw()),
        Err(e) => fail(EtnckitError::InvalidInput, e.to_string()),
    }
}

unsafe fn boxed<T>(out: *mut *mut T, value: T) -> EtnckitError {
    put(out, Box::into_raw(Box::new(value)))
}

unsafe fn deref<'a, T>(ptr: *const T) -> Result<&'a T, EtnckitError> {
    ptr.as_ref().ok_or_else(|| fail(EtnckitError::NullPointer, "handle is NULL"))
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(code) => return code,
        }
    };
}

/// The message for the last failure on this thread, or NULL. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn etnckit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn etnckit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of implemented checks.
#[no_mangle]
pub extern "C" fn etnckit_check_count() -> usize {
    cli::CHECKS.len()
}

/// Name of check `index` as a static NUL-terminated string, or NULL when out of range.
#[no_mangle]
pub extern "C" fn etnckit_check_name(index: usize) -> *const c_char {
    static NAMES: std::sync::OnceLock<Vec<CString>> = std::sync::OnceLock::new();
    let names = NAMES.get_or_init(|| cli::CHECKS.iter().map(|n| CString::new(*n).unwrap()).collect());
    names.get(index).map_or(std::ptr::null(), |c| c.as_ptr())
}

/// Parses a spec (JSON, or TOML when `toml` is true) and validates every job's parameters.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_spec_parse(text: *const c_char, toml: bool, out: *mut *mut EtnckitSpec) -> EtnckitError {
    guard(|| {
        let text = try_ffi!(read_str(text));
        let spec = match parse_spec(text, toml) {
            Ok(s) => s,
            Err(e) => return fail(EtnckitError::Parse, e.to_string()),
        };
        for (i, job) in spec.jobs.iter().enumerate() {
            if let Err(e) = resolve_params(job.check, &job.params) {
                return fail(EtnckitError::InvalidInput, format!("job {i} ({}): {e}", job.check));
            }
        }
        boxed(out, EtnckitSpec { spec })
    })
}

/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_spec_job_count(spec: *const EtnckitSpec, out: *mut usize) -> EtnckitError {
    guard(|| {
        let s = try_ffi!(deref(spec));
        put(out, s.spec.jobs.len())
    })
}

/// # Safety
/// `spec` must be NULL or a handle from `etnckit_spec_parse` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn etnckit_spec_free(spec: *mut EtnckitSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Runs every job of `spec`. `budget_terms` of 0 selects the default term budget.
/// `seed_override` replaces every job seed when `use_seed_override` is true.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_run(
    spec: *const EtnckitSpec,
    budget_terms: u64,
    use_seed_override: bool,
    seed_override: u64,
    out: *mut *mut EtnckitRun,
) -> EtnckitError {
    guard(|| {
        let s = try_ffi!(deref(spec));
        let terms = if budget_terms == 0 { cli::DEFAULT_BUDGET_TERMS } else { budget_terms };
        let reports = cli::run_spec(&s.spec, use_seed_override.then_some(seed_override), terms);
        boxed(out, EtnckitRun { reports })
    })
}

/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_run_len(run: *const EtnckitRun, out: *mut usize) -> EtnckitError {
    guard(|| {
        let r = try_ffi!(deref(run));
        put(out, r.reports.len())
    })
}

unsafe fn report_at<'a>(run: *const EtnckitRun, index: usize) -> Result<&'a JobReport, EtnckitError> {
    let r = deref(run)?;
    r.reports
        .get(index)
        .ok_or_else(|| fail(EtnckitError::OutOfRange, format!("report {index} of {}", r.reports.len())))
}

/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_run_status(run: *const EtnckitRun, index: usize, out: *mut EtnckitStatus) -> EtnckitError {
    guard(|| {
        let rep = try_ffi!(report_at(run, index));
        put(out, EtnckitStatus::from(&rep.status))
    })
}

/// The JSON report of job `index`, byte-identical to the CLI's report file.
/// Free the result with `etnckit_string_free`.
///
/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_run_report_json(run: *const EtnckitRun, index: usize, out: *mut *mut c_char) -> EtnckitError {
    guard(|| {
        let rep = try_ffi!(report_at(run, index));
        put_string(out, cli::report_json(rep))
    })
}

/// The CLI exit code for this run: 0 on success, 1 when a job failed (or was skipped under `strict`).
///
/// # Safety
/// `run` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_run_exit_code(run: *const EtnckitRun, strict: bool, out: *mut i32) -> EtnckitError {
    guard(|| {
        let r = try_ffi!(deref(run));
        put(out, cli::exit_code(&r.reports, strict))
    })
}

/// # Safety
/// `run` must be NULL or a handle from `etnckit_run` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn etnckit_run_free(run: *mut EtnckitRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Reads `{"order": N, "coeffs": ["p/q", ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_from_json(json: *const c_char, out: *mut *mut EtnckitCyclotomic) -> EtnckitError {
    guard(|| {
        let text = try_ffi!(read_str(json));
        match serde_json::from_str::<CyclotomicNumber>(text) {
            Ok(value) => boxed(out, EtnckitCyclotomic { value }),
            Err(e) => fail(EtnckitError::Parse, e.to_string()),
        }
    })
}

/// zeta_n^k.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_root_of_unity(n: u64, k: i64, out: *mut *mut EtnckitCyclotomic) -> EtnckitError {
    guard(|| {
        if n == 0 {
            return fail(EtnckitError::InvalidInput, "order must be positive");
        }
        boxed(out, EtnckitCyclotomic { value: CyclotomicNumber::root_of_unity(n, k) })
    })
}

unsafe fn binary(
    a: *const EtnckitCyclotomic,
    b: *const EtnckitCyclotomic,
    out: *mut *mut EtnckitCyclotomic,
    op: impl FnOnce(&CyclotomicNumber, &CyclotomicNumber) -> etnckit::Result<CyclotomicNumber>,
) -> EtnckitError {
    guard(|| {
        let (x, y) = (try_ffi!(deref(a)), try_ffi!(deref(b)));
        match op(&x.value, &y.value) {
            Ok(value) => boxed(out, EtnckitCyclotomic { value }),
            Err(e) => fail(EtnckitError::Arithmetic, e.to_string()),
        }
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_add(
    a: *const EtnckitCyclotomic,
    b: *const EtnckitCyclotomic,
    out: *mut *mut EtnckitCyclotomic,
) -> EtnckitError {
    binary(a, b, out, |x, y| Ok(x.add(y)))
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_mul(
    a: *const EtnckitCyclotomic,
    b: *const EtnckitCyclotomic,
    out: *mut *mut EtnckitCyclotomic,
) -> EtnckitError {
    binary(a, b, out, |x, y| Ok(x.mul(y)))
}

/// Fails with `Arithmetic` when `b` is zero.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_div(
    a: *const EtnckitCyclotomic,
    b: *const EtnckitCyclotomic,
    out: *mut *mut EtnckitCyclotomic,
) -> EtnckitError {
    binary(a, b, out, |x, y| x.div(y))
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_equal(a: *const EtnckitCyclotomic, b: *const EtnckitCyclotomic, out: *mut bool) -> EtnckitError {
    guard(|| {
        let (x, y) = (try_ffi!(deref(a)), try_ffi!(deref(b)));
        put(out, x.value == y.value)
    })
}

/// Canonical JSON form. Free the result with `etnckit_string_free`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_to_json(a: *const EtnckitCyclotomic, out: *mut *mut c_char) -> EtnckitError {
    guard(|| {
        let x = try_ffi!(deref(a));
        put_string(out, serde_json::to_string(&x.value).expect("cyclotomic numbers serialize"))
    })
}

/// Image under the embedding zeta_n -> exp(2 pi i / n).
///
/// # Safety
/// `a` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_to_complex(a: *const EtnckitCyclotomic, re: *mut f64, im: *mut f64) -> EtnckitError {
    guard(|| {
        let x = try_ffi!(deref(a));
        if re.is_null() || im.is_null() {
            return fail(EtnckitError::NullPointer, "output pointer is NULL");
        }
        let z = x.value.to_complex();
        re.write(z.re);
        put(im, z.im)
    })
}

/// # Safety
/// `a` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn etnckit_cyclotomic_free(a: *mut EtnckitCyclotomic) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}
