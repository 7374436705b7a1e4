//! C ABI over `fermat-refute`.
//!
//! Numbers cross the boundary as NUL-terminated decimal strings, structured
//! data as JSON. Every entry point returns an [`FrStatus`]; on failure the
//! message is available from [`fr_last_error`] on the same thread. Handles
//! are opaque and must be released with their `_free` function. Strings
//! returned through `char **` out-parameters are released with
//! [`fr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fermat_refute::arith::{Natural, OddPrime};
use fermat_refute::filters::recheck::recheck_record;
use fermat_refute::filters::{
    evaluate, parse_filter_list, Candidate, CertificateRecord, Pipeline, Verdict, DEFAULT_MODULI,
    DEFAULT_PIPELINE,
};
use fermat_refute::search::{oracle_check, run_search, SearchConfig, SearchReport};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrStatus {
    FrOk = 0,
    /// A required pointer argument was null.
    FrNullPointer = 1,
    /// A string argument was not valid UTF-8.
    FrInvalidUtf8 = 2,
    /// An argument could not be parsed or is out of range.
    FrInvalidArgument = 3,
    /// The search rejected its config or failed while running.
    FrSearchFailed = 4,
    /// A certificate did not survive independent re-checking.
    FrRecheckFailed = 5,
    /// A Rust panic was caught at the boundary.
    FrPanic = 6,
}

/// A validated filter pipeline.
pub struct FrPipeline(Pipeline);

/// The outcome of evaluating one candidate.
pub struct FrVerdict {
    verdict: Verdict,
    candidate: Candidate,
}

/// A finished search.
pub struct FrReport(SearchReport);

/// Headline counters of a search report.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrCounts {
    pub total_candidates: u64,
    pub refuted: u64,
    pub survivors_to_oracle: u64,
    pub oracle_solutions_found: u64,
    pub recheck_failures: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(FrStatus, String);

fn fail<T>(status: FrStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            FrStatus::FrOk
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            FrStatus::FrPanic
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(FrStatus::FrNullPointer, format!("{name} is null"));
    }
    CStr::from_ptr(p).to_str().or_else(|_| fail(FrStatus::FrInvalidUtf8, format!("{name} is not UTF-8")))
}

/// # Safety
/// As [`str_arg`]; a null pointer means "absent".
unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn natural_arg(p: *const c_char, name: &str) -> Result<Natural, Failure> {
    str_arg(p, name)?.parse().or_else(|e| fail(FrStatus::FrInvalidArgument, format!("{name}: {e}")))
}

/// # Safety
/// `out` is null or valid for writes, with no other live reference.
unsafe fn out_ptr<'a, T>(out: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    out.as_mut().map_or_else(|| fail(FrStatus::FrNullPointer, format!("{name} is null")), Ok)
}

/// # Safety
/// As [`out_ptr`].
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let slot = out_ptr(out, "out")?;
    let s = CString::new(s).or_else(|_| fail(FrStatus::FrInvalidArgument, "output contains NUL"))?;
    *slot = s.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null after a
/// successful one. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn fr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a pipeline. `filters` is a comma-separated list of filter ids and
/// `moduli` a comma-separated list of moduli; null selects the defaults.
///
/// # Safety
/// String arguments are null or NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fr_pipeline_new(
    filters: *const c_char,
    moduli: *const c_char,
    allow_external: bool,
    out: *mut *mut FrPipeline,
) -> FrStatus {
    guard(|| {
        let invalid = |e: String| Failure(FrStatus::FrInvalidArgument, e);
        let filters = match opt_str_arg(filters, "filters")? {
            Some(list) => parse_filter_list(list).map_err(|e| invalid(e.to_string()))?,
            None => DEFAULT_PIPELINE.to_vec(),
        };
        let moduli = match opt_str_arg(moduli, "moduli")? {
            Some(list) => list
                .split(',')
                .map(str::parse::<Natural>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| invalid(e.to_string()))?,
            None => DEFAULT_MODULI.iter().copied().map(Natural::from).collect(),
        };
        let pipeline = Pipeline::new(filters, moduli, allow_external).map_err(|e| invalid(e.to_string()))?;
        *out_ptr(out, "out")? = Box::into_raw(Box::new(FrPipeline(pipeline)));
        Ok(())
    })
}

/// # Safety
/// `pipeline` is null or came from [`fr_pipeline_new`] and is not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fr_pipeline_free(pipeline: *mut FrPipeline) {
    if !pipeline.is_null() {
        drop(Box::from_raw(pipeline));
    }
}

/// Evaluates the candidate `(x, y, z, p)`; `p` must be an odd prime.
///
/// # Safety
/// `pipeline` is a live handle, the numbers are NUL-terminated decimal
/// strings and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fr_evaluate(
    pipeline: *const FrPipeline,
    x: *const c_char,
    y: *const c_char,
    z: *const c_char,
    p: *const c_char,
    out: *mut *mut FrVerdict,
) -> FrStatus {
    guard(|| {
        let Some(pipeline) = pipeline.as_ref() else {
            return fail(FrStatus::FrNullPointer, "pipeline is null");
        };
        let invalid = |e: String| Failure(FrStatus::FrInvalidArgument, e);
        let (x, y, z, p) =
            (natural_arg(x, "x")?, natural_arg(y, "y")?, natural_arg(z, "z")?, natural_arg(p, "p")?);
        let p = OddPrime::new(p).map_err(|e| invalid(e.to_string()))?;
        let candidate = Candidate::new(x, y, z, p).map_err(|e| invalid(e.to_string()))?;
        let verdict = evaluate(&candidate, &pipeline.0);
        *out_ptr(out, "out")? = Box::into_raw(Box::new(FrVerdict { verdict, candidate }));
        Ok(())
    })
}

/// True when a filter refuted the candidate. Null gives false.
///
/// # Safety
/// `verdict` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fr_verdict_is_refuted(verdict: *const FrVerdict) -> bool {
    verdict.as_ref().is_some_and(|v| v.verdict.is_refuted())
}

/// The certificate record as JSON, or `{"verdict":"inconclusive"}`.
///
/// # Safety
/// `verdict` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fr_verdict_to_json(verdict: *const FrVerdict, out: *mut *mut c_char) -> FrStatus {
    guard(|| {
        let Some(v) = verdict.as_ref() else {
            return fail(FrStatus::FrNullPointer, "verdict is null");
        };
        let json = match &v.verdict {
            Verdict::Refuted(cert) => {
                serde_json::to_string(&CertificateRecord::new(&v.candidate, cert.clone()))
                    .expect("serializes")
            }
            Verdict::Inconclusive => r#"{"verdict":"inconclusive"}"#.to_owned(),
        };
        write_string(out, json)
    })
}

/// # Safety
/// `verdict` is null or came from [`fr_evaluate`] and is not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fr_verdict_free(verdict: *mut FrVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// Exact test of `x^p + y^p = z^p` for any positive `p`.
///
/// # Safety
/// The numbers are NUL-terminated decimal strings and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fr_oracle_check(
    x: *const c_char,
    y: *const c_char,
    z: *const c_char,
    p: u32,
    out: *mut bool,
) -> FrStatus {
    guard(|| {
        let (x, y, z) = (natural_arg(x, "x")?, natural_arg(y, "y")?, natural_arg(z, "z")?);
        *out_ptr(out, "out")? = oracle_check(&x, &y, &z, p);
        Ok(())
    })
}

/// Runs a search described by a JSON config document on `workers` threads
/// (0 is treated as 1).
///
/// # Safety
/// `config_json` is NUL-terminated and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fr_search_run(
    config_json: *const c_char,
    workers: u32,
    out: *mut *mut FrReport,
) -> FrStatus {
    guard(|| {
        let json = str_arg(config_json, "config_json")?;
        let mut cfg: SearchConfig = serde_json::from_str(json)
            .map_err(|e| Failure(FrStatus::FrInvalidArgument, format!("config: {e}")))?;
        cfg.worker_count = workers.max(1) as usize;
        let report = run_search(&cfg, None).map_err(|e| Failure(FrStatus::FrSearchFailed, e.to_string()))?;
        *out_ptr(out, "out")? = Box::into_raw(Box::new(FrReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fr_report_counts(report: *const FrReport, out: *mut FrCounts) -> FrStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return fail(FrStatus::FrNullPointer, "report is null");
        };
        let c = &r.0.counts;
        *out_ptr(out, "out")? = FrCounts {
            total_candidates: c.total_candidates,
            refuted: c.total_refuted(),
            survivors_to_oracle: c.survivors_to_oracle,
            oracle_solutions_found: c.oracle_solutions_found,
            recheck_failures: c.recheck_failures,
        };
        Ok(())
    })
}

/// The report document as pretty JSON.
///
/// # Safety
/// `report` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fr_report_to_json(report: *const FrReport, out: *mut *mut c_char) -> FrStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return fail(FrStatus::FrNullPointer, "report is null");
        };
        write_string(out, r.0.to_json())
    })
}

/// # Safety
/// `report` is null or came from [`fr_search_run`] and is not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fr_report_free(report: *mut FrReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Independently re-checks one certificate record (a line of a certificate
/// stream). Returns `FR_RECHECK_FAILED` when the certificate does not hold.
///
/// # Safety
/// `record_json` is NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fr_recheck_record(record_json: *const c_char) -> FrStatus {
    guard(|| {
        let json = str_arg(record_json, "record_json")?;
        let record: CertificateRecord = serde_json::from_str(json)
            .map_err(|e| Failure(FrStatus::FrInvalidArgument, format!("record: {e}")))?;
        recheck_record(&record).map_err(|e| Failure(FrStatus::FrRecheckFailed, e.to_string()))
    })
}
