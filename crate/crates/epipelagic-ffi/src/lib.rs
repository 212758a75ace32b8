//! C interface. Strata are opaque handles built from the same JSON documents
//! the command-line tool reads; results come back as JSON strings owned by the
//! library and released with [`epi_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use epipelagic::cli::{self, InputDoc};
use epipelagic::lift::cuspidal_support;
use epipelagic::strata::{validate_stratum, EpipelagicStratum, GroupSpec};
use epipelagic::Error;

/// Status codes. `SCHEMA` and `STRATUM` match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpiStatus {
    Ok = 0,
    Failed = 1,
    Schema = 2,
    Stratum = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A validated group and stratum.
pub struct EpiStratum {
    group: GroupSpec,
    stratum: EpipelagicStratum,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EpiStatus {
    match cli::exit_code(e) {
        cli::EXIT_SCHEMA => EpiStatus::Schema,
        cli::EXIT_STRATUM => EpiStatus::Stratum,
        _ => EpiStatus::Failed,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (EpiStatus, String)>) -> EpiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EpiStatus::Ok,
        Ok(Err((st, msg))) => {
            set_error(msg);
            st
        }
        Err(_) => {
            set_error("internal panic".into());
            EpiStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (EpiStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (EpiStatus, String) {
    (EpiStatus::NullArgument, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (EpiStatus, String)> {
    if p.is_null() {
        return Err(null_err(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (EpiStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (EpiStatus, String)> {
    let c = CString::new(s).map_err(|_| (EpiStatus::Failed, "output contains nul".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Last error message on this thread, or null. Valid until the next call
/// that fails on the same thread.
#[no_mangle]
pub extern "C" fn epi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses and validates a stratum document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn epi_stratum_parse(json: *const c_char, out: *mut *mut EpiStratum) -> EpiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let text = read_str(json, "json")?;
        let (group, stratum) = InputDoc::parse(text).and_then(|d| d.resolve()).map_err(lib_err)?;
        validate_stratum(&group, &stratum).map_err(|v| lib_err(Error::Stratum(v)))?;
        *out = Box::into_raw(Box::new(EpiStratum { group, stratum }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`epi_stratum_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn epi_stratum_free(h: *mut EpiStratum) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Rank of the general linear group receiving the lift.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn epi_stratum_total_rank(h: *const EpiStratum, out: *mut usize) -> EpiStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null_err("handle"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = cuspidal_support(&h.group, &h.stratum).map_err(lib_err)?.total_rank;
        Ok(())
    })
}

/// The lift as JSON, as printed by `epipelagic lift`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn epi_stratum_lift_json(h: *const EpiStratum, out: *mut *mut c_char) -> EpiStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null_err("handle"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let v = cli::lift_json(&h.group, &h.stratum).map_err(lib_err)?;
        write_string(out, cli::render(&v))
    })
}

/// The L-packet as JSON, as printed by `epipelagic packet`.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn epi_stratum_packet_json(h: *const EpiStratum, out: *mut *mut c_char) -> EpiStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null_err("handle"))?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        let v = cli::packet_of(&h.group, &h.stratum).map_err(lib_err)?;
        write_string(out, cli::render(&v))
    })
}

/// Gauss sum of the diagonal form `diag[0..len]` over F_p, as JSON.
///
/// # Safety
/// `diag` must point to `len` integers and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn epi_gauss_json(p: u32, diag: *const i64, len: usize, out: *mut *mut c_char) -> EpiStatus {
    guard(|| {
        if diag.is_null() && len > 0 {
            return Err(null_err("diag"));
        }
        if out.is_null() {
            return Err(null_err("out"));
        }
        let d = if len == 0 { &[][..] } else { std::slice::from_raw_parts(diag, len) };
        let v = cli::run_gauss(p, d).map_err(lib_err)?;
        write_string(out, cli::render(&v))
    })
}

/// Runs a verification suite; `FAILED` if any check fails, with the report
/// still written to `out`.
///
/// # Safety
/// `suite` must be nul-terminated, `primes` point to `len` values and `out`
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn epi_verify_json(
    suite: *const c_char,
    primes: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> EpiStatus {
    guard(|| {
        let suite = read_str(suite, "suite")?;
        if primes.is_null() || out.is_null() {
            return Err(null_err(if primes.is_null() { "primes" } else { "out" }));
        }
        let ps = std::slice::from_raw_parts(primes, len);
        let (report, v) = cli::run_verify_json(suite, ps).map_err(lib_err)?;
        write_string(out, cli::render(&v))?;
        if report.all_pass() {
            Ok(())
        } else {
            Err((EpiStatus::Failed, format!("{} checks failed", report.failed)))
        }
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn epi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
