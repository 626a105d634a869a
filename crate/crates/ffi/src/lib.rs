//! C interface to `vecpart`.
//!
//! Configurations live behind an opaque `VpConfig` handle. Every fallible
//! call returns a `VpStatus`; on failure a description is available from
//! `vp_last_error` until the next call on the same thread. Strings handed
//! out by the library are NUL-terminated and must be released with
//! `vp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vecpart::arrangement::{build_config, delta, Arrangement};
use vecpart::cli::commands::{self, Context, Failure};
use vecpart::cli::{config_digest, parse_point, CommandEcho, ProblemFile, Report};
use vecpart::exactlin::{BigInt, IntVector};
use vecpart::latfun::partition_function;
use vecpart::spline::SplineEvaluator;
use vecpart::Error;

/// Result codes of the C interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    NotPointed = 3,
    NotGeneric = 4,
    VerificationFailed = 5,
    GuardLimit = 6,
    Panic = 7,
}

/// Opaque configuration handle.
pub struct VpConfig {
    arr: Arrangement,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).expect("interior NULs removed"));
}

fn status_of(e: &Error) -> VpStatus {
    match e {
        Error::NotPointed => VpStatus::NotPointed,
        Error::NotGeneric { .. } => VpStatus::NotGeneric,
        Error::GuardLimit { .. } => VpStatus::GuardLimit,
        Error::VerificationFailed { .. }
        | Error::PiecesDisagree { .. }
        | Error::Inconsistent { .. }
        | Error::MembershipViolation { .. } => VpStatus::VerificationFailed,
        _ => VpStatus::InvalidInput,
    }
}

fn fail(status: VpStatus, msg: &str) -> VpStatus {
    set_error(msg);
    status
}

/// Runs `body` with panics contained and the error slot cleared first.
fn guarded(body: impl FnOnce() -> VpStatus) -> VpStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(VpStatus::Panic, "internal panic"),
    }
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> VpStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            VpStatus::Ok
        }
        Err(_) => fail(VpStatus::InvalidInput, "result contains a NUL byte"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, VpStatus> {
    if p.is_null() {
        return Err(fail(VpStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(VpStatus::InvalidInput, "string argument is not UTF-8"))
}

fn failure_status(f: Failure) -> VpStatus {
    match f {
        Failure::Usage(m) => fail(VpStatus::InvalidInput, &m),
        Failure::Library(e) => fail(status_of(&e), &e.to_string()),
    }
}

/// Creates a configuration from `count` vectors of dimension `dim`, stored
/// row by row in `coords` (`count * dim` integers).
///
/// # Safety
/// `coords` must point to `count * dim` readable integers and `out` to a
/// writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn vp_config_new(dim: usize, coords: *const i64, count: usize, out: *mut *mut VpConfig) -> VpStatus {
    guarded(|| {
        if out.is_null() || (coords.is_null() && dim * count > 0) {
            return fail(VpStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        if count > commands::MAX_VECTORS || dim > commands::MAX_DIM {
            return fail(
                VpStatus::GuardLimit,
                &format!("the limits are {} vectors and dimension {}", commands::MAX_VECTORS, commands::MAX_DIM),
            );
        }
        let flat: &[i64] = if dim * count == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(coords, dim * count)
        };
        let vectors: Vec<IntVector> = (0..count).map(|i| IntVector::from_i64(&flat[i * dim..(i + 1) * dim])).collect();
        match build_config(dim, vectors) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(VpConfig {
                    arr: Arrangement::new(cfg),
                }));
                VpStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `cfg` must be null or a handle from `vp_config_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vp_config_free(cfg: *mut VpConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Dimension of the ambient lattice, or 0 for a null handle.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vp_config_dim(cfg: *const VpConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.arr.dim())
}

/// Number of vectors, or 0 for a null handle.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vp_config_len(cfg: *const VpConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.arr.config().len())
}

/// Lattice volume of the zonotope, as a decimal string.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vp_delta(cfg: *const VpConfig, out: *mut *mut c_char) -> VpStatus {
    guarded(|| {
        let (Some(c), false) = (cfg.as_ref(), out.is_null()) else {
            return fail(VpStatus::NullArgument, "null argument");
        };
        give_string(out, delta(c.arr.config()).to_string())
    })
}

/// Number of ways to write `point` (`dim` integers) as a nonnegative integer
/// combination of the vectors, as a decimal string.
///
/// # Safety
/// `point` must hold `vp_config_dim(cfg)` integers and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn vp_partition_function(cfg: *const VpConfig, point: *const i64, out: *mut *mut c_char) -> VpStatus {
    guarded(|| {
        let (Some(c), false) = (cfg.as_ref(), out.is_null()) else {
            return fail(VpStatus::NullArgument, "null argument");
        };
        let d = c.arr.dim();
        if point.is_null() && d > 0 {
            return fail(VpStatus::NullArgument, "null point");
        }
        let coords: Vec<BigInt> = (0..d).map(|i| BigInt::from(*point.add(i))).collect();
        match partition_function(c.arr.config()) {
            Ok(p) => give_string(out, p.eval(&IntVector::new(coords)).to_string()),
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// `T_X` at a rational point written like `"2,1/3"`, as an exact fraction.
///
/// # Safety
/// `point` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vp_spline_eval(cfg: *const VpConfig, point: *const c_char, out: *mut *mut c_char) -> VpStatus {
    guarded(|| {
        let (Some(c), false) = (cfg.as_ref(), out.is_null()) else {
            return fail(VpStatus::NullArgument, "null argument");
        };
        let text = match read_str(point) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let x = match parse_point(text, c.arr.dim()) {
            Ok(x) => x,
            Err(m) => return fail(VpStatus::InvalidInput, &m),
        };
        match SplineEvaluator::new(c.arr.config()) {
            Ok(ev) => give_string(out, ev.eval(&x).to_string()),
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

unsafe fn report_json(
    cfg: *const VpConfig,
    name: &str,
    radius: i64,
    out: *mut *mut c_char,
    run: impl FnOnce(&Context) -> commands::Outcome,
) -> VpStatus {
    let (Some(c), false) = (cfg.as_ref(), out.is_null()) else {
        return fail(VpStatus::NullArgument, "null argument");
    };
    let problem = ProblemFile {
        config: c.arr.config().clone(),
        gram: None,
        window_radius: Some(radius),
        beta: None,
    };
    let digest = config_digest(&problem.config);
    let ctx = match Context::new(problem, None, 0) {
        Ok(ctx) => ctx,
        Err(f) => return failure_status(f),
    };
    match run(&ctx) {
        Ok((result, verdicts)) => {
            let echo = CommandEcho {
                name: name.to_string(),
                file: "<ffi>".to_string(),
                args: Default::default(),
            };
            let rep = Report::new(echo, digest, ctx.window().description().to_string(), result, verdicts);
            let passed = rep.passed;
            let s = give_string(out, rep.to_json());
            if s == VpStatus::Ok && !passed {
                fail(VpStatus::VerificationFailed, "a verification in the report failed")
            } else {
                s
            }
        }
        Err(f) => failure_status(f),
    }
}

/// Combinatorial census (subspaces, cocircuits, topes, walls, big cells)
/// as a JSON report.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vp_structure_json(cfg: *const VpConfig, out: *mut *mut c_char) -> VpStatus {
    guarded(|| report_json(cfg, "structure", 0, out, commands::structure))
}

/// Localization of the partition function at the tope containing `point`
/// (e.g. `"2,1"`), verified on the window of the given radius, as a JSON
/// report.
///
/// # Safety
/// `point` must be a NUL-terminated string, `cfg` a live handle and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn vp_localize_json(
    cfg: *const VpConfig,
    point: *const c_char,
    window_radius: i64,
    out: *mut *mut c_char,
) -> VpStatus {
    guarded(|| {
        let text = match read_str(point) {
            Ok(t) => t.to_string(),
            Err(s) => return s,
        };
        if window_radius < 0 {
            return fail(VpStatus::InvalidInput, "window radius must be nonnegative");
        }
        report_json(cfg, "localize", window_radius, out, |ctx| {
            commands::localize_cmd(ctx, None, Some(&text))
        })
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Description of the last failure on this thread (empty after success).
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn vp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
