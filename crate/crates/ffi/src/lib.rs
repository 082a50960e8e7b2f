//! C interface to `pccc_bound`.
//!
//! Every fallible function returns a [`PcccStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`pccc_last_error_message`]. Handles are opaque and must be
//! released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pccc_bound::pccc::{
    free_effective_distance, p2_approximation, q_function, truncated_union_bound,
};
use pccc_bound::puncture::{pseudo_random_pattern, PseudoVariant};
use pccc_bound::{Error, PcccPunctureSet, RscCode};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcccStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidPolynomial = 3,
    Domain = 4,
    Overflow = 5,
    Limit = 6,
    Panic = 7,
}

/// Constituent RSC code.
pub struct PcccCode(RscCode);

/// Two codes, their puncturing rows and the interleaver size.
pub struct PcccConfig(pccc_bound::PcccConfig);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> PcccStatus {
    match e {
        Error::Parse(_) => PcccStatus::Parse,
        Error::InvalidPolynomial(_) => PcccStatus::InvalidPolynomial,
        Error::Overflow(_) => PcccStatus::Overflow,
        Error::Limit(_) => PcccStatus::Limit,
        _ => PcccStatus::Domain,
    }
}

struct Failure(PcccStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PcccStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            PcccStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PcccStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PcccStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PcccStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pccc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn pccc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Gaussian tail probability.
#[no_mangle]
pub extern "C" fn pccc_q_function(x: f64) -> f64 {
    q_function(x)
}

/// Builds a code from octal feedback and feedforward generators.
///
/// # Safety
/// `feedback` and `feedforward` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pccc_code_new(
    feedback: *const c_char,
    feedforward: *const c_char,
    out: *mut *mut PcccCode,
) -> PcccStatus {
    guard(|| {
        let code = RscCode::from_octal(
            text(feedback, "feedback")?,
            text(feedforward, "feedforward")?,
        )?;
        store(out, Box::into_raw(Box::new(PcccCode(code))), "out")
    })
}

/// # Safety
/// `code` must come from [`pccc_code_new`] and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn pccc_code_free(code: *mut PcccCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Period `L` of the feedback polynomial.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pccc_code_period(code: *const PcccCode, out: *mut usize) -> PcccStatus {
    guard(|| store(out, deref(code, "code")?.0.period(), "out"))
}

/// Unpunctured core weight.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pccc_code_core_weight(code: *const PcccCode, out: *mut u32) -> PcccStatus {
    guard(|| store(out, deref(code, "code")?.0.core_weight(), "out"))
}

/// Configuration from explicit puncturing rows given as strings of `0` and
/// `1`.
///
/// # Safety
/// Code handles must be live, strings NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pccc_config_new(
    code1: *const PcccCode,
    code2: *const PcccCode,
    sys: *const c_char,
    par1: *const c_char,
    par2: *const c_char,
    n: usize,
    out: *mut *mut PcccConfig,
) -> PcccStatus {
    guard(|| {
        let set =
            PcccPunctureSet::parse(text(sys, "sys")?, text(par1, "par1")?, text(par2, "par2")?)?;
        let cfg = pccc_bound::PcccConfig::new(
            deref(code1, "code1")?.0.clone(),
            deref(code2, "code2")?.0.clone(),
            set,
            n,
        )?;
        store(out, Box::into_raw(Box::new(PcccConfig(cfg))), "out")
    })
}

/// Symmetric configuration with pseudo-random puncturing; `variant` is `'A'`
/// or `'B'`.
///
/// # Safety
/// `code` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pccc_config_new_pseudo(
    code: *const PcccCode,
    variant: c_char,
    n: usize,
    out: *mut *mut PcccConfig,
) -> PcccStatus {
    guard(|| {
        let variant = match variant as u8 {
            b'A' | b'a' => PseudoVariant::A,
            b'B' | b'b' => PseudoVariant::B,
            other => {
                return Err(Failure(
                    PcccStatus::Parse,
                    format!("unknown pseudo-random variant {:?}", other as char),
                ))
            }
        };
        let code = &deref(code, "code")?.0;
        let set = pseudo_random_pattern(code, variant)?;
        let cfg = pccc_bound::PcccConfig::symmetric(code.clone(), set, n)?;
        store(out, Box::into_raw(Box::new(PcccConfig(cfg))), "out")
    })
}

/// # Safety
/// `config` must come from a `pccc_config_new*` call and not have been
/// freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pccc_config_free(config: *mut PcccConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Code rate as a reduced fraction.
///
/// # Safety
/// `config` must be a live handle; both out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn pccc_config_rate(
    config: *const PcccConfig,
    numerator: *mut u64,
    denominator: *mut u64,
) -> PcccStatus {
    guard(|| {
        let rate = deref(config, "config")?.0.rate();
        store(numerator, *rate.numer(), "numerator")?;
        store(denominator, *rate.denom(), "denominator")
    })
}

/// Free effective distance. A catastrophic configuration yields 0 with
/// `catastrophic` set.
///
/// # Safety
/// `config` must be a live handle; `distance` writable; `catastrophic` may
/// be null.
#[no_mangle]
pub unsafe extern "C" fn pccc_free_effective_distance(
    config: *const PcccConfig,
    distance: *mut u32,
    catastrophic: *mut bool,
) -> PcccStatus {
    guard(|| {
        let d = free_effective_distance(&deref(config, "config")?.0)?;
        store(distance, d.d_free_eff, "distance")?;
        if !catastrophic.is_null() {
            catastrophic.write(d.catastrophic);
        }
        Ok(())
    })
}

unsafe fn points<'a>(ebn0_db: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ebn0_db.is_null() {
        return Err(null("ebn0_db"));
    }
    Ok(std::slice::from_raw_parts(ebn0_db, len))
}

unsafe fn write_curve(
    curve: &pccc_bound::BoundCurve,
    values: *mut f64,
    clamped: *mut bool,
) -> Result<(), Failure> {
    if curve.points.is_empty() {
        return Ok(());
    }
    if values.is_null() {
        return Err(null("values"));
    }
    for (i, p) in curve.points.iter().enumerate() {
        values.add(i).write(p.value);
        if !clamped.is_null() {
            clamped.add(i).write(p.clamped);
        }
    }
    Ok(())
}

/// Weight-2 bound `P(2)` at `len` SNR points (dB). `values` receives `len`
/// clamped values; `clamped`, if not null, `len` flags.
///
/// # Safety
/// `config` must be a live handle; `ebn0_db` readable and `values`
/// (and `clamped` when given) writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn pccc_p2(
    config: *const PcccConfig,
    ebn0_db: *const f64,
    len: usize,
    values: *mut f64,
    clamped: *mut bool,
) -> PcccStatus {
    guard(|| {
        let curve = p2_approximation(&deref(config, "config")?.0, points(ebn0_db, len)?)?;
        write_curve(&curve, values, clamped)
    })
}

/// Union bound truncated to input weights `2 … w_max` and distances up to
/// `d_max`. `truncated`, if not null, reports whether terms were dropped.
///
/// # Safety
/// As for [`pccc_p2`]; `truncated` may be null.
#[no_mangle]
pub unsafe extern "C" fn pccc_truncated_bound(
    config: *const PcccConfig,
    w_max: u32,
    d_max: u32,
    ebn0_db: *const f64,
    len: usize,
    values: *mut f64,
    clamped: *mut bool,
    truncated: *mut bool,
) -> PcccStatus {
    guard(|| {
        let cfg = &deref(config, "config")?.0;
        let bound = truncated_union_bound(cfg, w_max, d_max, points(ebn0_db, len)?)?;
        write_curve(&bound.curve, values, clamped)?;
        if !truncated.is_null() {
            truncated.write(bound.truncated);
        }
        Ok(())
    })
}
