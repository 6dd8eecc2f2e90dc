//! C interface over the pillai library.
//!
//! Conventions: every function returns a [`PfStatus`]; results come back
//! through out-parameters. Strings crossing the boundary are NUL-terminated
//! UTF-8 owned by this library; release them with [`pf_string_free`]. The
//! pair handle is opaque; release it with [`pf_pair_free`]. Rust panics are
//! caught at the boundary and reported as `PF_STATUS_PANIC`, so no unwind
//! ever crosses into C.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use pillai::bounds::PairConfig;
use pillai::convergents::{family_cf, q_sequence};
use pillai::published::PUBLISHED;
use pillai::real::{NumError, NumResult};
use pillai::report::{
    bound_report, reduce_case_pinned, reduce_case_smallest, reproduce, rows_render,
    search_report, table_row_runner, Format, Scope,
};
use pillai::search::multi_rep_search;

/// Result of every interface call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PfStatus {
    /// Success.
    PfStatusOk = 0,
    /// Working precision was exhausted before the result certified.
    PfStatusPrecision = 1,
    /// The inputs are outside the supported domain.
    PfStatusDomain = 2,
    /// A textual input failed to parse.
    PfStatusParse = 3,
    /// A required pointer argument was null.
    PfStatusNullArg = 4,
    /// A textual input was not valid UTF-8.
    PfStatusUtf8 = 5,
    /// An internal invariant failed; the call did not complete.
    PfStatusPanic = 6,
}

/// Opaque handle for a validated family pair (the expansions `[0;(1,a)]`
/// and `[0;(1,b)]` with `2 <= a < b`).
pub struct PfPair {
    cfg: PairConfig,
}

fn status_of(e: &NumError) -> PfStatus {
    match e {
        NumError::Precision(_) => PfStatus::PfStatusPrecision,
        NumError::Domain(_) => PfStatus::PfStatusDomain,
        NumError::Parse(_) => PfStatus::PfStatusParse,
    }
}

/// Static description of a status code. Never null; do not free.
#[no_mangle]
pub extern "C" fn pf_status_describe(status: PfStatus) -> *const c_char {
    let text: &'static CStr = match status {
        PfStatus::PfStatusOk => c"ok",
        PfStatus::PfStatusPrecision => c"working precision exhausted",
        PfStatus::PfStatusDomain => c"input outside the supported domain",
        PfStatus::PfStatusParse => c"malformed textual input",
        PfStatus::PfStatusNullArg => c"required pointer argument was null",
        PfStatus::PfStatusUtf8 => c"input was not valid UTF-8",
        PfStatus::PfStatusPanic => c"internal invariant failed",
    };
    text.as_ptr()
}

/// Run `f`, catching panics and mapping every failure to a status.
fn guarded(f: impl FnOnce() -> Result<(), PfStatus>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfStatus::PfStatusOk,
        Ok(Err(status)) => status,
        Err(_) => PfStatus::PfStatusPanic,
    }
}

/// Read a required C string argument.
///
/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, PfStatus> {
    if ptr.is_null() {
        return Err(PfStatus::PfStatusNullArg);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| PfStatus::PfStatusUtf8)
}

/// Store an owned string into an out-parameter.
///
/// # Safety
/// `out` must be a valid, writable pointer.
unsafe fn write_out(out: *mut *mut c_char, s: String) -> Result<(), PfStatus> {
    if out.is_null() {
        return Err(PfStatus::PfStatusNullArg);
    }
    // Our output is JSON, CSV, or report text and never embeds NUL; the
    // replacement is pure defense so the conversion cannot fail.
    let c = CString::new(s.replace('\0', "?")).expect("NUL stripped above");
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn parse_format(format: u32) -> Result<Format, PfStatus> {
    match format {
        0 => Ok(Format::Json),
        1 => Ok(Format::Text),
        2 => Ok(Format::Csv),
        _ => Err(PfStatus::PfStatusParse),
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a pointer previously returned through an out-parameter of
/// this library, and must not be used again afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Expand a quadratic surd (or echo a continued fraction) in canonical
/// bracket notation, e.g. "sqrt(27)" to "[5; (5, 10)]".
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_cf_expand(expr: *const c_char, out: *mut *mut c_char) -> PfStatus {
    guarded(|| {
        let expr = unsafe { read_str(expr) }?;
        let cf = match pillai::cfrac::parse_surd_or_cf(expr).map_err(|e| status_of(&e))? {
            pillai::cfrac::SurdInput::Surd(s) => s.expand().map_err(|e| status_of(&e))?,
            pillai::cfrac::SurdInput::Cf(cf) => cf,
        };
        unsafe { write_out(out, cf.to_string()) }
    })
}

/// Space-joined convergent denominators `q_0 .. q_n` of a surd or
/// continued fraction.
///
/// # Safety
/// `input` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_sequence(
    input: *const c_char,
    n: usize,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let input = unsafe { read_str(input) }?;
        let cf = match pillai::cfrac::parse_surd_or_cf(input).map_err(|e| status_of(&e))? {
            pillai::cfrac::SurdInput::Surd(s) => s.expand().map_err(|e| status_of(&e))?,
            pillai::cfrac::SurdInput::Cf(cf) => cf,
        };
        let values: Vec<String> =
            q_sequence(&cf, n).values().iter().map(|q| q.to_string()).collect();
        unsafe { write_out(out, values.join(" ")) }
    })
}

/// Create a validated pair handle for the family expansions `[0;(1,a)]`
/// and `[0;(1,b)]`.
///
/// # Safety
/// `out` must be writable; the result must be released with `pf_pair_free`.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_new(a: i64, b: i64, out: *mut *mut PfPair) -> PfStatus {
    guarded(|| {
        if out.is_null() {
            return Err(PfStatus::PfStatusNullArg);
        }
        let cfg = PairConfig::new(a, b).map_err(|e| status_of(&e))?;
        unsafe { *out = Box::into_raw(Box::new(PfPair { cfg })) };
        Ok(())
    })
}

/// Release a pair handle. Null is ignored.
///
/// # Safety
/// `pair` must come from `pf_pair_new` and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_free(pair: *mut PfPair) {
    if !pair.is_null() {
        drop(unsafe { Box::from_raw(pair) });
    }
}

/// Search both family sequences of a pair for integers with two or more
/// representations `q_a(N) - q_b(M)`; the report lists every
/// representation. `format`: 0 JSON, 1 text, 2 CSV.
///
/// # Safety
/// `pair` must be a live handle from `pf_pair_new`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_search(
    pair: *const PfPair,
    n_max: usize,
    m_max: usize,
    format: u32,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        if pair.is_null() {
            return Err(PfStatus::PfStatusNullArg);
        }
        let cfg = &unsafe { &*pair }.cfg;
        let format = parse_format(format)?;
        let run = || -> NumResult<String> {
            let cf_a = family_cf(cfg.a)?;
            let cf_b = family_cf(cfg.b)?;
            let records = multi_rep_search(&cf_a, &cf_b, n_max, m_max);
            let ta = q_sequence(&cf_a, n_max);
            let tb = q_sequence(&cf_b, m_max);
            search_report(&ta, &tb, &records, format)
        };
        let report = run().map_err(|e| status_of(&e))?;
        unsafe { write_out(out, report) }
    })
}

/// Certified linear-form constants and combined exponent bounds for a
/// pair. `format`: 0 JSON, 1 text, 2 CSV.
///
/// # Safety
/// `pair` must be a live handle from `pf_pair_new`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_bounds(
    pair: *const PfPair,
    format: u32,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        if pair.is_null() {
            return Err(PfStatus::PfStatusNullArg);
        }
        let cfg = &unsafe { &*pair }.cfg;
        let format = parse_format(format)?;
        let report = bound_report(cfg, format).map_err(|e| status_of(&e))?;
        unsafe { write_out(out, report) }
    })
}

/// Evaluate one published table row at its published ladder index and
/// compare against the printed values. `case_id` names the row as
/// "table:(c,...):sign", e.g. "2.2:(0,1,0):-". `format`: 0 JSON, 1 text,
/// 2 CSV.
///
/// # Safety
/// `case_id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_table_row_run(
    case_id: *const c_char,
    format: u32,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let case_id = unsafe { read_str(case_id) }?;
        let format = parse_format(format)?;
        let rows = table_row_runner(case_id).map_err(|e| status_of(&e))?;
        unsafe { write_out(out, rows_render(&rows, format)) }
    })
}

/// Re-run a published row with overrides: a solution-count cap given as a
/// decimal string, and either a pinned ladder index (`q_index >= 0`) or
/// the smallest certifying index (`q_index < 0`). `format`: 0 JSON,
/// 1 text, 2 CSV.
///
/// # Safety
/// `case_id` and `cap` must be NUL-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_reduce_row(
    case_id: *const c_char,
    cap: *const c_char,
    q_index: i64,
    format: u32,
    out: *mut *mut c_char,
) -> PfStatus {
    guarded(|| {
        let case_id = unsafe { read_str(case_id) }?;
        let cap_text = unsafe { read_str(cap) }?;
        let format = parse_format(format)?;
        let cap: BigInt =
            cap_text.trim().parse().map_err(|_| PfStatus::PfStatusParse)?;
        let rows = if q_index < 0 {
            reduce_case_smallest(case_id, &cap)
        } else {
            reduce_case_pinned(case_id, &cap, q_index as usize)
        }
        .map_err(|e| status_of(&e))?;
        unsafe { write_out(out, rows_render(&rows, format)) }
    })
}

/// Recompute published values and compare against the bundled data.
/// `scope` is one of "thm13", "appendix", "tables", "bounds", "all".
/// `all_match` receives 1 when every check matched, else 0; the report is
/// produced either way. `format`: 0 JSON, 1 text, 2 CSV.
///
/// # Safety
/// `scope` must be a NUL-terminated string; `out` and `all_match` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_reproduce(
    scope: *const c_char,
    format: u32,
    out: *mut *mut c_char,
    all_match: *mut i32,
) -> PfStatus {
    guarded(|| {
        let scope = unsafe { read_str(scope) }?;
        if all_match.is_null() {
            return Err(PfStatus::PfStatusNullArg);
        }
        let format = parse_format(format)?;
        let scope = Scope::parse(scope).map_err(|e| status_of(&e))?;
        let rep = reproduce(scope, format).map_err(|e| status_of(&e))?;
        unsafe { *all_match = i32::from(rep.all_match) };
        unsafe { write_out(out, rep.output) }
    })
}

/// The pair the bundled published values describe. Either pointer may be
/// null if that component is not wanted.
#[no_mangle]
pub extern "C" fn pf_published_pair(a: *mut i64, b: *mut i64) {
    let (pa, pb) = PUBLISHED.pair;
    if !a.is_null() {
        unsafe { *a = pa };
    }
    if !b.is_null() {
        unsafe { *b = pb };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    unsafe fn take(out: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        unsafe { pf_string_free(out) };
        s
    }

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn expand_and_sequence_round_trip() {
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { pf_cf_expand(cstr("sqrt(27)").as_ptr(), &mut out) };
        assert_eq!(status, PfStatus::PfStatusOk);
        assert_eq!(unsafe { take(out) }, "[5; (5, 10)]");

        let status = unsafe { pf_sequence(cstr("[0;(1,2)]").as_ptr(), 7, &mut out) };
        assert_eq!(status, PfStatus::PfStatusOk);
        assert_eq!(unsafe { take(out) }, "1 1 3 4 11 15 41 56");
    }

    #[test]
    fn error_paths_report_without_unwinding() {
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { pf_cf_expand(cstr("sqrt(-3)").as_ptr(), &mut out) };
        assert_eq!(status, PfStatus::PfStatusDomain);
        let status = unsafe { pf_cf_expand(ptr::null(), &mut out) };
        assert_eq!(status, PfStatus::PfStatusNullArg);
        let bad = CString::new(vec![0xffu8, 0xfe]).unwrap();
        let status = unsafe { pf_cf_expand(bad.as_ptr(), &mut out) };
        assert_eq!(status, PfStatus::PfStatusUtf8);

        let mut pair: *mut PfPair = ptr::null_mut();
        assert_eq!(unsafe { pf_pair_new(3, 2, &mut pair) }, PfStatus::PfStatusDomain);
        assert!(pair.is_null());
        let desc = unsafe { CStr::from_ptr(pf_status_describe(PfStatus::PfStatusDomain)) };
        assert!(!desc.to_str().unwrap().is_empty());
    }

    #[test]
    fn pair_search_and_bounds_produce_reports() {
        let mut pair: *mut PfPair = ptr::null_mut();
        assert_eq!(unsafe { pf_pair_new(2, 3, &mut pair) }, PfStatus::PfStatusOk);
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { pf_pair_search(pair, 40, 34, 0, &mut out) };
        assert_eq!(status, PfStatus::PfStatusOk);
        let json = unsafe { take(out) };
        assert!(json.contains("\"c\": \"37\""));
        let status = unsafe { pf_pair_bounds(pair, 1, &mut out) };
        assert_eq!(status, PfStatus::PfStatusOk);
        assert!(unsafe { take(out) }.contains("exponent_bound_n1"));
        unsafe { pf_pair_free(pair) };
    }

    #[test]
    fn row_runner_and_reproduce_cross_the_boundary() {
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { pf_table_row_run(cstr("1:(0,0):+").as_ptr(), 0, &mut out) };
        assert_eq!(status, PfStatus::PfStatusOk);
        let json = unsafe { take(out) };
        assert!(json.contains("\"match\": true"));

        let mut all_match = -1i32;
        let status = unsafe {
            pf_reproduce(cstr("thm13").as_ptr(), 1, &mut out, &mut all_match)
        };
        assert_eq!(status, PfStatus::PfStatusOk);
        assert_eq!(all_match, 1);
        assert!(unsafe { take(out) }.contains("RESULT: PASS"));

        let status = unsafe {
            pf_reproduce(cstr("nope").as_ptr(), 1, &mut out, &mut all_match)
        };
        assert_eq!(status, PfStatus::PfStatusParse);
    }

    #[test]
    fn published_pair_is_exposed() {
        let (mut a, mut b) = (0i64, 0i64);
        pf_published_pair(&mut a, &mut b);
        assert_eq!((a, b), (2, 3));
    }
}
