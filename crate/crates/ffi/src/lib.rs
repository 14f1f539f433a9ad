//! C ABI over `robredux`.
//!
//! Instances live behind opaque handles created by `rr_*_parse` / `rr_*_build`
//! and released with the matching `rr_*_free`. Every fallible call returns an
//! [`RrStatus`]; on failure the message is available from
//! [`rr_last_error_message`] until the next call on the same thread. Strings
//! handed out through `char **` parameters belong to the caller and must be
//! released with [`rr_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use robredux::adjmip::{self, AffineRhsMip, AttackTarget, MipOptions};
use robredux::formula::{self, QSatInstance, RAdjSatInstance};
use robredux::graph_reduce::{self, Construction, GadgetMap, Options, RecoveryCosts};
use robredux::qsolve;
use robredux::robopt::{self, RobustGraphInstance, Stage};
use robredux::sat_reduce;
use robredux::verify::{self, Corpus, Theorem, VerifyOptions};
use robredux::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8 or an out-of-range enum value.
    InvalidArgument = 1,
    /// Malformed instance text or JSON.
    Parse = 2,
    /// The instance violates a construction or structure precondition.
    Precondition = 3,
    /// An enumeration guard (`ROBREDUX_MAX_ENUM`) was hit.
    TooLarge = 4,
    /// A panic was caught; please report it.
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrConstruction {
    TwoStageIs = 0,
    RecoverableIs = 1,
    TwoStageTsp = 2,
    RecoverableTsp = 3,
    TwoStageVc = 4,
    RecoverableVc = 5,
}

/// Raw values are checked here rather than trusted as an enum.
fn construction_of(raw: u32) -> Result<Construction, Fail> {
    Construction::ALL
        .get(raw as usize)
        .copied()
        .ok_or_else(|| invalid("construction out of range"))
}

/// Parsed ∃∀∃-SAT instance.
pub struct RrQsat {
    inner: QSatInstance,
}

/// Parsed R-Adj-SAT instance.
pub struct RrRadjsat {
    inner: RAdjSatInstance,
}

/// Robust graph instance, with its gadget map when it came from a reduction.
pub struct RrGraph {
    inst: RobustGraphInstance,
    map: Option<GadgetMap>,
}

/// Adjustable MIP with right-hand-side uncertainty.
pub struct RrMip {
    inner: AffineRhsMip,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(RrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::TooLarge { .. } => RrStatus::TooLarge,
            Error::Parse(_) | Error::Json(_) => RrStatus::Parse,
            Error::Precondition(_) | Error::Structure(_) | Error::InconsistentMap(_) | Error::InvalidInstance(_) => {
                RrStatus::Precondition
            }
            _ => RrStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Fail {
    Fail(RrStatus::InvalidArgument, msg.to_string())
}

/// Runs `f`, records any failure and converts panics to `Internal`.
fn guarded(f: impl FnOnce() -> Result<(), Fail>) -> RrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RrStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            RrStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| invalid("null handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| invalid("string contains NUL"))?;
    put(out, c.into_raw())
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(v)))
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library; do not free.
#[no_mangle]
pub extern "C" fn rr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through a `char **` parameter. NULL is a no-op.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn rr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- ∃∀∃-SAT ------------------------------------------------------------

/// # Safety
/// `src` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_qsat_parse(src: *const c_char, out: *mut *mut RrQsat) -> RrStatus {
    guarded(|| put_handle(out, RrQsat { inner: formula::parse_qsat(text(src)?)? }))
}

/// # Safety
/// `h` comes from [`rr_qsat_parse`] or is NULL.
#[no_mangle]
pub unsafe extern "C" fn rr_qsat_free(h: *mut RrQsat) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; `answer` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_qsat_solve(h: *const RrQsat, answer: *mut bool) -> RrStatus {
    guarded(|| put(answer, qsolve::solve_qsat(&handle(h)?.inner)?.answer))
}

/// ∃∀∃-SAT → R-Adj-SAT; the result is a new handle.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_qsat_reduce(h: *const RrQsat, out: *mut *mut RrRadjsat) -> RrStatus {
    guarded(|| {
        let (r, _) = sat_reduce::reduce_qsat_to_radjsat(&handle(h)?.inner)?;
        put_handle(out, RrRadjsat { inner: r })
    })
}

// ---- R-Adj-SAT ----------------------------------------------------------

/// # Safety
/// `src` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_radjsat_parse(src: *const c_char, out: *mut *mut RrRadjsat) -> RrStatus {
    guarded(|| put_handle(out, RrRadjsat { inner: formula::parse_radjsat(text(src)?)? }))
}

/// # Safety
/// `h` comes from this library or is NULL.
#[no_mangle]
pub unsafe extern "C" fn rr_radjsat_free(h: *mut RrRadjsat) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; `answer` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_radjsat_solve(h: *const RrRadjsat, answer: *mut bool) -> RrStatus {
    guarded(|| put(answer, qsolve::solve_radjsat(&handle(h)?.inner)?.answer))
}

/// Instance text in the `p radjsat` format.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_radjsat_write(h: *const RrRadjsat, out: *mut *mut c_char) -> RrStatus {
    guarded(|| put_string(out, formula::write_radjsat(&handle(h)?.inner)))
}

// ---- graph reductions ---------------------------------------------------

/// Builds a gadget instance; `construction` is an [`RrConstruction`] value
/// and `paid_recourse` selects the repaired cost table of the recoverable
/// independent-set construction.
///
/// # Safety
/// `src` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_graph_reduce(
    src: *const RrRadjsat,
    construction: u32,
    paid_recourse: bool,
    out: *mut *mut RrGraph,
) -> RrStatus {
    guarded(|| {
        let opts = Options {
            recovery_costs: if paid_recourse { RecoveryCosts::PaidRecourse } else { RecoveryCosts::Unchanged },
            ..Options::default()
        };
        let (inst, map) = graph_reduce::build(construction_of(construction)?, &handle(src)?.inner, &opts)?;
        put_handle(out, RrGraph { inst, map: Some(map) })
    })
}

/// Reads an instance and, optionally (`map_json` may be NULL), its map.
///
/// # Safety
/// Strings are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_graph_from_json(inst_json: *const c_char, map_json: *const c_char, out: *mut *mut RrGraph) -> RrStatus {
    guarded(|| {
        let inst: RobustGraphInstance = serde_json::from_str(text(inst_json)?).map_err(Error::from)?;
        inst.validate()?;
        let map = if map_json.is_null() {
            None
        } else {
            Some(serde_json::from_str(text(map_json)?).map_err(Error::from)?)
        };
        put_handle(out, RrGraph { inst, map })
    })
}

/// # Safety
/// `h` comes from this library or is NULL.
#[no_mangle]
pub unsafe extern "C" fn rr_graph_free(h: *mut RrGraph) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_graph_to_json(h: *const RrGraph, out: *mut *mut c_char) -> RrStatus {
    guarded(|| put_string(out, serde_json::to_string(&handle(h)?.inst).map_err(Error::from)?))
}

/// Gadget map as JSON; `Precondition` when the handle has none.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_graph_map_json(h: *const RrGraph, out: *mut *mut c_char) -> RrStatus {
    guarded(|| {
        let map = handle(h)?.map.as_ref().ok_or_else(|| Fail(RrStatus::Precondition, "no gadget map".into()))?;
        put_string(out, serde_json::to_string(map).map_err(Error::from)?)
    })
}

/// Threshold decision through the structure-aware decider (needs a map).
///
/// # Safety
/// `h` is a live handle; `answer` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_graph_decide(h: *const RrGraph, answer: *mut bool) -> RrStatus {
    guarded(|| {
        let g = handle(h)?;
        let map = g.map.as_ref().ok_or_else(|| Fail(RrStatus::Precondition, "no gadget map".into()))?;
        put(answer, graph_reduce::decide_reduced(&g.inst, map)?)
    })
}

/// Optimal robust value by exhaustive evaluation, as a rational string
/// (`"p/q"`, `"inf"` or `"-inf"`).
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_graph_evaluate(h: *const RrGraph, out: *mut *mut c_char) -> RrStatus {
    guarded(|| {
        let inst = &handle(h)?.inst;
        let v = match inst.kind.stage() {
            Stage::TwoStage => robopt::eval_two_stage(inst)?,
            Stage::Recoverable => robopt::eval_recoverable(inst)?,
            Stage::KStage => robopt::eval_kstage(inst)?,
        };
        put_string(out, v.value.to_string())
    })
}

// ---- adjustable MIP -----------------------------------------------------

/// `attack_y` targets the ζ-rows at y′ instead of z′.
///
/// # Safety
/// `src` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_mip_build(src: *const RrRadjsat, attack_y: bool, out: *mut *mut RrMip) -> RrStatus {
    guarded(|| {
        let opts = MipOptions {
            target: if attack_y { AttackTarget::Y } else { AttackTarget::Z },
            epsilon: None,
        };
        let (mip, _) = adjmip::build_mip_with(&handle(src)?.inner, &opts)?;
        put_handle(out, RrMip { inner: mip })
    })
}

/// # Safety
/// `src` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_mip_from_json(src: *const c_char, out: *mut *mut RrMip) -> RrStatus {
    guarded(|| {
        let mip: AffineRhsMip = serde_json::from_str(text(src)?).map_err(Error::from)?;
        mip.validate()?;
        put_handle(out, RrMip { inner: mip })
    })
}

/// # Safety
/// `h` comes from this library or is NULL.
#[no_mangle]
pub unsafe extern "C" fn rr_mip_free(h: *mut RrMip) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_mip_to_json(h: *const RrMip, out: *mut *mut c_char) -> RrStatus {
    guarded(|| put_string(out, serde_json::to_string(&handle(h)?.inner).map_err(Error::from)?))
}

/// Exact ∃x ∀ζ ∃y feasibility for threshold-structured models.
///
/// # Safety
/// `h` is a live handle; `feasible` is writable.
#[no_mangle]
pub unsafe extern "C" fn rr_mip_check(h: *const RrMip, feasible: *mut bool) -> RrStatus {
    guarded(|| put(feasible, adjmip::check_adjustable_feasibility(&handle(h)?.inner)?.feasible))
}

// ---- verification -------------------------------------------------------

/// Runs a corpus check (`theorem` as on the command line: "2" … "10",
/// "K-adapt"); writes the JSON report. `mismatches` receives the number of
/// disagreements.
///
/// # Safety
/// Strings are NUL-terminated; output pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn rr_verify(
    theorem: *const c_char,
    corpus: *const c_char,
    seed: u64,
    mismatches: *mut usize,
    report_json: *mut *mut c_char,
) -> RrStatus {
    guarded(|| {
        let t: Theorem = text(theorem)?.parse().map_err(|e: String| invalid(&e))?;
        let c: Corpus = text(corpus)?.parse().map_err(|e: String| invalid(&e))?;
        let report = verify::run(t, &c, seed, &VerifyOptions::default())?;
        put(mismatches, report.mismatches.len())?;
        put_string(report_json, serde_json::to_string(&report).map_err(Error::from)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_codes_follow_the_core_order() {
        let codes = [
            RrConstruction::TwoStageIs,
            RrConstruction::RecoverableIs,
            RrConstruction::TwoStageTsp,
            RrConstruction::RecoverableTsp,
            RrConstruction::TwoStageVc,
            RrConstruction::RecoverableVc,
        ];
        for (i, c) in codes.into_iter().enumerate() {
            assert_eq!(c as usize, i);
            assert_eq!(construction_of(c as u32).ok(), Some(Construction::ALL[i]));
        }
        assert!(construction_of(6).is_err());
    }
}
