//! C ABI over the sectioning library: opaque handles, integer status codes,
//! and a thread-local last-error message. The header is generated by
//! cbindgen into `include/sectioning.h` at build time.
//!
//! Ownership rules: every `*_new`/`*_parse`/producer output is owned by the
//! caller and released with the matching `*_free`; strings returned through
//! `char**` are released with `sec_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::time::Duration;

use sectioning::conflict_graph::{scg_of, Sectioning};
use sectioning::documents;
use sectioning::greedy::greedy_section;
use sectioning::instance::{generate_instance, parse_instance, serialize_instance, Instance};
use sectioning::minimize::{improve, objective_value, ObjectiveSpec};
use sectioning::render::{render_schedule, RenderSelector};
use sectioning::timetable::{phased_solve, ConflictReport, PhaseBudgets, Timetable};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    SolveError = 5,
}

/// Objective selector for the minimizer.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecObjective {
    Edges = 0,
    Weighted = 1,
}

pub struct SecInstance {
    inner: Instance,
}

pub struct SecSectioning {
    inner: Sectioning,
}

pub struct SecTimetable {
    timetable: Timetable,
    report: ConflictReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<Vec<u8>>) {
    let text = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn fail(status: SecStatus, err: impl std::fmt::Display) -> SecStatus {
    set_error(err.to_string());
    status
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be null (to query the
/// length only).
#[no_mangle]
pub unsafe extern "C" fn sec_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            // keep the copy terminated even when truncated
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, SecStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(SecStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_error(format!("invalid utf-8: {e}"));
        SecStatus::InvalidUtf8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> SecStatus {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::InvalidInput, e),
    }
}

macro_rules! require {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error("null argument");
            return SecStatus::NullArgument;
        }
    };
}

/// Parses an instance document (TOML text).
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sec_instance_parse(
    text: *const c_char,
    out: *mut *mut SecInstance,
) -> SecStatus {
    require!(out);
    let text = match cstr(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_instance(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SecInstance { inner }));
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::ParseError, e),
    }
}

/// Generates a named preset (`tiny`, `easy`, `medium`, `medium2`, `hard`).
///
/// # Safety
/// `preset` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sec_instance_generate(
    preset: *const c_char,
    seed: u64,
    out: *mut *mut SecInstance,
) -> SecStatus {
    require!(out);
    let preset = match cstr(preset) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match generate_instance(preset, seed) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SecInstance { inner }));
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::InvalidInput, e),
    }
}

/// Serializes the instance back to its canonical document.
///
/// # Safety
/// Pointers must be valid; the returned string is freed with
/// `sec_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sec_instance_to_text(
    inst: *const SecInstance,
    out: *mut *mut c_char,
) -> SecStatus {
    require!(inst);
    require!(out);
    give_string(serialize_instance(&(*inst).inner), out)
}

/// # Safety
/// `inst` must be a live handle from this library (or null, giving 0).
#[no_mangle]
pub unsafe extern "C" fn sec_instance_sections(inst: *const SecInstance) -> usize {
    if inst.is_null() {
        return 0;
    }
    (*inst).inner.sections.len()
}

/// # Safety
/// `inst` must be a live handle from this library (or null, giving 0).
#[no_mangle]
pub unsafe extern "C" fn sec_instance_students(inst: *const SecInstance) -> u32 {
    if inst.is_null() {
        return 0;
    }
    (*inst).inner.student_count()
}

/// # Safety
/// `inst` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sec_instance_free(inst: *mut SecInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs the greedy chain sectioning.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_greedy_section(
    inst: *const SecInstance,
    seed: u64,
    out: *mut *mut SecSectioning,
) -> SecStatus {
    require!(inst);
    require!(out);
    match greedy_section(&(*inst).inner, seed) {
        Ok((inner, _)) => {
            *out = Box::into_raw(Box::new(SecSectioning { inner }));
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::SolveError, e),
    }
}

fn spec_for(inst: &Instance, objective: SecObjective) -> ObjectiveSpec {
    match objective {
        SecObjective::Edges => ObjectiveSpec::edges(),
        SecObjective::Weighted => ObjectiveSpec::weighted(inst.edge_weights()),
    }
}

/// Local-search edge minimization from a starting sectioning.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_improve(
    inst: *const SecInstance,
    start: *const SecSectioning,
    objective: SecObjective,
    budget_seconds: f64,
    seed: u64,
    workers: u32,
    out: *mut *mut SecSectioning,
) -> SecStatus {
    require!(inst);
    require!(start);
    require!(out);
    let spec = spec_for(&(*inst).inner, objective);
    match improve(
        &(*inst).inner,
        &(*start).inner,
        &spec,
        Duration::from_secs_f64(budget_seconds.max(0.0)),
        seed,
        workers.max(1) as usize,
    ) {
        Ok(done) => {
            *out = Box::into_raw(Box::new(SecSectioning {
                inner: done.sectioning,
            }));
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::SolveError, e),
    }
}

/// Objective value of a sectioning.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_objective_value(
    inst: *const SecInstance,
    f: *const SecSectioning,
    objective: SecObjective,
    out: *mut f64,
) -> SecStatus {
    require!(inst);
    require!(f);
    require!(out);
    let spec = spec_for(&(*inst).inner, objective);
    match objective_value(&(*inst).inner, &(*f).inner, &spec) {
        Ok(v) => {
            *out = v;
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::InvalidInput, e),
    }
}

/// Parses a sectioning document (`student\tcourse\tsection` lines).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_sectioning_parse(
    text: *const c_char,
    out: *mut *mut SecSectioning,
) -> SecStatus {
    require!(out);
    let text = match cstr(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match documents::read_sectioning(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SecSectioning { inner }));
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::ParseError, e),
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_sectioning_to_text(
    f: *const SecSectioning,
    out: *mut *mut c_char,
) -> SecStatus {
    require!(f);
    require!(out);
    give_string(documents::write_sectioning(&(*f).inner), out)
}

/// # Safety
/// `f` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sec_sectioning_free(f: *mut SecSectioning) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Two-phase timetable construction for a sectioning; the handle carries
/// both the timetable and its conflict report.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_phased_solve(
    inst: *const SecInstance,
    f: *const SecSectioning,
    budget_seconds: f64,
    seed: u64,
    workers: u32,
    out: *mut *mut SecTimetable,
) -> SecStatus {
    require!(inst);
    require!(f);
    require!(out);
    let instance = &(*inst).inner;
    let graph = match scg_of(instance, &(*f).inner) {
        Ok(g) => g,
        Err(e) => return fail(SecStatus::InvalidInput, e),
    };
    match phased_solve(
        instance,
        &graph,
        &instance.soft_weights(),
        PhaseBudgets::even(Duration::from_secs_f64(budget_seconds.max(0.0))),
        seed,
        workers.max(1) as usize,
    ) {
        Ok((timetable, report)) => {
            *out = Box::into_raw(Box::new(SecTimetable { timetable, report }));
            SecStatus::Ok
        }
        Err(e) => fail(SecStatus::SolveError, e),
    }
}

/// # Safety
/// `tt` must be a live handle from this library (or null, giving NaN).
#[no_mangle]
pub unsafe extern "C" fn sec_timetable_objective(tt: *const SecTimetable) -> f64 {
    if tt.is_null() {
        return f64::NAN;
    }
    (*tt).report.total
}

/// # Safety
/// `tt` must be a live handle from this library (or null, giving u64::MAX).
#[no_mangle]
pub unsafe extern "C" fn sec_timetable_clashes(tt: *const SecTimetable) -> u64 {
    if tt.is_null() {
        return u64::MAX;
    }
    (*tt).report.clash_count() as u64
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_timetable_to_text(
    tt: *const SecTimetable,
    out: *mut *mut c_char,
) -> SecStatus {
    require!(tt);
    require!(out);
    give_string(documents::write_timetable(&(*tt).timetable), out)
}

/// Renders the week grid of one division (`<group>.<k>`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sec_render_division(
    inst: *const SecInstance,
    f: *const SecSectioning,
    tt: *const SecTimetable,
    division: *const c_char,
    out: *mut *mut c_char,
) -> SecStatus {
    require!(inst);
    require!(f);
    require!(tt);
    require!(out);
    let division = match cstr(division) {
        Ok(d) => d,
        Err(s) => return s,
    };
    match render_schedule(
        &(*inst).inner,
        &(*f).inner,
        &(*tt).timetable,
        &RenderSelector::Division(division.to_string()),
    ) {
        Ok(text) => give_string(text, out),
        Err(e) => fail(SecStatus::InvalidInput, e),
    }
}

/// # Safety
/// `tt` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sec_timetable_free(tt: *mut SecTimetable) {
    if !tt.is_null() {
        drop(Box::from_raw(tt));
    }
}

/// # Safety
/// `s` must be a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn sec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
