//! C interface to `gsc-core`.
//!
//! Specs and solutions are opaque handles, released with the matching
//! `_free`. Every fallible call returns a [`GscStatus`]; the message of the
//! last failure on the calling thread is available from [`gsc_last_error`]. Strings returned by the library are
//! owned by the caller and released with [`gsc_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gsc_core::dirichlet::{solve_faces, HarmonicSolution};
use gsc_core::graph::build_cell_graph;
use gsc_core::scaling::{random_walk_crossing, resistance_sequence};
use gsc_core::validate::{bb99_condition, validate_spec};
use gsc_core::{CarpetSpec, Error};
use libc::{c_char, c_double, c_int, size_t};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    Parse = 4,
    InvalidArgument = 5,
    Budget = 6,
    NotAutomorphism = 7,
    NoConvergence = 8,
    IsolatedComponent = 9,
    WalkLimit = 10,
    EmptyProfile = 11,
    Io = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

/// Opaque carpet specification.
pub struct GscSpec {
    inner: CarpetSpec,
}

/// Opaque harmonic function between opposite faces.
pub struct GscSolution {
    level: u32,
    solution: HarmonicSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GscStatus {
    match e {
        Error::InvalidSpec(_) => GscStatus::InvalidSpec,
        Error::Parse(_) | Error::Json(_) => GscStatus::Parse,
        Error::InvalidArgument(_) => GscStatus::InvalidArgument,
        Error::Budget { .. } => GscStatus::Budget,
        Error::NotAutomorphism { .. } => GscStatus::NotAutomorphism,
        Error::NoConvergence { .. } => GscStatus::NoConvergence,
        Error::IsolatedComponent { .. } => GscStatus::IsolatedComponent,
        Error::WalkLimit { .. } => GscStatus::WalkLimit,
        Error::EmptyProfile => GscStatus::EmptyProfile,
        Error::Io(_) => GscStatus::Io,
    }
}

/// Runs `f`, recording failures and catching panics.
fn guard(f: impl FnOnce() -> Result<(), (GscStatus, String)>) -> GscStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GscStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside gsc".to_string());
            GscStatus::Panic
        }
    }
}

fn core(e: Error) -> (GscStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (GscStatus, String) {
    (GscStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GscStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (GscStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn spec_ref<'a>(p: *const GscSpec) -> Result<&'a CarpetSpec, (GscStatus, String)> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| null("spec"))
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn put_spec(out: *mut *mut GscSpec, spec: CarpetSpec) {
    *out = Box::into_raw(Box::new(GscSpec { inner: spec }));
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn gsc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or NULL if none.
#[no_mangle]
pub extern "C" fn gsc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gsc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a spec from `{"d": .., "l": .., "S": [[..], ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_from_json(json: *const c_char, out: *mut *mut GscSpec) -> GscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        put_spec(out, CarpetSpec::from_json_str(text).map_err(core)?);
        Ok(())
    })
}

/// `"sc"`, `"menger"` or `"counterexample:d,l"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_builtin(name: *const c_char, out: *mut *mut GscSpec) -> GscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        put_spec(out, CarpetSpec::builtin(name).map_err(core)?);
        Ok(())
    })
}

/// The counterexample family member with parameters `(d, l)`; side `2ld`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_counterexample(d: size_t, l: size_t, out: *mut *mut GscSpec) -> GscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put_spec(out, gsc_core::counterexample::gen_counterexample(d, l).map_err(core)?);
        Ok(())
    })
}

/// # Safety
/// `spec` must come from a `gsc_spec_*` constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_free(spec: *mut GscSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Dimension `d`; 0 for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_dim(spec: *const GscSpec) -> size_t {
    spec.as_ref().map_or(0, |s| s.inner.d())
}

/// Subdivision factor `l`; 0 for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_side(spec: *const GscSpec) -> size_t {
    spec.as_ref().map_or(0, |s| s.inner.l() as size_t)
}

/// Number of kept cells `#S`; 0 for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_len(spec: *const GscSpec) -> size_t {
    spec.as_ref().map_or(0, |s| s.inner.len())
}

/// SHA-256 of the canonical JSON, as hex; NULL for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_hash(spec: *const GscSpec) -> *mut c_char {
    spec.as_ref().map_or(ptr::null_mut(), |s| into_c(s.inner.hash()))
}

/// Canonical JSON; NULL for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_to_json(spec: *const GscSpec) -> *mut c_char {
    spec.as_ref()
        .map_or(ptr::null_mut(), |s| into_c(s.inner.to_canonical_json()))
}

/// Checks the four axioms. `*pass` is 1 when all hold. When `report` is not
/// NULL it receives the full report as JSON.
///
/// # Safety
/// `spec` must be a live handle, `pass` valid, `report` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_validate(
    spec: *const GscSpec,
    pass: *mut c_int,
    report: *mut *mut c_char,
) -> GscStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if pass.is_null() {
            return Err(null("pass"));
        }
        let r = validate_spec(spec);
        *pass = c_int::from(r.pass);
        if !report.is_null() {
            *report = into_c(serde_json::to_string(&r).map_err(|e| core(e.into()))?);
        }
        Ok(())
    })
}

/// Slab condition along the first axis: `*holds` is 1 when some slab count
/// differs from the first.
///
/// # Safety
/// `spec` must be a live handle and `holds` valid.
#[no_mangle]
pub unsafe extern "C" fn gsc_spec_bb99(spec: *const GscSpec, holds: *mut c_int) -> GscStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if holds.is_null() {
            return Err(null("holds"));
        }
        *holds = c_int::from(bb99_condition(spec).holds);
        Ok(())
    })
}

/// Harmonic function on the level-`level` cell graph, 0 on `{x_axis = 0}`
/// and 1 on `{x_axis = 1}`; `axis` is 0-based.
///
/// # Safety
/// `spec` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn gsc_solve_faces(
    spec: *const GscSpec,
    level: u32,
    axis: size_t,
    tol: c_double,
    budget: u64,
    out: *mut *mut GscSolution,
) -> GscStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let graph = build_cell_graph(spec, level, budget).map_err(core)?;
        let solution = solve_faces(&graph, axis, tol).map_err(core)?;
        *out = Box::into_raw(Box::new(GscSolution { level, solution }));
        Ok(())
    })
}

/// # Safety
/// `solution` must come from [`gsc_solve_faces`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gsc_solution_free(solution: *mut GscSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Number of cells; 0 for NULL.
///
/// # Safety
/// `solution` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_solution_len(solution: *const GscSolution) -> size_t {
    solution.as_ref().map_or(0, |s| s.solution.values.len())
}

/// Level of the cell graph; 0 for NULL.
///
/// # Safety
/// `solution` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_solution_level(solution: *const GscSolution) -> u32 {
    solution.as_ref().map_or(0, |s| s.level)
}

/// Dirichlet energy; NaN for NULL.
///
/// # Safety
/// `solution` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_solution_energy(solution: *const GscSolution) -> c_double {
    solution.as_ref().map_or(f64::NAN, |s| s.solution.energy)
}

/// Max-norm residual on free cells; NaN for NULL.
///
/// # Safety
/// `solution` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_solution_residual(solution: *const GscSolution) -> c_double {
    solution.as_ref().map_or(f64::NAN, |s| s.solution.residual)
}

/// Conjugate-gradient iterations; 0 for NULL.
///
/// # Safety
/// `solution` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gsc_solution_iterations(solution: *const GscSolution) -> size_t {
    solution.as_ref().map_or(0, |s| s.solution.iterations)
}

/// Copies the cell values, in cell order, into `buf` of length `len`.
///
/// # Safety
/// `solution` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gsc_solution_values(
    solution: *const GscSolution,
    buf: *mut c_double,
    len: size_t,
) -> GscStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let values = &s.solution.values;
        if len < values.len() {
            return Err((
                GscStatus::BufferTooSmall,
                format!("buffer holds {len} values, need {}", values.len()),
            ));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        Ok(())
    })
}

/// Resistance sequence over levels `1..=n_max` as JSON in `*json`.
///
/// # Safety
/// `spec` must be a live handle and `json` valid.
#[no_mangle]
pub unsafe extern "C" fn gsc_resistance_sequence_json(
    spec: *const GscSpec,
    n_max: u32,
    tol: c_double,
    budget: u64,
    json: *mut *mut c_char,
) -> GscStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if json.is_null() {
            return Err(null("json"));
        }
        let report = resistance_sequence(spec, n_max, tol, budget).map_err(core)?;
        *json = into_c(serde_json::to_string(&report).map_err(|e| core(e.into()))?);
        Ok(())
    })
}

/// Mean and standard error of the first-axis crossing time of `trials`
/// simple random walks at `level`.
///
/// # Safety
/// `spec` must be a live handle; `mean` and `std_error` valid.
#[no_mangle]
pub unsafe extern "C" fn gsc_walk_crossing(
    spec: *const GscSpec,
    level: u32,
    trials: u64,
    seed: u64,
    budget: u64,
    mean: *mut c_double,
    std_error: *mut c_double,
) -> GscStatus {
    guard(|| {
        let spec = spec_ref(spec)?;
        if mean.is_null() || std_error.is_null() {
            return Err(null("output"));
        }
        let stats = random_walk_crossing(spec, level, trials, seed, budget).map_err(core)?;
        *mean = stats.mean;
        *std_error = stats.std_error;
        Ok(())
    })
}
