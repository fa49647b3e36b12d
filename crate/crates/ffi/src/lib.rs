//! C ABI over the `cliquecolor` library.
//!
//! Graphs and colorings are opaque heap handles released with their `_free`
//! functions. Every fallible call returns a [`CcStatus`]; on failure the
//! message is available from [`cc_last_error_message`] on the same thread.
//! Vertex ids are 0-based and colors start at 1.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cliquecolor::coloring::{exact_clique_chromatic_number, is_valid, ExactBudget};
use cliquecolor::params::lambda_report;
use cliquecolor::upper::{color_and_repair, repair, Variant};
use cliquecolor::{Coloring, Error, Graph, ParamSchedule};

/// Result codes shared by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExhausted = 3,
    Internal = 4,
}

/// Opaque graph handle.
pub struct CcGraph(Graph);

/// Opaque coloring handle.
pub struct CcColoring(Coloring);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CcStatus {
    set_error(&e.to_string());
    if e.is_budget() {
        CcStatus::BudgetExhausted
    } else {
        CcStatus::InvalidArgument
    }
}

fn guard<F: FnOnce() -> CcStatus>(f: F) -> CcStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        CcStatus::Internal
    })
}

fn null() -> CcStatus {
    set_error("null pointer argument");
    CcStatus::NullPointer
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Samples `G(n, p)` deterministically from `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_sample(n: usize, p: f64, seed: u64, out: *mut *mut CcGraph) -> CcStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        match Graph::sample_gnp(n, p, seed) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(CcGraph(g)));
                CcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Builds a graph on `n` vertices from `m` edges `(us[i], vs[i])`.
///
/// # Safety
/// `us` and `vs` must point to `m` readable values each (or be null when
/// `m == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    out: *mut *mut CcGraph,
) -> CcStatus {
    guard(|| {
        if out.is_null() || (m > 0 && (us.is_null() || vs.is_null())) {
            return null();
        }
        let edges: Vec<(usize, usize)> = if m == 0 {
            Vec::new()
        } else {
            let us = std::slice::from_raw_parts(us, m);
            let vs = std::slice::from_raw_parts(vs, m);
            us.iter().copied().zip(vs.iter().copied()).collect()
        };
        match Graph::from_edges(n, &edges) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(CcGraph(g)));
                CcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_free(g: *mut CcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count; 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_vertex_count(g: *const CcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count; 0 for null.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_graph_edge_count(g: *const CcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Runs procedure A (`variant == 0`) or B (`variant == 1`) and repairs the
/// result with at most `repair_budget` recolors. A NaN `epsilon` selects the
/// value implied by `(n, p)`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cc_color_procedure(
    g: *const CcGraph,
    variant: u32,
    p: f64,
    epsilon: f64,
    repair_budget: usize,
    out: *mut *mut CcColoring,
) -> CcStatus {
    guard(|| {
        let Some(g) = g.as_ref() else { return null() };
        if out.is_null() {
            return null();
        }
        let variant = match variant {
            0 => Variant::A,
            1 => Variant::B,
            _ => {
                set_error("variant must be 0 (A) or 1 (B)");
                return CcStatus::InvalidArgument;
            }
        };
        let eps = (!epsilon.is_nan()).then_some(epsilon);
        match color_and_repair(&g.0, variant, p, eps, repair_budget) {
            Ok(run) => match run.repaired {
                Some(c) => {
                    *out = Box::into_raw(Box::new(CcColoring(c)));
                    CcStatus::Ok
                }
                None => {
                    set_error(&run.repair_error.unwrap_or_default());
                    CcStatus::BudgetExhausted
                }
            },
            Err(e) => status_of(&e),
        }
    })
}

/// Wraps `n` colors (each at least 1) in a coloring handle.
///
/// # Safety
/// `colors` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_coloring_from_array(colors: *const u32, n: usize, out: *mut *mut CcColoring) -> CcStatus {
    guard(|| {
        if out.is_null() || (n > 0 && colors.is_null()) {
            return null();
        }
        let v = if n == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(colors, n).to_vec()
        };
        if v.contains(&0) {
            set_error("colors start at 1");
            return CcStatus::InvalidArgument;
        }
        *out = Box::into_raw(Box::new(CcColoring(Coloring::new(v))));
        CcStatus::Ok
    })
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_coloring_len(c: *const CcColoring) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// Color of vertex `v`; 0 for null or out of range.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_coloring_get(c: *const CcColoring, v: usize) -> u32 {
    c.as_ref().and_then(|c| c.0.as_slice().get(v).copied()).unwrap_or(0)
}

/// Number of distinct colors; 0 for null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_coloring_palette_size(c: *const CcColoring) -> usize {
    c.as_ref().map_or(0, |c| c.0.palette_size())
}

/// Copies the colors into `buf`, which must hold `cc_coloring_len(c)` values.
///
/// # Safety
/// `c` must be live and `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn cc_coloring_copy(c: *const CcColoring, buf: *mut u32, len: usize) -> CcStatus {
    guard(|| {
        let Some(c) = c.as_ref() else { return null() };
        if buf.is_null() && len > 0 {
            return null();
        }
        let src = c.0.as_slice();
        if len < src.len() {
            set_error("buffer too small");
            return CcStatus::InvalidArgument;
        }
        if !src.is_empty() {
            ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
        }
        CcStatus::Ok
    })
}

/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_coloring_free(c: *mut CcColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Writes whether `c` leaves no inclusion-maximal clique of size at least 2
/// monochromatic.
///
/// # Safety
/// `g`, `c` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cc_coloring_is_valid(g: *const CcGraph, c: *const CcColoring, out: *mut bool) -> CcStatus {
    guard(|| {
        let (Some(g), Some(c)) = (g.as_ref(), c.as_ref()) else {
            return null();
        };
        if out.is_null() {
            return null();
        }
        match is_valid(&g.0, &c.0) {
            Ok(v) => {
                *out = v;
                CcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Repairs `c` into a new valid coloring using at most `budget` recolors.
///
/// # Safety
/// `g`, `c` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cc_repair(
    g: *const CcGraph,
    c: *const CcColoring,
    budget: usize,
    out: *mut *mut CcColoring,
) -> CcStatus {
    guard(|| {
        let (Some(g), Some(c)) = (g.as_ref(), c.as_ref()) else {
            return null();
        };
        if out.is_null() {
            return null();
        }
        match repair(&g.0, &c.0, budget) {
            Ok((fixed, _)) => {
                *out = Box::into_raw(Box::new(CcColoring(fixed)));
                CcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Exact clique chromatic number within `node_limit` search nodes.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cc_exact_clique_chromatic(g: *const CcGraph, node_limit: u64, out: *mut u32) -> CcStatus {
    guard(|| {
        let Some(g) = g.as_ref() else { return null() };
        if out.is_null() {
            return null();
        }
        match exact_clique_chromatic_number(&g.0, &ExactBudget { node_limit }) {
            Ok(r) => {
                *out = r.value;
                CcStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Parameter schedule and bound calculus for `(n, p)` as a JSON string,
/// released with [`cc_string_free`]. A NaN `epsilon` selects the default.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cc_schedule_json(n: f64, p: f64, epsilon: f64, out: *mut *mut c_char) -> CcStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        let eps = (!epsilon.is_nan()).then_some(epsilon);
        let sch = match ParamSchedule::build(n, p, eps) {
            Ok(s) => s,
            Err(e) => return status_of(&e),
        };
        let value = match lambda_report(&sch) {
            Ok(r) => serde_json::to_value(r),
            Err(e) => serde_json::to_value(serde_json::json!({ "schedule": sch, "lambda_error": e.to_string() })),
        };
        match value.and_then(|v| serde_json::to_string(&v)) {
            Ok(text) => {
                *out = CString::new(text).unwrap_or_default().into_raw();
                CcStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                CcStatus::Internal
            }
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
