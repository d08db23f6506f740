//! C ABI over `expander-minors`.
//!
//! Graphs and results live behind opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns an
//! [`EmStatus`]; on failure [`em_last_error_message`] describes the error
//! for the calling thread. Strings returned to C are owned by the caller and
//! must be released with [`em_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use expander_minors::graph::{average_degree, Graph};
use expander_minors::io::parse_graph;
use expander_minors::minor::{find_minor_pipeline, MinorModel, MinorPipelineResult};
use expander_minors::subdivision::{
    find_subdivision_pipeline, SubdivisionMode, SubdivisionModel, SubdivisionPipelineResult,
};
use expander_minors::verify::{verify_minor_model, verify_subdivision};
use expander_minors::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmStatus {
    Ok = 0,
    /// The search finished without a witness; the result handle is still set.
    NotFound = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// A construction stalled before producing a witness.
    Stalled = 4,
    NullPointer = 5,
    Internal = 6,
}

/// `K_t` subdivision search mode.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmSubdivisionMode {
    Subdivision = 0,
    /// Fall back to a `K_t` minor from exhaustive search on tiny graphs.
    MinorOrSubdivision = 1,
}

/// Opaque simple undirected graph.
pub struct EmGraph(Graph);

/// Opaque result of [`em_find_minor`].
pub struct EmMinorResult(MinorPipelineResult);

/// Opaque result of [`em_find_subdivision`].
pub struct EmSubdivisionResult(SubdivisionPipelineResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EmStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => EmStatus::Parse,
        Error::Stalled { .. } | Error::GraphExhausted(_) => EmStatus::Stalled,
        Error::Internal(_) | Error::Io(_) => EmStatus::Internal,
        _ => EmStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<EmStatus, (EmStatus, String)>) -> EmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside expander-minors".into());
            EmStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (EmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (EmStatus, String) {
    (EmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn graph_ref<'a>(g: *const EmGraph) -> Result<&'a Graph, (EmStatus, String)> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (EmStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (EmStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn em_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn em_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`u0, v0, u1, v1, ...`). Duplicate edges are merged.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values (may be NULL when
/// `edge_count` is 0); `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn em_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut EmGraph,
) -> EmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let pairs = flat.chunks_exact(2).map(|p| (p[0], p[1]));
        let g = Graph::from_edges(n, pairs).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EmGraph(g)));
        Ok(EmStatus::Ok)
    })
}

/// Parses an edge list (`u v` per line, 0-based) or a DIMACS graph.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn em_graph_parse(text: *const c_char, out: *mut *mut EmGraph) -> EmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = parse_graph(c_str(text, "text")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EmGraph(g)));
        Ok(EmStatus::Ok)
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn em_graph_free(g: *mut EmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn em_graph_vertex_count(g: *const EmGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn em_graph_edge_count(g: *const EmGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// `2|E|/|V|`, as a double.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn em_graph_average_degree(g: *const EmGraph, out: *mut f64) -> EmStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = average_degree(g).map_err(lib_err)?;
        *out = *d.numer() as f64 / *d.denom() as f64;
        Ok(EmStatus::Ok)
    })
}

/// Extracts an expander and looks for a small `K_t` minor in it. Sets `out`
/// on `EM_STATUS_OK` (model found) and `EM_STATUS_NOT_FOUND`.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn em_find_minor(
    g: *const EmGraph,
    t: usize,
    epsilon: f64,
    out: *mut *mut EmMinorResult,
) -> EmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = find_minor_pipeline(graph_ref(g)?, t, epsilon).map_err(lib_err)?;
        let status = if r.model.is_some() {
            EmStatus::Ok
        } else {
            EmStatus::NotFound
        };
        *out = Box::into_raw(Box::new(EmMinorResult(r)));
        Ok(status)
    })
}

fn model_of(r: &EmMinorResult) -> Option<&MinorModel> {
    r.0.model.as_ref()
}

/// Vertices in the model, 0 when there is none.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn em_minor_total_vertices(r: *const EmMinorResult) -> usize {
    r.as_ref()
        .and_then(model_of)
        .map_or(0, |m| m.total_vertices)
}

/// Number of branch sets, 0 when there is no model.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn em_minor_branch_set_count(r: *const EmMinorResult) -> usize {
    r.as_ref()
        .and_then(model_of)
        .map_or(0, |m| m.branch_sets.len())
}

/// Borrows branch set `index` as a sorted array of vertex ids. The array
/// lives as long as `r`.
///
/// # Safety
/// `r` must be a live result handle; `out_vertices` and `out_len` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn em_minor_branch_set(
    r: *const EmMinorResult,
    index: usize,
    out_vertices: *mut *const usize,
    out_len: *mut usize,
) -> EmStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        if out_vertices.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let model = model_of(r).ok_or((EmStatus::NotFound, "no model".to_string()))?;
        let set = model.branch_sets.get(index).ok_or_else(|| {
            (
                EmStatus::InvalidArgument,
                format!("branch set {index} out of range"),
            )
        })?;
        *out_vertices = set.as_slice().as_ptr();
        *out_len = set.len();
        Ok(EmStatus::Ok)
    })
}

/// The whole result as JSON; free with [`em_string_free`]. NULL on failure.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn em_minor_to_json(r: *const EmMinorResult) -> *mut c_char {
    let Some(r) = r.as_ref() else {
        set_error("result is null".into());
        return ptr::null_mut();
    };
    match serde_json::to_string(&r.0) {
        Ok(s) => to_c_string(s),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `r` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn em_minor_free(r: *mut EmMinorResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Extracts a small-set expander and looks for a small `K_t` subdivision.
/// Sets `out` on `EM_STATUS_OK` and `EM_STATUS_NOT_FOUND`.
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn em_find_subdivision(
    g: *const EmGraph,
    t: usize,
    epsilon: f64,
    mode: EmSubdivisionMode,
    out: *mut *mut EmSubdivisionResult,
) -> EmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let mode = match mode {
            EmSubdivisionMode::Subdivision => SubdivisionMode::Subdivision,
            EmSubdivisionMode::MinorOrSubdivision => SubdivisionMode::MinorOrSubdivision,
        };
        let r = find_subdivision_pipeline(graph_ref(g)?, t, epsilon, mode).map_err(lib_err)?;
        let found = r.subdivision.is_some() || r.minor.is_some();
        *out = Box::into_raw(Box::new(EmSubdivisionResult(r)));
        Ok(if found {
            EmStatus::Ok
        } else {
            EmStatus::NotFound
        })
    })
}

fn subdivision_of(r: &EmSubdivisionResult) -> Option<&SubdivisionModel> {
    r.0.subdivision.as_ref()
}

/// Vertices in the subdivision (or the fallback minor), 0 when there is none.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn em_subdivision_total_vertices(r: *const EmSubdivisionResult) -> usize {
    let Some(r) = r.as_ref() else { return 0 };
    match (subdivision_of(r), &r.0.minor) {
        (Some(s), _) => s.total_vertices,
        (None, Some(m)) => m.total_vertices,
        (None, None) => 0,
    }
}

/// Whether the result holds a subdivision (rather than a fallback minor or nothing).
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn em_subdivision_is_subdivision(r: *const EmSubdivisionResult) -> bool {
    r.as_ref().and_then(subdivision_of).is_some()
}

/// Borrows the corners of the subdivision. The array lives as long as `r`.
///
/// # Safety
/// `r` must be a live result handle; `out_corners` and `out_len` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn em_subdivision_corners(
    r: *const EmSubdivisionResult,
    out_corners: *mut *const usize,
    out_len: *mut usize,
) -> EmStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        if out_corners.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let s = subdivision_of(r).ok_or((EmStatus::NotFound, "no subdivision".to_string()))?;
        *out_corners = s.corners.as_ptr();
        *out_len = s.corners.len();
        Ok(EmStatus::Ok)
    })
}

/// Borrows the path joining corners `i < j`. The array lives as long as `r`.
///
/// # Safety
/// `r` must be a live result handle; `out_vertices` and `out_len` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn em_subdivision_path(
    r: *const EmSubdivisionResult,
    i: usize,
    j: usize,
    out_vertices: *mut *const usize,
    out_len: *mut usize,
) -> EmStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("result"))?;
        if out_vertices.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let s = subdivision_of(r).ok_or((EmStatus::NotFound, "no subdivision".to_string()))?;
        let path = s
            .edge_paths
            .get(&(i, j))
            .ok_or_else(|| (EmStatus::InvalidArgument, format!("no path {i}-{j}")))?;
        *out_vertices = path.vertices().as_ptr();
        *out_len = path.vertices().len();
        Ok(EmStatus::Ok)
    })
}

/// The whole result as JSON; free with [`em_string_free`]. NULL on failure.
///
/// # Safety
/// `r` must be NULL or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn em_subdivision_to_json(r: *const EmSubdivisionResult) -> *mut c_char {
    let Some(r) = r.as_ref() else {
        set_error("result is null".into());
        return ptr::null_mut();
    };
    match serde_json::to_string(&r.0) {
        Ok(s) => to_c_string(s),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `r` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn em_subdivision_free(r: *mut EmSubdivisionResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Checks a witness given as JSON against `g`. Accepts a minor model
/// (`branch_sets`), a subdivision (`corners`, `paths`), or a result from the
/// `*_to_json` functions. Writes the verdict to `out_valid`; a malformed
/// witness is an error, a wrong one is `false`.
///
/// # Safety
/// `g` must be a live graph handle, `json` a NUL-terminated string and
/// `out_valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn em_verify_json(
    g: *const EmGraph,
    json: *const c_char,
    out_valid: *mut bool,
) -> EmStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if out_valid.is_null() {
            return Err(null("out_valid"));
        }
        let parse = |e: serde_json::Error| (EmStatus::Parse, e.to_string());
        let mut doc: serde_json::Value =
            serde_json::from_str(c_str(json, "json")?).map_err(parse)?;
        for key in ["model", "subdivision"] {
            if doc.get(key).is_some_and(|v| !v.is_null()) {
                doc = doc[key].take();
                break;
            }
        }
        let report = if doc.get("branch_sets").is_some() {
            verify_minor_model(g, &serde_json::from_value(doc).map_err(parse)?)
        } else if doc.get("corners").is_some() {
            verify_subdivision(g, &serde_json::from_value(doc).map_err(parse)?)
        } else {
            return Err((EmStatus::InvalidArgument, "json holds no witness".into()));
        };
        *out_valid = report.valid;
        Ok(EmStatus::Ok)
    })
}
