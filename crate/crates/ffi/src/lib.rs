//! C ABI for `hermsrg`.
//!
//! Graphs are opaque `HsGraph` handles owned by the caller and released with
//! `hs_graph_free`. Every fallible call returns an `HsStatus`; on failure the
//! message is available from `hs_last_error_message` on the same thread.
//! Strings returned through out-parameters are freed with `hs_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hermsrg::constructions::{
    build_gamma_u, build_nu, build_unital_bm, build_unital_bt, build_unital_classical, standard_plane, BmParams,
};
use hermsrg::graphcore::{check_srg, decode_graph6, encode_graph6, Graph};
use hermsrg::oracles::{verify_lemma, LemmaId, LemmaStatus, VerifyOptions};
use hermsrg::switching::{build_switched, Variant};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// the library rejected the parameters or the construction failed
    ConstructionFailed = 3,
    /// `hs_graph_check_srg` on a graph that is not strongly regular
    NotStronglyRegular = 4,
    ParseError = 5,
    /// a lemma oracle found a counterexample (the report is still returned)
    VerificationFailed = 6,
    /// a sampling budget or deadline stopped the run before it finished
    Incomplete = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsVariant {
    Pencil = 0,
    Line = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsUnital {
    Classical = 0,
    BuekenhoutMetz = 1,
    BuekenhoutTits = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HsSrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

/// Opaque graph handle.
pub struct HsGraph {
    graph: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: HsStatus, msg: impl Into<String>) -> HsStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into `HsStatus::Panic`.
fn guard(f: impl FnOnce() -> HsStatus) -> HsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(HsStatus::Panic, msg)
        }
    }
}

fn give_graph(out: *mut *mut HsGraph, graph: Graph) -> HsStatus {
    // SAFETY: callers check `out` for null first
    unsafe { *out = Box::into_raw(Box::new(HsGraph { graph })) };
    HsStatus::Ok
}

fn give_string(out: *mut *mut c_char, s: String) -> HsStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers check `out` for null first
            unsafe { *out = c.into_raw() };
            HsStatus::Ok
        }
        Err(_) => fail(HsStatus::Panic, "string contains a NUL byte"),
    }
}

unsafe fn graph_ref<'a>(g: *const HsGraph) -> Option<&'a Graph> {
    g.as_ref().map(|h| &h.graph)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from this thread.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// NU(n + 1, q^2): non-isotropic points of PG(n, q^2), adjacent when they
/// span a tangent line.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_build_nu(n: u32, q: u32, out: *mut *mut HsGraph) -> HsStatus {
    guard(|| {
        if out.is_null() {
            return fail(HsStatus::NullPointer, "out is NULL");
        }
        match build_nu(n as usize, q) {
            Ok(g) => give_graph(out, g),
            Err(e) => fail(HsStatus::ConstructionFailed, e.to_string()),
        }
    })
}

/// The switched mate of NU(n + 1, q^2), n >= 4.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_build_switched(n: u32, q: u32, variant: HsVariant, out: *mut *mut HsGraph) -> HsStatus {
    guard(|| {
        if out.is_null() {
            return fail(HsStatus::NullPointer, "out is NULL");
        }
        let v = match variant {
            HsVariant::Pencil => Variant::Pencil,
            HsVariant::Line => Variant::Line,
        };
        match build_switched(n as usize, q, v) {
            Ok(s) => give_graph(out, s.graph),
            Err(e) => fail(HsStatus::ConstructionFailed, e.to_string()),
        }
    })
}

/// Graph of a unital of PG(2, q^2). `alpha_idx` and `beta_idx` are field table
/// indices (0 is zero, k is the (k-1)-th power of the primitive element) and
/// are only read for Buekenhout-Metz unitals.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_build_gamma_u(
    q: u32,
    unital: HsUnital,
    alpha_idx: u8,
    beta_idx: u8,
    out: *mut *mut HsGraph,
) -> HsStatus {
    guard(|| {
        if out.is_null() {
            return fail(HsStatus::NullPointer, "out is NULL");
        }
        let built = standard_plane(q).and_then(|plane| {
            let u = match unital {
                HsUnital::Classical => build_unital_classical(plane)?,
                HsUnital::BuekenhoutMetz => build_unital_bm(plane, BmParams::from_indices(alpha_idx, beta_idx))?,
                HsUnital::BuekenhoutTits => build_unital_bt(plane)?,
            };
            build_gamma_u(&u)
        });
        match built {
            Ok(g) => give_graph(out, g),
            Err(e) => fail(HsStatus::ConstructionFailed, e.to_string()),
        }
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `g` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_free(g: *mut HsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_vertex_count(g: *const HsGraph) -> usize {
    graph_ref(g).map_or(0, Graph::n)
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_has_edge(g: *const HsGraph, i: usize, j: usize, out: *mut bool) -> HsStatus {
    guard(|| {
        let (Some(g), false) = (graph_ref(g), out.is_null()) else {
            return fail(HsStatus::NullPointer, "graph or out is NULL");
        };
        if i >= g.n() || j >= g.n() {
            return fail(HsStatus::InvalidArgument, format!("vertex out of range 0..{}", g.n()));
        }
        *out = g.has_edge(i, j);
        HsStatus::Ok
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_degree(g: *const HsGraph, v: usize, out: *mut usize) -> HsStatus {
    guard(|| {
        let (Some(g), false) = (graph_ref(g), out.is_null()) else {
            return fail(HsStatus::NullPointer, "graph or out is NULL");
        };
        if v >= g.n() {
            return fail(HsStatus::InvalidArgument, format!("vertex out of range 0..{}", g.n()));
        }
        *out = g.degree(v);
        HsStatus::Ok
    })
}

/// Writes the parameters if the graph is strongly regular; otherwise returns
/// `NotStronglyRegular` with the offending vertices in the error message.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_check_srg(g: *const HsGraph, out: *mut HsSrgParams) -> HsStatus {
    guard(|| {
        let (Some(g), false) = (graph_ref(g), out.is_null()) else {
            return fail(HsStatus::NullPointer, "graph or out is NULL");
        };
        match check_srg(g) {
            Ok(p) => {
                *out = HsSrgParams { v: p.v, k: p.k, lambda: p.lambda, mu: p.mu };
                HsStatus::Ok
            }
            Err(f) => fail(HsStatus::NotStronglyRegular, f.to_string()),
        }
    })
}

/// graph6 encoding without a trailing newline.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_to_graph6(g: *const HsGraph, out: *mut *mut c_char) -> HsStatus {
    guard(|| {
        let (Some(g), false) = (graph_ref(g), out.is_null()) else {
            return fail(HsStatus::NullPointer, "graph or out is NULL");
        };
        give_string(out, String::from_utf8(encode_graph6(g)).expect("graph6 is ASCII"))
    })
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_graph_from_graph6(text: *const c_char, out: *mut *mut HsGraph) -> HsStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(HsStatus::NullPointer, "text or out is NULL");
        }
        match decode_graph6(CStr::from_ptr(text).to_bytes()) {
            Ok(g) => give_graph(out, g),
            Err(e) => fail(HsStatus::ParseError, e.to_string()),
        }
    })
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs one lemma oracle and writes its JSON report. `budget` 0 means the
/// lemma's default. The report is written whenever the oracle ran; the status
/// is then `VerificationFailed` on a mismatch and `Incomplete` for a partial
/// run.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_verify_lemma_json(
    id: *const c_char,
    q: u32,
    budget: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> HsStatus {
    guard(|| {
        if id.is_null() || out_json.is_null() {
            return fail(HsStatus::NullPointer, "id or out_json is NULL");
        }
        let Ok(name) = CStr::from_ptr(id).to_str() else {
            return fail(HsStatus::InvalidArgument, "id is not UTF-8");
        };
        let lemma: LemmaId = match name.parse() {
            Ok(l) => l,
            Err(e) => return fail(HsStatus::InvalidArgument, format!("{e}")),
        };
        let opts = VerifyOptions { sample_budget: (budget > 0).then_some(budget), seed, deadline: None };
        let report = match verify_lemma(lemma, q, &opts) {
            Ok(r) => r.without_timing(),
            Err(e) => return fail(HsStatus::InvalidArgument, e.to_string()),
        };
        let json = serde_json::to_string(&report).expect("reports serialize");
        let status = give_string(out_json, json);
        match report.status {
            _ if status != HsStatus::Ok => status,
            LemmaStatus::Pass => HsStatus::Ok,
            LemmaStatus::Fail => fail(HsStatus::VerificationFailed, format!("{name} failed at q = {q}")),
            LemmaStatus::Partial => fail(HsStatus::Incomplete, format!("{name} at q = {q} stopped early")),
        }
    })
}
