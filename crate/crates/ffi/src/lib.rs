//! C ABI over `hdx`.
//!
//! Graphs and complexes cross the boundary as opaque handles owned by the
//! caller and released with the matching `_free` function. Every function
//! returns an [`HdxStatus`]; on failure a message is available from
//! [`hdx_last_error_message`] on the same thread. Strings returned through
//! `out` parameters are NUL-terminated UTF-8 and must be released with
//! [`hdx_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hdx::complex::json::{from_json, to_json, ComplexDocument};
use hdx::expansion::{self, VerifyOptions};
use hdx::{walks, Complex, ComplexKind, Error, GraphKind, WeightedGraph};

/// Opaque weighted graph.
pub struct HdxGraph {
    inner: WeightedGraph,
}

/// Opaque weighted complex (Z or Q).
pub struct HdxComplex {
    inner: Complex,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed edge list or complex document.
    Parse = 3,
    /// The graph is disconnected, has a self-loop, or similar.
    InvalidGraph = 4,
    /// The predicted build or eigensolve size exceeds its cap.
    SizeCap = 5,
    /// Eigensolver failure or a non-reversible operator.
    Numerical = 6,
    Io = 7,
    /// `hdx_verify` ran but at least one check failed.
    ChecksFailed = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdxGraphKind {
    Cycle = 0,
    Complete = 1,
    RandomRegular = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdxComplexKind {
    Z = 0,
    Q = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = CString::new(message.into().replace('\0', " ")).expect("NUL removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(error: &Error) -> HdxStatus {
    match error {
        Error::Parse { .. } | Error::MalformedComplex(_) | Error::Json(_) => HdxStatus::Parse,
        Error::SelfLoop { .. }
        | Error::DuplicateEdge { .. }
        | Error::NonPositiveWeight { .. }
        | Error::Disconnected { .. }
        | Error::NonUnitWeights => HdxStatus::InvalidGraph,
        Error::SizeCap { .. } | Error::EigenCap { .. } => HdxStatus::SizeCap,
        Error::EigenNonConvergence { .. }
        | Error::NotReversible(_)
        | Error::SymmetrizationResidual { .. } => HdxStatus::Numerical,
        Error::Io(_) => HdxStatus::Io,
        _ => HdxStatus::InvalidArgument,
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<HdxStatus, (HdxStatus, String)>) -> HdxStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            HdxStatus::Panic
        }
    }
}

fn lift(error: Error) -> (HdxStatus, String) {
    (status_of(&error), error.to_string())
}

fn null(name: &str) -> (HdxStatus, String) {
    (HdxStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, (HdxStatus, String)> {
    if ptr.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| (HdxStatus::InvalidArgument, format!("`{name}` is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<HdxStatus, (HdxStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(HdxStatus::Ok)
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<HdxStatus, (HdxStatus, String)> {
    let c = CString::new(text).map_err(|_| (HdxStatus::InvalidArgument, "output contains NUL".to_string()))?;
    write_out(out, c.into_raw())
}

unsafe fn graph_ref<'a>(g: *const HdxGraph) -> Result<&'a WeightedGraph, (HdxStatus, String)> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("graph"))
}

unsafe fn complex_ref<'a>(c: *const HdxComplex) -> Result<&'a Complex, (HdxStatus, String)> {
    c.as_ref().map(|c| &c.inner).ok_or_else(|| null("complex"))
}

fn level_arg(k: i64) -> Result<isize, (HdxStatus, String)> {
    isize::try_from(k).map_err(|_| (HdxStatus::InvalidArgument, format!("level {k} out of range")))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn hdx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn hdx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hdx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an edge list (`u v [weight]` per line, `#` comments).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_graph_from_edge_list(text: *const c_char, out: *mut *mut HdxGraph) -> HdxStatus {
    guard(|| {
        let g = hdx::graphs::parse_edge_list(read_str(text, "text")?).map_err(lift)?;
        write_out(out, Box::into_raw(Box::new(HdxGraph { inner: g })))
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_graph_load(path: *const c_char, out: *mut *mut HdxGraph) -> HdxStatus {
    guard(|| {
        let g = hdx::load_graph(read_str(path, "path")?).map_err(lift)?;
        write_out(out, Box::into_raw(Box::new(HdxGraph { inner: g })))
    })
}

/// Deterministic generator. `degree` is read only for random-regular graphs.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_graph_generate(
    kind: HdxGraphKind,
    n: usize,
    degree: usize,
    seed: u64,
    out: *mut *mut HdxGraph,
) -> HdxStatus {
    guard(|| {
        let kind = match kind {
            HdxGraphKind::Cycle => GraphKind::Cycle,
            HdxGraphKind::Complete => GraphKind::Complete,
            HdxGraphKind::RandomRegular => GraphKind::RandomRegular,
        };
        let g = hdx::gen_graph(kind, n, Some(degree), seed).map_err(lift)?;
        write_out(out, Box::into_raw(Box::new(HdxGraph { inner: g })))
    })
}

/// # Safety
/// `graph` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_graph_vertex_count(graph: *const HdxGraph, out: *mut usize) -> HdxStatus {
    guard(|| write_out(out, graph_ref(graph)?.n()))
}

/// # Safety
/// `graph` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_graph_edge_count(graph: *const HdxGraph, out: *mut usize) -> HdxStatus {
    guard(|| write_out(out, graph_ref(graph)?.edge_count()))
}

/// `1 - omega_2` of the random-walk matrix of the graph.
///
/// # Safety
/// `graph` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_graph_spectral_gap(graph: *const HdxGraph, out: *mut f64) -> HdxStatus {
    guard(|| write_out(out, hdx::graph_spectrum(graph_ref(graph)?).map_err(lift)?.gap))
}

/// # Safety
/// `graph` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hdx_graph_free(graph: *mut HdxGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Builds Z or Q on `graph` with dimension `dim` (H) and `colors` (s).
///
/// # Safety
/// `graph` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_build(
    graph: *const HdxGraph,
    kind: HdxComplexKind,
    dim: usize,
    colors: usize,
    out: *mut *mut HdxComplex,
) -> HdxStatus {
    guard(|| {
        let kind = match kind {
            HdxComplexKind::Z => ComplexKind::Z,
            HdxComplexKind::Q => ComplexKind::Q,
        };
        let c = hdx::build(kind, graph_ref(graph)?, dim, colors, &Default::default()).map_err(lift)?;
        write_out(out, Box::into_raw(Box::new(HdxComplex { inner: c })))
    })
}

/// Loads a complex document; weights are re-checked for balance.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_from_json(json: *const c_char, out: *mut *mut HdxComplex) -> HdxStatus {
    guard(|| {
        let doc: ComplexDocument = serde_json::from_str(read_str(json, "json")?).map_err(|e| lift(e.into()))?;
        let c = from_json(&doc).map_err(lift)?;
        write_out(out, Box::into_raw(Box::new(HdxComplex { inner: c })))
    })
}

/// # Safety
/// `complex` must be a live handle or NULL; `out` must be writable. The
/// string is released with `hdx_string_free`.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_to_json(complex: *const HdxComplex, out: *mut *mut c_char) -> HdxStatus {
    guard(|| {
        let text = serde_json::to_string(&to_json(complex_ref(complex)?)).map_err(|e| lift(e.into()))?;
        write_string(out, text)
    })
}

/// Number of faces of dimension `level` (`-1..=H`).
///
/// # Safety
/// `complex` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_face_count(complex: *const HdxComplex, level: i64, out: *mut usize) -> HdxStatus {
    guard(|| {
        let c = complex_ref(complex)?;
        write_out(out, c.level(level_arg(level)?).map_err(lift)?.len())
    })
}

/// `nu^(k)`: minimum link 1-skeleton gap over faces of dimension `k`
/// (`0..=H-2`), or the 1-skeleton gap for `k = -1`.
///
/// # Safety
/// `complex` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_local_expansion(complex: *const HdxComplex, k: i64, out: *mut f64) -> HdxStatus {
    guard(|| {
        let c = complex_ref(complex)?;
        let nu = match level_arg(k)? {
            -1 => expansion::global_expansion(c).map_err(lift)?.nu,
            k => expansion::local_sweep(c, k).map_err(lift)?.nu,
        };
        write_out(out, nu)
    })
}

/// Spectral gap of the up-down walk at level `k` (`0..=H-1`).
///
/// # Safety
/// `complex` must be a live handle or NULL; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_updown_gap(complex: *const HdxComplex, k: i64, out: *mut f64) -> HdxStatus {
    guard(|| {
        let c = complex_ref(complex)?;
        let k = level_arg(k)?;
        let w = walks::updown(c, k).map_err(lift)?;
        let pi = walks::stationary(c, k).map_err(lift)?;
        write_out(out, walks::operator_spectrum(&w, &pi).map_err(lift)?.gap)
    })
}

/// # Safety
/// `complex` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hdx_complex_free(complex: *mut HdxComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Runs the verification harness on `graph`. Writes the JSON report to
/// `report_json` and returns `HDX_STATUS_OK` if every non-skipped check
/// passes, `HDX_STATUS_CHECKS_FAILED` otherwise. With `explore` set,
/// parameters outside `H >= 2, s >= 2H, n >= 4` are reported, not refused.
///
/// # Safety
/// `graph` must be a live handle or NULL; `report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hdx_verify(
    graph: *const HdxGraph,
    dim: usize,
    colors: usize,
    tolerance: f64,
    explore: bool,
    report_json: *mut *mut c_char,
) -> HdxStatus {
    guard(|| {
        if report_json.is_null() {
            return Err(null("report_json"));
        }
        let options = VerifyOptions { tolerance, explore };
        let report = expansion::verify_theorems(graph_ref(graph)?, dim, colors, &options).map_err(lift)?;
        let text = serde_json::to_string_pretty(&report).map_err(|e| lift(e.into()))?;
        write_string(report_json, text)?;
        Ok(if report.pass { HdxStatus::Ok } else { HdxStatus::ChecksFailed })
    })
}
