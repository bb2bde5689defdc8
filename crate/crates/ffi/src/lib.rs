//! C interface to `rwgraph`.
//!
//! Permutations and graphs are opaque handles created by `rw_*_parse` /
//! `rw_*_build` and released with the matching `rw_*_free`. Every fallible
//! call returns an [`RwStatus`]; on failure `rw_last_error_message` describes
//! the problem. Strings handed out by the library must be released with
//! `rw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rwgraph::formulas::brute_force;
use rwgraph::reproduce::{reproduce, Artifact};
use rwgraph::stats::{classify_brute, Class};
use rwgraph::{build_g_capped, count_reduced_words, enumerate_capped, EdgeKind, Error, Permutation, WordGraph};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    TooLarge = 4,
    Precondition = 5,
    Panic = 6,
}

/// Which of the three graphs to export.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RwGraphKind {
    /// Reduced words with both kinds of edges.
    G = 0,
    /// Quotient by commutation edges.
    C = 1,
    /// Quotient by long braid edges.
    B = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RwClass {
    BelowLower = 0,
    AtLower = 1,
    Interior = 2,
    AtUpper = 3,
    AboveUpper = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RwDiameters {
    pub g: u64,
    pub c: u64,
    pub b: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RwReport {
    pub diam_g: u64,
    pub i2: u64,
    pub i3: u64,
    pub l2: u64,
    pub classification: RwClass,
}

/// Opaque permutation handle.
pub struct RwPermutation(Permutation);

/// Opaque handle to the graph of reduced words of a permutation.
pub struct RwGraph(WordGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(RwStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) | Error::InvalidPermutation { .. } | Error::DuplicateEntry(_) | Error::LetterOutOfRange { .. } => {
                RwStatus::Parse
            }
            Error::TooLarge { .. } => RwStatus::TooLarge,
            _ => RwStatus::Precondition,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            RwStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            RwStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(RwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(RwStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Fail(RwStatus::Precondition, "output contains a nul byte".into()))?;
    out.write(c.into_raw());
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL after a
/// successful call. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn rw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, human-readable name of a status code.
#[no_mangle]
pub extern "C" fn rw_status_name(status: RwStatus) -> *const c_char {
    let s: &'static CStr = match status {
        RwStatus::Ok => c"ok",
        RwStatus::NullPointer => c"null pointer",
        RwStatus::InvalidUtf8 => c"invalid UTF-8",
        RwStatus::Parse => c"parse error",
        RwStatus::TooLarge => c"too large",
        RwStatus::Precondition => c"precondition violated",
        RwStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn rw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses one-line notation such as `"4231"` or `"10 2 3 4 5 6 7 8 9 1"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_perm_parse(text: *const c_char, out: *mut *mut RwPermutation) -> RwStatus {
    guard(|| {
        let pi: Permutation = str_arg(text, "text")?.parse()?;
        write_out(out, Box::into_raw(Box::new(RwPermutation(pi))))
    })
}

/// # Safety
/// `perm` must come from `rw_perm_parse` and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rw_perm_free(perm: *mut RwPermutation) {
    if !perm.is_null() {
        drop(Box::from_raw(perm));
    }
}

/// Number of entries; 0 for NULL.
///
/// # Safety
/// `perm` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rw_perm_size(perm: *const RwPermutation) -> usize {
    perm.as_ref().map_or(0, |p| p.0.size())
}

/// Number of inversions; 0 for NULL.
///
/// # Safety
/// `perm` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rw_perm_length(perm: *const RwPermutation) -> usize {
    perm.as_ref().map_or(0, |p| p.0.length())
}

/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_perm_to_string(perm: *const RwPermutation, out: *mut *mut c_char) -> RwStatus {
    guard(|| write_string(out, handle(perm, "perm")?.0.to_string()))
}

/// Number of reduced words; `RW_STATUS_TOO_LARGE` if it does not fit in 64 bits.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_count_reduced_words(perm: *const RwPermutation, out: *mut u64) -> RwStatus {
    guard(|| {
        let n = count_reduced_words(&handle(perm, "perm")?.0);
        let n = u64::try_from(n).map_err(|_| Fail(RwStatus::TooLarge, format!("{n} reduced words do not fit in 64 bits")))?;
        write_out(out, n)
    })
}

/// Reduced words, sorted, one per line.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_enumerate(perm: *const RwPermutation, cap: usize, out: *mut *mut c_char) -> RwStatus {
    guard(|| {
        let words = enumerate_capped(&handle(perm, "perm")?.0, cap)?;
        let text: String = words.iter().map(|w| format!("{w}\n")).collect();
        write_string(out, text)
    })
}

/// Builds the graph of reduced words, refusing more than `cap` vertices.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_graph_build(perm: *const RwPermutation, cap: usize, out: *mut *mut RwGraph) -> RwStatus {
    guard(|| {
        let g = build_g_capped(&handle(perm, "perm")?.0, cap)?;
        write_out(out, Box::into_raw(Box::new(RwGraph(g))))
    })
}

/// # Safety
/// `graph` must come from `rw_graph_build` and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rw_graph_free(graph: *mut RwGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rw_graph_vertex_count(graph: *const RwGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rw_graph_edge_count(graph: *const RwGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Diameters of the graph and of both quotients.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_graph_diameters(graph: *const RwGraph, cap: usize, out: *mut RwDiameters) -> RwStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let d = RwDiameters {
            g: g.diameter_capped(cap)? as u64,
            c: g.contract(EdgeKind::Commutation).diameter_capped(cap)? as u64,
            b: g.contract(EdgeKind::LongBraid).diameter_capped(cap)? as u64,
        };
        write_out(out, d)
    })
}

fn export(g: &WordGraph, kind: RwGraphKind, json: bool) -> String {
    macro_rules! emit {
        ($graph:expr, $name:expr) => {
            if json {
                format!("{}\n", $graph.to_json())
            } else {
                $graph.to_dot($name)
            }
        };
    }
    match kind {
        RwGraphKind::G => emit!(g, "G"),
        RwGraphKind::C => emit!(g.contract(EdgeKind::Commutation), "C"),
        RwGraphKind::B => emit!(g.contract(EdgeKind::LongBraid), "B"),
    }
}

/// Graphviz DOT text of the graph or one of its quotients.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_graph_to_dot(graph: *const RwGraph, kind: RwGraphKind, out: *mut *mut c_char) -> RwStatus {
    guard(|| write_string(out, export(&handle(graph, "graph")?.0, kind, false)))
}

/// JSON `{"edges": [[u, v, "C"|"B"], ...], "vertices": [...]}`.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_graph_to_json(graph: *const RwGraph, kind: RwGraphKind, out: *mut *mut c_char) -> RwStatus {
    guard(|| write_string(out, export(&handle(graph, "graph")?.0, kind, true)))
}

/// Brute-force diameter triple of a permutation.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_brute_force(perm: *const RwPermutation, cap: usize, out: *mut RwDiameters) -> RwStatus {
    guard(|| {
        let t = brute_force(&handle(perm, "perm")?.0, cap, cap)?;
        write_out(out, RwDiameters { g: t.g, c: t.c, b: t.b })
    })
}

/// Diameter of G compared with the bounds `|L2| / 2` and `|L2|`.
///
/// # Safety
/// `perm` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_classify(perm: *const RwPermutation, cap: usize, out: *mut RwReport) -> RwStatus {
    guard(|| {
        let r = classify_brute(&handle(perm, "perm")?.0, cap)?;
        let class = match r.class {
            Class::BelowLower => RwClass::BelowLower,
            Class::AtLower => RwClass::AtLower,
            Class::Interior => RwClass::Interior,
            Class::AtUpper => RwClass::AtUpper,
            Class::AboveUpper => RwClass::AboveUpper,
        };
        write_out(
            out,
            RwReport {
                diam_g: r.diam_g,
                i2: r.l2.i2,
                i3: r.l2.i3,
                l2: r.l2.l2,
                classification: class,
            },
        )
    })
}

/// Regenerates a bundled artifact (`"fig2"`, `"fig3"`, `"fig4"`, `"table2"`)
/// and stores 1 in `matches` if it agrees with the golden file, else 0.
///
/// # Safety
/// `name` must be a nul-terminated string; `matches` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rw_reproduce(name: *const c_char, matches: *mut i32) -> RwStatus {
    guard(|| {
        let artifact: Artifact = str_arg(name, "name")?.parse()?;
        let r = reproduce(artifact)?;
        write_out(matches, i32::from(r.matches()))
    })
}
