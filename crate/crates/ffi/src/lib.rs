//! C ABI over `probe-lab`.
//!
//! Objects are opaque handles created by `pl_*_new` / `pl_*_load` style
//! functions and released with the matching `pl_*_free`. Every fallible
//! function returns a [`PlStatus`]; on failure, [`pl_last_error`] gives a
//! message for the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use probe_lab::learning::Model;
use probe_lab::planner::{exact_optimal, export_ilp, ExactConfig};
use probe_lab::sampler::stream_rng;
use probe_lab::{Error, Graph, IncompleteView, NodeColor, ProbeTrace, Strategy};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidArgument = 5,
    NodeOutOfRange = 6,
    NotGray = 7,
    UnknownStrategy = 8,
    Model = 9,
    SizeCap = 10,
    Numeric = 11,
    Invariant = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

/// Node state in a view.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlColor {
    Black = 0,
    Gray = 1,
    White = 2,
}

/// Ground-truth graph.
pub struct PlGraph {
    inner: Arc<Graph>,
}

/// Incomplete view of a graph.
pub struct PlView {
    inner: IncompleteView,
}

/// Sequence of probes with their new-node counts.
pub struct PlTrace {
    inner: ProbeTrace,
}

/// Trained probing model.
pub struct PlModel {
    inner: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PlStatus {
    match e {
        Error::Parse { .. } => PlStatus::Parse,
        Error::Io(_) => PlStatus::Io,
        Error::NodeOutOfRange { .. } => PlStatus::NodeOutOfRange,
        Error::NotGray { .. } | Error::InfeasibleSequence { .. } => PlStatus::NotGray,
        Error::UnknownStrategy(_) => PlStatus::UnknownStrategy,
        Error::ModelFormat(_) | Error::Training(_) => PlStatus::Model,
        Error::SizeCap { .. } => PlStatus::SizeCap,
        Error::NonConvergence { .. } => PlStatus::Numeric,
        Error::Invariant(_) => PlStatus::Invariant,
        _ => PlStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> PlStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

fn fail_with(status: PlStatus, message: &str) -> PlStatus {
    set_error(message.to_string());
    status
}

/// Runs `f`, converting panics into [`PlStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), PlStatus>) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PlStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            PlStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, PlStatus> {
    p.as_ref().ok_or_else(|| fail_with(PlStatus::NullArgument, &format!("{what} is null")))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, PlStatus> {
    p.as_mut().ok_or_else(|| fail_with(PlStatus::NullArgument, &format!("{what} is null")))
}

unsafe fn string_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, PlStatus> {
    if p.is_null() {
        return Err(fail_with(PlStatus::NullArgument, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail_with(PlStatus::InvalidUtf8, &format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], PlStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail_with(PlStatus::NullArgument, &format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), PlStatus> {
    if out.is_null() {
        return Err(fail_with(PlStatus::NullArgument, &format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on nodes `0..node_count` from `edge_count` pairs stored
/// flat in `edges` (`u0, v0, u1, v1, ...`).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_graph_from_edges(
    node_count: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut PlGraph,
) -> PlStatus {
    guard(|| {
        let flat = slice_arg(edges, edge_count.checked_mul(2).ok_or(PlStatus::InvalidArgument)?, "edges")?;
        let pairs = flat.chunks_exact(2).map(|c| (c[0], c[1]));
        let graph = Graph::try_from_edges(node_count, pairs).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(PlGraph { inner: Arc::new(graph) })), "out")
    })
}

/// Loads a whitespace-separated edge list (`#` comments allowed).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_graph_load(path: *const c_char, out: *mut *mut PlGraph) -> PlStatus {
    guard(|| {
        let path = string_arg(path, "path")?;
        let graph = Graph::read_edge_list_file(path).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(PlGraph { inner: Arc::new(graph) })), "out")
    })
}

/// # Safety
/// `graph` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_graph_node_count(graph: *const PlGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.node_count())
}

/// # Safety
/// `graph` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_graph_edge_count(graph: *const PlGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// # Safety
/// `graph` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pl_graph_free(graph: *mut PlGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Creates a view in which the `seed_count` nodes of `seeds` are probed.
/// The view keeps its own reference to the graph.
///
/// # Safety
/// `graph` must be live, `seeds` must hold `seed_count` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_view_new(
    graph: *const PlGraph,
    seeds: *const usize,
    seed_count: usize,
    out: *mut *mut PlView,
) -> PlStatus {
    guard(|| {
        let graph = borrow(graph, "graph")?;
        let seeds = slice_arg(seeds, seed_count, "seeds")?;
        let view = IncompleteView::new(Arc::clone(&graph.inner), seeds).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(PlView { inner: view })), "out")
    })
}

/// # Safety
/// `view` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_view_clone(view: *const PlView, out: *mut *mut PlView) -> PlStatus {
    guard(|| {
        let view = borrow(view, "view")?;
        write_out(out, Box::into_raw(Box::new(PlView { inner: view.inner.clone() })), "out")
    })
}

/// Probes a Gray node; `new_nodes` (optional) receives the number of newly
/// observed nodes.
///
/// # Safety
/// `view` must be live; `new_nodes` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_view_probe(view: *mut PlView, node: usize, new_nodes: *mut usize) -> PlStatus {
    guard(|| {
        let view = borrow_mut(view, "view")?;
        let n = view.inner.probe(node).map_err(fail)?;
        if !new_nodes.is_null() {
            new_nodes.write(n);
        }
        Ok(())
    })
}

/// # Safety
/// `view` must be live; each output pointer writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_view_counts(
    view: *const PlView,
    black: *mut usize,
    gray: *mut usize,
    white: *mut usize,
) -> PlStatus {
    guard(|| {
        let v = &borrow(view, "view")?.inner;
        for (p, value) in [(black, v.black_count()), (gray, v.gray_count()), (white, v.white_count())] {
            if !p.is_null() {
                p.write(value);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `view` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_view_color(view: *const PlView, node: usize, out: *mut PlColor) -> PlStatus {
    guard(|| {
        let v = &borrow(view, "view")?.inner;
        v.graph().check_node(node).map_err(fail)?;
        let color = match v.color(node) {
            NodeColor::Black => PlColor::Black,
            NodeColor::Gray => PlColor::Gray,
            NodeColor::White => PlColor::White,
        };
        write_out(out, color, "out")
    })
}

/// Copies the Gray node ids (ascending) into `buf`. `len` always receives
/// the full count; if it exceeds `capacity`, nothing is copied and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `view` must be live, `buf` must hold `capacity` values (may be NULL when
/// `capacity` is 0), `len` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_view_gray_nodes(
    view: *const PlView,
    buf: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> PlStatus {
    guard(|| {
        let grays = borrow(view, "view")?.inner.gray_nodes();
        write_out(len, grays.len(), "len")?;
        if grays.len() > capacity {
            return Err(fail_with(PlStatus::BufferTooSmall, "buffer too small for gray nodes"));
        }
        if !grays.is_empty() {
            if buf.is_null() {
                return Err(fail_with(PlStatus::NullArgument, "buf is null"));
            }
            ptr::copy_nonoverlapping(grays.as_ptr(), buf, grays.len());
        }
        Ok(())
    })
}

/// Nodes observed since the view was created.
///
/// # Safety
/// `view` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_view_new_nodes(view: *const PlView) -> usize {
    view.as_ref().map_or(0, |v| v.inner.new_nodes())
}

/// Fingerprint of the node colors.
///
/// # Safety
/// `view` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_view_checksum(view: *const PlView) -> u64 {
    view.as_ref().map_or(0, |v| v.inner.checksum())
}

/// # Safety
/// `view` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pl_view_free(view: *mut PlView) {
    if !view.is_null() {
        drop(Box::from_raw(view));
    }
}

/// Loads a model file written by the `train` command.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_model_load(path: *const c_char, out: *mut *mut PlModel) -> PlStatus {
    guard(|| {
        let path = string_arg(path, "path")?;
        let text = std::fs::read_to_string(path).map_err(|e| fail(Error::Io(e)))?;
        let model = Model::from_text(&text).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(PlModel { inner: model })), "out")
    })
}

/// # Safety
/// `model` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pl_model_free(model: *mut PlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Runs the named strategy (case-insensitive, e.g. "DEG", "TADA-H",
/// "LINREG") for budget `k`, probing `view` in place. `seed` drives RAND;
/// `model` may be NULL unless the strategy is learned.
///
/// # Safety
/// `view` must be live, `name` NUL-terminated, `model` live or NULL, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_run_strategy(
    view: *mut PlView,
    name: *const c_char,
    k: usize,
    seed: u64,
    model: *const PlModel,
    out: *mut *mut PlTrace,
) -> PlStatus {
    guard(|| {
        let view = borrow_mut(view, "view")?;
        let strategy: Strategy = string_arg(name, "name")?.parse().map_err(fail)?;
        let model = model.as_ref().map(|m| &m.inner);
        let mut rng = stream_rng(seed, 0);
        let trace = strategy.run(&mut view.inner, k, &mut rng, model).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(PlTrace { inner: trace })), "out")
    })
}

/// # Safety
/// `trace` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_trace_len(trace: *const PlTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.inner.len())
}

/// # Safety
/// `trace` must be live or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_trace_total_new(trace: *const PlTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.inner.total_new)
}

/// Node and new-node count of step `index`.
///
/// # Safety
/// `trace` must be live; `node` and `new_nodes` writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_trace_step(
    trace: *const PlTrace,
    index: usize,
    node: *mut usize,
    new_nodes: *mut usize,
) -> PlStatus {
    guard(|| {
        let t = &borrow(trace, "trace")?.inner;
        let step = t
            .steps
            .get(index)
            .ok_or_else(|| fail_with(PlStatus::InvalidArgument, &format!("step {index} of {}", t.len())))?;
        if !node.is_null() {
            node.write(step.node);
        }
        if !new_nodes.is_null() {
            new_nodes.write(step.new_nodes);
        }
        Ok(())
    })
}

/// # Safety
/// `trace` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pl_trace_free(trace: *mut PlTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Exhaustive optimum for budget `k` (refused with `SizeCap` on large inputs).
///
/// # Safety
/// `view` must be live; outputs writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_exact_optimal(
    view: *const PlView,
    k: usize,
    opt_value: *mut usize,
    radius_min: *mut usize,
) -> PlStatus {
    guard(|| {
        let v = &borrow(view, "view")?.inner;
        let result = exact_optimal(v, k, &ExactConfig::from_env()).map_err(fail)?;
        if !opt_value.is_null() {
            opt_value.write(result.opt_value);
        }
        if !radius_min.is_null() {
            radius_min.write(result.radius_min);
        }
        Ok(())
    })
}

/// Writes the 0/1 program for budget `k` to `path` in LP format.
///
/// # Safety
/// `view` must be live; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn pl_export_ilp(view: *const PlView, k: usize, path: *const c_char) -> PlStatus {
    guard(|| {
        let v = &borrow(view, "view")?.inner;
        let path = string_arg(path, "path")?;
        let mut buf = Vec::new();
        export_ilp(v, k, &mut buf).map_err(fail)?;
        probe_lab::io::write_atomic(path, &buf).map_err(fail)
    })
}
