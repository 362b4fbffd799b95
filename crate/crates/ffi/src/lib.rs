//! C interface to `latpoly`.
//!
//! Objects are opaque handles created by `lp_*_new`/`lp_*_read`/`lp_enumerate`
//! and released with the matching `lp_*_free`. Every fallible call returns an
//! [`LpStatus`]; on failure `lp_last_error` describes what went wrong on the
//! calling thread. Strings returned by the library are freed with `lp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use latpoly::ehrhart::h_star;
use latpoly::properties::{analyze, AnalyzeOptions};
use latpoly::store::{self, DatabaseRecord, DbInfo};
use latpoly::{are_equivalent, canonical_key, Error, LatticePoint, LatticePolytope};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotFullDimensional = 3,
    BufferTooSmall = 4,
    Io = 5,
    Format = 6,
    Internal = 7,
}

/// A lattice polytope.
pub struct LpPolytope(LatticePolytope);

/// A list of polytope classes, ordered by volume and key.
pub struct LpDatabase {
    info: DbInfo,
    records: Vec<DatabaseRecord>,
}

/// Property flags: 1 true, 0 false, -1 not decided within the budget.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LpProperties {
    pub spanning: i8,
    pub very_ample: i8,
    pub idp: i8,
    pub unimodular_cover: i8,
    pub unimodular_triangulation: i8,
    pub smooth: i8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> LpStatus {
    match e {
        Error::NotFullDimensional { .. } => LpStatus::NotFullDimensional,
        Error::Io(_) => LpStatus::Io,
        Error::Format { .. } | Error::Json(_) => LpStatus::Format,
        Error::DimensionMismatch { .. } | Error::Shape(_) | Error::PreconditionViolated(_) => LpStatus::InvalidArgument,
        _ => LpStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), (LpStatus, String)>) -> LpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LpStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            set_error(format!("panic: {msg}"));
            LpStatus::Internal
        }
    }
}

fn lift(e: Error) -> (LpStatus, String) {
    (status_of(&e), e.to_string())
}

macro_rules! nonnull {
    ($($p:expr),*) => {
        $(if $p.is_null() {
            return Err((LpStatus::NullPointer, format!("`{}` is null", stringify!($p))));
        })*
    };
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, (LpStatus, String)> {
    nonnull!(p);
    let s = CStr::from_ptr(p).to_str().map_err(|_| (LpStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
    Ok(PathBuf::from(s))
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn lp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds the convex hull of `n_points` points of dimension `dim`, given row-major.
///
/// # Safety
/// `coords` must point to `n_points * dim` integers and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_new(
    coords: *const i64,
    n_points: usize,
    dim: usize,
    out: *mut *mut LpPolytope,
) -> LpStatus {
    guard(|| {
        nonnull!(coords, out);
        if dim == 0 || n_points == 0 {
            return Err((LpStatus::InvalidArgument, "need dim >= 1 and at least one point".into()));
        }
        let n = n_points.checked_mul(dim).ok_or((LpStatus::InvalidArgument, "size overflow".to_string()))?;
        let c = std::slice::from_raw_parts(coords, n);
        let pts: Vec<LatticePoint> = c.chunks(dim).map(|r| LatticePoint(r.to_vec())).collect();
        let p = LatticePolytope::new(&pts).map_err(lift)?;
        *out = Box::into_raw(Box::new(LpPolytope(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_free(p: *mut LpPolytope) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Dimension, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_dim(p: *const LpPolytope) -> usize {
    p.as_ref().map_or(0, |p| p.0.dim())
}

/// Normalized volume, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_volume(p: *const LpPolytope) -> u64 {
    p.as_ref().map_or(0, |p| p.0.volume())
}

/// Counts of vertices, lattice points and interior lattice points.
///
/// # Safety
/// `p` must be a live handle; any output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_counts(
    p: *const LpPolytope,
    vertices: *mut usize,
    points: *mut usize,
    interior: *mut usize,
) -> LpStatus {
    guard(|| {
        nonnull!(p);
        let p = &(*p).0;
        if let Some(v) = vertices.as_mut() {
            *v = p.vertices().len();
        }
        if let Some(v) = points.as_mut() {
            *v = p.num_points();
        }
        if let Some(v) = interior.as_mut() {
            *v = p.num_interior();
        }
        Ok(())
    })
}

/// Copies the vertices row-major into `buf` of `len` integers.
/// `written` receives the number of integers needed.
///
/// # Safety
/// `buf` must hold `len` integers; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_vertices(
    p: *const LpPolytope,
    buf: *mut i64,
    len: usize,
    written: *mut usize,
) -> LpStatus {
    guard(|| {
        nonnull!(p, written);
        let flat: Vec<i64> = (*p).0.vertices().iter().flat_map(|v| v.0.iter().copied()).collect();
        *written = flat.len();
        if len < flat.len() {
            return Err((LpStatus::BufferTooSmall, format!("need {} integers", flat.len())));
        }
        nonnull!(buf);
        ptr::copy_nonoverlapping(flat.as_ptr(), buf, flat.len());
        Ok(())
    })
}

/// Canonical key as a new string; free with `lp_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_canonical_key(p: *const LpPolytope, out: *mut *mut c_char) -> LpStatus {
    guard(|| {
        nonnull!(p, out);
        let k = canonical_key(&(*p).0);
        *out = CString::new(k.as_str()).expect("keys have no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Whether two polytopes are unimodularly equivalent.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_polytopes_equivalent(
    a: *const LpPolytope,
    b: *const LpPolytope,
    out: *mut bool,
) -> LpStatus {
    guard(|| {
        nonnull!(a, b, out);
        *out = are_equivalent(&(*a).0, &(*b).0);
        Ok(())
    })
}

/// The h*-vector, `dim + 1` entries, into `buf` of `len` entries.
///
/// # Safety
/// `buf` must hold `len` entries; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_hstar(
    p: *const LpPolytope,
    buf: *mut u64,
    len: usize,
    written: *mut usize,
) -> LpStatus {
    guard(|| {
        nonnull!(p, written);
        let h = h_star(&(*p).0).map_err(lift)?;
        *written = h.0.len();
        if len < h.0.len() {
            return Err((LpStatus::BufferTooSmall, format!("need {} entries", h.0.len())));
        }
        nonnull!(buf);
        ptr::copy_nonoverlapping(h.0.as_ptr(), buf, h.0.len());
        Ok(())
    })
}

/// All six properties; `budget` bounds the cover and triangulation searches (0 for the default).
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_polytope_properties(p: *const LpPolytope, budget: u64, out: *mut LpProperties) -> LpStatus {
    guard(|| {
        nonnull!(p, out);
        let mut opts = AnalyzeOptions::default();
        if budget > 0 {
            opts.budget = budget;
        }
        let r = analyze(&(*p).0, &opts);
        let t = |f: Option<bool>| match f {
            Some(true) => 1,
            Some(false) => 0,
            None => -1,
        };
        *out = LpProperties {
            spanning: t(r.spanning),
            very_ample: t(r.very_ample),
            idp: t(r.idp),
            unimodular_cover: t(r.unimodular_cover),
            unimodular_triangulation: t(r.unimodular_triangulation),
            smooth: t(r.smooth),
        };
        Ok(())
    })
}

/// All classes of `dim`-dimensional polytopes with volume at most `max_volume`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lp_enumerate(dim: usize, max_volume: u64, out: *mut *mut LpDatabase) -> LpStatus {
    guard(|| {
        nonnull!(out);
        if dim < 2 || max_volume < 1 {
            return Err((LpStatus::InvalidArgument, "need dim >= 2 and max_volume >= 1".into()));
        }
        let set = latpoly::enumerate_polytopes(dim, max_volume);
        let db = LpDatabase { info: DbInfo::polytopes(dim, max_volume), records: store::records(&set) };
        *out = Box::into_raw(Box::new(db));
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_database_read(path: *const c_char, out: *mut *mut LpDatabase) -> LpStatus {
    guard(|| {
        nonnull!(out);
        let (info, records) = store::read_db(&path_arg(path)?).map_err(lift)?;
        let info = info.unwrap_or_else(|| {
            let dim = records.first().map_or(0, |r| r.dim);
            DbInfo::polytopes(dim, records.iter().map(|r| r.volume).max().unwrap_or(0))
        });
        *out = Box::into_raw(Box::new(LpDatabase { info, records }));
        Ok(())
    })
}

/// # Safety
/// `db` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lp_database_write(db: *const LpDatabase, path: *const c_char) -> LpStatus {
    guard(|| {
        nonnull!(db);
        let db = &*db;
        store::write_db(&path_arg(path)?, &db.info, &db.records).map_err(lift)
    })
}

/// Number of classes, or 0 for null.
///
/// # Safety
/// `db` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lp_database_len(db: *const LpDatabase) -> usize {
    db.as_ref().map_or(0, |d| d.records.len())
}

/// Representative of class `index` as a new polytope handle.
///
/// # Safety
/// `db` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_database_get(db: *const LpDatabase, index: usize, out: *mut *mut LpPolytope) -> LpStatus {
    guard(|| {
        nonnull!(db, out);
        let db = &*db;
        let r = db
            .records
            .get(index)
            .ok_or_else(|| (LpStatus::InvalidArgument, format!("index {index} out of range")))?;
        *out = Box::into_raw(Box::new(LpPolytope(r.polytope().map_err(lift)?)));
        Ok(())
    })
}

/// # Safety
/// `db` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lp_database_free(db: *mut LpDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}
