//! C ABI for zenscope.
//!
//! Every fallible function returns a status code (`ZS_OK` on success) and
//! writes its result through an out-pointer. On failure a message is kept
//! per thread and can be read with [`zs_last_error_message`]. Objects that
//! outlive a call are returned as opaque handles and must be released with
//! the matching `*_free` function. Arrays are passed as pointer plus length;
//! matrices are row-major unless stated otherwise. Panics never cross the
//! boundary; they are reported as `ZS_ERR_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zenscope::dependence::{self, Measure, PseudoObsMatrix};
use zenscope::zenpath::{self, Zenpath};
use zenscope::zenplot::{self, CellKind, LayoutGrid};
use zenscope::Error;

pub const ZS_OK: i32 = 0;
pub const ZS_ERR_NULL_POINTER: i32 = 1;
pub const ZS_ERR_INVALID_ARGUMENT: i32 = 2;
pub const ZS_ERR_DIMENSION_MISMATCH: i32 = 3;
pub const ZS_ERR_DEGENERATE: i32 = 4;
pub const ZS_ERR_INSUFFICIENT_DATA: i32 = 5;
pub const ZS_ERR_OPTIMIZER: i32 = 6;
pub const ZS_ERR_PROJECTION: i32 = 7;
pub const ZS_ERR_LAYOUT: i32 = 8;
pub const ZS_ERR_BUFFER_TOO_SMALL: i32 = 9;
pub const ZS_ERR_OTHER: i32 = 10;
pub const ZS_ERR_PANIC: i32 = 11;

pub const ZS_MEASURE_TAU: u32 = 0;
pub const ZS_MEASURE_RHO_S: u32 = 1;
pub const ZS_MEASURE_LAMBDA_T: u32 = 2;
pub const ZS_MEASURE_LAMBDA_EMP: u32 = 3;

pub const ZS_CELL_PANEL: u32 = 0;
pub const ZS_CELL_SEPARATOR: u32 = 1;
pub const ZS_CELL_LABEL: u32 = 2;
pub const ZS_CELL_ARROW: u32 = 3;

/// Marks an absent index in [`ZsCell`].
pub const ZS_NONE: i64 = -1;

/// Pseudo-observations of a panel of series.
pub struct ZsPobs(PseudoObsMatrix);

/// Ordered groups of variate indices.
pub struct ZsZenpath(Zenpath);

/// Cells of a zenplot layout.
pub struct ZsLayout(LayoutGrid);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZsBivFit {
    pub rho: f64,
    pub nu: f64,
    pub tau_hat: f64,
    pub loglik: f64,
    pub lambda: f64,
    /// Nonzero when nu sits on the edge of its search interval.
    pub nu_at_bound: i32,
}

/// One layout cell. Rows and columns are on the fine grid where 2D cells
/// sit at even coordinates.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZsCell {
    /// One of the `ZS_CELL_*` constants.
    pub kind: u32,
    pub row: i64,
    pub col: i64,
    pub group: i64,
    pub panel: i64,
    pub horizontal: i64,
    pub vertical: i64,
    pub label: i64,
    /// Arrow direction as `'u'`, `'d'`, `'l'` or `'r'`; 0 otherwise.
    pub arrow: c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Parse { .. } => ZS_ERR_INVALID_ARGUMENT,
        Error::DimensionMismatch { .. } => ZS_ERR_DIMENSION_MISMATCH,
        Error::Degenerate(_) | Error::AllMissing(_) | Error::MissingValues(_) => ZS_ERR_DEGENERATE,
        Error::InsufficientCornerMass { .. } | Error::NoObservations | Error::NoColumnsRemain => {
            ZS_ERR_INSUFFICIENT_DATA
        }
        Error::OptimizerFailed { .. } => ZS_ERR_OPTIMIZER,
        Error::Projection(_) => ZS_ERR_PROJECTION,
        Error::LayoutCollision { .. } | Error::AxisConflict { .. } => ZS_ERR_LAYOUT,
        Error::Context(_, inner) => code(inner),
        _ => ZS_ERR_OTHER,
    }
}

struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(code(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ZS_ERR_NULL_POINTER, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZS_OK,
        Ok(Err(Fail(c, msg))) => {
            set_error(msg);
            c
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ZS_ERR_PANIC
        }
    }
}

/// # Safety
/// `p` must be null or point to `n` readable values.
unsafe fn slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// # Safety
/// `p` must be null or valid for writes.
unsafe fn put<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// # Safety
/// `p` must be null or a live handle.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

fn measure(m: u32) -> Result<Measure, Fail> {
    Ok(match m {
        ZS_MEASURE_TAU => Measure::Tau,
        ZS_MEASURE_RHO_S => Measure::RhoS,
        ZS_MEASURE_LAMBDA_T => Measure::LambdaT,
        ZS_MEASURE_LAMBDA_EMP => Measure::LambdaEmp,
        other => return Err(Fail(ZS_ERR_INVALID_ARGUMENT, format!("unknown measure {other}"))),
    })
}

fn index(v: Option<usize>) -> i64 {
    v.map_or(ZS_NONE, |x| x as i64)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn zs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Kendall's tau-b of two series of length `n`.
///
/// # Safety
/// `u` and `v` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_kendall_tau(u: *const f64, v: *const f64, n: usize, out: *mut f64) -> i32 {
    guard(|| {
        let t = dependence::kendall_tau(slice(u, n, "u")?, slice(v, n, "v")?)?;
        put(out, t, "out")
    })
}

/// Spearman's rho of two series of length `n`.
///
/// # Safety
/// `u` and `v` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_spearman_rho(u: *const f64, v: *const f64, n: usize, out: *mut f64) -> i32 {
    guard(|| {
        let r = dependence::spearman_rho(slice(u, n, "u")?, slice(v, n, "v")?)?;
        put(out, r, "out")
    })
}

/// Tail-dependence coefficient of a t copula with correlation `rho` and
/// `nu` degrees of freedom.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_lambda_from_rho_nu(rho: f64, nu: f64, out: *mut f64) -> i32 {
    guard(|| put(out, dependence::lambda_from_rho_nu(rho, nu)?, "out"))
}

/// Nonparametric lower-tail dependence of pseudo-observations at corner `p`.
///
/// # Safety
/// `u` and `v` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_lambda_nonparam(u: *const f64, v: *const f64, n: usize, p: f64, out: *mut f64) -> i32 {
    guard(|| {
        let l = dependence::lambda_nonparam(slice(u, n, "u")?, slice(v, n, "v")?, p)?;
        put(out, l, "out")
    })
}

/// Fits a bivariate t copula to two columns of pseudo-observations.
///
/// # Safety
/// `u` and `v` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_fit_biv_t(u: *const f64, v: *const f64, n: usize, out: *mut ZsBivFit) -> i32 {
    guard(|| {
        let f = dependence::fit_biv_t(slice(u, n, "u")?, slice(v, n, "v")?)?;
        let r = ZsBivFit {
            rho: f.rho,
            nu: f.nu,
            tau_hat: f.tau_hat,
            loglik: f.loglik,
            lambda: f.lambda,
            nu_at_bound: f.nu_at_bound as i32,
        };
        put(out, r, "out")
    })
}

/// Pseudo-observations of `cols` series with `rows` observations each.
/// `data` is column-major: series `j` occupies `data[j*rows .. (j+1)*rows]`.
///
/// # Safety
/// `data` must point to `rows * cols` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_pobs_new(data: *const f64, rows: usize, cols: usize, out: *mut *mut ZsPobs) -> i32 {
    guard(|| {
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| Fail(ZS_ERR_INVALID_ARGUMENT, "rows * cols overflows".into()))?;
        let data = slice(data, n, "data")?;
        let columns: Vec<Vec<f64>> = (0..cols).map(|j| data[j * rows..(j + 1) * rows].to_vec()).collect();
        let names: Vec<String> = (0..cols).map(|j| format!("V{j}")).collect();
        let u = dependence::pseudo_observations(&names, &columns)?;
        put(out, Box::into_raw(Box::new(ZsPobs(u))), "out")
    })
}

/// Number of series held by `pobs`, or 0 for null.
///
/// # Safety
/// `pobs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zs_pobs_cols(pobs: *const ZsPobs) -> usize {
    pobs.as_ref().map_or(0, |p| p.0.cols())
}

/// # Safety
/// `pobs` must be null or a handle from [`zs_pobs_new`] not freed before.
#[no_mangle]
pub unsafe extern "C" fn zs_pobs_free(pobs: *mut ZsPobs) {
    if !pobs.is_null() {
        drop(Box::from_raw(pobs));
    }
}

/// Pairwise dependence matrix written row-major into `out` (`d * d`
/// doubles, `d = zs_pobs_cols(pobs)`). Pairs that could not be estimated
/// are NaN. `threads = 0` uses every core; the result does not depend on it.
///
/// # Safety
/// `pobs` must be a live handle; `out` must have room for `d * d` doubles.
#[no_mangle]
pub unsafe extern "C" fn zs_dependence_matrix(pobs: *const ZsPobs, measure_id: u32, threads: usize, out: *mut f64) -> i32 {
    guard(|| {
        let u = handle(pobs, "pobs")?;
        let threads = if threads == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            threads
        };
        let m = dependence::dependence_matrix(&u.0, measure(measure_id)?, threads)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = m.dim();
        for (i, row) in m.values.iter().enumerate() {
            ptr::copy_nonoverlapping(row.as_ptr(), out.add(i * d), d);
        }
        Ok(())
    })
}

/// Joint t copula fit. Writes the `d * d` correlation matrix row-major into
/// `p_out` and the degrees of freedom into `nu_out`.
///
/// # Safety
/// `pobs` must be a live handle; `p_out` must have room for `d * d`
/// doubles and `nu_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_fit_joint_t(pobs: *const ZsPobs, p_out: *mut f64, nu_out: *mut f64) -> i32 {
    guard(|| {
        let f = dependence::fit_joint_t(&handle(pobs, "pobs")?.0)?;
        if p_out.is_null() {
            return Err(null("p_out"));
        }
        let d = f.p.len();
        for (i, row) in f.p.iter().enumerate() {
            ptr::copy_nonoverlapping(row.as_ptr(), p_out.add(i * d), d);
        }
        put(nu_out, f.nu, "nu_out")
    })
}

/// The chain `0, 1, ..., d-1` as a single group.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_zenpath_chain(d: usize, out: *mut *mut ZsZenpath) -> i32 {
    guard(|| put(out, Box::into_raw(Box::new(ZsZenpath(Zenpath::chain(d)))), "out"))
}

/// A walk through all `d (d-1) / 2` pairs of `d` variates.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_zenpath_eulerian(d: usize, out: *mut *mut ZsZenpath) -> i32 {
    guard(|| {
        let z = zenpath::eulerian_all_pairs(d)?;
        put(out, Box::into_raw(Box::new(ZsZenpath(z))), "out")
    })
}

/// Builds a zenpath from `n_groups` groups. Group `g` holds
/// `lens[g]` indices, stored back to back in `indices`.
///
/// # Safety
/// `lens` must point to `n_groups` values and `indices` to their sum;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_zenpath_from_groups(
    indices: *const usize,
    lens: *const usize,
    n_groups: usize,
    out: *mut *mut ZsZenpath,
) -> i32 {
    guard(|| {
        let lens = slice(lens, n_groups, "lens")?;
        let total = lens.iter().try_fold(0usize, |a, &b| a.checked_add(b));
        let total = total.ok_or_else(|| Fail(ZS_ERR_INVALID_ARGUMENT, "group lengths overflow".into()))?;
        let idx = slice(indices, total, "indices")?;
        let mut groups = Vec::with_capacity(n_groups);
        let mut at = 0;
        for &l in lens {
            groups.push(idx[at..at + l].to_vec());
            at += l;
        }
        let scores = groups.iter().map(|g| vec![f64::NAN; g.len().saturating_sub(1)]).collect();
        put(out, Box::into_raw(Box::new(ZsZenpath(Zenpath { groups, scores }))), "out")
    })
}

/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zs_zenpath_group_count(path: *const ZsZenpath) -> usize {
    path.as_ref().map_or(0, |p| p.0.groups.len())
}

/// Copies group `g` into `buf` (capacity `cap`) and its length into
/// `len_out`. Call with `buf = NULL, cap = 0` to query the length;
/// `ZS_ERR_BUFFER_TOO_SMALL` is returned, with `len_out` set, when
/// `cap` is short.
///
/// # Safety
/// `path` must be a live handle, `buf` must have room for `cap` values and
/// `len_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_zenpath_group(path: *const ZsZenpath, g: usize, buf: *mut usize, cap: usize, len_out: *mut usize) -> i32 {
    guard(|| {
        let p = handle(path, "path")?;
        let group = p.0.groups.get(g).ok_or_else(|| {
            Fail(ZS_ERR_INVALID_ARGUMENT, format!("group {g} out of range ({} groups)", p.0.groups.len()))
        })?;
        put(len_out, group.len(), "len_out")?;
        if buf.is_null() && cap == 0 {
            return Ok(());
        }
        if cap < group.len() {
            return Err(Fail(
                ZS_ERR_BUFFER_TOO_SMALL,
                format!("group {g} has {} entries, buffer holds {cap}", group.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(group.as_ptr(), buf, group.len());
        Ok(())
    })
}

/// # Safety
/// `path` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn zs_zenpath_free(path: *mut ZsZenpath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Writes the default zigzag for `n2d` 2D panels at the given `width` as
/// direction letters (`udlr`) plus a terminating NUL into `buf`. The letter
/// count is stored in `len_out`; query it with `buf = NULL, cap = 0`.
///
/// # Safety
/// `buf` must have room for `cap` bytes and `len_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_default_zigzag(n2d: usize, width: usize, buf: *mut c_char, cap: usize, len_out: *mut usize) -> i32 {
    guard(|| {
        let dirs = zenplot::default_zigzag(n2d, width)?;
        let letters: Vec<u8> = dirs.0.iter().map(|d| d.letter() as u8).collect();
        put(len_out, letters.len(), "len_out")?;
        if buf.is_null() && cap == 0 {
            return Ok(());
        }
        if cap <= letters.len() {
            return Err(Fail(ZS_ERR_BUFFER_TOO_SMALL, format!("need {} bytes", letters.len() + 1)));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(letters.as_ptr().cast(), buf, letters.len());
        *buf.add(letters.len()) = 0;
        Ok(())
    })
}

/// Lays out the pairs of `path` along the default zigzag of `width`.
///
/// # Safety
/// `path` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_layout(path: *const ZsZenpath, width: usize, out: *mut *mut ZsLayout) -> i32 {
    guard(|| {
        let g = zenplot::layout(&handle(path, "path")?.0, None, width)?;
        put(out, Box::into_raw(Box::new(ZsLayout(g))), "out")
    })
}

/// # Safety
/// `layout` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zs_layout_cell_count(layout: *const ZsLayout) -> usize {
    layout.as_ref().map_or(0, |l| l.0.cells.len())
}

/// # Safety
/// `layout` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zs_layout_cell(layout: *const ZsLayout, k: usize, out: *mut ZsCell) -> i32 {
    guard(|| {
        let l = handle(layout, "layout")?;
        let c = l.0.cells.get(k).ok_or_else(|| {
            Fail(ZS_ERR_INVALID_ARGUMENT, format!("cell {k} out of range ({} cells)", l.0.cells.len()))
        })?;
        let cell = ZsCell {
            kind: match c.kind {
                CellKind::Panel => ZS_CELL_PANEL,
                CellKind::Separator => ZS_CELL_SEPARATOR,
                CellKind::Label => ZS_CELL_LABEL,
                CellKind::Arrow => ZS_CELL_ARROW,
            },
            row: c.row,
            col: c.col,
            group: c.group as i64,
            panel: index(c.panel),
            horizontal: index(c.horizontal),
            vertical: index(c.vertical),
            label: index(c.label),
            arrow: c.arrow.map_or(0, |d| d.letter() as c_char),
        };
        put(out, cell, "out")
    })
}

/// # Safety
/// `layout` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn zs_layout_free(layout: *mut ZsLayout) {
    if !layout.is_null() {
        drop(Box::from_raw(layout));
    }
}
