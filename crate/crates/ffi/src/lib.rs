//! C ABI for lrmkit.
//!
//! Structures are opaque handles created by `*_build`/`*_encode`/`*_load` and released
//! with the matching `*_free`. Every fallible function returns an [`LrmkStatus`] and
//! writes its result through an out-pointer; the message of the last failure on the
//! calling thread is available from [`lrmk_last_error`]. Positions are 1-based.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lrmkit::container::Persist;
use lrmkit::lrm::Counter;
use lrmkit::partition_sort::sort_lrm;
use lrmkit::permcode::PermCode;
use lrmkit::rmq::{PlainRmqIndex, RunsRmqIndex, StrictRunsRmqIndex};
use lrmkit::Error;

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrmkStatus {
    Ok = 0,
    NullPointer = 1,
    Range = 2,
    Contract = 3,
    Structure = 4,
    Capability = 5,
    Format = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// Kind of range-minimum index.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrmkIndexKind {
    /// LRM-tree parentheses only; never reads the array.
    Plain = 0,
    /// Strict-run heads; never reads the array.
    StrictRuns = 1,
    /// Run heads; each query reads the array at most once.
    Runs = 2,
}

/// Opaque compressed permutation.
pub struct LrmkPermCode {
    inner: PermCode,
}

enum Index {
    Plain(PlainRmqIndex),
    StrictRuns(StrictRunsRmqIndex),
    Runs(RunsRmqIndex),
}

/// Opaque range-minimum index.
pub struct LrmkRmqIndex {
    inner: Index,
    n: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> LrmkStatus {
    match e {
        Error::Range(_) => LrmkStatus::Range,
        Error::Contract(_) => LrmkStatus::Contract,
        Error::Structure(_) => LrmkStatus::Structure,
        Error::Capability(_) => LrmkStatus::Capability,
        Error::Format(_) => LrmkStatus::Format,
        Error::Parse { .. } => LrmkStatus::Parse,
        Error::Io(_) => LrmkStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), LrmkStatus>) -> LrmkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LrmkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            LrmkStatus::Panic
        }
    }
}

fn fail(e: Error) -> LrmkStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> LrmkStatus {
    set_error(format!("{what} is null"));
    LrmkStatus::NullPointer
}

/// # Safety
/// `ptr` must be null or point to `len` readable values.
unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], LrmkStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), LrmkStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

/// # Safety
/// `h` must be null or a live handle.
unsafe fn code_ref<'a>(h: *const LrmkPermCode) -> Result<&'a PermCode, LrmkStatus> {
    h.as_ref().map(|c| &c.inner).ok_or_else(|| null("code"))
}

/// Copies the message of the last failed call on this thread into `buf`
/// (NUL-terminated, truncated to `cap` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn lrmk_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let k = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, k);
            *buf.add(k) = 0;
        }
        msg.len()
    })
}

/// Encodes the permutation `values[0..n]` of `1..=n`. With `with_index`, the code
/// also answers PSV and RMQ queries.
///
/// # Safety
/// `values` must point to `n` readable values; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_encode(
    values: *const i64,
    n: usize,
    with_index: bool,
    out: *mut *mut LrmkPermCode,
) -> LrmkStatus {
    guard(|| {
        let v = slice(values, n, "values")?;
        let inner = PermCode::encode(v, with_index).map_err(fail)?;
        write(out, Box::into_raw(Box::new(LrmkPermCode { inner })), "out")
    })
}

/// Loads a code from an `LRMK` container.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_load(
    bytes: *const u8,
    len: usize,
    out: *mut *mut LrmkPermCode,
) -> LrmkStatus {
    guard(|| {
        let b = slice(bytes, len, "bytes")?;
        let inner = PermCode::from_bytes(b).map_err(fail)?;
        write(out, Box::into_raw(Box::new(LrmkPermCode { inner })), "out")
    })
}

/// Serializes a code into a new buffer, released with [`lrmk_bytes_free`].
///
/// # Safety
/// `code` must be a live handle; `out` and `out_len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_serialize(
    code: *const LrmkPermCode,
    out: *mut *mut u8,
    out_len: *mut usize,
) -> LrmkStatus {
    guard(|| {
        let c = code_ref(code)?;
        if out.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let bytes = c.to_bytes().into_boxed_slice();
        out_len.write(bytes.len());
        out.write(Box::into_raw(bytes).cast::<u8>());
        Ok(())
    })
}

/// Releases a buffer from [`lrmk_permcode_serialize`].
///
/// # Safety
/// `buf`/`len` must come from one call to [`lrmk_permcode_serialize`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lrmk_bytes_free(buf: *mut u8, len: usize) {
    if !buf.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(buf, len)));
    }
}

/// # Safety
/// `code` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_free(code: *mut LrmkPermCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Length `n` of the permutation (0 for a null handle).
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_len(code: *const LrmkPermCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.len())
}

/// Number of parts `ρ` of the code (0 for a null handle).
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_runs(code: *const LrmkPermCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.runs())
}

/// Total size of the code in bits (0 for a null handle).
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_size_bits(code: *const LrmkPermCode) -> u64 {
    code.as_ref().map_or(0, |c| c.inner.size_report().total_bits)
}

/// `*out = π(i)`.
///
/// # Safety
/// `code` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_apply(
    code: *const LrmkPermCode,
    i: usize,
    out: *mut usize,
) -> LrmkStatus {
    guard(|| {
        let v = code_ref(code)?.apply(i).map_err(fail)?;
        write(out, v, "out")
    })
}

/// `*out = π⁻¹(v)`.
///
/// # Safety
/// `code` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_inverse(
    code: *const LrmkPermCode,
    v: usize,
    out: *mut usize,
) -> LrmkStatus {
    guard(|| {
        let i = code_ref(code)?.inverse(v).map_err(fail)?;
        write(out, i, "out")
    })
}

/// Part `*s` and offset `*p` of position `i`.
///
/// # Safety
/// `code` must be a live handle; `s` and `p` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_map(
    code: *const LrmkPermCode,
    i: usize,
    s: *mut usize,
    p: *mut usize,
) -> LrmkStatus {
    guard(|| {
        let (a, b) = code_ref(code)?.map(i).map_err(fail)?;
        write(s, a, "s")?;
        write(p, b, "p")
    })
}

/// Position of the `p`-th element of part `s`.
///
/// # Safety
/// `code` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_unmap(
    code: *const LrmkPermCode,
    s: usize,
    p: usize,
    out: *mut usize,
) -> LrmkStatus {
    guard(|| {
        let i = code_ref(code)?.unmap(s, p).map_err(fail)?;
        write(out, i, "out")
    })
}

/// Previous smaller value of `i` (0 = none). Needs a code encoded `with_index`.
///
/// # Safety
/// `code` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_psv(
    code: *const LrmkPermCode,
    i: usize,
    out: *mut usize,
) -> LrmkStatus {
    guard(|| {
        let v = code_ref(code)?.psv_query(i).map_err(fail)?;
        write(out, v, "out")
    })
}

/// Position of the minimum of `π[i..=j]`. Needs a code encoded `with_index`.
///
/// # Safety
/// `code` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_permcode_rmq(
    code: *const LrmkPermCode,
    i: usize,
    j: usize,
    out: *mut usize,
) -> LrmkStatus {
    guard(|| {
        let v = code_ref(code)?.rmq_query(i, j).map_err(fail)?;
        write(out, v, "out")
    })
}

/// Builds a range-minimum index over `values[0..n]`, `n >= 1`.
///
/// # Safety
/// `values` must point to `n` readable values; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_rmq_build(
    kind: LrmkIndexKind,
    values: *const i64,
    n: usize,
    out: *mut *mut LrmkRmqIndex,
) -> LrmkStatus {
    guard(|| {
        let v = slice(values, n, "values")?;
        let inner = match kind {
            LrmkIndexKind::Plain => Index::Plain(PlainRmqIndex::build(v).map_err(fail)?.0),
            LrmkIndexKind::StrictRuns => {
                Index::StrictRuns(StrictRunsRmqIndex::build(v).map_err(fail)?.0)
            }
            LrmkIndexKind::Runs => Index::Runs(RunsRmqIndex::build(v).map_err(fail)?.0),
        };
        write(out, Box::into_raw(Box::new(LrmkRmqIndex { inner, n })), "out")
    })
}

/// Leftmost minimum of `A[i..=j]`. The runs index needs the indexed array in
/// `values[0..n]`; the other kinds ignore `values` (may be null). `comparisons`,
/// when not null, receives the number of data comparisons made.
///
/// # Safety
/// `index` must be a live handle; `values` must be null or point to `n` values;
/// `out` must be valid for a write; `comparisons` must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_rmq_query(
    index: *const LrmkRmqIndex,
    values: *const i64,
    n: usize,
    i: usize,
    j: usize,
    out: *mut usize,
    comparisons: *mut u64,
) -> LrmkStatus {
    guard(|| {
        let idx = index.as_ref().ok_or_else(|| null("index"))?;
        let mut counter = Counter::new();
        let pos = match &idx.inner {
            Index::Plain(p) => p.query(i, j),
            Index::StrictRuns(s) => s.query(i, j),
            Index::Runs(r) => {
                if values.is_null() {
                    return Err(fail(Error::Capability(
                        "the runs index needs the indexed array".into(),
                    )));
                }
                r.query(slice(values, n, "values")?, i, j, &mut counter)
            }
        }
        .map_err(fail)?;
        write(out, pos, "out")?;
        if !comparisons.is_null() {
            comparisons.write(counter.get());
        }
        Ok(())
    })
}

/// Length `n` of the indexed array (0 for a null handle).
///
/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmk_rmq_len(index: *const LrmkRmqIndex) -> usize {
    index.as_ref().map_or(0, |i| i.n)
}

/// Total size of the index in bits (0 for a null handle).
///
/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lrmk_rmq_size_bits(index: *const LrmkRmqIndex) -> u64 {
    index.as_ref().map_or(0, |i| match &i.inner {
        Index::Plain(p) => p.size().total_bits,
        Index::StrictRuns(s) => s.size().total_bits,
        Index::Runs(r) => r.size().total_bits,
    })
}

/// # Safety
/// `index` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lrmk_rmq_free(index: *mut LrmkRmqIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Sorts `values[0..n]` in place with the LRM-sort; `comparisons`, when not null,
/// receives the number of data comparisons.
///
/// # Safety
/// `values` must point to `n` writable values; `comparisons` must be null or valid
/// for a write.
#[no_mangle]
pub unsafe extern "C" fn lrmk_sort(values: *mut i64, n: usize, comparisons: *mut u64) -> LrmkStatus {
    guard(|| {
        if n == 0 {
            return write_opt(comparisons, 0);
        }
        if values.is_null() {
            return Err(null("values"));
        }
        let v = std::slice::from_raw_parts_mut(values, n);
        let (sorted, stats) = sort_lrm(v);
        v.copy_from_slice(&sorted);
        write_opt(comparisons, stats.cmp_total)
    })
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn write_opt(out: *mut u64, v: u64) -> Result<(), LrmkStatus> {
    if !out.is_null() {
        out.write(v);
    }
    Ok(())
}
