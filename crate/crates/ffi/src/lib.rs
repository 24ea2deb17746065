//! C ABI over the `neurodavis` library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`NdStatus`]; on failure [`nd_last_error_message`] describes the error
//! raised most recently on the calling thread. Panics are caught and reported
//! as [`NdStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use neurodavis::datasets::{gen_synthetic, load_csv, Dataset, LabelColumn, SyntheticKind};
use neurodavis::metrics::distance_preservation;
use neurodavis::model::{checkpoint, embed, fit, Convergence, Model, ModelConfig};
use neurodavis::numerics::{Matrix, Rng};
use neurodavis::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NdStatus {
    Ok = 0,
    /// A required pointer was null, a string was not UTF-8, or a buffer was
    /// too small.
    InvalidArgument = 1,
    InvalidInput = 2,
    InvalidConfig = 3,
    Degenerate = 4,
    /// An iterative routine failed to converge.
    Numeric = 5,
    /// Training produced a non-finite loss.
    Diverged = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for NdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => NdStatus::InvalidInput,
            Error::InvalidConfig(_) => NdStatus::InvalidConfig,
            Error::Degenerate(_) => NdStatus::Degenerate,
            Error::Numeric { .. } => NdStatus::Numeric,
            Error::Diverged { .. } => NdStatus::Diverged,
            Error::Parse { .. } | Error::Csv(_) | Error::Json(_) => NdStatus::Parse,
            Error::Io { .. } => NdStatus::Io,
        }
    }
}

/// Training configuration. Obtain defaults from `nd_config_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NdConfig {
    pub latent_dim: usize,
    /// Hidden layer widths; ignored when `use_default_hidden` is true.
    pub hidden_widths: *const usize,
    pub hidden_count: usize,
    pub use_default_hidden: bool,
    pub alpha: f64,
    pub beta: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    /// 0 selects min(n, 64).
    pub batch_size: usize,
    pub seed: u64,
    pub early_stop: bool,
    pub window: usize,
    pub rel_tol: f64,
}

/// Opaque dataset handle.
pub struct NdDataset {
    inner: Dataset,
}

/// Opaque trained-model handle.
pub struct NdModel {
    inner: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(NdStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(NdStatus::from(&e))
    }
}

fn bad_arg(msg: &str) -> Fail {
    set_error(msg);
    Fail(NdStatus::InvalidArgument)
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NdStatus::Ok,
        Ok(Err(Fail(s))) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            NdStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(bad_arg(&format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| bad_arg(&format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| bad_arg(&format!("{what} is null")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(bad_arg(&format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_arg<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(bad_arg("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread, or null when the last
/// call succeeded. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn nd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn nd_config_default() -> NdConfig {
    let d = ModelConfig::default();
    let conv = d.convergence.unwrap_or_default();
    NdConfig {
        latent_dim: d.latent_dim,
        hidden_widths: ptr::null(),
        hidden_count: 0,
        use_default_hidden: true,
        alpha: d.alpha,
        beta: d.beta,
        learning_rate: d.learning_rate,
        epochs: d.epochs,
        batch_size: 0,
        seed: d.seed,
        early_stop: true,
        window: conv.window,
        rel_tol: conv.rel_tol,
    }
}

unsafe fn to_model_config(c: &NdConfig) -> Result<ModelConfig, Fail> {
    let hidden_widths = if c.use_default_hidden {
        None
    } else {
        Some(slice_arg(c.hidden_widths, c.hidden_count, "hidden_widths")?.to_vec())
    };
    let config = ModelConfig {
        latent_dim: c.latent_dim,
        hidden_widths,
        alpha: c.alpha,
        beta: c.beta,
        learning_rate: c.learning_rate,
        epochs: c.epochs,
        batch_size: (c.batch_size > 0).then_some(c.batch_size),
        seed: c.seed,
        convergence: c.early_stop.then_some(Convergence { window: c.window, rel_tol: c.rel_tol }),
        ..ModelConfig::default()
    };
    config.validate()?;
    Ok(config)
}

/// Builds a dataset from a row-major `rows × cols` buffer. `labels` may be
/// null; otherwise it holds `rows` class ids.
///
/// # Safety
/// `data` must point to `rows * cols` doubles, `labels` (when non-null) to
/// `rows` values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_from_rows(
    data: *const f64,
    rows: usize,
    cols: usize,
    labels: *const usize,
    out: *mut *mut NdDataset,
) -> NdStatus {
    guard(|| {
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| bad_arg("rows * cols overflows"))?;
        let x = Matrix::new(rows, cols, slice_arg(data, len, "data")?.to_vec())?;
        let mut ds = Dataset::new("ffi", x);
        if !labels.is_null() {
            ds = ds.with_labels(slice_arg(labels, rows, "labels")?.to_vec())?;
        }
        out_arg(out, NdDataset { inner: ds })
    })
}

/// Generates a synthetic benchmark ("elliptic_ring", "olympic", "spiral",
/// "shape" or "world_map").
///
/// # Safety
/// `kind` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_generate(
    kind: *const c_char,
    seed: u64,
    out: *mut *mut NdDataset,
) -> NdStatus {
    guard(|| {
        let kind: SyntheticKind = str_arg(kind, "kind")?.parse()?;
        out_arg(out, NdDataset { inner: gen_synthetic(kind, &mut Rng::new(seed)) })
    })
}

/// Reads a CSV. `label_column` is a header name or zero-based index, or null
/// for unlabeled data.
///
/// # Safety
/// String arguments must be NUL-terminated (or null where allowed) and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_load_csv(
    path: *const c_char,
    label_column: *const c_char,
    has_header: bool,
    out: *mut *mut NdDataset,
) -> NdStatus {
    guard(|| {
        let path = PathBuf::from(str_arg(path, "path")?);
        let label = if label_column.is_null() {
            None
        } else {
            Some(LabelColumn::parse(str_arg(label_column, "label_column")?))
        };
        out_arg(out, NdDataset { inner: load_csv(&path, label.as_ref(), has_header)? })
    })
}

/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_rows(ds: *const NdDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.n())
}

/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_cols(ds: *const NdDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.d())
}

/// Copies the row-major data into `buf`, which holds `len` doubles.
///
/// # Safety
/// `ds` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_copy_data(ds: *const NdDataset, buf: *mut f64, len: usize) -> NdStatus {
    guard(|| copy_out(ref_arg(ds, "dataset")?.inner.x.as_slice(), buf, len))
}

/// Copies class ids into `buf` (`len` values). Fails with InvalidInput when
/// the dataset is unlabeled.
///
/// # Safety
/// `ds` must be a live handle and `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_copy_labels(ds: *const NdDataset, buf: *mut usize, len: usize) -> NdStatus {
    guard(|| {
        let labels = ref_arg(ds, "dataset")?
            .inner
            .labels
            .as_deref()
            .ok_or_else(|| Fail::from(Error::InvalidInput("dataset has no labels".into())))?;
        copy_out(labels, buf, len)
    })
}

/// # Safety
/// `ds` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nd_dataset_free(ds: *mut NdDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

unsafe fn copy_out<T: Copy>(src: &[T], buf: *mut T, len: usize) -> Result<(), Fail> {
    if buf.is_null() {
        return Err(bad_arg("buffer is null"));
    }
    if len < src.len() {
        return Err(bad_arg(&format!("buffer holds {len} values, {} needed", src.len())));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Trains a model on `ds`.
///
/// # Safety
/// `ds` and `config` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nd_model_fit(
    ds: *const NdDataset,
    config: *const NdConfig,
    out: *mut *mut NdModel,
) -> NdStatus {
    guard(|| {
        let ds = ref_arg(ds, "dataset")?;
        let config = to_model_config(ref_arg(config, "config")?)?;
        let (model, _) = fit(&ds.inner.x, &config)?;
        out_arg(out, NdModel { inner: model })
    })
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_model_n_samples(m: *const NdModel) -> usize {
    m.as_ref().map_or(0, |m| m.inner.n_samples())
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_model_latent_dim(m: *const NdModel) -> usize {
    m.as_ref().map_or(0, |m| m.inner.latent_dim())
}

/// Writes the row-major `n × k` embedding into `buf` (`len` doubles).
///
/// # Safety
/// `m` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nd_model_embedding(m: *const NdModel, buf: *mut f64, len: usize) -> NdStatus {
    guard(|| copy_out(embed(&ref_arg(m, "model")?.inner).as_slice(), buf, len))
}

/// # Safety
/// `m` must be a live handle and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn nd_model_save(m: *const NdModel, path: *const c_char) -> NdStatus {
    guard(|| {
        let m = ref_arg(m, "model")?;
        checkpoint::save(&m.inner, str_arg(path, "path")?)?;
        Ok(())
    })
}

/// # Safety
/// `path` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nd_model_load(path: *const c_char, out: *mut *mut NdModel) -> NdStatus {
    guard(|| {
        let model = checkpoint::load(str_arg(path, "path")?)?;
        out_arg(out, NdModel { inner: model })
    })
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nd_model_free(m: *mut NdModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Spearman correlation between pairwise distances of the dataset and of the
/// row-major `n × k` embedding in `low`. `pair_budget` 0 uses every pair.
///
/// # Safety
/// `ds` must be live, `low` must hold `n * k` doubles with `n` the dataset's
/// row count, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nd_distance_preservation(
    ds: *const NdDataset,
    low: *const f64,
    k: usize,
    pair_budget: usize,
    seed: u64,
    out: *mut f64,
) -> NdStatus {
    guard(|| {
        let ds = ref_arg(ds, "dataset")?;
        if out.is_null() {
            return Err(bad_arg("output pointer is null"));
        }
        let n = ds.inner.n();
        let len = n.checked_mul(k).ok_or_else(|| bad_arg("n * k overflows"))?;
        let low = Matrix::new(n, k, slice_arg(low, len, "low")?.to_vec())?;
        let budget = (pair_budget > 0).then_some(pair_budget);
        *out = distance_preservation(&ds.inner.x, &low, budget, &mut Rng::stream(seed, 2))?;
        Ok(())
    })
}
