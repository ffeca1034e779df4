//! C ABI for the `rydberg-vqd` simulator.
//!
//! Every fallible function returns an [`RvqdStatus`]; on failure a
//! human-readable message is available from [`rvqd_last_error`] on the same
//! thread. Objects are exposed as opaque handles that the caller releases
//! with the matching `*_free` function. Strings returned by the library are
//! released with [`rvqd_string_free`].
//!
//! Panics never cross the boundary: they are caught and reported as
//! [`RvqdStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rydberg_vqd::bench::SizeSummary;
use rydberg_vqd::circuit::{execute_with_model, ScheduledCircuit};
use rydberg_vqd::gates::GateModel;
use rydberg_vqd::noise::DeviceParams;
use rydberg_vqd::runner::{execute_config, parse_config, BenchRecord};
use rydberg_vqd::state::DensityMatrix;
use rydberg_vqd::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvqdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Usage = 4,
    Unphysical = 5,
    DegenerateState = 6,
    Scheduling = 7,
    Synthesis = 8,
    Io = 9,
    Json = 10,
    OutOfRange = 11,
    Panic = 12,
}

/// Gate operators used by [`rvqd_execute`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvqdGateModel {
    /// Non-unitary device operators.
    Native = 0,
    /// Ideal unitary references.
    Ideal = 1,
}

/// Device timing and noise parameters.
pub struct RvqdParams {
    inner: DeviceParams,
}

/// A scheduled native circuit.
pub struct RvqdCircuit {
    inner: ScheduledCircuit,
}

/// An unnormalized density matrix after execution.
pub struct RvqdState {
    inner: DensityMatrix,
}

/// The records and per-size summaries of a benchmark run.
pub struct RvqdRun {
    records: Vec<BenchRecord>,
    summaries: Vec<SizeSummary>,
}

/// One benchmark datum; see `BenchRecord` in the Rust API.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RvqdRecord {
    pub size: usize,
    pub raw: f64,
    pub corrected: f64,
    pub p_loss: f64,
    pub wall_clock_us: f64,
}

/// Aggregate over all records of one size. The pass flags are
/// `-1` when the benchmark has no pass criterion, otherwise 0 or 1.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RvqdSummary {
    pub size: usize,
    pub mean_raw: f64,
    pub mean_corrected: f64,
    pub sem: f64,
    pub mean_loss: f64,
    pub pass_raw: i32,
    pub pass_corrected: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RvqdStatus {
    match e {
        Error::Config(_) => RvqdStatus::Config,
        Error::Usage(_) => RvqdStatus::Usage,
        Error::Unphysical(_) => RvqdStatus::Unphysical,
        Error::DegenerateState(_) => RvqdStatus::DegenerateState,
        Error::Scheduling(_) => RvqdStatus::Scheduling,
        Error::Synthesis(_) => RvqdStatus::Synthesis,
        Error::Io(_) => RvqdStatus::Io,
        Error::Json(_) => RvqdStatus::Json,
    }
}

struct Failure(RvqdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RvqdStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error and converts panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RvqdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RvqdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            RvqdStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(RvqdStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn rvqd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rvqd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rvqd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- params

/// Default device parameters. Never null.
#[no_mangle]
pub extern "C" fn rvqd_params_default() -> *mut RvqdParams {
    Box::into_raw(Box::new(RvqdParams { inner: DeviceParams::default() }))
}

/// Parameters with no preparation error and no idle decoherence. Never null.
#[no_mangle]
pub extern "C" fn rvqd_params_noiseless() -> *mut RvqdParams {
    Box::into_raw(Box::new(RvqdParams { inner: DeviceParams::noiseless() }))
}

/// Parses a JSON object of device fields; missing fields take defaults.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rvqd_params_from_json(json: *const c_char, out: *mut *mut RvqdParams) -> RvqdStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let inner: DeviceParams = serde_json::from_str(text).map_err(Error::from)?;
        inner.validate()?;
        write_out(out, Box::into_raw(Box::new(RvqdParams { inner })), "out")
    })
}

/// Serializes the parameters as JSON. Returns null if `params` is null;
/// release the result with [`rvqd_string_free`].
///
/// # Safety
/// `params` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_params_to_json(params: *const RvqdParams) -> *mut c_char {
    match params.as_ref() {
        Some(p) => serde_json::to_string(&p.inner).map_or(ptr::null_mut(), into_c_string),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `params` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rvqd_params_free(params: *mut RvqdParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

// --------------------------------------------------------------- circuits

/// Parses and validates a scheduled circuit in its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rvqd_circuit_from_json(json: *const c_char, out: *mut *mut RvqdCircuit) -> RvqdStatus {
    guard(|| {
        let inner = ScheduledCircuit::from_json(str_arg(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(RvqdCircuit { inner })), "out")
    })
}

/// Register size, or 0 if `circuit` is null.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_circuit_n_qubits(circuit: *const RvqdCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.inner.n_qubits)
}

/// Total scheduled duration in microseconds, or 0 if `circuit` is null.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_circuit_wall_clock(circuit: *const RvqdCircuit) -> f64 {
    circuit.as_ref().map_or(0.0, |c| c.inner.wall_clock())
}

/// # Safety
/// `circuit` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rvqd_circuit_free(circuit: *mut RvqdCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

// ------------------------------------------------------------- execution

/// Executes `circuit` on the virtual device and returns the final state.
///
/// # Safety
/// `circuit` and `params` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rvqd_execute(
    circuit: *const RvqdCircuit,
    params: *const RvqdParams,
    model: RvqdGateModel,
    out: *mut *mut RvqdState,
) -> RvqdStatus {
    guard(|| {
        let circuit = handle(circuit, "circuit")?;
        let params = handle(params, "params")?;
        let model = match model {
            RvqdGateModel::Native => GateModel::Native,
            RvqdGateModel::Ideal => GateModel::Ideal,
        };
        let result = execute_with_model(&circuit.inner, &params.inner, model)?;
        write_out(out, Box::into_raw(Box::new(RvqdState { inner: result.rho_final })), "out")
    })
}

/// Register size, or 0 if `state` is null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_state_n_qubits(state: *const RvqdState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.n_qubits())
}

/// Trace of the state (1 minus the loss probability), or NaN if null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_state_trace(state: *const RvqdState) -> f64 {
    state.as_ref().map_or(f64::NAN, |s| s.inner.trace())
}

/// Loss probability `1 - tr(rho)`, or NaN if null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_state_loss(state: *const RvqdState) -> f64 {
    state.as_ref().map_or(f64::NAN, |s| s.inner.loss_probability())
}

/// Reads the matrix element `rho[row][col]`.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn rvqd_state_element(
    state: *const RvqdState,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> RvqdStatus {
    guard(|| {
        let s = &handle(state, "state")?.inner;
        if row >= s.dim() || col >= s.dim() {
            return Err(Failure(
                RvqdStatus::OutOfRange,
                format!("element ({row}, {col}) outside a {0}x{0} matrix", s.dim()),
            ));
        }
        let z = s.get(row, col);
        write_out(re, z.re, "re")?;
        write_out(im, z.im, "im")
    })
}

/// Raw (unnormalized) outcome probabilities of the qubits in `measured`,
/// written to `out` in basis order with `measured[0]` as the most
/// significant bit. `out_len` must be at least `2^n_measured`.
///
/// # Safety
/// `state` must be a live handle, `measured` must point to `n_measured`
/// readable values and `out` to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rvqd_state_probabilities(
    state: *const RvqdState,
    measured: *const usize,
    n_measured: usize,
    out: *mut f64,
    out_len: usize,
) -> RvqdStatus {
    guard(|| {
        let s = &handle(state, "state")?.inner;
        if measured.is_null() {
            return Err(null("measured"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let qubits = std::slice::from_raw_parts(measured, n_measured);
        let dist = s.outcome_distribution(qubits)?;
        let probs = dist.probabilities();
        if out_len < probs.len() {
            return Err(Failure(
                RvqdStatus::OutOfRange,
                format!("out_len {out_len} is smaller than {} outcomes", probs.len()),
            ));
        }
        std::slice::from_raw_parts_mut(out, probs.len()).copy_from_slice(probs);
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rvqd_state_free(state: *mut RvqdState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

// ------------------------------------------------------------ benchmarks

/// Runs a benchmark described by a JSON run configuration (the same schema
/// as the command-line tool; `benchmark` and `master_seed` are required).
/// Nothing is written to disk.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rvqd_run_benchmark(config_json: *const c_char, out: *mut *mut RvqdRun) -> RvqdStatus {
    guard(|| {
        let cfg = parse_config(str_arg(config_json, "config_json")?)?;
        let output = execute_config(&cfg)?;
        let run = RvqdRun { records: output.records, summaries: output.summaries };
        write_out(out, Box::into_raw(Box::new(run)), "out")
    })
}

/// Number of records, or 0 if `run` is null.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_run_record_count(run: *const RvqdRun) -> usize {
    run.as_ref().map_or(0, |r| r.records.len())
}

/// Copies record `index` into `out`.
///
/// # Safety
/// `run` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rvqd_run_record(run: *const RvqdRun, index: usize, out: *mut RvqdRecord) -> RvqdStatus {
    guard(|| {
        let run = handle(run, "run")?;
        let r = run.records.get(index).ok_or_else(|| {
            Failure(RvqdStatus::OutOfRange, format!("record {index} of {}", run.records.len()))
        })?;
        let rec = RvqdRecord {
            size: r.size,
            raw: r.raw,
            corrected: r.corrected,
            p_loss: r.p_loss,
            wall_clock_us: r.wall_clock_us,
        };
        write_out(out, rec, "out")
    })
}

/// Item identifier of record `index` (circuit index, seed string or
/// target and iteration), or null when out of range. Release with
/// [`rvqd_string_free`].
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_run_record_id(run: *const RvqdRun, index: usize) -> *mut c_char {
    run.as_ref()
        .and_then(|r| r.records.get(index))
        .map_or(ptr::null_mut(), |r| into_c_string(r.item_id.clone()))
}

/// Number of per-size summaries, or 0 if `run` is null.
///
/// # Safety
/// `run` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rvqd_run_summary_count(run: *const RvqdRun) -> usize {
    run.as_ref().map_or(0, |r| r.summaries.len())
}

/// Copies summary `index` into `out`.
///
/// # Safety
/// `run` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rvqd_run_summary(run: *const RvqdRun, index: usize, out: *mut RvqdSummary) -> RvqdStatus {
    guard(|| {
        let run = handle(run, "run")?;
        let s = run.summaries.get(index).ok_or_else(|| {
            Failure(RvqdStatus::OutOfRange, format!("summary {index} of {}", run.summaries.len()))
        })?;
        let flag = |p: Option<bool>| p.map_or(-1, i32::from);
        let summary = RvqdSummary {
            size: s.size,
            mean_raw: s.mean_raw,
            mean_corrected: s.mean_corrected,
            sem: s.sem,
            mean_loss: s.mean_loss,
            pass_raw: flag(s.pass_raw),
            pass_corrected: flag(s.pass_corrected),
        };
        write_out(out, summary, "out")
    })
}

/// # Safety
/// `run` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rvqd_run_free(run: *mut RvqdRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}
