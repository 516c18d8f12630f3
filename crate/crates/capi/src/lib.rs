//! C ABI for the groupforge simulator.
//!
//! The interface hands out opaque handles (`GfTable`, `GfReport`) and
//! returns status codes; results cross the boundary as JSON strings or
//! plain scalars. Every function is panic-safe: a Rust panic is reported
//! as `GF_STATUS_INTERNAL` instead of unwinding into the caller.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use groupforge::simulation::{run_monte_carlo, tanking_experiment, MetricsReport, RunConfig};
use groupforge::team::TeamTable;
use groupforge::{Error, FormatKind};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfStatus {
    /// Success.
    GfStatusOk = 0,
    /// A pointer argument was null.
    GfStatusNullArgument = 1,
    /// An argument failed validation (unknown format, bad configuration).
    GfStatusInvalidArgument = 2,
    /// The team data could not be loaded or is inconsistent.
    GfStatusTeamData = 3,
    /// The simulation failed at run time.
    GfStatusRuntime = 4,
    /// An unexpected internal error (caught panic).
    GfStatusInternal = 5,
}

use GfStatus::*;

/// Opaque team-rating table.
pub struct GfTable(TeamTable);

/// Opaque simulation report.
pub struct GfReport(MetricsReport);

fn status_of(err: &Error) -> GfStatus {
    match err {
        Error::Config(_) | Error::InvalidTanking(_) => GfStatusInvalidArgument,
        Error::TeamData(_) | Error::UnknownConfederation(_) | Error::Csv(_) | Error::Io(_) => {
            GfStatusTeamData
        }
        _ => GfStatusRuntime,
    }
}

fn guard(f: impl FnOnce() -> GfStatus) -> GfStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(GfStatusInternal)
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn utf8<'a>(s: *const c_char) -> Option<&'a str> {
    if s.is_null() {
        return None;
    }
    CStr::from_ptr(s).to_str().ok()
}

/// Creates a table with the embedded rating data. Never fails.
/// The handle must be released with `gf_table_free`.
#[no_mangle]
pub extern "C" fn gf_table_default() -> *mut GfTable {
    catch_unwind(|| Box::into_raw(Box::new(GfTable(TeamTable::default_table()))))
        .unwrap_or(ptr::null_mut())
}

/// Loads a table from a CSV file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gf_table_load_csv(
    path: *const c_char,
    out: *mut *mut GfTable,
) -> GfStatus {
    guard(|| {
        if out.is_null() {
            return GfStatusNullArgument;
        }
        let Some(path) = utf8(path) else {
            return GfStatusNullArgument;
        };
        let file = match std::fs::File::open(path) {
            Ok(f) => f,
            Err(_) => return GfStatusTeamData,
        };
        match TeamTable::load(file) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(GfTable(t)));
                GfStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a table handle. Null is ignored.
///
/// # Safety
/// `table` must be null or a pointer returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_table_free(table: *mut GfTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Runs the Monte Carlo experiment.
///
/// `format` is `"official"` or `"imbalanced"`; `threads` 0 selects an
/// automatic worker count. On success `*out` owns the report.
///
/// # Safety
/// `table`, `format` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gf_simulate(
    table: *const GfTable,
    format: *const c_char,
    draws: u64,
    sims: u64,
    seed: u64,
    threads: usize,
    out: *mut *mut GfReport,
) -> GfStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return GfStatusNullArgument;
        }
        let Some(format) = utf8(format) else {
            return GfStatusNullArgument;
        };
        let Some(format) = FormatKind::parse(format) else {
            return GfStatusInvalidArgument;
        };
        let mut cfg = RunConfig::new(format, draws, sims, seed);
        cfg.threads = threads;
        match run_monte_carlo(&(*table).0, &cfg) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(GfReport(report)));
                GfStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a report handle. Null is ignored.
///
/// # Safety
/// `report` must be null or a pointer returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_report_free(report: *mut GfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Serializes a report as a JSON string; release it with `gf_string_free`.
/// Returns null on error.
///
/// # Safety
/// `report` must be a valid report handle.
#[no_mangle]
pub unsafe extern "C" fn gf_report_json(report: *const GfReport) -> *mut c_char {
    catch_unwind(AssertUnwindSafe(|| {
        if report.is_null() {
            return ptr::null_mut();
        }
        match serde_json::to_string(&(*report).0) {
            Ok(json) => CString::new(json).map(CString::into_raw).unwrap_or(ptr::null_mut()),
            Err(_) => ptr::null_mut(),
        }
    }))
    .unwrap_or(ptr::null_mut())
}

/// Average group-stage Elo difference of a report; NaN on a null handle.
///
/// # Safety
/// `report` must be null or a valid report handle.
#[no_mangle]
pub unsafe extern "C" fn gf_report_avg_elo_difference(report: *const GfReport) -> f64 {
    if report.is_null() {
        return f64::NAN;
    }
    (*report).0.aggregates.avg_elo_difference
}

/// Probability that the named team reaches the round of 16; negative on
/// error (unknown team or null argument).
///
/// # Safety
/// `report` must be a valid report handle; `team` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gf_report_round_of_16(
    report: *const GfReport,
    team: *const c_char,
) -> f64 {
    catch_unwind(AssertUnwindSafe(|| {
        if report.is_null() {
            return -1.0;
        }
        let Some(team) = utf8(team) else {
            return -1.0;
        };
        (*report)
            .0
            .per_team
            .iter()
            .find(|r| r.name == team)
            .map_or(-1.0, |r| r.p_round_of_16)
    }))
    .unwrap_or(-1.0)
}

/// Measures the round-of-16 probability change when `team` is moved to
/// `pot` before the draw of the imbalanced format. On success writes the
/// change in percentage points to `delta_pp`.
///
/// # Safety
/// `table`, `team` and `delta_pp` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gf_tanking_delta(
    table: *const GfTable,
    team: *const c_char,
    pot: u8,
    draws: u64,
    sims: u64,
    seed: u64,
    delta_pp: *mut f64,
) -> GfStatus {
    guard(|| {
        if table.is_null() || delta_pp.is_null() {
            return GfStatusNullArgument;
        }
        let Some(team) = utf8(team) else {
            return GfStatusNullArgument;
        };
        let t = &(*table).0;
        let Some(id) = t.find(team) else {
            return GfStatusInvalidArgument;
        };
        let cfg = RunConfig::new(FormatKind::Imbalanced, draws, sims, seed);
        match tanking_experiment(t, id, pot, &cfg) {
            Ok(result) => {
                *delta_pp = result.delta_pp;
                GfStatusOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn gf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
