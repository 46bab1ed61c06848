//! C interface: opaque spec handles, error codes, and report strings, so the
//! workbench can be driven from other languages. The header is generated by
//! cbindgen at build time into `include/hochschild.h`.

use hochschild::config::{Budget, RunConfig};
use hochschild::pipeline::{run_pipeline, PipelineCommand, PipelineError};
use hochschild::quiver::QuiverSpec;
use libc::{c_char, size_t};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// ABI version; bumped on breaking changes to this interface.
pub const HH_ABI_VERSION: u32 = 1;

pub const HH_OK: i32 = 0;
pub const HH_ERR_INTERNAL: i32 = 1;
pub const HH_ERR_PARSE: i32 = 2;
pub const HH_ERR_BUDGET: i32 = 3;
pub const HH_ERR_VERIFY: i32 = 4;
pub const HH_ERR_NULL_ARGUMENT: i32 = 5;
pub const HH_ERR_UTF8: i32 = 6;
pub const HH_ERR_PANIC: i32 = 7;
pub const HH_ERR_IO: i32 = 8;

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// An opaque, parsed quiver spec.
pub struct HhSpec {
    text: String,
    spec: QuiverSpec,
}

/// Pipeline commands runnable through [`hh_run`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum HhCommand {
    Hh = 0,
    Relative = 1,
    Certificate = 2,
    Jz = 3,
    Han = 4,
    Gldim = 5,
}

/// Run options; obtain defaults from [`hh_options_default`].
#[repr(C)]
#[derive(Clone, Copy)]
pub struct HhOptions {
    /// truncation degree N (homology exact for k <= N-1); at least 2
    pub degree: u32,
    pub cap_nilpotency: u32,
    pub cap_pd: u32,
    /// chain-dimension budget
    pub budget: u64,
    /// bar-level sequence checks inside reports are skipped above this
    pub jz_bar_limit: u64,
}

#[no_mangle]
pub extern "C" fn hh_abi_version() -> u32 {
    HH_ABI_VERSION
}

#[no_mangle]
pub extern "C" fn hh_options_default() -> HhOptions {
    let d = RunConfig::default();
    HhOptions {
        degree: d.degree as u32,
        cap_nilpotency: d.cap_nilpotency as u32,
        cap_pd: d.cap_pd as u32,
        budget: d.budget.max_chain_dim as u64,
        jz_bar_limit: d.jz_bar_limit as u64,
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len` bytes); returns the full message length.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be null (then only the
/// length is returned).
#[no_mangle]
pub unsafe extern "C" fn hh_last_error_message(buf: *mut c_char, len: size_t) -> size_t {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

fn parse_impl(text: &str, out_spec: *mut *mut HhSpec) -> i32 {
    match QuiverSpec::parse(text) {
        Ok(spec) => {
            let handle = Box::new(HhSpec {
                text: text.to_string(),
                spec,
            });
            unsafe {
                *out_spec = Box::into_raw(handle);
            }
            HH_OK
        }
        Err(e) => {
            set_error(e.to_string());
            HH_ERR_PARSE
        }
    }
}

/// Parses a quiver spec document.
///
/// # Safety
/// `toml_text` must be a NUL-terminated string and `out_spec` a valid
/// pointer. On success `*out_spec` owns the handle; free it with
/// [`hh_spec_free`].
#[no_mangle]
pub unsafe extern "C" fn hh_spec_parse(
    toml_text: *const c_char,
    out_spec: *mut *mut HhSpec,
) -> i32 {
    if toml_text.is_null() || out_spec.is_null() {
        set_error("null argument");
        return HH_ERR_NULL_ARGUMENT;
    }
    let text = match CStr::from_ptr(toml_text).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("spec text is not valid UTF-8");
            return HH_ERR_UTF8;
        }
    };
    match catch_unwind(AssertUnwindSafe(|| parse_impl(text, out_spec))) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            HH_ERR_PANIC
        }
    }
}

/// Parses a quiver spec from a file path.
///
/// # Safety
/// As [`hh_spec_parse`]; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hh_spec_parse_file(
    path: *const c_char,
    out_spec: *mut *mut HhSpec,
) -> i32 {
    if path.is_null() || out_spec.is_null() {
        set_error("null argument");
        return HH_ERR_NULL_ARGUMENT;
    }
    let path = match CStr::from_ptr(path).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("path is not valid UTF-8");
            return HH_ERR_UTF8;
        }
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            set_error(format!("cannot read {path}: {e}"));
            return HH_ERR_IO;
        }
    };
    match catch_unwind(AssertUnwindSafe(|| parse_impl(&text, out_spec))) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            HH_ERR_PANIC
        }
    }
}

/// Frees a spec handle. Passing null is a no-op.
///
/// # Safety
/// `spec` must have been returned by a parse function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn hh_spec_free(spec: *mut HhSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Dimension of the compiled algebra, written to `out_dim`.
///
/// # Safety
/// `spec` and `out_dim` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hh_spec_algebra_dim(spec: *const HhSpec, out_dim: *mut size_t) -> i32 {
    if spec.is_null() || out_dim.is_null() {
        set_error("null argument");
        return HH_ERR_NULL_ARGUMENT;
    }
    let handle = &*spec;
    match catch_unwind(AssertUnwindSafe(|| {
        hochschild::algebra::compile_algebra(&handle.spec).map(|c| c.algebra.dim)
    })) {
        Ok(Ok(dim)) => {
            *out_dim = dim;
            HH_OK
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            HH_ERR_PARSE
        }
        Err(_) => {
            set_error("internal panic");
            HH_ERR_PANIC
        }
    }
}

/// Runs a pipeline command and returns the report as a newly allocated
/// string in `out_report` (machine-readable JSON when `machine_format` is
/// nonzero, a human-readable table otherwise). Free it with
/// [`hh_string_free`]. Returns `HH_ERR_VERIFY` when the report was produced
/// but a theorem-level assertion failed; `out_report` is still set then.
///
/// # Safety
/// `spec` must be a live handle, `options` null (take defaults) or valid,
/// and `out_report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hh_run(
    spec: *const HhSpec,
    command: HhCommand,
    options: *const HhOptions,
    machine_format: i32,
    out_report: *mut *mut c_char,
) -> i32 {
    if spec.is_null() || out_report.is_null() {
        set_error("null argument");
        return HH_ERR_NULL_ARGUMENT;
    }
    *out_report = std::ptr::null_mut();
    let handle = &*spec;
    let opts = if options.is_null() {
        hh_options_default()
    } else {
        *options
    };
    let config = RunConfig {
        degree: opts.degree as usize,
        cap_nilpotency: opts.cap_nilpotency as usize,
        cap_pd: opts.cap_pd as usize,
        field_override: None,
        budget: Budget {
            max_chain_dim: opts.budget as usize,
        },
        jz_bar_limit: opts.jz_bar_limit as usize,
    };
    let cmd = match command {
        HhCommand::Hh => PipelineCommand::Hh,
        HhCommand::Relative => PipelineCommand::Relative,
        HhCommand::Certificate => PipelineCommand::Certificate,
        HhCommand::Jz => PipelineCommand::Jz,
        HhCommand::Han => PipelineCommand::Han,
        HhCommand::Gldim => PipelineCommand::Gldim,
    };
    let result = catch_unwind(AssertUnwindSafe(|| {
        run_pipeline(&handle.text, "ffi", cmd, &config)
    }));
    match result {
        Ok(Ok(output)) => {
            let body = if machine_format != 0 {
                output.json
            } else {
                output.text
            };
            match CString::new(body) {
                Ok(s) => {
                    *out_report = s.into_raw();
                    if output.verification_failed {
                        set_error("a theorem-level assertion failed; see the report");
                        HH_ERR_VERIFY
                    } else {
                        HH_OK
                    }
                }
                Err(_) => {
                    set_error("report contains an interior NUL byte");
                    HH_ERR_INTERNAL
                }
            }
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            match e {
                PipelineError::Parse(_) => HH_ERR_PARSE,
                PipelineError::Budget(_) => HH_ERR_BUDGET,
                PipelineError::Internal(_) => HH_ERR_INTERNAL,
            }
        }
        Err(_) => {
            set_error("internal panic");
            HH_ERR_PANIC
        }
    }
}

/// Frees a string returned by [`hh_run`]. Passing null is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn hh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn parse(text: &str) -> *mut HhSpec {
        let c = CString::new(text).unwrap();
        let mut out: *mut HhSpec = std::ptr::null_mut();
        let code = unsafe { hh_spec_parse(c.as_ptr(), &mut out) };
        assert_eq!(code, HH_OK);
        assert!(!out.is_null());
        out
    }

    #[test]
    fn parse_run_free_roundtrip() {
        let spec = parse(hochschild::samples::A2);
        let mut dim: size_t = 0;
        assert_eq!(unsafe { hh_spec_algebra_dim(spec, &mut dim) }, HH_OK);
        assert_eq!(dim, 3);
        let mut opts = hh_options_default();
        opts.degree = 4;
        let mut report: *mut c_char = std::ptr::null_mut();
        let code = unsafe { hh_run(spec, HhCommand::Hh, &opts, 1, &mut report) };
        assert_eq!(code, HH_OK);
        assert!(!report.is_null());
        let json = unsafe { CStr::from_ptr(report) }.to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(v["command"], "hh");
        assert_eq!(v["report"]["via_resolution"][0], 2);
        unsafe {
            hh_string_free(report);
            hh_spec_free(spec);
        }
    }

    #[test]
    fn all_commands_produce_reports() {
        let spec = parse(hochschild::samples::A2);
        let mut opts = hh_options_default();
        opts.degree = 4;
        for cmd in [
            HhCommand::Hh,
            HhCommand::Relative,
            HhCommand::Certificate,
            HhCommand::Jz,
            HhCommand::Han,
            HhCommand::Gldim,
        ] {
            let mut report: *mut c_char = std::ptr::null_mut();
            let code = unsafe { hh_run(spec, cmd, &opts, 1, &mut report) };
            assert_eq!(code, HH_OK);
            unsafe { hh_string_free(report) };
        }
        unsafe { hh_spec_free(spec) };
    }

    #[test]
    fn parse_error_sets_message() {
        let c = CString::new("vertices = [").unwrap();
        let mut out: *mut HhSpec = std::ptr::null_mut();
        let code = unsafe { hh_spec_parse(c.as_ptr(), &mut out) };
        assert_eq!(code, HH_ERR_PARSE);
        assert!(out.is_null());
        let mut buf = vec![0 as c_char; 256];
        let n = unsafe { hh_last_error_message(buf.as_mut_ptr(), buf.len()) };
        assert!(n > 0);
    }

    #[test]
    fn null_arguments_rejected() {
        let mut out: *mut HhSpec = std::ptr::null_mut();
        assert_eq!(
            unsafe { hh_spec_parse(std::ptr::null(), &mut out) },
            HH_ERR_NULL_ARGUMENT
        );
        let spec = parse(hochschild::samples::A2);
        assert_eq!(
            unsafe { hh_run(spec, HhCommand::Hh, std::ptr::null(), 1, std::ptr::null_mut()) },
            HH_ERR_NULL_ARGUMENT
        );
        unsafe { hh_spec_free(spec) };
        unsafe { hh_spec_free(std::ptr::null_mut()) };
        unsafe { hh_string_free(std::ptr::null_mut()) };
    }

    #[test]
    fn budget_error_code() {
        let spec = parse(hochschild::samples::A3_REL);
        let mut opts = hh_options_default();
        opts.degree = 6;
        opts.budget = 10;
        let mut report: *mut c_char = std::ptr::null_mut();
        // the sequence command needs the full bar complex, which blows the
        // tiny budget; the relative complex alone would fit
        let code = unsafe { hh_run(spec, HhCommand::Jz, &opts, 1, &mut report) };
        assert_eq!(code, HH_ERR_BUDGET);
        unsafe { hh_spec_free(spec) };
    }

    #[test]
    fn header_matches_exports() {
        let header = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/include/hochschild.h"
        ))
        .expect("header generated at build time");
        for symbol in [
            "hh_abi_version",
            "hh_options_default",
            "hh_last_error_message",
            "hh_spec_parse",
            "hh_spec_parse_file",
            "hh_spec_free",
            "hh_spec_algebra_dim",
            "hh_run",
            "hh_string_free",
        ] {
            assert!(header.contains(symbol), "missing {symbol}");
        }
        assert!(header.contains("HH_ABI_VERSION"));
    }
}
