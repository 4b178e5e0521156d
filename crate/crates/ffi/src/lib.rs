//! C interface to the counter. Programs are opaque handles; every fallible
//! call returns a [`PaspcStatus`] and leaves a message for
//! [`paspc_last_error`]. Counts are returned as decimal strings because they
//! are arbitrary-precision integers.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use paspc::{oracle, solve, AlgorithmChoice, Error, Program, SolveOptions};

/// Status codes; the nonzero values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaspcStatus {
    Ok = 0,
    Error = 1,
    Parse = 2,
    InvalidTd = 3,
    ClassMismatch = 4,
    NullArgument = 6,
    InvalidUtf8 = 7,
    UnknownAtom = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaspcAlgorithm {
    Auto = 0,
    Phc = 1,
    PhcTight = 2,
    Prim = 3,
}

/// A parsed program with its projection atoms.
pub struct PaspcProgram {
    program: Program,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).unwrap_or_default());
}

fn guard(f: impl FnOnce() -> Result<(), (PaspcStatus, String)>) -> PaspcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PaspcStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PaspcStatus::Panic
        }
    }
}

fn status_of(e: &Error) -> PaspcStatus {
    match e {
        Error::Parse(_) => PaspcStatus::Parse,
        Error::InvalidTd(_) => PaspcStatus::InvalidTd,
        Error::ClassMismatch { .. } => PaspcStatus::ClassMismatch,
        _ => PaspcStatus::Error,
    }
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, (PaspcStatus, String)> {
    if s.is_null() {
        return Err((PaspcStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (PaspcStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

fn out_string(out: *mut *mut c_char, value: String) {
    let c = CString::new(value).expect("decimal digits contain no NUL");
    unsafe { *out = c.into_raw() };
}

/// Parses program text. On success `*out` owns a handle to release with
/// [`paspc_program_free`].
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paspc_program_parse(text: *const c_char, out: *mut *mut PaspcProgram) -> PaspcStatus {
    guard(|| {
        if out.is_null() {
            return Err((PaspcStatus::NullArgument, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let source = c_str(text)?;
        let program = paspc::io::parse_program(source).map_err(|d| (PaspcStatus::Parse, d.to_string()))?;
        *out = Box::into_raw(Box::new(PaspcProgram { program }));
        Ok(())
    })
}

/// # Safety
/// `program` must be null or a handle from [`paspc_program_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn paspc_program_free(program: *mut PaspcProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Number of atoms, or 0 for a null handle.
///
/// # Safety
/// `program` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn paspc_program_atom_count(program: *const PaspcProgram) -> usize {
    program.as_ref().map_or(0, |p| p.program.num_atoms())
}

/// Replaces the projection with the `len` named atoms. `len == 0` selects
/// the empty projection.
///
/// # Safety
/// `program` must be a live handle and `names` must point to `len`
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn paspc_program_set_projection(
    program: *mut PaspcProgram,
    names: *const *const c_char,
    len: usize,
) -> PaspcStatus {
    guard(|| {
        let handle = program
            .as_mut()
            .ok_or((PaspcStatus::NullArgument, "null program handle".to_owned()))?;
        if len > 0 && names.is_null() {
            return Err((PaspcStatus::NullArgument, "null name array".into()));
        }
        let mut set = BTreeSet::new();
        for i in 0..len {
            let name = c_str(*names.add(i))?;
            let atom = handle
                .program
                .atom(name)
                .ok_or_else(|| (PaspcStatus::UnknownAtom, format!("atom `{name}` does not occur in the program")))?;
            set.insert(atom);
        }
        handle.program = std::mem::replace(&mut handle.program, Program::empty()).with_projection(set);
        Ok(())
    })
}

/// Projects onto every atom.
///
/// # Safety
/// `program` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn paspc_program_project_all(program: *mut PaspcProgram) -> PaspcStatus {
    guard(|| {
        let handle = program
            .as_mut()
            .ok_or((PaspcStatus::NullArgument, "null program handle".to_owned()))?;
        let all = handle.program.atom_table().atoms().collect();
        handle.program = std::mem::replace(&mut handle.program, Program::empty()).with_projection(all);
        Ok(())
    })
}

/// Computes the projected answer-set count. On success `*out` holds a
/// decimal string to release with [`paspc_string_free`].
///
/// # Safety
/// `program` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paspc_count(
    program: *const PaspcProgram,
    algorithm: PaspcAlgorithm,
    out: *mut *mut c_char,
) -> PaspcStatus {
    guard(|| {
        let handle = program
            .as_ref()
            .ok_or((PaspcStatus::NullArgument, "null program handle".to_owned()))?;
        if out.is_null() {
            return Err((PaspcStatus::NullArgument, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let opts = SolveOptions {
            algorithm: match algorithm {
                PaspcAlgorithm::Auto => AlgorithmChoice::Auto,
                PaspcAlgorithm::Phc => AlgorithmChoice::Phc,
                PaspcAlgorithm::PhcTight => AlgorithmChoice::PhcTight,
                PaspcAlgorithm::Prim => AlgorithmChoice::Prim,
            },
            ..SolveOptions::default()
        };
        let solution = solve(&handle.program, &opts).map_err(|e| (status_of(&e), e.to_string()))?;
        out_string(out, solution.count.to_string());
        Ok(())
    })
}

/// The same count by brute-force enumeration (at most 24 atoms).
///
/// # Safety
/// `program` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn paspc_oracle_count(program: *const PaspcProgram, out: *mut *mut c_char) -> PaspcStatus {
    guard(|| {
        let handle = program
            .as_ref()
            .ok_or((PaspcStatus::NullArgument, "null program handle".to_owned()))?;
        if out.is_null() {
            return Err((PaspcStatus::NullArgument, "null output pointer".into()));
        }
        *out = ptr::null_mut();
        let p = &handle.program;
        let count = oracle::projected_count(p, p.projection()).map_err(|e| (PaspcStatus::Error, e.to_string()))?;
        out_string(out, count.to_string());
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn paspc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn paspc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
